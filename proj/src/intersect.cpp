#include "renewal/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "renewal/summation.hpp"

namespace renewal {

namespace {

// Decay exponent contributed by one marginal to P(n in rho).
double mass_exponent(const GapLaw& law) {
    if (!law.proper()) return 1.0 + law.alpha();      // u_n ~ f_n / p_inf^2
    return 1.0 - std::min(law.alpha(), 1.0);          // Table 1
}

// Divergence of sum phi-power series sum (log n)^s / n: diverges iff s >= -1.
bool log_series_diverges(double s) { return s >= -1.0; }

// Partial-sum growth heuristic for sum_{n} t_n with t_n ~ (log n)^s / n:
// fit the octave increments d_j = S(2^{j+1}) - S(2^j) ~ c j^s and flag
// divergence when the fitted s is above -1.
bool heuristic_diverges(const std::vector<double>& octave_increments) {
    // least squares of log d_j on log j
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t j = 4; j < octave_increments.size(); ++j) {
        if (octave_increments[j] <= 0.0) continue;
        const double x = std::log(static_cast<double>(j));
        const double y = std::log(octave_increments[j]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 3) return true;  // too little data: err on the recurrent side
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return slope >= -1.02;
}

}  // namespace

Classification classify(const GapLaw& tau_in, const GapLaw& sigma_in) {
    Classification cls;
    cls.swapped = tau_in.alpha() > sigma_in.alpha();
    const GapLaw& tau = cls.swapped ? sigma_in : tau_in;
    const GapLaw& sigma = cls.swapped ? tau_in : sigma_in;

    const double alpha = tau.alpha();
    const double alpha_t = sigma.alpha();
    cls.theta_star = mass_exponent(tau) + mass_exponent(sigma);

    if (!tau.proper() || !sigma.proper()) {
        cls.recurrent = false;
    } else if (cls.theta_star < 1.0) {
        cls.recurrent = true;
    } else if (cls.theta_star > 1.0) {
        cls.recurrent = false;
    } else {
        // theta* == 1 boundary: recurrent iff sum 1/(n psi*(n)) diverges.
        if (alpha > 0.0 && alpha < 1.0 && alpha_t > 0.0 && alpha_t < 1.0) {
            // sum 1/(n phi phi~): log exponent -(a + a~)
            cls.recurrent = log_series_diverges(-(tau.phi().a() + sigma.phi().a()));
        } else if (alpha == 0.0 && alpha_t >= 1.0) {
            // sum phi/(n r^2 M~_n): r_n ~ (log)^{a+1}, M~_n the truncated mean
            const double a = tau.phi().a();
            double mean_exp;
            bool clean = true;
            if (sigma.mean_finite()) {
                mean_exp = 0.0;
            } else if (sigma.phi().a() > -1.0) {
                mean_exp = sigma.phi().a() + 1.0;
            } else {
                // mu~_n grows like log log n: no clean log-power exponent
                clean = false;
                mean_exp = 0.0;
            }
            if (clean) {
                cls.recurrent = log_series_diverges(a - 2.0 * (a + 1.0) - mean_exp);
            } else {
                cls.heuristic = true;
                const std::size_t top = std::min<std::size_t>(
                    std::min(tau.horizon(), sigma.horizon()), std::size_t{1} << 18);
                std::vector<double> inc;
                StableSum<double> s;
                std::size_t next = 2;
                double prev = 0.0;
                for (std::size_t n = 1; n <= top; ++n) {
                    const double rn = tau.tail(n);
                    const double mt = sigma.truncated_mean(std::min(n, sigma.horizon()));
                    // phi(n)/(n r_n^2 mu~_n) with phi(n) = f_n n (alpha = 0)
                    s.add(tau.pmf(n) / (rn * rn * mt));
                    if (n == next) {
                        inc.push_back(s.value() - prev);
                        prev = s.value();
                        next *= 2;
                    }
                }
                cls.recurrent = heuristic_diverges(inc);
            }
        } else {
            // no closed form pinned for this combination
            cls.heuristic = true;
            cls.recurrent = true;
        }
    }

    if (cls.recurrent) {
        cls.alpha_star = alpha >= 1.0 ? alpha : 1.0 - cls.theta_star;
    } else {
        cls.alpha_star = cls.theta_star - 1.0;
    }
    return cls;
}

double IntersectionModel::psi_star(std::size_t n) const {
    return w[n] * std::pow(static_cast<double>(n), cls.theta_star);
}

double IntersectionModel::rho1_mean() const {
    if (!cls.recurrent || cls.alpha_star <= 1.0)
        return std::numeric_limits<double>::infinity();
    // E[rho_1] = sum_{j>=0} G_j; continue G past the table as a power law
    StableSum<double> m;
    const std::size_t n = n_max();
    for (std::size_t j = 0; j < n; ++j) m.add(G[j]);
    const double a = cls.alpha_star;
    if (std::isfinite(a) && G[n] > 0.0)
        m.add(G[n] * (static_cast<double>(n) / (a - 1.0) + 0.5));
    else
        m.add(G[n]);
    return m.value();
}

IntersectionModel build(const GapLaw& tau_law, const MassFunction& tau_mf,
                        const GapLaw& sigma_law, const MassFunction& sigma_mf,
                        std::size_t n_max, ConvMethod invert_method) {
    if (tau_mf.n_max() < n_max || sigma_mf.n_max() < n_max)
        throw std::out_of_range("intersect::build: mass functions shorter than n_max");

    IntersectionModel model;
    model.cls = classify(tau_law, sigma_law);
    const MassFunction& mf_a = model.cls.swapped ? sigma_mf : tau_mf;
    const MassFunction& mf_b = model.cls.swapped ? tau_mf : sigma_mf;
    model.tau = std::make_shared<GapLaw>(model.cls.swapped ? sigma_law : tau_law);
    model.sigma = std::make_shared<GapLaw>(model.cls.swapped ? tau_law : sigma_law);

    const bool extended = mf_a.u_ext && mf_b.u_ext;

    model.w.resize(n_max + 1);
    if (extended) {
        const auto& ua = *mf_a.u_ext;
        const auto& ub = *mf_b.u_ext;
        std::vector<long double> w_ext(n_max + 1);
        for (std::size_t i = 0; i <= n_max; ++i) w_ext[i] = ua[i] * ub[i];
        for (std::size_t i = 0; i <= n_max; ++i)
            model.w[i] = static_cast<double>(w_ext[i]);
        Inversion inv = invert_mass_ext(w_ext, invert_method);
        model.g = std::move(inv.g);
        model.G = std::move(inv.G);
        model.clipped = inv.clipped;
    } else {
        for (std::size_t i = 0; i <= n_max; ++i)
            model.w[i] = mf_a.u[i] * mf_b.u[i];
        Inversion inv = invert_mass(model.w, invert_method);
        model.g = std::move(inv.g);
        model.G = std::move(inv.G);
        model.clipped = inv.clipped;
    }

    model.u_star.resize(n_max + 1);
    model.psi_prefix.resize(n_max + 1);
    StableSum<double> us, pp;
    us.add(model.w[0]);
    model.u_star[0] = us.value();
    model.psi_prefix[0] = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        us.add(model.w[n]);
        model.u_star[n] = us.value();
        pp.add(model.w[n] * std::pow(static_cast<double>(n), model.cls.theta_star - 1.0));
        model.psi_prefix[n] = pp.value();
    }

    model.v.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n)
        model.v[n] = model.G[n] * model.G[n] * model.w[n];

    if (model.cls.recurrent) {
        model.e_abs_rho = std::numeric_limits<double>::infinity();
    } else {
        StableSum<double> s;
        for (std::size_t n = 0; n <= n_max; ++n) s.add(model.w[n]);
        if (model.cls.theta_star > 1.0)
            s.add(model.w[n_max] * static_cast<double>(n_max) /
                  (model.cls.theta_star - 1.0));
        model.e_abs_rho = s.value();
    }
    return model;
}

}  // namespace renewal
