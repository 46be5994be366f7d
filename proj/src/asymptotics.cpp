#include "renewal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "renewal/summation.hpp"

namespace renewal {

namespace {

// mu~_n with the finite mean substituted when it exists (remark after the
// tail theorem: "may be replaced by mu or mu~ if that mean is finite").
double mean_or_truncated(const GapLaw& law, std::size_t n) {
    if (law.mean_finite()) return law.mean();
    return law.truncated_mean(std::min(n, law.horizon()));
}

}  // namespace

double renewal_mass_asym(const GapLaw& law, std::size_t n) {
    if (!law.proper()) {
        const double p = law.defect();
        return law.pmf(n) / (p * p);
    }
    if (law.mean_finite()) return 1.0 / law.mean();
    const double a = law.alpha();
    if (a == 1.0) return 1.0 / law.truncated_mean(n);
    if (a > 0.0 && a < 1.0) {
        // (a sin(pi a)/pi) n^{a-1} / phi(n) with phi read off the table:
        // phi(n) = f_n n^{1+a}, so the value is (a sin(pi a)/pi) / (n^2 f_n).
        const double c = a * std::sin(M_PI * a) / M_PI;
        return c / (static_cast<double>(n) * static_cast<double>(n) * law.pmf(n));
    }
    // alpha = 0: f_n / r_n^2
    const double r = law.tail(n);
    return law.pmf(n) / (r * r);
}

double rho_tail_asym(const IntersectionModel& model, std::size_t n) {
    if (!model.cls.recurrent)
        throw std::domain_error(
            "rho_tail_asym: transient model; use rho_pmf_asym transient branch");
    const double as = model.cls.alpha_star;
    if (as >= 1.0) {
        const double r_tau = model.tau->tail(n);
        const double r_sigma = model.sigma->tail(n);
        return mean_or_truncated(*model.sigma, n) * r_tau +
               mean_or_truncated(*model.tau, n) * r_sigma;
    }
    if (as > 0.0) {
        return std::sin(M_PI * as) / M_PI / model.psi_star(n) *
               std::pow(static_cast<double>(n), -as);
    }
    return 1.0 / model.psi_over_j_prefix(n);
}

double rho_tail_asym_frenk(const IntersectionModel& model, std::size_t n) {
    const double a = model.tau->alpha();
    const double at = model.sigma->alpha();
    if (!(model.cls.recurrent && a > 1.0))
        throw std::domain_error("rho_tail_asym_frenk: needs recurrent model, alpha > 1");
    return model.sigma->mean() * model.tau->tail(n) +
           model.tau->mean() * (a - 1.0) / (at - 1.0) * model.sigma->tail(n);
}

double rho_pmf_asym(const IntersectionModel& model, std::size_t n) {
    if (!model.cls.recurrent)
        return model.w[n] / (model.e_abs_rho * model.e_abs_rho);
    const double as = model.cls.alpha_star;
    if (as >= 1.0) {
        return mean_or_truncated(*model.sigma, n) * model.tau->pmf(n) +
               mean_or_truncated(*model.tau, n) * model.sigma->pmf(n);
    }
    if (as > 0.0) {
        return as * std::sin(M_PI * as) / M_PI / model.psi_star(n) *
               std::pow(static_cast<double>(n), -(1.0 + as));
    }
    const double s = model.psi_over_j_prefix(n);
    return model.psi_star(n) / static_cast<double>(n) / (s * s);
}

double special_constant(SpecialCase which, double alpha, double alpha_tilde) {
    const bool in_unit = alpha > 0.0 && alpha < 1.0 && alpha_tilde > 0.0 &&
                         alpha_tilde < 1.0;
    switch (which) {
        case SpecialCase::c_fractional: {
            if (!in_unit || !(alpha + alpha_tilde > 1.0))
                throw std::domain_error(
                    "special_constant: c requires alpha,alpha~ in (0,1), sum > 1");
            const double as = alpha + alpha_tilde - 1.0;
            return M_PI * as * std::sin(M_PI * as) /
                   (alpha * alpha_tilde * std::sin(M_PI * alpha) *
                    std::sin(M_PI * alpha_tilde));
        }
        case SpecialCase::c_prime_boundary: {
            if (!in_unit || std::fabs(alpha + alpha_tilde - 1.0) > 1e-12)
                throw std::domain_error(
                    "special_constant: c' requires alpha,alpha~ in (0,1), sum = 1");
            return alpha * alpha_tilde * std::sin(M_PI * alpha) *
                   std::sin(M_PI * alpha_tilde) / (M_PI * M_PI);
        }
    }
    throw std::invalid_argument("special_constant: unknown case");
}

FiniteMeanCorrection finite_mean_correction(const GapLaw& law, std::size_t n) {
    if (!law.mean_finite())
        throw std::domain_error("finite_mean_correction: law has infinite mean");
    const double mu = law.mean();
    const double r_n = law.tail(n);
    // sum_{k>n} r_k = mu - mu_n - r_n
    const double tail_sum = mu - law.truncated_mean(n) - r_n;
    FiniteMeanCorrection out;
    out.rogozin = tail_sum / (mu * mu);
    const double a = law.alpha();
    out.frenk = std::isfinite(a) && a > 1.0
                    ? static_cast<double>(n) * r_n / (mu * mu * (a - 1.0))
                    : 0.0;
    return out;
}

DeHaanFit de_haan_slope(const MassFunction& mf,
                        const std::vector<double>& lambda_grid,
                        const std::vector<std::size_t>& n_grid) {
    if (lambda_grid.size() < 2)
        throw std::invalid_argument("de_haan_slope: need at least two lambdas");
    DeHaanFit fit;
    bool any_nonzero = false;
    for (std::size_t n : n_grid) {
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (double lam : lambda_grid) {
            const std::size_t m = static_cast<std::size_t>(lam * static_cast<double>(n));
            if (m >= mf.u.size())
                throw std::out_of_range("de_haan_slope: lambda*n exceeds the table");
            const double x = std::log(lam);
            const double y = mf.u[m] - mf.u[n];
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
            if (y != 0.0) any_nonzero = true;
        }
        DeHaanPoint p;
        p.n = n;
        p.ell_hat = sxy / sxx;
        p.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
        fit.points.push_back(p);
    }
    fit.degenerate = !any_nonzero;
    return fit;
}

CouplingBound coupling_bound_check(const MassFunction& mf,
                                   const IntersectionModel& model,
                                   const std::vector<std::size_t>& n_grid) {
    CouplingBound out;
    for (std::size_t n : n_grid) {
        const double num = increment(mf, n);
        const double den = mf.u[n] * model.G[n];
        if (den <= 0.0) continue;
        out.ratios.emplace_back(n, num / den);
    }
    if (out.ratios.empty()) return out;
    const std::size_t half = out.ratios.size() / 2;
    for (std::size_t i = 0; i < out.ratios.size(); ++i) {
        const double v = out.ratios[i].second;
        out.c1_hat = std::max(out.c1_hat, v);
        if (i < half || out.ratios.size() == 1)
            out.lower_half = std::max(out.lower_half, v);
        if (i >= half) out.upper_half = std::max(out.upper_half, v);
    }
    out.stable = out.upper_half <= 2.0 * out.lower_half;
    return out;
}

StretchCheck stretch_check(const IntersectionModel& model, std::size_t n,
                           std::size_t k, double delta,
                           std::optional<double> eps_opt) {
    if (n + k > model.n_max() || k > n)
        throw std::out_of_range("stretch_check: n+k outside the computed law");
    const double eps = eps_opt.value_or(delta * delta * delta);
    StretchCheck out;
    out.k_in_range = static_cast<double>(k) <= eps * static_cast<double>(n);
    const double gn = model.g[n];
    const double vn = model.v[n];
    out.slack_lower = gn - ((1.0 - delta) * model.g[n - k] - delta * vn);
    out.slack_upper = ((1.0 + delta) * model.g[n + k] + delta * vn) - gn;
    out.holds = out.slack_lower >= 0.0 && out.slack_upper >= 0.0;
    return out;
}

TiedownRatio tiedown_ratio(const GapLaw& law, const MassFunction& mf,
                           std::size_t n) {
    if (mf.n_max() < 2 * n)
        throw std::out_of_range("tiedown_ratio: mass function shorter than 2n");
    const double u2n = mf.u[2 * n];
    if (u2n <= 0.0) throw std::domain_error("tiedown_ratio: P(2n in tau) = 0");
    TiedownRatio out;
    for (std::size_t m = 0; m <= n; ++m) {
        const double denom = law.tail(n - m);  // P(tau_1 > n-m)
        if (denom <= 0.0) continue;            // impossible conditioning event
        StableSum<double> s;
        for (std::size_t j = 1; j <= n; ++j)
            s.add(law.pmf(j + n - m) * mf.u[n - j]);
        const double ratio = s.value() / denom / u2n;
        if (ratio > out.sup_ratio) {
            out.sup_ratio = ratio;
            out.arg_m = m;
        }
    }
    return out;
}

// --- comparison harness -----------------------------------------------------

void AsymptoticReport::finish() {
    if (rows.empty()) return;
    final_ratio = rows.back().ratio;
    trend_ok = std::fabs(rows.back().ratio - 1.0) < std::fabs(rows.front().ratio - 1.0);
}

std::vector<std::size_t> geometric_grid(std::size_t start, std::size_t stop,
                                        double ratio) {
    if (start < 1 || stop < start || ratio <= 1.0)
        throw std::invalid_argument("geometric_grid: bad parameters");
    std::vector<std::size_t> g;
    double x = static_cast<double>(start);
    std::size_t last = 0;
    while (true) {
        std::size_t n = static_cast<std::size_t>(std::llround(x));
        if (n <= last) n = last + 1;
        if (n > stop) break;
        g.push_back(n);
        last = n;
        x *= ratio;
    }
    if (g.empty() || g.back() != stop) g.push_back(stop);
    return g;
}

AsymptoticReport compare_mass(const GapLaw& law, const MassFunction& mf,
                              const std::vector<std::size_t>& grid,
                              const std::string& case_id) {
    AsymptoticReport rep;
    rep.case_id = case_id;
    for (std::size_t n : grid) {
        if (n >= mf.u.size()) throw std::out_of_range("compare_mass: grid beyond table");
        const double exact = mf.u[n];
        const double asym = renewal_mass_asym(law, n);
        rep.rows.push_back({n, exact, asym, exact / asym});
    }
    rep.finish();
    return rep;
}

AsymptoticReport compare_rho_tail(const IntersectionModel& model,
                                  const std::vector<std::size_t>& grid,
                                  const std::string& case_id) {
    AsymptoticReport rep;
    rep.case_id = case_id;
    for (std::size_t n : grid) {
        const double exact = model.G[n];
        const double asym = rho_tail_asym(model, n);
        rep.rows.push_back({n, exact, asym, exact / asym});
    }
    rep.finish();
    return rep;
}

AsymptoticReport compare_rho_pmf(const IntersectionModel& model,
                                 const std::vector<std::size_t>& grid,
                                 const std::string& case_id) {
    AsymptoticReport rep;
    rep.case_id = case_id;
    for (std::size_t n : grid) {
        const double exact = model.g[n];
        const double asym = rho_pmf_asym(model, n);
        rep.rows.push_back({n, exact, asym, exact / asym});
    }
    rep.finish();
    return rep;
}

}  // namespace renewal
