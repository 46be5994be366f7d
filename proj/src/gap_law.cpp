#include "renewal/gap_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "renewal/summation.hpp"

namespace renewal {

namespace detail {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double rel_tol,
               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * rel_tol * std::fabs(left + right))
        return left + right + delta / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, rel_tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, rel_tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, rel_tol, 48);
}

double em_tail_sum(const SlowVary& phi, double s, double N) {
    const double L = std::log(N);
    double integral;
    if (s > 1.0) {
        // x = N e^t: integral_N^inf phi(x) x^{-s} dx = N^{1-s} int_0^inf e^{-(s-1)t} phi(N e^t) dt
        const double decay = s - 1.0;
        double T = 45.0 / decay;
        if (phi.a() > 0.0)  // polynomial growth of the log factor
            T = (45.0 + phi.a() * std::log1p(T / L)) / decay + 10.0;
        auto h = [&](double t) { return std::exp(-decay * t) * phi.at_log(L + t); };
        integral = std::pow(N, 1.0 - s) * integrate(h, 0.0, T, 1e-13);
    } else if (s == 1.0 && phi.a() < -1.0) {
        // integral_N^inf phi(x)/x dx; closed form up to the x/(x+e) mismatch,
        // which is integrated numerically.
        const double a = phi.a();
        const double base = std::log(N + 2.718281828459045235);
        integral = phi.c() * std::pow(base, a + 1.0) / (-a - 1.0);
        // the closed form integrates phi(x)/(x+e); 1/x = 1/(x+e) + e/(x(x+e)),
        // and the second piece is integrated numerically:
        // integral of phi(x) e/(x(x+e)) dx = int phi(N e^t) e/(N e^t + e) dt
        auto corr = [&](double t) {
            const double x = N * std::exp(t);
            return phi.at_log(L + t) * 2.718281828459045235 / (x + 2.718281828459045235);
        };
        integral += integrate(corr, 0.0, 60.0, 1e-12);
    } else {
        throw std::domain_error("em_tail_sum: tail not summable");
    }
    const double g_n = phi(N) * std::pow(N, -s);
    const double gp_n = phi.derivative(N) * std::pow(N, -s) -
                        s * phi(N) * std::pow(N, -s - 1.0);
    return integral - 0.5 * g_n - gp_n / 12.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------

void GapLaw::check_support() {
    std::size_t g = 0;
    for (std::size_t k = 1; k < f_.size(); ++k)
        if (f_[k] > 0.0L) g = std::gcd(g, k);
    if (g != 1)
        throw std::invalid_argument("GapLaw: support gcd must be 1 (aperiodicity)");
}

void GapLaw::finish_tables(long double r_h_hint) {
    const std::size_t h = horizon();
    // r_h = 1 - sum f (mass past the table plus the defect). The subtraction
    // loses relative accuracy when the tail is many digits below 1, so kinds
    // with an analytic tail pass the value in directly.
    long double r_h = r_h_hint;
    if (r_h < 0.0L) {
        StableSum<long double> total;
        for (std::size_t k = 1; k <= h; ++k) total.add(f_[k]);
        r_h = 1.0L - total.value();
    }
    if (r_h < 0.0L) r_h = 0.0L;
    if (r_h < static_cast<long double>(defect_)) r_h = defect_;

    r_.assign(h + 1, 0.0L);
    r_[h] = r_h;
    StableSum<long double> back(r_h);
    for (std::size_t n = h; n-- > 0;) {
        back.add(f_[n + 1]);
        r_[n] = back.value();
    }
    r_[0] = 1.0L;

    mu_.assign(h + 1, 0.0L);
    StableSum<long double> acc;
    for (std::size_t n = 1; n <= h; ++n) {
        acc.add(r_[n - 1]);
        mu_[n] = acc.value();
    }
}

double GapLaw::tail_continuation(double x) const {
    const std::size_t h = horizon();
    // r_ may not exist yet when this is used to seed the table build
    const double r_h = r_.empty() ? 0.0 : static_cast<double>(r_[h]);
    switch (kind_) {
        case LawKind::geometric:
            return std::exp(static_cast<double>(x) * std::log1p(-geom_p_));
        case LawKind::deterministic:
            return 0.0;
        case LawKind::ssrw: {
            // r_n = C(2n,n) 4^{-n} = (pi n)^{-1/2} (1 - 1/(8n) + 1/(128 n^2) + 5/(1024 n^3) - ...)
            const double inv = 1.0 / x;
            const double series =
                1.0 - 0.125 * inv + (1.0 / 128.0) * inv * inv +
                (5.0 / 1024.0) * inv * inv * inv;
            return series / std::sqrt(M_PI * x);
        }
        case LawKind::reg_varying: {
            if (alpha_ == 0.0) {
                // r decays like (log x)^{a+1}
                const double a1 = phi_.a() + 1.0;
                const double num = std::pow(std::log(x) , a1);
                const double den = std::pow(std::log(static_cast<double>(h)), a1);
                return defect_ + (r_h - defect_) * num / den;
            }
            const double shape = phi_.at_log(std::log(x)) * std::pow(x / h, -alpha_) /
                                 phi_(static_cast<double>(h));
            return defect_ + (r_h - defect_) * shape;
        }
        case LawKind::table:
            return defect_ + (r_h - defect_);
    }
    return defect_;
}

double GapLaw::tail(std::size_t n) const {
    if (n < r_.size()) return static_cast<double>(r_[n]);
    return tail_continuation(static_cast<double>(n));
}

double GapLaw::pmf(std::size_t k) const {
    if (k == 0) return 0.0;
    if (k < f_.size()) return static_cast<double>(f_[k]);
    return tail(k - 1) - tail(k);
}

double GapLaw::truncated_mean(std::size_t n) const {
    if (n < 1 || n >= mu_.size())
        throw std::out_of_range("truncated_mean: n outside 1..horizon");
    return static_cast<double>(mu_[n]);
}

double GapLaw::phi_local(std::size_t n) const {
    if (!std::isfinite(alpha_))
        throw std::domain_error("phi_local: law is not regularly varying");
    return pmf(n) * std::pow(static_cast<double>(n), 1.0 + alpha_);
}

std::uint64_t GapLaw::inverse_tail(double t) const {
    // smallest x >= 1 with tail(x) < t
    const std::size_t h = horizon();
    const long double tl = t;
    if (tl > r_[h]) {
        // binary search the table: r_ is nonincreasing
        std::size_t lo = 0, hi = h;  // r_[lo] >= t > ... find first r < t
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (r_[mid] < tl) hi = mid; else lo = mid + 1;
        }
        return lo;
    }
    if (t <= defect_) return std::numeric_limits<std::uint64_t>::max();
    // continuation: bisect on integers past the horizon
    std::uint64_t lo = h, hi = h;
    std::uint64_t step = 1;
    while (tail_continuation(static_cast<double>(hi)) >= t) {
        if (hi > (std::uint64_t{1} << 62)) return std::numeric_limits<std::uint64_t>::max();
        lo = hi;
        hi += step;
        step *= 2;
    }
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (tail_continuation(static_cast<double>(mid)) < t) hi = mid; else lo = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------

GapLaw GapLaw::reg_varying(double alpha, SlowVary phi, std::size_t horizon,
                           double defect) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("reg_varying: alpha must be >= 0");
    if (!(defect >= 0.0 && defect < 1.0))
        throw std::invalid_argument("reg_varying: defect must be in [0,1)");
    if (horizon < 16)
        throw std::invalid_argument("reg_varying: horizon must be >= 16");
    if (alpha == 0.0 && phi.a() >= -1.0)
        throw std::domain_error("reg_varying: tail not summable");

    GapLaw law;
    law.kind_ = LawKind::reg_varying;
    law.alpha_ = alpha;
    law.phi_ = phi;
    law.defect_ = defect;

    law.f_.assign(horizon + 1, 0.0L);
    StableSum<long double> table_sum;
    for (std::size_t k = 1; k <= horizon; ++k) {
        // constant phi evaluates exactly; powl keeps the per-term rounding
        // below the mass-consistency budget
        const long double v = static_cast<long double>(phi(static_cast<double>(k))) *
                              powl(static_cast<long double>(k),
                                   -(1.0L + static_cast<long double>(alpha)));
        law.f_[k] = v;
        table_sum.add(v);
    }
    const long double tail_mass =
        detail::em_tail_sum(phi, 1.0 + alpha, static_cast<double>(horizon));
    const long double c =
        (1.0L - static_cast<long double>(defect)) / (table_sum.value() + tail_mass);
    for (std::size_t k = 1; k <= horizon; ++k) law.f_[k] *= c;
    law.scale_ = static_cast<double>(c);

    law.check_support();
    law.finish_tables(static_cast<long double>(defect) + c * tail_mass);

    // mean: defective or alpha <= 1 (non-summable k f_k) means +inf
    if (defect == 0.0 &&
        (alpha > 1.0 || (alpha == 1.0 && phi.a() < -1.0))) {
        StableSum<long double> m;
        for (std::size_t n = 0; n < horizon; ++n) m.add(law.r_[n]);
        // sum_{j>=h} r_j with r continued analytically: r_j ~ C phi(j) j^{-alpha}
        const long double r_h = law.r_[horizon];
        const long double ref = phi(static_cast<double>(horizon)) *
                                std::pow(static_cast<double>(horizon), -alpha);
        const long double coef = r_h / ref;
        m.add(coef *
              (static_cast<long double>(
                   detail::em_tail_sum(phi, alpha, static_cast<double>(horizon))) +
               ref));  // include the j = horizon term
        law.mean_ = static_cast<double>(m.value());
    }

    // tail-shape sanity over the upper half of the table
    for (std::size_t n = horizon / 2; n <= horizon; n += std::max<std::size_t>(1, horizon / 16)) {
        const double ideal = static_cast<double>(c) * phi(static_cast<double>(n)) *
                             std::pow(static_cast<double>(n), -(1.0 + alpha));
        const double ratio = static_cast<double>(law.f_[n]) / ideal;
        if (!(ratio > 0.5 && ratio < 2.0))
            throw std::logic_error("reg_varying: tail shape check failed");
    }
    return law;
}

GapLaw GapLaw::ssrw(std::size_t horizon) {
    if (horizon < 2) throw std::invalid_argument("ssrw: horizon must be >= 2");
    GapLaw law;
    law.kind_ = LawKind::ssrw;
    law.alpha_ = 0.5;
    law.phi_ = SlowVary::constant(0.5 / std::sqrt(M_PI));
    law.f_.assign(horizon + 1, 0.0L);
    // f_{k+1} = f_k (2k-1) / (2k+2), f_1 = 1/2; computed in long double
    long double f = 0.5L;
    for (std::size_t k = 1; k <= horizon; ++k) {
        law.f_[k] = f;
        f *= static_cast<long double>(2 * k - 1) / static_cast<long double>(2 * k + 2);
    }
    // r_h = C(2h,h) 4^{-h}: exact product below the series' validity range
    long double r_h;
    if (horizon < 64) {
        long double p = 1.0L;
        for (std::size_t k = 1; k <= horizon; ++k)
            p *= static_cast<long double>(2 * k - 1) / static_cast<long double>(2 * k);
        r_h = p;
    } else {
        r_h = law.tail_continuation(static_cast<double>(horizon));
    }
    law.finish_tables(r_h);
    return law;
}

GapLaw GapLaw::geometric(double p, std::size_t horizon) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("geometric: p must be in (0,1)");
    if (horizon < 2) throw std::invalid_argument("geometric: horizon must be >= 2");
    GapLaw law;
    law.kind_ = LawKind::geometric;
    law.geom_p_ = p;
    law.f_.assign(horizon + 1, 0.0L);
    long double f = p;
    for (std::size_t k = 1; k <= horizon; ++k) {
        law.f_[k] = f;
        f *= (1.0L - static_cast<long double>(p));
    }
    // exact geometric tail
    law.r_.assign(horizon + 1, 0.0L);
    long double r = 1.0L;
    for (std::size_t n = 0; n <= horizon; ++n) {
        law.r_[n] = r;
        r *= (1.0L - static_cast<long double>(p));
    }
    law.mu_.assign(horizon + 1, 0.0L);
    StableSum<long double> acc;
    for (std::size_t n = 1; n <= horizon; ++n) {
        acc.add(law.r_[n - 1]);
        law.mu_[n] = acc.value();
    }
    law.mean_ = 1.0 / p;
    return law;
}

GapLaw GapLaw::deterministic(std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("deterministic: horizon must be >= 1");
    GapLaw law;
    law.kind_ = LawKind::deterministic;
    law.f_.assign(horizon + 1, 0.0L);
    law.f_[1] = 1.0L;
    law.finish_tables();
    law.mean_ = 1.0;
    return law;
}

GapLaw GapLaw::from_pmf(std::vector<double> f, double defect) {
    if (f.size() < 2 || f[0] != 0.0)
        throw std::invalid_argument("from_pmf: need f[0] == 0 and at least f[1]");
    if (!(defect >= 0.0 && defect < 1.0))
        throw std::invalid_argument("from_pmf: defect must be in [0,1)");
    StableSum<double> total(defect);
    for (std::size_t k = 1; k < f.size(); ++k) {
        if (f[k] < 0.0) throw std::invalid_argument("from_pmf: negative mass");
        total.add(f[k]);
    }
    if (std::fabs(total.value() - 1.0) > 1e-9)
        throw std::invalid_argument("from_pmf: mass does not sum to 1");
    GapLaw law;
    law.kind_ = LawKind::table;
    law.defect_ = defect;
    law.f_.assign(f.begin(), f.end());
    law.check_support();
    law.finish_tables();
    if (defect == 0.0) {
        StableSum<long double> m;
        for (long double r : law.r_) m.add(r);
        law.mean_ = static_cast<double>(m.value());
    }
    return law;
}

// ---------------------------------------------------------------------------

std::string GapLaw::describe() const {
    char buf[128];
    switch (kind_) {
        case LawKind::reg_varying:
            std::snprintf(buf, sizeof buf, "regvarying(alpha=%g,c=%g,a=%g,defect=%g,N=%zu)",
                          alpha_, phi_.c(), phi_.a(), defect_, horizon());
            break;
        case LawKind::ssrw:
            std::snprintf(buf, sizeof buf, "ssrw(N=%zu)", horizon());
            break;
        case LawKind::geometric:
            std::snprintf(buf, sizeof buf, "geometric(p=%g,N=%zu)", geom_p_, horizon());
            break;
        case LawKind::deterministic:
            std::snprintf(buf, sizeof buf, "deterministic(N=%zu)", horizon());
            break;
        case LawKind::table:
            std::snprintf(buf, sizeof buf, "table(N=%zu,defect=%g)", horizon(), defect_);
            break;
    }
    return buf;
}

nlohmann::json GapLaw::to_json(bool include_pmf) const {
    nlohmann::json j;
    switch (kind_) {
        case LawKind::reg_varying: j["kind"] = "regvarying"; break;
        case LawKind::ssrw: j["kind"] = "ssrw"; break;
        case LawKind::geometric: j["kind"] = "geometric"; break;
        case LawKind::deterministic: j["kind"] = "deterministic"; break;
        case LawKind::table: j["kind"] = "table"; break;
    }
    j["alpha"] = alpha_;
    const char* phi_kind = phi_.a() == 0.0 ? "constant"
                           : phi_.c() == 1.0 ? "log_power"
                                             : "product";
    j["phi"] = {{"kind", phi_kind}, {"c", phi_.c()}, {"a", phi_.a()}};
    j["defect"] = defect_;
    j["horizon"] = horizon();
    if (kind_ == LawKind::geometric) j["p"] = geom_p_;
    if (kind_ == LawKind::reg_varying) j["scale"] = scale_;
    if (kind_ == LawKind::table || include_pmf) {
        std::vector<double> pmf(f_.size() - 1);
        for (std::size_t k = 1; k < f_.size(); ++k)
            pmf[k - 1] = static_cast<double>(f_[k]);
        j["pmf"] = pmf;
    }
    return j;
}

GapLaw GapLaw::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::size_t horizon = j.at("horizon").get<std::size_t>();
    if (kind == "ssrw") return GapLaw::ssrw(horizon);
    if (kind == "geometric") return GapLaw::geometric(j.at("p").get<double>(), horizon);
    if (kind == "deterministic") return GapLaw::deterministic(horizon);
    if (kind == "regvarying") {
        const auto& p = j.at("phi");
        return GapLaw::reg_varying(
            j.at("alpha").get<double>(),
            SlowVary::product(p.at("c").get<double>(), p.at("a").get<double>()),
            horizon, j.value("defect", 0.0));
    }
    if (kind == "table") {
        std::vector<double> pmf = j.at("pmf").get<std::vector<double>>();
        std::vector<double> f(pmf.size() + 1, 0.0);
        std::copy(pmf.begin(), pmf.end(), f.begin() + 1);
        return GapLaw::from_pmf(std::move(f), j.value("defect", 0.0));
    }
    throw std::invalid_argument("GapLaw::from_json: unknown kind " + kind);
}

}  // namespace renewal
