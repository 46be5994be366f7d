#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "renewal/slow_vary.hpp"

#include "json.hpp"

namespace renewal {

enum class LawKind { reg_varying, ssrw, geometric, deterministic, table };

// Inter-arrival distribution on {1, 2, ...} with optional mass at +infinity
// (the defect). Holds an exact pmf table up to `horizon` plus an analytic
// tail continuation past it. Immutable after construction; all queries pure.
class GapLaw {
public:
    // pmf proportional to phi(k) k^{-(1+alpha)} on 1..horizon, scaled by a
    // single constant so that table + analytic tail + defect sum to one.
    // The constant is recorded in scale().
    static GapLaw reg_varying(double alpha, SlowVary phi, std::size_t horizon,
                              double defect = 0.0);

    // First-return times of the symmetric simple random walk on Z, indexed by
    // half so that the support is 1,2,3,...: f_k = C(2k,k) / ((2k-1) 4^k).
    static GapLaw ssrw(std::size_t horizon);

    static GapLaw geometric(double p, std::size_t horizon);
    static GapLaw deterministic(std::size_t horizon);

    // Explicit table; f[k] = P(tau_1 = k) with f[0] == 0. The table plus the
    // defect must account for all mass (residual below 1e-9).
    static GapLaw from_pmf(std::vector<double> f, double defect = 0.0);

    LawKind kind() const { return kind_; }
    std::size_t horizon() const { return f_.size() - 1; }
    double alpha() const { return alpha_; }  // +inf for light-tailed kinds
    const SlowVary& phi() const { return phi_; }
    double defect() const { return defect_; }
    bool proper() const { return defect_ == 0.0; }
    double scale() const { return scale_; }
    double geometric_p() const { return geom_p_; }

    // P(tau_1 = k); analytic continuation past the horizon.
    double pmf(std::size_t k) const;

    // r_n = P(tau_1 > n) including the defect; r_0 = 1, nonincreasing.
    double tail(std::size_t n) const;

    // mu_n = E[tau_1 ^ n] for 1 <= n <= horizon.
    double truncated_mean(std::size_t n) const;

    // mu = E[tau_1]; +inf for defective or heavy-tailed laws.
    double mean() const { return mean_; }
    bool mean_finite() const { return std::isfinite(mean_); }

    // Local slowly varying factor f_n n^{1+alpha} (finite-alpha kinds only).
    double phi_local(std::size_t n) const;

    std::string describe() const;

    nlohmann::json to_json(bool include_pmf = false) const;
    static GapLaw from_json(const nlohmann::json& j);

    // Smallest integer x with tail(x) < t, for t in (defect, 1]; used by the
    // inverse-CDF sampler when the draw lands past the table.
    std::uint64_t inverse_tail(double t) const;

    // long double views of the tables; the extended-precision solver paths
    // consume these directly so that the pmf and its bookkept tail stay
    // consistent well below double rounding.
    long double pmf_ld(std::size_t k) const {
        return k < f_.size() ? f_[k] : static_cast<long double>(pmf(k));
    }
    long double tail_ld(std::size_t n) const {
        return n < r_.size() ? r_[n] : static_cast<long double>(tail(n));
    }

private:
    GapLaw() : phi_(SlowVary::constant(1.0)) {}

    void finish_tables(long double r_h_hint = -1.0L);  // r_ and mu_ from f_ + tail
    void check_support();   // gcd of support must be 1
    double tail_continuation(double x) const;  // r(x) for x > horizon

    LawKind kind_ = LawKind::table;
    double alpha_ = std::numeric_limits<double>::infinity();
    SlowVary phi_;
    double defect_ = 0.0;
    double scale_ = 1.0;
    double geom_p_ = 0.0;
    double mean_ = std::numeric_limits<double>::infinity();

    // tables in long double: a double pmf cannot sum to 1 minus an analytic
    // tail below ~1e-16, and that mass mismatch is exponentiated by the
    // renewal recursion (e^{xi n / mu} drift at large n)
    std::vector<long double> f_;   // f_[k] = P(tau_1 = k), f_[0] = 0
    std::vector<long double> r_;   // r_[n] = P(tau_1 > n), r_[0] = 1
    std::vector<long double> mu_;  // mu_[n] = sum_{j<n} r_j = E[tau_1 ^ n]
};

namespace detail {

// sum_{k>N} phi(k) k^{-s} by Euler-Maclaurin: integral, -g(N)/2, -g'(N)/12.
// Needs s > 1, or s == 1 with phi.a < -1.
double em_tail_sum(const SlowVary& phi, double s, double N);

// Adaptive Simpson on [a, b] to relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol);

}  // namespace detail

}  // namespace renewal
