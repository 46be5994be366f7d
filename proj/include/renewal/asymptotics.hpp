#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "renewal/engine.hpp"
#include "renewal/gap_law.hpp"
#include "renewal/intersect.hpp"

namespace renewal {

// --- closed-form asymptotic evaluators -------------------------------------

// P(n in tau) asymptotics by regime: transient f_n/p_inf^2; finite mean 1/mu;
// alpha = 1 with infinite mean 1/mu_n; alpha in (0,1) the arcsine-constant
// form; alpha = 0 f_n/r_n^2. The slowly varying factor is always evaluated
// locally from the law's own table.
double renewal_mass_asym(const GapLaw& law, std::size_t n);

// P(rho_1 > n) asymptotics for a recurrent model, branch selected by alpha*.
// Throws for transient models (their tail is a constant; only the pmf law is
// meaningful there).
double rho_tail_asym(const IntersectionModel& model, std::size_t n);

// Optional refined two-term form for 1 < alpha <= alpha~ (flag frenk_form):
// mu~ r_n + mu (alpha-1)/(alpha~-1) r~_n.
double rho_tail_asym_frenk(const IntersectionModel& model, std::size_t n);

// P(rho_1 = n) asymptotics, all four branches (transient included).
double rho_pmf_asym(const IntersectionModel& model, std::size_t n);

enum class SpecialCase {
    c_fractional,     // c_{alpha,alpha~} for alpha+alpha~ > 1, both in (0,1)
    c_prime_boundary  // c'_{alpha,alpha~} for alpha+alpha~ = 1, both in (0,1)
};
double special_constant(SpecialCase which, double alpha, double alpha_tilde);

// Predicted finite-mean corrections to u_n - 1/mu (requires finite mean):
// rogozin: (1/mu^2) sum_{k>n} r_k;  frenk: n r_n / (mu^2 (alpha-1)).
struct FiniteMeanCorrection {
    double rogozin;
    double frenk;
};
FiniteMeanCorrection finite_mean_correction(const GapLaw& law, std::size_t n);

// --- numeric verification procedures ---------------------------------------

// Least-squares fit of u_{floor(lambda n)} - u_n against log lambda per n.
struct DeHaanPoint {
    std::size_t n;
    double ell_hat;  // fitted slope (the auxiliary sequence estimate)
    double r2;       // through-origin R^2 of the fit
};
struct DeHaanFit {
    std::vector<DeHaanPoint> points;
    bool degenerate = false;  // all differences zero
};
DeHaanFit de_haan_slope(const MassFunction& mf,
                        const std::vector<double>& lambda_grid,
                        const std::vector<std::size_t>& n_grid);

// Fitted constant of |u_n - u_{n-1}| <= c_1 u_n P(rho_1 > n) over a grid,
// with a two-halves stability report.
struct CouplingBound {
    double c1_hat = 0.0;        // sup over the grid
    double lower_half = 0.0;    // sup over the lower half
    double upper_half = 0.0;    // sup over the upper half
    bool stable = false;        // upper <= 2 * lower
    std::vector<std::pair<std::size_t, double>> ratios;
};
CouplingBound coupling_bound_check(const MassFunction& mf,
                                   const IntersectionModel& model,
                                   const std::vector<std::size_t>& n_grid);

// Verifies (1-delta) g_{n-k} - delta v_n <= g_n <= (1+delta) g_{n+k} + delta v_n
// on the exact inverted law. Violations are findings, not errors.
struct StretchCheck {
    bool holds = false;
    double slack_lower = 0.0;  // g_n - ((1-delta) g_{n-k} - delta v_n)
    double slack_upper = 0.0;  // ((1+delta) g_{n+k} + delta v_n) - g_n
    bool k_in_range = true;    // k <= eps * n with the requested eps
};
StretchCheck stretch_check(const IntersectionModel& model, std::size_t n,
                           std::size_t k, double delta,
                           std::optional<double> eps = std::nullopt);

// sup_{0<=m<=n} P(2n in tau | X_n = m) / P(2n in tau), X_n the last renewal
// before n; conditional expanded over the first renewal past n.
struct TiedownRatio {
    double sup_ratio = 0.0;
    std::size_t arg_m = 0;
};
TiedownRatio tiedown_ratio(const GapLaw& law, const MassFunction& mf,
                           std::size_t n);

// --- comparison harness -----------------------------------------------------

struct ReportRow {
    std::size_t n;
    double exact;
    double asym;
    double ratio;
};

struct AsymptoticReport {
    std::string case_id;
    std::vector<ReportRow> rows;
    double final_ratio = 0.0;
    bool trend_ok = false;  // |ratio-1| smaller at the top of the grid
    std::map<std::string, double> fitted;
    std::vector<std::pair<std::size_t, double>> ell_hat;

    void finish();  // fills final_ratio / trend_ok from rows
};

// geometric grid {start, start*ratio, ...} capped at stop (stop included)
std::vector<std::size_t> geometric_grid(std::size_t start, std::size_t stop,
                                        double ratio = 2.0);

// exact u_n against renewal_mass_asym
AsymptoticReport compare_mass(const GapLaw& law, const MassFunction& mf,
                              const std::vector<std::size_t>& grid,
                              const std::string& case_id = "mass");
// exact G_n (or g_n) against the matching theorem branch
AsymptoticReport compare_rho_tail(const IntersectionModel& model,
                                  const std::vector<std::size_t>& grid,
                                  const std::string& case_id = "rho-tail");
AsymptoticReport compare_rho_pmf(const IntersectionModel& model,
                                 const std::vector<std::size_t>& grid,
                                 const std::string& case_id = "rho-pmf");

}  // namespace renewal
