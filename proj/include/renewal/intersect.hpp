#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "renewal/engine.hpp"
#include "renewal/gap_law.hpp"

namespace renewal {

// Recurrence classification of the intersection rho. theta_star is the decay
// exponent of P(n in rho), alpha_star the tail exponent of rho_1. Boundary
// cases decided by a series-divergence test; `heuristic` flags the ones where
// no closed form applies and a partial-sum growth fit was used instead.
struct Classification {
    bool recurrent = false;
    double theta_star = 0.0;
    double alpha_star = 0.0;
    bool heuristic = false;
    bool swapped = false;  // inputs reordered so that alpha <= alpha_tilde
};

Classification classify(const GapLaw& tau, const GapLaw& sigma);

// Intersection process model: w_n = P(n in rho) = u_n * u~_n, its inversion
// (exact law of rho_1), and the derived sequences of the tail/local theory.
class IntersectionModel {
public:
    // n-indexed arrays, 0..n_max
    std::vector<double> w;       // P(n in rho)
    std::vector<double> u_star;  // U*_n = sum_{k<=n} w_k
    std::vector<double> g;       // P(rho_1 = n)
    std::vector<double> G;       // P(rho_1 > n)
    std::vector<double> v;       // v_n = G_n^2 w_n

    Classification cls;
    double e_abs_rho = 0.0;  // E|rho| = sum w_n (+ tail); +inf when recurrent
    std::size_t clipped = 0;

    std::shared_ptr<const GapLaw> tau, sigma;  // stored post-swap

    std::size_t n_max() const { return w.size() - 1; }

    double psi_star(std::size_t n) const;        // w_n n^{theta*}
    double psi_over_j_prefix(std::size_t n) const { return psi_prefix[n]; }
    double v_eval(std::size_t n) const { return v[n]; }

    // E[rho_1] from the computed law: partial mean plus a power-law tail
    // correction; +inf when alpha_star <= 1.
    double rho1_mean() const;

    std::vector<double> psi_prefix;   // sum_{j=1..n} psi*(j)/j
};

IntersectionModel build(const GapLaw& tau_law, const MassFunction& tau_mf,
                        const GapLaw& sigma_law, const MassFunction& sigma_mf,
                        std::size_t n_max,
                        ConvMethod invert_method = ConvMethod::fft);

}  // namespace renewal
