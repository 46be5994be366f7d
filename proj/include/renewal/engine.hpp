#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "renewal/gap_law.hpp"

namespace renewal {

enum class ConvMethod { naive, fft };

// Working precision of the solver. `extended` runs the recursion in long
// double and keeps the long-double array alongside the double one; needed
// when downstream consumers subtract values agreeing to many digits
// (finite-mean corrections, far tails of the intersection).
enum class Precision { standard, extended };

// Renewal mass function u_n = P(n in tau) with cumulative U_n.
struct MassFunction {
    std::vector<double> u;
    std::vector<double> U;
    std::string source;
    std::shared_ptr<const std::vector<long double>> u_ext;  // set when extended

    std::size_t size() const { return u.size(); }
    std::size_t n_max() const { return u.size() - 1; }
};

// u_0 = 1, u_n = sum_{k=1}^n f_k u_{n-k}.
MassFunction mass_function(const GapLaw& law, std::size_t n_max,
                           ConvMethod method = ConvMethod::fft,
                           Precision prec = Precision::standard);

struct Inversion {
    std::vector<double> g;  // g_n = P(rho_1 = n), g_0 = 0
    std::vector<double> G;  // G_n = P(rho_1 > n) = 1 - sum_{k<=n} g_k
    std::size_t clipped = 0;  // count of small negatives clipped to zero
};

// Recover the inter-arrival pmf from a renewal mass function:
// g_n = w_n - sum_{k=1}^{n-1} g_k w_{n-k}. Values in [-1e-6, 0) are clipped
// (floating noise); anything below -1e-6 is a structural failure.
Inversion invert_mass(std::span<const double> w,
                      ConvMethod method = ConvMethod::fft);
Inversion invert_mass_ext(std::span<const long double> w,
                          ConvMethod method = ConvMethod::fft,
                          std::vector<long double>* g_ext_out = nullptr);

// |u_n - u_{n-1}|, 1 <= n <= n_max.
double increment(const MassFunction& mf, std::size_t n);

}  // namespace renewal
