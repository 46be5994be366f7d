#pragma once

// Test-only exact oracles: rational arithmetic renewal recursions and the
// central-binomial closed forms. Independent of the library's floating-point
// paths; everything here is mpq-exact.

#include <cstddef>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// C(2k, k)
inline mpz_class central_binomial(unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), 2 * k, k);
    return r;
}

// P(tau_1 = k) for the half-indexed SSRW return law: C(2k,k) / ((2k-1) 4^k)
inline mpq_class ssrw_f(unsigned long k) {
    mpz_class denom = (2 * mpz_class(k) - 1) << (2 * k);  // (2k-1) 4^k
    mpq_class q(central_binomial(k), denom);
    q.canonicalize();
    return q;
}

// P(k in tau) for the SSRW law: C(2k,k) / 4^k
inline mpq_class ssrw_u(unsigned long k) {
    mpq_class q(central_binomial(k), mpz_class(1) << (2 * k));
    q.canonicalize();
    return q;
}

// u_0 = 1, u_n = sum_{j=1}^{n} f_j u_{n-j}; f indexed from 1 (f[0] ignored)
inline std::vector<mpq_class> mass_function(const std::vector<mpq_class>& f,
                                            std::size_t n_max) {
    std::vector<mpq_class> u(n_max + 1);
    u[0] = 1;
    for (std::size_t n = 1; n <= n_max; ++n) {
        mpq_class s = 0;
        for (std::size_t j = 1; j <= n && j < f.size(); ++j) s += f[j] * u[n - j];
        u[n] = s;
    }
    return u;
}

// g_n = w_n - sum_{k=1}^{n-1} g_k w_{n-k}; g[0] = 0
inline std::vector<mpq_class> invert_mass(const std::vector<mpq_class>& w) {
    std::vector<mpq_class> g(w.size());
    g[0] = 0;
    for (std::size_t n = 1; n < w.size(); ++n) {
        mpq_class s = w[n];
        for (std::size_t k = 1; k < n; ++k) s -= g[k] * w[n - k];
        g[n] = s;
    }
    return g;
}

// Random proper pmf with dyadic weights on a support containing 1 (keeps the
// law aperiodic). Returned vector is indexed from 1.
inline std::vector<mpq_class> random_dyadic_pmf(std::mt19937_64& rng,
                                                std::size_t max_support) {
    std::uniform_int_distribution<std::size_t> support_size(2, max_support);
    std::uniform_int_distribution<int> weight(1, 16);
    const std::size_t m = support_size(rng);
    std::vector<long> weights(m + 1, 0);
    weights[1] = weight(rng);
    long total = weights[1];
    for (std::size_t k = 2; k <= m; ++k) {
        const bool present = (rng() & 1) != 0;
        weights[k] = present ? weight(rng) : 0;
        total += weights[k];
    }
    std::vector<mpq_class> f(m + 1);
    for (std::size_t k = 1; k <= m; ++k) {
        f[k] = mpq_class(weights[k], total);
        f[k].canonicalize();
    }
    return f;
}

inline double to_double(const mpq_class& q) { return q.get_d(); }

}  // namespace oracle
