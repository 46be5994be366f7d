#include "renewal/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "renewal/fft.hpp"
#include "renewal/summation.hpp"

namespace renewal {

MassFunction mass_function(const GapLaw& law, std::size_t n_max,
                           ConvMethod method, Precision prec) {
    // a table is usable past its horizon only when it already holds all the
    // finite mass (pmf is exactly zero beyond)
    if (n_max > law.horizon() &&
        law.tail(law.horizon()) - law.defect() > 1e-9)
        throw std::out_of_range("mass_function: n_max exceeds law horizon");

    MassFunction mf;
    mf.source = law.describe();
    const bool fft = method == ConvMethod::fft;

    if (prec == Precision::extended) {
        std::vector<long double> a(n_max + 1, 0.0L), b(n_max + 1, 0.0L);
        for (std::size_t k = 1; k <= n_max; ++k) a[k] = law.pmf_ld(k);
        b[0] = 1.0L;
        auto u = detail::solve_renewal<long double>(a, b, n_max, fft);
        mf.u.assign(u.begin(), u.end());
        mf.u_ext = std::make_shared<const std::vector<long double>>(std::move(u));
    } else {
        std::vector<double> a(n_max + 1, 0.0), b(n_max + 1, 0.0);
        for (std::size_t k = 1; k <= n_max; ++k) a[k] = law.pmf(k);
        b[0] = 1.0;
        mf.u = detail::solve_renewal<double>(a, b, n_max, fft);
    }

    mf.U.resize(mf.u.size());
    StableSum<double> acc;
    for (std::size_t n = 0; n < mf.u.size(); ++n) {
        acc.add(mf.u[n]);
        mf.U[n] = acc.value();
    }
    return mf;
}

namespace {

template <class Real>
std::vector<Real> invert_core(std::span<const Real> w, bool fft,
                              std::size_t* clipped) {
    if (w.empty() || std::fabs(static_cast<double>(w[0]) - 1.0) > 1e-12)
        throw std::invalid_argument("invert_mass: w_0 must be 1");
    const std::size_t n_max = w.size() - 1;
    std::vector<Real> a(n_max + 1, Real(0)), b(n_max + 1, Real(0));
    for (std::size_t k = 1; k <= n_max; ++k) {
        if (!(w[k] >= Real(0) && w[k] <= Real(1) + Real(1e-9)))
            throw std::invalid_argument("invert_mass: w entries must lie in [0,1]");
        a[k] = -w[k];
        b[k] = w[k];
    }
    auto g = detail::solve_renewal<Real>(a, b, n_max, fft);
    g[0] = Real(0);
    *clipped = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (g[n] < Real(0)) {
            if (g[n] < Real(-1e-6))
                throw std::domain_error("invert_mass: not a renewal mass function");
            g[n] = Real(0);
            ++*clipped;
        }
    }
    return g;
}

template <class Real>
std::vector<double> tail_from_pmf(const std::vector<Real>& g) {
    std::vector<double> G(g.size());
    StableSum<Real> acc;
    for (std::size_t n = 0; n < g.size(); ++n) {
        acc.add(g[n]);
        G[n] = static_cast<double>(Real(1) - acc.value());
        if (G[n] < 0.0) G[n] = 0.0;
    }
    return G;
}

}  // namespace

Inversion invert_mass(std::span<const double> w, ConvMethod method) {
    Inversion out;
    out.g = invert_core<double>(w, method == ConvMethod::fft, &out.clipped);
    out.G = tail_from_pmf(out.g);
    return out;
}

Inversion invert_mass_ext(std::span<const long double> w, ConvMethod method,
                          std::vector<long double>* g_ext_out) {
    Inversion out;
    auto g = invert_core<long double>(w, method == ConvMethod::fft, &out.clipped);
    out.g.assign(g.begin(), g.end());
    out.G = tail_from_pmf(g);
    if (g_ext_out) *g_ext_out = std::move(g);
    return out;
}

double increment(const MassFunction& mf, std::size_t n) {
    if (n < 1 || n >= mf.u.size())
        throw std::out_of_range("increment: n outside 1..n_max");
    return std::fabs(mf.u[n] - mf.u[n - 1]);
}

}  // namespace renewal
