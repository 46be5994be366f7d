#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "renewal/intersect.hpp"
#include "renewal/summation.hpp"

using namespace renewal;

namespace {

IntersectionModel make_pair(const GapLaw& a, const GapLaw& b, std::size_t n,
                            ConvMethod m = ConvMethod::fft) {
    const MassFunction ma = mass_function(a, n, m);
    const MassFunction mb = mass_function(b, n, m);
    return build(a, ma, b, mb, n, m);
}

}  // namespace

TEST_CASE("classification") {
    const std::size_t h = 64;
    auto reg = [&](double alpha, double defect = 0.0) {
        return GapLaw::reg_varying(alpha, SlowVary::constant(1.0), h, defect);
    };

    SUBCASE("alpha = alpha~ = 0.7: recurrent, theta* = 0.6, alpha* = 0.4") {
        const Classification c = classify(reg(0.7), reg(0.7));
        CHECK(c.recurrent);
        CHECK(c.theta_star == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(c.alpha_star == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(!c.heuristic);
    }
    SUBCASE("alpha = 1.5, alpha~ = 2.5: recurrent, theta* = 0, alpha* = 1.5") {
        const Classification c = classify(reg(1.5), reg(2.5));
        CHECK(c.recurrent);
        CHECK(c.theta_star == 0.0);
        CHECK(c.alpha_star == 1.5);
        CHECK(!c.swapped);
    }
    SUBCASE("boundary alpha + alpha~ = 1 with constant phi: recurrent") {
        const Classification c = classify(reg(0.5), reg(0.5));
        CHECK(c.recurrent);
        CHECK(c.theta_star == doctest::Approx(1.0));
        CHECK(c.alpha_star == doctest::Approx(0.0));
        CHECK(!c.heuristic);
    }
    SUBCASE("boundary with strong log decay: transient") {
        // phi phi~ = (log)^3 makes sum 1/(n phi phi~) converge
        const GapLaw a = GapLaw::reg_varying(0.5, SlowVary::log_power(1.5), h);
        const Classification c = classify(a, a);
        CHECK(!c.recurrent);
        CHECK(c.alpha_star == doctest::Approx(0.0));
    }
    SUBCASE("recurrent marginals, transient intersection") {
        const Classification c = classify(reg(0.2), reg(0.2));
        CHECK(!c.recurrent);
        CHECK(c.theta_star == doctest::Approx(1.6).epsilon(1e-12));
        CHECK(c.alpha_star == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("mixed fractional/finite-mean: case 3 shape") {
        const Classification c = classify(reg(0.3), reg(1.7));
        CHECK(c.recurrent);
        CHECK(c.theta_star == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(c.alpha_star == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("defective marginal forces transience") {
        const Classification c = classify(reg(1.5, 0.3), reg(1.5, 0.4));
        CHECK(!c.recurrent);
        CHECK(c.theta_star == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(c.alpha_star == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("swap normalization records the reorder") {
        const Classification c = classify(reg(2.5), reg(1.5));
        CHECK(c.swapped);
        CHECK(c.alpha_star == 1.5);
    }
    SUBCASE("light-tailed pairs: theta* = 0, recurrent") {
        const GapLaw geo = GapLaw::geometric(0.5, h);
        const Classification c = classify(geo, geo);
        CHECK(c.recurrent);
        CHECK(c.theta_star == 0.0);
    }
    SUBCASE("boundary with log-log truncated mean falls back to the heuristic") {
        // sigma with alpha~ = 1 and phi~ = (log)^{-1} has mu~_n ~ log log n:
        // no clean log-power exponent, so the divergence call is heuristic
        const std::size_t big = 4096;
        const GapLaw a0 = GapLaw::reg_varying(0.0, SlowVary::log_power(-2.5), big);
        const GapLaw a1 = GapLaw::reg_varying(1.0, SlowVary::log_power(-1.0), big);
        const Classification c = classify(a0, a1);
        CHECK(c.heuristic);
        CHECK(c.recurrent);  // summand ~ (log n)^{1/2}/(n log log n) diverges
    }
    SUBCASE("alpha = 0 with alpha~ = 1 boundary: divergence test on the logs") {
        const std::size_t big = 4096;
        // r^2 ~ (log)^{2a+2}, mu~_n ~ (log)^{a~+1}: recurrent iff a + a~ <= -2
        const GapLaw a0 = GapLaw::reg_varying(0.0, SlowVary::log_power(-2.5), big);
        const GapLaw a1_const = GapLaw::reg_varying(1.0, SlowVary::constant(1.0), big);
        const Classification rec = classify(a0, a1_const);  // -2.5 + 0 <= -2
        CHECK(rec.recurrent);
        CHECK(rec.theta_star == doctest::Approx(1.0));
        CHECK(!rec.heuristic);

        const GapLaw a0_weak = GapLaw::reg_varying(0.0, SlowVary::log_power(-1.5), big);
        const Classification tr = classify(a0_weak, a1_const);  // -1.5 > -2
        CHECK(!tr.recurrent);

        // alpha = 0 against a finite-mean law: always recurrent (u_n >~ 1/n)
        const GapLaw fin = GapLaw::reg_varying(1.5, SlowVary::constant(1.0), big);
        CHECK(classify(a0, fin).recurrent);
    }
}

TEST_CASE("geometric pair closed form") {
    const double p = 0.5, q = 0.5;
    const std::size_t n = 512;
    const IntersectionModel model =
        make_pair(GapLaw::geometric(p, n), GapLaw::geometric(q, n), n);
    CHECK(model.cls.recurrent);

    SUBCASE("w, g, G, psi*, v") {
        for (std::size_t k = 1; k <= 64; k = k * 2 + 1) {
            CHECK(model.w[k] == doctest::Approx(p * q).epsilon(1e-12));
            CHECK(model.psi_star(k) == doctest::Approx(0.25).epsilon(1e-12));
            const double g_exact = p * q * std::pow(1 - p * q, k - 1.0);
            CHECK(model.g[k] == doctest::Approx(g_exact).epsilon(1e-9));
            const double G_exact = std::pow(1 - p * q, static_cast<double>(k));
            CHECK(model.G[k] == doctest::Approx(G_exact).epsilon(1e-9));
            CHECK(model.v[k] ==
                  doctest::Approx(G_exact * G_exact * 0.25).epsilon(1e-9));
        }
    }
    SUBCASE("E[rho_1] = E[tau_1] E[sigma_1] (finite-mean identity)") {
        const double mean = model.rho1_mean();
        CHECK(std::fabs(mean - 4.0) / 4.0 < 0.02);
    }
    SUBCASE("bookkeeping: G = 1 - cumulative(g)") {
        StableSum<double> s;
        for (std::size_t k = 0; k <= 64; ++k) {
            s.add(model.g[k]);
            CHECK(model.G[k] == doctest::Approx(1.0 - s.value()).epsilon(1e-12));
        }
    }
}

TEST_CASE("ssrw pair hand values and psi* limit") {
    const std::size_t n = 1 << 17;
    const IntersectionModel model =
        make_pair(GapLaw::ssrw(n), GapLaw::ssrw(n), n);
    CHECK(model.cls.recurrent);
    CHECK(model.cls.theta_star == doctest::Approx(1.0));
    CHECK(model.w[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(model.w[2] == doctest::Approx(9.0 / 64.0).epsilon(1e-14));
    CHECK(model.g[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(model.g[2] == doctest::Approx(5.0 / 64.0).epsilon(1e-12));
    // psi*(n) = w_n n -> 1/pi
    CHECK(std::fabs(model.psi_star(100000) * M_PI - 1.0) < 0.02);
}

TEST_CASE("deterministic pair: rho equals tau") {
    const IntersectionModel model =
        make_pair(GapLaw::deterministic(64), GapLaw::deterministic(64), 64);
    CHECK(model.g[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.G[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(model.cls.recurrent);
}

TEST_CASE("finite-mean reg-varying pair satisfies E(rho_1) = mu mu~") {
    const std::size_t n = 1 << 14;
    const GapLaw tau = GapLaw::reg_varying(1.5, SlowVary::constant(1.0), n);
    const GapLaw sigma = GapLaw::reg_varying(2.5, SlowVary::constant(1.0), n);
    const IntersectionModel model = make_pair(tau, sigma, n);
    const double expect = tau.mean() * sigma.mean();
    CHECK(std::fabs(model.rho1_mean() - expect) / expect < 0.02);
}

TEST_CASE("transient model bookkeeping") {
    const std::size_t n = 1 << 13;
    const GapLaw tau = GapLaw::reg_varying(1.5, SlowVary::constant(1.0), n, 0.3);
    const GapLaw sigma = GapLaw::reg_varying(1.5, SlowVary::constant(1.0), n, 0.4);
    const IntersectionModel model = make_pair(tau, sigma, n, ConvMethod::naive);
    CHECK(!model.cls.recurrent);
    CHECK(std::isfinite(model.e_abs_rho));

    SUBCASE("E|rho| = sum w agrees with the defect route 1/P(rho_1 = inf)") {
        CHECK(std::fabs(model.e_abs_rho - 1.0 / model.G[n]) / model.e_abs_rho < 0.02);
    }
    SUBCASE("w converges numerically") {
        CHECK(model.w[n] < 1e-12);
    }
    SUBCASE("rho_1 mean is infinite (mass at infinity)") {
        CHECK(!std::isfinite(model.rho1_mean()));
    }
}

TEST_CASE("w is exactly the product of the marginal mass functions") {
    const std::size_t n = 1024;
    const GapLaw a = GapLaw::ssrw(n);
    const GapLaw b = GapLaw::geometric(0.5, n);
    const MassFunction ma = mass_function(a, n, ConvMethod::fft);
    const MassFunction mb = mass_function(b, n, ConvMethod::fft);
    const IntersectionModel model = build(a, ma, b, mb, n, ConvMethod::fft);
    for (std::size_t k = 0; k <= n; k += 13)
        CHECK(model.w[k] == ma.u[k] * mb.u[k]);  // bit-exact product
    // U* is the cumulative of w
    CHECK(model.u_star[0] == 1.0);
    CHECK(model.u_star[n] ==
          doctest::Approx(model.u_star[n - 1] + model.w[n]).epsilon(1e-14));
}

TEST_CASE("build validates lengths and propagates inversion failures") {
    const std::size_t n = 256;
    const GapLaw a = GapLaw::ssrw(n);
    const MassFunction ma = mass_function(a, n, ConvMethod::fft);
    const MassFunction half = mass_function(a, n / 2, ConvMethod::fft);
    CHECK_THROWS_AS(build(a, ma, a, half, n, ConvMethod::fft), std::out_of_range);
}

TEST_CASE("extended build keeps the far tail meaningful") {
    const std::size_t n = 4096;
    const GapLaw tau = GapLaw::reg_varying(1.5, SlowVary::constant(1.0), n);
    const GapLaw sigma = GapLaw::reg_varying(2.5, SlowVary::constant(1.0), n);
    const MassFunction mt = mass_function(tau, n, ConvMethod::fft, Precision::extended);
    const MassFunction ms = mass_function(sigma, n, ConvMethod::fft, Precision::extended);
    const IntersectionModel ext = build(tau, mt, sigma, ms, n, ConvMethod::fft);
    // cross-check against the naive double route at moderate n where both are valid
    const IntersectionModel std_model = make_pair(tau, sigma, n, ConvMethod::naive);
    for (std::size_t k : {std::size_t{16}, std::size_t{256}, std::size_t{4096}})
        CHECK(ext.g[k] == doctest::Approx(std_model.g[k]).epsilon(1e-6));
}
