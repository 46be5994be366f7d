#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renewal/gap_law.hpp"

#include "json.hpp"

namespace renewal {

// SplitMix64; substreams are derived by hashing (seed, worker), which keeps
// runs reproducible under a fixed logical worker count.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

SplitMix64 substream(std::uint64_t seed, std::uint64_t worker);

inline constexpr std::uint64_t kInfiniteGap = UINT64_MAX;

// Inverse-CDF draw over the law's table with the analytic tail continuation
// past the horizon; defective laws return kInfiniteGap with probability
// law.defect().
std::uint64_t sample_gap(const GapLaw& law, SplitMix64& rng);

struct SimEstimate {
    std::string statistic;
    long long n = -1;  // grid point, when applicable
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t censored = 0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

struct SimOptions {
    std::uint64_t runs = 1000000;
    std::uint64_t horizon = 1 << 14;
    std::uint64_t seed = 1;
    unsigned workers = 4;  // logical shards; results depend on this count
};

// First common point of two sampled renewal trajectories up to the horizon.
struct Rho1Sample {
    std::uint64_t value = 0;
    bool censored = false;
};
Rho1Sample simulate_rho1(const GapLaw& tau, const GapLaw& sigma,
                         std::uint64_t horizon, SplitMix64& rng);

// K = min{k >= 1 : tau_k in sigma}; requires sigma with finite mean and a
// recurrent intersection.
struct HitSample {
    std::uint64_t k = 0;
    bool censored = false;
};
HitSample hitting_index(const GapLaw& tau, const GapLaw& sigma,
                        std::uint64_t horizon, SplitMix64& rng);

// Empirical P(rho_1 > n) per grid point (censored runs still count: they
// exceeded the horizon and hence every grid point).
std::vector<SimEstimate> estimate_rho_tail(const GapLaw& tau, const GapLaw& sigma,
                                           const std::vector<std::uint64_t>& grid,
                                           const SimOptions& opt);

// Mean of rho_1 over uncensored runs.
SimEstimate estimate_rho1_mean(const GapLaw& tau, const GapLaw& sigma,
                               const SimOptions& opt);

// Mean of K over uncensored runs.
SimEstimate estimate_hitting_index(const GapLaw& tau, const GapLaw& sigma,
                                   const SimOptions& opt);

// Coupled pair: tau from 0 and sigma (same law) from 1, merged at their first
// common point. Per grid n, estimates of P_{0,1}(n in tau, rho_1 > n) and
// P_{0,1}(n in sigma, rho_1 > n); the coupling bound is their sum.
struct CoupledRow {
    std::uint64_t n = 0;
    double p_tau = 0.0;
    double p_sigma = 0.0;
    SimEstimate bound;  // statistic "coupled-increment-bound"
};
std::vector<CoupledRow> estimate_coupled_increment(const GapLaw& law,
                                                   const std::vector<std::uint64_t>& grid,
                                                   const SimOptions& opt);

}  // namespace renewal
