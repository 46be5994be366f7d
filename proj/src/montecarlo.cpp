#include "renewal/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "renewal/summation.hpp"

namespace renewal {

SplitMix64 substream(std::uint64_t seed, std::uint64_t worker) {
    SplitMix64 mixer(seed ^ (0xa0761d6478bd642fULL * (worker + 1)));
    mixer.next();
    return SplitMix64(mixer.next());
}

std::uint64_t sample_gap(const GapLaw& law, SplitMix64& rng) {
    const double u = rng.next_unit();
    // gap = smallest k with r_k < 1 - u; P(gap = k) = r_{k-1} - r_k
    return law.inverse_tail(1.0 - u);
}

nlohmann::json SimEstimate::to_json() const {
    nlohmann::json j;
    j["statistic"] = statistic;
    if (n >= 0) j["n"] = n;
    j["value"] = value;
    j["ci_low"] = ci_low;
    j["ci_high"] = ci_high;
    j["samples"] = samples;
    j["censored"] = censored;
    j["seed"] = seed;
    return j;
}

namespace {

constexpr double kZ95 = 1.959963984540054;

void binomial_ci(SimEstimate& est, std::uint64_t hits, std::uint64_t trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                static_cast<double>(trials));
    est.value = p;
    est.ci_low = p - kZ95 * se;
    est.ci_high = p + kZ95 * se;
}

void mean_ci(SimEstimate& est, double sum, double sum_sq, std::uint64_t m) {
    const double mean = sum / static_cast<double>(m);
    const double var =
        std::max(sum_sq / static_cast<double>(m) - mean * mean, 0.0);
    const double se = std::sqrt(var / static_cast<double>(m));
    est.value = mean;
    est.ci_low = mean - kZ95 * se;
    est.ci_high = mean + kZ95 * se;
}

// saturating position advance
inline std::uint64_t advance(std::uint64_t pos, std::uint64_t gap) {
    if (gap == kInfiniteGap || pos > UINT64_MAX - gap) return kInfiniteGap;
    return pos + gap;
}

// Shards runs across logical workers, runs them on up to `workers` threads
// and reduces shard results in shard order (bit-identical reruns).
template <class Shard, class Fn>
std::vector<Shard> run_sharded(const SimOptions& opt, Fn&& body) {
    const unsigned w = std::max(1u, opt.workers);
    std::vector<Shard> shards(w);
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (unsigned s = 0; s < w; ++s) {
        const std::uint64_t lo = opt.runs * s / w;
        const std::uint64_t hi = opt.runs * (s + 1) / w;
        threads.emplace_back([&, s, lo, hi] {
            try {
                SplitMix64 rng = substream(opt.seed, s);
                body(shards[s], rng, hi - lo);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    return shards;
}

}  // namespace

Rho1Sample simulate_rho1(const GapLaw& tau, const GapLaw& sigma,
                         std::uint64_t horizon, SplitMix64& rng) {
    std::uint64_t pt = sample_gap(tau, rng);
    std::uint64_t ps = sample_gap(sigma, rng);
    while (pt != ps) {
        if (std::min(pt, ps) > horizon) return {0, true};
        if (pt < ps)
            pt = advance(pt, sample_gap(tau, rng));
        else
            ps = advance(ps, sample_gap(sigma, rng));
    }
    if (pt > horizon) return {0, true};
    return {pt, false};
}

HitSample hitting_index(const GapLaw& tau, const GapLaw& sigma,
                        std::uint64_t horizon, SplitMix64& rng) {
    if (!sigma.mean_finite())
        throw std::domain_error("hitting_index: sigma must have a finite mean");
    std::uint64_t t = 0;
    std::uint64_t ps = sample_gap(sigma, rng);
    std::uint64_t k = 0;
    while (true) {
        t = advance(t, sample_gap(tau, rng));
        ++k;
        if (t > horizon) return {0, true};
        while (ps < t) ps = advance(ps, sample_gap(sigma, rng));
        if (ps == t) return {k, false};
    }
}

std::vector<SimEstimate> estimate_rho_tail(const GapLaw& tau, const GapLaw& sigma,
                                           const std::vector<std::uint64_t>& grid,
                                           const SimOptions& opt) {
    for (std::uint64_t n : grid)
        if (n > opt.horizon)
            throw std::invalid_argument("estimate_rho_tail: grid beyond horizon");

    struct Shard {
        std::vector<std::uint64_t> exceed;
        std::uint64_t censored = 0;
    };
    auto shards = run_sharded<Shard>(opt, [&](Shard& sh, SplitMix64& rng,
                                              std::uint64_t runs) {
        sh.exceed.assign(grid.size(), 0);
        for (std::uint64_t i = 0; i < runs; ++i) {
            const Rho1Sample s = simulate_rho1(tau, sigma, opt.horizon, rng);
            if (s.censored) {
                ++sh.censored;
                for (auto& e : sh.exceed) ++e;  // rho_1 > horizon >= every n
            } else {
                for (std::size_t gi = 0; gi < grid.size(); ++gi)
                    if (s.value > grid[gi]) ++sh.exceed[gi];
            }
        }
    });

    std::vector<SimEstimate> out(grid.size());
    std::uint64_t censored = 0;
    for (const auto& sh : shards) censored += sh.censored;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        std::uint64_t hits = 0;
        for (const auto& sh : shards) hits += sh.exceed[gi];
        SimEstimate& est = out[gi];
        est.statistic = "rho1-tail";
        est.n = static_cast<long long>(grid[gi]);
        est.samples = opt.runs;
        est.censored = censored;
        est.seed = opt.seed;
        binomial_ci(est, hits, opt.runs);
    }
    return out;
}

SimEstimate estimate_rho1_mean(const GapLaw& tau, const GapLaw& sigma,
                               const SimOptions& opt) {
    struct Shard {
        StableSum<double> sum, sum_sq;
        std::uint64_t kept = 0, censored = 0;
    };
    auto shards = run_sharded<Shard>(opt, [&](Shard& sh, SplitMix64& rng,
                                              std::uint64_t runs) {
        for (std::uint64_t i = 0; i < runs; ++i) {
            const Rho1Sample s = simulate_rho1(tau, sigma, opt.horizon, rng);
            if (s.censored) {
                ++sh.censored;
            } else {
                const double v = static_cast<double>(s.value);
                sh.sum.add(v);
                sh.sum_sq.add(v * v);
                ++sh.kept;
            }
        }
    });

    StableSum<double> sum, sum_sq;
    std::uint64_t kept = 0, censored = 0;
    for (const auto& sh : shards) {
        sum.add(sh.sum.value());
        sum_sq.add(sh.sum_sq.value());
        kept += sh.kept;
        censored += sh.censored;
    }
    SimEstimate est;
    est.statistic = "rho1-mean";
    est.samples = opt.runs;
    est.censored = censored;
    est.seed = opt.seed;
    if (kept == 0) throw std::domain_error("estimate_rho1_mean: all runs censored");
    mean_ci(est, sum.value(), sum_sq.value(), kept);
    return est;
}

SimEstimate estimate_hitting_index(const GapLaw& tau, const GapLaw& sigma,
                                   const SimOptions& opt) {
    if (!sigma.mean_finite())
        throw std::domain_error("hitting_index: sigma must have a finite mean");
    struct Shard {
        StableSum<double> sum, sum_sq;
        std::uint64_t kept = 0, censored = 0;
    };
    auto shards = run_sharded<Shard>(opt, [&](Shard& sh, SplitMix64& rng,
                                              std::uint64_t runs) {
        for (std::uint64_t i = 0; i < runs; ++i) {
            const HitSample s = hitting_index(tau, sigma, opt.horizon, rng);
            if (s.censored) {
                ++sh.censored;
            } else {
                const double v = static_cast<double>(s.k);
                sh.sum.add(v);
                sh.sum_sq.add(v * v);
                ++sh.kept;
            }
        }
    });

    StableSum<double> sum, sum_sq;
    std::uint64_t kept = 0, censored = 0;
    for (const auto& sh : shards) {
        sum.add(sh.sum.value());
        sum_sq.add(sh.sum_sq.value());
        kept += sh.kept;
        censored += sh.censored;
    }
    SimEstimate est;
    est.statistic = "hitting-index-mean";
    est.samples = opt.runs;
    est.censored = censored;
    est.seed = opt.seed;
    if (kept == 0) throw std::domain_error("estimate_hitting_index: all runs censored");
    mean_ci(est, sum.value(), sum_sq.value(), kept);
    return est;
}

std::vector<CoupledRow> estimate_coupled_increment(
    const GapLaw& law, const std::vector<std::uint64_t>& grid,
    const SimOptions& opt) {
    // aperiodicity guard: a periodic law started at offset 1 may never couple
    // (GapLaw enforces gcd 1 at construction; keep the guard for clarity)
    if (law.pmf(1) == 0.0) {
        std::size_t g = 0;
        for (std::size_t k = 1; k <= law.horizon(); ++k)
            if (law.pmf(k) > 0.0) g = std::gcd(g, k);
        if (g != 1)
            throw std::domain_error("coupled_increment: law is periodic");
    }
    const std::uint64_t top = *std::max_element(grid.begin(), grid.end());
    if (top > opt.horizon)
        throw std::invalid_argument("coupled_increment: grid beyond horizon");

    struct Shard {
        std::vector<std::uint64_t> hit_tau, hit_sigma, hit_either;
        std::uint64_t censored = 0;
    };
    auto shards = run_sharded<Shard>(opt, [&](Shard& sh, SplitMix64& rng,
                                              std::uint64_t runs) {
        sh.hit_tau.assign(grid.size(), 0);
        sh.hit_sigma.assign(grid.size(), 0);
        sh.hit_either.assign(grid.size(), 0);
        std::vector<std::uint8_t> tau_hits(top + 1), sigma_hits(top + 1);
        for (std::uint64_t i = 0; i < runs; ++i) {
            std::fill(tau_hits.begin(), tau_hits.end(), 0);
            std::fill(sigma_hits.begin(), sigma_hits.end(), 0);
            // tau from 0, sigma from 1; walk to their first common point
            std::uint64_t pt = 0, ps = 1;
            if (ps <= top) sigma_hits[ps] = 1;
            while (pt != ps && std::min(pt, ps) <= opt.horizon) {
                if (pt < ps) {
                    pt = advance(pt, sample_gap(law, rng));
                    if (pt <= top) tau_hits[pt] = 1;
                } else {
                    ps = advance(ps, sample_gap(law, rng));
                    if (ps <= top) sigma_hits[ps] = 1;
                }
            }
            const std::uint64_t rho1 = pt == ps ? pt : kInfiniteGap;
            if (rho1 == kInfiniteGap || rho1 > opt.horizon) ++sh.censored;
            for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                const std::uint64_t n = grid[gi];
                if (rho1 > n) {
                    const bool ht = tau_hits[n] != 0;
                    const bool hs = sigma_hits[n] != 0;
                    if (ht) ++sh.hit_tau[gi];
                    if (hs) ++sh.hit_sigma[gi];
                    if (ht || hs) ++sh.hit_either[gi];  // ht and hs exclusive pre-coupling
                }
            }
        }
    });

    std::vector<CoupledRow> out(grid.size());
    std::uint64_t censored = 0;
    for (const auto& sh : shards) censored += sh.censored;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        std::uint64_t ht = 0, hs = 0, he = 0;
        for (const auto& sh : shards) {
            ht += sh.hit_tau[gi];
            hs += sh.hit_sigma[gi];
            he += sh.hit_either[gi];
        }
        CoupledRow& row = out[gi];
        row.n = grid[gi];
        row.p_tau = static_cast<double>(ht) / static_cast<double>(opt.runs);
        row.p_sigma = static_cast<double>(hs) / static_cast<double>(opt.runs);
        row.bound.statistic = "coupled-increment-bound";
        row.bound.n = static_cast<long long>(grid[gi]);
        row.bound.samples = opt.runs;
        row.bound.censored = censored;
        row.bound.seed = opt.seed;
        // bound = p_tau + p_sigma; the two events are disjoint before coupling,
        // so the sum is itself a Bernoulli mean
        binomial_ci(row.bound, he, opt.runs);
        row.bound.value = row.p_tau + row.p_sigma;
    }
    return out;
}

}  // namespace renewal
