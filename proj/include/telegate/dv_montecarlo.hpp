#pragma once

// Discrete-variable resource accounting: multiplexed Bell/GHZ factories,
// Knill CSIGN application, cluster joining with standard or advanced Bell
// measurements, and the layered ancilla set that boosts the Bell-measurement
// success probability to 1 - 2^-N.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace telegate {

// Deterministic per-trial random stream.  Each trial derives its own stream
// from (master_seed, stream_id), so results do not depend on scheduling.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : engine_(mix(mix(master_seed) + stream_id)) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

struct FactorySpec {
    int photons_per_attempt = 0;
    double success_prob = 0.0;
};

inline constexpr FactorySpec kBellFactory{4, 3.0 / 16.0};
inline constexpr FactorySpec kGhz3Factory{6, 1.0 / 32.0};
inline constexpr FactorySpec kKnillCsign{2, 2.0 / 27.0};
inline constexpr FactorySpec kStandardBm{0, 0.5};
inline constexpr FactorySpec kAdvancedBm{4, 0.75};

enum class ResRoute { knill, cluster_std, cluster_adv };

inline const char* route_name(ResRoute r) {
    switch (r) {
        case ResRoute::knill: return "knill";
        case ResRoute::cluster_std: return "cluster_std";
        case ResRoute::cluster_adv: return "cluster_adv";
    }
    throw std::invalid_argument("route_name: unknown route");
}

inline ResRoute route_from_name(const std::string& s) {
    if (s == "knill") return ResRoute::knill;
    if (s == "cluster_std") return ResRoute::cluster_std;
    if (s == "cluster_adv") return ResRoute::cluster_adv;
    throw std::invalid_argument("route_from_name: unknown route '" + s + "'");
}

// Expected photon count per teleportation resource state under ideal
// multiplexing: every factory attempt is independent, failed joins destroy
// their inputs, and nothing is stored between rounds.
inline double expected_cost_res_state(ResRoute route) {
    const double bell_cost = kBellFactory.photons_per_attempt / kBellFactory.success_prob;
    const double ghz3_cost = kGhz3Factory.photons_per_attempt / kGhz3Factory.success_prob;
    switch (route) {
        case ResRoute::knill:
            return (2.0 * bell_cost + kKnillCsign.photons_per_attempt) / kKnillCsign.success_prob;
        case ResRoute::cluster_std:
            return (2.0 * ghz3_cost + kStandardBm.photons_per_attempt) / kStandardBm.success_prob;
        case ResRoute::cluster_adv:
            return (2.0 * ghz3_cost + kAdvancedBm.photons_per_attempt) / kAdvancedBm.success_prob;
    }
    throw std::invalid_argument("expected_cost_res_state: unknown route");
}

struct ResourceCurvePoint {
    double x = 0.0;  // n_sources
    double success_prob = 0.0;
    double stderr_ = 0.0;
};

struct ResourceCurve {
    std::vector<ResourceCurvePoint> samples;
};

namespace detail {

// Consumes budget for repeated factory attempts until one succeeds or the
// budget runs out.  Returns success; photons are deducted either way.
inline bool run_factory(const FactorySpec& f, long long& budget, RngStream& rng,
                        bool unlimited) {
    while (unlimited || budget >= f.photons_per_attempt) {
        budget -= f.photons_per_attempt;
        if (rng.bernoulli(f.success_prob)) return true;
    }
    return false;
}

}  // namespace detail

// One production round: returns true if a resource state was produced within
// the photon budget.  `photons_used` reports the photons actually consumed.
inline bool run_res_trial(ResRoute route, long long budget, RngStream& rng,
                          long long* photons_used = nullptr) {
    const bool unlimited = budget < 0;
    const long long start = budget;
    const FactorySpec primitive = (route == ResRoute::knill) ? kBellFactory : kGhz3Factory;
    const FactorySpec joiner = (route == ResRoute::knill)        ? kKnillCsign
                               : (route == ResRoute::cluster_std) ? kStandardBm
                                                                  : kAdvancedBm;
    bool produced = false;
    while (!produced) {
        // two primitives, then one joining attempt; a failed join wastes both
        bool have_both = detail::run_factory(primitive, budget, rng, unlimited) &&
                         detail::run_factory(primitive, budget, rng, unlimited);
        if (!have_both) break;
        if (!unlimited && budget < joiner.photons_per_attempt) break;
        budget -= joiner.photons_per_attempt;
        produced = rng.bernoulli(joiner.success_prob);
    }
    if (photons_used) *photons_used = unlimited ? -budget : start - budget;
    return produced;
}

inline ResourceCurve simulate_res_state_curve(ResRoute route,
                                              const std::vector<long long>& n_sources_grid,
                                              int trials, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("simulate_res_state_curve: trials must be >= 1");
    ResourceCurve curve;
    curve.samples.reserve(n_sources_grid.size());
    for (std::size_t gi = 0; gi < n_sources_grid.size(); ++gi) {
        long long successes = 0;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(master_seed, static_cast<std::uint64_t>(gi) * trials + t);
            if (run_res_trial(route, n_sources_grid[gi], rng)) ++successes;
        }
        double p = static_cast<double>(successes) / trials;
        curve.samples.push_back(
            {static_cast<double>(n_sources_grid[gi]), p, std::sqrt(p * (1.0 - p) / trials)});
    }
    return curve;
}

// Empirical mean photon cost per produced resource state.
inline double mean_cost_per_res(ResRoute route, int trials, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("mean_cost_per_res: trials must be >= 1");
    long long total = 0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(master_seed, t);
        long long used = 0;
        run_res_trial(route, -1, rng, &used);
        total += used;
    }
    return static_cast<double>(total) / trials;
}

// Joins two GHZ states of the given sizes through a Bell measurement; on
// success the result has size j + k - 2, on failure both inputs are lost.
inline int ghz_join(int size_j, int size_k, bool bm_success) {
    if (size_j < 2 || size_k < 2) throw std::invalid_argument("ghz_join: sizes must be >= 2");
    return bm_success ? size_j + size_k - 2 : 0;
}

// Analytic estimate for the photon cost of the full boosted-BM ancilla set.
inline double grice_cost_estimate(int n_level) {
    if (n_level <= 3)
        throw std::invalid_argument("grice_cost_estimate: defined only for N > 3");
    return 200.0 * std::pow(8.0 / 3.0, n_level - 1);
}

// Photon bookkeeping for one ancilla-construction trial; the conservation
// identity injected == surviving + detected + lost holds at all times.
struct GriceTrialStats {
    long long injected = 0;
    long long detected = 0;
    long long lost = 0;
    long long surviving = 0;
    bool complete = false;
    int fulfilled_levels = 0;  // consecutive targets met, counted from the smallest
    double p_bm = 0.0;

    bool books_balance() const { return injected == surviving + detected + lost; }
};

namespace detail {

struct GhzPool {
    std::vector<int> sizes;  // kept sorted ascending

    void push(int s) { sizes.insert(std::upper_bound(sizes.begin(), sizes.end(), s), s); }
    long long photons() const {
        long long t = 0;
        for (int s : sizes) t += s;
        return t;
    }
};

// GHZ3 creation within budget; updates the books.
inline bool make_ghz3(long long& budget, bool unlimited, RngStream& rng, GriceTrialStats& st,
                      GhzPool& pool) {
    while (unlimited || budget >= kGhz3Factory.photons_per_attempt) {
        budget -= kGhz3Factory.photons_per_attempt;
        st.injected += kGhz3Factory.photons_per_attempt;
        if (rng.bernoulli(kGhz3Factory.success_prob)) {
            pool.push(3);
            st.detected += 3;  // half of the six inputs are measured in the heralding
            return true;
        }
        st.lost += kGhz3Factory.photons_per_attempt;
    }
    return false;
}

// Index of the larger element of the largest equal-size pair, or -1.  Equal
// sizes keep the growth schedule a doubling ladder; joining unequal states
// would grow by single qubits and lose everything on each failure.
inline int largest_equal_pair(const GhzPool& pool) {
    for (int i = static_cast<int>(pool.sizes.size()) - 1; i >= 1; --i)
        if (pool.sizes[i] == pool.sizes[i - 1]) return i;
    return -1;
}

// Advanced-BM join of the pool states at indices i-1 and i; updates the books.
inline bool join_pair(int i, long long& budget, bool unlimited, RngStream& rng,
                      GriceTrialStats& st, GhzPool& pool) {
    if (!unlimited && budget < kAdvancedBm.photons_per_attempt) return false;
    budget -= kAdvancedBm.photons_per_attempt;
    st.injected += kAdvancedBm.photons_per_attempt;
    int a = pool.sizes[i - 1];
    int b = pool.sizes[i];
    pool.sizes.erase(pool.sizes.begin() + i - 1, pool.sizes.begin() + i + 1);
    if (rng.bernoulli(kAdvancedBm.success_prob)) {
        pool.push(a + b - 2);
        st.detected += 2 + kAdvancedBm.photons_per_attempt;
        return true;
    }
    st.lost += a + b + kAdvancedBm.photons_per_attempt;
    return true;  // the attempt itself went through; only the states are gone
}

}  // namespace detail

// Builds the ancilla set Bell + GHZ4 + GHZ8 + ... + GHZ_{2^(N-1)} from GHZ3
// factories and advanced-BM joins, largest target first, sharing one state
// pool so smaller targets pick up by-products.  Oversized states are trimmed
// for free (one detected photon per removed qubit).  If the budget runs out,
// the Bell measurement degrades: with the L smallest targets met its success
// probability is 1 - 2^-(1+L).
inline GriceTrialStats run_grice_trial(int n_level, long long budget, RngStream& rng) {
    if (n_level < 1) throw std::invalid_argument("run_grice_trial: N must be >= 1");
    const bool unlimited = budget < 0;
    GriceTrialStats st;
    detail::GhzPool pool;

    std::vector<int> targets;  // descending: 2^(N-1), ..., 4, 2
    for (int k = n_level - 1; k >= 1; --k) targets.push_back(1 << k);
    std::vector<bool> met(targets.size(), false);

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const int target = targets[ti];
        while (true) {
            auto it = std::lower_bound(pool.sizes.begin(), pool.sizes.end(), target);
            if (it != pool.sizes.end()) {
                int s = *it;
                pool.sizes.erase(it);
                st.detected += s - target;  // trim surplus qubits
                st.surviving += target;
                met[ti] = true;
                break;
            }
            bool progressed = false;
            int pair = detail::largest_equal_pair(pool);
            if (pair >= 0)
                progressed = detail::join_pair(pair, budget, unlimited, rng, st, pool);
            else
                progressed = detail::make_ghz3(budget, unlimited, rng, st, pool);
            if (!progressed) break;  // out of budget
        }
    }

    st.surviving += pool.photons();
    st.complete = std::all_of(met.begin(), met.end(), [](bool b) { return b; });
    int consecutive = 0;
    for (std::size_t i = targets.size(); i-- > 0;) {
        if (!met[i]) break;  // count upward from the smallest target
        ++consecutive;
    }
    st.fulfilled_levels = consecutive;
    st.p_bm = 1.0 - std::pow(2.0, -(1.0 + consecutive));
    return st;
}

inline ResourceCurve simulate_grice_cost(int n_level,
                                         const std::vector<long long>& n_sources_grid,
                                         int trials, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("simulate_grice_cost: trials must be >= 1");
    ResourceCurve curve;
    curve.samples.reserve(n_sources_grid.size());
    for (std::size_t gi = 0; gi < n_sources_grid.size(); ++gi) {
        double sum = 0.0, sum2 = 0.0;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(master_seed, static_cast<std::uint64_t>(gi) * trials + t);
            double p = run_grice_trial(n_level, n_sources_grid[gi], rng).p_bm;
            sum += p;
            sum2 += p * p;
        }
        double mean = sum / trials;
        double var = std::max(0.0, sum2 / trials - mean * mean);
        curve.samples.push_back(
            {static_cast<double>(n_sources_grid[gi]), mean, std::sqrt(var / trials)});
    }
    return curve;
}

// Mean photon cost to finish the complete ancilla set.
inline double grice_completion_cost(int n_level, int trials, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("grice_completion_cost: trials must be >= 1");
    long long total = 0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(master_seed, t);
        total += run_grice_trial(n_level, -1, rng).injected;
    }
    return static_cast<double>(total) / trials;
}

// Number of sources to provision so the full ancilla set is ready with the
// given confidence: a quantile of the completion-cost distribution.  The
// distribution is strongly right-skewed, so this is well above the mean.
inline long long grice_required_sources(int n_level, int trials, std::uint64_t master_seed,
                                        double confidence = 0.8) {
    if (trials < 1) throw std::invalid_argument("grice_required_sources: trials must be >= 1");
    if (confidence <= 0.0 || confidence >= 1.0)
        throw std::invalid_argument("grice_required_sources: confidence must lie in (0,1)");
    std::vector<long long> costs(trials);
    for (int t = 0; t < trials; ++t) {
        RngStream rng(master_seed, t);
        costs[t] = run_grice_trial(n_level, -1, rng).injected;
    }
    std::sort(costs.begin(), costs.end());
    auto idx = static_cast<std::size_t>(confidence * (trials - 1));
    return costs[idx];
}

// Quality of the DV gate: both teleportations must succeed and the heralded
// resource must be available; the conditional fidelity is 1.
inline double dv_quality(double p_resource, double p_bm) {
    if (p_resource < 0.0 || p_resource > 1.0 || p_bm < 0.0 || p_bm > 1.0)
        throw std::invalid_argument("dv_quality: probabilities must lie in [0,1]");
    return p_resource * p_bm * p_bm;
}

}  // namespace telegate
