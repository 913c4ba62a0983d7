#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mapstat/decomposition.hpp"
#include "mapstat/error.hpp"
#include "mapstat/estimate.hpp"
#include "mapstat/extremal.hpp"
#include "mapstat/sampling.hpp"

namespace mapstat {

inline constexpr std::size_t kEcdfPoints = 1001;

struct SimulationConfig {
    std::size_t n = 1;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t base_stream = 0;
    std::size_t s_max = 4;
    std::size_t r_max = 2;
    unsigned workers = 1;
    double level = 0.99;
    // Trials per RandomStream. Part of the reproducibility contract: changing
    // it changes the draws, changing `workers` does not.
    std::uint64_t chunk_size = 1024;
};

struct MomentReport {
    std::size_t n = 0;
    std::uint64_t trials = 0;
    Estimate mean_mu_over_n;
    Estimate mean_mu_sq_over_n_sq;
    std::vector<Estimate> mean_tau_over_n; // index s-1
    // Empirical CDFs on the grid x_i = i/1000, i = 0..1000.
    std::vector<std::vector<double>> ecdf_mu_r;   // index r-1
    std::vector<std::vector<double>> ecdf_tau_s;  // index s-1
};

// Everything measured from one set of shared draws. Per-s vectors are
// indexed by s-1.
struct SimulationReport {
    SimulationConfig config;
    std::uint64_t chunks = 0;
    MomentReport moments;
    // P(v in t_s | v in m) from the two-step experiment; empty if no sampled
    // vertex ever landed in the largest component.
    std::vector<std::optional<Estimate>> conditional;
    // mean(tau_s) / mean(mu).
    std::vector<Estimate> ratio;
    // mean(tau_s * [t_s in m]) / mean(mu), the finite-n target of `conditional`.
    std::vector<Estimate> indicator_ratio;
    // ratio - indicator_ratio on the shared draws (never negative).
    std::vector<double> ratio_gap;
    // Fraction of draws with t_s a subgraph of m.
    std::vector<Estimate> subgraph;
    // Pair experiment: P(one vertex in t_1, the other in t_2 | both in m).
    std::optional<Estimate> pair_conditional;
    // Same quantity as 2 mean(tau_1 tau_2 [t_1, t_2 in m]) / mean(mu (mu - 1)).
    std::optional<Estimate> pair_moment_ratio;
};

namespace detail {

struct SimulationSums {
    std::uint64_t count = 0;
    double mu = 0, mu_sq = 0, mu_4 = 0;
    std::vector<double> tau, tau_sq, mu_tau, ind, ind_sq, mu_ind;
    std::uint64_t cond_den = 0;
    std::vector<std::uint64_t> cond_num, subgraph;
    std::uint64_t pair_den = 0, pair_num = 0;
    double pair_y = 0, pair_x = 0, pair_yy = 0, pair_xx = 0, pair_xy = 0;
    std::vector<std::vector<std::uint64_t>> hist_mu, hist_tau;

    SimulationSums(std::size_t s_max, std::size_t r_max)
        : tau(s_max), tau_sq(s_max), mu_tau(s_max), ind(s_max), ind_sq(s_max), mu_ind(s_max),
          cond_num(s_max), subgraph(s_max),
          hist_mu(r_max, std::vector<std::uint64_t>(kEcdfPoints)),
          hist_tau(s_max, std::vector<std::uint64_t>(kEcdfPoints)) {}

    void merge(const SimulationSums& o) {
        count += o.count;
        mu += o.mu;
        mu_sq += o.mu_sq;
        mu_4 += o.mu_4;
        for (std::size_t i = 0; i < tau.size(); ++i) {
            tau[i] += o.tau[i];
            tau_sq[i] += o.tau_sq[i];
            mu_tau[i] += o.mu_tau[i];
            ind[i] += o.ind[i];
            ind_sq[i] += o.ind_sq[i];
            mu_ind[i] += o.mu_ind[i];
            cond_num[i] += o.cond_num[i];
            subgraph[i] += o.subgraph[i];
        }
        cond_den += o.cond_den;
        pair_den += o.pair_den;
        pair_num += o.pair_num;
        pair_y += o.pair_y;
        pair_x += o.pair_x;
        pair_yy += o.pair_yy;
        pair_xx += o.pair_xx;
        pair_xy += o.pair_xy;
        for (std::size_t r = 0; r < hist_mu.size(); ++r)
            for (std::size_t i = 0; i < kEcdfPoints; ++i) hist_mu[r][i] += o.hist_mu[r][i];
        for (std::size_t s = 0; s < hist_tau.size(); ++s)
            for (std::size_t i = 0; i < kEcdfPoints; ++i) hist_tau[s][i] += o.hist_tau[s][i];
    }
};

// Smallest grid index i with i/1000 >= size/n.
inline std::size_t ecdf_bucket(std::size_t size, std::size_t n) {
    const std::size_t steps = kEcdfPoints - 1;
    return (size * steps + n - 1) / n;
}

inline void run_chunk(const SimulationConfig& cfg, std::uint64_t chunk, SimulationSums& acc) {
    const std::size_t n = cfg.n;
    const double inv_n = 1.0 / static_cast<double>(n);
    RandomStream rs(cfg.seed, (cfg.base_stream << 32) | chunk);
    const std::uint64_t begin = chunk * cfg.chunk_size;
    const std::uint64_t end = std::min(cfg.trials, begin + cfg.chunk_size);

    for (std::uint64_t trial = begin; trial < end; ++trial) {
        const Mapping t = sample_mapping(n, rs);
        const Decomposition d = decompose(t);
        const ExtremalStats st = extremal_stats(d);
        const std::size_t mu = st.mu(1);
        const double x = static_cast<double>(mu) * inv_n;

        ++acc.count;
        acc.mu += x;
        acc.mu_sq += x * x;
        acc.mu_4 += x * x * x * x;
        for (std::size_t r = 1; r <= cfg.r_max; ++r)
            ++acc.hist_mu[r - 1][ecdf_bucket(st.mu(r), n)];

        for (std::size_t s = 1; s <= cfg.s_max; ++s) {
            const std::size_t tau = st.tau(s);
            if (tau > mu) throw std::logic_error("sampled tree larger than largest component");
            const double y = static_cast<double>(tau) * inv_n;
            const bool inside = st.tree_in_largest(s);
            const double yi = inside ? y : 0.0;
            acc.tau[s - 1] += y;
            acc.tau_sq[s - 1] += y * y;
            acc.mu_tau[s - 1] += x * y;
            acc.ind[s - 1] += yi;
            acc.ind_sq[s - 1] += yi * yi;
            acc.mu_ind[s - 1] += x * yi;
            acc.subgraph[s - 1] += inside ? 1 : 0;
            ++acc.hist_tau[s - 1][ecdf_bucket(tau, n)];
        }

        // Step two: one uniform vertex shared by every s.
        const Vertex v = sample_vertex(n, rs);
        if (d.component_of[v] == st.largest_component_index) {
            ++acc.cond_den;
            for (std::size_t s = 1; s <= cfg.s_max; ++s)
                if (d.tree_of[v] == st.tree_id(s)) ++acc.cond_num[s - 1];
        }

        if (n >= 2) {
            const auto [a, b] = sample_vertex_pair(n, rs);
            const auto largest = st.largest_component_index;
            if (d.component_of[a] == largest && d.component_of[b] == largest) {
                ++acc.pair_den;
                const std::size_t t1 = st.tree_id(1), t2 = st.tree_id(2);
                if ((d.tree_of[a] == t1 && d.tree_of[b] == t2) ||
                    (d.tree_of[a] == t2 && d.tree_of[b] == t1))
                    ++acc.pair_num;
            }
            const bool both = st.tree_in_largest(1) && st.tree_in_largest(2);
            const double py =
                both ? 2.0 * static_cast<double>(st.tau(1)) * static_cast<double>(st.tau(2)) *
                           inv_n * inv_n
                     : 0.0;
            const double px = static_cast<double>(mu) * static_cast<double>(mu - 1) * inv_n * inv_n;
            acc.pair_y += py;
            acc.pair_x += px;
            acc.pair_yy += py * py;
            acc.pair_xx += px * px;
            acc.pair_xy += px * py;
        }
    }
}

inline std::vector<double> ecdf_from_histogram(const std::vector<std::uint64_t>& hist,
                                               std::uint64_t total) {
    std::vector<double> f(hist.size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        running += hist[i];
        f[i] = static_cast<double>(running) / static_cast<double>(total);
    }
    return f;
}

inline SimulationReport finish(const SimulationConfig& cfg, std::uint64_t chunks,
                               const SimulationSums& acc) {
    SimulationReport rep;
    rep.config = cfg;
    rep.chunks = chunks;
    const double level = cfg.level;
    const std::uint64_t m = acc.count;

    MomentReport& mom = rep.moments;
    mom.n = cfg.n;
    mom.trials = m;
    mom.mean_mu_over_n = mean_estimate(acc.mu, acc.mu_sq, m, level);
    mom.mean_mu_sq_over_n_sq = mean_estimate(acc.mu_sq, acc.mu_4, m, level);
    for (const auto& h : acc.hist_mu) mom.ecdf_mu_r.push_back(ecdf_from_histogram(h, m));
    for (const auto& h : acc.hist_tau) mom.ecdf_tau_s.push_back(ecdf_from_histogram(h, m));

    for (std::size_t i = 0; i < cfg.s_max; ++i) {
        mom.mean_tau_over_n.push_back(mean_estimate(acc.tau[i], acc.tau_sq[i], m, level));
        if (acc.cond_den > 0)
            rep.conditional.emplace_back(proportion_estimate(acc.cond_num[i], acc.cond_den, level, m));
        else
            rep.conditional.emplace_back(std::nullopt);
        rep.ratio.push_back(
            ratio_estimate(acc.tau[i], acc.mu, acc.tau_sq[i], acc.mu_sq, acc.mu_tau[i], m, level));
        rep.indicator_ratio.push_back(
            ratio_estimate(acc.ind[i], acc.mu, acc.ind_sq[i], acc.mu_sq, acc.mu_ind[i], m, level));
        rep.ratio_gap.push_back(rep.ratio.back().point - rep.indicator_ratio.back().point);
        rep.subgraph.push_back(proportion_estimate(acc.subgraph[i], m, level, m));
    }

    if (cfg.n >= 2 && acc.pair_den > 0) {
        rep.pair_conditional = proportion_estimate(acc.pair_num, acc.pair_den, level, m);
        rep.pair_moment_ratio = ratio_estimate(acc.pair_y, acc.pair_x, acc.pair_yy, acc.pair_xx,
                                               acc.pair_xy, m, level);
    }
    return rep;
}

} // namespace detail

// Runs `trials` independent two-step experiments and derives every estimator
// from the same draws.
//
// Trials are cut into chunks of cfg.chunk_size; chunk k draws from stream
// (base_stream << 32 | k). Workers pull chunks from a shared counter and the
// partial sums are folded strictly in chunk order, so the report is
// bit-identical for any worker count.
inline SimulationReport simulate(const SimulationConfig& cfg) {
    if (cfg.n == 0) throw InvalidSize("simulate: n must be positive");
    if (cfg.trials == 0) throw InvalidConfig("simulate: trials must be positive");
    if (cfg.s_max == 0 || cfg.r_max == 0) throw InvalidConfig("simulate: s_max and r_max must be >= 1");
    if (cfg.chunk_size == 0) throw InvalidConfig("simulate: chunk_size must be positive");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw InvalidConfig("simulate: level must be in (0, 1)");

    const std::uint64_t chunks = (cfg.trials + cfg.chunk_size - 1) / cfg.chunk_size;
    const unsigned workers = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(cfg.workers, chunks)));

    detail::SimulationSums total(cfg.s_max, cfg.r_max);
    std::map<std::uint64_t, detail::SimulationSums> pending;
    std::uint64_t next_fold = 0;
    std::mutex fold_mutex;
    std::atomic<std::uint64_t> next_chunk{0};
    std::exception_ptr failure;

    auto work = [&] {
        try {
            for (std::uint64_t k = next_chunk++; k < chunks; k = next_chunk++) {
                detail::SimulationSums part(cfg.s_max, cfg.r_max);
                detail::run_chunk(cfg, k, part);
                std::lock_guard lock(fold_mutex);
                pending.emplace(k, std::move(part));
                for (auto it = pending.find(next_fold); it != pending.end();
                     it = pending.find(next_fold)) {
                    total.merge(it->second);
                    pending.erase(it);
                    ++next_fold;
                }
            }
        } catch (...) {
            std::lock_guard lock(fold_mutex);
            if (!failure) failure = std::current_exception();
            next_chunk = chunks;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return detail::finish(cfg, chunks, total);
}

inline MomentReport estimate_moments(std::size_t n, std::uint64_t trials, const RandomStream& rs,
                                     std::size_t s_max, std::size_t r_max, unsigned workers = 1) {
    SimulationConfig cfg{.n = n, .trials = trials, .seed = rs.seed(), .base_stream = rs.stream_id(),
                         .s_max = s_max, .r_max = r_max, .workers = workers};
    return simulate(cfg).moments;
}

inline Estimate estimate_conditional_ps(std::size_t n, std::uint64_t trials, std::size_t s,
                                        const RandomStream& rs, unsigned workers = 1) {
    SimulationConfig cfg{.n = n, .trials = trials, .seed = rs.seed(), .base_stream = rs.stream_id(),
                         .s_max = s, .r_max = 1, .workers = workers};
    auto rep = simulate(cfg);
    if (!rep.conditional[s - 1])
        throw DegenerateCondition("no sampled vertex fell in the largest component");
    return *rep.conditional[s - 1];
}

inline Estimate estimate_ratio_ps(std::size_t n, std::uint64_t trials, std::size_t s,
                                  const RandomStream& rs, unsigned workers = 1) {
    SimulationConfig cfg{.n = n, .trials = trials, .seed = rs.seed(), .base_stream = rs.stream_id(),
                         .s_max = s, .r_max = 1, .workers = workers};
    return simulate(cfg).ratio[s - 1];
}

inline Estimate estimate_subgraph_prob(std::size_t n, std::uint64_t trials, std::size_t s,
                                       const RandomStream& rs, unsigned workers = 1) {
    SimulationConfig cfg{.n = n, .trials = trials, .seed = rs.seed(), .base_stream = rs.stream_id(),
                         .s_max = s, .r_max = 1, .workers = workers};
    return simulate(cfg).subgraph[s - 1];
}

struct PairEstimate {
    Estimate conditional;
    Estimate moment_ratio;
};

inline PairEstimate estimate_pair_conditional(std::size_t n, std::uint64_t trials,
                                              const RandomStream& rs, unsigned workers = 1) {
    if (n < 2) throw InvalidSize("estimate_pair_conditional: n must be at least 2");
    SimulationConfig cfg{.n = n, .trials = trials, .seed = rs.seed(), .base_stream = rs.stream_id(),
                         .s_max = 2, .r_max = 1, .workers = workers};
    auto rep = simulate(cfg);
    if (!rep.pair_conditional)
        throw DegenerateCondition("no sampled pair fell inside the largest component");
    return {*rep.pair_conditional, *rep.pair_moment_ratio};
}

} // namespace mapstat
