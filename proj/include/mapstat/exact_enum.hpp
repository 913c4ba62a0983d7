#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mapstat/decomposition.hpp"
#include "mapstat/error.hpp"
#include "mapstat/extremal.hpp"
#include "mapstat/rational.hpp"

namespace mapstat {

inline constexpr std::size_t kDefaultEnumerationCap = 7;
inline constexpr std::size_t kLongRunEnumerationCap = 8;

// Exact statistics over all n^n mappings, kept as integer sums. Every value
// exposed through the accessors is an exact rational.
struct ExactTable {
    std::size_t n = 0;
    std::size_t s_max = 0;
    std::size_t r_max = 0;
    std::uint64_t total = 0; // n^n

    std::uint64_t sum_mu = 0;
    std::uint64_t sum_mu_sq = 0;
    std::vector<std::uint64_t> sum_tau;           // index s-1
    std::vector<std::uint64_t> sum_tau_in_largest; // tau_s * [t_s in m]
    std::vector<std::uint64_t> count_in_largest;  // #{T : t_s in m}
    std::uint64_t sum_pair_numerator = 0;          // tau_1 tau_2 [t_1, t_2 in m]
    std::uint64_t sum_mu_falling = 0;              // mu (mu - 1)
    std::uint64_t connected_count = 0;
    // counts[r-1][k] = #{T : mu_{n,r} = k}, k = 0..n; same for tau_{n,s}.
    std::vector<std::vector<std::uint64_t>> mu_counts;
    std::vector<std::vector<std::uint64_t>> tau_counts;

    Rational mean_mu() const { return Rational(sum_mu) / total; }
    Rational mean_mu_sq() const { return Rational(sum_mu_sq) / total; }
    Rational mean_tau(std::size_t s) const { return Rational(sum_tau.at(s - 1)) / total; }
    Rational mean_tau_in_largest(std::size_t s) const {
        return Rational(sum_tau_in_largest.at(s - 1)) / total;
    }
    // q_{n,s} = P(t_s is a subgraph of m).
    Rational subgraph_prob(std::size_t s) const {
        return Rational(count_in_largest.at(s - 1)) / total;
    }
    // P(v in t_s | v in m) under the two-step measure.
    Rational conditional(std::size_t s) const {
        return Rational(sum_tau_in_largest.at(s - 1), sum_mu);
    }
    // P(one of {v1, v2} in t_1, the other in t_2 | both in m); needs n >= 2.
    Rational pair_conditional() const {
        return Rational(2 * BigInt(sum_pair_numerator), BigInt(sum_mu_falling));
    }
    Rational connected_fraction() const { return Rational(connected_count) / total; }

    Rational mu_pmf(std::size_t r, std::size_t k) const {
        return Rational(mu_counts.at(r - 1).at(k)) / total;
    }
    Rational tau_pmf(std::size_t s, std::size_t k) const {
        return Rational(tau_counts.at(s - 1).at(k)) / total;
    }
    Rational mu_cdf(std::size_t r, std::size_t m) const { return cdf(mu_counts.at(r - 1), m); }
    Rational tau_cdf(std::size_t s, std::size_t m) const { return cdf(tau_counts.at(s - 1), m); }

    void merge(const ExactTable& o) {
        total += o.total;
        sum_mu += o.sum_mu;
        sum_mu_sq += o.sum_mu_sq;
        for (std::size_t i = 0; i < s_max; ++i) {
            sum_tau[i] += o.sum_tau[i];
            sum_tau_in_largest[i] += o.sum_tau_in_largest[i];
            count_in_largest[i] += o.count_in_largest[i];
        }
        sum_pair_numerator += o.sum_pair_numerator;
        sum_mu_falling += o.sum_mu_falling;
        connected_count += o.connected_count;
        for (std::size_t r = 0; r < r_max; ++r)
            for (std::size_t k = 0; k <= n; ++k) mu_counts[r][k] += o.mu_counts[r][k];
        for (std::size_t s = 0; s < s_max; ++s)
            for (std::size_t k = 0; k <= n; ++k) tau_counts[s][k] += o.tau_counts[s][k];
    }

    static ExactTable empty(std::size_t n, std::size_t s_max, std::size_t r_max) {
        ExactTable t;
        t.n = n;
        t.s_max = s_max;
        t.r_max = r_max;
        t.sum_tau.assign(s_max, 0);
        t.sum_tau_in_largest.assign(s_max, 0);
        t.count_in_largest.assign(s_max, 0);
        t.mu_counts.assign(r_max, std::vector<std::uint64_t>(n + 1, 0));
        t.tau_counts.assign(s_max, std::vector<std::uint64_t>(n + 1, 0));
        return t;
    }

private:
    Rational cdf(const std::vector<std::uint64_t>& counts, std::size_t m) const {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k <= m && k < counts.size(); ++k) acc += counts[k];
        return Rational(acc) / total;
    }
};

struct EnumerationOptions {
    std::size_t cap = kDefaultEnumerationCap;
    unsigned workers = 1;
};

namespace detail {

inline void tally(const Mapping& t, ExactTable& acc) {
    const Decomposition d = decompose(t);
    const ExtremalStats st = extremal_stats(d);
    const std::uint64_t mu = st.mu(1);
    ++acc.total;
    acc.sum_mu += mu;
    acc.sum_mu_sq += mu * mu;
    acc.sum_mu_falling += mu * (mu - 1);
    if (d.components.size() == 1) ++acc.connected_count;
    for (std::size_t r = 1; r <= acc.r_max; ++r) ++acc.mu_counts[r - 1][st.mu(r)];
    for (std::size_t s = 1; s <= acc.s_max; ++s) {
        const std::uint64_t tau = st.tau(s);
        acc.sum_tau[s - 1] += tau;
        ++acc.tau_counts[s - 1][tau];
        if (st.tree_in_largest(s)) {
            acc.sum_tau_in_largest[s - 1] += tau;
            ++acc.count_in_largest[s - 1];
        }
    }
    if (st.tree_in_largest(1) && st.tree_in_largest(2))
        acc.sum_pair_numerator += st.tau(1) * st.tau(2);
}

// All mappings whose first image is `lead`, in odometer order over the
// remaining images (last position varies fastest).
inline void enumerate_leading(std::size_t n, Vertex lead, ExactTable& acc) {
    std::vector<Vertex> images(n, 0);
    images[0] = lead;
    while (true) {
        tally(Mapping(images), acc);
        std::size_t pos = n;
        while (true) {
            if (pos == 1) return;
            --pos;
            if (++images[pos] < n) break;
            images[pos] = 0;
        }
    }
}

} // namespace detail

// Exhaustive pass over all n^n mappings. Work is split by the first image;
// partial tables are merged with exact integer sums, so the result does not
// depend on the number of workers.
inline ExactTable enumerate_all(std::size_t n, std::size_t s_max, std::size_t r_max,
                                EnumerationOptions options = {}) {
    if (n == 0) throw InvalidSize("enumerate_all: n must be positive");
    if (s_max == 0 || r_max == 0) throw InvalidConfig("enumerate_all: s_max and r_max must be >= 1");
    if (n > options.cap)
        throw CapExceeded("enumerate_all: n = " + std::to_string(n) + " exceeds cap " +
                          std::to_string(options.cap));
    // s = 2 is always tallied because the pair statistic needs it.
    const std::size_t s_eff = std::max<std::size_t>(s_max, 2);

    std::vector<ExactTable> parts(n, ExactTable::empty(n, s_eff, r_max));
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t lead = 0; lead < n; ++lead)
            detail::enumerate_leading(n, static_cast<Vertex>(lead), parts[lead]);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t lead = w; lead < n; lead += workers)
                            detail::enumerate_leading(n, static_cast<Vertex>(lead), parts[lead]);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    ExactTable table = ExactTable::empty(n, s_eff, r_max);
    for (const auto& part : parts) table.merge(part);
    if (s_eff != s_max) {
        // Trim back to what the caller asked for.
        table.s_max = s_max;
        table.sum_tau.resize(s_max);
        table.sum_tau_in_largest.resize(s_max);
        table.count_in_largest.resize(s_max);
        table.tau_counts.resize(s_max);
    }
    return table;
}

} // namespace mapstat
