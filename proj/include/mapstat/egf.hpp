#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "mapstat/error.hpp"
#include "mapstat/series.hpp"

namespace mapstat {

// T(x) = sum_k k^(k-1) x^k / k!, the EGF of rooted labelled trees.
template <class Arith>
SeriesPoly<Arith> tree_series(std::size_t N) {
    return SeriesPoly<Arith>(Arith::tree_coefficients(N));
}

// C(x) = log(1 / (1 - T(x))), the EGF of connected mappings.
template <class Arith>
SeriesPoly<Arith> connected_series(std::size_t N) {
    using V = typename Arith::value_type;
    SeriesPoly<Arith> one_minus_t = tree_series<Arith>(N) * V(-1);
    one_minus_t[0] = V(1);
    return series_log(one_minus_t) * V(-1);
}

// Exact finite-n distributions of the ranked component and tree sizes of a
// uniform random mapping, read off truncated EGFs.
//
// With C_m and T_m the truncations of C and T to degree <= m:
//   P(mu_{n,r} <= m)  = n!/n^n [x^n] exp(C_m) sum_{j<r} (C - C_m)^j / j!
//   P(tau_{n,s} <= m) = n!/n^n [x^n] sum_{j<s} (T - T_m)^j / (1 - T_m)^(j+1)
// In the second formula the j-th term counts mappings with exactly j trees
// larger than m.
template <class Arith>
class MappingSeries {
public:
    using value_type = typename Arith::value_type;

    explicit MappingSeries(std::size_t N)
        : trees_(tree_series<Arith>(N)),
          connected_(connected_series<Arith>(N)),
          mappings_(Arith::mapping_coefficients(N)) {}

    std::size_t order() const noexcept { return trees_.order(); }
    const SeriesPoly<Arith>& trees() const noexcept { return trees_; }
    const SeriesPoly<Arith>& connected() const noexcept { return connected_; }

    // n!/n^n [x^n] exp(C); equals 1.
    value_type total_mass(std::size_t n) const {
        check(n);
        SeriesPoly<Arith> c(std::vector<value_type>(connected_.coeffs().begin(),
                                                    connected_.coeffs().begin() + n + 1));
        return Arith::extract(n, series_exp(c)[n]);
    }

    // P(mu_n <= m) from a direct exponential of the truncated series.
    value_type largest_component_cdf(std::size_t n, std::size_t m) const {
        return rth_largest_component_cdf(n, m, 1);
    }

    // P(mu_n <= m) for m = 0..n in O(n^2 log n), built by multiplying in one
    // factor exp(c_m x^m) at a time.
    std::vector<value_type> largest_component_cdf_table(std::size_t n) const {
        check(n);
        std::vector<value_type> f(n + 1, value_type(0));
        f[0] = value_type(1);
        std::vector<value_type> table(n + 1);
        table[0] = Arith::extract(n, f[n]);
        std::vector<value_type> powers;
        for (std::size_t m = 1; m <= n; ++m) {
            const value_type a = connected_[m];
            const std::size_t jmax = n / m;
            powers.assign(jmax + 1, value_type(1));
            for (std::size_t j = 1; j <= jmax; ++j) powers[j] = powers[j - 1] * a / value_type(j);
            for (std::size_t k = n; k >= m; --k) {
                value_type acc = f[k];
                for (std::size_t j = 1; j * m <= k; ++j) acc += powers[j] * f[k - j * m];
                f[k] = acc;
            }
            table[m] = Arith::extract(n, f[n]);
        }
        return table;
    }

    value_type rth_largest_component_cdf(std::size_t n, std::size_t m, std::size_t r) const {
        check(n);
        if (r == 0) throw InvalidConfig("component rank r must be >= 1");
        m = std::min(m, n);
        SeriesPoly<Arith> head(n), tail(n);
        for (std::size_t k = 1; k <= n; ++k) (k <= m ? head : tail)[k] = connected_[k];
        const SeriesPoly<Arith> e = series_exp(head);
        // sum_{j<r} tail^j / j!; tail starts at degree m+1 so j(m+1) > n vanishes.
        SeriesPoly<Arith> sum(n), power(n);
        sum[0] = power[0] = value_type(1);
        for (std::size_t j = 1; j < r && j * (m + 1) <= n; ++j) {
            power = power * tail * (value_type(1) / value_type(j));
            for (std::size_t k = 0; k <= n; ++k) sum[k] += power[k];
        }
        value_type acc = detail::dot_reversed(e.coeffs().data(), &sum[n], n + 1);
        return Arith::extract(n, acc);
    }

    std::vector<value_type> rth_largest_component_cdf_table(std::size_t n, std::size_t r) const {
        if (r == 1) return largest_component_cdf_table(n);
        std::vector<value_type> table(n + 1);
        for (std::size_t m = 0; m <= n; ++m) table[m] = rth_largest_component_cdf(n, m, r);
        return table;
    }

    value_type sth_largest_tree_cdf(std::size_t n, std::size_t m, std::size_t s) const {
        check(n);
        if (s == 0) throw InvalidConfig("tree rank s must be >= 1");
        const auto terms = tree_terms(n, std::min(m, n), s - 1);
        value_type acc(0);
        for (const auto& term : terms) acc += term;
        return Arith::extract(n, acc);
    }

    // tables[s-1][m] = P(tau_{n,s} <= m), m = 0..n, s = 1..s_max.
    std::vector<std::vector<value_type>> tree_cdf_tables(std::size_t n, std::size_t s_max) const {
        check(n);
        if (s_max == 0) throw InvalidConfig("tree rank s must be >= 1");
        std::vector<std::vector<value_type>> tables(s_max, std::vector<value_type>(n + 1));
        for (std::size_t m = 0; m <= n; ++m) {
            const auto terms = tree_terms(n, m, s_max - 1);
            value_type acc(0);
            for (std::size_t s = 1; s <= s_max; ++s) {
                acc += terms[s - 1];
                tables[s - 1][m] = Arith::extract(n, acc);
            }
        }
        return tables;
    }

    // E(mu_n) = sum_{m<n} (1 - P(mu_n <= m)).
    value_type exact_expectation_mu(std::size_t n) const {
        const auto table = largest_component_cdf_table(n);
        return tail_sum(table);
    }

    value_type exact_expectation_tau(std::size_t n, std::size_t s) const {
        return exact_expectations_tau(n, s).at(s - 1);
    }

    // E(tau_{n,s}) for s = 1..s_max from one pass over m.
    std::vector<value_type> exact_expectations_tau(std::size_t n, std::size_t s_max) const {
        const auto tables = tree_cdf_tables(n, s_max);
        std::vector<value_type> out;
        out.reserve(s_max);
        for (const auto& t : tables) out.push_back(tail_sum(t));
        return out;
    }

    // [x^n] (T - T_m)^j / (1 - T_m)^(j+1) for j = 0..jmax, unnormalised.
    //
    // Q = 1/(1 - T_m) agrees with 1/(1 - T) below degree m+1 and satisfies
    // Q = 1 + T_m Q above it. Each further term is R * (Q * P_prev) with
    // R = T - T_m; multiplying by Q is again the recurrence Y = P + T_m Y.
    std::vector<value_type> tree_terms(std::size_t n, std::size_t m, std::size_t jmax) const {
        check(n);
        const auto& t = trees_.coeffs();
        std::vector<value_type> terms(jmax + 1, value_type(0));

        std::vector<value_type> p(n + 1);
        const std::size_t head = std::min(m, n);
        std::copy(mappings_.begin(), mappings_.begin() + head + 1, p.begin());
        for (std::size_t k = m + 1; k <= n; ++k)
            p[k] = detail::dot_reversed(&t[1], &p[k - 1], m);
        terms[0] = p[n];

        // Only terms with j (m+1) <= n reach degree n.
        const std::size_t jtop = std::min(jmax, n / (m + 1));
        std::vector<value_type> y;
        for (std::size_t j = 1; j <= jtop; ++j) {
            const std::size_t lo = (j - 1) * (m + 1); // lowest nonzero degree of p
            const std::size_t ytop = n - (m + 1);
            y.assign(ytop + 1, value_type(0));
            for (std::size_t k = lo; k <= ytop; ++k) {
                const std::size_t span = std::min(m, k - lo);
                y[k] = p[k] + (span ? detail::dot_reversed(&t[1], &y[k - 1], span) : value_type(0));
            }
            // p <- R * y, R = sum_{i>m} t_i x^i; nonzero from degree j(m+1).
            if (j == jtop) {
                terms[j] = detail::dot_reversed(&t[m + 1], &y[n - m - 1], n - lo - m);
                break;
            }
            std::vector<value_type> next(n + 1, value_type(0));
            for (std::size_t k = j * (m + 1); k <= n; ++k) {
                // sum_{i=m+1}^{k-lo} t_i y_{k-i}
                next[k] = detail::dot_reversed(&t[m + 1], &y[k - m - 1], k - lo - m);
            }
            p = std::move(next);
            terms[j] = p[n];
        }
        return terms;
    }

private:
    void check(std::size_t n) const {
        if (n > order())
            throw TruncationTooShort("n = " + std::to_string(n) + " exceeds series order " +
                                     std::to_string(order()));
    }

    static value_type tail_sum(const std::vector<value_type>& cdf) {
        const std::size_t n = cdf.size() - 1;
        value_type acc(0);
        for (std::size_t m = 0; m < n; ++m) acc += value_type(1) - cdf[m];
        return acc;
    }

    SeriesPoly<Arith> trees_;
    SeriesPoly<Arith> connected_;
    std::vector<value_type> mappings_; // coefficients of 1/(1 - T)
};

} // namespace mapstat
