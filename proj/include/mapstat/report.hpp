#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapstat/decomposition.hpp"
#include "mapstat/estimate.hpp"
#include "mapstat/exact_enum.hpp"
#include "mapstat/extrapolation.hpp"
#include "mapstat/extremal.hpp"
#include "mapstat/montecarlo.hpp"
#include "mapstat/rational.hpp"
#include "mapstat/sampling.hpp"
#include "mapstat/version.hpp"

// JSON views of the library's result types. Vertex ids are written
// 1-indexed; positions inside JSON arrays stay 0-indexed.
namespace mapstat::report {

using nlohmann::json;

inline json tool_info() {
    return {{"name", "mapstat"}, {"version", std::string(kVersion)}};
}

inline json rational(const Rational& q) {
    return {{"num", numerator_string(q)}, {"den", denominator_string(q)}};
}

inline json value(const Rational& q) { return rational(q); }
inline json value(double x) { return x; }

inline json estimate(const Estimate& e) {
    return {{"point", e.point},
            {"std_error", e.std_error},
            {"ci_low", e.ci_low},
            {"ci_high", e.ci_high},
            {"trials", e.trials},
            {"effective_trials", e.effective_trials}};
}

inline json estimate(const std::optional<Estimate>& e) {
    return e ? estimate(*e) : json(nullptr);
}

inline json one_indexed(const std::vector<Vertex>& vs) {
    json out = json::array();
    for (Vertex v : vs) out.push_back(static_cast<std::uint64_t>(v) + 1);
    return out;
}

inline json decomposition(const Decomposition& d, const ExtremalStats& st) {
    json comps = json::array();
    for (const Component& c : d.components) {
        json trees = json::array();
        for (std::size_t id : c.tree_ids) {
            const Tree& t = d.trees[id];
            json jt = {{"root", static_cast<std::uint64_t>(t.root) + 1}, {"size", t.size}};
            if (!t.members.empty()) jt["members"] = one_indexed(t.members);
            trees.push_back(std::move(jt));
        }
        comps.push_back({{"cycle", one_indexed(c.cycle)}, {"size", c.size}, {"trees", trees}});
    }
    // Tree ranks point at positions in the flat per-component listing above.
    json rank_component = json::array();
    for (std::size_t c : st.tree_rank_component) rank_component.push_back(c);
    json in_largest = json::array();
    for (bool b : st.s_in_largest) in_largest.push_back(b);
    return {{"n", d.n},
            {"cyclic_vertex_count", d.cyclic_vertex_count},
            {"components", comps},
            {"extremal",
             {{"component_sizes_desc", st.component_sizes_desc},
              {"tree_sizes_desc", st.tree_sizes_desc},
              {"largest_component_index", st.largest_component_index},
              {"tree_rank_component", rank_component},
              {"s_in_largest", in_largest}}}};
}

inline json moments(const MomentReport& m) {
    json tau = json::array();
    for (std::size_t s = 0; s < m.mean_tau_over_n.size(); ++s)
        tau.push_back({{"s", s + 1}, {"estimate", estimate(m.mean_tau_over_n[s])}});
    json ecdf_mu = json::array();
    for (std::size_t r = 0; r < m.ecdf_mu_r.size(); ++r)
        ecdf_mu.push_back({{"r", r + 1}, {"cdf", m.ecdf_mu_r[r]}});
    json ecdf_tau = json::array();
    for (std::size_t s = 0; s < m.ecdf_tau_s.size(); ++s)
        ecdf_tau.push_back({{"s", s + 1}, {"cdf", m.ecdf_tau_s[s]}});
    return {{"n", m.n},
            {"trials", m.trials},
            {"mean_mu_over_n", estimate(m.mean_mu_over_n)},
            {"mean_mu_sq_over_n_sq", estimate(m.mean_mu_sq_over_n_sq)},
            {"mean_tau_over_n", tau},
            {"ecdf_grid", {{"points", kEcdfPoints}, {"low", 0.0}, {"high", 1.0}}},
            {"ecdf_mu_r", ecdf_mu},
            {"ecdf_tau_s", ecdf_tau}};
}

inline json simulation(const SimulationReport& rep) {
    json per_s = json::array();
    for (std::size_t i = 0; i < rep.ratio.size(); ++i) {
        per_s.push_back({{"s", i + 1},
                         {"conditional", estimate(rep.conditional[i])},
                         {"ratio", estimate(rep.ratio[i])},
                         {"indicator_ratio", estimate(rep.indicator_ratio[i])},
                         {"ratio_gap", rep.ratio_gap[i]},
                         {"subgraph", estimate(rep.subgraph[i])}});
    }
    json pair = nullptr;
    if (rep.pair_conditional)
        pair = {{"conditional", estimate(rep.pair_conditional)},
                {"moment_ratio", estimate(rep.pair_moment_ratio)}};
    return {{"chunks", rep.chunks}, {"moments", moments(rep.moments)}, {"estimates", per_s},
            {"pair", pair}};
}

inline json exact_table(const ExactTable& t) {
    json per_s = json::array();
    for (std::size_t s = 1; s <= t.s_max; ++s) {
        per_s.push_back({{"s", s},
                         {"mean_tau", rational(t.mean_tau(s))},
                         {"mean_tau_in_largest", rational(t.mean_tau_in_largest(s))},
                         {"subgraph_prob", rational(t.subgraph_prob(s))},
                         {"conditional", rational(t.conditional(s))}});
    }
    auto distribution = [&](const std::vector<std::vector<std::uint64_t>>& counts, const char* key) {
        json out = json::array();
        for (std::size_t i = 0; i < counts.size(); ++i) {
            json cdf = json::array();
            std::uint64_t acc = 0;
            for (std::uint64_t c : counts[i]) {
                acc += c;
                cdf.push_back(rational(Rational(acc) / t.total));
            }
            out.push_back({{key, i + 1}, {"counts", counts[i]}, {"cdf", cdf}});
        }
        return out;
    };
    return {{"n", t.n},
            {"total", std::to_string(t.total)},
            {"mean_mu", rational(t.mean_mu())},
            {"mean_mu_sq", rational(t.mean_mu_sq())},
            {"connected_count", t.connected_count},
            {"pair_conditional", t.n >= 2 ? rational(t.pair_conditional()) : json(nullptr)},
            {"per_s", per_s},
            {"mu_distribution", distribution(t.mu_counts, "r")},
            {"tau_distribution", distribution(t.tau_counts, "s")}};
}

inline json extrapolation(const ExtrapolationResult& r) {
    return {{"statistic", r.stat.name()},
            {"grid", r.grid},
            {"values", r.values},
            {"model", "a + b*n^(-1/2) + c*n^(-1)"},
            {"limit_estimate", r.limit_estimate},
            {"coeff_sqrt", r.coeff_sqrt},
            {"coeff_inv", r.coeff_inv},
            {"residual_norm", r.residual_norm}};
}

} // namespace mapstat::report
