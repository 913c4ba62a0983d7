#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapstat/decomposition.hpp"
#include "mapstat/egf.hpp"
#include "mapstat/error.hpp"
#include "mapstat/exact_enum.hpp"
#include "mapstat/extrapolation.hpp"
#include "mapstat/extremal.hpp"
#include "mapstat/mapping.hpp"
#include "mapstat/montecarlo.hpp"
#include "mapstat/report.hpp"

namespace mapstat::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

enum class Format { json, csv };

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::size_t n = 0;
    std::vector<std::size_t> grid;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::size_t s_max = 4;
    std::size_t r_max = 2;
    Mode mode = Mode::scaled;
    double level = 0.99;
    Format format = Format::json;
    std::string out;
    bool cap_override = false;
    bool timing = false;
};

// Echo of the configuration embedded in each report. The worker count is
// left out: it does not influence results and reports must be byte-identical
// across worker counts.
inline json config_echo(const RunConfig& c) {
    json j = {{"subcommand", c.subcommand}, {"format", c.format == Format::json ? "json" : "csv"}};
    if (c.subcommand == "decompose") j["input"] = c.input;
    if (c.subcommand == "simulate") {
        j.update({{"n", c.n}, {"trials", c.trials}, {"seed", c.seed}, {"s_max", c.s_max},
                  {"r_max", c.r_max}, {"level", c.level}});
    }
    if (c.subcommand == "exact") {
        j.update({{"n", c.n}, {"s_max", c.s_max}, {"r_max", c.r_max},
                  {"cap_override", c.cap_override}});
    }
    if (c.subcommand == "series") {
        j.update({{"grid", c.grid}, {"s_max", c.s_max}, {"r_max", c.r_max},
                  {"mode", std::string(mode_name(c.mode))}});
    }
    if (c.subcommand == "constants") {
        j.update({{"grid", c.grid}, {"s_max", c.s_max}, {"mode", std::string(mode_name(c.mode))}});
    }
    return j;
}

inline json header(const RunConfig& c) {
    json h = {{"tool", report::tool_info()}, {"config", config_echo(c)}};
    if (c.subcommand == "simulate") {
        h["generator"] = std::string(RandomStream::kGenerator);
        h["stream_policy"] = "chunk k of 1024 trials uses stream_id k";
    }
    return h;
}

// Reads a mapping file: either "n" followed by n 1-indexed images, or JSON
// {"n": ..., "images": [...]}.
inline Mapping read_mapping(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw EmptyMapping();

    std::vector<std::int64_t> images;
    std::int64_t n = 0;
    if (text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
            n = j.at("n").get<std::int64_t>();
            images = j.at("images").get<std::vector<std::int64_t>>();
        } catch (const json::exception& e) {
            throw Error(std::string("malformed mapping JSON: ") + e.what());
        }
    } else {
        std::istringstream ss(text);
        if (!(ss >> n)) throw Error("mapping file must start with n");
        std::int64_t x = 0;
        while (ss >> x) images.push_back(x);
        if (!ss.eof()) throw Error("mapping file contains a non-integer token");
    }
    if (n <= 0) throw InvalidSize("mapping size must be positive");
    if (static_cast<std::int64_t>(images.size()) != n)
        throw Error("expected " + std::to_string(n) + " images, found " +
                    std::to_string(images.size()));
    return validate_mapping(images);
}

inline std::string csv_number(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

inline std::string csv_value(const Rational& q) {
    return numerator_string(q) + "/" + denominator_string(q);
}
inline std::string csv_value(double x) { return csv_number(x); }

inline void estimate_row(std::ostream& os, const std::string& name, const std::string& rank,
                         const std::optional<Estimate>& e) {
    os << name << ',' << rank << ',';
    if (!e) {
        os << ",,,,,\n";
        return;
    }
    os << csv_number(e->point) << ',' << csv_number(e->std_error) << ',' << csv_number(e->ci_low)
       << ',' << csv_number(e->ci_high) << ',' << e->trials << ',' << e->effective_trials << '\n';
}

inline void run_decompose(const RunConfig& c, std::ostream& os) {
    std::ifstream in(c.input);
    if (!in) throw Error("cannot open mapping file: " + c.input);
    const Mapping t = read_mapping(in);
    const Decomposition d = decompose(t, {.with_members = true});
    const ExtremalStats st = extremal_stats(d);
    if (c.format == Format::csv) {
        // One row per tree.
        os << "component,cycle_position,root,tree_size,component_size\n";
        for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
            const Component& comp = d.components[ci];
            for (std::size_t k = 0; k < comp.cycle.size(); ++k)
                os << ci << ',' << k << ',' << comp.cycle[k] + 1 << ','
                   << d.trees[comp.tree_ids[k]].size << ',' << comp.size << '\n';
        }
        return;
    }
    json j = header(c);
    j["decomposition"] = report::decomposition(d, st);
    os << j.dump(2) << '\n';
}

inline void run_simulate(const RunConfig& c, std::ostream& os) {
    SimulationConfig cfg{.n = c.n, .trials = c.trials, .seed = c.seed, .base_stream = 0,
                         .s_max = c.s_max, .r_max = c.r_max, .workers = c.workers, .level = c.level};
    const SimulationReport rep = simulate(cfg);
    if (c.format == Format::csv) {
        os << "estimator,rank,point,std_error,ci_low,ci_high,trials,effective_trials\n";
        estimate_row(os, "mean_mu_over_n", "", rep.moments.mean_mu_over_n);
        estimate_row(os, "mean_mu_sq_over_n_sq", "", rep.moments.mean_mu_sq_over_n_sq);
        for (std::size_t i = 0; i < c.s_max; ++i) {
            const std::string s = std::to_string(i + 1);
            estimate_row(os, "mean_tau_over_n", s, rep.moments.mean_tau_over_n[i]);
            estimate_row(os, "conditional", s, rep.conditional[i]);
            estimate_row(os, "ratio", s, rep.ratio[i]);
            estimate_row(os, "indicator_ratio", s, rep.indicator_ratio[i]);
            estimate_row(os, "subgraph", s, rep.subgraph[i]);
        }
        estimate_row(os, "pair_conditional", "", rep.pair_conditional);
        estimate_row(os, "pair_moment_ratio", "", rep.pair_moment_ratio);
        return;
    }
    json j = header(c);
    j["report"] = report::simulation(rep);
    os << j.dump(2) << '\n';
}

inline void run_exact(const RunConfig& c, std::ostream& os) {
    EnumerationOptions opt{.cap = c.cap_override ? kLongRunEnumerationCap : kDefaultEnumerationCap,
                           .workers = c.workers};
    const ExactTable t = enumerate_all(c.n, c.s_max, c.r_max, opt);
    if (c.format == Format::csv) {
        os << "table,rank,k,count,pmf,cdf\n";
        auto emit = [&](const char* name, const std::vector<std::vector<std::uint64_t>>& counts) {
            for (std::size_t i = 0; i < counts.size(); ++i) {
                std::uint64_t acc = 0;
                for (std::size_t k = 0; k < counts[i].size(); ++k) {
                    acc += counts[i][k];
                    os << name << ',' << i + 1 << ',' << k << ',' << counts[i][k] << ','
                       << csv_value(Rational(counts[i][k]) / t.total) << ','
                       << csv_value(Rational(acc) / t.total) << '\n';
                }
            }
        };
        emit("mu", t.mu_counts);
        emit("tau", t.tau_counts);
        return;
    }
    json j = header(c);
    j["table"] = report::exact_table(t);
    os << j.dump(2) << '\n';
}

template <class Arith>
void run_series_mode(const RunConfig& c, std::ostream& os) {
    const std::size_t order = *std::max_element(c.grid.begin(), c.grid.end());
    const MappingSeries<Arith> series(order);
    json results = json::array();
    if (c.format == Format::csv) os << "n,statistic,rank,m,value\n";
    for (std::size_t n : c.grid) {
        const auto mu_tables = [&] {
            std::vector<std::vector<typename Arith::value_type>> out;
            for (std::size_t r = 1; r <= c.r_max; ++r)
                out.push_back(series.rth_largest_component_cdf_table(n, r));
            return out;
        }();
        const auto tau_tables = series.tree_cdf_tables(n, c.s_max);
        const auto mean_mu = series.exact_expectation_mu(n);
        const auto mean_tau = series.exact_expectations_tau(n, c.s_max);
        const auto nv = typename Arith::value_type(n);

        if (c.format == Format::csv) {
            os << n << ",mean_mu_over_n,1,," << csv_value(mean_mu / nv) << '\n';
            for (std::size_t s = 0; s < c.s_max; ++s)
                os << n << ",mean_tau_over_n," << s + 1 << ",," << csv_value(mean_tau[s] / nv) << '\n';
            for (std::size_t r = 0; r < mu_tables.size(); ++r)
                for (std::size_t m = 0; m <= n; ++m)
                    os << n << ",mu_cdf," << r + 1 << ',' << m << ',' << csv_value(mu_tables[r][m]) << '\n';
            for (std::size_t s = 0; s < tau_tables.size(); ++s)
                for (std::size_t m = 0; m <= n; ++m)
                    os << n << ",tau_cdf," << s + 1 << ',' << m << ',' << csv_value(tau_tables[s][m])
                       << '\n';
            continue;
        }

        json jr = {{"n", n}, {"mean_mu", report::value(mean_mu)},
                   {"mean_mu_over_n", report::value(mean_mu / nv)}};
        json taus = json::array();
        for (std::size_t s = 0; s < c.s_max; ++s)
            taus.push_back({{"s", s + 1}, {"mean_tau", report::value(mean_tau[s])},
                            {"mean_tau_over_n", report::value(mean_tau[s] / nv)}});
        jr["mean_tau"] = taus;
        json mus = json::array();
        for (std::size_t r = 0; r < mu_tables.size(); ++r) {
            json cdf = json::array();
            for (const auto& p : mu_tables[r]) cdf.push_back(report::value(p));
            mus.push_back({{"r", r + 1}, {"cdf", cdf}});
        }
        jr["mu_cdf"] = mus;
        json ts = json::array();
        for (std::size_t s = 0; s < tau_tables.size(); ++s) {
            json cdf = json::array();
            for (const auto& p : tau_tables[s]) cdf.push_back(report::value(p));
            ts.push_back({{"s", s + 1}, {"cdf", cdf}});
        }
        jr["tau_cdf"] = ts;
        results.push_back(std::move(jr));
    }
    if (c.format == Format::json) {
        json j = header(c);
        j["results"] = results;
        os << j.dump(2) << '\n';
    }
}

template <class Arith>
void run_constants_mode(const RunConfig& c, std::ostream& os) {
    const ConstantsTable t = extrapolate_constants<Arith>(c.grid, c.s_max);
    auto reference_c = [](std::size_t s) -> std::optional<double> {
        return s <= 4 ? std::optional(kTreeConstants[s - 1]) : std::nullopt;
    };
    auto reference_p = [](std::size_t s) -> std::optional<double> {
        return s <= 4 ? std::optional(kConditionalLimits[s - 1]) : std::nullopt;
    };
    if (c.format == Format::csv) {
        os << "quantity,s,estimate,reference,abs_error\n";
        auto row = [&](const char* q, std::size_t s, double est, std::optional<double> ref) {
            os << q << ',' << s << ',' << csv_number(est) << ',';
            if (ref) os << csv_number(*ref) << ',' << csv_number(std::abs(est - *ref));
            else os << ',';
            os << '\n';
        };
        row("c", 0, t.mu.limit_estimate, kLargestComponentConstant);
        for (std::size_t s = 1; s <= c.s_max; ++s) {
            row("c_s", s, t.tau[s - 1].limit_estimate, reference_c(s));
            row("p_s", s, t.p[s - 1], reference_p(s));
        }
        return;
    }
    json rows = json::array();
    for (std::size_t s = 1; s <= c.s_max; ++s) {
        json row = {{"s", s}, {"c_s", t.tau[s - 1].limit_estimate}, {"p_s", t.p[s - 1]}};
        row["c_s_reference"] = reference_c(s) ? json(*reference_c(s)) : json(nullptr);
        row["p_s_reference"] = reference_p(s) ? json(*reference_p(s)) : json(nullptr);
        rows.push_back(std::move(row));
    }
    json tau = json::array();
    for (const auto& r : t.tau) tau.push_back(report::extrapolation(r));
    json j = header(c);
    j["c"] = {{"estimate", t.mu.limit_estimate}, {"reference", kLargestComponentConstant}};
    j["mu"] = report::extrapolation(t.mu);
    j["tau"] = tau;
    j["table"] = rows;
    os << j.dump(2) << '\n';
}

inline void execute(const RunConfig& c, std::ostream& os) {
    if (c.subcommand == "decompose") return run_decompose(c, os);
    if (c.subcommand == "simulate") return run_simulate(c, os);
    if (c.subcommand == "exact") return run_exact(c, os);
    if (c.subcommand == "series") {
        return c.mode == Mode::exact ? run_series_mode<ExactArithmetic>(c, os)
                                     : run_series_mode<ScaledArithmetic>(c, os);
    }
    if (c.subcommand == "constants") {
        return c.mode == Mode::exact ? run_constants_mode<ExactArithmetic>(c, os)
                                     : run_constants_mode<ScaledArithmetic>(c, os);
    }
}

// Entry point shared by the executable and the tests. Exit codes: 0 success,
// 1 data error, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random mapping statistics: decomposition, simulation, exact enumeration and "
                 "generating-function series"};
    app.require_subcommand(1);
    RunConfig c;
    std::string mode = "float";
    std::string format = "json";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", c.out, "Output path (default stdout)");
    };

    auto* dec = app.add_subcommand("decompose", "Decompose the mapping read from a file");
    dec->add_option("file", c.input, "Mapping file (text or JSON)")->required();
    add_common(dec);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates over random mappings");
    sim->add_option("--n", c.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
    sim->add_option("--trials", c.trials, "Number of sampled mappings")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", c.seed, "Base seed")->envname("MAPSTAT_SEED");
    sim->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--s-max", c.s_max, "Largest tree rank")->check(CLI::PositiveNumber);
    sim->add_option("--r-max", c.r_max, "Largest component rank")->check(CLI::PositiveNumber);
    sim->add_option("--level", c.level, "Confidence level")->check(CLI::Range(0.5, 0.999999));
    sim->add_flag("--timing", c.timing, "Embed wall-clock time and worker count in the report");
    add_common(sim);

    auto* ex = app.add_subcommand("exact", "Exhaustive enumeration of all n^n mappings");
    ex->add_option("--n", c.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
    ex->add_option("--s-max", c.s_max, "Largest tree rank")->check(CLI::PositiveNumber);
    ex->add_option("--r-max", c.r_max, "Largest component rank")->check(CLI::PositiveNumber);
    ex->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    ex->add_flag("--cap-override", c.cap_override, "Allow n = 8 (about 1.7e7 mappings)");
    ex->add_flag("--timing", c.timing, "Embed wall-clock time and worker count in the report");
    add_common(ex);

    std::vector<std::size_t> grid;
    std::size_t single_n = 0;
    auto* ser = app.add_subcommand("series", "Exact distributions from truncated EGFs");
    auto* ser_n = ser->add_option("--n", single_n, "Number of vertices")->check(CLI::PositiveNumber);
    auto* ser_grid = ser->add_option("--grid", grid, "Comma-separated n values")
                         ->delimiter(',')
                         ->check(CLI::PositiveNumber);
    ser_n->excludes(ser_grid);
    ser->add_option("--s-max", c.s_max, "Largest tree rank")->check(CLI::PositiveNumber);
    ser->add_option("--r-max", c.r_max, "Largest component rank")->check(CLI::PositiveNumber);
    ser->add_option("--mode", mode, "Arithmetic")->check(CLI::IsMember({"rational", "float"}));
    ser->add_flag("--timing", c.timing, "Embed wall-clock time in the report");
    add_common(ser);

    std::vector<std::size_t> const_grid = {512, 1024, 2048, 4096};
    auto* con = app.add_subcommand("constants", "Extrapolate c and c_s, and report p_s = c_s / c");
    con->add_option("--grid", const_grid, "Comma-separated n values")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    con->add_option("--s-max", c.s_max, "Largest tree rank")->check(CLI::PositiveNumber);
    con->add_option("--mode", mode, "Arithmetic")->check(CLI::IsMember({"rational", "float"}));
    con->add_flag("--timing", c.timing, "Embed wall-clock time in the report");
    add_common(con);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.mode = mode == "rational" ? Mode::exact : Mode::scaled;
    c.format = format == "csv" ? Format::csv : Format::json;
    if (c.subcommand == "series") {
        if (single_n) grid = {single_n};
        if (grid.empty()) {
            err << "series: one of --n or --grid is required\n";
            return kExitUsage;
        }
        c.grid = grid;
    }
    if (c.subcommand == "constants") c.grid = const_grid;

    const auto start = std::chrono::steady_clock::now();
    std::ostringstream body;
    try {
        execute(c, body);
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << " (pass --cap-override for n = 8)\n";
        return kExitUsage;
    } catch (const SingularFit& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string text = body.str();
    if (c.timing && c.format == Format::json) {
        json j = json::parse(text);
        j["run"] = {{"wall_clock_seconds", seconds}, {"workers", c.workers}};
        text = j.dump(2) + "\n";
    }
    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream file(c.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << c.out << '\n';
            return kExitDataError;
        }
        file << text;
    }
    err << "mapstat " << c.subcommand << ": " << std::fixed << std::setprecision(3) << seconds
        << " s, workers=" << c.workers << '\n';
    return kExitOk;
}

} // namespace mapstat::cli
