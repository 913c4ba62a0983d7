#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mapstat/egf.hpp"
#include "mapstat/error.hpp"

namespace mapstat {

// Limits quoted for comparison: c (largest component) and c_1..c_4, p_1..p_4
// (s-th largest tree).
inline constexpr double kLargestComponentConstant = 0.7578230112;
inline constexpr double kTreeConstants[] = {0.4834983471, 0.1599870930, 0.0821020328, 0.0505788011};
inline constexpr double kConditionalLimits[] = {0.6380095879, 0.2111140604, 0.1083393241,
                                                0.0667422345};

// Which normalised expectation E(stat)/n is being extrapolated.
struct Statistic {
    enum class Kind { mu, tau } kind = Kind::mu;
    std::size_t s = 1;

    static Statistic mu() { return {Kind::mu, 1}; }
    static Statistic tau(std::size_t s) { return {Kind::tau, s}; }

    std::string name() const { return kind == Kind::mu ? "mu" : "tau" + std::to_string(s); }
};

struct ExtrapolationResult {
    Statistic stat;
    std::vector<std::size_t> grid;
    std::vector<double> values;
    // values[i] ~ limit + b / sqrt(n) + c / n
    double limit_estimate = 0.0;
    double coeff_sqrt = 0.0;
    double coeff_inv = 0.0;
    double residual_norm = 0.0;
};

// Least-squares fit of a + b n^-1/2 + c n^-1 to (grid, values).
inline ExtrapolationResult fit_constant(const std::vector<std::size_t>& grid,
                                        const std::vector<double>& values, Statistic stat = {}) {
    if (grid.size() != values.size())
        throw InvalidConfig("fit_constant: grid and values differ in length");
    const std::set<std::size_t> distinct(grid.begin(), grid.end());
    if (distinct.size() < 3 || distinct.count(0) != 0)
        throw SingularFit("extrapolation needs at least 3 distinct positive n values");

    const auto rows = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd design(rows, 3);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double n = static_cast<double>(grid[static_cast<std::size_t>(i)]);
        design(i, 0) = 1.0;
        design(i, 1) = 1.0 / std::sqrt(n);
        design(i, 2) = 1.0 / n;
        rhs(i) = values[static_cast<std::size_t>(i)];
    }
    const auto qr = design.colPivHouseholderQr();
    if (qr.rank() < 3) throw SingularFit("extrapolation design matrix is rank deficient");
    const Eigen::VectorXd coef = qr.solve(rhs);

    ExtrapolationResult res;
    res.stat = stat;
    res.grid = grid;
    res.values = values;
    res.limit_estimate = coef(0);
    res.coeff_sqrt = coef(1);
    res.coeff_inv = coef(2);
    res.residual_norm = (design * coef - rhs).norm();
    if (!std::isfinite(res.limit_estimate)) throw SingularFit("extrapolated limit is not finite");
    return res;
}

// E(mu_n)/n or E(tau_{n,s})/n for every n in the grid, from one series of
// order max(grid).
template <class Arith>
std::vector<double> normalized_expectations(const MappingSeries<Arith>& series,
                                            const std::vector<std::size_t>& grid, Statistic stat) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (std::size_t n : grid) {
        double e = 0.0;
        if (stat.kind == Statistic::Kind::mu) {
            e = static_cast<double>(series.exact_expectation_mu(n));
        } else {
            e = static_cast<double>(series.exact_expectation_tau(n, stat.s));
        }
        values.push_back(e / static_cast<double>(n));
    }
    return values;
}

template <class Arith>
ExtrapolationResult extrapolate_constant(const MappingSeries<Arith>& series, Statistic stat,
                                         const std::vector<std::size_t>& grid) {
    const std::set<std::size_t> distinct(grid.begin(), grid.end());
    if (distinct.size() < 3) throw SingularFit("extrapolation needs at least 3 distinct n values");
    return fit_constant(grid, normalized_expectations(series, grid, stat), stat);
}

// Extrapolated c and c_1..c_smax over one grid, with p_s = c_s / c.
struct ConstantsTable {
    std::vector<std::size_t> grid;
    ExtrapolationResult mu;
    std::vector<ExtrapolationResult> tau; // index s-1
    std::vector<double> p;                 // index s-1
};

// One pass per grid point computes E(tau_{n,s}) for every s at once.
template <class Arith>
ConstantsTable extrapolate_constants(const std::vector<std::size_t>& grid, std::size_t s_max) {
    const std::set<std::size_t> distinct(grid.begin(), grid.end());
    if (distinct.size() < 3 || distinct.count(0) != 0)
        throw SingularFit("extrapolation needs at least 3 distinct positive n values");
    if (s_max == 0) throw InvalidConfig("s_max must be >= 1");
    const MappingSeries<Arith> series(*distinct.rbegin());

    std::vector<double> mu_values;
    std::vector<std::vector<double>> tau_values(s_max);
    for (std::size_t n : grid) {
        const double nd = static_cast<double>(n);
        mu_values.push_back(static_cast<double>(series.exact_expectation_mu(n)) / nd);
        const auto taus = series.exact_expectations_tau(n, s_max);
        for (std::size_t s = 0; s < s_max; ++s)
            tau_values[s].push_back(static_cast<double>(taus[s]) / nd);
    }

    ConstantsTable table;
    table.grid = grid;
    table.mu = fit_constant(grid, mu_values, Statistic::mu());
    for (std::size_t s = 1; s <= s_max; ++s) {
        table.tau.push_back(fit_constant(grid, tau_values[s - 1], Statistic::tau(s)));
        table.p.push_back(table.tau.back().limit_estimate / table.mu.limit_estimate);
    }
    return table;
}

} // namespace mapstat
