#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "mapstat/rational.hpp"

namespace mapstat {

enum class Mode { exact, scaled };

inline constexpr std::string_view mode_name(Mode m) {
    return m == Mode::exact ? "rational" : "float";
}

// Exact rational coefficients. The stored value at degree k is the true EGF
// coefficient a_k / k!.
struct ExactArithmetic {
    using value_type = Rational;
    static constexpr Mode mode = Mode::exact;

    // k^(k-1) / k! for k = 0..N (rooted labelled trees).
    static std::vector<value_type> tree_coefficients(std::size_t N) {
        std::vector<value_type> t(N + 1);
        BigInt factorial = 1;
        for (std::size_t k = 1; k <= N; ++k) {
            factorial *= k;
            t[k] = Rational(boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(k - 1)),
                            factorial);
        }
        return t;
    }

    // k^k / k!, the coefficients of 1 / (1 - T).
    static std::vector<value_type> mapping_coefficients(std::size_t N) {
        std::vector<value_type> q(N + 1);
        q[0] = 1;
        BigInt factorial = 1;
        for (std::size_t k = 1; k <= N; ++k) {
            factorial *= k;
            q[k] = Rational(boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(k)), factorial);
        }
        return q;
    }

    // n! / n^n times a stored coefficient: turns [x^n] of a mapping EGF into a
    // probability under the uniform measure.
    static value_type extract(std::size_t n, const value_type& coeff) {
        if (n == 0) return coeff;
        BigInt factorial = 1;
        for (std::size_t k = 2; k <= n; ++k) factorial *= k;
        return coeff * Rational(factorial, boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(n)));
    }
};

// Doubles in the substituted variable y = e x: the stored value at degree k is
// (a_k / k!) e^-k. Tree coefficients become O(k^-3/2), so nothing overflows for
// N in the thousands; the factor n! e^n / n^n is applied in log space.
struct ScaledArithmetic {
    using value_type = double;
    static constexpr Mode mode = Mode::scaled;

    static std::vector<value_type> tree_coefficients(std::size_t N) {
        std::vector<value_type> t(N + 1, 0.0);
        for (std::size_t k = 1; k <= N; ++k) {
            const double kd = static_cast<double>(k);
            t[k] = std::exp((kd - 1.0) * std::log(kd) - std::lgamma(kd + 1.0) - kd);
        }
        return t;
    }

    static std::vector<value_type> mapping_coefficients(std::size_t N) {
        std::vector<value_type> q(N + 1, 0.0);
        q[0] = 1.0;
        for (std::size_t k = 1; k <= N; ++k) {
            const double kd = static_cast<double>(k);
            q[k] = std::exp(kd * std::log(kd) - std::lgamma(kd + 1.0) - kd);
        }
        return q;
    }

    // log(n! e^n / n^n)
    static double log_normalizer(std::size_t n) {
        if (n == 0) return 0.0;
        const double nd = static_cast<double>(n);
        return std::lgamma(nd + 1.0) + nd - nd * std::log(nd);
    }

    static value_type extract(std::size_t n, value_type coeff) {
        return coeff * std::exp(log_normalizer(n));
    }
};

namespace detail {

// sum_{i=0}^{len-1} a[i] * b[-i]
template <class V>
V dot_reversed(const V* a, const V* b, std::size_t len) {
    V acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i] * *(b - static_cast<std::ptrdiff_t>(i));
    return acc;
}

template <>
inline double dot_reversed<double>(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[-static_cast<std::ptrdiff_t>(i)];
    return acc;
}

} // namespace detail

// Power series truncated at degree N (coefficient of degree k at index k).
template <class Arith>
class SeriesPoly {
public:
    using value_type = typename Arith::value_type;
    static constexpr Mode mode = Arith::mode;

    SeriesPoly() = default;
    explicit SeriesPoly(std::size_t N) : coeffs_(N + 1, value_type(0)) {}
    explicit SeriesPoly(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("SeriesPoly needs at least one coefficient");
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    const value_type& operator[](std::size_t k) const { return coeffs_[k]; }
    value_type& operator[](std::size_t k) { return coeffs_[k]; }
    const std::vector<value_type>& coeffs() const noexcept { return coeffs_; }

    // Keeps degrees <= m (and the order).
    SeriesPoly truncated(std::size_t m) const {
        SeriesPoly r = *this;
        for (std::size_t k = m + 1; k < r.coeffs_.size(); ++k) r.coeffs_[k] = value_type(0);
        return r;
    }

    friend SeriesPoly operator+(const SeriesPoly& a, const SeriesPoly& b) {
        SeriesPoly r(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
        return r;
    }

    friend SeriesPoly operator-(const SeriesPoly& a, const SeriesPoly& b) {
        SeriesPoly r(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
        return r;
    }

    friend SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b) {
        const std::size_t N = std::min(a.order(), b.order());
        SeriesPoly r(N);
        for (std::size_t k = 0; k <= N; ++k)
            r[k] = detail::dot_reversed(a.coeffs_.data(), b.coeffs_.data() + k, k + 1);
        return r;
    }

    friend SeriesPoly operator*(const SeriesPoly& a, const value_type& c) {
        SeriesPoly r = a;
        for (auto& x : r.coeffs_) x *= c;
        return r;
    }

    bool operator==(const SeriesPoly&) const = default;

private:
    std::vector<value_type> coeffs_;
};

// exp(a) with a[0] = 0, via k b_k = sum_{i=1}^{k} i a_i b_{k-i}.
template <class Arith>
SeriesPoly<Arith> series_exp(const SeriesPoly<Arith>& a) {
    using V = typename Arith::value_type;
    if (a[0] != V(0)) throw std::invalid_argument("series_exp: constant term must be zero");
    const std::size_t N = a.order();
    std::vector<V> weighted(N + 1);
    for (std::size_t i = 1; i <= N; ++i) weighted[i] = a[i] * V(i);
    SeriesPoly<Arith> b(N);
    b[0] = V(1);
    for (std::size_t k = 1; k <= N; ++k) {
        V acc = detail::dot_reversed(weighted.data() + 1, &b[k - 1], k);
        b[k] = acc / V(k);
    }
    return b;
}

// log(b) with b[0] = 1, via k a_k = k b_k - sum_{i=1}^{k-1} i a_i b_{k-i}.
template <class Arith>
SeriesPoly<Arith> series_log(const SeriesPoly<Arith>& b) {
    using V = typename Arith::value_type;
    if (b[0] != V(1)) throw std::invalid_argument("series_log: constant term must be one");
    const std::size_t N = b.order();
    std::vector<V> weighted(N + 1, V(0));
    SeriesPoly<Arith> a(N);
    for (std::size_t k = 1; k <= N; ++k) {
        V acc = k > 1 ? detail::dot_reversed(weighted.data() + 1, &b[k - 1], k - 1) : V(0);
        a[k] = b[k] - acc / V(k);
        weighted[k] = a[k] * V(k);
    }
    return a;
}

// 1 / b with b[0] != 0.
template <class Arith>
SeriesPoly<Arith> series_inverse(const SeriesPoly<Arith>& b) {
    using V = typename Arith::value_type;
    if (b[0] == V(0)) throw std::invalid_argument("series_inverse: constant term must be nonzero");
    const std::size_t N = b.order();
    SeriesPoly<Arith> r(N);
    const V inv0 = V(1) / b[0];
    r[0] = inv0;
    for (std::size_t k = 1; k <= N; ++k) {
        V acc = detail::dot_reversed(&b[1], &r[k - 1], k);
        r[k] = -acc * inv0;
    }
    return r;
}

} // namespace mapstat
