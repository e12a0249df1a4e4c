/// @file scalars.hpp
/// Scalar modes used throughout the kernel: exact arbitrary-precision
/// rationals, Gaussian rationals (exact complex), and IEEE doubles /
/// complex doubles. A value is either exact or float; mixing modes in one
/// expression is done by explicit promotion only.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ma6 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw Error("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error("cannot parse rational: " + s);
    }
}

/// Exact integer n-th root; empty if `v` is not a perfect power.
inline std::optional<BigInt> exact_root(const BigInt& v, unsigned n) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1) return v;
    BigInt r = v;
    for (unsigned i = 1; i < n; ++i) r = boost::multiprecision::sqrt(r);
    // sqrt chains give floor estimates; fix up by local search
    while (boost::multiprecision::pow(r, n) > v) --r;
    while (boost::multiprecision::pow(r + 1, n) <= v) ++r;
    if (boost::multiprecision::pow(r, n) == v) return r;
    return std::nullopt;
}

inline std::optional<Rational> exact_sqrt(const Rational& v) {
    if (v < 0) return std::nullopt;
    auto n = exact_root(numerator(v), 2);
    auto d = exact_root(denominator(v), 2);
    if (n && d) return Rational(*n, *d);
    return std::nullopt;
}

inline std::optional<Rational> exact_fourth_root(const Rational& v) {
    if (v < 0) return std::nullopt;
    auto n = exact_root(numerator(v), 4);
    auto d = exact_root(denominator(v), 4);
    if (n && d) return Rational(*n, *d);
    return std::nullopt;
}

/// Exact complex scalars a + b*i with rational a, b. Field operations only.
struct Gaussian {
    Rational re, im;

    Gaussian() : re(0), im(0) {}
    Gaussian(Rational r) : re(std::move(r)), im(0) {}
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    Gaussian operator-() const { return {-re, -im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw Error("division by zero Gaussian rational");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Gaussian& operator+=(const Gaussian& b) { return *this = *this + b; }
    Gaussian& operator-=(const Gaussian& b) { return *this = *this - b; }
    Gaussian& operator*=(const Gaussian& b) { return *this = *this * b; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
    Gaussian conj() const { return {re, -im}; }
};

/// Per-scalar-mode behavior: exactness, zero tests, magnitude estimates.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long long v) { return Rational(v); }
    static bool is_zero(const Rational& v, double = 0.0) { return v == 0; }
    static double approx(const Rational& v) { return v.convert_to<double>(); }
    static double abs_approx(const Rational& v) { return std::fabs(approx(v)); }
    static Rational conj(const Rational& v) { return v; }
    static const char* mode() { return "exact"; }
};

template <>
struct ScalarTraits<Gaussian> {
    static constexpr bool exact = true;
    static Gaussian zero() { return {}; }
    static Gaussian one() { return Gaussian(Rational(1)); }
    static Gaussian from_int(long long v) { return Gaussian(Rational(v)); }
    static bool is_zero(const Gaussian& v, double = 0.0) { return v.re == 0 && v.im == 0; }
    static double abs_approx(const Gaussian& v) {
        return std::hypot(v.re.convert_to<double>(), v.im.convert_to<double>());
    }
    static Gaussian conj(const Gaussian& v) { return v.conj(); }
    static const char* mode() { return "exact-complex"; }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long v) { return static_cast<double>(v); }
    static bool is_zero(double v, double eps = 0.0) { return std::fabs(v) <= eps; }
    static double approx(double v) { return v; }
    static double abs_approx(double v) { return std::fabs(v); }
    static double conj(double v) { return v; }
    static const char* mode() { return "float"; }
};

template <>
struct ScalarTraits<std::complex<double>> {
    static constexpr bool exact = false;
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> from_int(long long v) { return {static_cast<double>(v), 0.0}; }
    static bool is_zero(const std::complex<double>& v, double eps = 0.0) { return std::abs(v) <= eps; }
    static double abs_approx(const std::complex<double>& v) { return std::abs(v); }
    static std::complex<double> conj(const std::complex<double>& v) { return std::conj(v); }
    static const char* mode() { return "float-complex"; }
};

inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(double v) { return v; }

inline std::complex<double> to_complex(const Gaussian& v) {
    return {v.re.convert_to<double>(), v.im.convert_to<double>()};
}
inline std::complex<double> to_complex(const std::complex<double>& v) { return v; }
inline std::complex<double> to_complex(const Rational& v) { return {to_double(v), 0.0}; }
inline std::complex<double> to_complex(double v) { return {v, 0.0}; }

}  // namespace ma6
