#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <string>

namespace g2patch {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                              boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Prime field Z/PZ, P < 2^63. Used for exact ranks of rational systems.
template <std::uint64_t P>
struct Zp {
    std::uint64_t v = 0;

    static constexpr std::uint64_t modulus = P;

    constexpr Zp() = default;
    constexpr Zp(std::int64_t x) // NOLINT: implicit from integers is intended
        : v(x >= 0 ? static_cast<std::uint64_t>(x) % P
                   : (P - static_cast<std::uint64_t>(-(x + 1)) % P - 1) % P) {}

    static constexpr Zp raw(std::uint64_t x) {
        Zp z;
        z.v = x;
        return z;
    }

    friend constexpr Zp operator+(Zp a, Zp b) {
        std::uint64_t s = a.v + b.v;
        return raw(s >= P ? s - P : s);
    }
    friend constexpr Zp operator-(Zp a, Zp b) { return raw(a.v >= b.v ? a.v - b.v : a.v + P - b.v); }
    friend constexpr Zp operator-(Zp a) { return raw(a.v == 0 ? 0 : P - a.v); }
    friend constexpr Zp operator*(Zp a, Zp b) {
        unsigned __int128 z = static_cast<unsigned __int128>(a.v) * b.v;
        if constexpr (P == (1ull << 61) - 1) {
            std::uint64_t r = (static_cast<std::uint64_t>(z) & P) + static_cast<std::uint64_t>(z >> 61);
            return raw(r >= P ? r - P : r);
        } else {
            return raw(static_cast<std::uint64_t>(z % P));
        }
    }
    friend Zp operator/(Zp a, Zp b) { return a * b.inverse(); }
    Zp& operator+=(Zp b) { return *this = *this + b; }
    Zp& operator-=(Zp b) { return *this = *this - b; }
    Zp& operator*=(Zp b) { return *this = *this * b; }
    Zp& operator/=(Zp b) { return *this = *this / b; }
    friend constexpr bool operator==(Zp a, Zp b) { return a.v == b.v; }
    friend constexpr bool operator!=(Zp a, Zp b) { return a.v != b.v; }

    Zp pow(std::uint64_t e) const {
        Zp r = raw(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    Zp inverse() const { return pow(P - 2); }
};

// 2^61 - 1 and 2^62 - 57
using Fp1 = Zp<2305843009213693951ull>;
using Fp2 = Zp<4611686018427387847ull>;

template <class T> inline bool is_zero(const T& x) { return x == T(0); }

template <class T> struct FieldTraits {
    static T from_rational(const Rational& r) { return r.convert_to<T>(); }
    static constexpr bool exact = false;
};

template <> struct FieldTraits<Rational> {
    static Rational from_rational(const Rational& r) { return r; }
    static constexpr bool exact = true;
};

template <std::uint64_t P> struct FieldTraits<Zp<P>> {
    static Zp<P> reduce(const BigInt& x) {
        BigInt m = x % P;
        if (m < 0) m += P;
        return Zp<P>::raw(m.convert_to<std::uint64_t>());
    }
    static Zp<P> from_rational(const Rational& r) {
        return reduce(boost::multiprecision::numerator(r)) / reduce(boost::multiprecision::denominator(r));
    }
    static constexpr bool exact = true;
};

template <class T> inline T from_rational(const Rational& r) { return FieldTraits<T>::from_rational(r); }

template <std::uint64_t P> std::ostream& operator<<(std::ostream& os, Zp<P> z) { return os << z.v; }

} // namespace g2patch
