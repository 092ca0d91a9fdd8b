#pragma once

#include "g2patch/field.hpp"

#include <map>
#include <string>
#include <utility>

namespace g2patch {

// Exact bivariate polynomial: exponent pair (i, j) of x1^i x2^j -> coefficient; no zero terms.
class Poly2 {
public:
    using Key = std::pair<int, int>;

    Poly2() = default;
    static Poly2 constant(const Rational& c);
    static Poly2 monomial(int i, int j, const Rational& c = Rational(1));
    static Poly2 linear(const Rational& a, const Rational& b, const Rational& c); // a x1 + b x2 + c

    const std::map<Key, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const;
    Rational coefficient(int i, int j) const;

    Poly2& operator+=(const Poly2& o);
    Poly2& operator-=(const Poly2& o);
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    friend Poly2 operator*(const Rational& s, const Poly2& a);
    friend bool operator==(const Poly2& a, const Poly2& b) { return a.t_ == b.t_; }

    Poly2 pow(int e) const;
    Poly2 dx() const;
    Poly2 dy() const;
    Poly2 laplacian() const;

    Rational eval(const Rational& x, const Rational& y) const;
    double eval(double x, double y) const;
    std::string str() const;

private:
    void add(const Key& k, const Rational& c);
    std::map<Key, Rational> t_;
};

} // namespace g2patch
