#include "g2patch/poly2.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace g2patch {

Poly2 Poly2::constant(const Rational& c) { return monomial(0, 0, c); }

Poly2 Poly2::monomial(int i, int j, const Rational& c) {
    Poly2 p;
    p.add({i, j}, c);
    return p;
}

Poly2 Poly2::linear(const Rational& a, const Rational& b, const Rational& c) {
    Poly2 p;
    p.add({1, 0}, a);
    p.add({0, 1}, b);
    p.add({0, 0}, c);
    return p;
}

void Poly2::add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
        t_.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == 0) t_.erase(it);
}

int Poly2::degree() const {
    int d = -1;
    for (const auto& [k, c] : t_) d = std::max(d, k.first + k.second);
    return d;
}

Rational Poly2::coefficient(int i, int j) const {
    auto it = t_.find({i, j});
    return it == t_.end() ? Rational(0) : it->second;
}

Poly2& Poly2::operator+=(const Poly2& o) {
    for (const auto& [k, c] : o.t_) add(k, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
    for (const auto& [k, c] : o.t_) add(k, -c);
    return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ka, ca] : a.t_)
        for (const auto& [kb, cb] : b.t_) r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
}

Poly2 operator*(const Rational& s, const Poly2& a) {
    Poly2 r;
    if (s == 0) return r;
    for (const auto& [k, c] : a.t_) r.t_.emplace(k, s * c);
    return r;
}

Poly2 Poly2::pow(int e) const {
    Poly2 r = constant(Rational(1)), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

Poly2 Poly2::dx() const {
    Poly2 r;
    for (const auto& [k, c] : t_)
        if (k.first > 0) r.add({k.first - 1, k.second}, c * k.first);
    return r;
}

Poly2 Poly2::dy() const {
    Poly2 r;
    for (const auto& [k, c] : t_)
        if (k.second > 0) r.add({k.first, k.second - 1}, c * k.second);
    return r;
}

Poly2 Poly2::laplacian() const { return dx().dx() + dy().dy(); }

Rational Poly2::eval(const Rational& x, const Rational& y) const {
    Rational s(0);
    for (const auto& [k, c] : t_) {
        Rational m = c;
        for (int i = 0; i < k.first; ++i) m *= x;
        for (int j = 0; j < k.second; ++j) m *= y;
        s += m;
    }
    return s;
}

double Poly2::eval(double x, double y) const {
    const int d = std::max(degree(), 0);
    std::vector<double> px(d + 1, 1.0), py(d + 1, 1.0);
    for (int i = 1; i <= d; ++i) px[i] = px[i - 1] * x, py[i] = py[i - 1] * y;
    double s = 0;
    for (const auto& [k, c] : t_) s += to_double(c) * px[k.first] * py[k.second];
    return s;
}

std::string Poly2::str() const {
    if (t_.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [k, c] = *it;
        o << (first ? "" : " + ") << "(" << to_string(c) << ")";
        if (k.first) o << "*x1" << (k.first > 1 ? "^" + std::to_string(k.first) : "");
        if (k.second) o << "*x2" << (k.second > 1 ? "^" + std::to_string(k.second) : "");
        first = false;
    }
    return o.str();
}

} // namespace g2patch
