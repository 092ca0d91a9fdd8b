#include "g2patch/field.hpp"

#include <cstdlib>
#include <stdexcept>

namespace g2patch {

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            auto dot = s.find_first_of(".eE");
            if (dot == std::string::npos) return Rational(BigInt(s));
            // decimal literal: exact value of the written decimal, not of the nearest double
            std::string mant = s, expo;
            auto e = s.find_first_of("eE");
            if (e != std::string::npos) {
                mant = s.substr(0, e);
                expo = s.substr(e + 1);
            }
            int shift = expo.empty() ? 0 : std::stoi(expo);
            auto p = mant.find('.');
            if (p != std::string::npos) {
                shift -= static_cast<int>(mant.size() - p - 1);
                mant.erase(p, 1);
            }
            Rational r{BigInt(mant)};
            BigInt ten = 1;
            for (int i = 0; i < std::abs(shift); ++i) ten *= 10;
            return shift >= 0 ? r * ten : r / ten;
        }
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal '" + s + "'");
    }
}

std::string to_string(const Rational& r) {
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

} // namespace g2patch
