#pragma once

#include "g2patch/field.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

namespace g2patch {

// IEEE quadruple precision, for the floating-point basis construction.
using Quad = boost::multiprecision::float128;

template <> struct FieldTraits<Quad> {
    static Quad from_rational(const Rational& r) {
        return Quad(boost::multiprecision::numerator(r).str()) / Quad(boost::multiprecision::denominator(r).str());
    }
    static constexpr bool exact = false;
};

} // namespace g2patch
