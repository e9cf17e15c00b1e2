#ifndef CSTARLAB_RATIONAL_HPP
#define CSTARLAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace cstarlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow: 0 to negative power");
        return Rational(1) / rational_pow(base, -exp);
    }
    Rational result(1), b = base;
    unsigned long e = static_cast<unsigned long>(exp);
    while (e) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

// Parses "3/5", "-1/2", "7", or a decimal like "0.25".
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        BigInt num(digits);
        BigInt den = 1;
        for (size_t i = 0; i < s.size() - dot - 1; ++i) den *= 10;
        return Rational(num, den);
    }
    return Rational(BigInt(s));
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace cstarlab

#endif
