#ifndef ENTX_RATIONAL_HPP
#define ENTX_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace entx {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline std::string rat_to_string(const Rat& q)
{
    std::string s = numerator(q).str();
    if (denominator(q) != 1)
        s += "/" + denominator(q).str();
    return s;
}

// Parses "p", "p/q" or a plain decimal like "1.25".
inline Rat parse_rational(const std::string& text)
{
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("rational with zero denominator: " + text);
        return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        bool neg = false;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            neg = digits[0] == '-';
            digits = digits.substr(1);
        }
        if (digits.empty())
            throw std::invalid_argument("bad rational: " + text);
        BigInt num(digits);
        BigInt den = 1;
        for (size_t i = 0; i < text.size() - dot - 1; ++i) den *= 10;
        Rat q(num, den);
        return neg ? -q : q;
    }
    return Rat(BigInt(text));
}

// Best rational approximation of x with |x - p/q| <= eps, by continued fractions.
inline Rat rationalize(double x, double eps)
{
    if (eps <= 0)
        throw std::invalid_argument("rationalize: eps must be positive");
    double a = x;
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(a);
        BigInt ai(static_cast<long long>(fl));
        BigInt p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double approx = Rat(p1, q1).convert_to<double>();
        if (std::abs(approx - x) <= eps)
            return Rat(p1, q1);
        double frac = a - fl;
        if (frac < 1e-15) break;
        a = 1.0 / frac;
    }
    return Rat(p1, q1);
}

} // namespace entx

#endif
