/**
 * Exact rational scalars for the whole library.
 *
 * Every probability, coefficient and coordinate in the exact modules is a
 * GMP-backed rational kept in lowest terms with a positive denominator, so
 * no computation ever rounds.  Floating point appears only in the quantum
 * cross-check module.
 */

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace gptk {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/**
 * Parses "p", "-p" or "p/q" into a canonical rational.
 *
 * The boost string constructor stores the text verbatim ("2/4" stays 2/4),
 * so canonicalization is done by hand from numerator and denominator.
 * Throws std::invalid_argument on malformed text or a zero denominator.
 */
inline Rational parse_rational(const std::string& text)
{
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("rational literal with zero denominator: " + text);
        return Rational(num, den);  // the two-argument constructor canonicalizes
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("malformed rational literal: " + text);
    }
}

/** Formats as "p" when the denominator is 1, else "p/q". */
inline std::string format_rational(const Rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace gptk
