#ifndef BRATTELI_NUMERIC_HPP
#define BRATTELI_NUMERIC_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace bratteli {

using Integer = mpz_class;
using Rational = mpq_class;

// Domain errors map to exit status 1 in the CLI, truncation errors to 2.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationIncomplete : std::runtime_error {
    std::vector<std::string> missing;
    TruncationIncomplete(const std::string& what, std::vector<std::string> missing_ = {})
        : std::runtime_error(what), missing(std::move(missing_)) {}
};

struct Unsupported : DomainError {
    using DomainError::DomainError;
};

// Accepts "p/q" and finite decimals such as "0.3".
Rational parse_rational(const std::string& s);
std::vector<Rational> parse_rational_list(const std::string& s, char sep = ',');
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
double to_double(const Rational& q);
// Decimal rendering with the given number of significant binary digits.
std::string to_decimal(const Rational& q, unsigned precision_bits = 128, int digits = 30);

Integer binomial(long n, long k);
Integer factorial(long n);
Rational power(const Rational& base, long e);
Integer power(const Integer& base, unsigned long e);

// S_i^{(k)} = C(i + k - 1, k), zero outside i >= 1, k >= 0.
Integer s_number(long i, long k);

// Exact square root when q is the square of a rational, otherwise throws.
Rational exact_sqrt(const Rational& q);

// Catalan numbers C_0..C_n.
std::vector<Integer> catalan_numbers(long n);

} // namespace bratteli

#endif
