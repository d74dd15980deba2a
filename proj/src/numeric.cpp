#include "bratteli/numeric.hpp"

#include <cctype>
#include <sstream>

namespace bratteli {

namespace {

bool all_digits(const std::string& s, std::size_t from = 0)
{
    if (from >= s.size()) return false;
    for (std::size_t i = from; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Rational parse_rational(const std::string& raw)
{
    std::string s = trim(raw);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    if (s.empty()) throw DomainError("empty rational literal");
    std::size_t sign = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num, sign) || !all_digits(den)) throw DomainError("malformed rational '" + raw + "'");
        Integer dz(den);
        if (dz == 0) throw DomainError("zero denominator in '" + raw + "'");
        Rational q{Integer(num), dz};
        q.canonicalize();
        return q;
    }
    if (dot != std::string::npos) {
        std::string ip = s.substr(sign, dot - sign), fp = s.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || !all_digits(fp)) throw DomainError("malformed decimal '" + raw + "'");
        Integer den = power(Integer(10), fp.size());
        Rational q(Integer((ip.empty() ? std::string("0") : ip) + fp), den);
        q.canonicalize();
        if (s[0] == '-') q = -q;
        return q;
    }
    if (!all_digits(s, sign)) throw DomainError("malformed rational '" + raw + "'");
    return Rational(Integer(s));
}

std::vector<Rational> parse_rational_list(const std::string& s, char sep)
{
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(parse_rational(item));
    if (out.empty()) throw DomainError("empty rational list");
    return out;
}

std::string to_string(const Rational& raw)
{
    Rational q = raw;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

std::string to_decimal(const Rational& q, unsigned precision_bits, int digits)
{
    mpf_class f(q, precision_bits);
    mp_exp_t exp = 0;
    std::string m = f.get_str(exp, 10, digits);
    if (m.empty() || m == "0") return "0";
    bool neg = m[0] == '-';
    if (neg) m.erase(0, 1);
    std::string out = neg ? "-0." : "0.";
    out += m;
    out += "e" + std::to_string(exp);
    return out;
}

Integer binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Integer factorial(long n)
{
    if (n < 0) throw DomainError("factorial of negative number");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Integer power(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rational power(const Rational& base, long e)
{
    if (e < 0) {
        if (base == 0) throw DomainError("zero to a negative power");
        return power(Rational(1) / base, -e);
    }
    Rational r(power(base.get_num(), static_cast<unsigned long>(e)),
               power(base.get_den(), static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
}

Integer s_number(long i, long k)
{
    if (i < 1 || k < 0) return 0;
    return binomial(i + k - 1, k);
}

Rational exact_sqrt(const Rational& q)
{
    if (q < 0) throw DomainError("square root of a negative rational");
    Integer n = q.get_num(), d = q.get_den(), rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    if (rn * rn != n || rd * rd != d) throw DomainError("not a rational square: " + to_string(q));
    return Rational(rn, rd);
}

std::vector<Integer> catalan_numbers(long n)
{
    std::vector<Integer> c;
    for (long i = 0; i <= n; ++i) c.push_back(binomial(2 * i, i) / (i + 1));
    return c;
}

} // namespace bratteli
