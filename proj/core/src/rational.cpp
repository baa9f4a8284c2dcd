#include <expcert/rational.hpp>

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace expcert
{

namespace
{

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (const char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
            return false;
        }
    }
    return true;
}

[[noreturn]] void malformed(std::string_view text)
{
    throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
}

BigInteger parse_signed_integer(std::string_view s, std::string_view text)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        malformed(text);
    }
    BigInteger r(std::string(s), 10);
    return negative ? BigInteger(-r) : r;
}

BigInteger power_of_ten(unsigned long e)
{
    BigInteger r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

} // namespace

BigRational ratio(long num, long den)
{
    if (den == 0) {
        throw std::invalid_argument("zero denominator");
    }
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.empty()) {
        malformed(text);
    }

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const BigInteger num = parse_signed_integer(s.substr(0, slash), text);
        const std::string_view den_text = s.substr(slash + 1);
        if (!all_digits(den_text)) {
            malformed(text);
        }
        const BigInteger den(std::string(den_text), 10);
        if (den == 0) {
            throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        }
        BigRational q(num, den);
        q.canonicalize();
        return q;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const BigInteger ex = parse_signed_integer(s.substr(e + 1), text);
        if (!ex.fits_slong_p() || abs(ex) > 100000) {
            throw std::invalid_argument("exponent out of range: '" + std::string(text) + "'");
        }
        exponent = ex.get_si();
        s = s.substr(0, e);
    }

    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = s.substr(0, dot);
        const std::string_view frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac))) {
            malformed(text);
        }
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) {
            malformed(text);
        }
        digits = std::string(s);
    }

    BigRational q{BigInteger(digits, 10)};
    if (exponent > 0) {
        q *= power_of_ten(static_cast<unsigned long>(exponent));
    } else if (exponent < 0) {
        q /= power_of_ten(static_cast<unsigned long>(-exponent));
    }
    q.canonicalize();
    return negative ? BigRational(-q) : q;
}

long long parse_integer(std::string_view text)
{
    const BigRational q = parse_rational(text);
    if (q.get_den() != 1) {
        throw std::invalid_argument("expected an integer: '" + std::string(text) + "'");
    }
    const BigInteger &n = q.get_num();
    if (n > std::numeric_limits<long>::max() || n < std::numeric_limits<long>::min()) {
        throw std::invalid_argument("integer out of range: '" + std::string(text) + "'");
    }
    return n.get_si();
}

BigRational to_rational(double x)
{
    if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite double has no rational value");
    }
    return BigRational(x);
}

Interval enclose(const BigRational &q)
{
    // mpq_get_d truncates toward zero, so c is one of the two neighbours of q.
    const double c = q.get_d();
    if (!std::isfinite(c) || std::fabs(c) == std::numeric_limits<double>::max()) {
        throw IntervalError("rational " + to_string(q) + " is outside the double range");
    }
    const int order = cmp(BigRational(c), q);
    if (order == 0) {
        return Interval(c);
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    return order < 0 ? Interval(c, std::nextafter(c, inf)) : Interval(std::nextafter(c, -inf), c);
}

std::string to_string(const BigRational &q) { return q.get_str(10); }

BigInteger floor(const BigRational &q)
{
    BigInteger r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

BigInteger ceil(const BigRational &q)
{
    BigInteger r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

double to_double(const BigRational &q) { return q.get_d(); }

} // namespace expcert
