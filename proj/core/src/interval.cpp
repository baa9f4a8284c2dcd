#include <expcert/interval.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <expcert/rational.hpp>

namespace expcert
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

// Below this magnitude FMA residuals may be inexact because of gradual
// underflow; results are then widened unconditionally.
constexpr double tiny = 0x1p-969;

double down(double x) noexcept { return std::nextafter(x, -inf); }
double up(double x) noexcept { return std::nextafter(x, inf); }

void require_finite(double x, const char *what)
{
    if (!std::isfinite(x)) {
        throw IntervalError(std::string(what) + ": enclosure is not finite");
    }
}

// Rounded-down and rounded-up results of a single binary operation.
struct Bounds {
    double lo;
    double hi;
};

Bounds sum_bounds(double x, double y)
{
    const double s = x + y;
    require_finite(s, "add");
    // TwoSum: err is the exact rounding error of s.
    const double yy = s - x;
    const double err = (x - (s - yy)) + (y - yy);
    if (err == 0) {
        return {s, s};
    }
    return err < 0 ? Bounds{down(s), s} : Bounds{s, up(s)};
}

Bounds product_bounds(double x, double y)
{
    if (x == 0 || y == 0) {
        return {0, 0};
    }
    const double p = x * y;
    require_finite(p, "mul");
    if (std::fabs(p) < tiny) {
        return {down(p), up(p)};
    }
    const double err = std::fma(x, y, -p);
    if (err == 0) {
        return {p, p};
    }
    return err < 0 ? Bounds{down(p), p} : Bounds{p, up(p)};
}

Bounds quotient_bounds(double x, double y)
{
    if (x == 0) {
        return {0, 0};
    }
    const double q = x / y;
    require_finite(q, "div");
    if (std::fabs(q) < tiny || std::fabs(x) < tiny) {
        return {down(q), up(q)};
    }
    // x - q*y is exact; x/y - q has the sign of r/y.
    const double r = std::fma(-q, y, x);
    if (r == 0) {
        return {q, q};
    }
    const bool above = (r > 0) == (y > 0);
    return above ? Bounds{q, up(q)} : Bounds{down(q), q};
}

template <typename F>
Interval corners(const Interval &a, const Interval &b, F op)
{
    const std::array<Bounds, 4> c{op(a.lo(), b.lo()), op(a.lo(), b.hi()), op(a.hi(), b.lo()), op(a.hi(), b.hi())};
    double lo = c[0].lo;
    double hi = c[0].hi;
    for (const auto &e : c) {
        lo = std::min(lo, e.lo);
        hi = std::max(hi, e.hi);
    }
    return Interval(lo, hi);
}

constexpr int transcendental_slop = 2;

double step_down(double x, int n) noexcept
{
    for (int i = 0; i < n; ++i) {
        x = down(x);
    }
    return x;
}

double step_up(double x, int n) noexcept
{
    for (int i = 0; i < n; ++i) {
        x = up(x);
    }
    return x;
}

double exp_lo(double x)
{
    if (x == 0) {
        return 1;
    }
    return std::max(0.0, step_down(std::exp(x), transcendental_slop));
}

double exp_hi(double x)
{
    if (x == 0) {
        return 1;
    }
    const double r = step_up(std::exp(x), transcendental_slop);
    require_finite(r, "exp");
    return r;
}

double log_lo(double x)
{
    if (x == 1) {
        return 0;
    }
    return step_down(std::log(x), transcendental_slop);
}

double log_hi(double x)
{
    if (x == 1) {
        return 0;
    }
    return step_up(std::log(x), transcendental_slop);
}

Interval integer_power(const Interval &base, unsigned long long n)
{
    // base >= 0 here, so the power is monotone and interval multiplication
    // of non-negative factors is tight.
    Interval result(1.0);
    Interval factor = base;
    while (n != 0) {
        if ((n & 1U) != 0) {
            result = result * factor;
        }
        n >>= 1U;
        if (n != 0) {
            factor = factor * factor;
        }
    }
    return result;
}

// x ln x at a single point.
Interval xlogx_point(double x)
{
    if (x == 0) {
        return Interval(0.0);
    }
    return Interval(x) * log(Interval(x));
}

} // namespace

Interval::Interval(double x) : Interval(x, x) {}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw IntervalError("interval endpoints must be finite");
    }
    if (lo > hi) {
        throw IntervalError("interval lower endpoint exceeds upper endpoint");
    }
}

Interval operator+(const Interval &a, const Interval &b)
{
    return Interval(sum_bounds(a.lo(), b.lo()).lo, sum_bounds(a.hi(), b.hi()).hi);
}

Interval operator-(const Interval &a, const Interval &b)
{
    return Interval(sum_bounds(a.lo(), -b.hi()).lo, sum_bounds(a.hi(), -b.lo()).hi);
}

Interval operator-(const Interval &a) noexcept
{
    // Exact.
    return Interval(-a.hi(), -a.lo());
}

Interval operator*(const Interval &a, const Interval &b) { return corners(a, b, product_bounds); }

Interval operator/(const Interval &a, const Interval &b)
{
    if (b.contains(0.0)) {
        throw IntervalError("division by an interval containing zero");
    }
    return corners(a, b, quotient_bounds);
}

Interval sqr(const Interval &a)
{
    if (a.lo() >= 0) {
        return Interval(product_bounds(a.lo(), a.lo()).lo, product_bounds(a.hi(), a.hi()).hi);
    }
    if (a.hi() <= 0) {
        return Interval(product_bounds(a.hi(), a.hi()).lo, product_bounds(a.lo(), a.lo()).hi);
    }
    const double m = std::max(-a.lo(), a.hi());
    return Interval(0.0, product_bounds(m, m).hi);
}

Interval exp(const Interval &a) { return Interval(exp_lo(a.lo()), exp_hi(a.hi())); }

Interval log(const Interval &a)
{
    if (a.lo() <= 0) {
        throw IntervalError("log of an interval reaching zero or below");
    }
    return Interval(log_lo(a.lo()), log_hi(a.hi()));
}

Interval pow(const Interval &base, const Interval &expo)
{
    if (base.lo() < 0) {
        throw IntervalError("pow with a negative base");
    }
    if (expo.is_point() && std::trunc(expo.lo()) == expo.lo() && std::fabs(expo.lo()) <= 0x1p40) {
        const double n = expo.lo();
        if (n == 0) {
            return Interval(1.0);
        }
        if (n > 0) {
            return integer_power(base, static_cast<unsigned long long>(n));
        }
        if (base.lo() == 0) {
            throw IntervalError("pow of zero to a negative exponent");
        }
        return Interval(1.0) / integer_power(base, static_cast<unsigned long long>(-n));
    }
    if (base.lo() > 0) {
        return exp(expo * log(base));
    }
    if (expo.lo() < 0) {
        throw IntervalError("pow of zero to a negative exponent");
    }
    // base = [0, t]. For y > 0, x^y <= t^y on [0, t]; the y = 0 slice adds 1.
    double top = 0;
    if (base.hi() > 0) {
        const Interval at_top = exp(expo * log(Interval(base.hi())));
        top = at_top.hi();
    }
    if (expo.lo() == 0) {
        top = std::max(top, 1.0);
    }
    return Interval(0.0, top);
}

Interval xlogx(const Interval &t)
{
    if (t.lo() < 0) {
        throw IntervalError("xlogx of a negative argument");
    }
    // Minimum of t ln t is -1/e, attained at t = 1/e.
    static const Interval inv_e = exp(Interval(-1.0));
    const Interval at_lo = xlogx_point(t.lo());
    const Interval at_hi = t.is_point() ? at_lo : xlogx_point(t.hi());
    if (t.hi() <= inv_e.lo()) {
        return Interval(at_hi.lo(), at_lo.hi());
    }
    if (t.lo() >= inv_e.hi()) {
        return Interval(at_lo.lo(), at_hi.hi());
    }
    return Interval(-inv_e.hi(), std::max(at_lo.hi(), at_hi.hi()));
}

Interval hull(const Interval &a, const Interval &b) noexcept
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

double mid(const Interval &a) noexcept
{
    return std::clamp(std::midpoint(a.lo(), a.hi()), a.lo(), a.hi());
}

bool clt(const Interval &a, const Interval &b) noexcept { return a.hi() < b.lo(); }

std::pair<Interval, Interval> bisect(const Interval &a) noexcept
{
    const double m = mid(a);
    return {hull(Interval(a.lo()), Interval(m)), hull(Interval(m), Interval(a.hi()))};
}

Interval parse_interval(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
            s.remove_prefix(1);
        }
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
            s.remove_suffix(1);
        }
        return s;
    };
    std::string_view body = trim(text);
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') {
            throw std::invalid_argument("interval literal missing closing bracket: " + std::string(text));
        }
        body = trim(body.substr(1, body.size() - 2));
    }
    const auto comma = body.find(',');
    const std::string_view first = trim(body.substr(0, comma));
    const std::string_view second = comma == std::string_view::npos ? first : trim(body.substr(comma + 1));
    if (second.find(',') != std::string_view::npos) {
        throw std::invalid_argument("interval literal has more than two endpoints: " + std::string(text));
    }
    const BigRational a = parse_rational(first);
    const BigRational b = parse_rational(second);
    if (a > b) {
        throw std::invalid_argument("interval literal has lower endpoint above upper: " + std::string(text));
    }
    return Interval(enclose(a).lo(), enclose(b).hi());
}

std::string to_string(const Interval &a)
{
    std::array<char, 64> buf{};
    std::string out = "[";
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), a.lo());
    out.append(buf.data(), r.ptr);
    out += ',';
    r = std::to_chars(buf.data(), buf.data() + buf.size(), a.hi());
    out.append(buf.data(), r.ptr);
    out += ']';
    return out;
}

std::ostream &operator<<(std::ostream &os, const Interval &a) { return os << to_string(a); }

} // namespace expcert
