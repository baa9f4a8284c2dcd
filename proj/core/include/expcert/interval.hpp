#ifndef EXPCERT_INTERVAL_HPP
#define EXPCERT_INTERVAL_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace expcert
{

// Raised when an interval operation has no finite enclosure (division by an
// interval containing zero, logarithm of a non-positive value, overflow, ...).
class IntervalError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Closed interval [lo, hi] of finite doubles.
//
// Every arithmetic operation declared below returns an enclosure of the exact
// real image of its operands. Outward rounding is done without touching the
// FPU rounding mode: the four basic operations use error-free transformations
// (TwoSum, FMA residuals) to decide whether the round-to-nearest result is
// exact, and step one ulp outward only when it is not. This keeps every
// operation a pure function that is safe to call from any thread.
class Interval
{
public:
    constexpr Interval() noexcept = default;
    explicit Interval(double x);
    Interval(double lo, double hi);

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] double width() const noexcept { return hi_ - lo_; }
    [[nodiscard]] bool is_point() const noexcept { return lo_ == hi_; }

    [[nodiscard]] bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool contains(const Interval &other) const noexcept
    {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    friend bool operator==(const Interval &, const Interval &) = default;

private:
    double lo_ = 0;
    double hi_ = 0;
};

Interval operator+(const Interval &a, const Interval &b);
Interval operator-(const Interval &a, const Interval &b);
Interval operator*(const Interval &a, const Interval &b);
Interval operator/(const Interval &a, const Interval &b);
Interval operator-(const Interval &a) noexcept;

inline Interval &operator+=(Interval &a, const Interval &b) { return a = a + b; }
inline Interval &operator-=(Interval &a, const Interval &b) { return a = a - b; }
inline Interval &operator*=(Interval &a, const Interval &b) { return a = a * b; }

// x^2; tighter than a * a when a straddles zero.
Interval sqr(const Interval &a);

// Transcendentals. The libm results are widened by two ulps on each side;
// glibc documents at most one ulp of error for exp and log on x86-64.
Interval exp(const Interval &a);
Interval log(const Interval &a);

// x^y extended continuously to x = 0 with 0^0 = 1 and 0^y = 0 for y > 0.
// Point integer exponents are evaluated by repeated multiplication.
Interval pow(const Interval &base, const Interval &expo);

// t * ln(t) with the convention 0 * ln(0) = 0, i.e. ln(t^t). Defined for t >= 0.
Interval xlogx(const Interval &t);

Interval hull(const Interval &a, const Interval &b) noexcept;

// Round-to-nearest of (lo + hi) / 2, clamped into [lo, hi]. Strictly interior
// whenever a double lies strictly between the endpoints.
double mid(const Interval &a) noexcept;

// Certainly-less-than: every element of a is below every element of b.
bool clt(const Interval &a, const Interval &b) noexcept;

// The two halves [lo, mid] and [mid, hi].
std::pair<Interval, Interval> bisect(const Interval &a) noexcept;

// Parses "[a]", "[a,b]" or a bare decimal "a". Each endpoint is rounded outward
// to the tightest enclosing doubles (exact decimals stay points).
Interval parse_interval(std::string_view text);

// "[lo,hi]" with round-trip (17 significant digit) endpoints.
std::string to_string(const Interval &a);
std::ostream &operator<<(std::ostream &os, const Interval &a);

} // namespace expcert

#endif
