#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include <mpfr.h>

#include <expcert/interval.hpp>
#include <expcert/rational.hpp>

using namespace expcert;

namespace
{

bool holds(const Interval &a, const BigRational &q) { return to_rational(a.lo()) <= q && q <= to_rational(a.hi()); }

double ulp(double x) { return std::nextafter(std::fabs(x), INFINITY) - std::fabs(x); }

// Random interval with endpoints spread over several binades.
Interval random_interval(std::mt19937_64 &rng, bool avoid_zero = false)
{
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-6, 6);
    for (;;) {
        double a = std::ldexp(mant(rng), ex(rng));
        double b = std::bernoulli_distribution(0.2)(rng) ? a : std::ldexp(mant(rng), ex(rng));
        Interval i(std::min(a, b), std::max(a, b));
        if (!avoid_zero || !i.contains(0.0)) {
            return i;
        }
    }
}

BigRational random_point(std::mt19937_64 &rng, const Interval &i)
{
    std::uniform_int_distribution<long> k(0, 1L << 20);
    return to_rational(i.lo()) + (to_rational(i.hi()) - to_rational(i.lo())) * BigRational(k(rng), 1L << 20);
}

} // namespace

TEST(Interval, ParseExactAndInexact)
{
    EXPECT_EQ(parse_interval("[1]"), Interval(1.0, 1.0));
    const Interval tenth = parse_interval("[0.1]");
    EXPECT_LT(to_rational(tenth.lo()), ratio(1, 10));
    EXPECT_GT(to_rational(tenth.hi()), ratio(1, 10));
    EXPECT_EQ(std::nextafter(tenth.lo(), 1.0), tenth.hi());
    const Interval leg = parse_interval("[1e-5,0.15]");
    EXPECT_TRUE(holds(leg, ratio(1, 100000)));
    EXPECT_TRUE(holds(leg, ratio(3, 20)));
    EXPECT_EQ(parse_interval("0.5"), Interval(0.5));
    EXPECT_THROW(parse_interval("[2,1]"), std::invalid_argument);
    EXPECT_THROW(parse_interval("[x]"), std::invalid_argument);
    EXPECT_THROW(parse_interval("[1,2"), std::invalid_argument);
}

TEST(Interval, Construction)
{
    EXPECT_THROW(Interval(2.0, 1.0), IntervalError);
    EXPECT_THROW(Interval(std::nan(""), 1.0), IntervalError);
    EXPECT_THROW(Interval(0.0, INFINITY), IntervalError);
}

TEST(Interval, Arithmetic)
{
    EXPECT_EQ(Interval(1, 2) + Interval(3, 4), Interval(4, 6));
    EXPECT_EQ(Interval(0, 1) - Interval(0, 1), Interval(-1, 1));
    EXPECT_EQ(Interval(-1, 2) * Interval(3, 4), Interval(-4, 8));
    EXPECT_EQ(Interval(1, 2) / Interval(4, 8), Interval(0.125, 0.5));
    EXPECT_THROW(Interval(1, 2) / Interval(-1, 1), IntervalError);
    EXPECT_EQ(-Interval(1, 2), Interval(-2, -1));
    EXPECT_EQ(sqr(Interval(-2, 1)), Interval(0, 4));

    // 0.1 + 0.2 is inexact in binary.
    const Interval s = Interval(0.1) + Interval(0.2);
    EXPECT_TRUE(holds(s, to_rational(0.1) + to_rational(0.2)));
    EXPECT_FALSE(s.is_point());
}

TEST(Interval, Transcendental)
{
    const Interval e0 = exp(Interval(0.0));
    EXPECT_TRUE(e0.contains(1.0));
    EXPECT_LE(e0.width(), 2 * ulp(1.0));
    EXPECT_TRUE(log(Interval(1.0)).contains(0.0));
    EXPECT_TRUE(log(exp(Interval(1.0))).contains(1.0));
    EXPECT_THROW(log(Interval(-1.0, 1.0)), IntervalError);
}

TEST(Interval, TranscendentalAgainstMpfr)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(-30.0, 30.0);
    mpfr_t r;
    mpfr_init2(r, 256);
    for (int i = 0; i < 2000; ++i) {
        const double a = x(rng);
        mpfr_set_d(r, a, MPFR_RNDN);
        mpfr_exp(r, r, MPFR_RNDN);
        const Interval e = exp(Interval(a));
        EXPECT_LE(mpfr_cmp_d(r, e.hi()), 0) << a;
        EXPECT_GE(mpfr_cmp_d(r, e.lo()), 0) << a;

        const double b = std::exp(x(rng));
        mpfr_set_d(r, b, MPFR_RNDN);
        mpfr_log(r, r, MPFR_RNDN);
        const Interval l = log(Interval(b));
        EXPECT_LE(mpfr_cmp_d(r, l.hi()), 0) << b;
        EXPECT_GE(mpfr_cmp_d(r, l.lo()), 0) << b;
    }
    mpfr_clear(r);
}

TEST(Interval, Pow)
{
    const Interval one = pow(Interval(0.0), Interval(0.0));
    EXPECT_TRUE(one.contains(1.0));
    const Interval eight = pow(Interval(2.0), Interval(3.0));
    EXPECT_TRUE(eight.contains(8.0));
    EXPECT_LE(eight.width(), 4 * ulp(8.0));
    EXPECT_TRUE(pow(Interval(0, 0.5), Interval(1.0)).contains(Interval(0, 0.5)));
    EXPECT_TRUE(pow(Interval(4.0), Interval(0.5)).contains(2.0));
    EXPECT_TRUE(pow(Interval(0.0, 0.25), Interval(0.0, 0.5)).contains(Interval(0.0, 1.0)));
    EXPECT_THROW(pow(Interval(-1.0, 1.0), Interval(2.0)), IntervalError);
    EXPECT_THROW(pow(Interval(0.0, 1.0), Interval(-1.0)), IntervalError);
}

TEST(Interval, Xlogx)
{
    EXPECT_TRUE(xlogx(Interval(0.0)).contains(0.0));
    EXPECT_TRUE(xlogx(Interval(1.0)).contains(0.0));
    const Interval around = xlogx(Interval(0.2, 0.5));
    EXPECT_TRUE(around.contains(-std::exp(-1.0)));
    EXPECT_TRUE(around.contains(0.2 * std::log(0.2)));
    EXPECT_TRUE(around.contains(0.5 * std::log(0.5)));
    EXPECT_THROW(xlogx(Interval(-0.1, 0.1)), IntervalError);
}

TEST(Interval, Comparisons)
{
    EXPECT_TRUE(clt(Interval(1, 2), Interval(3, 4)));
    EXPECT_FALSE(clt(Interval(1, 3), Interval(3, 4)));
    EXPECT_EQ(hull(Interval(0, 1), Interval(2, 3)), Interval(0, 3));
}

TEST(Interval, ToStringReparsesOutward)
{
    const Interval a = parse_interval("[0.1,0.7]");
    const Interval b = parse_interval(to_string(a));
    EXPECT_TRUE(b.contains(a));
    EXPECT_LE(b.lo(), a.lo());
    EXPECT_GE(std::nextafter(b.lo(), 1.0), a.lo());
    EXPECT_LE(std::nextafter(b.hi(), 0.0), a.hi());
    EXPECT_EQ(to_string(Interval(0.25, 0.5)), "[0.25,0.5]");
    EXPECT_EQ(parse_interval(to_string(Interval(0.25, 0.5))), Interval(0.25, 0.5));
}

TEST(IntervalProperty, Containment)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5000; ++i) {
        const Interval a = random_interval(rng);
        const Interval b = random_interval(rng);
        const Interval nz = random_interval(rng, true);
        const BigRational x = random_point(rng, a);
        const BigRational y = random_point(rng, b);
        const BigRational z = random_point(rng, nz);
        ASSERT_TRUE(holds(a + b, x + y));
        ASSERT_TRUE(holds(a - b, x - y));
        ASSERT_TRUE(holds(a * b, x * y));
        ASSERT_TRUE(holds(a / nz, x / z));
        ASSERT_TRUE(holds(sqr(a), x * x));
    }
}

TEST(IntervalProperty, InclusionMonotone)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5000; ++i) {
        const Interval a = random_interval(rng);
        const Interval b = random_interval(rng, true);
        const Interval a2 = hull(a, random_interval(rng));
        const Interval b2 = b.lo() > 0 ? Interval(b.lo() / 2, b.hi() * 2) : Interval(b.lo() * 2, b.hi() / 2);
        ASSERT_TRUE((a2 + b2).contains(a + b));
        ASSERT_TRUE((a2 - b2).contains(a - b));
        ASSERT_TRUE((a2 * b2).contains(a * b));
        ASSERT_TRUE((a2 / b2).contains(a / b));
        const Interval pa(std::fabs(a.lo()) * 0.5, std::fabs(a.lo()) + 1);
        const Interval pa2(pa.lo() * 0.5, pa.hi() * 2);
        ASSERT_TRUE(exp(pa2).contains(exp(pa)));
        ASSERT_TRUE(log(pa2).contains(log(pa)));
        ASSERT_TRUE(xlogx(pa2).contains(xlogx(pa)));
        const Interval e = b / Interval(64.0);
        const Interval e2 = b2 / Interval(64.0);
        ASSERT_TRUE(pow(pa2, e2).contains(pow(pa, e)));
    }
}

TEST(IntervalProperty, BisectionCovers)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5000; ++i) {
        const Interval a = random_interval(rng);
        const auto [l, r] = bisect(a);
        ASSERT_EQ(l.lo(), a.lo());
        ASSERT_EQ(r.hi(), a.hi());
        ASSERT_EQ(l.hi(), r.lo());
        ASSERT_TRUE(a.contains(mid(a)));
    }
}

TEST(IntervalProperty, CertainlyLess)
{
    std::mt19937_64 rng(4);
    int seen = 0;
    for (int i = 0; i < 5000; ++i) {
        const Interval a = random_interval(rng);
        const Interval b = random_interval(rng);
        if (clt(a, b)) {
            ++seen;
            ASSERT_LT(random_point(rng, a), random_point(rng, b));
        }
    }
    EXPECT_GT(seen, 0);
}
