#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <expcert/profiles.hpp>

using namespace expcert;

namespace
{

AffineSegment seg(const char *lo, const char *hi, const char *k, const char *m)
{
    return {parse_rational(lo), parse_rational(hi), parse_rational(k), parse_rational(m)};
}

} // namespace

TEST(Profiles, Evaluation)
{
    EXPECT_EQ(eval_rational(builtin_profile(6), ratio(1, 4)), ratio(1, 2));
    EXPECT_EQ(eval_rational(builtin_profile(5), 0), 0);
    EXPECT_EQ(eval_rational(builtin_profile(7), ratio(3, 10)), ratio(61, 100));
    EXPECT_EQ(eval_rational(builtin_profile(8), ratio(1, 5)), ratio(1, 2));
    EXPECT_EQ(eval_rational(builtin_profile(8), ratio(1, 3)), ratio(2, 3));
    EXPECT_EQ(eval_rational(builtin_profile(5), 1), 1);
    EXPECT_THROW(eval_rational(builtin_profile(5), ratio(11, 10)), std::invalid_argument);
    EXPECT_THROW(builtin_profile(4), std::invalid_argument);
}

TEST(Profiles, IntervalEvaluation)
{
    const Interval tenth = parse_interval("[0.1]");
    EXPECT_TRUE(eval_interval(builtin_profile(6), tenth).contains(0.25));
    EXPECT_TRUE(eval_interval(builtin_profile(5), Interval(0.0)).contains(0.0));
    const Interval f7 = eval_interval(builtin_profile(7), parse_interval("[0.1,0.15]"));
    EXPECT_LE(to_rational(f7.lo()), ratio(3, 10));
    EXPECT_GE(to_rational(f7.hi()), ratio(2, 5));
}

TEST(Profiles, BuiltinStructure)
{
    const BigRational slopes[] = {2, ratio(5, 2), 3, 3};
    for (int d = 5; d <= 8; ++d) {
        const StructureReport r = check_structure(builtin_profile(d));
        for (const auto &c : r.checks) {
            EXPECT_TRUE(c.passed) << "d=" << d << ' ' << c.name << ' ' << c.detail;
        }
        EXPECT_EQ(r.max_slope, slopes[d - 5]);
        EXPECT_LT(r.max_slope, d - 1);
    }
}

TEST(Profiles, DiscontinuousProfileFails)
{
    const PiecewiseLinearProfile p(5, {seg("0", "1/2", "2", "0"), seg("1/2", "1", "1", "0")});
    const StructureReport r = check_structure(p);
    EXPECT_FALSE(r.find("continuity").passed);
    EXPECT_FALSE(r.passed());
}

TEST(Profiles, AsymmetricProfileFails)
{
    // Continuous, f(0)=0, f(1)=1, but not its own reflection.
    const PiecewiseLinearProfile p(5, {seg("0", "1/2", "3/2", "0"), seg("1/2", "1", "1/2", "1/2")});
    const StructureReport r = check_structure(p);
    EXPECT_TRUE(r.find("continuity").passed);
    EXPECT_FALSE(r.find("symmetry").passed);
}

TEST(Profiles, GapFailsTiling)
{
    const PiecewiseLinearProfile p(5, {seg("0", "1/4", "2", "0"), seg("1/2", "1", "1", "0")});
    EXPECT_FALSE(check_structure(p).find("tiling").passed);
    EXPECT_THROW(eval_rational(p, ratio(1, 3)), std::invalid_argument);
}

TEST(Profiles, SteepSlopeFails)
{
    const PiecewiseLinearProfile p(3, builtin_profile(5).segments());
    EXPECT_FALSE(check_structure(p).find("slope<d-1").passed);
}

TEST(Profiles, ConstructionValidates)
{
    EXPECT_THROW(PiecewiseLinearProfile(5, {}), std::invalid_argument);
    EXPECT_THROW(PiecewiseLinearProfile(5, {seg("1/2", "1/4", "1", "0")}), std::invalid_argument);
    EXPECT_THROW(PiecewiseLinearProfile(5, {seg("1/2", "1", "1", "0"), seg("0", "1/2", "1", "0")}),
                 std::invalid_argument);
}

TEST(Profiles, SerializationRoundTrip)
{
    for (int d = 5; d <= 8; ++d) {
        std::stringstream ss;
        write_profile(ss, builtin_profile(d));
        const PiecewiseLinearProfile back = read_profile(ss);
        EXPECT_EQ(back.degree(), d);
        EXPECT_EQ(back.segments(), builtin_profile(d).segments());
    }
    std::istringstream in("# comment\ndegree 5\n0 0.5 1 0\n1/2 1 1 0\n");
    const PiecewiseLinearProfile p = read_profile(in);
    EXPECT_EQ(p.segments().size(), 2U);
    std::istringstream bad("degree 5\n0 1 x 0\n");
    EXPECT_THROW(read_profile(bad), std::invalid_argument);
}

TEST(ProfilesProperty, GraphIsReflectionInvariant)
{
    // (a, f(a)) on the graph implies (1 - f(a), 1 - a) on the graph.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> k(0, 1000);
    for (int d = 5; d <= 8; ++d) {
        const PiecewiseLinearProfile p = builtin_profile(d);
        for (int i = 0; i < 500; ++i) {
            const BigRational a = ratio(k(rng), 1000);
            const BigRational b = eval_rational(p, a);
            EXPECT_EQ(eval_rational(p, 1 - b), 1 - a) << "d=" << d << " a=" << to_string(a);
        }
    }
}

TEST(ProfilesProperty, IntervalContainsRational)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<long> k(0, 1L << 20);
    for (int d = 5; d <= 8; ++d) {
        const PiecewiseLinearProfile p = builtin_profile(d);
        for (int i = 0; i < 500; ++i) {
            double a = std::ldexp(static_cast<double>(k(rng)), -20);
            double b = std::ldexp(static_cast<double>(k(rng)), -20);
            const Interval x(std::min(a, b), std::max(a, b));
            const Interval fx = eval_interval(p, x);
            const BigRational t = ratio(k(rng), 1L << 20);
            const BigRational q = to_rational(x.lo()) + (to_rational(x.hi()) - to_rational(x.lo())) * t;
            const BigRational fq = eval_rational(p, q);
            EXPECT_LE(to_rational(fx.lo()), fq);
            EXPECT_GE(to_rational(fx.hi()), fq);
        }
    }
}
