#ifndef EXPCERT_EXACT_HPP
#define EXPCERT_EXACT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <expcert/profiles.hpp>
#include <expcert/rational.hpp>

namespace expcert
{

BigInteger binomial(std::uint64_t n, std::uint64_t k);

// Expected number of pairs (U, N), |U| = u, |N| = n, with every neighbour of U
// inside N, for the random d-regular construction on v + v nodes:
//
//   P(u, n) = C(v, u) C(v, n) C(dn, du) / C(dv, du).
//
// Requires 0 <= u <= n <= v and d >= 1.
BigRational probability_bound(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d);

// C(dn, du) / C(dv, du): probability that a fixed u-set has all its
// neighbours inside a fixed n-set. Zero when u > n.
BigRational containment_probability(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d);

// P(u, n + 1) / P(u, n) from the closed form
// (v - n)/(n + 1) * prod_{i=1..d} (dn + i)/(dn - du + i). Requires 1 <= u <= n < v.
BigRational monotone_ratio(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d);

// The lattice of "bad" pairs for a profile at size v:
//   Omega       = { (u, n) : 1 <= u <= n <= min(floor(v f(u/v)), v - 1) }
//   Omega_delta = { (u, n) in Omega : min(u, v - n) <= delta v }
// The empty set (u = 0) and its mirror (n = v) are excluded: they can never
// violate the expansion requirement.
class RegionSpec
{
public:
    RegionSpec(std::int64_t v, PiecewiseLinearProfile profile, BigRational delta = ratio(1, 100000));

    [[nodiscard]] std::int64_t v() const noexcept { return v_; }
    [[nodiscard]] int d() const noexcept { return profile_.degree(); }
    [[nodiscard]] const PiecewiseLinearProfile &profile() const noexcept { return profile_; }
    [[nodiscard]] const BigRational &delta() const noexcept { return delta_; }

    // Largest n with (u, n) in Omega, or u - 1 when the column is empty.
    [[nodiscard]] std::int64_t top(std::int64_t u) const;
    [[nodiscard]] bool in_omega(std::int64_t u, std::int64_t n) const;
    [[nodiscard]] bool in_omega_delta(std::int64_t u, std::int64_t n) const;
    [[nodiscard]] std::vector<std::pair<std::int64_t, std::int64_t>> omega() const;

private:
    std::int64_t v_;
    PiecewiseLinearProfile profile_;
    BigRational delta_;
};

// The two-term bound 2 delta v f(delta v) * max_extreme + v^2 * max_interior,
// with f(delta v) = v f(delta) in node units.
BigRational union_bound(const RegionSpec &spec, const BigRational &max_extreme, const BigRational &max_interior);

struct ExhaustiveUnionBound {
    BigRational value;          // 2 * sum of P(u, n) over Omega
    std::size_t pairs = 0;      // |Omega|
    std::size_t delta_pairs = 0; // |Omega_delta|
};

// Exact 2 * sum_{(u,n) in Omega} P(u, n). Throws std::length_error when
// |Omega| exceeds max_pairs. Columns are summed in parallel across `jobs`
// threads and reduced in a fixed order.
ExhaustiveUnionBound union_bound_exhaustive(const RegionSpec &spec, std::size_t max_pairs = 2'000'000,
                                            unsigned jobs = 1);

// The (k, d) pairs of the extreme-point induction.
struct LemmaCase {
    int k;
    int d;
};

// Throws std::invalid_argument unless (k, d) is one of (2,5), (3,6), (3,7), (3,8).
LemmaCase lemma_case_for(int d);

struct LemmaRow {
    std::int64_t u = 0;
    BigRational bound_value; // 2 k delta^2 v^2 P(u, k u)
    bool bound_ok = false;   // bound_value < 1/2
    std::optional<BigRational> ratio; // P(u, k u) / P(u + 1, k u + k), for u < floor(delta v)
    bool ratio_ok = true;             // ratio > 1
    bool ratio_dominates_estimate = true; // ratio >= the closed-form lower estimate
};

struct LemmaReport {
    LemmaCase lemma{};
    std::int64_t v = 0;
    BigRational estimate; // delta^-(d-k-1) (1 - (kd + 3d) delta) (k-1)^((k-1)d) / k^(kd)
    std::vector<LemmaRow> rows;
    // P(u, n + 1) / P(u, n) > 1 for all u <= floor(delta v), u <= n < floor(v f(u/v)).
    bool monotone_ok = true;
    std::size_t monotone_checked = 0;

    [[nodiscard]] bool passed() const;
};

// Exact check of the extreme-point lemma for every 1 <= u <= floor(delta v).
// Throws std::invalid_argument when floor(delta v) < 1.
LemmaReport extreme_lemma_check(LemmaCase c, std::int64_t v, const BigRational &delta = ratio(1, 100000));

// (1/v) ln(v^2 P(u, n)) - ln Q(u/v, n/v), evaluated with 256-bit MPFR.
// Requires 0 < u <= n < v.
double stirling_gap(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d);

// "u,n,value" rows.
void write_lemma_table(std::ostream &os, const LemmaReport &report);

} // namespace expcert

#endif
