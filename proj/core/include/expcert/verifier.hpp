#ifndef EXPCERT_VERIFIER_HPP
#define EXPCERT_VERIFIER_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <expcert/interval.hpp>
#include <expcert/rational.hpp>

namespace expcert
{

// Enclosure of ln Q(alpha, beta) over the box alpha x beta restricted to
// beta >= alpha, where
//
//   Q(a, b) = (1-a)^((d-1)(1-a)) b^((d-1)b) / (a^a (1-b)^(1-b) (b-a)^(d(b-a)))
//
// with 0^0 = 1. Evaluated as a sum of t ln t terms; the (b - a) base is
// clamped to [0, hi] when rounding pushes its lower end below zero.
// Throws std::domain_error when alpha or beta leave [0, 1] or when every
// beta lies below every alpha.
Interval log_q_eval(int d, const Interval &alpha, const Interval &beta);

// exp(log_q_eval(...)).
Interval q_eval(int d, const Interval &alpha, const Interval &beta);

// beta = slope * alpha + offset over the preimage.
struct BoundaryLeg {
    Interval preimage;
    Interval slope;
    Interval offset;

    [[nodiscard]] Interval operator()(const Interval &alpha) const { return slope * alpha + offset; }
    // beta - alpha as one affine expression, without the dependency loss of
    // subtracting two enclosures.
    [[nodiscard]] Interval gap(const Interval &alpha) const { return (slope - Interval(1.0)) * alpha + offset; }
};

// ln Q and Q at (alpha, leg(alpha)), using leg.gap for the beta - alpha term.
Interval log_q_eval(int d, const BoundaryLeg &leg, const Interval &alpha);
Interval q_eval(int d, const BoundaryLeg &leg, const Interval &alpha);

// A boundary leg with exact rational coefficients.
struct ClaimLeg {
    BigRational lo;
    BigRational hi;
    BigRational slope;
    BigRational offset;

    [[nodiscard]] BoundaryLeg boundary() const;
};

struct VerificationTask {
    int degree = 0;
    std::vector<ClaimLeg> legs;
    Interval bound;
    int max_depth = 60;
};

// The four bound claims Q(alpha, f_d(alpha)) <= 0.9999 on
// [1e-5, 0.5], [1e-5, 0.5], [1e-5, 0.39] and [1e-5, 0.34] for d = 5..8,
// split into the affine legs of the profile. For d = 8 the third
// leg (5/4 a + 1/4) is used up to 0.34, past its breakpoint at 1/3.
VerificationTask claim_task(int d);

struct TranscriptRecord {
    Interval subinterval;
    double certified_sup = 0;
};

struct Transcript {
    std::vector<TranscriptRecord> records;
    bool verified = true;
    // First (leftmost) subinterval on which the bound could not be certified.
    std::optional<Interval> failing;
    double failing_sup = 0;
    std::string failure_reason;

    [[nodiscard]] std::size_t count() const noexcept { return records.size(); }
    [[nodiscard]] double max_sup() const noexcept;
    void append(const Transcript &other);
};

// Recursive bisection of the leg's preimage until Q on every piece is
// certainly below `bound`. Records come out in left-to-right order for any
// `jobs`; verification stops at the leftmost failure.
Transcript check_segment(int d, const BoundaryLeg &leg, const Interval &bound, int max_depth = 60,
                         unsigned jobs = 1);

Transcript verify(const VerificationTask &task, unsigned jobs = 1);

// verify(claim_task(d)), optionally with another bound.
Transcript verify_claim(int d, unsigned jobs = 1, std::optional<Interval> bound = std::nullopt);

// One "[lo,hi]: sup" line per record.
void write_transcript(std::ostream &os, const Transcript &t);

// (1 - y^2)((d - 2) - d y) - x^2((d - 2) + d y), which equals
// (d - 2)(1 - x^2 - y^2) - d y (1 + x^2 - y^2); its sign is the sign of the
// second derivative of ln Q along x = beta + alpha - 1 at fixed y = beta - alpha.
Interval convexity_expression(int d, const Interval &x, const Interval &y);

// Exact value at a point of the closed triangle
// { 0 <= y <= 1 - 2/d, |x| <= (d(1 - y) - 2)/(d - 2) }; throws
// std::domain_error outside it.
BigRational convexity_expression(int d, const BigRational &x, const BigRational &y);

struct ConvexityReport {
    bool certified = true;
    std::size_t boxes = 0;   // boxes certified non-negative
    std::size_t skipped = 0; // boxes certainly outside the shrunk triangle
    int deepest = 0;
    std::optional<std::pair<Interval, Interval>> failing_box;
    std::string failure_reason;
};

// Certifies convexity_expression >= 0 on the triangle shrunk by `margin`:
// 0 <= y <= 1 - 2/d - margin, |x| <= (d(1 - y) - 2)/(d - 2) - margin.
ConvexityReport convexity_check(int d, const BigRational &margin, int max_depth = 64, unsigned jobs = 1);

struct LevelPoint {
    Interval alpha;
    Interval beta; // Q(alpha, beta_lo) < 1 < Q(alpha, beta_hi), certified.
};

// Bracket of the beta > alpha solving Q(alpha, beta) = 1, searched in
// (alpha, 1 - 1e-9). Throws std::runtime_error if the end points do not
// certify a sign change.
LevelPoint level_point(int d, const Interval &alpha);

// level_point at alpha = i / (samples + 1), i = 1..samples.
std::vector<LevelPoint> level_curve(int d, int samples);

// Header "alpha_lo,alpha_hi,beta_lo,beta_hi".
void write_level_curve_csv(std::ostream &os, const std::vector<LevelPoint> &points);

} // namespace expcert

#endif
