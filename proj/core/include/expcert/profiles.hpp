#ifndef EXPCERT_PROFILES_HPP
#define EXPCERT_PROFILES_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <expcert/interval.hpp>
#include <expcert/rational.hpp>

namespace expcert
{

// beta = slope * alpha + offset on [domain_lo, domain_hi], in normalized units
// (alpha = u / v, beta = n / v).
struct AffineSegment {
    BigRational domain_lo;
    BigRational domain_hi;
    BigRational slope;
    BigRational offset;

    [[nodiscard]] BigRational at(const BigRational &alpha) const { return slope * alpha + offset; }
    friend bool operator==(const AffineSegment &, const AffineSegment &) = default;
};

// Piecewise-linear expansion profile f_d on [0, 1].
//
// Construction only checks that each segment has a non-empty domain and that
// segments are listed left to right; continuity, tiling, symmetry and the
// slope bound are reported by check_structure() so that malformed profiles can
// still be inspected.
class PiecewiseLinearProfile
{
public:
    PiecewiseLinearProfile(int degree, std::vector<AffineSegment> segments);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] const std::vector<AffineSegment> &segments() const noexcept { return segments_; }

private:
    int degree_;
    std::vector<AffineSegment> segments_;
};

// The four profiles f_5 ... f_8 for which the existence result holds.
// Throws std::invalid_argument for any other degree.
PiecewiseLinearProfile builtin_profile(int d);

// Exact f(alpha). A breakpoint resolves to the segment on its left.
BigRational eval_rational(const PiecewiseLinearProfile &p, const BigRational &alpha);

// Enclosure of { f(x) : x in alpha }, the hull over every spanned segment.
Interval eval_interval(const PiecewiseLinearProfile &p, const Interval &alpha);

struct StructureCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct StructureReport {
    std::vector<StructureCheck> checks;
    BigRational max_slope;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const StructureCheck &find(std::string_view name) const;
};

// Exact rational checks: "tiling", "continuity", "f(0)=0", "f(1)=1",
// "symmetry" (graph invariant under (a, b) -> (1 - b, 1 - a)) and
// "slope<d-1".
StructureReport check_structure(const PiecewiseLinearProfile &p);

// Plain-text format: a "degree <d>" line, then one
// "<domain_lo> <domain_hi> <slope> <offset>" line per segment with exact
// rationals written as p/q. Lines starting with '#' are comments.
void write_profile(std::ostream &os, const PiecewiseLinearProfile &p);
PiecewiseLinearProfile read_profile(std::istream &is);

} // namespace expcert

#endif
