#include <expcert/profiles.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace expcert
{

namespace
{

AffineSegment seg(const char *lo, const char *hi, const char *slope, const char *offset)
{
    return {parse_rational(lo), parse_rational(hi), parse_rational(slope), parse_rational(offset)};
}

// Joins neighbouring segments that lie on the same line.
std::vector<AffineSegment> merge_collinear(const std::vector<AffineSegment> &segments)
{
    std::vector<AffineSegment> out;
    for (const auto &s : segments) {
        if (!out.empty() && out.back().domain_hi == s.domain_lo && out.back().slope == s.slope &&
            out.back().offset == s.offset) {
            out.back().domain_hi = s.domain_hi;
        } else {
            out.push_back(s);
        }
    }
    return out;
}

// Mirror image of a segment under (a, b) -> (1 - b, 1 - a). Requires slope > 0.
AffineSegment reflect(const AffineSegment &s)
{
    // b = k a + m  becomes  b' = a' / k + (k - 1 + m) / k.
    return {BigRational(1 - s.at(s.domain_hi)), BigRational(1 - s.at(s.domain_lo)), BigRational(1 / s.slope),
            BigRational((s.slope - 1 + s.offset) / s.slope)};
}

std::string describe(const AffineSegment &s)
{
    return "[" + to_string(s.domain_lo) + "," + to_string(s.domain_hi) + "]: " + to_string(s.slope) + "*a + " +
           to_string(s.offset);
}

} // namespace

PiecewiseLinearProfile::PiecewiseLinearProfile(int degree, std::vector<AffineSegment> segments)
    : degree_(degree), segments_(std::move(segments))
{
    if (segments_.empty()) {
        throw std::invalid_argument("profile needs at least one segment");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!(segments_[i].domain_lo < segments_[i].domain_hi)) {
            throw std::invalid_argument("segment domain is empty: " + describe(segments_[i]));
        }
        if (i > 0 && !(segments_[i - 1].domain_lo < segments_[i].domain_lo)) {
            throw std::invalid_argument("segments must be ordered left to right");
        }
    }
}

PiecewiseLinearProfile builtin_profile(int d)
{
    switch (d) {
    case 5:
        return {5,
                {seg("0", "3/20", "2", "0"), seg("3/20", "3/10", "4/3", "1/10"), seg("3/10", "1/2", "1", "1/5"),
                 seg("1/2", "7/10", "3/4", "13/40"), seg("7/10", "1", "1/2", "1/2")}};
    case 6:
        return {6,
                {seg("0", "1/10", "5/2", "0"), seg("1/10", "1/4", "5/3", "1/12"), seg("1/4", "1/2", "1", "1/4"),
                 seg("1/2", "3/4", "3/5", "9/20"), seg("3/4", "1", "2/5", "3/5")}};
    case 7:
        return {7,
                {seg("0", "1/10", "3", "0"), seg("1/10", "3/20", "2", "1/10"), seg("3/20", "3/10", "21/15", "19/100"),
                 seg("3/10", "39/100", "1", "31/100"), seg("39/100", "3/5", "15/21", "59/140"),
                 seg("3/5", "7/10", "1/2", "11/20"), seg("7/10", "1", "1/3", "2/3")}};
    case 8:
        return {8,
                {seg("0", "1/10", "3", "0"), seg("1/10", "1/5", "2", "1/10"), seg("1/5", "1/3", "5/4", "1/4"),
                 seg("1/3", "1/2", "4/5", "2/5"), seg("1/2", "7/10", "1/2", "11/20"), seg("7/10", "1", "1/3", "2/3")}};
    default:
        throw std::invalid_argument("no builtin profile for degree " + std::to_string(d) + " (supported: 5, 6, 7, 8)");
    }
}

BigRational eval_rational(const PiecewiseLinearProfile &p, const BigRational &alpha)
{
    if (alpha < 0 || alpha > 1) {
        throw std::invalid_argument("profile argument " + to_string(alpha) + " outside [0,1]");
    }
    for (const auto &s : p.segments()) {
        if (s.domain_lo <= alpha && alpha <= s.domain_hi) {
            return s.at(alpha);
        }
    }
    throw std::invalid_argument("profile is undefined at " + to_string(alpha));
}

Interval eval_interval(const PiecewiseLinearProfile &p, const Interval &alpha)
{
    if (alpha.lo() < 0 || alpha.hi() > 1) {
        throw std::invalid_argument("profile argument " + to_string(alpha) + " outside [0,1]");
    }
    const BigRational a_lo = to_rational(alpha.lo());
    const BigRational a_hi = to_rational(alpha.hi());
    bool any = false;
    Interval result;
    for (const auto &s : p.segments()) {
        if (s.domain_hi < a_lo || a_hi < s.domain_lo) {
            continue;
        }
        // Clip alpha to a double enclosure of the segment domain; evaluating
        // on a superset keeps containment.
        const double lo = std::max(alpha.lo(), enclose(s.domain_lo).lo());
        const double hi = std::min(alpha.hi(), enclose(s.domain_hi).hi());
        const Interval piece = enclose(s.slope) * Interval(lo, hi) + enclose(s.offset);
        result = any ? hull(result, piece) : piece;
        any = true;
    }
    if (!any) {
        throw std::invalid_argument("profile is undefined on " + to_string(alpha));
    }
    return result;
}

bool StructureReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

const StructureCheck &StructureReport::find(std::string_view name) const
{
    for (const auto &c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no structure check named " + std::string(name));
}

StructureReport check_structure(const PiecewiseLinearProfile &p)
{
    const auto &segs = p.segments();
    StructureReport report;

    {
        StructureCheck c{"tiling", true, ""};
        if (segs.front().domain_lo != 0) {
            c.passed = false;
            c.detail = "first segment starts at " + to_string(segs.front().domain_lo);
        } else if (segs.back().domain_hi != 1) {
            c.passed = false;
            c.detail = "last segment ends at " + to_string(segs.back().domain_hi);
        }
        for (std::size_t i = 1; c.passed && i < segs.size(); ++i) {
            if (segs[i - 1].domain_hi != segs[i].domain_lo) {
                c.passed = false;
                c.detail = (segs[i - 1].domain_hi < segs[i].domain_lo ? "gap between " : "overlap between ") +
                           to_string(segs[i - 1].domain_hi) + " and " + to_string(segs[i].domain_lo);
            }
        }
        report.checks.push_back(std::move(c));
    }

    {
        StructureCheck c{"continuity", true, ""};
        for (std::size_t i = 1; i < segs.size(); ++i) {
            const BigRational &x = segs[i].domain_lo;
            if (segs[i - 1].domain_hi != x) {
                continue;
            }
            const BigRational left = segs[i - 1].at(x);
            const BigRational right = segs[i].at(x);
            if (left != right) {
                c.passed = false;
                c.detail = "jump at " + to_string(x) + ": " + to_string(left) + " != " + to_string(right);
                break;
            }
        }
        report.checks.push_back(std::move(c));
    }

    {
        const BigRational f0 = segs.front().at(segs.front().domain_lo);
        const bool ok = segs.front().domain_lo == 0 && f0 == 0;
        report.checks.push_back({"f(0)=0", ok, ok ? "" : "f(" + to_string(segs.front().domain_lo) + ") = " + to_string(f0)});
        const BigRational f1 = segs.back().at(segs.back().domain_hi);
        const bool ok1 = segs.back().domain_hi == 1 && f1 == 1;
        report.checks.push_back({"f(1)=1", ok1, ok1 ? "" : "f(" + to_string(segs.back().domain_hi) + ") = " + to_string(f1)});
    }

    {
        StructureCheck c{"symmetry", true, ""};
        const auto merged = merge_collinear(segs);
        for (const auto &s : merged) {
            if (s.slope <= 0) {
                c.passed = false;
                c.detail = "non-increasing segment " + describe(s);
                break;
            }
            const AffineSegment mirror = reflect(s);
            if (std::find(merged.begin(), merged.end(), mirror) == merged.end()) {
                c.passed = false;
                c.detail = "mirror of " + describe(s) + " is " + describe(mirror) + ", not a segment";
                break;
            }
        }
        report.checks.push_back(std::move(c));
    }

    {
        report.max_slope = segs.front().slope;
        for (const auto &s : segs) {
            report.max_slope = std::max(report.max_slope, s.slope);
        }
        const BigRational limit = p.degree() - 1;
        const bool ok = report.max_slope < limit;
        report.checks.push_back(
            {"slope<d-1", ok, "max slope " + to_string(report.max_slope) + (ok ? " < " : " >= ") + to_string(limit)});
    }
    return report;
}

void write_profile(std::ostream &os, const PiecewiseLinearProfile &p)
{
    os << "degree " << p.degree() << '\n';
    for (const auto &s : p.segments()) {
        os << to_string(s.domain_lo) << ' ' << to_string(s.domain_hi) << ' ' << to_string(s.slope) << ' '
           << to_string(s.offset) << '\n';
    }
}

PiecewiseLinearProfile read_profile(std::istream &is)
{
    std::string line;
    int degree = 0;
    bool have_degree = false;
    std::vector<AffineSegment> segments;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        if (!have_degree) {
            std::string keyword;
            if (!(fields >> keyword >> degree) || keyword != "degree") {
                throw std::invalid_argument("profile must start with 'degree <d>', got: " + line);
            }
            have_degree = true;
            continue;
        }
        std::string lo, hi, slope, offset, extra;
        if (!(fields >> lo >> hi >> slope >> offset) || (fields >> extra)) {
            throw std::invalid_argument("expected '<lo> <hi> <slope> <offset>', got: " + line);
        }
        segments.push_back({parse_rational(lo), parse_rational(hi), parse_rational(slope), parse_rational(offset)});
    }
    if (!have_degree) {
        throw std::invalid_argument("empty profile");
    }
    return {degree, std::move(segments)};
}

} // namespace expcert
