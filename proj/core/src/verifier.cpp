#include <expcert/verifier.hpp>

#include <algorithm>
#include <cmath>
#include <charconv>
#include <array>
#include <ostream>
#include <stdexcept>

#include "fork.hpp"

namespace expcert
{

namespace
{

std::string format_double(double x)
{
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), r.ptr};
}

ClaimLeg leg(const char *lo, const char *hi, const char *slope, const char *offset)
{
    return {parse_rational(lo), parse_rational(hi), parse_rational(slope), parse_rational(offset)};
}

class SegmentChecker
{
public:
    SegmentChecker(int d, const BoundaryLeg &leg, const Interval &bound, int max_depth, unsigned jobs)
        : d_(d), leg_(leg), bound_(bound), max_depth_(max_depth), budget_(jobs)
    {
    }

    Transcript run() { return check(leg_.preimage, 0); }

private:
    Transcript check(const Interval &i, int depth)
    {
        const Interval q = q_eval(d_, leg_, i);
        Transcript t;
        if (clt(q, bound_)) {
            t.records.push_back({i, q.hi()});
            return t;
        }
        if (clt(bound_, q)) {
            t.verified = false;
            t.failing = i;
            t.failing_sup = q.hi();
            t.failure_reason = "bound certainly exceeded";
            return t;
        }
        const auto [left, right] = bisect(i);
        if (depth >= max_depth_ || left == i || right == i) {
            t.verified = false;
            t.failing = i;
            t.failing_sup = q.hi();
            t.failure_reason = depth >= max_depth_ ? "depth budget exhausted (insufficient precision or false claim)"
                                                   : "subinterval cannot be split further";
            return t;
        }
        Transcript lt;
        Transcript rt;
        const bool forked = detail::try_fork_join(
            budget_, lt, rt, [&, l = left] { return check(l, depth + 1); },
            [&, r = right] { return check(r, depth + 1); });
        if (!forked) {
            lt = check(left, depth + 1);
            if (!lt.verified) {
                return lt;
            }
            rt = check(right, depth + 1);
        }
        if (!lt.verified) {
            return lt;
        }
        lt.append(rt);
        return lt;
    }

    int d_;
    const BoundaryLeg &leg_;
    Interval bound_;
    int max_depth_;
    detail::ForkBudget budget_;
};

class ConvexityChecker
{
public:
    ConvexityChecker(int d, const BigRational &margin, int max_depth, unsigned jobs)
        : d_(d), margin_(enclose(margin)), y_max_(enclose(BigRational(1) - ratio(2, d) - margin)),
          max_depth_(max_depth), budget_(jobs)
    {
    }

    ConvexityReport run() { return check(Interval(-1.0, 1.0), Interval(0.0, y_max_.hi()), 0); }

private:
    bool outside(const Interval &x, const Interval &y) const
    {
        if (clt(y_max_, Interval(y.lo()))) {
            return true;
        }
        // The x half-width is decreasing in y, so its maximum over the box is at y.lo.
        const Interval dd(static_cast<double>(d_));
        const Interval half_width =
            (dd * (Interval(1.0) - Interval(y.lo())) - Interval(2.0)) / (dd - Interval(2.0)) - margin_;
        const double min_abs_x = x.contains(0.0) ? 0.0 : std::min(std::fabs(x.lo()), std::fabs(x.hi()));
        return clt(half_width, Interval(min_abs_x));
    }

    ConvexityReport check(const Interval &x, const Interval &y, int depth)
    {
        ConvexityReport r;
        r.deepest = depth;
        if (outside(x, y)) {
            r.skipped = 1;
            return r;
        }
        if (convexity_expression(d_, x, y).lo() >= 0) {
            r.boxes = 1;
            return r;
        }
        const bool split_x = x.width() >= y.width();
        const auto [a, b] = bisect(split_x ? x : y);
        if (depth >= max_depth_ || a == (split_x ? x : y) || b == (split_x ? x : y)) {
            r.certified = false;
            r.failing_box = std::make_pair(x, y);
            r.failure_reason = depth >= max_depth_ ? "depth budget exhausted" : "box cannot be split further";
            return r;
        }
        const Interval x1 = split_x ? a : x;
        const Interval x2 = split_x ? b : x;
        const Interval y1 = split_x ? y : a;
        const Interval y2 = split_x ? y : b;
        ConvexityReport lr;
        ConvexityReport rr;
        const bool forked = detail::try_fork_join(
            budget_, lr, rr, [&] { return check(x1, y1, depth + 1); }, [&] { return check(x2, y2, depth + 1); });
        if (!forked) {
            lr = check(x1, y1, depth + 1);
            if (!lr.certified) {
                return lr;
            }
            rr = check(x2, y2, depth + 1);
        }
        if (!lr.certified) {
            return lr;
        }
        lr.boxes += rr.boxes;
        lr.skipped += rr.skipped;
        lr.deepest = std::max(lr.deepest, rr.deepest);
        if (!rr.certified) {
            lr.certified = false;
            lr.failing_box = rr.failing_box;
            lr.failure_reason = rr.failure_reason;
        }
        return lr;
    }

    int d_;
    Interval margin_;
    Interval y_max_;
    int max_depth_;
    detail::ForkBudget budget_;
};

Interval log_q_terms(int d, const Interval &alpha, const Interval &beta, const Interval &gap)
{
    if (d < 3) {
        throw std::domain_error("Q needs d >= 3");
    }
    if (alpha.lo() < 0 || alpha.hi() > 1 || beta.lo() < 0 || beta.hi() > 1) {
        throw std::domain_error("Q arguments must lie in [0,1]: alpha=" + to_string(alpha) +
                                " beta=" + to_string(beta));
    }
    if (beta.hi() < alpha.lo() || gap.hi() < 0) {
        throw std::domain_error("Q needs beta >= alpha somewhere in the box: alpha=" + to_string(alpha) +
                                " beta=" + to_string(beta));
    }
    const Interval one(1.0);
    const Interval g(std::max(gap.lo(), 0.0), gap.hi());
    const Interval dm1(static_cast<double>(d - 1));
    const Interval dd(static_cast<double>(d));
    return dm1 * xlogx(one - alpha) + dm1 * xlogx(beta) - xlogx(alpha) - xlogx(one - beta) - dd * xlogx(g);
}

} // namespace

Interval log_q_eval(int d, const Interval &alpha, const Interval &beta)
{
    return log_q_terms(d, alpha, beta, beta - alpha);
}

Interval log_q_eval(int d, const BoundaryLeg &leg, const Interval &alpha)
{
    return log_q_terms(d, alpha, leg(alpha), leg.gap(alpha));
}

Interval q_eval(int d, const BoundaryLeg &leg, const Interval &alpha) { return exp(log_q_eval(d, leg, alpha)); }

Interval q_eval(int d, const Interval &alpha, const Interval &beta) { return exp(log_q_eval(d, alpha, beta)); }

BoundaryLeg ClaimLeg::boundary() const
{
    return {Interval(enclose(lo).lo(), enclose(hi).hi()), enclose(slope), enclose(offset)};
}

VerificationTask claim_task(int d)
{
    VerificationTask task;
    task.degree = d;
    task.bound = parse_interval("[0.9999]");
    switch (d) {
    case 5:
        task.legs = {leg("1e-5", "0.15", "2", "0"), leg("0.15", "0.30", "4/3", "1/10"), leg("0.30", "0.50", "1", "1/5")};
        break;
    case 6:
        task.legs = {leg("1e-5", "0.10", "5/2", "0"), leg("0.10", "0.25", "5/3", "1/12"),
                     leg("0.25", "0.50", "1", "1/4")};
        break;
    case 7:
        task.legs = {leg("1e-5", "0.10", "3", "0"), leg("0.10", "0.15", "2", "1/10"), leg("0.15", "0.30", "7/5", "19/100"),
                     leg("0.30", "0.39", "1", "31/100")};
        break;
    case 8:
        task.legs = {leg("1e-5", "0.10", "3", "0"), leg("0.10", "0.20", "2", "1/10"), leg("0.20", "0.34", "5/4", "1/4")};
        break;
    default:
        throw std::invalid_argument("no bound claim for degree " + std::to_string(d) + " (supported: 5, 6, 7, 8)");
    }
    return task;
}

double Transcript::max_sup() const noexcept
{
    double m = 0;
    for (const auto &r : records) {
        m = std::max(m, r.certified_sup);
    }
    return m;
}

void Transcript::append(const Transcript &other)
{
    if (!verified) {
        return;
    }
    records.insert(records.end(), other.records.begin(), other.records.end());
    if (!other.verified) {
        verified = false;
        failing = other.failing;
        failing_sup = other.failing_sup;
        failure_reason = other.failure_reason;
    }
}

Transcript check_segment(int d, const BoundaryLeg &leg, const Interval &bound, int max_depth, unsigned jobs)
{
    SegmentChecker checker(d, leg, bound, max_depth, jobs);
    return checker.run();
}

Transcript verify(const VerificationTask &task, unsigned jobs)
{
    if (!(task.bound.lo() < 1)) {
        throw std::invalid_argument("claim bound must have infimum below 1");
    }
    Transcript all;
    for (const auto &l : task.legs) {
        all.append(check_segment(task.degree, l.boundary(), task.bound, task.max_depth, jobs));
        if (!all.verified) {
            break;
        }
    }
    return all;
}

Transcript verify_claim(int d, unsigned jobs, std::optional<Interval> bound)
{
    VerificationTask task = claim_task(d);
    if (bound) {
        task.bound = *bound;
    }
    return verify(task, jobs);
}

void write_transcript(std::ostream &os, const Transcript &t)
{
    for (const auto &r : t.records) {
        os << to_string(r.subinterval) << ": " << format_double(r.certified_sup) << '\n';
    }
}

Interval convexity_expression(int d, const Interval &x, const Interval &y)
{
    const Interval one(1.0);
    const Interval dm2(static_cast<double>(d - 2));
    const Interval dy = Interval(static_cast<double>(d)) * y;
    return (one - sqr(y)) * (dm2 - dy) - sqr(x) * (dm2 + dy);
}

BigRational convexity_expression(int d, const BigRational &x, const BigRational &y)
{
    const BigRational y_top = BigRational(1) - ratio(2, d);
    const BigRational half_width = (BigRational(d) * (1 - y) - 2) / (d - 2);
    if (y < 0 || y > y_top || abs(x) > half_width) {
        throw std::domain_error("(" + to_string(x) + ", " + to_string(y) + ") lies outside the convexity triangle");
    }
    return BigRational((d - 2) * (1 - x * x - y * y) - d * y * (1 + x * x - y * y));
}

ConvexityReport convexity_check(int d, const BigRational &margin, int max_depth, unsigned jobs)
{
    if (d < 3) {
        throw std::invalid_argument("convexity check needs d >= 3");
    }
    if (margin <= 0) {
        throw std::invalid_argument("convexity margin must be positive");
    }
    if (BigRational(1) - ratio(2, d) - margin <= 0) {
        throw std::invalid_argument("convexity margin leaves an empty triangle");
    }
    ConvexityChecker checker(d, margin, max_depth, jobs);
    return checker.run();
}

LevelPoint level_point(int d, const Interval &alpha)
{
    if (!(alpha.lo() > 0) || !(alpha.hi() < 1)) {
        throw std::domain_error("level curve needs 0 < alpha < 1");
    }
    double lo = alpha.hi();
    double hi = 1 - 1e-9;
    const Interval zero(0.0);
    if (!clt(log_q_eval(d, alpha, Interval(lo)), zero) || !clt(zero, log_q_eval(d, alpha, Interval(hi)))) {
        throw std::runtime_error("no certified sign change of Q - 1 in (alpha, 1 - 1e-9) for alpha=" +
                                 to_string(alpha));
    }
    while (hi - lo > 1e-12) {
        const double m = mid(Interval(lo, hi));
        if (m == lo || m == hi) {
            break;
        }
        const Interval lq = log_q_eval(d, alpha, Interval(m));
        if (clt(lq, zero)) {
            lo = m;
        } else if (clt(zero, lq)) {
            hi = m;
        } else {
            break;
        }
    }
    return {alpha, Interval(lo, hi)};
}

std::vector<LevelPoint> level_curve(int d, int samples)
{
    if (samples < 2) {
        throw std::invalid_argument("level curve needs at least 2 samples");
    }
    std::vector<LevelPoint> points;
    points.reserve(static_cast<std::size_t>(samples));
    for (int i = 1; i <= samples; ++i) {
        points.push_back(level_point(d, enclose(ratio(i, samples + 1))));
    }
    return points;
}

void write_level_curve_csv(std::ostream &os, const std::vector<LevelPoint> &points)
{
    os << "alpha_lo,alpha_hi,beta_lo,beta_hi\n";
    for (const auto &p : points) {
        os << format_double(p.alpha.lo()) << ',' << format_double(p.alpha.hi()) << ',' << format_double(p.beta.lo())
           << ',' << format_double(p.beta.hi()) << '\n';
    }
}

} // namespace expcert
