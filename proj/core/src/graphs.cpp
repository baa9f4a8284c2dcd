#include <expcert/graphs.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <expcert/exact.hpp>

namespace expcert
{

namespace
{

constexpr std::int64_t oracle_chunk = 1 << 14;

std::vector<int> identity_points(int v, int d)
{
    std::vector<int> points(static_cast<std::size_t>(v) * static_cast<std::size_t>(d));
    std::iota(points.begin(), points.end(), 0);
    return points;
}

// min |N(U)| per |U| for one side, given each node's neighbour bitmask.
std::vector<int> per_size_minimum(const std::vector<std::uint32_t> &masks, int v)
{
    const std::size_t subsets = std::size_t{1} << v;
    std::vector<std::uint32_t> cover(subsets, 0);
    std::vector<int> best(static_cast<std::size_t>(v) + 1, v);
    best[0] = 0;
    for (std::size_t s = 1; s < subsets; ++s) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
        cover[s] = cover[s & (s - 1)] | masks[low];
        const auto size = static_cast<std::size_t>(std::popcount(s));
        best[size] = std::min(best[size], std::popcount(cover[s]));
    }
    return best;
}

// Runs body(begin, end) over [0, count) split into fixed-size blocks, spread
// across `jobs` threads; per-block results are summed in block order.
template <typename Body>
std::int64_t parallel_count(std::int64_t count, std::int64_t block, unsigned jobs, Body body)
{
    const std::int64_t blocks = (count + block - 1) / block;
    std::vector<std::int64_t> partial(static_cast<std::size_t>(blocks), 0);
    const unsigned workers = std::max(1U, jobs);
    auto work = [&](unsigned w) {
        for (std::int64_t b = w; b < blocks; b += workers) {
            partial[static_cast<std::size_t>(b)] = body(b, b * block, std::min(count, (b + 1) * block));
        }
    };
    std::vector<std::future<void>> pending;
    for (unsigned w = 1; w < workers; ++w) {
        pending.push_back(std::async(std::launch::async, work, w));
    }
    work(0);
    for (auto &f : pending) {
        f.get();
    }
    return std::accumulate(partial.begin(), partial.end(), std::int64_t{0});
}

} // namespace

BipartiteMultigraph::BipartiteMultigraph(int v, int d, std::vector<Edge> edges) : v_(v), d_(d), edges_(std::move(edges))
{
    if (v < 1 || d < 1) {
        throw std::invalid_argument("multigraph needs v >= 1 and d >= 1");
    }
    std::vector<int> left(static_cast<std::size_t>(v), 0);
    std::vector<int> right(static_cast<std::size_t>(v), 0);
    for (const auto &[l, r] : edges_) {
        if (l < 0 || l >= v || r < 0 || r >= v) {
            throw std::invalid_argument("edge (" + std::to_string(l) + "," + std::to_string(r) + ") out of range");
        }
        ++left[static_cast<std::size_t>(l)];
        ++right[static_cast<std::size_t>(r)];
    }
    const auto regular = [d](const std::vector<int> &deg) {
        return std::all_of(deg.begin(), deg.end(), [d](int x) { return x == d; });
    };
    if (!regular(left) || !regular(right)) {
        throw std::invalid_argument("multigraph is not " + std::to_string(d) + "-regular");
    }
}

std::vector<int> BipartiteMultigraph::neighbours(Side side, int node) const
{
    std::vector<int> out;
    for (const auto &[l, r] : edges_) {
        if (side == Side::left && l == node) {
            out.push_back(r);
        } else if (side == Side::right && r == node) {
            out.push_back(l);
        }
    }
    return out;
}

BipartiteMultigraph from_matching(int v, int d, std::span<const int> matching)
{
    const std::size_t points = static_cast<std::size_t>(v) * static_cast<std::size_t>(d);
    if (matching.size() != points) {
        throw std::invalid_argument("matching must have d*v entries");
    }
    std::vector<BipartiteMultigraph::Edge> edges;
    edges.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const int target = matching[i];
        if (target < 0 || static_cast<std::size_t>(target) >= points) {
            throw std::invalid_argument("matching entry out of range");
        }
        edges.emplace_back(static_cast<int>(i) / d, target / d);
    }
    // Regularity on the right holds iff the matching is a permutation.
    return {v, d, std::move(edges)};
}

BipartiteMultigraph sample(int v, int d, std::mt19937_64 &rng)
{
    if (v < 1 || d < 1) {
        throw std::invalid_argument("sample needs v >= 1 and d >= 1");
    }
    std::vector<int> matching = identity_points(v, d);
    std::shuffle(matching.begin(), matching.end(), rng);
    return from_matching(v, d, matching);
}

BipartiteMultigraph sample(int v, int d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample(v, d, rng);
}

int neighbour_set_size(const BipartiteMultigraph &g, Side side, std::span<const int> subset)
{
    std::vector<char> in_subset(static_cast<std::size_t>(g.v()), 0);
    for (const int x : subset) {
        if (x < 0 || x >= g.v()) {
            throw std::invalid_argument("subset node out of range");
        }
        in_subset[static_cast<std::size_t>(x)] = 1;
    }
    std::vector<char> hit(static_cast<std::size_t>(g.v()), 0);
    for (const auto &[l, r] : g.edges()) {
        const int from = side == Side::left ? l : r;
        const int to = side == Side::left ? r : l;
        if (in_subset[static_cast<std::size_t>(from)] != 0) {
            hit[static_cast<std::size_t>(to)] = 1;
        }
    }
    return static_cast<int>(std::count(hit.begin(), hit.end(), 1));
}

ExpansionReport expansion_report(const BipartiteMultigraph &g)
{
    const int v = g.v();
    if (v > max_exhaustive_v) {
        throw std::invalid_argument("exhaustive expansion needs v <= " + std::to_string(max_exhaustive_v) +
                                    ", got " + std::to_string(v));
    }
    std::vector<std::uint32_t> left(static_cast<std::size_t>(v), 0);
    std::vector<std::uint32_t> right(static_cast<std::size_t>(v), 0);
    for (const auto &[l, r] : g.edges()) {
        left[static_cast<std::size_t>(l)] |= std::uint32_t{1} << r;
        right[static_cast<std::size_t>(r)] |= std::uint32_t{1} << l;
    }
    return {per_size_minimum(left, v), per_size_minimum(right, v)};
}

std::vector<int> required_neighbours(const PiecewiseLinearProfile &profile, int v)
{
    std::vector<int> req(static_cast<std::size_t>(v) + 1, 0);
    for (int u = 0; u <= v; ++u) {
        req[static_cast<std::size_t>(u)] =
            static_cast<int>(ceil(BigRational(v) * eval_rational(profile, ratio(u, v))).get_si());
    }
    return req;
}

bool violates(const ExpansionReport &report, std::span<const int> required)
{
    for (std::size_t u = 0; u < required.size(); ++u) {
        if (report.min_left[u] < required[u] || report.min_right[u] < required[u]) {
            return true;
        }
    }
    return false;
}

RateEstimate wilson(std::int64_t hits, std::int64_t trials, double z)
{
    if (trials <= 0) {
        throw std::invalid_argument("rate estimate needs at least one trial");
    }
    RateEstimate e;
    e.trials = trials;
    e.hits = hits;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    e.rate = p;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    e.ci_lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
    e.ci_hi = hits == trials ? 1.0 : std::min(1.0, centre + half);
    return e;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    // splitmix64 finaliser over the pair.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

RateEstimate violation_rate(int v, int d, const PiecewiseLinearProfile &profile, std::int64_t trials,
                            std::uint64_t seed, unsigned jobs)
{
    if (trials <= 0) {
        throw std::invalid_argument("violation rate needs trials > 0");
    }
    if (v > max_exhaustive_v) {
        throw std::invalid_argument("violation rate needs v <= " + std::to_string(max_exhaustive_v));
    }
    const std::vector<int> required = required_neighbours(profile, v);
    const std::int64_t hits = parallel_count(trials, 1, jobs, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        std::int64_t h = 0;
        for (std::int64_t t = begin; t < end; ++t) {
            const BipartiteMultigraph g = sample(v, d, derive_seed(seed, static_cast<std::uint64_t>(t)));
            h += violates(expansion_report(g), required) ? 1 : 0;
        }
        return h;
    });
    return wilson(hits, trials);
}

OracleEstimate containment_probability_oracle(int v, int d, int u, int n, std::int64_t trials, std::uint64_t seed,
                                              unsigned jobs)
{
    if (trials <= 0) {
        throw std::invalid_argument("oracle needs trials > 0");
    }
    if (v < 1 || d < 1 || u < 0 || u > v || n < 0 || n > v) {
        throw std::invalid_argument("oracle needs v, d >= 1 and u, n in [0, v]");
    }
    const int left_points = u * d;
    const int right_limit = n * d;
    const std::int64_t hits =
        parallel_count(trials, oracle_chunk, jobs, [&](std::int64_t block, std::int64_t begin, std::int64_t end) {
            std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(block)));
            std::vector<int> matching = identity_points(v, d);
            std::int64_t h = 0;
            for (std::int64_t t = begin; t < end; ++t) {
                std::iota(matching.begin(), matching.end(), 0);
                std::shuffle(matching.begin(), matching.end(), rng);
                // Left node i < u owns points i*d .. i*d + d - 1; right node j < n owns points < n*d.
                const bool inside = std::all_of(matching.begin(), matching.begin() + left_points,
                                                [right_limit](int p) { return p < right_limit; });
                h += inside ? 1 : 0;
            }
            return h;
        });

    OracleEstimate e;
    e.trials = trials;
    e.hits = hits;
    e.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    e.exact = to_double(containment_probability(u, n, v, d));
    e.sigma = std::sqrt(e.exact * (1 - e.exact) / static_cast<double>(trials));
    if (e.sigma > 0) {
        e.z = (e.estimate - e.exact) / e.sigma;
    } else {
        e.z = e.estimate == e.exact ? 0 : std::copysign(INFINITY, e.estimate - e.exact);
    }
    return e;
}

void write_edge_list(std::ostream &os, const BipartiteMultigraph &g)
{
    os << g.v() << ' ' << g.d() << '\n';
    for (const auto &[l, r] : g.edges()) {
        os << l << ' ' << r << '\n';
    }
}

BipartiteMultigraph read_edge_list(std::istream &is)
{
    int v = 0;
    int d = 0;
    if (!(is >> v >> d)) {
        throw std::invalid_argument("edge list must start with 'v d'");
    }
    std::vector<BipartiteMultigraph::Edge> edges;
    int l = 0;
    int r = 0;
    while (is >> l >> r) {
        edges.emplace_back(l, r);
    }
    if (!is.eof()) {
        throw std::invalid_argument("malformed edge list line");
    }
    return {v, d, std::move(edges)};
}

void write_expansion_csv(std::ostream &os, const ExpansionReport &report, std::span<const int> required)
{
    os << "u,min_left,min_right,required\n";
    for (std::size_t u = 0; u < report.min_left.size(); ++u) {
        os << u << ',' << report.min_left[u] << ',' << report.min_right[u] << ',' << required[u] << '\n';
    }
}

} // namespace expcert
