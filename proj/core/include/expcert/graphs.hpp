#ifndef EXPCERT_GRAPHS_HPP
#define EXPCERT_GRAPHS_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <expcert/profiles.hpp>

namespace expcert
{

enum class Side { left, right };

// d-regular bipartite multigraph on v + v nodes; parallel edges allowed.
class BipartiteMultigraph
{
public:
    using Edge = std::pair<int, int>; // (left node, right node)

    // Throws std::invalid_argument unless every node on both sides has
    // multidegree exactly d.
    BipartiteMultigraph(int v, int d, std::vector<Edge> edges);

    [[nodiscard]] int v() const noexcept { return v_; }
    [[nodiscard]] int d() const noexcept { return d_; }
    [[nodiscard]] const std::vector<Edge> &edges() const noexcept { return edges_; }

    // Multiset of opposite-side endpoints of `node`.
    [[nodiscard]] std::vector<int> neighbours(Side side, int node) const;

    friend bool operator==(const BipartiteMultigraph &, const BipartiteMultigraph &) = default;

private:
    int v_;
    int d_;
    std::vector<Edge> edges_;
};

// Collapses a perfect matching of dv + dv points into the multigraph: point i
// on the left belongs to left node i / d, point matching[i] on the right to
// right node matching[i] / d. `matching` must be a permutation of 0..dv-1.
BipartiteMultigraph from_matching(int v, int d, std::span<const int> matching);

// Uniform random perfect matching (seeded shuffle), collapsed.
BipartiteMultigraph sample(int v, int d, std::uint64_t seed);
BipartiteMultigraph sample(int v, int d, std::mt19937_64 &rng);

// Number of distinct opposite-side nodes adjacent to some node of `subset`.
int neighbour_set_size(const BipartiteMultigraph &g, Side side, std::span<const int> subset);

struct ExpansionReport {
    // min over |U| = u of |N(U)|, for u = 0..v.
    std::vector<int> min_left;
    std::vector<int> min_right;
};

constexpr int max_exhaustive_v = 22;

// Exact per-size minima over all 2^v subsets of each side.
// Throws std::invalid_argument when v > max_exhaustive_v.
ExpansionReport expansion_report(const BipartiteMultigraph &g);

// ceil(v f(u / v)) for u = 0..v, in exact arithmetic.
std::vector<int> required_neighbours(const PiecewiseLinearProfile &profile, int v);

// True when some u has a minimum below the requirement on either side.
bool violates(const ExpansionReport &report, std::span<const int> required);

struct RateEstimate {
    std::int64_t trials = 0;
    std::int64_t hits = 0;
    double rate = 0;
    double ci_lo = 0; // Wilson score interval, 95%
    double ci_hi = 0;
};

RateEstimate wilson(std::int64_t hits, std::int64_t trials, double z = 1.959963984540054);

// Fraction of sampled graphs whose expansion falls short of the profile.
// Trial t uses the seed derived from (seed, t), so the result does not depend
// on `jobs`.
RateEstimate violation_rate(int v, int d, const PiecewiseLinearProfile &profile, std::int64_t trials,
                            std::uint64_t seed, unsigned jobs = 1);

struct OracleEstimate {
    std::int64_t trials = 0;
    std::int64_t hits = 0;
    double estimate = 0;
    double exact = 0;
    double sigma = 0; // standard error under the exact probability
    double z = 0;
};

// Monte Carlo estimate of Pr[N(U) subset of N] for U = left nodes 0..u-1 and
// N = right nodes 0..n-1, against the exact binomial ratio C(dn,du)/C(dv,du)
// (zero when u > n).
OracleEstimate containment_probability_oracle(int v, int d, int u, int n, std::int64_t trials, std::uint64_t seed,
                                              unsigned jobs = 1);

// Per-trial seed used by violation_rate and containment_probability_oracle.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// "v d" header, then one "left right" line per edge.
void write_edge_list(std::ostream &os, const BipartiteMultigraph &g);
BipartiteMultigraph read_edge_list(std::istream &is);

// "u,min_left,min_right,required".
void write_expansion_csv(std::ostream &os, const ExpansionReport &report, std::span<const int> required);

} // namespace expcert

#endif
