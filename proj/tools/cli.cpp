#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include <expcert/exact.hpp>
#include <expcert/graphs.hpp>
#include <expcert/interval.hpp>
#include <expcert/profiles.hpp>
#include <expcert/rational.hpp>
#include <expcert/verifier.hpp>

namespace expcert::cli
{
namespace
{

// Bad flag values found after CLI11 has parsed the command line.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Flags {
    std::string d;
    std::string bound = "[0.9999]";
    std::string delta = "1e-5";
    std::string v;
    std::string seed = "0";
    std::string trials = "100";
    std::string jobs = "1";
    std::string log;
    std::string out;
    std::string margin = "1e-6";
    std::string depth;
    std::string samples = "50";
    std::string profile;
};

long long integer_flag(const std::string &name, const std::string &text, long long lo, long long hi)
{
    long long value = 0;
    try {
        value = parse_integer(text);
    } catch (const std::invalid_argument &e) {
        throw UsageError("--" + name + ": " + e.what());
    }
    if (value < lo || value > hi) {
        throw UsageError("--" + name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "], got " + text);
    }
    return value;
}

BigRational rational_flag(const std::string &name, const std::string &text)
{
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument &e) {
        throw UsageError("--" + name + ": " + e.what());
    }
}

int degree_flag(const Flags &f)
{
    if (f.d.empty()) {
        throw UsageError("--d is required");
    }
    const auto d = integer_flag("d", f.d, std::numeric_limits<int>::min(), std::numeric_limits<int>::max());
    if (d < 5 || d > 8) {
        throw UsageError("unsupported degree " + f.d + ": expected one of 5, 6, 7, 8");
    }
    return static_cast<int>(d);
}

unsigned jobs_flag(const Flags &f) { return static_cast<unsigned>(integer_flag("jobs", f.jobs, 1, 1024)); }

std::ofstream open_output(const std::string &path)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    return os;
}

int cmd_verify(const Flags &f, std::ostream &out, std::ostream &err)
{
    const int d = degree_flag(f);
    VerificationTask task = claim_task(d);
    try {
        task.bound = parse_interval(f.bound);
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string("--bound: ") + e.what());
    }
    if (!(task.bound.lo() < 1)) {
        throw UsageError("--bound must lie below 1");
    }
    if (!f.depth.empty()) {
        task.max_depth = static_cast<int>(integer_flag("depth", f.depth, 1, 200));
    }
    const std::string log_path = f.log.empty() ? "Q" + std::to_string(d) + ".txt" : f.log;

    const auto start = std::chrono::steady_clock::now();
    const Transcript t = verify(task, jobs_flag(f));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::ofstream log = open_output(log_path);
    write_transcript(log, t);

    out << "subintervals: " << t.count() << '\n';
    out << "max certified sup: " << t.max_sup() << '\n';
    out << "time: " << elapsed.count() << " s\n";
    if (!t.verified) {
        err << "Claim not verified for d==" << d << ": " << t.failure_reason;
        if (t.failing) {
            err << " on " << *t.failing << " (sup " << t.failing_sup << ")";
        }
        err << '\n';
        return failed;
    }
    out << "Claim is true for d==" << d << ".\n";
    return ok;
}

int cmd_convexity(const Flags &f, std::ostream &out, std::ostream &err)
{
    const int d = degree_flag(f);
    const BigRational margin = rational_flag("margin", f.margin);
    if (margin < 0) {
        throw UsageError("--margin must be non-negative");
    }
    const int depth = f.depth.empty() ? 64 : static_cast<int>(integer_flag("depth", f.depth, 1, 200));

    const ConvexityReport r = convexity_check(d, margin, depth, jobs_flag(f));
    out << "boxes: " << r.boxes << '\n';
    out << "skipped: " << r.skipped << '\n';
    out << "deepest: " << r.deepest << '\n';
    if (!r.certified) {
        err << "convexity not certified for d==" << d << ": " << r.failure_reason;
        if (r.failing_box) {
            err << " on x=" << r.failing_box->first << " y=" << r.failing_box->second;
        }
        err << '\n';
        return failed;
    }
    out << "Convexity certified for d==" << d << ".\n";
    return ok;
}

int cmd_fd_props(const Flags &f, std::ostream &out, std::ostream &)
{
    std::optional<PiecewiseLinearProfile> p;
    if (!f.profile.empty()) {
        std::ifstream in(f.profile);
        if (!in) {
            throw UsageError("cannot read profile " + f.profile);
        }
        try {
            p = read_profile(in);
        } catch (const std::invalid_argument &e) {
            throw UsageError(f.profile + ": " + e.what());
        }
    } else {
        p = builtin_profile(degree_flag(f));
    }
    if (!f.out.empty()) {
        std::ofstream os = open_output(f.out);
        write_profile(os, *p);
    }

    const StructureReport r = check_structure(*p);
    for (const StructureCheck &c : r.checks) {
        out << (c.passed ? "pass " : "FAIL ") << c.name;
        if (!c.detail.empty()) {
            out << ": " << c.detail;
        }
        out << '\n';
    }
    out << "max slope: " << to_string(r.max_slope) << '\n';
    return r.passed() ? ok : failed;
}

int cmd_exact(const Flags &f, std::ostream &out, std::ostream &)
{
    const int d = degree_flag(f);
    if (f.v.empty()) {
        throw UsageError("--v is required");
    }
    const auto v = integer_flag("v", f.v, 2, 100'000'000);
    const BigRational delta = rational_flag("delta", f.delta);
    if (delta <= 0 || delta >= ratio(1, 2)) {
        throw UsageError("--delta must lie in (0, 1/2)");
    }

    if (floor(delta * static_cast<long>(v)) >= 1) {
        const LemmaReport r = extreme_lemma_check(lemma_case_for(d), v, delta);
        out << "lemma (k,d)=(" << r.lemma.k << ',' << r.lemma.d << ") v=" << v << '\n';
        out << "estimate: " << to_double(r.estimate) << '\n';
        out << "u bound ratio\n";
        for (const LemmaRow &row : r.rows) {
            out << row.u << ' ' << to_double(row.bound_value) << ' ';
            if (row.ratio) {
                out << to_double(*row.ratio);
            } else {
                out << '-';
            }
            if (!row.bound_ok || !row.ratio_ok || !row.ratio_dominates_estimate) {
                out << " FAIL";
            }
            out << '\n';
        }
        out << "monotone pairs checked: " << r.monotone_checked << (r.monotone_ok ? "" : " FAIL") << '\n';
        if (!f.out.empty()) {
            std::ofstream os = open_output(f.out);
            write_lemma_table(os, r);
        }
        out << (r.passed() ? "Lemma holds" : "Lemma fails") << " for d==" << d << ".\n";
        return r.passed() ? ok : failed;
    }

    // No extreme slice at this size: report the exhaustive union bound instead.
    if (v > 2000) {
        throw UsageError("--v too large for the exhaustive union bound (delta v < 1)");
    }
    const ExhaustiveUnionBound b = union_bound_exhaustive(RegionSpec(v, builtin_profile(d), delta), 2'000'000,
                                                          jobs_flag(f));
    out << "pairs: " << b.pairs << '\n';
    out << "union bound: " << to_double(b.value) << '\n';
    return b.value < 1 ? ok : failed;
}

int cmd_sample(const Flags &f, std::ostream &out, std::ostream &)
{
    if (f.v.empty() || f.d.empty()) {
        throw UsageError("--v and --d are required");
    }
    const auto v = static_cast<int>(integer_flag("v", f.v, 1, 1'000'000));
    const auto d = static_cast<int>(integer_flag("d", f.d, 1, 1000));
    const auto seed = static_cast<std::uint64_t>(integer_flag("seed", f.seed, 0, std::numeric_limits<long>::max()));
    const BipartiteMultigraph g = sample(v, d, seed);
    if (f.out.empty()) {
        write_edge_list(out, g);
    } else {
        std::ofstream os = open_output(f.out);
        write_edge_list(os, g);
    }
    return ok;
}

int cmd_expansion(const Flags &f, std::ostream &out, std::ostream &)
{
    const int d = degree_flag(f);
    if (f.v.empty()) {
        throw UsageError("--v is required");
    }
    const auto v = static_cast<int>(integer_flag("v", f.v, 1, max_exhaustive_v));
    const auto trials = integer_flag("trials", f.trials, 1, 100'000'000);
    const auto seed = static_cast<std::uint64_t>(integer_flag("seed", f.seed, 0, std::numeric_limits<long>::max()));
    const PiecewiseLinearProfile p = builtin_profile(d);

    const RateEstimate r = violation_rate(v, d, p, trials, seed, jobs_flag(f));
    out << "trials: " << r.trials << '\n';
    out << "violations: " << r.hits << '\n';
    out << "rate: " << r.rate << " [" << r.ci_lo << ", " << r.ci_hi << "]\n";
    if (!f.out.empty()) {
        // Per-size minima of the first sampled graph.
        const BipartiteMultigraph g = sample(v, d, derive_seed(seed, 0));
        std::ofstream os = open_output(f.out);
        write_expansion_csv(os, expansion_report(g), required_neighbours(p, v));
    }
    return ok;
}

int cmd_level_curve(const Flags &f, std::ostream &out, std::ostream &)
{
    const int d = degree_flag(f);
    const auto samples = static_cast<int>(integer_flag("samples", f.samples, 2, 100'000));
    const std::vector<LevelPoint> points = level_curve(d, samples);
    if (f.out.empty()) {
        write_level_curve_csv(out, points);
    } else {
        std::ofstream os = open_output(f.out);
        write_level_curve_csv(os, points);
    }
    return ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Certified checks for explicit vertex-expansion profiles of random regular bipartite graphs",
                 "expcert"};
    app.require_subcommand(1);
    Flags f;

    auto *verify_cmd = app.add_subcommand("verify", "Certify Q(a, f(a)) < bound along the profile boundary");
    verify_cmd->add_option("--d", f.d, "Degree (5..8)")->required();
    verify_cmd->add_option("--bound", f.bound, "Interval literal")->capture_default_str();
    verify_cmd->add_option("--log", f.log, "Transcript path (default Q<d>.txt)");
    verify_cmd->add_option("--depth", f.depth, "Bisection depth budget (default 60)");
    verify_cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();

    auto *convexity_cmd = app.add_subcommand("convexity", "Certify the convexity inequality on the triangle");
    convexity_cmd->add_option("--d", f.d, "Degree (5..8)")->required();
    convexity_cmd->add_option("--margin", f.margin, "Triangle shrink margin")->capture_default_str();
    convexity_cmd->add_option("--depth", f.depth, "Box splitting depth budget (default 64)");
    convexity_cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();

    auto *fd_cmd = app.add_subcommand("fd-props", "Exact structural checks of a profile");
    fd_cmd->add_option("--d", f.d, "Builtin profile degree (5..8)");
    fd_cmd->add_option("--profile", f.profile, "Profile file instead of a builtin");
    fd_cmd->add_option("--out", f.out, "Write the profile in text form");

    auto *exact_cmd = app.add_subcommand("exact", "Exact extreme-point lemma, or union bound for small v");
    exact_cmd->add_option("--v", f.v, "Nodes per side")->required();
    exact_cmd->add_option("--d", f.d, "Degree (5..8)")->required();
    exact_cmd->add_option("--delta", f.delta, "Extreme slice width")->capture_default_str();
    exact_cmd->add_option("--out", f.out, "CSV of u,n,value");
    exact_cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();

    auto *sample_cmd = app.add_subcommand("sample", "Sample a random d-regular bipartite multigraph");
    sample_cmd->add_option("--v", f.v, "Nodes per side")->required();
    sample_cmd->add_option("--d", f.d, "Degree")->required();
    sample_cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
    sample_cmd->add_option("--out", f.out, "Edge list path (default stdout)");

    auto *expansion_cmd = app.add_subcommand("expansion", "Violation rate of sampled graphs against the profile");
    expansion_cmd->add_option("--v", f.v, "Nodes per side (<= 22)")->required();
    expansion_cmd->add_option("--d", f.d, "Degree (5..8)")->required();
    expansion_cmd->add_option("--trials", f.trials, "Sampled graphs")->capture_default_str();
    expansion_cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
    expansion_cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
    expansion_cmd->add_option("--out", f.out, "CSV of the first graph's per-size minima");

    auto *level_cmd = app.add_subcommand("level-curve", "Certified brackets of the level curve Q = 1");
    level_cmd->add_option("--d", f.d, "Degree (5..8)")->required();
    level_cmd->add_option("--samples", f.samples, "Number of alpha samples")->capture_default_str();
    level_cmd->add_option("--out", f.out, "CSV path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (verify_cmd->parsed()) {
            return cmd_verify(f, out, err);
        }
        if (convexity_cmd->parsed()) {
            return cmd_convexity(f, out, err);
        }
        if (fd_cmd->parsed()) {
            return cmd_fd_props(f, out, err);
        }
        if (exact_cmd->parsed()) {
            return cmd_exact(f, out, err);
        }
        if (sample_cmd->parsed()) {
            return cmd_sample(f, out, err);
        }
        if (expansion_cmd->parsed()) {
            return cmd_expansion(f, out, err);
        }
        return cmd_level_curve(f, out, err);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        err << "run with --help for usage\n";
        return usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return failed;
    }
}

} // namespace expcert::cli
