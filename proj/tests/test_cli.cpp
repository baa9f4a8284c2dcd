#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <expcert/profiles.hpp>

#include "cli.hpp"

using namespace expcert;
namespace fs = std::filesystem;

namespace
{

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("expcert_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, VerifyWritesTranscript)
{
    const Outcome r = run({"verify", "--d", "6", "--log", path("Q6.txt")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Claim is true for d==6."), std::string::npos);
    const std::string log = slurp(path("Q6.txt"));
    EXPECT_FALSE(log.empty());

    // Byte-stable across runs and worker counts.
    EXPECT_EQ(run({"verify", "--d", "6", "--log", path("again.txt"), "--jobs", "3"}).code, 0);
    EXPECT_EQ(slurp(path("again.txt")), log);
}

TEST_F(Cli, VerifyFailsWithTightBound)
{
    const Outcome r = run({"verify", "--d", "6", "--bound", "[0.0001]", "--log", path("Q6.txt")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("on ["), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run({"verify", "--d", "4"}).code, 2);
    EXPECT_NE(run({"verify", "--d", "4"}).err.find("unsupported degree"), std::string::npos);
    EXPECT_EQ(run({"verify"}).code, 2);
    EXPECT_EQ(run({"verify", "--d", "six"}).code, 2);
    EXPECT_EQ(run({"verify", "--d", "6", "--bound", "[1,0]"}).code, 2);
    EXPECT_EQ(run({"verify", "--d", "6", "--bound", "[2]"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"exact", "--v", "100000", "--d", "5", "--delta", "0.7"}).code, 2);
    EXPECT_EQ(run({"expansion", "--v", "40", "--d", "5"}).code, 2);
    EXPECT_EQ(run({"level-curve", "--d", "8", "--samples", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, Convexity)
{
    const Outcome r = run({"convexity", "--d", "5", "--margin", "1e-6"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run({"convexity", "--d", "5", "--margin", "-1"}).code, 2);
}

TEST_F(Cli, FdProps)
{
    const Outcome r = run({"fd-props", "--d", "8", "--out", path("f8.txt")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("pass symmetry"), std::string::npos);
    EXPECT_EQ(run({"fd-props", "--profile", path("f8.txt")}).code, 0);

    std::ofstream(path("bad.txt")) << "degree 5\n0 1/2 2 0\n1/2 1 1 0\n";
    const Outcome bad = run({"fd-props", "--profile", path("bad.txt")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("FAIL continuity"), std::string::npos);
    EXPECT_EQ(run({"fd-props", "--profile", path("missing.txt")}).code, 2);
}

TEST_F(Cli, Exact)
{
    const Outcome r = run({"exact", "--v", "100000", "--d", "5", "--out", path("lemma.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(path("lemma.csv")).find("u,n,value"), std::string::npos);
    const Outcome small = run({"exact", "--v", "10", "--d", "8"});
    EXPECT_EQ(small.code, 0);
    EXPECT_NE(small.out.find("union bound"), std::string::npos);
}

TEST_F(Cli, SampleIsReproducible)
{
    EXPECT_EQ(run({"sample", "--v", "3", "--d", "5", "--seed", "1", "--out", path("a.txt")}).code, 0);
    EXPECT_EQ(run({"sample", "--v", "3", "--d", "5", "--seed", "1", "--out", path("b.txt")}).code, 0);
    const std::string a = slurp(path("a.txt"));
    EXPECT_EQ(a, slurp(path("b.txt")));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 16);
}

TEST_F(Cli, Expansion)
{
    const Outcome r = run({"expansion", "--v", "10", "--d", "5", "--trials", "50", "--out", path("e.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("rate:"), std::string::npos);
    EXPECT_NE(slurp(path("e.csv")).find("u,min_left,min_right,required"), std::string::npos);
}

TEST_F(Cli, LevelCurve)
{
    EXPECT_EQ(run({"level-curve", "--d", "8", "--samples", "50", "--out", path("lc.csv")}).code, 0);
    std::ifstream in(path("lc.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "alpha_lo,alpha_hi,beta_lo,beta_hi");
    const PiecewiseLinearProfile f8 = builtin_profile(8);
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(fields, cell, ',')) {
            v.push_back(std::stod(cell));
        }
        ASSERT_EQ(v.size(), 4U);
        EXPECT_GT(v[2], eval_interval(f8, Interval(v[0], v[1])).hi());
        ++rows;
    }
    EXPECT_EQ(rows, 50);
}
