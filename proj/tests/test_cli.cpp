#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    Run r;
    r.code = ktfunc::cli::run(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name + ".json"; }

bool has_line(const std::string& text, const std::string& line) {
    return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

using ktfunc::cli::kOk;
using ktfunc::cli::kSizeGuard;
using ktfunc::cli::kUsageError;
using ktfunc::cli::kVerificationFailed;

TEST(Cli, ParseExponent) {
    EXPECT_TRUE(std::isinf(ktfunc::cli::parse_exponent("inf")));
    EXPECT_TRUE(std::isinf(ktfunc::cli::parse_exponent("Infinity")));
    EXPECT_DOUBLE_EQ(ktfunc::cli::parse_exponent("2.5"), 2.5);
    EXPECT_THROW(ktfunc::cli::parse_exponent("2x"), std::invalid_argument);
    EXPECT_THROW(ktfunc::cli::parse_exponent(""), std::invalid_argument);
}

TEST(Cli, MixedNormOnDiagonal) {
    const auto r = cli({"norm", sample("diag2"), "--which", "mixed"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "value: 2")) << r.out;
    EXPECT_TRUE(has_line(r.out, "value_transpose: 2")) << r.out;
}

TEST(Cli, LorentzOnPair) {
    const auto r = cli({"norm", sample("pair"), "--which", "lorentz", "--p", "2", "--q", "1"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "value: 2.82842712475")) << r.out;
}

TEST(Cli, SplitDiagonal) {
    const auto r = cli({"split", sample("diag2"), "--t", "1", "--trace"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "a_mask: (1,1) (2,1) (2,2)")) << r.out;
    EXPECT_TRUE(has_line(r.out, "b_mask: (1,2)")) << r.out;
    EXPECT_TRUE(has_line(r.out, "certified: yes")) << r.out;
    EXPECT_TRUE(has_line(r.out, "stage1.chosen_row: 2")) << r.out;
}

TEST(Cli, KtSingleAtomFromStdin) {
    const auto r = cli({"kt", "--t", "0.5"}, R"({"mu":[1],"nu":[1],"matrix":[[3]]})");
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "instance: stdin")) << r.out;
    EXPECT_TRUE(has_line(r.out, "lower: 1.5")) << r.out;
    EXPECT_TRUE(has_line(r.out, "upper: 1.5")) << r.out;
}

TEST(Cli, KtLpOnOnes) {
    const auto r = cli({"kt", sample("ones2"), "--t", "1", "--oracle", "lp"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "value: 2")) << r.out;
}

TEST(Cli, KtLpWrongCouple) {
    const auto r = cli({"kt", sample("ones2"), "--t", "1", "--p", "2", "--oracle", "lp"});
    EXPECT_EQ(r.code, kUsageError);
    EXPECT_NE(r.err.find("(inf, 1)"), std::string::npos) << r.err;
}

TEST(Cli, MaskSizeGuard) {
    const auto r = cli({"kt", "--random", "5x5", "--t", "1", "--oracle", "mask"});
    EXPECT_EQ(r.code, kSizeGuard);
    EXPECT_NE(r.err.find("--guard-override"), std::string::npos);
}

TEST(Cli, SeedEchoed) {
    const auto r = cli({"--seed", "17", "rectnorm", "--random", "3x3", "--t", "1"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.rfind("command: rectnorm\nseed: 17\n", 0), 0u) << r.out;
    EXPECT_TRUE(has_line(r.out, "instance: random 3x3"));
    const auto again = cli({"rectnorm", "--random", "3x3", "--t", "1", "--seed", "17"});
    EXPECT_EQ(again.out, r.out);
}

TEST(Cli, RandomSplitCouple42) {
    const auto r = cli({"--seed", "3", "split", "--random", "5x5", "--p", "4", "--q", "2", "--t", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "certified: yes"));
}

TEST(Cli, ParseErrors) {
    const auto bad = cli({"rectnorm", "--t", "1"}, "{\"mu\": [1],\n\"nu\": [1}");
    EXPECT_EQ(bad.code, kUsageError);
    EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
    EXPECT_EQ(cli({"rectnorm", "/nonexistent.json", "--t", "1"}).code, kUsageError);
    EXPECT_EQ(cli({"rectnorm", sample("pair")}).code, kUsageError);  // --t required
    EXPECT_EQ(cli({}).code, kUsageError);
    EXPECT_EQ(cli({"frobnicate"}).code, kUsageError);
    EXPECT_EQ(cli({"split", sample("pair"), "--t", "-1"}).code, kUsageError);
}

TEST(Cli, InterpModes) {
    auto r = cli({"interp", sample("ones2"), "--mode", "bracket", "--theta", "0.5"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "bracket.value: 2")) << r.out;
    r = cli({"interp", sample("diag2"), "--mode", "weak-type", "--theta", "0.5"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_TRUE(has_line(r.out, "consistent: yes"));
    r = cli({"interp", sample("diag2"), "--mode", "theta-q", "--iq", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("width: "), std::string::npos);
}

TEST(Cli, Verify) {
    EXPECT_EQ(cli({"verify", "--trials", "0"}).code, kOk);
    const auto ok = cli({"verify", "--trials", "10"});
    EXPECT_EQ(ok.code, kOk);
    EXPECT_TRUE(has_line(ok.out, "verdict: pass"));
    const auto bad = cli({"verify", "--trials", "10", "--corrupt-split-bound"});
    EXPECT_EQ(bad.code, kVerificationFailed);
    EXPECT_TRUE(has_line(bad.out, "verdict: fail"));
    EXPECT_EQ(cli({"verify", "--couples", "2"}).code, kUsageError);
}

TEST(Cli, Repro) {
    const auto r = cli({"repro", "prop34"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.rfind("command: repro\ncase: prop34\nseed: 0\n", 0), 0u) << r.out;
    EXPECT_EQ(cli({"repro", "remark23", "--n", "8"}).code, kOk);
    EXPECT_EQ(cli({"--seed", "9", "repro", "varopoulos", "--trials", "20"}).code, kOk);
    EXPECT_EQ(cli({"repro", "nosuchcase"}).code, kUsageError);
}

TEST(Cli, Help) {
    const auto r = cli({"--help"});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("split"), std::string::npos);
}
