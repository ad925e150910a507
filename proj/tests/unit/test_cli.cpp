#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "vbesov/json_out.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "vbesov_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const auto log = workdir() / "stdout.txt";
    const std::string cmd = std::string(VBESOV_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

std::string config(const std::string& name, const std::string& body) {
    const auto path = workdir() / name;
    std::ofstream(path) << "points = 256\noctaves = 6\noutput = " << (workdir() / "out").string() << '\n' << body;
    return "--config " + path.string();
}

}  // namespace

TEST(Cli, Usage) {
    EXPECT_EQ(run("--help").status, 0);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("--config /no/such/file norm").status, 2);
}

TEST(Cli, NormOfZeroFunction) {
    const auto r = run(config("zero.cfg", "function = 0\n") + " norm");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_EQ(r.out, "0\n");
    const auto j = vbesov::read_json_file(workdir() / "out" / "norm.json");
    EXPECT_EQ(j["result"]["value"].get<double>(), 0.0);
}

TEST(Cli, NormFormsAgreeInOrder) {
    const std::string cfg = config("gauss.cfg", "function = exp(-x^2)\nalpha = 0.3\n");
    const auto direct = run(cfg + " norm --form direct");
    const auto peetre = run(cfg + " norm --form peetre");
    ASSERT_EQ(direct.status, 0) << direct.out;
    ASSERT_EQ(peetre.status, 0) << peetre.out;
    EXPECT_GE(std::stod(peetre.out), std::stod(direct.out));
}

TEST(Cli, InadmissibleExponentIsExitTwo) {
    const auto r = run(config("p.cfg", "p = 0.5\n") + " norm");
    EXPECT_EQ(r.status, 2) << r.out;
    EXPECT_NE(r.out.find("admissibility"), std::string::npos) << r.out;
}

TEST(Cli, ParseErrorIsExitTwo) {
    const auto r = run(config("bad.cfg", "alpha = 1 +\n") + " norm");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("line 4"), std::string::npos) << r.out;
}

TEST(Cli, HypothesisIsExitThree) {
    const auto r = run(config("lm.cfg", "alpha = 2.5\nlocal_mean_S = 1\n") + " norm --form local_mean_prime");
    EXPECT_EQ(r.status, 3) << r.out;
}

TEST(Cli, DecomposeSynthesize) {
    const std::string cfg = config("dec.cfg", "function = exp(-x^2)\n");
    ASSERT_EQ(run(cfg + " decompose").status, 0);
    EXPECT_TRUE(fs::exists(workdir() / "out" / "decomposition.csv"));
    const auto r = run(cfg + " synthesize");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = vbesov::read_json_file(workdir() / "out" / "synthesize.json");
    EXPECT_LT(j["relative_l2_residual"].get<double>(), 1e-5);
}

TEST(Cli, GenBankAndVerify) {
    const std::string cfg = config("bank.cfg", "refine = false\n");
    ASSERT_EQ(run(cfg + " gen-bank").status, 0);
    EXPECT_TRUE(fs::exists(workdir() / "out" / "bank" / "index.json"));
    const auto v = run(cfg + " verify hardy");
    EXPECT_EQ(v.status, 0) << v.out;
    EXPECT_TRUE(fs::exists(workdir() / "out" / "hardy.json"));
    EXPECT_TRUE(fs::exists(workdir() / "out" / "rollup.csv"));
    EXPECT_EQ(run(cfg + " report").status, 0);
    EXPECT_EQ(run(cfg + " verify no_such_check").status, 2);
}
