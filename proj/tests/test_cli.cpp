#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "litho/cli.hpp"

namespace {

namespace cli = litho::cli;
namespace fs = std::filesystem;
using std::numbers::pi;

int parse_code(const std::vector<std::string>& args, std::optional<std::string> config = std::nullopt) {
    try {
        cli::parse_config(args, std::move(config));
    } catch (const cli::CliError& e) {
        return e.code();
    }
    return cli::kOk;
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_args(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const auto config = cli::parse_config(args);
    const int code = cli::run(config, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("litho_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

TEST(ParseConfig, DefaultsFilled) {
    const auto c = cli::parse_config({"deposition", "--n", "4", "--gamma", "0.5"});
    EXPECT_EQ(c.command, cli::Command::deposition);
    EXPECT_EQ(c.integer("n"), 4u);
    EXPECT_DOUBLE_EQ(c.value("gamma"), 0.5);
    EXPECT_DOUBLE_EQ(c.value("t"), 1.0);
    EXPECT_DOUBLE_EQ(c.value("lambda"), 1.0);
    EXPECT_EQ(c.grid.min, 0.0);
    EXPECT_DOUBLE_EQ(c.grid.max, 2 * pi);
    EXPECT_EQ(c.grid.samples, 512u);
    EXPECT_EQ(c.output.format, cli::Format::csv);
}

TEST(ParseConfig, FigureOneNeedsNoParameters) {
    const auto c = cli::parse_config({"figure1"});
    EXPECT_EQ(c.command, cli::Command::figure1);
    EXPECT_DOUBLE_EQ(c.value("gamma"), pi / 4);
    EXPECT_DOUBLE_EQ(c.value("t"), 1.0);
}

TEST(ParseConfig, NegativeNumbersAndGrid) {
    const auto c = cli::parse_config({"resonant", "--n", "2", "--k", "1", "--phi-min", "-1.5", "--phi-max", "1.5",
                                      "--samples", "33"});
    EXPECT_DOUBLE_EQ(c.grid.min, -1.5);
    EXPECT_EQ(c.grid.points().size(), 33u);
}

TEST(ParseConfig, DistinctErrorCodes) {
    EXPECT_EQ(parse_code({"frobnicate"}), cli::kUsage);
    EXPECT_EQ(parse_code({}), cli::kUsage);
    EXPECT_EQ(parse_code({"deposition", "--n", "2", "--bogus", "1"}), cli::kUsage);
    EXPECT_EQ(parse_code({"deposition", "--n", "2", "--format", "xml"}), cli::kUsage);
    EXPECT_EQ(parse_code({"deposition"}), cli::kMissingParameter);
    EXPECT_EQ(parse_code({"matrix-element", "--n", "3", "--m", "0"}), cli::kMissingParameter);
    EXPECT_EQ(parse_code({"pattern"}), cli::kMissingParameter);
    EXPECT_EQ(parse_code({"deposition", "--n", "four"}), cli::kMalformedNumber);
    EXPECT_EQ(parse_code({"deposition", "--n", "4.5"}), cli::kMalformedNumber);
    EXPECT_EQ(parse_code({"deposition", "--n", "4", "--gamma", "0.5x"}), cli::kMalformedNumber);
    EXPECT_EQ(parse_code({"deposition", "--n", "4", "--samples", "1"}), cli::kPrecondition);
    EXPECT_EQ(parse_code({"deposition", "--n", "4", "--phi-min", "3", "--phi-max", "1"}), cli::kPrecondition);
    EXPECT_EQ(parse_code({"verify", "--format", "svg"}), cli::kUsage);
}

TEST(ParseConfig, ConfigTextMergedAndOverridden) {
    const std::string text = R"({"command": "deposition", "n": 3, "gamma": 0.2, "samples": 16})";
    const auto c = cli::parse_config({"--gamma", "0.4"}, text);
    EXPECT_EQ(c.command, cli::Command::deposition);
    EXPECT_EQ(c.integer("n"), 3u);
    EXPECT_DOUBLE_EQ(c.value("gamma"), 0.4);
    EXPECT_EQ(c.grid.samples, 16u);

    EXPECT_EQ(parse_code({}, R"({"command": "deposition", "n": 3, "colour": 1})"), cli::kUsage);
    EXPECT_EQ(parse_code({}, R"({"command": "deposition", "n": "x"})"), cli::kMalformedNumber);
    EXPECT_EQ(parse_code({}, "{not json"), cli::kUsage);
    EXPECT_EQ(parse_code({"deposition", "--config", "/nonexistent/litho.json"}), cli::kIoFailure);
}

TEST(Run, ZeroPhotonsIsPreconditionError) {
    const auto r = run_args({"deposition", "--n", "0"});
    EXPECT_EQ(r.code, cli::kPrecondition);
    EXPECT_NE(r.err.find("N must be >= 1"), std::string::npos);
    EXPECT_EQ(run_args({"deposition", "--n", "2", "--m", "1"}).code, cli::kPrecondition);
}

TEST(Run, DepositionCsvIsDeterministicAndRoundTrips) {
    const std::vector<std::string> args{"deposition", "--n", "3", "--gamma", "0.3", "--samples", "40"};
    const auto first = run_args(args);
    const auto second = run_args(args);
    ASSERT_EQ(first.code, 0);
    EXPECT_EQ(first.out, second.out);
    std::istringstream lines(first.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "phi,value");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto comma = line.find(',');
        const double phi = std::stod(line.substr(0, comma));
        const double value = std::stod(line.substr(comma + 1));
        EXPECT_EQ(value, litho::deposition_nmes(3, 0.3, phi));
        ++rows;
    }
    EXPECT_EQ(rows, 40);
}

TEST(Run, JsonAndSvgOutputs) {
    const auto j = run_args({"resonant", "--n", "2", "--k", "1", "--samples", "8", "--format", "json"});
    ASSERT_EQ(j.code, 0);
    const auto parsed = nlohmann::json::parse(j.out);
    EXPECT_EQ(parsed.at("phi").size(), 8u);
    EXPECT_EQ(parsed.at("value").size(), 8u);

    const auto s = run_args({"resonant", "--n", "2", "--k", "1", "--format", "svg"});
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.out.rfind("<svg", 0), 0u);
    EXPECT_NE(s.out.find("<polyline"), std::string::npos);
}

TEST(Run, MatrixElementColumns) {
    const auto r = run_args({"matrix-element", "--n", "2", "--m", "0", "--m-prime", "1", "--gamma", "1.0471975511965976",
                             "--theta-prime", "0.78539816339744828", "--samples", "4"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "phi,re,im");
}

TEST(Run, ResolutionTable) {
    const auto r = run_args({"resolution", "--n", "2", "--k", "1", "--lambda", "1", "--samples", "2048"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("classical,1,0,1,0.25,"), std::string::npos);
    EXPECT_NE(r.out.find("mes,2,0,1,0.125,"), std::string::npos);
    EXPECT_NE(r.out.find("resonant,2,1,1,0.0625,"), std::string::npos);
}

TEST(Run, FitThenPattern) {
    const auto dir = scratch_dir("fit");
    const auto recipe_path = (dir / "recipe.json").string();
    const auto fit = run_args({"fit", "--n-max", "6", "--gamma", "0.5", "--output", recipe_path});
    ASSERT_EQ(fit.code, 0) << fit.err;
    const auto recipe = litho::io::recipe_from_json(nlohmann::json::parse(slurp(recipe_path)));
    EXPECT_EQ(recipe.branches.size(), 3u);
    EXPECT_NEAR(recipe.entanglement_angle, 0.5, 0.0);

    const auto pattern = run_args({"pattern", "--recipe", recipe_path, "--samples", "64"});
    const auto direct = run_args({"pattern", "--n-max", "6", "--gamma", "0.5", "--samples", "64"});
    ASSERT_EQ(pattern.code, 0);
    EXPECT_EQ(pattern.out, direct.out);

    const auto target_path = (dir / "target.json").string();
    std::ofstream(target_path) << R"({"f0": 0.5, "harmonics": [{"n": 3, "cos": 0.0, "sin": 0.25}]})";
    const auto custom = run_args({"fit", "--target", target_path});
    ASSERT_EQ(custom.code, 0);
    const auto back = litho::io::recipe_from_json(nlohmann::json::parse(custom.out));
    ASSERT_EQ(back.branches.size(), 1u);
    EXPECT_EQ(back.branches[0].photons, 3u);
    EXPECT_NEAR(back.branches[0].phase, -pi / 2, 1e-15);
}

TEST(Run, FigureOneFiles) {
    const auto dir = scratch_dir("figure1");
    const auto r = run_args({"figure1", "--output", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name : {"figure1_n2.csv", "figure1_n6.csv", "figure1_n12.csv", "figure1_reference.csv",
                             "figure1_summary.csv"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
    std::istringstream summary(slurp(dir / "figure1_summary.csv"));
    std::string line;
    std::getline(summary, line);
    EXPECT_EQ(line, "n_max,rms,sup");
    std::vector<double> rms;
    while (std::getline(summary, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        rms.push_back(std::stod(line.substr(a + 1, b - a - 1)));
    }
    ASSERT_EQ(rms.size(), 3u);
    EXPECT_GT(rms[0], rms[1]);
    EXPECT_GT(rms[1], rms[2]);

    const auto again = scratch_dir("figure1_again");
    ASSERT_EQ(run_args({"figure1", "--output", again.string()}).code, 0);
    EXPECT_EQ(slurp(dir / "figure1_n12.csv"), slurp(again / "figure1_n12.csv"));
}

TEST(Run, UnwritableOutputIsIoFailure) {
    const auto r = run_args({"deposition", "--n", "2", "--output", "/nonexistent/dir/out.csv"});
    EXPECT_EQ(r.code, cli::kIoFailure);
}

TEST(Binary, ExitCodes) {
    auto status = [](const std::string& args) {
        const std::string cmd = std::string(LITHO_SIM_BINARY) + " " + args + " > /dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("deposition --n 4 --gamma 0.5"), cli::kOk);
    EXPECT_EQ(status("deposition --n 0"), cli::kPrecondition);
    EXPECT_EQ(status("nonsense"), cli::kUsage);
    EXPECT_EQ(status("resonant --n 2"), cli::kMissingParameter);
    EXPECT_EQ(status("resonant --n 2 --k x"), cli::kMalformedNumber);
    EXPECT_EQ(status("--help"), cli::kOk);
}

}  // namespace
