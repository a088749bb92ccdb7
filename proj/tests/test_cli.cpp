#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uadam/cli/commands.hpp"
#include "uadam/cli/csv.hpp"
#include "uadam/cli/ini.hpp"
#include "uadam/cli/run_config.hpp"
#include "uadam/diagnostics.hpp"
#include "uadam/momentum.hpp"

namespace uadam::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("uadam_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  fs::path path_;
};

int run_binary(const std::string& args) {
  const std::string cmd = std::string(UADAM_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kBasic =
    "[problem]\n"
    "name = quadratic\n"
    "dim = 2\n"
    "diag = 1, 10\n"
    "\n"
    "[noise]\n"
    "d0 = 0.5\n"
    "d1 = 0.5\n"
    "seed = 7\n"
    "\n"
    "[optimizer]\n"
    "rule = adam\n"
    "eta = 0.01\n"
    "beta = 0.9\n"
    "lambda = 1\n"
    "T = 100\n";

// ---- INI parsing

TEST(Ini, ParsesSectionsCommentsAndPositions) {
  const auto doc = IniDocument::parse("# c\n[a]\n  x = 1\n; c\ny=two words\n");
  ASSERT_EQ(doc.entries().size(), 2u);
  const IniEntry* x = doc.find("a", "x");
  ASSERT_NE(x, nullptr);
  EXPECT_EQ(x->value, "1");
  EXPECT_EQ(x->line, 3u);
  EXPECT_EQ(x->key_column, 3u);
  EXPECT_EQ(doc.find("a", "y")->value, "two words");
  EXPECT_EQ(doc.find("b", "x"), nullptr);
}

TEST(Ini, ErrorsCarryLineAndColumn) {
  try {
    IniDocument::parse("[a]\nx = 1\nx = 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(IniDocument::parse("x = 1\n"), ParseError);
  EXPECT_THROW(IniDocument::parse("[a]\nx\n"), ParseError);
}

TEST(Ini, RenderRoundTrips) {
  auto doc = IniDocument::parse(kBasic);
  doc.set("optimizer", "beta", "0.5");
  doc.set("output", "stride", "3");
  const auto again = IniDocument::parse(doc.render());
  EXPECT_EQ(again.find("optimizer", "beta")->value, "0.5");
  EXPECT_EQ(again.find("output", "stride")->value, "3");
  EXPECT_EQ(again.entries().size(), doc.entries().size());
}

// ---- run files

TEST(RunConfig, ParsesBasicFile) {
  const RunFile r = parse_run_file(kBasic);
  EXPECT_EQ(r.problem_name, "quadratic");
  EXPECT_EQ(r.problem_params.diag, (std::vector<double>{1.0, 10.0}));
  EXPECT_EQ(r.noise.d0, 0.5);
  EXPECT_EQ(r.config.seed, 7u);
  EXPECT_EQ(r.noise.seed, 7u);
  EXPECT_EQ(rule_of(r.config.rule), LrRule::Adam);
  EXPECT_EQ(r.config.max_steps, 100u);
  EXPECT_EQ(r.config.lambda, 1.0);
}

TEST(RunConfig, UnknownKeyReportsPosition) {
  try {
    parse_run_file("[optimizer]\neta = 0.1\n  beta3 = 0.5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("beta3"), std::string::npos);
  }
  EXPECT_THROW(parse_run_file("[optimiser]\neta = 0.1\n"), ParseError);
}

TEST(RunConfig, RuleParametersMustBelongToRule) {
  EXPECT_THROW(parse_run_file("[optimizer]\nrule = const\nbeta2 = 0.9\n"), ParseError);
  EXPECT_THROW(parse_run_file("[optimizer]\nrule = adam\ntheta = 3\n"), ParseError);
  EXPECT_NO_THROW(parse_run_file("[optimizer]\nrule = sadam\ntheta = 3\n"));
  EXPECT_NO_THROW(parse_run_file("[optimizer]\nrule = const\nbeta2 = 0.9\n", {true}));
}

TEST(RunConfig, LambdaMaxAndRangeChecks) {
  const RunFile r = parse_run_file("[optimizer]\nbeta = 0.75\nlambda = max\n");
  EXPECT_TRUE(r.lambda_max);
  EXPECT_EQ(r.config.lambda_tilde(), 1.0);
  EXPECT_THROW(parse_run_file("[optimizer]\nbeta = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_run_file("[optimizer]\neta = abc\n"), ParseError);
  EXPECT_THROW(parse_run_file("[optimizer]\nT = 0\n"), ConfigError);
  EXPECT_THROW(parse_run_file("[output]\nstride = 0\n"), ConfigError);
}

TEST(RunConfig, DescribeListsEffectiveValues) {
  const auto lines = describe(parse_run_file(kBasic));
  const auto has = [&](const std::string& s) {
    return std::find(lines.begin(), lines.end(), s) != lines.end();
  };
  EXPECT_TRUE(has("optimizer.rule = adam"));
  EXPECT_TRUE(has("noise.seed = 7"));
}

// ---- CSV

TEST(Csv, NumbersRoundTripExactly) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Csv, TraceRoundTrip) {
  TempDir tmp;
  RunTrace trace;
  for (std::size_t t = 1; t <= 5; ++t) {
    trace.append({t, 1.0 / t, 0.1 * t, 1e-3 / t, 0.01, 0.02, std::sqrt(t)});
  }
  const auto path = (tmp.path() / "t.csv").string();
  write_csv(path, trace_table(trace, 1, {"hello"}));
  const CsvTable back = read_csv(path);
  EXPECT_EQ(back.metadata, std::vector<std::string>{"hello"});
  EXPECT_EQ(back.header, kTraceColumns);
  const RunTrace again = trace_from_table(back);
  ASSERT_EQ(again.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(again[i].f_val, trace[i].f_val);
    EXPECT_EQ(again[i].step_norm, trace[i].step_norm);
  }
}

TEST(Csv, RaggedRowsRejected) {
  TempDir tmp;
  const auto path = tmp.file("bad.csv", "a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(path), ConfigError);
}

// ---- run command

TEST(RunCommand, WritesTraceAndSummary) {
  TempDir tmp;
  RunOptions opts;
  opts.config_path = tmp.file("run.ini", kBasic);
  opts.out_dir = (tmp.path() / "out").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(opts, out, err), kExitOk) << err.str();

  const CsvTable trace = read_csv((tmp.path() / "out" / "trace.csv").string());
  ASSERT_EQ(trace.rows.size(), 100u);
  EXPECT_EQ(trace.metadata.at(0), std::string("uadam ") + kToolVersion);

  double sum = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) sum += trace.number(i, "grad_norm_sq");
  const CsvTable summary = read_csv((tmp.path() / "out" / "summary.csv").string());
  ASSERT_EQ(summary.rows.size(), 1u);
  const double avg = summary.number(0, "avg_grad_sq");
  EXPECT_NEAR(sum / 100.0, avg, 1e-12 * avg);
  EXPECT_DOUBLE_EQ(convergence_summary(trace_from_table(trace)).avg_grad_sq, avg);
}

TEST(RunCommand, StrideKeepsMultiples) {
  TempDir tmp;
  RunOptions opts;
  opts.config_path = tmp.file("run.ini", kBasic);
  opts.out_dir = tmp.path().string();
  opts.stride = 10;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(opts, out, err), kExitOk);
  const CsvTable trace = read_csv((tmp.path() / "trace.csv").string());
  ASSERT_EQ(trace.rows.size(), 10u);
  EXPECT_EQ(trace.number(0, "t"), 10.0);
  EXPECT_EQ(trace.number(9, "t"), 100.0);
}

TEST(RunCommand, SameConfigReproducesBitwise) {
  TempDir tmp;
  const auto cfg = tmp.file("run.ini", kBasic);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run({cfg, (tmp.path() / "a").string(), std::nullopt}, out, err), kExitOk);
  ASSERT_EQ(cmd_run({cfg, (tmp.path() / "b").string(), std::nullopt}, out, err), kExitOk);
  const auto a = read_csv((tmp.path() / "a" / "trace.csv").string());
  const auto b = read_csv((tmp.path() / "b" / "trace.csv").string());
  EXPECT_EQ(a.rows, b.rows);
}

TEST(RunCommand, ConfigAndAbortExitCodes) {
  TempDir tmp;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run({tmp.file("bad.ini", "[optimizer]\nbeta3 = 1\n"), std::nullopt, std::nullopt},
                    out, err),
            kExitConfig);
  EXPECT_NE(err.str().find("2:1"), std::string::npos) << err.str();
  EXPECT_EQ(cmd_run({(tmp.path() / "missing.ini").string(), std::nullopt, std::nullopt}, out, err),
            kExitConfig);

  const auto diverge = tmp.file("div.ini",
                                "[problem]\nname = rosenbrock\n[optimizer]\nrule = const\n"
                                "eta = 1\nT = 1000\n");
  err.str("");
  EXPECT_EQ(cmd_run({diverge, (tmp.path() / "d").string(), std::nullopt}, out, err), kExitAbort);
  EXPECT_NE(err.str().find("numeric abort at step"), std::string::npos);
}

// ---- sweep command

TEST(SweepCommand, TreeOfValuesAndSeeds) {
  TempDir tmp;
  SweepOptions opts;
  opts.config_path = tmp.file("run.ini", kBasic);
  opts.out_dir = tmp.path().string();
  opts.param = "beta";
  opts.values = {"0.5", "0.9", "0.99"};
  opts.seeds = 20;
  opts.stride = 50;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(opts, out, err), kExitOk) << err.str();
  for (const auto& v : opts.values) {
    for (int k = 0; k < 20; ++k) {
      EXPECT_TRUE(fs::exists(tmp.path() / ("beta_" + v) / ("seed_" + std::to_string(k)) /
                             "trace.csv"));
    }
  }
  const CsvTable summary = read_csv((tmp.path() / "sweep_summary.csv").string());
  ASSERT_EQ(summary.rows.size(), 60u);
  EXPECT_EQ(summary.number(0, "seed"), 7.0);
  EXPECT_EQ(summary.number(19, "seed"), 26.0);
  EXPECT_EQ(summary.number(20, "seed"), 7.0);
}

TEST(SweepCommand, RuleSweepSharesNoiseAcrossValues) {
  TempDir tmp;
  SweepOptions opts;
  opts.config_path = tmp.file("run.ini", std::string(kBasic) + "epsilon = 1e-8\n");
  opts.out_dir = tmp.path().string();
  opts.param = "rule";
  opts.values = {"adam", "amsgrad", "const"};
  opts.seeds = 2;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(opts, out, err), kExitOk) << err.str();

  // Step-1 gradients coincide across rules for a given seed index.
  const auto first_row = [&](const std::string& rule, int k) {
    return read_csv((tmp.path() / ("rule_" + rule) / ("seed_" + std::to_string(k)) / "trace.csv")
                        .string())
        .number(0, "grad_norm_sq");
  };
  EXPECT_EQ(first_row("adam", 1), first_row("const", 1));
  const auto delta = [&](const std::string& rule, int k) {
    return read_csv((tmp.path() / ("rule_" + rule) / ("seed_" + std::to_string(k)) / "trace.csv")
                        .string())
        .number(0, "delta_t");
  };
  EXPECT_EQ(delta("adam", 0), delta("amsgrad", 0));
  EXPECT_NE(delta("adam", 0), delta("adam", 1));
}

TEST(SweepCommand, LambdaZeroMatchesHeavyBall) {
  TempDir tmp;
  SweepOptions opts;
  opts.config_path = tmp.file(
      "run.ini",
      "[problem]\ndiag = 1, 10\n[optimizer]\nrule = const\neta = 0.05\nbeta = 0.8\nT = 50\n");
  opts.out_dir = tmp.path().string();
  opts.param = "lambda";
  opts.values = {"0", "1"};
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(opts, out, err), kExitOk);
  const RunTrace trace =
      trace_from_table(read_csv((tmp.path() / "lambda_0" / "seed_0" / "trace.csv").string()));

  // Heavy ball: x_{t+1} = x_t - alpha g_t + beta (x_t - x_{t-1}), alpha = eta (1 - beta).
  const Problem p = make_problem("quadratic", 2, {.diag = {1.0, 10.0}});
  ParamVector x = p.start, x_prev = p.start;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    EXPECT_NEAR(trace[t].f_val, p.f(x), 1e-12 * std::max(1.0, p.f(x))) << t;
    const ParamVector next = shb_step(x, x_prev, p.grad(x), 0.05 * 0.2, 0.8);
    x_prev = x;
    x = next;
  }
}

TEST(SweepCommand, RejectsBadAxes) {
  TempDir tmp;
  const auto cfg = tmp.file("run.ini", kBasic);
  std::ostringstream out, err;
  for (const char* param : {"seed", "stride", "gamma"}) {
    SweepOptions opts;
    opts.config_path = cfg;
    opts.out_dir = tmp.path().string();
    opts.param = param;
    opts.values = {"1"};
    EXPECT_EQ(cmd_sweep(opts, out, err), kExitConfig) << param;
  }
  SweepOptions bad;
  bad.config_path = cfg;
  bad.out_dir = tmp.path().string();
  bad.param = "beta";
  bad.values = {"2"};
  EXPECT_EQ(cmd_sweep(bad, out, err), kExitConfig);
}

// ---- verify and the binary

TEST(Verify, ConditionsSuitePasses) {
  const auto results = verify_suite("conditions");
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name;
  EXPECT_THROW(verify_suite("nope"), ConfigError);
}

TEST(Binary, ExitCodes) {
  TempDir tmp;
  EXPECT_EQ(run_binary("verify conditions"), 0);
  EXPECT_EQ(run_binary("verify nope"), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  const auto bad = tmp.file("bad.ini", "[optimizer]\nbeta3 = 0.5\n");
  EXPECT_EQ(run_binary("run --config " + bad), 2);
  const auto good = tmp.file("good.ini", kBasic);
  EXPECT_EQ(run_binary("run --config " + good + " --out " + (tmp.path() / "o").string()), 0);
  EXPECT_TRUE(fs::exists(tmp.path() / "o" / "trace.csv"));
  EXPECT_EQ(run_binary("sweep --config " + good + " --param eta --values 0.01,0.02 --seeds 2 --out " +
                       (tmp.path() / "s").string()),
            0);
  EXPECT_TRUE(fs::exists(tmp.path() / "s" / "eta_0.02" / "seed_1" / "summary.csv"));
}

}  // namespace
}  // namespace uadam::cli
