#include "uadam/cli/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "uadam/cli/csv.hpp"
#include "uadam/diagnostics.hpp"
#include "uadam/kernels.hpp"
#include "uadam/momentum.hpp"
#include "uadam/philox.hpp"

namespace uadam::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> run_metadata(const RunFile& run) {
  std::vector<std::string> meta = {std::string("uadam ") + kToolVersion,
                                   "rng " + std::string(kRngIdentifier),
                                   "seed " + std::to_string(run.config.seed)};
  for (const auto& line : describe(run)) meta.push_back("config " + line);
  return meta;
}

std::string str(double v) { return format_number(v); }

}  // namespace

RunOutcome execute_run(const RunFile& run, const std::string& dir) {
  const Problem problem = run.make_problem();
  RunOutcome outcome = run_to_completion(run.config, problem, run.noise);
  fs::create_directories(dir);

  const auto meta = run_metadata(run);
  write_csv((fs::path(dir) / "trace.csv").string(), trace_table(outcome.trace, run.stride, meta));
  if (!outcome.summary) return outcome;

  const double G = run.config.grad_bound.value_or(problem.grad_inf_bound);
  const BoundCertificate cert = bound_certificate(run.config.rule, run.config.eta, G);
  const ConditionReport cond =
      validate_theorem_conditions(TheoremConditions::from(cert, problem, run.noise, run.config));

  CsvTable summary;
  summary.metadata = meta;
  summary.metadata.push_back("certificate eta_l=" + str(cert.eta_l) + " eta_u=" + str(cert.eta_u) +
                             " G=" + str(G) + " grad_precondition=" + str(cert.grad_precondition));
  summary.metadata.push_back("assumption4_violations " +
                             std::to_string(check_assumption4(outcome.trace, cert)));
  summary.metadata.push_back("grad_bound_violations " +
                             std::to_string(outcome.grad_bound_violations));
  summary.metadata.push_back("max_grad_inf " + str(outcome.max_grad_inf));
  summary.metadata.push_back(std::string("final_in_region ") +
                             (problem.in_region(outcome.final_x) ? "true" : "false"));
  for (const auto& c : cond.theorem) {
    summary.metadata.push_back("constraint " + c.name + " value=" + str(c.value) +
                               " bound=" + str(c.bound) + " margin=" + str(c.margin) +
                               (c.satisfied ? " ok" : " violated"));
  }
  summary.metadata.push_back(std::string("corollary ") +
                             (cond.corollary_satisfied() ? "satisfied" : "violated"));
  if (outcome.error) {
    summary.metadata.push_back("aborted_at_step " + std::to_string(outcome.error->step()));
  }
  summary.header = kSummaryColumns;
  summary.rows.push_back({str(outcome.summary->avg_grad_sq), str(outcome.summary->min_grad_sq),
                          str(outcome.summary->plateau), std::string(verdict_name(cond.verdict))});
  write_csv((fs::path(dir) / "summary.csv").string(), summary);
  return outcome;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  RunFile run;
  try {
    run = load_run_file(options.config_path);
    if (options.stride) {
      if (*options.stride == 0) throw ConfigError("stride must be at least 1");
      run.stride = *options.stride;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string dir = options.out_dir.value_or(run.output_dir);
  try {
    const RunOutcome outcome = execute_run(run, dir);
    if (outcome.error) {
      err << "numeric abort at step " << outcome.error->step() << ": " << outcome.error->what()
          << '\n';
      return kExitAbort;
    }
    out << "wrote " << dir << "/trace.csv and summary.csv (" << outcome.trace.size()
        << " steps, avg_grad_sq " << str(outcome.summary->avg_grad_sq) << ")\n";
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  struct Cell {
    std::string value;
    std::size_t k = 0;
    RunFile run;
    std::string dir;
    std::string status = "pending";
    std::optional<ConvergenceSummary> summary;
  };

  std::vector<Cell> cells;
  std::string out_dir;
  try {
    const ParseOptions popts{options.param == "rule"};
    const RunFile base = load_run_file(options.config_path, popts);
    out_dir = options.out_dir.value_or(base.output_dir);
    const std::string_view section = section_of(options.param);
    if (section.empty() || section == "output" || options.param == "seed") {
      throw ConfigError("cannot sweep over `" + options.param + "`");
    }
    if (options.values.empty()) throw ConfigError("sweep needs at least one value");
    if (options.seeds == 0) throw ConfigError("sweep needs at least one seed");
    for (const auto& value : options.values) {
      for (std::size_t k = 0; k < options.seeds; ++k) {
        IniDocument doc = base.doc;
        doc.set(section, options.param, value);
        doc.set("noise", "seed", std::to_string(base.config.seed + k));
        Cell cell;
        cell.value = value;
        cell.k = k;
        try {
          cell.run = parse_run_file(doc.render(), popts);
        } catch (const ConfigError& e) {
          throw ConfigError(options.param + " = " + value + ": " + e.what());
        }
        if (options.stride) cell.run.stride = std::max<std::size_t>(1, *options.stride);
        cell.dir = (fs::path(out_dir) / (options.param + "_" + value) /
                    ("seed_" + std::to_string(k)))
                       .string();
        cells.push_back(std::move(cell));
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const int threads = options.workers > 0 ? static_cast<int>(options.workers) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i) {
    Cell& cell = cells[static_cast<std::size_t>(i)];
    try {
      const RunOutcome outcome = execute_run(cell.run, cell.dir);
      cell.summary = outcome.summary;
      cell.status = outcome.error ? "abort_step_" + std::to_string(outcome.error->step()) : "ok";
    } catch (const std::exception& e) {
      cell.status = std::string("error: ") + e.what();
    }
  }

  CsvTable table;
  table.metadata = {std::string("uadam ") + kToolVersion, "rng " + std::string(kRngIdentifier),
                    "sweep " + options.param + " seeds " + std::to_string(options.seeds)};
  table.header = kSweepColumns;
  bool all_ok = true;
  for (const auto& c : cells) {
    const bool ok = c.status == "ok";
    all_ok = all_ok && ok;
    if (!ok) err << "cell " << options.param << "=" << c.value << " seed_" << c.k << ": " << c.status << '\n';
    const auto num = [&](double ConvergenceSummary::*field) {
      return c.summary ? str((*c.summary).*field) : std::string("nan");
    };
    table.rows.push_back({options.param, c.value, std::to_string(c.run.config.seed),
                          num(&ConvergenceSummary::avg_grad_sq),
                          num(&ConvergenceSummary::min_grad_sq),
                          num(&ConvergenceSummary::plateau), c.status});
  }
  try {
    fs::create_directories(out_dir);
    write_csv((fs::path(out_dir) / "sweep_summary.csv").string(), table);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << "sweep " << options.param << ": " << cells.size() << " cells, "
      << (all_ok ? "all ok" : "some cells failed") << '\n';
  return all_ok ? kExitOk : kExitAbort;
}

// ---------------------------------------------------------------------------
// verify

namespace {

std::string describe_case(std::initializer_list<std::pair<std::string_view, std::string>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += ' ';
    s += std::string(k) + '=' + v;
  }
  return s;
}

Problem verify_quadratic() { return make_problem("quadratic", 2, {.diag = {1.0, 10.0}}); }

std::vector<CheckResult> verify_equivalence() {
  std::vector<CheckResult> out;
  constexpr double kTol = 1e-9;
  const Problem problems[] = {verify_quadratic(), make_problem("rosenbrock", 2)};
  const EquivalencePair pairs[] = {EquivalencePair::Snag1Snag2, EquivalencePair::NmeSnag2,
                                   EquivalencePair::Sum2Sum1, EquivalencePair::ShbSum1,
                                   EquivalencePair::Snag2Sum1};
  for (const auto& problem : problems) {
    const double eta = problem.name == "quadratic" ? 0.05 : 1e-4;
    for (const auto pair : pairs) {
      for (double beta : {0.5, 0.9, 0.99}) {
        for (double lambda : {0.0, 1.0}) {
          EquivalenceParams p;
          p.eta = eta;
          p.beta = beta;
          p.lambda = lambda;
          const double dev = check_equivalence(pair, problem, 200, p);
          out.push_back({"equivalence",
                         describe_case({{"pair", std::string(pair_name(pair))},
                                        {"problem", problem.name},
                                        {"eta", str(eta)},
                                        {"beta", str(beta)},
                                        {"lambda", str(lambda)},
                                        {"steps", "200"}}),
                         dev, kTol, dev <= kTol ? "pass" : "fail", dev <= kTol});
        }
      }
    }
  }
  return out;
}

std::vector<CheckResult> verify_bounds() {
  std::vector<CheckResult> out;
  for (LrRule rule : kAllRules) {
    kernels::BoundSweepSpec spec;
    spec.rule = default_spec(rule);
    spec.eta = 1e-3;
    spec.grad_bound = 5.0;
    spec.beta1 = 0.9;
    spec.streams = 10000;
    spec.length = 100;
    spec.dim = 4;
    spec.seed = 2024;
    const auto res = kernels::omp::bound_sweep(spec);
    const bool ok = res.violations == 0;
    out.push_back({"bounds",
                   describe_case({{"rule", std::string(rule_name(rule))},
                                  {"eta", str(spec.eta)},
                                  {"G", str(spec.grad_bound)},
                                  {"beta1", str(spec.beta1)},
                                  {"streams", std::to_string(spec.streams)},
                                  {"length", std::to_string(spec.length)},
                                  {"dim", std::to_string(spec.dim)},
                                  {"seed", std::to_string(spec.seed)}}),
                   static_cast<double>(res.violations), 0.0, ok ? "pass" : "fail", ok});
  }
  return out;
}

std::vector<CheckResult> verify_lemma1() {
  std::vector<CheckResult> out;
  const Problem problem = verify_quadratic();
  for (LrRule rule : {LrRule::Const, LrRule::Adam}) {
    for (double beta : {0.5, 0.9, 0.99}) {
      for (double lambda : {0.0, 1.0, 1.0 / (1.0 - beta)}) {
        UAdamConfig cfg;
        cfg.rule = default_spec(rule);
        cfg.eta = rule == LrRule::Const ? 0.05 : 0.01;
        cfg.beta = beta;
        cfg.lambda = lambda;
        cfg.max_steps = 1000;
        const auto reports = check_lemma1_along_run(cfg, problem);
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (const auto& r : reports) {
          worst = std::min(worst, r.slack);
          ok = ok && r.passed;
        }
        out.push_back({"lemma1",
                       describe_case({{"mode", "deterministic"},
                                      {"rule", std::string(rule_name(rule))},
                                      {"eta", str(cfg.eta)},
                                      {"beta", str(beta)},
                                      {"lambda", str(lambda)},
                                      {"T", "1000"}}),
                       worst, -kDeterministicSlack, ok ? "pass" : "fail", ok});
      }
    }
  }

  UAdamConfig cfg;
  cfg.eta = 0.01;
  cfg.beta = 0.9;
  cfg.lambda = 0.0;
  cfg.seed = 11;
  cfg.max_steps = 500;
  const NoiseModel noise{1.0, 1.0, cfg.seed, 0};
  std::vector<std::size_t> steps;
  for (std::size_t s = 50; s <= 500; s += 50) steps.push_back(s);
  const auto states = frozen_states_along_run(cfg, problem, noise, steps);
  for (std::size_t i = 0; i < states.size(); ++i) {
    NoiseModel mc = noise;
    mc.stream = static_cast<std::uint32_t>(1000 + i);
    const auto r =
        check_lemma1_stochastic(states[i], cfg.beta, problem.lipschitz, problem, mc, 100000);
    out.push_back({"lemma1",
                   describe_case({{"mode", "stochastic"},
                                  {"rule", "adam"},
                                  {"eta", str(cfg.eta)},
                                  {"beta", str(cfg.beta)},
                                  {"d0", "1"},
                                  {"d1", "1"},
                                  {"seed", std::to_string(cfg.seed)},
                                  {"step", std::to_string(r.step)},
                                  {"stream", std::to_string(mc.stream)},
                                  {"n", "100000"}}),
                   r.slack, -3.0 * r.std_error, r.passed ? "pass" : "fail", r.passed});
  }
  return out;
}

std::vector<CheckResult> verify_conditions() {
  std::vector<CheckResult> out;
  constexpr double L = 10.0;
  for (double K : {1.0, 2.0, 10.0}) {
    for (double d1 : {0.0, 1.0, 100.0}) {
      for (double beta : {0.5, 0.9, 0.99}) {
        const auto eta_u = admissible_eta_u(L, d1, beta, 0.0, K);
        const std::string name = describe_case({{"L", str(L)},
                                                {"K", str(K)},
                                                {"d1", str(d1)},
                                                {"beta", str(beta)},
                                                {"lambda", "0"}});
        if (!eta_u) {
          // The corollary form rules this beta out; the theorem form must agree.
          TheoremConditions tc{1e-3 / K, 1e-3, L, 1.0, d1, beta, 0.0};
          const auto rep = validate_theorem_conditions(tc);
          bool beta_bound_fails = false;
          for (const auto& c : rep.binding()) beta_bound_fails |= c.name == "one_minus_beta_wgc";
          out.push_back({"conditions", name + " eta_u=1e-3", 0.0, 0.0,
                         std::string(verdict_name(rep.verdict)), beta_bound_fails});
          continue;
        }
        TheoremConditions tc{*eta_u / K, *eta_u, L, 1.0, d1, beta, 0.0};
        const auto rep = validate_theorem_conditions(tc);
        const bool ok = rep.satisfied() && rep.corollary_satisfied();
        out.push_back({"conditions", name + " eta_u=" + str(*eta_u), *eta_u, 0.0,
                       std::string(verdict_name(rep.verdict)), ok});
      }
    }
  }
  // A step-size ceiling no beta can rescue.
  TheoremConditions tc{1e-3, 1.0, L, 1.0, 1.0, 0.9, 0.0};
  const auto rep = validate_theorem_conditions(tc);
  out.push_back({"conditions", "L=10 K=1000 d1=1 beta=0.9 lambda=0 eta_u=1", 1.0, 0.0,
                 std::string(verdict_name(rep.verdict)), rep.verdict == Verdict::Infeasible});
  return out;
}

}  // namespace

std::vector<CheckResult> verify_suite(std::string_view suite) {
  if (suite == "equivalence") return verify_equivalence();
  if (suite == "bounds") return verify_bounds();
  if (suite == "lemma1") return verify_lemma1();
  if (suite == "conditions") return verify_conditions();
  throw ConfigError("unknown verify suite `" + std::string(suite) + "`");
}

int cmd_verify(std::string_view suite, std::size_t workers, std::ostream& out,
               std::ostream& err) {
  if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
  std::vector<std::string_view> names;
  if (suite == "all") {
    names.assign(std::begin(kSuites), std::end(kSuites));
  } else if (std::find(std::begin(kSuites), std::end(kSuites), suite) != std::end(kSuites)) {
    names.push_back(suite);
  } else {
    err << "config error: unknown verify suite `" << suite << "`\n";
    return kExitConfig;
  }

  bool all_ok = true;
  for (auto name : names) {
    const auto results = verify_suite(name);
    std::size_t passed = 0;
    for (const auto& r : results) {
      out << std::left << std::setw(12) << r.suite << std::setw(11) << r.verdict
          << std::setw(24) << str(r.value) << r.name << '\n';
      if (r.passed) {
        ++passed;
      } else {
        err << "FAILED " << r.suite << ": " << r.name << " value=" << str(r.value)
            << " tolerance=" << str(r.tolerance) << '\n';
      }
    }
    out << name << ": " << passed << "/" << results.size() << " passed\n";
    all_ok = all_ok && passed == results.size();
  }
  return all_ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace uadam::cli
