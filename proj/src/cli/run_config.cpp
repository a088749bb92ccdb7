#include "uadam/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <type_traits>

namespace uadam::cli {

namespace {

struct KeyInfo {
  std::string_view section;
  std::string_view key;
};

constexpr KeyInfo kKeys[] = {
    {"problem", "name"},      {"problem", "dim"},         {"problem", "diag"},
    {"problem", "samples"},   {"problem", "reg"},         {"problem", "data_seed"},
    {"problem", "radius"},    {"noise", "d0"},            {"noise", "d1"},
    {"noise", "seed"},        {"optimizer", "eta"},       {"optimizer", "beta"},
    {"optimizer", "lambda"},  {"optimizer", "rule"},      {"optimizer", "T"},
    {"optimizer", "grad_bound"}, {"optimizer", "beta2"},  {"optimizer", "epsilon"},
    {"optimizer", "clip_lower"}, {"optimizer", "clip_upper"}, {"optimizer", "theta"},
    {"optimizer", "weights"}, {"optimizer", "weight_ratio"}, {"output", "directory"},
    {"output", "stride"},
};

constexpr std::string_view kRuleKeys[] = {"beta2",      "epsilon", "clip_lower", "clip_upper",
                                          "theta",      "weights", "weight_ratio"};

bool is_rule_key(std::string_view key) {
  return std::find(std::begin(kRuleKeys), std::end(kRuleKeys), key) != std::end(kRuleKeys);
}

bool rule_reads(LrRule rule, std::string_view key) {
  switch (rule) {
    case LrRule::Const:
      return false;
    case LrRule::Adam:
    case LrRule::AmsGrad:
    case LrRule::Yogi:
    case LrRule::Adan:
      return key == "beta2" || key == "epsilon";
    case LrRule::AdaFom:
      return key == "epsilon";
    case LrRule::AdaBound:
      return key == "beta2" || key == "clip_lower" || key == "clip_upper";
    case LrRule::AdaEma:
      return key == "epsilon" || key == "weights" || key == "weight_ratio";
    case LrRule::SAdam:
      return key == "beta2" || key == "theta";
  }
  return false;
}

double to_double(const IniEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("`" + e.key + "` expects a number, got `" + e.value + "`", e.line,
                     e.value_column);
  }
  return v;
}

std::uint64_t to_uint(const IniEntry& e) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("`" + e.key + "` expects a nonnegative integer, got `" + e.value + "`",
                     e.line, e.value_column);
  }
  return v;
}

std::vector<double> to_list(const IniEntry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const std::size_t comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    IniEntry one = e;
    one.value = std::string(item);
    out.push_back(to_double(one));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

template <class F>
void rethrow_at(const IniEntry& e, F&& f) {
  try {
    f();
  } catch (const ParseError&) {
    throw;
  } catch (const ConfigError& err) {
    throw ParseError(err.what(), e.line, e.value_column);
  }
}

void apply_rule_key(RuleSpec& spec, const IniEntry& e) {
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (requires { p.beta2; }) {
          if (e.key == "beta2") p.beta2 = to_double(e);
        }
        if constexpr (requires { p.epsilon; }) {
          if (e.key == "epsilon") p.epsilon = to_double(e);
        }
        if constexpr (std::is_same_v<T, AdaBoundParams>) {
          if (e.key == "clip_lower") p.clip_lower = to_double(e);
          if (e.key == "clip_upper") p.clip_upper = to_double(e);
        }
        if constexpr (std::is_same_v<T, SAdamParams>) {
          if (e.key == "theta") p.theta = to_double(e);
        }
        if constexpr (std::is_same_v<T, AdaEmaParams>) {
          if (e.key == "weights") rethrow_at(e, [&] { p.weights = parse_weight_scheme(e.value); });
          if (e.key == "weight_ratio") p.weight_ratio = to_double(e);
        }
      },
      spec);
}

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

std::string_view section_of(std::string_view key) noexcept {
  for (const auto& k : kKeys) {
    if (k.key == key) return k.section;
  }
  return {};
}

Problem RunFile::make_problem() const { return uadam::make_problem(problem_name, dim, problem_params); }

RunFile parse_run_file(std::string_view text, const ParseOptions& options) {
  RunFile run;
  run.doc = IniDocument::parse(text);

  for (const auto& e : run.doc.entries()) {
    const bool known = std::any_of(std::begin(kKeys), std::end(kKeys), [&](const KeyInfo& k) {
      return k.section == e.section && k.key == e.key;
    });
    if (!known) {
      const bool section_known = std::any_of(std::begin(kKeys), std::end(kKeys),
                                             [&](const KeyInfo& k) { return k.section == e.section; });
      if (!section_known) {
        throw ParseError("unknown section `" + e.section + "`", e.line, e.key_column);
      }
      throw ParseError("unknown key `" + e.key + "` in [" + e.section + "]", e.line,
                       e.key_column);
    }
  }

  // The rule decides which rule parameters are legal, so read it first.
  LrRule rule = LrRule::Adam;
  if (const IniEntry* e = run.doc.find("optimizer", "rule")) {
    rethrow_at(*e, [&] { rule = parse_rule(e->value); });
  }
  run.config.rule = default_spec(rule);

  const IniEntry* lambda_entry = nullptr;
  for (const auto& e : run.doc.entries()) {
    const std::string& k = e.key;
    if (e.section == "problem") {
      if (k == "name") run.problem_name = e.value;
      if (k == "dim") run.dim = to_uint(e);
      if (k == "diag") run.problem_params.diag = to_list(e);
      if (k == "samples") run.problem_params.samples = to_uint(e);
      if (k == "reg") run.problem_params.reg = to_double(e);
      if (k == "data_seed") run.problem_params.data_seed = to_uint(e);
      if (k == "radius") run.problem_params.radius = to_double(e);
    } else if (e.section == "noise") {
      if (k == "d0") run.noise.d0 = to_double(e);
      if (k == "d1") run.noise.d1 = to_double(e);
      if (k == "seed") run.noise.seed = run.config.seed = to_uint(e);
    } else if (e.section == "optimizer") {
      if (k == "eta") run.config.eta = to_double(e);
      if (k == "beta") run.config.beta = to_double(e);
      if (k == "lambda") lambda_entry = &e;
      if (k == "T") run.config.max_steps = to_uint(e);
      if (k == "grad_bound") run.config.grad_bound = to_double(e);
      if (is_rule_key(k)) {
        if (!rule_reads(rule, k) && !options.allow_unused_rule_params) {
          throw ParseError("rule `" + std::string(rule_name(rule)) + "` takes no parameter `" +
                               k + "`",
                           e.line, e.key_column);
        }
        apply_rule_key(run.config.rule, e);
      }
    } else if (e.section == "output") {
      if (k == "directory") run.output_dir = e.value;
      if (k == "stride") run.stride = to_uint(e);
    }
  }

  if (lambda_entry != nullptr) {
    if (lambda_entry->value == "max") {
      run.lambda_max = true;
      if (!(run.config.beta >= 0.0 && run.config.beta < 1.0)) {
        throw ParseError("lambda = max needs beta in [0, 1)", lambda_entry->line,
                         lambda_entry->value_column);
      }
      run.config.lambda = 1.0 / (1.0 - run.config.beta);
    } else {
      run.config.lambda = to_double(*lambda_entry);
    }
  }

  if (run.noise.d0 < 0.0 || run.noise.d1 < 0.0) throw ConfigError("d0 and d1 must be nonnegative");
  if (run.stride == 0) throw ConfigError("stride must be at least 1");
  if (run.config.max_steps == 0) throw ConfigError("T must be at least 1");
  run.config.validate();
  run.make_problem();
  return run;
}

RunFile load_run_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config `" + path + "`");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_file(text.str(), options);
}

std::vector<std::string> describe(const RunFile& run) {
  std::vector<std::string> out;
  auto add = [&](std::string_view key, const std::string& value) {
    out.push_back(std::string(key) + " = " + value);
  };
  add("problem.name", run.problem_name);
  add("problem.dim", std::to_string(run.dim));
  if (!run.problem_params.diag.empty()) {
    std::string d;
    for (double a : run.problem_params.diag) d += (d.empty() ? "" : ",") + fmt_double(a);
    add("problem.diag", d);
  }
  add("noise.d0", fmt_double(run.noise.d0));
  add("noise.d1", fmt_double(run.noise.d1));
  add("noise.seed", std::to_string(run.config.seed));
  add("optimizer.eta", fmt_double(run.config.eta));
  add("optimizer.beta", fmt_double(run.config.beta));
  add("optimizer.lambda", fmt_double(run.config.lambda));
  add("optimizer.rule", std::string(rule_name(rule_of(run.config.rule))));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (requires { p.beta2; }) add("optimizer.beta2", fmt_double(p.beta2));
        if constexpr (requires { p.epsilon; }) add("optimizer.epsilon", fmt_double(p.epsilon));
        if constexpr (std::is_same_v<T, AdaBoundParams>) {
          add("optimizer.clip_lower", fmt_double(p.clip_lower));
          add("optimizer.clip_upper", fmt_double(p.clip_upper));
        }
        if constexpr (std::is_same_v<T, SAdamParams>) add("optimizer.theta", fmt_double(p.theta));
        if constexpr (std::is_same_v<T, AdaEmaParams>) {
          add("optimizer.weights", std::string(weight_scheme_name(p.weights)));
          add("optimizer.weight_ratio", fmt_double(p.weight_ratio));
        }
      },
      run.config.rule);
  if (run.config.grad_bound) add("optimizer.grad_bound", fmt_double(*run.config.grad_bound));
  add("optimizer.T", std::to_string(run.config.max_steps));
  add("output.stride", std::to_string(run.stride));
  return out;
}

}  // namespace uadam::cli
