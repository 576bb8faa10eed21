#include "rotkit/markov_graph.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/orbit_engine.hpp"
#include "rotkit/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

constexpr int kInputError = 2;
constexpr int kBudgetExceeded = 3;

std::pair<long, long> parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    long p = std::stol(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash)) throw std::invalid_argument(text);
    long q = 1;
    if (slash != std::string::npos) {
      std::string den = text.substr(slash + 1);
      q = std::stol(den, &used);
      if (used != den.size()) throw std::invalid_argument(text);
    }
    return {p, q};
  } catch (const std::logic_error&) {
    throw rotkit::Error(rotkit::ErrorKind::ParseError, "--rho expects p/q, got '" + text + "'");
  }
}

long effective_budget(long flag) {
  if (const char* env = std::getenv("ROTKIT_BUDGET")) {
    try {
      return std::stol(env);
    } catch (const std::logic_error&) {
      throw rotkit::Error(rotkit::ErrorKind::ParseError, std::string("ROTKIT_BUDGET is not an integer: ") + env);
    }
  }
  return flag;
}

void emit(const rotkit::Json& doc, const std::string& format) {
  if (format == "text") {
    std::cout << rotkit::render_text(doc);
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation sets, rotation numbers and periods of degree-one graph maps"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> report;
  int horizon = 256;
  int qmax = 12;
  long budget = 1000000;
  unsigned long seed = 0;
  app.add_option("--report", report, "Output format: json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--horizon", horizon, "Iteration horizon for enclosures and orbits")->check(CLI::NonNegativeNumber);
  app.add_option("--qmax", qmax, "Largest denominator for exact rotation numbers")->check(CLI::NonNegativeNumber);
  app.add_option("--budget", budget, "Loop-search expansion cap (ROTKIT_BUDGET overrides)");
  app.add_option("--seed", seed, "Seed for sampled spot checks");

  std::string model_path;
  auto* analyze = app.add_subcommand("analyze", "Rotation set, transitivity and combedness report");
  analyze->add_option("model", model_path, "Model file")->required();

  auto* periods = app.add_subcommand("periods", "Periods with a given rotation number");
  std::string rho;
  int n_max = 20;
  periods->add_option("model", model_path, "Model file")->required();
  periods->add_option("--rho", rho, "Rotation number p/q in lowest terms")->required();
  periods->add_option("--max", n_max, "Largest period searched")->check(CLI::PositiveNumber);

  auto* orbit = app.add_subcommand("orbit", "Exact orbit trace and rotation estimate");
  std::string point_spec;
  std::optional<int> steps;
  orbit->add_option("model", model_path, "Model file")->required();
  orbit->add_option("--point", point_spec, "Named point, node:ID[:k], edge:ID:t[:k] or spine:x")->required();
  orbit->add_option("--steps", steps, "Number of iterates (defaults to --horizon)")->check(CLI::NonNegativeNumber);

  auto* dot = app.add_subcommand("export-dot", "Markov graph in DOT format");
  dot->add_option("model", model_path, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    rotkit::Model model = rotkit::load_model(model_path);
    if (analyze->parsed()) {
      rotkit::AnalyzeOptions opts;
      opts.horizon = std::max(horizon, 1);
      opts.qmax = qmax;
      opts.seed = seed;
      emit(rotkit::analyze_report(model, opts), report.value_or("json"));
      return 0;
    }
    if (periods->parsed()) {
      auto [p, q] = parse_fraction(rho);
      rotkit::PeriodSearchOptions opts;
      opts.budget = effective_budget(budget);
      rotkit::PeriodResult res = rotkit::periods_for_rotation(model.map, p, q, n_max, opts);
      if (report.value_or("json") == "csv") {
        std::cout << rotkit::periods_csv(model, res);
      } else {
        emit(rotkit::periods_report(model, res, opts.budget), report.value_or("json"));
      }
      if (!res.complete) {
        std::cerr << "BudgetExceeded: loop search stopped after " << res.expansions
                  << " expansions; reported periods are a verified subset\n";
        return kBudgetExceeded;
      }
      return 0;
    }
    if (orbit->parsed()) {
      rotkit::OrbitOptions opts;
      opts.horizon = steps.value_or(horizon);
      rotkit::Point start = rotkit::parse_point_spec(model, point_spec);
      rotkit::OrbitStats st = rotkit::rotation_estimate(model.map, start, opts);
      std::string format = report.value_or("csv");
      if (format == "csv") {
        std::cout << rotkit::orbit_csv(model, st);
      } else {
        emit(rotkit::orbit_report(model, st), format);
      }
      return 0;
    }
    if (dot->parsed()) {
      std::cout << rotkit::markov_graph_dot(rotkit::build_markov_graph(model.map));
      return 0;
    }
  } catch (const rotkit::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == rotkit::ErrorKind::BudgetExceeded ? kBudgetExceeded : kInputError;
  }
  return 1;
}
