// aft-sim: run, sweep and qualify from the command line.
//
// Exit codes: 0 ok, 1 other failure (I/O, usage), 2 validation, 3 parse.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aft/error.hpp"
#include "aft/harness.hpp"
#include "aft/redundancy.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;

aft::Scenario load(const std::string& path, std::optional<std::uint64_t> seed_flag) {
  auto src = aft::load_scenario(path);
  std::optional<std::uint64_t> file_seed;
  if (src.has_seed) file_seed = src.scenario.seed;
  src.scenario.seed = aft::resolve_seed(seed_flag, file_seed, std::getenv("AFT_SIM_SEED"));
  return src.scenario;
}

void print_metrics(std::ostream& out, const aft::Metrics& m) {
  out << "requests            " << m.requests << '\n'
      << "commit_rate         " << aft::format_real(m.commit_rate) << '\n'
      << "mean_abs_error      " << aft::format_real(m.mean_abs_error) << '\n'
      << "max_abs_error       " << aft::format_real(m.max_abs_error) << '\n'
      << "messages_sent       " << m.messages_sent << '\n'
      << "messages_delivered  " << m.messages_delivered << '\n'
      << "messages_dropped    " << m.messages_dropped << '\n'
      << "replication_factor  " << m.replication_factor << '\n'
      << "detection_precision " << aft::format_real(m.detection_precision) << '\n'
      << "detection_recall    " << aft::format_real(m.detection_recall) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto piece = text.substr(start, comma - start);
    if (piece.find_first_not_of(" \t") != std::string::npos) {
      try {
        out.push_back(aft::parse_real(piece));
      } catch (const aft::DomainError& e) {
        throw aft::ParseError(1, start + 1, std::string("--values: ") + e.what());
      }
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator for artificially redundant replicated services"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::uint64_t> seed;
  std::string csv_path;
  auto* run = app.add_subcommand("run", "Run a scenario and print its metrics");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--csv", csv_path, "Write per-request CSV here ('-' for stdout)");
  run->add_option("--seed", seed, "Override the scenario seed");

  std::string axis;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per axis value");
  sweep->add_option("file", file, "Scenario file")->required();
  sweep->add_option("--axis", axis, "epsilon, alpha, drop_prob or f")->required();
  sweep->add_option("--values", values, "Comma-separated axis values")->required();
  sweep->add_option("--seed", seed, "Override the scenario seed");

  std::string samples_path;
  std::string transform_text;
  std::string space_text = "absolute";
  double alpha = 1.0;
  double epsilon = 0.0;
  double step = 0.01;
  auto* qualify = app.add_subcommand("qualify", "Certify a transform against paired samples");
  qualify->add_option("--samples", samples_path, "CSV with an x,y header")->required();
  qualify->add_option("--transform", transform_text, "e.g. affine(5/9, -160/9)")->required();
  qualify->add_option("--alpha", alpha, "Target certainty")->required();
  qualify->add_option("--epsilon", epsilon, "Largest acceptable accuracy bound")->required();
  qualify->add_option("--step", step, "Accuracy grid step");
  qualify->add_option("--space", space_text, "absolute, euclidean or discrete");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitOther;
  }

  try {
    if (*run) {
      const auto scenario = load(file, seed);
      const auto report = aft::run_scenario(scenario);
      if (!csv_path.empty()) write_text(csv_path, report.csv);
      if (csv_path != "-") print_metrics(std::cout, report.metrics());
    } else if (*sweep) {
      const auto scenario = load(file, seed);
      const auto a = aft::parse_sweep_axis(axis);
      const auto rows = aft::sweep(scenario, a, parse_values(values));
      std::cout << aft::format_sweep(a, rows);
    } else if (*qualify) {
      std::ifstream in(samples_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + samples_path);
      const auto samples = aft::PairedSamples::from_csv(in);
      aft::TransformSpec transform;
      aft::MetricSpace space;
      try {
        transform = aft::parse_transform(transform_text);
        space = aft::parse_metric_space(space_text);
      } catch (const aft::DomainError& e) {
        throw aft::ParseError(1, 1, e.what());
      }
      const auto q = aft::qualify_artira(samples, transform, alpha, epsilon, space, step);
      if (const auto* t = std::get_if<aft::ArtiraTriple>(&q)) {
        std::cout << "qualified " << aft::to_string(t->model) << " alpha "
                  << aft::format_real(t->alpha) << " epsilon " << aft::format_real(t->epsilon)
                  << '\n';
      } else {
        const auto& r = std::get<aft::Rejection>(q);
        std::cout << "rejected best_alpha " << aft::format_real(r.best_alpha) << " at epsilon "
                  << aft::format_real(r.best_epsilon) << '\n';
      }
    }
  } catch (const aft::ValidationError& e) {
    std::cerr << "invalid scenario:\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
    return kExitValidation;
  } catch (const aft::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return 0;
}
