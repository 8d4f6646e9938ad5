#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aft/scenario.hpp"
#include "aft/simnet.hpp"

namespace aft {

/// A parsed scenario file. `has_seed` records whether the file set `seed`,
/// which matters when resolving the seed against flags and the environment.
struct ScenarioSource {
  Scenario scenario;
  bool has_seed = false;
};

/// Parses and validates scenario text.
///
///   name = par_exact
///   seed = 7
///   f = 1
///   workload = write(1.5), read
///
///   [node.0]
///   roles = proposer, acceptor, learner
///
/// Unknown keys, duplicate keys and malformed values are ParseErrors carrying
/// the 1-based line and column; a well-formed but inconsistent scenario is a
/// ValidationError.
ScenarioSource read_scenario(std::string_view text);
Scenario parse_scenario(std::string_view text);

/// Reads a file; I/O failures are reported as ParseError at line 0.
ScenarioSource load_scenario(const std::filesystem::path& path);

/// Text that parse_scenario reads back to an equal Scenario.
std::string emit_scenario(const Scenario& scenario);

std::string format_roles(RoleSet roles);
RoleSet parse_roles(std::string_view text);

/// Seed precedence: explicit flag, then the file, then AFT_SIM_SEED, then 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> file,
                           const char* env);

inline constexpr std::string_view kCsvHeader =
    "request_index,kind,committed,learned_value,reference_value,abs_error,match_size,"
    "aggregate_alpha,messages";

/// Per-request CSV, header included, one row per request.
std::string format_csv(const Scenario& scenario, const std::vector<RequestRecord>& requests);

struct ScenarioReport {
  RunResult result;
  std::string csv;
  const Metrics& metrics() const noexcept { return result.metrics; }
};

ScenarioReport run_scenario(const Scenario& scenario);

enum class SweepAxis { Epsilon, Alpha, DropProb, F };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);  // throws InvalidAxis

/// `base` with one axis set to `value`. Sweeping f drops explicit n and q so
/// they follow the fault model, and resizes the node list by cloning the last
/// node without its faults (or truncating).
Scenario with_axis(const Scenario& base, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  Metrics metrics;
};

/// One row per value, all at the base seed. Rows run concurrently and come
/// back in input order.
std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values);

std::string format_sweep(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace aft
