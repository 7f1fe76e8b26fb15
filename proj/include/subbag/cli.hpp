#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subbag/aggregate.hpp"
#include "subbag/engine.hpp"
#include "subbag/inference.hpp"
#include "subbag/lasso.hpp"

namespace subbag {

// One bag of options for every subcommand; each command validates the slice
// it needs before touching any data.
struct RunConfig {
  Family family = Family::Linear;

  // Data source (fit-subsamples, fit).
  std::string csv_path;
  std::string response;
  std::vector<std::string> covariates;  // empty: all non-response columns
  bool intercept = false;
  bool indexed = false;  // indexed-on-disk storage instead of in-memory

  // Plan sizing: exactly one of delta/k and one of alpha/m.
  std::optional<double> delta;
  std::optional<std::uint64_t> k;
  std::optional<double> alpha;
  std::optional<std::uint64_t> m;

  std::uint64_t seed = 1;
  int threads = 1;
  double gamma = 1.0;
  int n_grid = 100;
  bool skip_failures = false;  // keep going past subsamples that fail to fit

  // Files.
  std::string summaries_out;
  std::vector<std::string> summaries_in;
  std::string report_out;
  std::optional<std::uint64_t> n_total;  // aggregate: row count behind the summaries

  // simulate.
  std::optional<std::uint64_t> sim_n;
  int reps = 200;
  bool with_baseline = false;
  bool full_grid = false;
  std::string metrics_out;
};

// Everything a fit report carries; built identically whether the summaries
// came from memory (fit) or from summary files (aggregate), so the two
// routes serialize byte-for-byte the same.
struct ReportBundle {
  Family family = Family::Linear;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  std::uint64_t master_seed = 0;
  double gamma = 1.0;
  bool intercept = false;
  std::vector<std::string> names;  // one per coordinate
  AggregatedQuadratic agg;
  LambdaPath path;
  std::optional<InferenceReport> inference;  // absent when m < 2 or nothing selected
  std::string inference_note;                // why it is absent
  std::vector<FitFailure> failures;
};

ReportBundle make_report(Family family, std::uint64_t n, std::uint64_t master_seed, double gamma,
                         int n_grid, bool intercept, std::vector<std::string> names,
                         std::vector<SubsampleSummary> summaries,
                         std::vector<FitFailure> failures = {},
                         const CoordinateDescentOptions& cd = {});

nlohmann::json report_json(const ReportBundle& report);
void print_report(std::ostream& out, const ReportBundle& report);

// Subcommands; they throw ConfigError / DataError / NumericalError, which
// the binary maps to exit codes 2 / 3 / 4.
void cmd_fit_subsamples(const RunConfig& cfg, std::ostream& out);
void cmd_aggregate(const RunConfig& cfg, std::ostream& out);
void cmd_fit(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& out);

}  // namespace subbag
