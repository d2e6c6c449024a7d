#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "modleach/engine.hpp"
#include "modleach/stats.hpp"

namespace modleach::cli {

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 20;

  std::vector<std::uint64_t> seeds() const;
};

// "A..B" or a single "N".
std::optional<SeedRange> parse_seed_range(std::string_view text);

// One run per seed, results in seed order. `jobs` > 1 runs seeds on worker
// threads; results do not depend on it.
std::vector<RunSummary> run_replicates(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                       unsigned jobs = 1);

// Per-run scalar metrics reported in summary tables.
struct SummaryMetric {
  const char* name;
  double (*extract)(const RunSummary&);
};
const std::vector<SummaryMetric>& summary_metrics();

// One ReplicateStats per summary metric.
std::vector<ReplicateStats> summarize(const std::vector<RunSummary>& runs, bool require_ci);

std::vector<AggregateRow> aggregate_runs(const std::vector<RunSummary>& runs, bool require_ci);

// "mean ± halfwidth", or just the mean when the CI is undefined.
std::string format_stat(const ReplicateStats& s);

void print_summary_table(std::ostream& out, const std::string& title,
                         const std::vector<ReplicateStats>& stats);

struct VariantResult {
  Variant variant;
  std::vector<RunSummary> runs;
  std::vector<ReplicateStats> summary;
};

void print_comparison_table(std::ostream& out, const std::vector<VariantResult>& results);
void write_comparison_csv(std::ostream& out, const std::vector<VariantResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<std::uint64_t>& seeds,
                       const std::vector<RunSummary>& runs);

struct ChartSeries {
  std::string name;
  std::vector<double> y;  // x is the 1-based index
};

// Minimal SVG line chart: one polyline per series, axes with end labels.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<ChartSeries>& series);

// Mean curve of one aggregate column, e.g. "alive".
ChartSeries mean_curve(const std::string& name, const std::vector<AggregateRow>& rows,
                       const std::string& metric);

// Entry point of the modleach tool. Exit codes: 0 success, 1 I/O failure,
// 2 invalid configuration, usage, or too few replicates for a CI.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modleach::cli
