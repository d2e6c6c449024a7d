#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "modleach/engine.hpp"

namespace modleach {

class InsufficientReplicates : public std::runtime_error {
 public:
  explicit InsufficientReplicates(std::size_t n)
      : std::runtime_error("confidence interval needs at least 2 replicates, got " +
                           std::to_string(n)) {}
};

struct ReplicateStats {
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  // Absent when n == 1.
  std::optional<double> std;
  std::optional<double> ci95_halfwidth;

  double ci_lo() const { return mean - ci95_halfwidth.value_or(0.0); }
  double ci_hi() const { return mean + ci95_halfwidth.value_or(0.0); }
};

// Two-sided 95% Student-t critical value t(0.975, dof).
double t_critical_95(std::size_t dof);

// Mean, sample std (n - 1) and t-based 95% halfwidth. Throws
// InsufficientReplicates when require_ci is set and n < 2, and
// std::invalid_argument on an empty sample.
ReplicateStats aggregate(std::span<const double> values, bool require_ci = true,
                         std::string metric = {});

// Column-oriented per-round series of one run.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// The exported RoundRecord columns, in CSV order (round excluded).
const std::vector<std::string>& trace_metric_columns();

TraceTable to_table(std::span<const RoundRecord> trace);

// Extends a trace past network death: rate columns (ch_count, retained_ch,
// control_j) pad with 0, everything else holds its final value.
TraceTable pad_table(const TraceTable& table, std::size_t horizon);

struct AggregateRow {
  int round = 0;
  std::vector<ReplicateStats> metrics;  // one per column
};

// Pads every trace to the longest horizon and aggregates each round and
// metric across traces. Throws std::invalid_argument if the column sets differ.
std::vector<AggregateRow> aggregate_traces(std::span<const TraceTable> traces, bool require_ci = true);

}  // namespace modleach
