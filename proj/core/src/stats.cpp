#include "modleach/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace modleach {

double t_critical_95(std::size_t dof) {
  if (dof == 0) throw std::invalid_argument("t quantile needs dof >= 1");
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

ReplicateStats aggregate(std::span<const double> values, bool require_ci, std::string metric) {
  if (values.empty()) throw std::invalid_argument("aggregate of an empty sample");
  if (require_ci && values.size() < 2) throw InsufficientReplicates(values.size());

  ReplicateStats s;
  s.metric = std::move(metric);
  s.n = values.size();
  // Sorting makes the floating-point sum independent of input order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;

  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.std = sd;
  s.ci95_halfwidth = t_critical_95(s.n - 1) * sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

const std::vector<std::string>& trace_metric_columns() {
  static const std::vector<std::string> cols = {"alive",       "dead",        "ch_count",
                                                "retained_ch", "pkts_bs_cum", "pkts_ch_cum",
                                                "residual_j",  "control_j"};
  return cols;
}

TraceTable to_table(std::span<const RoundRecord> trace) {
  TraceTable t;
  t.columns = trace_metric_columns();
  t.rows.reserve(trace.size());
  for (const RoundRecord& r : trace) {
    t.rows.push_back({static_cast<double>(r.alive_count), static_cast<double>(r.dead_count),
                      static_cast<double>(r.ch_count), static_cast<double>(r.retained_ch_count),
                      static_cast<double>(r.packets_to_bs_cum), static_cast<double>(r.packets_to_ch_cum),
                      r.total_residual_energy_j, r.control_energy_j_this_round});
  }
  return t;
}

namespace {

bool pads_with_zero(const std::string& column) {
  return column == "ch_count" || column == "retained_ch" || column == "control_j";
}

}  // namespace

TraceTable pad_table(const TraceTable& table, std::size_t horizon) {
  TraceTable out = table;
  if (out.rows.empty() || out.rows.size() >= horizon) return out;
  std::vector<double> tail = out.rows.back();
  for (std::size_t c = 0; c < out.columns.size(); ++c) {
    if (pads_with_zero(out.columns[c])) tail[c] = 0.0;
  }
  out.rows.resize(horizon, tail);
  return out;
}

std::vector<AggregateRow> aggregate_traces(std::span<const TraceTable> traces, bool require_ci) {
  if (traces.empty()) return {};
  const auto& columns = traces.front().columns;
  std::size_t horizon = 0;
  for (const TraceTable& t : traces) {
    if (t.columns != columns) throw std::invalid_argument("traces have mismatched metric columns");
    horizon = std::max(horizon, t.rows.size());
  }
  std::vector<TraceTable> padded;
  padded.reserve(traces.size());
  for (const TraceTable& t : traces) padded.push_back(pad_table(t, horizon));

  std::vector<AggregateRow> out(horizon);
  std::vector<double> sample(traces.size());
  for (std::size_t r = 0; r < horizon; ++r) {
    out[r].round = static_cast<int>(r) + 1;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      for (std::size_t i = 0; i < padded.size(); ++i) sample[i] = padded[i].rows[r][c];
      out[r].metrics.push_back(aggregate(sample, require_ci, columns[c]));
    }
  }
  return out;
}

}  // namespace modleach
