#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "modleach/engine.hpp"
#include "modleach/model.hpp"
#include "modleach/stats.hpp"

namespace modleach {

// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double value);

// JSON document with the sections "field", "radio", "protocol", "sensing".
// Missing keys keep `base` values; unknown keys and type mismatches are
// reported as InvalidParameter entries in a thrown ConfigError. The result is
// not validated.
SimConfig config_from_json(const std::string& text, const SimConfig& base = {});
std::string config_to_json(const SimConfig& config);

inline constexpr const char* kTraceCsvHeader =
    "round,alive,dead,ch_count,retained_ch,pkts_bs_cum,pkts_ch_cum,residual_j,control_j";
inline constexpr const char* kAggregateCsvHeader = "round,metric,mean,ci95_lo,ci95_hi";

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace);

// One line per (round, metric). CI bounds are left empty when undefined.
void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows);

}  // namespace modleach
