#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "modleach/election.hpp"
#include "modleach/model.hpp"
#include "modleach/sensing.hpp"

namespace modleach {

enum class Cost : std::size_t { ControlTx, ControlRx, DataTx, DataRx, Aggregation, BsTx };
inline constexpr std::size_t kCostCategories = 6;

// Joules actually withdrawn from nodes, per category.
struct EnergyLedger {
  std::array<double, kCostCategories> joules{};

  double operator[](Cost c) const { return joules[static_cast<std::size_t>(c)]; }
  double total() const;
  double control() const { return (*this)[Cost::ControlTx] + (*this)[Cost::ControlRx]; }
};

// Withdraws energy from nodes, never below zero, and attributes every joule
// taken to exactly one category. A node that hits zero keeps acting until
// the round ends.
class EnergyBook {
 public:
  explicit EnergyBook(std::size_t node_count) : spent_round_(node_count, 0.0) {}

  double debit(NodeState& node, Cost category, double joules);
  void begin_round();

  double spent_this_round(NodeId id) const { return spent_round_[id]; }
  const EnergyLedger& cumulative() const { return cumulative_; }
  const EnergyLedger& this_round() const { return round_; }

 private:
  std::vector<double> spent_round_;
  EnergyLedger cumulative_;
  EnergyLedger round_;
};

struct TrafficTally {
  std::int64_t packets_to_ch = 0;
  std::int64_t packets_to_bs = 0;
};

// One data-gathering frame. Members that pass their gate send one report to
// their head; each head with at least one signal (reports plus its own passing
// reading) fuses them and sends one packet to the base station. `readings` is
// indexed by node id; nodes without a reading stay silent.
TrafficTally run_steady_state(const ClusterAssignment& assignment, std::span<NodeState> nodes,
                              std::span<const std::optional<Reading>> readings,
                              const SimConfig& config, EnergyBook& book);

struct RoundRecord {
  int round = 0;  // 1-based
  int alive_count = 0;
  int dead_count = 0;
  int ch_count = 0;
  int retained_ch_count = 0;
  std::int64_t packets_to_bs_cum = 0;
  std::int64_t packets_to_ch_cum = 0;
  double total_residual_energy_j = 0.0;
  double control_energy_j_this_round = 0.0;
  EnergyLedger spent_cum;  // not exported to CSV
};

struct RunSummary {
  // Round numbers are 1-based; censored milestones report max_rounds.
  int first_dead_round = 0;
  int half_dead_round = 0;
  int last_dead_round = 0;
  bool censored = false;
  std::int64_t total_packets_to_bs = 0;
  std::int64_t total_packets_to_ch = 0;
  int rounds_simulated = 0;
  double initial_energy_j = 0.0;
  std::vector<RoundRecord> trace;

  // Mean ch_count over simulated rounds.
  double mean_ch_count() const;
};

class Simulation {
 public:
  explicit Simulation(SimConfig config);
  // Uses the given deployment instead of drawing one.
  Simulation(SimConfig config, std::vector<NodeState> nodes);

  // Sense, select heads, form clusters, deliver data, retire the dead.
  RoundRecord step_round();

  bool finished() const;
  int rounds_done() const { return round_; }
  int alive_count() const;

  const SimConfig& config() const { return config_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const ClusterAssignment& assignment() const { return assignment_; }
  const EnergyBook& book() const { return book_; }
  double initial_energy_j() const { return initial_energy_j_; }

 private:
  SimConfig config_;
  std::vector<NodeState> nodes_;
  Rng election_rng_;
  std::vector<Rng> sensing_rngs_;
  ClusterAssignment assignment_;
  bool has_assignment_ = false;
  EnergyBook book_;
  int round_ = 0;
  TrafficTally totals_;
  double initial_energy_j_ = 0.0;
};

// Steps until every node is dead or max_rounds is reached.
RunSummary run(const SimConfig& config);

}  // namespace modleach
