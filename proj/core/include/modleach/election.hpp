#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "modleach/model.hpp"
#include "modleach/radio.hpp"

namespace modleach {

struct ClusterAssignment {
  int round = 0;
  std::vector<NodeId> heads;  // ascending
  std::map<NodeId, NodeId> members;  // member -> head
  std::vector<bool> retained;  // parallel to heads

  bool is_head(NodeId id) const;
  bool is_retained(NodeId id) const;
};

// ceil(1/p), the epoch length of the LEACH rotation.
int epoch_length(double p);

// LEACH threshold T(n) = p / (1 - p * (r mod 1/p)) for eligible nodes, 0 otherwise.
// Returns exactly 1 in the last round of each epoch.
double election_threshold(double p, int round, bool eligible);

// Start-of-round bookkeeping for set G: if no alive node is eligible the epoch
// restarts and every alive node rejoins; otherwise block counters tick down.
void refresh_eligibility(std::span<NodeState> nodes);

// Refreshes eligibility, then each alive eligible node in `pool` (all alive
// nodes when empty) becomes a head when a uniform draw falls below the
// threshold. Draws are consumed in ascending id order. With `max_heads`, only
// that many winners with the lowest draws are kept. Winners leave G for
// epoch_length(p) - 1 further rounds. Returns ascending ids.
std::vector<NodeId> elect_heads(std::span<NodeState> nodes, const ProtocolConfig& proto, int round,
                                Rng& rng, const std::vector<bool>& pool = {},
                                std::optional<std::size_t> max_heads = std::nullopt);

// Heads of `previous` that stay in office: alive and holding at least the
// retention threshold (their own last CH-round spend in Adaptive mode, the
// configured joules in Fixed mode).
std::vector<NodeId> retain_heads(const ClusterAssignment& previous, std::span<const NodeState> nodes,
                                 const ProtocolConfig& proto);

struct ControlDebit {
  double tx_j = 0.0;
  double rx_j = 0.0;
};

struct Formation {
  ClusterAssignment assignment;
  std::vector<ControlDebit> control;  // indexed by node id
};

// Attaches every alive non-head to the nearest head (ties: lower id), except
// that surviving members of retained heads stay where they are. Control cost
// covers only new heads and nodes that (re)join:
//   new head   advertisement at HIGH over the distance to the farthest field corner
//   joiner     receives the advertisement, sends a join, receives the schedule
//   head       receives one join per joiner, broadcasts a schedule over its radius
// A retained head with no joiners and its kept members pay nothing.
Formation form_clusters(std::span<const NodeId> heads, std::span<const NodeId> retained,
                        const ClusterAssignment* previous, std::span<const NodeState> nodes,
                        const FieldConfig& field, const RadioModel& radio,
                        const ProtocolConfig& proto);

// Amplification level for member-to-head and schedule traffic.
PowerLevel intra_cluster_level(const ProtocolConfig& proto);

}  // namespace modleach
