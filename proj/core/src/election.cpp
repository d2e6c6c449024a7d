#include "modleach/election.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modleach {

bool ClusterAssignment::is_head(NodeId id) const {
  return std::binary_search(heads.begin(), heads.end(), id);
}

bool ClusterAssignment::is_retained(NodeId id) const {
  auto it = std::lower_bound(heads.begin(), heads.end(), id);
  return it != heads.end() && *it == id && retained[static_cast<std::size_t>(it - heads.begin())];
}

int epoch_length(double p) {
  // 1/0.1 and friends can land a ulp above the integer.
  return static_cast<int>(std::ceil(1.0 / p - 1e-9));
}

double election_threshold(double p, int round, bool eligible) {
  if (!eligible) return 0.0;
  const int epoch = epoch_length(p);
  const int phase = round % epoch;
  if (phase == epoch - 1) return 1.0;
  const double t = p / (1.0 - p * phase);
  return std::clamp(t, 0.0, 1.0);
}

void refresh_eligibility(std::span<NodeState> nodes) {
  const bool any_eligible =
      std::any_of(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive && n.eligible; });
  for (NodeState& n : nodes) {
    if (!n.alive) continue;
    if (!any_eligible) {
      n.eligible = true;
      n.rounds_as_ch_remaining_block = 0;
    } else if (!n.eligible) {
      if (n.rounds_as_ch_remaining_block > 0) --n.rounds_as_ch_remaining_block;
      if (n.rounds_as_ch_remaining_block == 0) n.eligible = true;
    }
  }
}

std::vector<NodeId> elect_heads(std::span<NodeState> nodes, const ProtocolConfig& proto, int round,
                                Rng& rng, const std::vector<bool>& pool,
                                std::optional<std::size_t> max_heads) {
  refresh_eligibility(nodes);
  const double threshold = election_threshold(proto.p_ch, round, true);
  std::vector<std::pair<double, NodeId>> winners;
  for (const NodeState& n : nodes) {
    if (!n.alive || !n.eligible) continue;
    if (!pool.empty() && !pool[n.id]) continue;
    const double draw = rng.uniform01();
    if (draw < threshold) winners.emplace_back(draw, n.id);
  }
  if (max_heads && winners.size() > *max_heads) {
    // Keep the strongest draws; every candidate still consumed its draw.
    std::stable_sort(winners.begin(), winners.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    winners.resize(*max_heads);
  }
  const int epoch = epoch_length(proto.p_ch);
  std::vector<NodeId> heads;
  heads.reserve(winners.size());
  for (const auto& [draw, id] : winners) {
    nodes[id].eligible = false;
    nodes[id].rounds_as_ch_remaining_block = epoch;
    heads.push_back(id);
  }
  std::sort(heads.begin(), heads.end());
  return heads;
}

std::vector<NodeId> retain_heads(const ClusterAssignment& previous, std::span<const NodeState> nodes,
                                 const ProtocolConfig& proto) {
  std::vector<NodeId> kept;
  for (NodeId h : previous.heads) {
    const NodeState& n = nodes[h];
    if (!n.alive) continue;
    double threshold = proto.retention_mode.threshold_j;
    if (proto.retention_mode.kind == RetentionMode::Kind::Adaptive) {
      // Without a recorded tenure there is nothing to compare against.
      if (!n.energy_spent_last_ch_round_j) continue;
      threshold = *n.energy_spent_last_ch_round_j;
    }
    if (n.energy_j >= threshold) kept.push_back(h);
  }
  return kept;
}

PowerLevel intra_cluster_level(const ProtocolConfig& proto) {
  return proto.uses_dual_power() ? PowerLevel::Low : PowerLevel::High;
}

namespace {

double farthest_corner(Point p, const FieldConfig& field) {
  const Point corners[] = {{0.0, 0.0}, {field.width_m, 0.0}, {0.0, field.height_m},
                           {field.width_m, field.height_m}};
  double best = 0.0;
  for (Point c : corners) best = std::max(best, distance(p, c));
  return best;
}

}  // namespace

Formation form_clusters(std::span<const NodeId> heads, std::span<const NodeId> retained,
                        const ClusterAssignment* previous, std::span<const NodeState> nodes,
                        const FieldConfig& field, const RadioModel& radio,
                        const ProtocolConfig& proto) {
  Formation out;
  out.control.resize(nodes.size());
  ClusterAssignment& a = out.assignment;
  a.heads.assign(heads.begin(), heads.end());
  std::sort(a.heads.begin(), a.heads.end());
  a.heads.erase(std::unique(a.heads.begin(), a.heads.end()), a.heads.end());
  a.retained.resize(a.heads.size());
  for (std::size_t i = 0; i < a.heads.size(); ++i) {
    a.retained[i] = std::find(retained.begin(), retained.end(), a.heads[i]) != retained.end();
  }
  if (a.heads.empty()) return out;

  const double ctrl_bits = proto.control_packet_bits;
  const PowerLevel intra = intra_cluster_level(proto);

  std::vector<int> joiners(nodes.size(), 0);
  for (const NodeState& n : nodes) {
    if (!n.alive || a.is_head(n.id)) continue;
    if (previous != nullptr) {
      auto it = previous->members.find(n.id);
      if (it != previous->members.end() && a.is_retained(it->second)) {
        a.members[n.id] = it->second;
        continue;
      }
    }
    NodeId best = a.heads.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId h : a.heads) {
      const double d = distance(n.pos, nodes[h].pos);
      if (d < best_d) {  // strict: ties keep the lower id
        best_d = d;
        best = h;
      }
    }
    a.members[n.id] = best;
    ++joiners[best];
    ControlDebit& c = out.control[n.id];
    c.rx_j += rx_cost(radio, ctrl_bits);  // advertisement
    c.tx_j += tx_cost(radio, ctrl_bits, best_d, intra);  // join request
    c.rx_j += rx_cost(radio, ctrl_bits);  // TDMA schedule
  }

  std::vector<double> radius(nodes.size(), 0.0);
  for (const auto& [member, head] : a.members) {
    radius[head] = std::max(radius[head], distance(nodes[member].pos, nodes[head].pos));
  }
  for (std::size_t i = 0; i < a.heads.size(); ++i) {
    const NodeId h = a.heads[i];
    if (a.retained[i] && joiners[h] == 0) continue;
    ControlDebit& c = out.control[h];
    if (!a.retained[i]) c.tx_j += tx_cost(radio, ctrl_bits, farthest_corner(nodes[h].pos, field), PowerLevel::High);
    c.rx_j += joiners[h] * rx_cost(radio, ctrl_bits);
    c.tx_j += tx_cost(radio, ctrl_bits, radius[h], intra);
  }
  return out;
}

}  // namespace modleach
