#include "modleach/engine.hpp"

#include <algorithm>
#include <numeric>

#include "modleach/radio.hpp"

namespace modleach {

double EnergyLedger::total() const { return std::accumulate(joules.begin(), joules.end(), 0.0); }

double EnergyBook::debit(NodeState& node, Cost category, double joules) {
  const double taken = std::min(joules, node.energy_j);
  if (taken <= 0.0) return 0.0;
  node.energy_j -= taken;
  if (node.energy_j < 0.0) node.energy_j = 0.0;
  spent_round_[node.id] += taken;
  cumulative_.joules[static_cast<std::size_t>(category)] += taken;
  round_.joules[static_cast<std::size_t>(category)] += taken;
  return taken;
}

void EnergyBook::begin_round() {
  std::fill(spent_round_.begin(), spent_round_.end(), 0.0);
  round_ = {};
}

TrafficTally run_steady_state(const ClusterAssignment& assignment, std::span<NodeState> nodes,
                              std::span<const std::optional<Reading>> readings,
                              const SimConfig& config, EnergyBook& book) {
  const RadioModel& radio = config.radio;
  const ProtocolConfig& proto = config.protocol;
  const double bits = proto.data_packet_bits;
  const PowerLevel intra = intra_cluster_level(proto);

  TrafficTally tally;
  std::vector<int> signals(nodes.size(), 0);
  for (const auto& [member_id, head_id] : assignment.members) {
    NodeState& member = nodes[member_id];
    const auto& reading = readings[member_id];
    if (!reading || apply_gate(*reading, member, proto) == GateDecision::Suppress) continue;
    NodeState& head = nodes[head_id];
    book.debit(member, Cost::DataTx, tx_cost(radio, bits, distance(member.pos, head.pos), intra));
    book.debit(head, Cost::DataRx, rx_cost(radio, bits));
    ++signals[head_id];
    ++tally.packets_to_ch;
  }
  for (NodeId head_id : assignment.heads) {
    NodeState& head = nodes[head_id];
    const auto& reading = readings[head_id];
    if (reading && apply_gate(*reading, head, proto) == GateDecision::Transmit) ++signals[head_id];
    if (signals[head_id] == 0) continue;
    book.debit(head, Cost::Aggregation, aggregation_cost(radio, bits, signals[head_id]));
    book.debit(head, Cost::BsTx,
               tx_cost(radio, bits, distance(head.pos, config.field.bs_pos), PowerLevel::High));
    ++tally.packets_to_bs;
  }
  return tally;
}

Simulation::Simulation(SimConfig config) : Simulation(config, deploy_nodes(config.field)) {}

Simulation::Simulation(SimConfig config, std::vector<NodeState> nodes)
    : config_(validate_config(std::move(config))),
      nodes_(std::move(nodes)),
      election_rng_(config_.field.seed, Stream::Election),
      book_(nodes_.size()) {
  sensing_rngs_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    sensing_rngs_.emplace_back(config_.field.seed, Stream::Sensing, i);
  }
  for (const NodeState& n : nodes_) initial_energy_j_ += n.energy_j;
}

int Simulation::alive_count() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& n) { return n.alive; }));
}

bool Simulation::finished() const {
  return round_ >= config_.field.max_rounds || alive_count() == 0;
}

RoundRecord Simulation::step_round() {
  const int r = round_;  // 0-based for the election threshold
  const ProtocolConfig& proto = config_.protocol;
  book_.begin_round();

  std::vector<std::optional<Reading>> readings(nodes_.size());
  for (NodeState& n : nodes_) {
    if (!n.alive) continue;
    readings[n.id] = sense(n, r + 1, config_.sensing, sensing_rngs_[n.id]);
    n.last_sensed = readings[n.id]->value;
  }

  std::vector<NodeId> retained;
  std::vector<bool> pool;
  if (proto.uses_retention() && has_assignment_) {
    retained = retain_heads(assignment_, nodes_, proto);
    if (!retained.empty()) {
      pool.assign(nodes_.size(), true);
      for (NodeId h : retained) pool[h] = false;
      for (const auto& [member, head] : assignment_.members) {
        if (std::binary_search(retained.begin(), retained.end(), head)) pool[member] = false;
      }
    }
  }
  // An all-false pool means every alive node stays with a retained head.
  std::vector<NodeId> heads = retained;
  const bool pool_empty = !pool.empty() && std::none_of(pool.begin(), pool.end(), [](bool b) { return b; });
  std::vector<NodeId> elected;
  if (pool_empty) {
    refresh_eligibility(nodes_);
  } else {
    // With some heads retained, new heads only fill the vacated slots.
    std::optional<std::size_t> vacancies;
    if (!retained.empty()) vacancies = assignment_.heads.size() - retained.size();
    elected = elect_heads(nodes_, proto, r, election_rng_, pool, vacancies);
  }
  heads.insert(heads.end(), elected.begin(), elected.end());

  Formation formation = form_clusters(heads, retained, has_assignment_ ? &assignment_ : nullptr,
                                      nodes_, config_.field, config_.radio, proto);
  assignment_ = std::move(formation.assignment);
  assignment_.round = r + 1;
  has_assignment_ = true;

  for (NodeState& n : nodes_) {
    if (!n.alive) continue;
    n.role = assignment_.is_head(n.id) ? Role::ClusterHead : Role::Member;
    n.ch_id.reset();
    if (auto it = assignment_.members.find(n.id); it != assignment_.members.end()) n.ch_id = it->second;
    const ControlDebit& c = formation.control[n.id];
    book_.debit(n, Cost::ControlTx, c.tx_j);
    book_.debit(n, Cost::ControlRx, c.rx_j);
  }

  const TrafficTally tally = run_steady_state(assignment_, nodes_, readings, config_, book_);
  totals_.packets_to_ch += tally.packets_to_ch;
  totals_.packets_to_bs += tally.packets_to_bs;

  for (NodeId h : assignment_.heads) {
    nodes_[h].energy_spent_last_ch_round_j = book_.spent_this_round(h);
  }
  for (NodeState& n : nodes_) {
    if (n.alive && n.energy_j <= 0.0) {
      n.energy_j = 0.0;
      n.alive = false;
      n.eligible = false;
      n.role = Role::Member;
      n.ch_id.reset();
    }
  }

  round_ = r + 1;
  RoundRecord rec;
  rec.round = round_;
  rec.alive_count = alive_count();
  rec.dead_count = static_cast<int>(nodes_.size()) - rec.alive_count;
  rec.ch_count = static_cast<int>(assignment_.heads.size());
  rec.retained_ch_count =
      static_cast<int>(std::count(assignment_.retained.begin(), assignment_.retained.end(), true));
  rec.packets_to_bs_cum = totals_.packets_to_bs;
  rec.packets_to_ch_cum = totals_.packets_to_ch;
  for (const NodeState& n : nodes_) rec.total_residual_energy_j += n.energy_j;
  rec.control_energy_j_this_round = book_.this_round().control();
  rec.spent_cum = book_.cumulative();
  return rec;
}

double RunSummary::mean_ch_count() const {
  if (trace.empty()) return 0.0;
  double sum = 0.0;
  for (const RoundRecord& r : trace) sum += r.ch_count;
  return sum / static_cast<double>(trace.size());
}

RunSummary run(const SimConfig& config) {
  Simulation sim(config);
  RunSummary s;
  s.initial_energy_j = sim.initial_energy_j();
  const int n = static_cast<int>(sim.nodes().size());
  const int half = (n + 1) / 2;
  std::optional<int> first, half_round, last;
  while (!sim.finished()) {
    RoundRecord rec = sim.step_round();
    if (!first && rec.dead_count >= 1) first = rec.round;
    if (!half_round && rec.dead_count >= half) half_round = rec.round;
    if (!last && rec.dead_count >= n) last = rec.round;
    s.trace.push_back(rec);
  }
  const int cap = sim.config().field.max_rounds;
  s.censored = !last.has_value();
  s.first_dead_round = first.value_or(cap);
  s.half_dead_round = half_round.value_or(cap);
  s.last_dead_round = last.value_or(cap);
  s.rounds_simulated = static_cast<int>(s.trace.size());
  if (!s.trace.empty()) {
    s.total_packets_to_bs = s.trace.back().packets_to_bs_cum;
    s.total_packets_to_ch = s.trace.back().packets_to_ch_cum;
  }
  return s;
}

}  // namespace modleach
