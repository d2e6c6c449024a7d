#pragma once

#include "modleach/model.hpp"

namespace modleach {

struct Reading {
  NodeId node = 0;
  int round = 0;
  double value = 0.0;
};

// Bounded-step random walk: the first reading is uniform over
// [min_value, max_value], later ones add a uniform step in
// [-step_sigma, +step_sigma] to node.last_sensed. Does not modify the node.
Reading sense(const NodeState& node, int round, const SensingConfig& cfg, Rng& rng);

enum class GateDecision { Transmit, Suppress };

// Pure threshold decision. LEACH and MODLEACH always transmit (proactive);
// HT needs value >= hard_threshold; ST additionally needs a change of at
// least soft_threshold from the last transmitted value.
GateDecision gate(Variant variant, const Reading& reading, const NodeState& node,
                  const ProtocolConfig& proto);

// gate() plus the soft-threshold memory update on Transmit.
GateDecision apply_gate(const Reading& reading, NodeState& node, const ProtocolConfig& proto);

}  // namespace modleach
