#include "modleach/sensing.hpp"

#include <cmath>

namespace modleach {

Reading sense(const NodeState& node, int round, const SensingConfig& cfg, Rng& rng) {
  Reading r{node.id, round, 0.0};
  if (!node.last_sensed) {
    r.value = rng.uniform(cfg.min_value, cfg.max_value);
  } else {
    r.value = *node.last_sensed + rng.uniform(-cfg.step_sigma, cfg.step_sigma);
  }
  return r;
}

GateDecision gate(Variant variant, const Reading& reading, const NodeState& node,
                  const ProtocolConfig& proto) {
  switch (variant) {
    case Variant::Leach:
    case Variant::ModLeach:
      return GateDecision::Transmit;
    case Variant::ModLeachHT:
      return reading.value >= proto.hard_threshold ? GateDecision::Transmit
                                                   : GateDecision::Suppress;
    case Variant::ModLeachST:
      if (reading.value < proto.hard_threshold) return GateDecision::Suppress;
      if (node.last_transmitted &&
          std::abs(reading.value - *node.last_transmitted) < proto.soft_threshold) {
        return GateDecision::Suppress;
      }
      return GateDecision::Transmit;
  }
  return GateDecision::Transmit;
}

GateDecision apply_gate(const Reading& reading, NodeState& node, const ProtocolConfig& proto) {
  const GateDecision d = gate(proto.variant, reading, node, proto);
  if (d == GateDecision::Transmit) node.last_transmitted = reading.value;
  return d;
}

}  // namespace modleach
