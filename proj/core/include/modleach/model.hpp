#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modleach/rng.hpp"

namespace modleach {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

enum class Role { Member, ClusterHead };

struct NodeState {
  NodeId id = 0;
  Point pos;
  double energy_j = 0.0;
  bool alive = true;
  Role role = Role::Member;
  // Member of the current election pool (LEACH set G).
  bool eligible = true;
  std::optional<NodeId> ch_id;
  // Set to ceil(1/p) on election; ticks down each later round, rejoining G at 0.
  int rounds_as_ch_remaining_block = 0;
  std::optional<double> last_sensed;
  std::optional<double> last_transmitted;
  std::optional<double> energy_spent_last_ch_round_j;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

struct FieldConfig {
  double width_m = 100.0;
  double height_m = 100.0;
  int node_count = 100;
  Point bs_pos{50.0, 50.0};
  double initial_energy_j = 0.5;
  int max_rounds = 50000;
  std::uint64_t seed = 1;
};

struct RadioModel {
  double e_elec_j_per_bit = 50e-9;
  double e_fs_j_per_bit_m2 = 10e-12;
  double e_mp_j_per_bit_m4 = 0.0013e-12;
  double e_da_j_per_bit_per_signal = 5e-9;
  double intra_cluster_divisor = 10.0;
};

enum class Variant { Leach, ModLeach, ModLeachHT, ModLeachST };

inline constexpr Variant kAllVariants[] = {Variant::Leach, Variant::ModLeach,
                                           Variant::ModLeachHT, Variant::ModLeachST};

std::string to_string(Variant v);
// Accepts "leach", "modleach", "modleach_ht", "modleachht", ... (case-insensitive).
std::optional<Variant> parse_variant(std::string_view text);

// Adaptive keeps a head while its residual energy covers what it spent in its
// previous CH round; Fixed keeps it while it holds at least threshold_j.
struct RetentionMode {
  enum class Kind { Adaptive, Fixed };
  Kind kind = Kind::Fixed;
  double threshold_j = 0.45;  // used by Fixed only

  static RetentionMode adaptive() { return {Kind::Adaptive, 0.0}; }
  static RetentionMode fixed(double joules) { return {Kind::Fixed, joules}; }

  friend bool operator==(const RetentionMode&, const RetentionMode&) = default;
};

std::string to_string(const RetentionMode& mode);
// "adaptive" or "fixed:<joules>" ("fixed:inf" allowed).
std::optional<RetentionMode> parse_retention(std::string_view text);

struct ProtocolConfig {
  Variant variant = Variant::ModLeach;
  double p_ch = 0.1;
  RetentionMode retention_mode;
  int data_packet_bits = 4000;
  int control_packet_bits = 100;
  double hard_threshold = 50.0;
  double soft_threshold = 2.0;
  // Intra-cluster traffic at the LOW amplification level. Unset means the
  // variant default: off for LEACH, on for the MODLEACH family.
  std::optional<bool> dual_power;

  bool uses_dual_power() const { return dual_power.value_or(variant != Variant::Leach); }
  bool uses_retention() const { return variant != Variant::Leach; }
};

struct SensingConfig {
  double min_value = 0.0;
  double max_value = 100.0;
  double step_sigma = 5.0;
  // Only the uniform random walk is modelled.
  std::string distribution = "uniform_walk";
};

struct SimConfig {
  FieldConfig field;
  RadioModel radio;
  ProtocolConfig protocol;
  SensingConfig sensing;
};

struct InvalidParameter {
  std::string name;
  std::string reason;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<InvalidParameter> violations);
  const std::vector<InvalidParameter>& violations() const { return violations_; }

 private:
  std::vector<InvalidParameter> violations_;
};

// Every violated invariant, in declaration order. Empty means valid.
std::vector<InvalidParameter> check_config(const SimConfig& config);

// Returns the configuration unchanged or throws ConfigError with the full list.
SimConfig validate_config(SimConfig config);

// Positions are i.i.d. uniform over the field; depends only on (field, seed).
std::vector<NodeState> deploy_nodes(const FieldConfig& field, Rng& rng);
std::vector<NodeState> deploy_nodes(const FieldConfig& field);

}  // namespace modleach
