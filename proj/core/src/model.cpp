#include "modleach/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace modleach {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Rng::Rng(std::uint64_t seed, Stream stream, std::uint64_t index)
    : engine_([&] {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32)};
        return std::mt19937_64(seq);
      }()) {}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Leach:
      return "LEACH";
    case Variant::ModLeach:
      return "MODLEACH";
    case Variant::ModLeachHT:
      return "MODLEACH_HT";
    case Variant::ModLeachST:
      return "MODLEACH_ST";
  }
  return "?";
}

namespace {

std::string normalized(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::optional<Variant> parse_variant(std::string_view text) {
  const std::string key = normalized(text);
  for (Variant v : kAllVariants) {
    if (normalized(to_string(v)) == key) return v;
  }
  return std::nullopt;
}

std::string to_string(const RetentionMode& mode) {
  if (mode.kind == RetentionMode::Kind::Adaptive) return "adaptive";
  if (std::isinf(mode.threshold_j)) return mode.threshold_j > 0 ? "fixed:inf" : "fixed:-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, mode.threshold_j);
  return "fixed:" + std::string(buf, end);
}

std::optional<RetentionMode> parse_retention(std::string_view text) {
  if (text == "adaptive") return RetentionMode::adaptive();
  constexpr std::string_view prefix = "fixed:";
  if (!text.starts_with(prefix)) return std::nullopt;
  std::string_view value = text.substr(prefix.size());
  if (value == "inf" || value == "+inf") {
    return RetentionMode::fixed(std::numeric_limits<double>::infinity());
  }
  double joules = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), joules);
  if (ec != std::errc{} || ptr != value.data() + value.size()) return std::nullopt;
  return RetentionMode::fixed(joules);
}

namespace {

std::string describe(const std::vector<InvalidParameter>& violations) {
  std::string msg = "invalid configuration:";
  for (const auto& v : violations) msg += " " + v.name + " (" + v.reason + ");";
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<InvalidParameter> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

std::vector<InvalidParameter> check_config(const SimConfig& config) {
  std::vector<InvalidParameter> out;
  auto require = [&out](bool ok, const char* name, const char* reason) {
    if (!ok) out.push_back({name, reason});
  };
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };

  const FieldConfig& f = config.field;
  require(positive(f.width_m), "width_m", "must be > 0");
  require(positive(f.height_m), "height_m", "must be > 0");
  require(f.node_count >= 1, "node_count", "must be >= 1");
  require(std::isfinite(f.bs_pos.x) && std::isfinite(f.bs_pos.y), "bs_pos", "must be finite");
  require(positive(f.initial_energy_j), "initial_energy_j", "must be > 0");
  require(f.max_rounds >= 1, "max_rounds", "must be >= 1");

  const RadioModel& r = config.radio;
  require(positive(r.e_elec_j_per_bit), "e_elec_j_per_bit", "must be > 0");
  require(positive(r.e_fs_j_per_bit_m2), "e_fs_j_per_bit_m2", "must be > 0");
  require(positive(r.e_mp_j_per_bit_m4), "e_mp_j_per_bit_m4", "must be > 0");
  require(positive(r.e_da_j_per_bit_per_signal), "e_da_j_per_bit_per_signal", "must be > 0");
  require(std::isfinite(r.intra_cluster_divisor) && r.intra_cluster_divisor >= 1.0,
          "intra_cluster_divisor", "must be >= 1");

  const ProtocolConfig& p = config.protocol;
  require(std::isfinite(p.p_ch) && p.p_ch > 0.0 && p.p_ch <= 1.0, "p_ch", "must lie in (0, 1]");
  require(p.retention_mode.kind == RetentionMode::Kind::Adaptive ||
              !std::isnan(p.retention_mode.threshold_j),
          "retention_mode", "fixed threshold must not be NaN");
  require(p.data_packet_bits >= 1, "data_packet_bits", "must be >= 1");
  require(p.control_packet_bits >= 0, "control_packet_bits", "must be >= 0");
  // -inf is the always-transmit degenerate gate; +inf and NaN are rejected.
  require(!std::isnan(p.hard_threshold) && p.hard_threshold != std::numeric_limits<double>::infinity(),
          "hard_threshold", "must be finite or -inf");
  require(std::isfinite(p.soft_threshold) && p.soft_threshold >= 0.0, "soft_threshold",
          "must be >= 0");

  const SensingConfig& s = config.sensing;
  require(std::isfinite(s.min_value) && std::isfinite(s.max_value) && s.min_value < s.max_value,
          "sensing_range", "min_value must be < max_value");
  require(std::isfinite(s.step_sigma) && s.step_sigma >= 0.0, "step_sigma", "must be >= 0");
  require(s.distribution == "uniform_walk", "distribution", "only uniform_walk is supported");
  return out;
}

SimConfig validate_config(SimConfig config) {
  auto violations = check_config(config);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return config;
}

std::vector<NodeState> deploy_nodes(const FieldConfig& field, Rng& rng) {
  std::vector<NodeState> nodes;
  nodes.reserve(static_cast<std::size_t>(field.node_count));
  for (int i = 0; i < field.node_count; ++i) {
    NodeState n;
    n.id = static_cast<NodeId>(i);
    n.pos.x = rng.uniform(0.0, field.width_m);
    n.pos.y = rng.uniform(0.0, field.height_m);
    n.energy_j = field.initial_energy_j;
    nodes.push_back(n);
  }
  return nodes;
}

std::vector<NodeState> deploy_nodes(const FieldConfig& field) {
  Rng rng(field.seed, Stream::Deployment);
  return deploy_nodes(field, rng);
}

}  // namespace modleach
