#include "modleach/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace modleach {

using nlohmann::json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<InvalidParameter>& errors) : errors_(errors) {}

  // Rejects keys not in `known`.
  void check_keys(const json& obj, const std::string& section,
                  std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || item.key() == k;
      if (!ok) errors_.push_back({section + "." + item.key(), "unknown key"});
    }
  }

  template <typename T>
  void number(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) return fail(key, "expected a number");
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return fail(key, "expected an integer");
      out = v.get<T>();
    } else {
      out = v.get<T>();
    }
  }

  void threshold(const json& obj, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (v.is_string() && v.get<std::string>() == "-inf") {
      out = -std::numeric_limits<double>::infinity();
    } else if (v.is_number()) {
      out = v.get<double>();
    } else {
      fail(key, "expected a number or \"-inf\"");
    }
  }

  void fail(const char* key, const char* reason) { errors_.push_back({key, reason}); }

 private:
  std::vector<InvalidParameter>& errors_;
};

}  // namespace

SimConfig config_from_json(const std::string& text, const SimConfig& base) {
  SimConfig cfg = base;
  std::vector<InvalidParameter> errors;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<InvalidParameter>{{"json", e.what()}});
  }
  if (!doc.is_object()) throw ConfigError(std::vector<InvalidParameter>{{"json", "top level must be an object"}});

  Reader rd(errors);
  rd.check_keys(doc, "config", {"field", "radio", "protocol", "sensing"});

  auto section = [&](const char* name) -> const json* {
    if (!doc.contains(name)) return nullptr;
    if (!doc.at(name).is_object()) {
      errors.push_back({name, "expected an object"});
      return nullptr;
    }
    return &doc.at(name);
  };

  if (const json* f = section("field")) {
    rd.check_keys(*f, "field", {"width_m", "height_m", "node_count", "bs_pos", "initial_energy_j",
                                "max_rounds", "seed"});
    rd.number(*f, "width_m", cfg.field.width_m);
    rd.number(*f, "height_m", cfg.field.height_m);
    rd.number(*f, "node_count", cfg.field.node_count);
    rd.number(*f, "initial_energy_j", cfg.field.initial_energy_j);
    rd.number(*f, "max_rounds", cfg.field.max_rounds);
    rd.number(*f, "seed", cfg.field.seed);
    if (f->contains("bs_pos")) {
      const json& bs = f->at("bs_pos");
      if (bs.is_array() && bs.size() == 2 && bs[0].is_number() && bs[1].is_number()) {
        cfg.field.bs_pos = {bs[0].get<double>(), bs[1].get<double>()};
      } else {
        errors.push_back({"bs_pos", "expected [x, y]"});
      }
    }
  }

  if (const json* r = section("radio")) {
    rd.check_keys(*r, "radio", {"e_elec_j_per_bit", "e_fs_j_per_bit_m2", "e_mp_j_per_bit_m4",
                                "e_da_j_per_bit_per_signal", "intra_cluster_divisor"});
    rd.number(*r, "e_elec_j_per_bit", cfg.radio.e_elec_j_per_bit);
    rd.number(*r, "e_fs_j_per_bit_m2", cfg.radio.e_fs_j_per_bit_m2);
    rd.number(*r, "e_mp_j_per_bit_m4", cfg.radio.e_mp_j_per_bit_m4);
    rd.number(*r, "e_da_j_per_bit_per_signal", cfg.radio.e_da_j_per_bit_per_signal);
    rd.number(*r, "intra_cluster_divisor", cfg.radio.intra_cluster_divisor);
  }

  if (const json* p = section("protocol")) {
    rd.check_keys(*p, "protocol", {"variant", "p_ch", "retention_mode", "data_packet_bits",
                                   "control_packet_bits", "hard_threshold", "soft_threshold",
                                   "dual_power"});
    if (p->contains("variant")) {
      const json& v = p->at("variant");
      auto parsed = v.is_string() ? parse_variant(v.get<std::string>()) : std::nullopt;
      if (parsed) {
        cfg.protocol.variant = *parsed;
      } else {
        errors.push_back({"variant", "expected leach, modleach, modleach_ht or modleach_st"});
      }
    }
    rd.number(*p, "p_ch", cfg.protocol.p_ch);
    if (p->contains("retention_mode")) {
      const json& v = p->at("retention_mode");
      auto parsed = v.is_string() ? parse_retention(v.get<std::string>()) : std::nullopt;
      if (parsed) {
        cfg.protocol.retention_mode = *parsed;
      } else {
        errors.push_back({"retention_mode", "expected \"adaptive\" or \"fixed:<joules>\""});
      }
    }
    rd.number(*p, "data_packet_bits", cfg.protocol.data_packet_bits);
    rd.number(*p, "control_packet_bits", cfg.protocol.control_packet_bits);
    rd.threshold(*p, "hard_threshold", cfg.protocol.hard_threshold);
    rd.number(*p, "soft_threshold", cfg.protocol.soft_threshold);
    if (p->contains("dual_power")) {
      const json& v = p->at("dual_power");
      if (v.is_null()) {
        cfg.protocol.dual_power.reset();
      } else if (v.is_boolean()) {
        cfg.protocol.dual_power = v.get<bool>();
      } else {
        errors.push_back({"dual_power", "expected a boolean or null"});
      }
    }
  }

  if (const json* s = section("sensing")) {
    rd.check_keys(*s, "sensing", {"min_value", "max_value", "step_sigma", "distribution"});
    rd.number(*s, "min_value", cfg.sensing.min_value);
    rd.number(*s, "max_value", cfg.sensing.max_value);
    rd.number(*s, "step_sigma", cfg.sensing.step_sigma);
    if (s->contains("distribution")) {
      const json& v = s->at("distribution");
      if (v.is_string()) {
        cfg.sensing.distribution = v.get<std::string>();
      } else {
        errors.push_back({"distribution", "expected a string"});
      }
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::string config_to_json(const SimConfig& c) {
  json doc;
  doc["field"] = {{"width_m", c.field.width_m},
                  {"height_m", c.field.height_m},
                  {"node_count", c.field.node_count},
                  {"bs_pos", {c.field.bs_pos.x, c.field.bs_pos.y}},
                  {"initial_energy_j", c.field.initial_energy_j},
                  {"max_rounds", c.field.max_rounds},
                  {"seed", c.field.seed}};
  doc["radio"] = {{"e_elec_j_per_bit", c.radio.e_elec_j_per_bit},
                  {"e_fs_j_per_bit_m2", c.radio.e_fs_j_per_bit_m2},
                  {"e_mp_j_per_bit_m4", c.radio.e_mp_j_per_bit_m4},
                  {"e_da_j_per_bit_per_signal", c.radio.e_da_j_per_bit_per_signal},
                  {"intra_cluster_divisor", c.radio.intra_cluster_divisor}};
  json proto = {{"variant", to_string(c.protocol.variant)},
                {"p_ch", c.protocol.p_ch},
                {"retention_mode", to_string(c.protocol.retention_mode)},
                {"data_packet_bits", c.protocol.data_packet_bits},
                {"control_packet_bits", c.protocol.control_packet_bits},
                {"soft_threshold", c.protocol.soft_threshold}};
  if (std::isinf(c.protocol.hard_threshold)) {
    proto["hard_threshold"] = "-inf";
  } else {
    proto["hard_threshold"] = c.protocol.hard_threshold;
  }
  proto["dual_power"] = c.protocol.dual_power ? json(*c.protocol.dual_power) : json(nullptr);
  doc["protocol"] = proto;
  doc["sensing"] = {{"min_value", c.sensing.min_value},
                    {"max_value", c.sensing.max_value},
                    {"step_sigma", c.sensing.step_sigma},
                    {"distribution", c.sensing.distribution}};
  return doc.dump(2);
}

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace) {
  out << kTraceCsvHeader << '\n';
  for (const RoundRecord& r : trace) {
    out << r.round << ',' << r.alive_count << ',' << r.dead_count << ',' << r.ch_count << ','
        << r.retained_ch_count << ',' << r.packets_to_bs_cum << ',' << r.packets_to_ch_cum << ','
        << format_number(r.total_residual_energy_j) << ','
        << format_number(r.control_energy_j_this_round) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows) {
  out << kAggregateCsvHeader << '\n';
  for (const AggregateRow& row : rows) {
    for (const ReplicateStats& m : row.metrics) {
      out << row.round << ',' << m.metric << ',' << format_number(m.mean) << ',';
      if (m.ci95_halfwidth) out << format_number(m.ci_lo());
      out << ',';
      if (m.ci95_halfwidth) out << format_number(m.ci_hi());
      out << '\n';
    }
  }
}

}  // namespace modleach
