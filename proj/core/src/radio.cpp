#include "modleach/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace modleach {

Amplification amplification(const RadioModel& radio, PowerLevel level) {
  switch (level) {
    case PowerLevel::High:
      return {radio.e_fs_j_per_bit_m2, radio.e_mp_j_per_bit_m4};
    case PowerLevel::Low:
      return {radio.e_fs_j_per_bit_m2 / radio.intra_cluster_divisor,
              radio.e_mp_j_per_bit_m4 / radio.intra_cluster_divisor};
    case PowerLevel::InterCluster:
      break;
  }
  throw std::logic_error("inter-cluster power level is not implemented");
}

double crossover_distance(const RadioModel& radio, PowerLevel level) {
  const Amplification amp = amplification(radio, level);
  return std::sqrt(amp.e_fs / amp.e_mp);
}

double tx_cost(const RadioModel& radio, double bits, double distance_m, PowerLevel level) {
  const Amplification amp = amplification(radio, level);
  const double d2 = distance_m * distance_m;
  const double electronics = radio.e_elec_j_per_bit * bits;
  if (distance_m < crossover_distance(radio, level)) {
    return electronics + amp.e_fs * bits * d2;
  }
  return electronics + amp.e_mp * bits * d2 * d2;
}

double rx_cost(const RadioModel& radio, double bits) { return radio.e_elec_j_per_bit * bits; }

double aggregation_cost(const RadioModel& radio, double bits, int n_signals) {
  return radio.e_da_j_per_bit_per_signal * bits * n_signals;
}

}  // namespace modleach
