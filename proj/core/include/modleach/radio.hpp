#pragma once

#include "modleach/model.hpp"

namespace modleach {

// HIGH: cluster head to base station. LOW: intra-cluster, both amplification
// constants divided by RadioModel::intra_cluster_divisor. InterCluster is a
// reserved slot for CH-to-CH relaying and is rejected by every cost function.
enum class PowerLevel { High, Low, InterCluster };

struct Amplification {
  double e_fs;  // J/bit/m^2
  double e_mp;  // J/bit/m^4
};

Amplification amplification(const RadioModel& radio, PowerLevel level);

// d0 = sqrt(e_fs / e_mp). Identical for HIGH and LOW.
double crossover_distance(const RadioModel& radio, PowerLevel level);

// First-order radio model: electronics plus d^2 amplification below d0 and d^4
// at or above it.
double tx_cost(const RadioModel& radio, double bits, double distance_m, PowerLevel level);

double rx_cost(const RadioModel& radio, double bits);

double aggregation_cost(const RadioModel& radio, double bits, int n_signals);

}  // namespace modleach
