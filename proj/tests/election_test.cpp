#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "modleach/election.hpp"
#include "modleach/engine.hpp"

namespace modleach {
namespace {

std::vector<NodeState> line_of(std::initializer_list<Point> pts, double energy = 0.5) {
  std::vector<NodeState> nodes;
  NodeId id = 0;
  for (Point p : pts) {
    NodeState n;
    n.id = id++;
    n.pos = p;
    n.energy_j = energy;
    nodes.push_back(n);
  }
  return nodes;
}

TEST(Threshold, Examples) {
  EXPECT_NEAR(election_threshold(0.1, 0, true), 0.1, 1e-15);
  EXPECT_EQ(election_threshold(0.1, 9, true), 1.0);
  EXPECT_EQ(election_threshold(0.1, 19, true), 1.0);
  EXPECT_EQ(election_threshold(0.1, 4, false), 0.0);
  // p / (1 - p * 5) = 0.1 / 0.5
  EXPECT_NEAR(election_threshold(0.1, 5, true), 0.2, 1e-15);
  EXPECT_EQ(epoch_length(0.1), 10);
  EXPECT_EQ(epoch_length(0.3), 4);
  EXPECT_EQ(epoch_length(1.0), 1);
}

TEST(Threshold, NonDecreasingWithinEpochAndBounded) {
  for (double p : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    const int L = epoch_length(p);
    double prev = 0.0;
    for (int r = 0; r < 3 * L; ++r) {
      const double t = election_threshold(p, r, true);
      ASSERT_GE(t, p - 1e-15);
      ASSERT_LE(t, 1.0);
      if (r % L != 0) ASSERT_GE(t, prev);
      prev = t;
    }
  }
}

TEST(Elect, NoDrawBelowThresholdGivesNoHeads) {
  // Find a seed whose first draw misses a 1% threshold; the election must
  // then return nobody rather than forcing a head.
  ProtocolConfig proto;
  proto.p_ch = 0.01;
  std::uint64_t seed = 1;
  while (Rng(seed).uniform01() < 0.01) ++seed;
  auto nodes = line_of({{1, 1}});
  Rng rng(seed);
  EXPECT_TRUE(elect_heads(nodes, proto, 0, rng).empty());
  EXPECT_TRUE(nodes[0].eligible);
}

TEST(Elect, LastRoundOfEpochElectsEveryEligible) {
  ProtocolConfig proto;
  auto nodes = line_of({{1, 1}});
  Rng rng(3);
  EXPECT_EQ(elect_heads(nodes, proto, 9, rng), std::vector<NodeId>{0});
  EXPECT_FALSE(nodes[0].eligible);
  EXPECT_EQ(nodes[0].rounds_as_ch_remaining_block, 10);
}

TEST(Elect, MeanHeadCountNearExpected) {
  ProtocolConfig proto;
  FieldConfig field;
  auto nodes = deploy_nodes(field);
  Rng rng(11);
  double total = 0;
  const int rounds = 2000;
  for (int r = 0; r < rounds; ++r) total += static_cast<double>(elect_heads(nodes, proto, r, rng).size());
  const double mean = total / rounds;
  EXPECT_GT(mean, 8.0);
  EXPECT_LT(mean, 12.0);
}

TEST(Elect, NobodyRepeatsWithinAlignedEpoch) {
  ProtocolConfig proto;
  FieldConfig field;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    field.seed = seed;
    auto nodes = deploy_nodes(field);
    Rng rng(seed, Stream::Election);
    for (int epoch = 0; epoch < 20; ++epoch) {
      std::set<NodeId> seen;
      for (int phase = 0; phase < 10; ++phase) {
        for (NodeId h : elect_heads(nodes, proto, epoch * 10 + phase, rng)) {
          ASSERT_TRUE(seen.insert(h).second) << "node " << h << " twice in epoch " << epoch;
        }
      }
    }
  }
}

TEST(Elect, CapKeepsLowestDraws) {
  ProtocolConfig proto;
  auto nodes = line_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
  // Phase 9: every draw wins, so the cap alone decides.
  Rng probe(5);
  std::vector<std::pair<double, NodeId>> draws;
  for (NodeId i = 0; i < 5; ++i) draws.emplace_back(probe.uniform01(), i);
  std::sort(draws.begin(), draws.end());
  std::vector<NodeId> expect{draws[0].second, draws[1].second};
  std::sort(expect.begin(), expect.end());

  Rng rng(5);
  EXPECT_EQ(elect_heads(nodes, proto, 9, rng, {}, 2), expect);
  int ineligible = 0;
  for (const auto& n : nodes) ineligible += n.eligible ? 0 : 1;
  EXPECT_EQ(ineligible, 2);
}

TEST(Elect, PoolRestrictsCandidates) {
  ProtocolConfig proto;
  auto nodes = line_of({{0, 0}, {1, 0}, {2, 0}});
  Rng rng(1);
  EXPECT_EQ(elect_heads(nodes, proto, 9, rng, {false, true, false}), std::vector<NodeId>{1});
}

TEST(Eligibility, EpochRestartWhenNobodyEligible) {
  auto nodes = line_of({{0, 0}, {1, 0}});
  for (auto& n : nodes) {
    n.eligible = false;
    n.rounds_as_ch_remaining_block = 6;
  }
  refresh_eligibility(nodes);
  EXPECT_TRUE(nodes[0].eligible && nodes[1].eligible);
  nodes[0].eligible = false;
  nodes[0].rounds_as_ch_remaining_block = 2;
  refresh_eligibility(nodes);
  EXPECT_FALSE(nodes[0].eligible);
  refresh_eligibility(nodes);
  EXPECT_TRUE(nodes[0].eligible);
}

TEST(Retain, AdaptiveExamples) {
  ProtocolConfig proto;
  proto.retention_mode = RetentionMode::adaptive();
  auto nodes = line_of({{0, 0}, {5, 0}});
  ClusterAssignment prev;
  prev.heads = {0};
  prev.retained = {false};
  prev.members = {{1, 0}};
  nodes[0].energy_j = 0.30;
  nodes[0].energy_spent_last_ch_round_j = 0.01;
  EXPECT_EQ(retain_heads(prev, nodes, proto), std::vector<NodeId>{0});
  nodes[0].energy_j = 0.004;
  EXPECT_TRUE(retain_heads(prev, nodes, proto).empty());
  nodes[0].energy_j = 0.30;
  nodes[0].alive = false;
  EXPECT_TRUE(retain_heads(prev, nodes, proto).empty());
}

TEST(Retain, FixedThresholdMonotone) {
  FieldConfig field;
  auto nodes = deploy_nodes(field);
  Rng rng(2);
  for (auto& n : nodes) n.energy_j = rng.uniform(0.0, 0.5);
  ClusterAssignment prev;
  for (NodeId h = 0; h < 100; h += 3) {
    prev.heads.push_back(h);
    prev.retained.push_back(false);
  }
  ProtocolConfig proto;
  std::size_t prev_count = prev.heads.size() + 1;
  for (double j = 0.0; j <= 0.55; j += 0.01) {
    proto.retention_mode = RetentionMode::fixed(j);
    const auto kept = retain_heads(prev, nodes, proto);
    EXPECT_LE(kept.size(), prev_count);
    for (NodeId h : kept) EXPECT_GE(nodes[h].energy_j, j);
    prev_count = kept.size();
  }
  proto.retention_mode = RetentionMode::fixed(std::numeric_limits<double>::infinity());
  EXPECT_TRUE(retain_heads(prev, nodes, proto).empty());
}

TEST(Form, TieGoesToLowerId) {
  auto nodes = line_of({{0, 0}, {0, 0}, {0, 0}, {10, 0}, {0, 0}, {0, 0}, {0, 0}, {30, 0}, {20, 0}});
  FieldConfig field;
  ProtocolConfig proto;
  const NodeId heads[] = {3, 7};
  auto f = form_clusters(heads, {}, nullptr, nodes, field, RadioModel{}, proto);
  EXPECT_EQ(f.assignment.members.at(8), 3u);
  EXPECT_EQ(f.assignment.members.at(0), 3u);
}

TEST(Form, NoHeadsMeansNoClusters) {
  auto nodes = line_of({{0, 0}, {1, 1}});
  auto f = form_clusters({}, {}, nullptr, nodes, FieldConfig{}, RadioModel{}, ProtocolConfig{});
  EXPECT_TRUE(f.assignment.heads.empty());
  EXPECT_TRUE(f.assignment.members.empty());
  for (const auto& c : f.control) EXPECT_EQ(c.tx_j + c.rx_j, 0.0);
}

TEST(Form, ControlCostsOfAFreshCluster) {
  auto nodes = line_of({{0, 0}, {30, 40}});
  FieldConfig field;
  RadioModel radio;
  ProtocolConfig proto;  // LOW intra level
  const NodeId heads[] = {0};
  auto f = form_clusters(heads, {}, nullptr, nodes, field, radio, proto);
  const double k = 100;
  // member at 50 m: adv rx + join tx (LOW) + schedule rx
  const double member_tx = 50e-9 * k + 1e-12 * k * 2500;
  EXPECT_NEAR(f.control[1].tx_j, member_tx, 1e-18);
  EXPECT_NEAR(f.control[1].rx_j, 2 * 50e-9 * k, 1e-18);
  // head: adv to corner (100,100) at HIGH, one join rx, schedule tx over 50 m at LOW
  const double corner = std::sqrt(2.0) * 100.0;
  const double adv = 50e-9 * k + 0.0013e-12 * k * std::pow(corner, 4);
  EXPECT_NEAR(f.control[0].tx_j, adv + member_tx, 1e-15);
  EXPECT_NEAR(f.control[0].rx_j, 50e-9 * k, 1e-18);
}

TEST(Form, FullyRetainedPaysNothing) {
  auto nodes = line_of({{0, 0}, {3, 4}, {50, 50}, {52, 50}});
  ClusterAssignment prev;
  prev.heads = {0, 2};
  prev.retained = {false, false};
  prev.members = {{1, 0}, {3, 2}};
  const NodeId heads[] = {0, 2};
  auto f = form_clusters(heads, heads, &prev, nodes, FieldConfig{}, RadioModel{}, ProtocolConfig{});
  EXPECT_EQ(f.assignment.members, prev.members);
  for (const auto& c : f.control) EXPECT_EQ(c.tx_j + c.rx_j, 0.0);
  EXPECT_TRUE(f.assignment.is_retained(0));
}

TEST(Form, PartitionOverRandomRounds) {
  // Every alive node is exactly one of head or member, and members point at heads.
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    for (Variant v : kAllVariants) {
      SimConfig cfg;
      cfg.field.seed = seed;
      cfg.protocol.variant = v;
      Simulation sim(cfg);
      for (int r = 0; r < 1200 && !sim.finished(); ++r) {
        sim.step_round();
        const auto& a = sim.assignment();
        for (const NodeState& n : sim.nodes()) {
          if (!n.alive) continue;
          const bool head = a.is_head(n.id);
          const auto it = a.members.find(n.id);
          if (a.heads.empty()) {
            ASSERT_EQ(it, a.members.end());
            continue;
          }
          ASSERT_NE(head, it != a.members.end()) << "node " << n.id << " round " << r;
          if (!head) ASSERT_TRUE(a.is_head(it->second));
        }
      }
    }
  }
}

TEST(Degenerate, InfiniteRetentionThresholdMatchesLeachHeads) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig leach;
    leach.field.seed = seed;
    leach.protocol.variant = Variant::Leach;
    SimConfig mod = leach;
    mod.protocol.variant = Variant::ModLeach;
    mod.protocol.retention_mode = RetentionMode::fixed(std::numeric_limits<double>::infinity());
    mod.protocol.dual_power = false;
    Simulation a(leach), b(mod);
    while (!a.finished()) {
      ASSERT_FALSE(b.finished());
      const RoundRecord ra = a.step_round();
      const RoundRecord rb = b.step_round();
      ASSERT_EQ(a.assignment().heads, b.assignment().heads) << "round " << ra.round;
      ASSERT_EQ(rb.retained_ch_count, 0);
    }
    EXPECT_TRUE(b.finished());
  }
}

}  // namespace
}  // namespace modleach
