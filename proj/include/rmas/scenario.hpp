#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rmas/graph.hpp"
#include "rmas/plant.hpp"
#include "rmas/rescue.hpp"

namespace rmas {

/// Either explicit modes (kind "inline") or a preferential-attachment overlay
/// whose edges are split at random into `mode_count` modes (kind "preferential").
struct NetworkSpec {
  std::string kind = "inline";
  int node_count = 0;
  std::vector<std::vector<Edge>> modes;
  std::vector<ScheduleEntry> schedule;  // used when dwell <= 0
  double dwell = 0.0;                   // > 0: cycle the modes periodically
  // preferential generator
  int r = 2;
  int max_degree = 0;
  int mode_count = 2;
  std::uint64_t seed = 0;

  bool operator==(const NetworkSpec&) const = default;
};

struct InitialSpec {
  bool random = true;
  std::uint64_t seed = 0;
  double p_low = -5.0;
  double p_high = 5.0;
  double v_low = 0.0;
  double v_high = 0.0;
  std::vector<double> p;
  std::vector<double> v;

  bool operator==(const InitialSpec&) const = default;
};

struct IntegratorSpec {
  double step = 1e-3;
  double horizon = 30.0;
  int record_every = 10;

  bool operator==(const IntegratorSpec&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  NetworkSpec network;
  Gains gains{1.0, 3.0};
  InitialSpec initial;
  std::vector<DeceptionAttack> attacks;
  std::vector<int> malicious;  // ground truth for scoring; defaults to the attack agents
  DoSSchedule dos;
  DetectorSettings detector;
  IntegratorSpec integrator;
  DPMSRConfig dpmsr;
  double pe_window = 1.0;
  std::string output_dir = "out";

  bool operator==(const ScenarioConfig&) const = default;
};

SwitchingNetwork resolve_network(const ScenarioConfig& cfg);
SystemState resolve_initial(const ScenarioConfig& cfg);
SimulationSetup build_setup(const ScenarioConfig& cfg);
std::set<int> malicious_set(const ScenarioConfig& cfg);

std::string serialize_config(const ScenarioConfig& cfg);
/// Throws Parse naming the offending field.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// 8-node 3-robust overlay with two alternating 0.5 s modes, ramp attackers
/// {4, 5}, random DoS over [0, 10] s and the constant threshold 0.95.
ScenarioConfig generate_example1(std::uint64_t seed);
Graph example1_overlay();

/// 84-node 2-robust preferential-attachment overlay (degree <= 9), nine
/// malicious agents forming a 1-local set, exponential threshold 10 e^{-t} + 0.95.
ScenarioConfig generate_example2(std::uint64_t seed);

/// Every cooperative node has at most F malicious 1-hop neighbors in g.
bool is_f_local(const Graph& g, const std::set<int>& malicious, int F);

}  // namespace rmas
