#pragma once

#include <set>
#include <vector>

#include "rmas/detect.hpp"
#include "rmas/plant.hpp"
#include "rmas/spectral.hpp"

namespace rmas {

struct DetectorSettings {
  ThresholdPolicy threshold;
  ReinitPolicy reinit = ReinitPolicy::VertexSet;
  ViewScope scope = ViewScope::TwoHop;
  int dwell = 1;                 // consecutive exceedances before isolating
  double w_budget = -1.0;        // reinit error budget; < 0 means 2 x max |v(0)|
  double pe_window = 1.0;        // T used for the analytic threshold constants
  double beta = 1.0;
  double lambda_x_fraction = 0.9;
  bool isolate = true;           // false: detect and log only
  int residual_record_every = 0; // 0 disables residual logging

  bool operator==(const DetectorSettings&) const = default;
};

struct IsolationEvent {
  double t = 0.0;
  int detector = 0;
  int isolated = 0;
  double residual = 0.0;
  double threshold = 0.0;
};

struct ResidualSample {
  double t = 0.0;
  int owner = 0;
  int neighbor = 0;
  double residual = 0.0;
  double threshold = 0.0;
  bool attacked = false;
};

struct RescueResult {
  SimulationTrace trace;
  std::vector<IsolationEvent> events;
  std::set<Edge> removed_edges;
  std::vector<ResidualSample> residuals;
  std::set<int> malicious;
  std::vector<int> cooperative;
  long exceedances = 0;           // samples with |r| > eps over cooperative 1-hop pairs
  long malicious_exceedances = 0; // same, restricted to malicious neighbors
  double max_ratio = 0.0;         // max |r| / eps over all monitored pairs
  long reinitializations = 0;
  std::vector<std::pair<double, double>> lambda2_series;  // (t, lambda_2 of active graph)
  AnalyticThresholdInputs analytic;
};

/// Runs the plant with every cooperative agent's local detector in the loop.
/// Flagged 1-hop links are removed permanently from all modes.
RescueResult run_rescue(const SimulationSetup& setup, const std::set<int>& malicious,
                        const DetectorSettings& detector);

struct PostIsolationReport {
  PEReport pe;
  std::vector<int> kept;     // original indices of the surviving nodes
  std::set<int> dropped;     // nodes with every union link removed
  bool disconnected = false; // mu_bar == 0
};

PostIsolationReport post_isolation_connectivity(const SwitchingNetwork& net,
                                                const std::set<Edge>& removed, double T);

struct DPMSRConfig {
  int F = 0;
  double sample_time = 1e-3;
  bool follow_schedule = false;  // false: static union overlay
  bool apply_dos = false;

  bool operator==(const DPMSRConfig&) const = default;
};

/// Zero-order-hold MSR baseline: cooperative agents drop up to F neighbor values
/// above and F below their own before applying the consensus protocol.
SimulationTrace dp_msr_run(const SimulationSetup& setup, const std::set<int>& malicious,
                           const DPMSRConfig& cfg);

/// Cooperative nodes of a run, ascending.
std::vector<int> cooperative_agents(int n, const std::set<int>& malicious);

}  // namespace rmas
