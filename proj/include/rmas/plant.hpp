#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmas/graph.hpp"

namespace rmas {

struct Gains {
  double alpha = 1.0;
  double gamma = 1.0;

  bool operator==(const Gains&) const = default;
};

void validate(const Gains& g);

struct SystemState {
  Eigen::VectorXd p_tilde;
  Eigen::VectorXd v;
  double t = 0.0;
};

enum class Waveform { Ramp, Constant, Sinusoid };

std::string waveform_name(Waveform w);
Waveform parse_waveform(const std::string& name);

/// Additive control injection of one malicious agent. Ramp: slope * t;
/// constant: value; sinusoid: amplitude * sin(omega * t).
struct DeceptionAttack {
  int agent = 0;
  double activation_time = 0.0;
  Waveform waveform = Waveform::Ramp;
  double slope = 0.0;
  double value = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;

  double signal(double t) const;
  bool operator==(const DeceptionAttack&) const = default;
};

struct RandomDrop {
  int trials = 0;
  double success_prob = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const RandomDrop&) const = default;
};

/// One DoS window: either an explicit dropped-edge list or a random drop spec.
struct DoSInterval {
  double start = 0.0;
  double duration = 0.0;
  std::vector<Edge> edges;
  std::optional<RandomDrop> random;

  bool operator==(const DoSInterval&) const = default;
};

struct DoSSchedule {
  std::vector<DoSInterval> intervals;

  bool operator==(const DoSSchedule&) const = default;
};

/// A realized DoS piece on the step grid: edges dropped for steps [k_begin, k_end).
struct DoSPiece {
  long k_begin = 0;
  long k_end = 0;
  std::set<Edge> dropped;
};

/// Expands random specs into per-sub-interval Bernoulli drops over the union
/// graph's edges and snaps every boundary to the step grid.
std::vector<DoSPiece> realize_dos(const DoSSchedule& dos, const Graph& union_graph, double step);

/// Largest DoS-covered duration inside any window of length T.
double max_dos_in_window(const std::vector<DoSPiece>& pieces, double step, double T);

Eigen::MatrixXd closed_loop_matrix(const Graph& g, const Gains& gains);

Eigen::VectorXd control_input(const SystemState& s, const Graph& g, const Gains& gains,
                              const std::vector<DeceptionAttack>& attacks, double t);

/// col(Q p_tilde, v).
Eigen::VectorXd output_vector(const SystemState& s);

/// Step-indexed piecewise-constant topology: schedule mode plus DoS drops.
struct TopologyPiece {
  long k_begin = 0;
  long k_end = 0;
  int mode = 0;
  int dos = -1;  // index into the realized DoS pieces, -1 when no DoS
};

std::vector<TopologyPiece> topology_timeline(const SwitchingNetwork& net,
                                             const std::vector<DoSPiece>& dos, double step,
                                             long total_steps);

/// Number of integration steps covering the horizon; throws Configuration when
/// the horizon or a breakpoint is not a step multiple.
long steps_for(const SwitchingNetwork& net, double step, double horizon);

/// One classical RK4 step of x = col(p_tilde, v) with the graph frozen.
void rk4_step(const Graph& g, const Gains& gains, const std::vector<DeceptionAttack>& attacks,
              double t, double h, Eigen::VectorXd& x);

struct SimulationSetup {
  SwitchingNetwork network;
  Gains gains;
  SystemState initial;
  std::vector<DeceptionAttack> attacks;
  DoSSchedule dos;
  double step = 1e-3;
  double horizon = 10.0;
  int record_every = 1;
};

struct SimulationTrace {
  int node_count = 0;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;  // col(p_tilde, v) per sample
  std::vector<int> active_mode;
  std::vector<int> dos_active;
};

SimulationTrace simulate(const SimulationSetup& setup);

struct StabilityConstants {
  double eta = 0.0;
  double lambda_chi = 0.0;
  double lambda_x = 0.0;
  double kappa_x = 0.0;
  double kappa_u = 0.0;
  double beta = 1.0;
  bool pd_condition = false;  // positive definiteness of the auxiliary 2x2 matrix
};

StabilityConstants stability_constants(double mu, double T, const Gains& gains, int n,
                                       double beta = 1.0, double lambda_x_fraction = 0.9);

struct ConsensusMetrics {
  double max_gap = 0.0;    // max pairwise |p_i - p_j| over the set
  double max_speed = 0.0;  // max |v_i| over the set
};

ConsensusMetrics consensus_metrics(const Eigen::VectorXd& x, const std::vector<int>& agents);

}  // namespace rmas
