#pragma once

#include <string>
#include <vector>

#include "rmas/plant.hpp"
#include "rmas/rescue.hpp"

namespace rmas {

/// Decimal with 12 significant digits.
std::string format_number(double v);

/// Plot-ready long-format row.
struct LongRow {
  double t = 0.0;
  std::string series;
  double value = 0.0;
};

/// Creates the directory (and parents); Io error naming the path on failure.
void ensure_directory(const std::string& dir);
void write_text(const std::string& path, const std::string& content);

/// Columns t, p1..pN, v1..vN, active_mode, dos_active.
std::string trace_csv(const SimulationTrace& trace);
std::string events_csv(const std::vector<IsolationEvent>& events);
std::string residuals_csv(const std::vector<ResidualSample>& samples);
std::string long_csv(const std::vector<LongRow>& rows);

/// Position trajectories as series "p<i>" plus the cooperative gap "gap".
std::vector<LongRow> consensus_rows(const SimulationTrace& trace, const std::vector<int>& cooperative);
/// Series "r_<owner>_<neighbor>" and "eps_<owner>_<neighbor>" with 0-based ids.
std::vector<LongRow> residual_rows(const std::vector<ResidualSample>& samples);
std::vector<LongRow> lambda2_rows(const std::vector<std::pair<double, double>>& series);

}  // namespace rmas
