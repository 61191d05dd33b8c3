#include "rmas/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmas/error.hpp"

namespace rmas {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCategory::Io, "cannot create directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::Io, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCategory::Io, "write to '" + path + "' failed");
}

std::string trace_csv(const SimulationTrace& trace) {
  const int n = trace.node_count;
  std::ostringstream os;
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",p" << i;
  for (int i = 1; i <= n; ++i) os << ",v" << i;
  os << ",active_mode,dos_active\n";
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    os << format_number(trace.t[k]);
    for (int i = 0; i < 2 * n; ++i) os << ',' << format_number(trace.x[k](i));
    os << ',' << trace.active_mode[k] << ',' << trace.dos_active[k] << '\n';
  }
  return os.str();
}

std::string events_csv(const std::vector<IsolationEvent>& events) {
  std::ostringstream os;
  os << "t,detector,isolated,residual_value,threshold\n";
  for (const auto& e : events)
    os << format_number(e.t) << ',' << e.detector << ',' << e.isolated << ','
       << format_number(e.residual) << ',' << format_number(e.threshold) << '\n';
  return os.str();
}

std::string residuals_csv(const std::vector<ResidualSample>& samples) {
  std::ostringstream os;
  os << "t,owner,neighbor,residual,threshold,verdict\n";
  for (const auto& s : samples)
    os << format_number(s.t) << ',' << s.owner << ',' << s.neighbor << ',' << format_number(s.residual)
       << ',' << format_number(s.threshold) << ',' << (s.attacked ? "attacked" : "null") << '\n';
  return os.str();
}

std::string long_csv(const std::vector<LongRow>& rows) {
  std::ostringstream os;
  os << "t,series,value\n";
  for (const auto& r : rows) os << format_number(r.t) << ',' << r.series << ',' << format_number(r.value) << '\n';
  return os.str();
}

std::vector<LongRow> consensus_rows(const SimulationTrace& trace, const std::vector<int>& cooperative) {
  std::vector<LongRow> rows;
  const int n = trace.node_count;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    const Eigen::VectorXd& x = trace.x[k];
    for (int i = 0; i < n; ++i) rows.push_back({trace.t[k], "p" + std::to_string(i + 1), x(i)});
    if (!cooperative.empty()) {
      double lo = x(cooperative.front()), hi = lo;
      for (int i : cooperative) {
        lo = std::min(lo, x(i));
        hi = std::max(hi, x(i));
      }
      rows.push_back({trace.t[k], "gap", hi - lo});
    }
  }
  return rows;
}

std::vector<LongRow> residual_rows(const std::vector<ResidualSample>& samples) {
  std::vector<LongRow> rows;
  for (const auto& s : samples) {
    const std::string tag = std::to_string(s.owner) + "_" + std::to_string(s.neighbor);
    rows.push_back({s.t, "r_" + tag, s.residual});
    rows.push_back({s.t, "eps_" + tag, s.threshold});
  }
  return rows;
}

std::vector<LongRow> lambda2_rows(const std::vector<std::pair<double, double>>& series) {
  std::vector<LongRow> rows;
  for (const auto& [t, l2] : series) rows.push_back({t, "lambda2", l2});
  return rows;
}

}  // namespace rmas
