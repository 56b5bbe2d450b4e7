#include "spikeatk/summary.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spikeatk {

MetricsSummary summarize(const std::vector<AttackReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("summarize needs at least one report");
  }
  MetricsSummary s;
  s.samples_tested = reports.size();

  std::size_t successes = 0;
  double ps_min = std::numeric_limits<double>::infinity();
  double ps_max = 0.0, ps_sum = 0.0;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0, t_sum = 0.0;
  double it_sum = 0.0;
  for (const AttackReport& r : reports) {
    if (r.success) {
      ++successes;
      ps_min = std::min(ps_min, r.perturbation_pct);
      ps_max = std::max(ps_max, r.perturbation_pct);
      ps_sum += r.perturbation_pct;
    }
    const double t = r.elapsed_ms / 1000.0;
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
    t_sum += t;
    it_sum += r.iterations;
  }
  s.asr_pct = 100.0 * successes / static_cast<double>(reports.size());
  if (successes > 0) {
    s.perturbation_min_pct = ps_min;
    s.perturbation_max_pct = ps_max;
    s.perturbation_avg_pct = ps_sum / static_cast<double>(successes);
  }
  s.time_min_s = t_min;
  s.time_max_s = t_max;
  s.time_avg_s = t_sum / static_cast<double>(reports.size());
  s.iterations_avg = it_sum / static_cast<double>(reports.size());
  return s;
}

std::string format_table(const MetricsSummary& s) {
  auto row = [](const char* name, const std::string& value) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-30s %s\n", name, value.c_str());
    return std::string(buf);
  };
  auto num = [](double v, const char* suffix = "") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g%s", v, suffix);
    return std::string(buf);
  };
  std::ostringstream os;
  os << row("Samples tested", std::to_string(s.samples_tested));
  os << row("ASR", num(s.asr_pct, "%"));
  os << row("Average perturbation", num(s.perturbation_avg_pct, "%"));
  os << row("Minimum generation time", num(s.time_min_s, "s"));
  os << row("Average generation time", num(s.time_avg_s, "s"));
  os << row("Maximum generation time", num(s.time_max_s, "s"));
  os << row("Average number of iterations", num(s.iterations_avg));
  return os.str();
}

}  // namespace spikeatk
