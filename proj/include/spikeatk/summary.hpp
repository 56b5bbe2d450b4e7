#ifndef SPIKEATK_SUMMARY_HPP
#define SPIKEATK_SUMMARY_HPP

#include <string>
#include <vector>

#include "spikeatk/attack.hpp"

namespace spikeatk {

struct MetricsSummary {
  std::size_t samples_tested = 0;
  double asr_pct = 0.0;
  // over successful attacks
  double perturbation_min_pct = 0.0;
  double perturbation_avg_pct = 0.0;
  double perturbation_max_pct = 0.0;
  // over all attacked samples, seconds
  double time_min_s = 0.0;
  double time_avg_s = 0.0;
  double time_max_s = 0.0;
  double iterations_avg = 0.0;
};

MetricsSummary summarize(const std::vector<AttackReport>& reports);

// Aligned plain-text table with one metric per row.
std::string format_table(const MetricsSummary& summary);

}  // namespace spikeatk

#endif  // SPIKEATK_SUMMARY_HPP
