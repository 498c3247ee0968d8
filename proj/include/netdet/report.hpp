#pragma once

#include <string>
#include <vector>

#include "netdet/detectors.hpp"
#include "netdet/error_prob.hpp"
#include "netdet/monte_carlo.hpp"

namespace netdet {

// 17 significant digits; re-parsing reproduces the double exactly.
std::string fmt_g17(double v);

// "1,2,3" (node-set lists are comma-separated integers).
std::string fmt_nodes(const NodeList& nodes);

std::string csv_quote(const std::string& field);
std::string csv_row(const std::vector<std::string>& cells);

// Analytic and empirical error probabilities for one sensor set.
struct ErrorReport {
  NodeList sensors;
  SnrReport snr;
  std::optional<double> pe_mean_finite, pe_mean_asym;
  std::optional<double> pe_cov_finite, pe_cov_asym;
  std::optional<EmpiricalReport> empirical;
};

// Analytic report for a sensor set: finite-horizon SNRs from the stacked
// moments when computable, asymptotic SNRs per the scenario kind.
ErrorReport analytic_report(const NetworkModel& model, const SensorSet& sensors,
                            const ScenarioSpec& scenario, const HinfOptions& opts,
                            bool include_finite = true);

// Decision rules as decimal text, 17 significant digits per value.
std::string serialize_rule(const MeanShiftRule& rule, const NodeList& sensors);
std::string serialize_rule(const CovShiftRule& rule, const NodeList& sensors);

}  // namespace netdet
