#include "netdet/report.hpp"

#include <cstdio>

namespace netdet {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_nodes(const NodeList& nodes) {
  std::string s;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(nodes[i]);
  }
  return s;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += csv_quote(cells[i]);
  }
  row += '\n';
  return row;
}

std::string serialize_rule(const MeanShiftRule& rule, const NodeList& sensors) {
  std::string out = "detector map_mean\nsensors " + fmt_nodes(sensors) + "\n";
  out += "threshold " + fmt_g17(rule.threshold) + "\n";
  out += "w";
  for (int i = 0; i < rule.w.size(); ++i) out += " " + fmt_g17(rule.w(i));
  out += "\n";
  return out;
}

std::string serialize_rule(const CovShiftRule& rule, const NodeList& sensors) {
  std::string out = "detector ldmap_cov\nsensors " + fmt_nodes(sensors) + "\n";
  out += "gamma " + fmt_g17(rule.gamma) + "\n";
  out += "d1 " + fmt_g17(rule.d1) + "\nd2 " + fmt_g17(rule.d2) + "\n";
  out += "mu_c_proj " + fmt_g17(rule.mu_c_proj) + "\n";
  out += "b";
  for (int i = 0; i < rule.b.size(); ++i) out += " " + fmt_g17(rule.b(i));
  out += "\n";
  return out;
}

ErrorReport analytic_report(const NetworkModel& model, const SensorSet& sensors,
                            const ScenarioSpec& scenario, const HinfOptions& opts,
                            bool include_finite) {
  ErrorReport rep;
  rep.sensors = sensors.nodes;
  rep.snr.N = scenario.N;

  const bool mean_pair = [&] {
    double scale = std::max(1.0, std::max(scenario.Sigma1.cwiseAbs().maxCoeff(),
                                          scenario.Sigma2.cwiseAbs().maxCoeff()));
    return (scenario.Sigma1 - scenario.Sigma2).cwiseAbs().maxCoeff() <= 1e-10 * scale;
  }();
  const bool cov_zero2 = scenario.Sigma2.size() != 0 && scenario.Sigma2.cwiseAbs().maxCoeff() == 0.0;

  if (include_finite) {
    StackedMoments mom = stacked_moments(model, sensors, scenario);
    if (mean_pair) {
      try {
        double eta = finite_snr_mean(mom);
        rep.snr.eta_hat = eta;
        rep.pe_mean_finite = pe_mean(eta).value;
      } catch (const std::exception&) {
      }
    }
    const bool cov_pair = !mean_pair || (scenario.kind == ModelKind::IdenticalStats &&
                                         scenario.sigma1_sq > scenario.sigma2_sq);
    if (cov_pair) {
      try {
        double R = finite_snr_cov(mom);
        rep.snr.R_hat = R;
        rep.pe_cov_finite = R > 1.0 + 1e-9 ? std::optional<double>(pe_cov(R).value) : std::nullopt;
      } catch (const std::exception&) {
      }
    }
  }

  if (model.is_stable()) {
    if (scenario.kind == ModelKind::IdenticalStats) {
      auto snr = identical_stats_snrs(model, sensors, scenario, opts);
      rep.snr.eta_asym = snr.eta_s;
      rep.pe_mean_asym = pe_mean(snr.eta_s).value;
      rep.snr.non_nilpotent_warning = !model.is_nilpotent();
      if (scenario.sigma1_sq > scenario.sigma2_sq) {
        rep.snr.R_asym = snr.R_s;
        rep.snr.tau = snr.R_s > 1.0 ? std::optional<double>(std::log(snr.R_s) / (snr.R_s - 1.0)) : std::nullopt;
        rep.pe_cov_asym = pe_cov(snr.R_s).value;
      }
    } else if (mean_pair) {
      auto snr = asym_snr_mean(model, sensors, scenario, opts);
      rep.snr.eta_asym = snr.eta;
      rep.snr.non_nilpotent_warning = snr.non_nilpotent_warning;
      rep.pe_mean_asym = pe_mean(snr.eta).value;
    } else if (cov_zero2 && scenario.sigma_v2 > 0.0) {
      double R = asym_snr_cov(model, sensors, scenario, opts);
      rep.snr.R_asym = R;
      rep.snr.tau = R > 1.0 ? std::optional<double>(std::log(R) / (R - 1.0)) : std::nullopt;
      rep.pe_cov_asym = pe_cov(R).value;
    }
  }
  return rep;
}

}  // namespace netdet
