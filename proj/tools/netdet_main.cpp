#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netdet/config.hpp"
#include "netdet/cutset.hpp"
#include "netdet/placement.hpp"
#include "netdet/report.hpp"

namespace {

using namespace netdet;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInconclusive = 2;

std::ofstream open_out(const std::string& path) {
  if (std::filesystem::exists(path)) {
    std::cerr << "warning: overwriting " << path << "\n";
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output path: " + path);
  return out;
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt_g17(*v) : ""; }

// Sensor sets to report on: explicit sets plus the partition's C_d and P.
std::vector<std::pair<std::string, NodeList>> collect_sets(const RunConfig& cfg) {
  std::vector<std::pair<std::string, NodeList>> sets;
  if (cfg.C_d) sets.emplace_back("C_d", *cfg.C_d);
  if (cfg.P) sets.emplace_back("P", *cfg.P);
  for (const auto& s : cfg.sensor_sets) sets.emplace_back("J", s);
  return sets;
}

void write_report_rows(std::ostream& os, const std::string& label, const ErrorReport& rep) {
  os << csv_row({label, fmt_nodes(rep.sensors), "mean", std::to_string(rep.snr.N),
                 opt_str(rep.snr.eta_hat), opt_str(rep.snr.eta_asym), opt_str(rep.pe_mean_finite),
                 opt_str(rep.pe_mean_asym), rep.snr.non_nilpotent_warning ? "non_nilpotent" : ""});
  os << csv_row({label, fmt_nodes(rep.sensors), "cov", std::to_string(rep.snr.N),
                 opt_str(rep.snr.R_hat), opt_str(rep.snr.R_asym), opt_str(rep.pe_cov_finite),
                 opt_str(rep.pe_cov_asym), rep.snr.non_nilpotent_warning ? "non_nilpotent" : ""});
}

int cmd_analyze(const RunConfig& cfg) {
  if (!cfg.has_scenario) throw std::invalid_argument("analyze requires a scenario block");
  NetworkModel model = cfg.build_model();
  HinfOptions opts = cfg.hinf_options();

  bool verdicts_requested = cfg.S && cfg.C_d && cfg.P;
  bool all_inconclusive = false;
  std::optional<CutsetPartition> partition;

  std::ostringstream csv;
  csv << "set,sensors,model,N,snr_finite,snr_asym,pe_finite,pe_asym,warning\n";

  if (verdicts_requested) {
    CutsetCheck check = verify_cutset(model, *cfg.S, *cfg.C_d, *cfg.P, cfg.d);
    if (!check.valid) {
      std::cerr << "invalid cutset partition:\n";
      for (const auto& v : check.violations) std::cerr << "  - " << v << "\n";
      if (check.witness_path) std::cerr << "  witness path: " << fmt_nodes(*check.witness_path) << "\n";
      return kExitValidation;
    }
    partition = check.partition;
    std::cout << "cutset partition valid: S=" << fmt_nodes(partition->S)
              << " C_d=" << fmt_nodes(partition->C_d) << " P=" << fmt_nodes(partition->P) << "\n";

    if (cfg.scenario.sigma_v2 == 0.0) {
      ComparisonVerdict v = noiseless_verdict(0.0);
      std::cout << "verdict (noiseless, both models): " << to_string(v.conclusion) << "\n";
    } else {
      SensorSet sc = SensorSet::make(model, partition->C_d, cfg.scenario.sigma_v2);
      SensorSet sp = SensorSet::make(model, partition->P, cfg.scenario.sigma_v2);
      NoisyVerdicts nv = noisy_verdict(*partition, model, sc, sp, cfg.scenario, opts);
      std::cout << "rho_bar(1)=" << nv.sv.rho_bar_1 << " rho_lo(1)=" << nv.sv.rho_lo_1
                << " sup rho_bar=" << nv.sv.sup_rho_bar << " inf rho_lo=" << nv.sv.inf_rho_lo << "\n";
      std::cout << "verdict (mean):       " << to_string(nv.mean.conclusion) << "  [" << nv.mean.condition_checked
                << "]\n";
      std::cout << "verdict (covariance): " << to_string(nv.cov.conclusion) << "  [" << nv.cov.condition_checked
                << "]\n";
      if (nv.pe_mean_cutset) {
        std::cout << "P_em(C_d)=" << fmt_g17(*nv.pe_mean_cutset) << " P_em(P)=" << fmt_g17(*nv.pe_mean_partition)
                  << "\n";
      }
      if (nv.pe_cov_cutset) {
        std::cout << "P_ev(C_d)=" << fmt_g17(*nv.pe_cov_cutset) << " P_ev(P)=" << fmt_g17(*nv.pe_cov_partition)
                  << "\n";
      }
      all_inconclusive = nv.mean.conclusion == Conclusion::Inconclusive &&
                         nv.cov.conclusion == Conclusion::Inconclusive;
    }
  }

  std::ostringstream rules_text;
  const long mn = static_cast<long>(cfg.scenario.N);
  for (const auto& [label, nodes] : collect_sets(cfg)) {
    SensorSet sensors = SensorSet::make(model, nodes, cfg.scenario.sigma_v2);
    bool finite_ok = mn * sensors.size() <= 6000;
    ErrorReport rep = analytic_report(model, sensors, cfg.scenario, opts, finite_ok);
    write_report_rows(csv, label, rep);
    if (!cfg.rules_out.empty() && finite_ok) {
      StackedMoments mom = stacked_moments(model, sensors, cfg.scenario);
      try {
        rules_text << serialize_rule(build_mean_rule(mom, cfg.scenario.pi1, cfg.scenario.pi2), nodes);
      } catch (const std::exception&) {
        try {
          Discriminant disc = optimal_discriminant(mom.Sigma_bar_1, mom.Sigma_bar_2);
          rules_text << serialize_rule(build_cov_rule(mom, disc.b, cfg.scenario.pi1, cfg.scenario.pi2), nodes);
        } catch (const std::exception& e) {
          rules_text << "# {" << fmt_nodes(nodes) << "}: no rule (" << e.what() << ")\n";
        }
      }
    }
    std::cout << label << " {" << fmt_nodes(nodes) << "}:";
    if (rep.pe_mean_finite) std::cout << " pe_mean=" << fmt_g17(*rep.pe_mean_finite);
    if (rep.pe_mean_asym) std::cout << " pe_mean_asym=" << fmt_g17(*rep.pe_mean_asym);
    if (rep.pe_cov_finite) std::cout << " pe_cov=" << fmt_g17(*rep.pe_cov_finite);
    if (rep.pe_cov_asym) std::cout << " pe_cov_asym=" << fmt_g17(*rep.pe_cov_asym);
    std::cout << "\n";
  }

  if (!cfg.out_path.empty()) {
    auto out = open_out(cfg.out_path);
    out << csv.str();
  }
  if (!cfg.rules_out.empty()) {
    auto out = open_out(cfg.rules_out);
    out << rules_text.str();
  }
  return verdicts_requested && cfg.scenario.sigma_v2 > 0.0 && all_inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  if (!cfg.has_scenario) throw std::invalid_argument("simulate requires a scenario block");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  NetworkModel model = cfg.build_model();

  TrialPlan plan;
  plan.trials = cfg.trials;
  plan.seed = cfg.seed;
  plan.threads = cfg.threads;
  if (cfg.detector == "map_mean") {
    plan.detector = DetectorKind::MapMean;
  } else if (cfg.detector == "ldmap_cov") {
    plan.detector = DetectorKind::LdMapCov;
  } else if (cfg.detector == "oracle_input") {
    plan.detector = DetectorKind::OracleInput;
  } else {
    throw std::invalid_argument("unknown detector: " + cfg.detector);
  }

  std::ostringstream csv;
  csv << "subset,model,trials,p_hat,std_err,analytic_pe,abs_gap\n";
  auto sets = collect_sets(cfg);
  if (sets.empty()) throw std::invalid_argument("simulate needs sensor sets (sensors or partition block)");
  for (const auto& [label, nodes] : sets) {
    SensorSet sensors = SensorSet::make(model, nodes, cfg.scenario.sigma_v2);
    EmpiricalReport rep = estimate_error(plan, model, sensors, cfg.scenario);
    double gap = rep.analytic_pe ? std::abs(rep.p_hat - *rep.analytic_pe) : 0.0;
    csv << csv_row({fmt_nodes(nodes), cfg.detector, std::to_string(rep.trials_used), fmt_g17(rep.p_hat),
                    fmt_g17(rep.std_err), rep.analytic_pe ? fmt_g17(*rep.analytic_pe) : "",
                    rep.analytic_pe ? fmt_g17(gap) : ""});
    std::cout << label << " {" << fmt_nodes(nodes) << "}: p_hat=" << fmt_g17(rep.p_hat)
              << " std_err=" << fmt_g17(rep.std_err);
    if (rep.analytic_pe) std::cout << " analytic=" << fmt_g17(*rep.analytic_pe) << " gap=" << fmt_g17(gap);
    std::cout << "\n";
  }
  if (!cfg.out_path.empty()) {
    auto out = open_out(cfg.out_path);
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

int cmd_rank(const RunConfig& cfg) {
  if (!cfg.has_scenario) throw std::invalid_argument("rank requires a scenario block");
  NetworkModel model = cfg.build_model();

  NodeList pool;
  if (cfg.rank_pool) {
    pool = *cfg.rank_pool;
  } else if (cfg.C_d && cfg.P) {
    pool = *cfg.C_d;
    pool.insert(pool.end(), cfg.P->begin(), cfg.P->end());
  } else {
    throw std::invalid_argument("rank needs rank.pool or a partition block");
  }
  int k = cfg.rank_k > 0 ? cfg.rank_k : (cfg.C_d ? static_cast<int>(cfg.C_d->size()) : 0);
  if (k <= 0) throw std::invalid_argument("rank.cardinality must be positive");

  auto subsets = enumerate_subsets(model, pool, k, cfg.d);
  RankCriterion crit = cfg.rank_criterion == "cov" ? RankCriterion::Covariance : RankCriterion::Mean;
  RankingResult result =
      rank_placements(model, cfg.scenario, subsets, crit, cfg.C_d ? *cfg.C_d : NodeList{}, cfg.hinf_options());

  std::ostringstream csv;
  csv << "rank,worst_first_label,subset,pe_mean,pe_cov,is_cutset\n";
  for (const auto& rp : result.ranking) {
    csv << csv_row({std::to_string(rp.rank), std::to_string(rp.worst_first_label), fmt_nodes(rp.subset),
                    opt_str(rp.pe_mean_analytic), opt_str(rp.pe_cov_analytic), rp.is_cutset ? "1" : "0"});
  }
  for (const auto& [subset, reason] : result.excluded) {
    std::cerr << "excluded {" << fmt_nodes(subset) << "}: " << reason << "\n";
  }
  if (!cfg.out_path.empty()) {
    auto out = open_out(cfg.out_path);
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  std::cout << result.ranking.size() << " subsets ranked";
  if (!result.ranking.empty()) {
    std::cout << "; best {" << fmt_nodes(result.ranking.front().subset) << "}"
              << (result.ranking.front().is_cutset ? " (cutset)" : "");
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_toeplitz(const RunConfig& cfg) {
  if (!cfg.toeplitz) throw std::invalid_argument("toeplitz command requires a network.toeplitz block");
  const auto& t = *cfg.toeplitz;
  int q = cfg.toeplitz_q > 0 ? cfg.toeplitz_q : cfg.inputs.front();

  GainProfile profile = toeplitz_gain_profile(t.n, t.a, t.b, t.c, q);
  std::cout << "gain profile |(I-G)^{-1}_{l," << q << "}| for l=" << q << ".." << t.n << ":";
  for (double v : profile.values) std::cout << " " << fmt_g17(v);
  std::cout << "\nobserved ordering: "
            << (profile.observed == ProfileOrdering::Decreasing    ? "decreasing"
                : profile.observed == ProfileOrdering::Increasing  ? "increasing"
                : profile.observed == ProfileOrdering::NonMonotone ? "non-monotone"
                                                                   : "constant")
            << (profile.decreasing_predicted ? " (a+b+c < 1: decreasing expected)" : "") << "\n";

  std::ostringstream csv;
  csv << "node,gain_entry,eta_s,R_s,pe_mean,pe_cov\n";
  if (cfg.has_scenario && cfg.toeplitz_j > 0) {
    SisoOrderings ord = siso_orderings(t.n, t.a, t.b, t.c, q, cfg.toeplitz_j, cfg.scenario, cfg.hinf_options());
    Mat inv = toeplitz_inverse_entries(t.n, t.a, t.b, t.c);
    for (size_t i = 0; i < ord.nodes.size(); ++i) {
      int l = ord.nodes[i];
      csv << csv_row({std::to_string(l), fmt_g17(std::abs(inv(l - 1, q - 1))), fmt_g17(ord.eta_s[i]),
                      fmt_g17(ord.R_s[i]), fmt_g17(ord.pe_mean_v[i]), fmt_g17(ord.pe_cov_v[i])});
    }
    std::cout << "||G~||_inf=" << fmt_g17(ord.gtilde_inf_norm) << " min_row_sum=" << fmt_g17(ord.min_row_sum)
              << "\n";
    std::cout << "cutset node " << cfg.toeplitz_j << ": "
              << (ord.cutset_dominates_mean && ord.cutset_dominates_cov     ? "dominates the partitioned set"
                  : ord.cutset_dominated_mean && ord.cutset_dominated_cov ? "dominated by the partitioned set"
                                                                          : "mixed ordering")
              << "\n";
  }
  if (!cfg.out_path.empty()) {
    auto out = open_out(cfg.out_path);
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP / LD-MAP input-detection performance on linear network dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  long trials = 0;
  int grid = 0;
  int threads = -1;
  std::string out_path;
  std::string rules_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (JSON)")->required();
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--trials", trials, "trials per hypothesis override");
    sub->add_option("--grid", grid, "frequency grid size override");
    sub->add_option("--threads", threads, "worker thread override");
    sub->add_option("--out", out_path, "output CSV path override");
    sub->add_option("--rules", rules_path, "serialized decision rules path (analyze)");
    return sub;
  };
  CLI::App* analyze = add_common(app.add_subcommand("analyze", "analytic error probabilities and cutset verdicts"));
  CLI::App* simulate = add_common(app.add_subcommand("simulate", "Monte Carlo error estimates"));
  CLI::App* rank = add_common(app.add_subcommand("rank", "rank candidate sensor subsets"));
  CLI::App* toeplitz = add_common(app.add_subcommand("toeplitz", "Toeplitz line profiles and SISO orderings"));

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = netdet::load_config(config_path);
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--trials")) cfg.trials = trials;
    if (sub->count("--grid")) cfg.grid = grid;
    if (sub->count("--threads")) cfg.threads = threads;
    if (sub->count("--out")) cfg.out_path = out_path;
    if (sub->count("--rules")) cfg.rules_out = rules_path;

    if (sub == analyze) return cmd_analyze(cfg);
    if (sub == simulate) return cmd_simulate(cfg);
    if (sub == rank) return cmd_rank(cfg);
    if (sub == toeplitz) return cmd_toeplitz(cfg);
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
