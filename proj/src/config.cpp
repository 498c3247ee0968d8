#include "netdet/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "netdet/graph.hpp"

namespace netdet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

NodeList parse_nodes(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array of node ids");
  NodeList out;
  for (const auto& v : j) out.push_back(v.get<int>());
  return out;
}

Vec parse_vector(const json& j, int r, const std::string& what) {
  if (j.is_number()) return j.get<double>() * Vec::Ones(r);
  if (j.is_array()) {
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
    if (v.size() != r) fail(what + " must have length " + std::to_string(r));
    return v;
  }
  fail(what + " must be a number or array");
}

// Whitespace-separated rows, one line each; '#' comments allowed.
Mat read_matrix_file(const std::string& path, int dim, const std::string& what) {
  std::ifstream in(path);
  if (!in) fail(what + ": cannot open matrix file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(what + ": empty matrix file " + path);
  Mat M(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) fail(what + ": ragged rows in " + path);
    for (size_t c = 0; c < rows[i].size(); ++c) M(static_cast<int>(i), static_cast<int>(c)) = rows[i][c];
  }
  if (M.rows() != dim || M.cols() != dim) fail(what + " must be " + std::to_string(dim) + " x " + std::to_string(dim));
  return M;
}

Mat parse_matrix(const json& j, int dim, const std::string& what) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "zero") return Mat::Zero(dim, dim);
    if (s == "identity") return Mat::Identity(dim, dim);
    return read_matrix_file(s, dim, what);  // anything else is a file reference
  }
  if (j.is_number()) return j.get<double>() * Mat::Identity(dim, dim);
  if (j.is_array()) {
    size_t rows = j.size();
    if (rows == 0 || !j[0].is_array()) fail(what + " must be a 2-d array");
    size_t cols = j[0].size();
    Mat M(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
      if (j[i].size() != cols) fail(what + ": ragged rows");
      for (size_t c = 0; c < cols; ++c) M(static_cast<int>(i), static_cast<int>(c)) = j[i][c].get<double>();
    }
    if (M.rows() != dim || M.cols() != dim) fail(what + " must be " + std::to_string(dim) + " x " + std::to_string(dim));
    return M;
  }
  fail(what + " must be a scalar, keyword, or 2-d array");
}

}  // namespace

NetworkModel RunConfig::build_model() const {
  if (toeplitz) {
    return toeplitz_line(toeplitz->n, toeplitz->a, toeplitz->b, toeplitz->c, inputs);
  }
  if (!edge_list_path) fail("exactly one network source (edge_list or toeplitz) is required");
  auto edges = read_edge_list(*edge_list_path);
  return build_network(nodes, edges, inputs);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }

  RunConfig cfg;
  if (!root.contains("network")) fail("missing 'network' block");
  const json& net = root["network"];
  const bool has_edges = net.contains("edge_list");
  const bool has_toep = net.contains("toeplitz");
  if (has_edges == has_toep) fail("network needs exactly one of 'edge_list' or 'toeplitz'");
  if (has_edges) {
    cfg.edge_list_path = net["edge_list"].get<std::string>();
    if (!net.contains("nodes")) fail("network.nodes required with an edge list");
    cfg.nodes = net["nodes"].get<int>();
  } else {
    const json& t = net["toeplitz"];
    cfg.toeplitz = ToeplitzSpec{t.at("n").get<int>(), t.at("a").get<double>(), t.at("b").get<double>(),
                                t.at("c").get<double>()};
    cfg.nodes = cfg.toeplitz->n;
  }
  if (!net.contains("inputs")) fail("network.inputs required");
  cfg.inputs = parse_nodes(net["inputs"], "network.inputs");
  const int r = static_cast<int>(cfg.inputs.size());

  if (root.contains("scenario")) {
    const json& sc = root["scenario"];
    std::string kind = sc.value("kind", "mean_shift");
    double pi1 = 0.5;
    if (sc.contains("priors")) {
      if (!sc["priors"].is_array() || sc["priors"].size() != 2) fail("scenario.priors must be [pi1, pi2]");
      pi1 = sc["priors"][0].get<double>();
      double pi2 = sc["priors"][1].get<double>();
      if (std::abs(pi1 + pi2 - 1.0) > 1e-12) fail("priors must sum to 1");
    }
    double sigma_v2 = sc.value("sigma_v_sq", 0.0);
    int N = sc.value("N", 1);
    Mat Sigma0;
    if (sc.contains("Sigma0")) Sigma0 = parse_matrix(sc["Sigma0"], cfg.nodes, "scenario.Sigma0");

    if (kind == "identical_stats") {
      Mat D = sc.contains("D") ? parse_matrix(sc["D"], r, "scenario.D") : Mat::Identity(r, r);
      cfg.scenario = ScenarioSpec::identical_stats(sc.value("mu1", 0.0), sc.value("mu2", 0.0),
                                                   sc.at("sigma1_sq").get<double>(),
                                                   sc.at("sigma2_sq").get<double>(), std::move(D),
                                                   sigma_v2, N, r, pi1);
      cfg.scenario.Sigma0 = std::move(Sigma0);
    } else if (kind == "mean_shift") {
      Vec mu1 = parse_vector(sc.at("mu1"), r, "scenario.mu1");
      Vec mu2 = parse_vector(sc.at("mu2"), r, "scenario.mu2");
      Mat Sc = sc.contains("Sigma") ? parse_matrix(sc["Sigma"], r, "scenario.Sigma")
                                    : parse_matrix(sc.at("Sigma1"), r, "scenario.Sigma1");
      cfg.scenario = ScenarioSpec::mean_shift(std::move(mu1), std::move(mu2), std::move(Sc), sigma_v2, N, pi1,
                                              std::move(Sigma0));
    } else if (kind == "cov_shift") {
      Mat S1 = parse_matrix(sc.at("Sigma1"), r, "scenario.Sigma1");
      Mat S2 = parse_matrix(sc.at("Sigma2"), r, "scenario.Sigma2");
      Vec mu_c = sc.contains("mu") ? parse_vector(sc["mu"], r, "scenario.mu") : Vec::Zero(r);
      cfg.scenario = ScenarioSpec::cov_shift(std::move(S1), std::move(S2), sigma_v2, N, r, pi1,
                                             std::move(mu_c), std::move(Sigma0));
    } else {
      fail("scenario.kind must be mean_shift, cov_shift, or identical_stats");
    }
    cfg.has_scenario = true;
  }

  if (root.contains("partition")) {
    const json& p = root["partition"];
    cfg.S = parse_nodes(p.at("S"), "partition.S");
    cfg.C_d = parse_nodes(p.at("C_d"), "partition.C_d");
    cfg.P = parse_nodes(p.at("P"), "partition.P");
    cfg.d = p.value("d", 1);
  }

  if (root.contains("sensors")) {
    for (const auto& s : root["sensors"]) cfg.sensor_sets.push_back(parse_nodes(s, "sensors[]"));
  }

  if (root.contains("rank")) {
    const json& rk = root["rank"];
    if (rk.contains("pool")) cfg.rank_pool = parse_nodes(rk["pool"], "rank.pool");
    cfg.rank_k = rk.value("cardinality", 0);
    cfg.rank_criterion = rk.value("criterion", "mean");
    if (cfg.rank_criterion != "mean" && cfg.rank_criterion != "cov") fail("rank.criterion must be mean or cov");
  }

  if (root.contains("toeplitz_analysis")) {
    cfg.toeplitz_q = root["toeplitz_analysis"].value("q", 0);
    cfg.toeplitz_j = root["toeplitz_analysis"].value("j", 0);
  }

  if (root.contains("options")) {
    const json& o = root["options"];
    cfg.grid = o.value("grid", 4096);
    cfg.trials = o.value("trials", 10000L);
    cfg.seed = o.value("seed", 0ULL);
    cfg.threads = o.value("threads", 0);
    cfg.out_path = o.value("out", "");
    cfg.rules_out = o.value("rules_out", "");
    cfg.detector = o.value("detector", "map_mean");
  }
  return cfg;
}

}  // namespace netdet
