#pragma once
#include <algorithm>
#include <string>

// Shared generators for randomized tests and the acceptance suite.

#include <random>

#include "netdet/graph.hpp"

namespace netdet::testsupport {

// Exact nilpotency via repeated squaring; the eigensolver's radius for a
// defective nilpotent matrix is pure noise and must not drive rescaling.
inline bool nilpotent_mat(const Mat& G) {
  double scale = G.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  Mat B = G / scale;
  int exponent = 1;
  const int n = static_cast<int>(G.rows());
  while (exponent < n && B.cwiseAbs().maxCoeff() > 1e-14) {
    B = (B * B).eval();
    exponent *= 2;
  }
  return B.cwiseAbs().maxCoeff() <= 1e-14;
}

inline NetworkModel load_fixture(const std::string& name, int n, const NodeList& inputs) {
  return build_network(n, read_edge_list(std::string(NETDET_DATA_DIR) + "/fixtures/" + name), inputs);
}

// The 50-node sensor-placement fixture's node sets.
struct Net50 {
  static NodeList inputs() { return {1, 2, 3, 5, 21, 26, 36, 43}; }
  static NodeList cutset() { return {22, 30, 38}; }
  static NodeList partition() { return {34, 35, 40, 42, 44, 48, 49}; }
  static NodeList source() {
    NodeList s;
    NodeList c = cutset(), p = partition();
    for (int v = 1; v <= 50; ++v) {
      bool in_c = std::find(c.begin(), c.end(), v) != c.end();
      bool in_p = std::find(p.begin(), p.end(), v) != p.end();
      if (!in_c && !in_p) s.push_back(v);
    }
    return s;
  }
};

inline Mat random_stable(int n, std::mt19937& gen, double rho_target, bool nonneg = false,
                         double density = 0.5) {
  std::uniform_real_distribution<> unif(0.0, 1.0);
  Mat G = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (unif(gen) < density) G(i, j) = nonneg ? unif(gen) : 2.0 * unif(gen) - 1.0;
    }
  }
  if (!nilpotent_mat(G)) {
    Eigen::EigenSolver<Mat> es(G, false);
    double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 1e-6) G *= rho_target / rho;
  }
  return G;
}

inline Mat random_pd(int n, std::mt19937& gen, double ridge = 0.3) {
  std::normal_distribution<> norm(0.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = norm(gen);
  return A * A.transpose() + ridge * Mat::Identity(n, n);
}

struct LayeredNet {
  NetworkModel model;
  NodeList S, C, P, K;
};

// Random 5-8 node network with a valid cutset: S feeds C, C feeds P, no
// direct S-P influence in either direction. Weights non-negative, spectral
// radius scaled to rho_target.
inline LayeredNet random_layered_cutset_network(std::mt19937& gen, double rho_target = 0.6) {
  std::uniform_int_distribution<> size_s(2, 3), size_c(1, 2), size_p(2, 3);
  std::uniform_real_distribution<> unif(0.0, 1.0);
  const int ns = size_s(gen), nc = size_c(gen), np = size_p(gen);
  const int n = ns + nc + np;

  NodeList S, C, P;
  for (int i = 1; i <= ns; ++i) S.push_back(i);
  for (int i = ns + 1; i <= ns + nc; ++i) C.push_back(i);
  for (int i = ns + nc + 1; i <= n; ++i) P.push_back(i);

  Mat G = Mat::Zero(n, n);
  auto influence = [&](int from, int to, double w) { G(to - 1, from - 1) = w; };

  for (int s1 : S)
    for (int s2 : S)
      if (s1 != s2 && unif(gen) < 0.3) influence(s1, s2, 0.2 + 0.8 * unif(gen));
  for (int c : C) {
    int src = S[static_cast<size_t>(unif(gen) * ns) % ns];
    influence(src, c, 0.3 + 0.7 * unif(gen));  // every cutset node is driven
    for (int s : S)
      if (unif(gen) < 0.3) influence(s, c, 0.2 + 0.8 * unif(gen));
  }
  for (int c1 : C)
    for (int c2 : C)
      if (c1 != c2 && unif(gen) < 0.3) influence(c1, c2, 0.2 + 0.6 * unif(gen));
  for (int p : P) {
    int src = C[static_cast<size_t>(unif(gen) * nc) % nc];
    influence(src, p, 0.3 + 0.7 * unif(gen));  // every partition node is driven
    for (int c : C)
      if (unif(gen) < 0.3) influence(c, p, 0.2 + 0.8 * unif(gen));
  }
  for (int p1 : P)
    for (int p2 : P)
      if (p1 != p2 && unif(gen) < 0.3) influence(p1, p2, 0.2 + 0.6 * unif(gen));

  if (!nilpotent_mat(G)) {
    Eigen::EigenSolver<Mat> es(G, false);
    double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 1e-6) G *= rho_target / rho;
  }

  NodeList K;
  K.push_back(S[0]);
  if (ns > 1 && unif(gen) < 0.5) K.push_back(S[1]);

  LayeredNet net{NetworkModel(std::move(G), K), S, C, P, K};
  return net;
}

}  // namespace netdet::testsupport
