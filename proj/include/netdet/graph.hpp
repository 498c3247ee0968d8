#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace netdet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using NodeList = std::vector<int>;  // 1-based node ids throughout the public API

struct Edge {
  int i = 0;       // head (row index of G)
  int j = 0;       // tail (column index of G)
  double w = 0.0;  // g_ij
};

// Weighted digraph driving x[k+1] = G x[k] + Pi w[k].
//
// Influence convention (fixed globally): a non-zero entry g_ij means node j
// influences node i, because x_i[k+1] sums g_ij x_j[k]. Every path, distance
// and separation computation below follows influence hops j -> i.
class NetworkModel {
 public:
  NetworkModel(Mat G, NodeList input_nodes);

  int node_count() const { return static_cast<int>(G_.rows()); }
  int input_count() const { return static_cast<int>(inputs_.size()); }
  const Mat& G() const { return G_; }
  const Mat& Pi() const { return Pi_; }
  const NodeList& input_nodes() const { return inputs_; }

  // Eigenvalues of G, computed once at construction (models are immutable).
  const Eigen::VectorXcd& eigenvalues() const { return eig_; }
  double spectral_radius() const { return rho_; }
  bool is_stable() const { return rho_ < 1.0; }
  // G^n = 0, decided by repeated squaring: eigenvalues of defective
  // nilpotent matrices carry O(eps^{1/n}) errors and cannot be trusted.
  bool is_nilpotent() const { return nilpotent_; }

  // Successors of u under influence (v such that g_vu != 0).
  const std::vector<std::vector<int>>& influence_adjacency() const { return adj_; }

 private:
  Mat G_;
  Mat Pi_;
  NodeList inputs_;
  Eigen::VectorXcd eig_;
  double rho_ = 0.0;
  bool nilpotent_ = false;
  std::vector<std::vector<int>> adj_;  // 0-based
};

NetworkModel build_network(int n, const std::vector<Edge>& edges, const NodeList& input_nodes);

// Tridiagonal Toeplitz line network: diagonal a, super-diagonal b, sub-diagonal c.
NetworkModel toeplitz_line(int n, double a, double b, double c, const NodeList& input_nodes = {1});

constexpr int kInfiniteDistance = -1;

// Minimum number of influence hops from any node of A to any node of B;
// 0 when the sets intersect, kInfiniteDistance when no path exists.
int distance(const NetworkModel& model, const NodeList& from, const NodeList& to);

struct CutsetPartition {
  NodeList S;    // source set, contains all input nodes
  NodeList C_d;  // cutset
  NodeList P;    // partitioned set
  int d = 1;

  // Blocks of M^{-1} G M with node order [S, C_d, P].
  Mat G_ss, G_sc, G_cs, G_cc, G_cp, G_pc, G_pp;
  NodeList permutation;  // concatenated [S, C_d, P], 1-based
};

struct CutsetCheck {
  bool valid = false;
  CutsetPartition partition;                // populated when valid
  std::vector<std::string> violations;      // named failed conditions
  std::optional<NodeList> witness_path;     // S -> P path avoiding C_d, when applicable
};

// Validates Definition-2 conditions: disjoint cover of V, K in S,
// dist(K, C_d) >= d, separation of S from P by C_d, and the zero blocks
// of the permuted decomposition (no direct influence S->P nor P->S). On
// success the permuted block matrices are returned.
CutsetCheck verify_cutset(const NetworkModel& model, const NodeList& S, const NodeList& C_d,
                          const NodeList& P, int d);

// Edge-list text format: one "i j weight" triple per line, 1-based indices.
// Blank lines and lines starting with '#' are skipped.
std::vector<Edge> read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const Mat& G);

}  // namespace netdet
