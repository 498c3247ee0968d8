#include "netdet/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace netdet {

namespace {

void check_node_range(int v, int n, const char* what) {
  if (v < 1 || v > n) {
    throw std::invalid_argument(std::string(what) + " node " + std::to_string(v) +
                                " out of range [1, " + std::to_string(n) + "]");
  }
}

NodeList sorted_unique(NodeList v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

NetworkModel::NetworkModel(Mat G, NodeList input_nodes) : G_(std::move(G)), inputs_(std::move(input_nodes)) {
  if (G_.rows() != G_.cols() || G_.rows() < 1) {
    throw std::invalid_argument("adjacency matrix must be square and non-empty");
  }
  const int n = static_cast<int>(G_.rows());
  if (inputs_.empty()) throw std::invalid_argument("input node set must be non-empty");
  std::set<int> seen;
  for (int k : inputs_) {
    check_node_range(k, n, "input");
    if (!seen.insert(k).second) {
      throw std::invalid_argument("duplicate input node " + std::to_string(k));
    }
  }
  Pi_ = Mat::Zero(n, static_cast<int>(inputs_.size()));
  for (int c = 0; c < static_cast<int>(inputs_.size()); ++c) Pi_(inputs_[c] - 1, c) = 1.0;

  adj_.assign(n, {});
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (G_(i, j) != 0.0) adj_[j].push_back(i);  // j influences i
    }
  }

  Eigen::EigenSolver<Mat> es(G_, /*computeEigenvectors=*/false);
  eig_ = es.eigenvalues();
  rho_ = eig_.size() > 0 ? eig_.cwiseAbs().maxCoeff() : 0.0;

  // G^n = 0 via repeated squaring of the normalized matrix; products of
  // structural zeros stay exactly zero, so DAGs are detected exactly.
  double scale = G_.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    nilpotent_ = true;
  } else {
    Mat B = G_ / scale;
    int exponent = 1;
    while (exponent < n && B.cwiseAbs().maxCoeff() > 1e-14) {
      B = (B * B).eval();
      exponent *= 2;
    }
    nilpotent_ = B.cwiseAbs().maxCoeff() <= 1e-14;
  }
}

NetworkModel build_network(int n, const std::vector<Edge>& edges, const NodeList& input_nodes) {
  if (n < 1) throw std::invalid_argument("node count must be positive");
  Mat G = Mat::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    check_node_range(e.i, n, "edge head");
    check_node_range(e.j, n, "edge tail");
    if (!seen.insert({e.i, e.j}).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
    G(e.i - 1, e.j - 1) = e.w;
  }
  return NetworkModel(std::move(G), input_nodes);
}

NetworkModel toeplitz_line(int n, double a, double b, double c, const NodeList& input_nodes) {
  if (n < 1) throw std::invalid_argument("toeplitz_line: n must be >= 1");
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    throw std::invalid_argument("toeplitz_line: parameters must be non-negative");
  }
  Mat G = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    G(i, i) = a;
    if (i + 1 < n) {
      G(i, i + 1) = b;
      G(i + 1, i) = c;
    }
  }
  return NetworkModel(std::move(G), input_nodes);
}

int distance(const NetworkModel& model, const NodeList& from, const NodeList& to) {
  const int n = model.node_count();
  if (from.empty() || to.empty()) throw std::invalid_argument("distance: empty node set");
  for (int v : from) check_node_range(v, n, "distance");
  for (int v : to) check_node_range(v, n, "distance");

  std::vector<char> target(n, 0);
  for (int v : to) target[v - 1] = 1;

  // Multi-source BFS over influence hops.
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  for (int v : from) {
    if (dist[v - 1] < 0) {
      dist[v - 1] = 0;
      queue.push_back(v - 1);
    }
  }
  const auto& adj = model.influence_adjacency();
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (target[u]) return dist[u];
    for (int w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return kInfiniteDistance;
}

CutsetCheck verify_cutset(const NetworkModel& model, const NodeList& S_in, const NodeList& C_in,
                          const NodeList& P_in, int d) {
  CutsetCheck out;
  const int n = model.node_count();
  NodeList S = sorted_unique(S_in), C = sorted_unique(C_in), P = sorted_unique(P_in);

  for (const auto* set : {&S, &C, &P}) {
    for (int v : *set) {
      if (v < 1 || v > n) {
        out.violations.push_back("node " + std::to_string(v) + " out of range");
        return out;
      }
    }
  }
  if (S.empty()) out.violations.push_back("S non-empty violated");
  if (C.empty()) out.violations.push_back("C_d non-empty violated");
  if (P.empty()) out.violations.push_back("P non-empty violated");
  if (!out.violations.empty()) return out;

  std::vector<int> owner(n, 0);  // 1=S, 2=C, 3=P
  auto assign = [&](const NodeList& set, int tag, const char* name) {
    for (int v : set) {
      if (owner[v - 1] != 0) {
        out.violations.push_back(std::string("sets not disjoint at node ") + std::to_string(v));
      }
      owner[v - 1] = tag;
      (void)name;
    }
  };
  assign(S, 1, "S");
  assign(C, 2, "C_d");
  assign(P, 3, "P");
  for (int v = 0; v < n; ++v) {
    if (owner[v] == 0) out.violations.push_back("node " + std::to_string(v + 1) + " not covered by S, C_d, P");
  }
  if (!out.violations.empty()) return out;

  for (int k : model.input_nodes()) {
    if (owner[k - 1] != 1) out.violations.push_back("input node " + std::to_string(k) + " not in S");
  }

  if (d >= 1) {
    // Infinite distance satisfies dist(K, C_d) >= d vacuously.
    int dist_kc = distance(model, model.input_nodes(), C);
    if (dist_kc != kInfiniteDistance && dist_kc < d) {
      out.violations.push_back("dist(K, C_d) = " + std::to_string(dist_kc) + " < d = " + std::to_string(d));
    }
  }

  // Separation: BFS from S with C_d deleted must not reach P.
  {
    std::vector<int> parent(n, -2);
    std::deque<int> queue;
    for (int v : S) {
      parent[v - 1] = -1;
      queue.push_back(v - 1);
    }
    const auto& adj = model.influence_adjacency();
    int hit = -1;
    while (!queue.empty() && hit < 0) {
      int u = queue.front();
      queue.pop_front();
      for (int w : adj[u]) {
        if (owner[w] == 2 || parent[w] != -2) continue;  // cutset nodes deleted
        parent[w] = u;
        if (owner[w] == 3) {
          hit = w;
          break;
        }
        queue.push_back(w);
      }
    }
    if (hit >= 0) {
      NodeList path;
      for (int v = hit; v != -1; v = parent[v]) path.push_back(v + 1);
      std::reverse(path.begin(), path.end());
      out.violations.push_back("path from S to P avoids C_d");
      out.witness_path = path;
    }
  }

  // Zero blocks of the decomposition: no direct influence between S and P
  // in either direction.
  for (int s : S) {
    for (int p : P) {
      if (model.G()(p - 1, s - 1) != 0.0) {
        out.violations.push_back("direct influence " + std::to_string(s) + " -> " + std::to_string(p) +
                                 " bypasses C_d ((p,s) block non-zero)");
      }
      if (model.G()(s - 1, p - 1) != 0.0) {
        out.violations.push_back("direct influence " + std::to_string(p) + " -> " + std::to_string(s) +
                                 " ((s,p) block non-zero)");
      }
    }
  }
  if (!out.violations.empty()) return out;

  CutsetPartition part;
  part.S = S;
  part.C_d = C;
  part.P = P;
  part.d = d;
  part.permutation = S;
  part.permutation.insert(part.permutation.end(), C.begin(), C.end());
  part.permutation.insert(part.permutation.end(), P.begin(), P.end());

  auto block = [&](const NodeList& rows, const NodeList& cols) {
    Mat B(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      for (size_t c = 0; c < cols.size(); ++c) B(r, c) = model.G()(rows[r] - 1, cols[c] - 1);
    }
    return B;
  };
  part.G_ss = block(S, S);
  part.G_sc = block(S, C);
  part.G_cs = block(C, S);
  part.G_cc = block(C, C);
  part.G_cp = block(C, P);
  part.G_pc = block(P, C);
  part.G_pp = block(P, P);

  out.valid = true;
  out.partition = std::move(part);
  return out;
}

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list: " + path);
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    Edge e;
    if (!(ss >> e.i >> e.j >> e.w)) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 'i j weight'");
    }
    edges.push_back(e);
  }
  return edges;
}

void write_edge_list(const std::string& path, const Mat& G) {
  std::ofstream outf(path);
  if (!outf) throw std::invalid_argument("cannot open for write: " + path);
  char buf[64];
  for (int i = 0; i < G.rows(); ++i) {
    for (int j = 0; j < G.cols(); ++j) {
      if (G(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, j + 1, G(i, j));
        outf << buf;
      }
    }
  }
}

}  // namespace netdet
