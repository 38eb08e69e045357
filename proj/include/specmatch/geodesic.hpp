#pragma once

#include <Eigen/Dense>
#include <limits>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "specmatch/mesh.hpp"

namespace specmatch {

/// Edge graph of a triangle mesh with Euclidean edge lengths, in CSR layout.
/// Build once and reuse when running Dijkstra from many sources.
class EdgeGraph {
 public:
  static EdgeGraph build(const TriangleMesh& mesh) {
    const int n = mesh.num_vertices();
    std::set<std::pair<int, int>> edges;
    for (int f = 0; f < mesh.num_faces(); ++f) {
      for (int c = 0; c < 3; ++c) {
        int a = mesh.faces(f, c), b = mesh.faces(f, (c + 1) % 3);
        if (a > b) std::swap(a, b);
        edges.emplace(a, b);
      }
    }
    std::vector<int> degree(static_cast<size_t>(n), 0);
    for (const auto& [a, b] : edges) {
      ++degree[static_cast<size_t>(a)];
      ++degree[static_cast<size_t>(b)];
    }
    EdgeGraph g;
    g.offsets_.assign(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) g.offsets_[static_cast<size_t>(i) + 1] = g.offsets_[static_cast<size_t>(i)] + degree[static_cast<size_t>(i)];
    g.neighbors_.resize(g.offsets_.back());
    g.lengths_.resize(g.offsets_.back());
    std::vector<size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [a, b] : edges) {
      const double len = (mesh.vertices.row(a) - mesh.vertices.row(b)).norm();
      g.neighbors_[cursor[static_cast<size_t>(a)]] = b;
      g.lengths_[cursor[static_cast<size_t>(a)]++] = len;
      g.neighbors_[cursor[static_cast<size_t>(b)]] = a;
      g.lengths_[cursor[static_cast<size_t>(b)]++] = len;
    }
    return g;
  }

  int num_vertices() const { return static_cast<int>(offsets_.size()) - 1; }

  /// Shortest-path distances from `source` to every vertex; +infinity for
  /// vertices not edge-connected to the source.
  Eigen::VectorXd distances_from(int source) const {
    const int n = num_vertices();
    if (source < 0 || source >= n)
      throw IndexOutOfRange("dijkstra source " + std::to_string(source) +
                            " outside [0," + std::to_string(n) + ")");
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, inf);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;  // stale entry
      for (size_t e = offsets_[static_cast<size_t>(u)]; e < offsets_[static_cast<size_t>(u) + 1]; ++e) {
        const int v = neighbors_[e];
        const double cand = d + lengths_[e];
        if (cand < dist[v]) {
          dist[v] = cand;
          queue.emplace(cand, v);
        }
      }
    }
    return dist;
  }

 private:
  std::vector<size_t> offsets_;
  std::vector<int> neighbors_;
  std::vector<double> lengths_;
};

/// Per-vertex Dijkstra distances over the mesh edge graph.
inline Eigen::VectorXd geodesic_distances(const TriangleMesh& mesh, int source) {
  return EdgeGraph::build(mesh).distances_from(source);
}

}  // namespace specmatch
