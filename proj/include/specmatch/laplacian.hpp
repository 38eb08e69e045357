#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <iostream>
#include <map>
#include <utility>
#include <vector>

#include "specmatch/mesh.hpp"

namespace specmatch {

/// Cotangent stiffness matrix W (positive semi-definite: off-diagonal entries
/// are -w_ij with w_ij = the nonnegative half-cotangent edge weight, diagonal
/// is the positive row-negated sum) together with the lumped mass diagonal.
/// The generalized eigenproblem W phi = lambda A phi then has lambda >= 0.
struct LaplacianPair {
  Eigen::SparseMatrix<double> stiffness;  // W, n x n, symmetric PSD
  Eigen::VectorXd mass;                   // diagonal of A, strictly positive
  double total_area = 0.0;

  int size() const { return static_cast<int>(mass.size()); }
};

/// Half-cotangent weight of edge (i, j): w_ij = -W(i, j).
inline double edge_cotan_weight(const LaplacianPair& lap, int i, int j) {
  return -lap.stiffness.coeff(i, j);
}

namespace detail {
constexpr double kCotanClamp = 1e8;
}

inline LaplacianPair compute_laplacian(const TriangleMesh& mesh) {
  validate_mesh(mesh);
  const int n = mesh.num_vertices();

  // Accumulate edge weights keyed by sorted vertex pair so both triangle
  // contributions land in one slot and W comes out exactly symmetric.
  std::map<std::pair<int, int>, double> edge_weight;
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  double total_area = 0.0;
  long clamped = 0;

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const int vi[3] = {mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)};
    const double area = face_area(mesh, f);
    total_area += area;
    for (int c = 0; c < 3; ++c) mass[vi[c]] += area / 3.0;
    // corner c is opposite the edge (c+1, c+2)
    for (int c = 0; c < 3; ++c) {
      const int o = vi[c];
      const int a = vi[(c + 1) % 3];
      const int b = vi[(c + 2) % 3];
      const Eigen::RowVector3d u = mesh.vertices.row(a) - mesh.vertices.row(o);
      const Eigen::RowVector3d v = mesh.vertices.row(b) - mesh.vertices.row(o);
      const double cross_norm = u.cross(v).norm();
      double cot;
      if (cross_norm < 1e-300) {
        cot = detail::kCotanClamp;
        ++clamped;
      } else {
        cot = u.dot(v) / cross_norm;
        if (std::abs(cot) > detail::kCotanClamp) {
          cot = std::copysign(detail::kCotanClamp, cot);
          ++clamped;
        }
      }
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      edge_weight[key] += 0.5 * cot;
    }
  }

  const long corners = 3L * mesh.num_faces();
  if (clamped > 0) {
    std::cerr << "specmatch: clamped " << clamped << " of " << corners
              << " cotangents on mesh '" << mesh.name << "'\n";
    if (static_cast<double>(clamped) > 0.001 * static_cast<double>(corners))
      throw DegenerateFace("mesh '" + mesh.name + "': " + std::to_string(clamped) +
                           " near-degenerate cotangents exceed the 0.1% budget");
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edge_weight.size() * 2 + static_cast<size_t>(n));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (const auto& [edge, w] : edge_weight) {
    triplets.emplace_back(edge.first, edge.second, -w);
    triplets.emplace_back(edge.second, edge.first, -w);
    diag[edge.first] += w;
    diag[edge.second] += w;
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, diag[i]);

  for (int i = 0; i < n; ++i)
    if (!(mass[i] > 0.0))
      throw DegenerateFace("mesh '" + mesh.name + "': vertex " + std::to_string(i) +
                           " has zero lumped area (not referenced by any face)");

  LaplacianPair lap;
  lap.stiffness.resize(n, n);
  lap.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  lap.stiffness.makeCompressed();
  lap.mass = std::move(mass);
  lap.total_area = total_area;
  return lap;
}

}  // namespace specmatch
