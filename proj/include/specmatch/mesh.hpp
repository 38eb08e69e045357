#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "specmatch/errors.hpp"

namespace specmatch {

/// Triangle mesh with double-precision vertex positions. Vertex order is
/// meaningful: correspondences are index-based, so loaders and writers must
/// preserve it 1:1.
struct TriangleMesh {
  Eigen::MatrixXd vertices;  // n x 3
  Eigen::MatrixXi faces;     // m x 3
  std::string name;

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_faces() const { return static_cast<int>(faces.rows()); }
};

inline double bounding_box_diagonal(const TriangleMesh& mesh) {
  if (mesh.vertices.rows() == 0) return 0.0;
  Eigen::RowVector3d lo = mesh.vertices.colwise().minCoeff();
  Eigen::RowVector3d hi = mesh.vertices.colwise().maxCoeff();
  return (hi - lo).norm();
}

inline double face_area(const TriangleMesh& mesh, int f) {
  Eigen::RowVector3d a = mesh.vertices.row(mesh.faces(f, 0));
  Eigen::RowVector3d b = mesh.vertices.row(mesh.faces(f, 1));
  Eigen::RowVector3d c = mesh.vertices.row(mesh.faces(f, 2));
  return 0.5 * (b - a).cross(c - a).norm();
}

inline double total_surface_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) area += face_area(mesh, f);
  return area;
}

/// Checks the structural invariants: indices in range, three distinct
/// vertices per face, face area above the degeneracy floor relative to the
/// bounding box.
inline void validate_mesh(const TriangleMesh& mesh) {
  const int n = mesh.num_vertices();
  if (mesh.vertices.cols() != 3)
    throw ParseError("mesh '" + mesh.name + "': vertices must be n x 3");
  if (mesh.num_faces() > 0 && mesh.faces.cols() != 3)
    throw ParseError("mesh '" + mesh.name + "': faces must be m x 3");
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const int i = mesh.faces(f, 0), j = mesh.faces(f, 1), k = mesh.faces(f, 2);
    if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n)
      throw IndexOutOfRange("mesh '" + mesh.name + "': face " +
                            std::to_string(f) + " references vertex outside [0," +
                            std::to_string(n) + ")");
    if (i == j || j == k || i == k)
      throw DegenerateFace("mesh '" + mesh.name + "': face " +
                           std::to_string(f) + " has repeated vertex indices");
  }
  const double diag = bounding_box_diagonal(mesh);
  const double floor = 1e-12 * diag * diag;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (face_area(mesh, f) <= floor)
      throw DegenerateFace("mesh '" + mesh.name + "': face " +
                           std::to_string(f) + " is degenerate (area below " +
                           std::to_string(floor) + ")");
  }
}

}  // namespace specmatch
