#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "specmatch/laplacian.hpp"

namespace specmatch {

/// First k eigenpairs of W phi = lambda A phi, ascending, A-orthonormal
/// (Phi^T A Phi = I). Eigenvalues are clamped at zero; the kernel of W on a
/// connected mesh is the constant function 1/sqrt(total_area).
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;     // k, ascending, >= 0
  Eigen::MatrixXd eigenfunctions;  // n x k
  Eigen::VectorXd mass;            // diagonal of A

  int k() const { return static_cast<int>(eigenvalues.size()); }
  int n() const { return static_cast<int>(eigenfunctions.rows()); }
};

namespace detail {

// Deterministic generator (splitmix64) so eigendecompositions are bit-stable
// across runs and platforms; std::uniform_real_distribution is not.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // uniform in [-1, 1)
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t kEigensolverSeed = 0x7370656374726131ULL;

}  // namespace detail

/// Smallest-k eigenpairs of the (W, A) pencil via shift-invert Lanczos with
/// full reorthogonalization in the A-inner product. Deterministic: fixed
/// shift, fixed seeded start vector, first-nonzero-positive sign convention.
/// Exact multiplicities cause Lanczos breakdown; a fresh A-orthogonalized
/// direction is injected to continue (the complement of an invariant subspace
/// is invariant, so the block-tridiagonal Rayleigh-Ritz stays valid).
inline SpectralBasis eigendecompose(const LaplacianPair& lap, int k) {
  const int n = lap.size();
  if (k < 1) throw KTooLarge("eigendecompose: k must be >= 1");
  if (k >= n)
    throw KTooLarge("eigendecompose: k=" + std::to_string(k) +
                    " must be smaller than n=" + std::to_string(n));

  const Eigen::VectorXd& a = lap.mass;
  const double trace_w = lap.stiffness.diagonal().sum();
  const double sigma = -1e-8 * trace_w / n;

  Eigen::SparseMatrix<double> shifted = lap.stiffness;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma * a[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("eigendecompose: factorization of the shifted stiffness failed");

  const auto a_dot = [&a](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(a.cwiseProduct(v));
  };

  detail::DeterministicRng rng(detail::kEigensolverSeed);
  const auto random_vector = [&rng, n]() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric();
    return v;
  };

  const int iteration_cap = static_cast<int>(std::min<long>(n, 50L * k));
  std::vector<Eigen::VectorXd> basis;  // A-orthonormal Lanczos vectors
  std::vector<double> alpha, beta;     // tridiagonal entries; beta[j] couples j and j+1

  // A-orthonormalizes v against the current basis (two passes), returns its
  // A-norm after orthogonalization.
  const auto orthogonalize = [&](Eigen::VectorXd& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) v -= a_dot(v, u) * u;
    return std::sqrt(std::max(0.0, a_dot(v, v)));
  };

  {
    Eigen::VectorXd v0 = random_vector();
    const double norm = std::sqrt(a_dot(v0, v0));
    basis.push_back(v0 / norm);
  }

  Eigen::VectorXd lambda(k);
  Eigen::MatrixXd phi(n, k);

  // Assembles the k best Ritz pairs from the current factorization and
  // returns the relative pencil residual ||W y - lambda A y|| / ||W Y||.
  const auto assemble_and_residual = [&]() {
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_eig(tri);
    // wanted pairs = largest Ritz values of the inverted operator
    for (int i = 0; i < k; ++i) {
      const int col = m - 1 - i;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < m; ++j)
        y += tri_eig.eigenvectors()(j, col) * basis[static_cast<size_t>(j)];
      y /= std::sqrt(a_dot(y, y));
      phi.col(i) = y;
      lambda[i] = sigma + 1.0 / tri_eig.eigenvalues()[col];
    }
    const Eigen::MatrixXd w_phi = lap.stiffness * phi;
    const Eigen::MatrixXd residual =
        w_phi - a.asDiagonal() * (phi * lambda.asDiagonal());
    return residual.norm() / std::max(w_phi.norm(), 1e-300);
  };

  const double rel_tol = 1e-9;
  double residual = std::numeric_limits<double>::infinity();
  int m_target = std::min(iteration_cap, std::max(2 * k + 30, 40));
  while (true) {
    // extend the Lanczos factorization; basis always holds one pending vector
    // more than alpha unless the whole space is spanned
    while (static_cast<int>(alpha.size()) < m_target &&
           alpha.size() < basis.size()) {
      const size_t j = alpha.size();
      const Eigen::VectorXd& vj = basis[j];
      Eigen::VectorXd w = solver.solve(a.cwiseProduct(vj));
      alpha.push_back(a_dot(w, vj));
      const double norm = orthogonalize(w);
      const double breakdown = 1e-13 * std::max(1.0, std::abs(alpha.back()));
      if (norm > breakdown) {
        beta.push_back(norm);
        basis.push_back(w / norm);
      } else if (static_cast<int>(basis.size()) < n) {
        Eigen::VectorXd fresh = random_vector();
        const double fresh_norm = orthogonalize(fresh);
        if (fresh_norm < 1e-12) break;  // numerically spanned everything
        beta.push_back(0.0);
        basis.push_back(fresh / fresh_norm);
      } else {
        break;  // full space reached
      }
    }

    const int m = static_cast<int>(alpha.size());
    if (m >= k) {
      residual = assemble_and_residual();
      if (residual <= rel_tol) break;
    }
    if (m >= iteration_cap || alpha.size() >= basis.size()) break;  // cannot extend
    m_target = std::min(iteration_cap, m + std::max(m / 2, 10));
  }

  if (!(residual <= 1e-6))
    throw ConvergenceFailure(
        "eigendecompose: residual " + std::to_string(residual) +
        " after " + std::to_string(alpha.size()) + " Lanczos steps (cap " +
        std::to_string(iteration_cap) + ")");

  // sort ascending by eigenvalue and clamp the numerically-zero kernel
  std::vector<int> order(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&lambda](int p, int q) { return lambda[p] < lambda[q]; });
  SpectralBasis out;
  out.eigenvalues.resize(k);
  out.eigenfunctions.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.eigenvalues[i] = std::max(0.0, lambda[order[static_cast<size_t>(i)]]);
    out.eigenfunctions.col(i) = phi.col(order[static_cast<size_t>(i)]);
  }
  out.mass = a;

  // sign convention: first nonzero entry of each eigenvector is positive
  for (int c = 0; c < k; ++c) {
    const double scale = out.eigenfunctions.col(c).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      const double v = out.eigenfunctions(i, c);
      if (std::abs(v) > 1e-11 * scale) {
        if (v < 0.0) out.eigenfunctions.col(c) = -out.eigenfunctions.col(c);
        break;
      }
    }
  }
  return out;
}

/// Spectral coefficients Phi^T A signal (the mass-weighted pseudo-inverse).
inline Eigen::MatrixXd project(const SpectralBasis& basis, const Eigen::MatrixXd& signal) {
  if (signal.rows() != basis.n())
    throw DimensionMismatch("project: signal has " + std::to_string(signal.rows()) +
                            " rows, basis expects " + std::to_string(basis.n()));
  return basis.eigenfunctions.transpose() * (basis.mass.asDiagonal() * signal);
}

/// Reconstruction Phi coeffs.
inline Eigen::MatrixXd unproject(const SpectralBasis& basis, const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != basis.k())
    throw DimensionMismatch("unproject: coeffs have " + std::to_string(coeffs.rows()) +
                            " rows, basis expects " + std::to_string(basis.k()));
  return basis.eigenfunctions * coeffs;
}

/// Spectral heat diffusion: channel j of the output is
/// Phi diag(exp(-lambda t_j)) Phi^T A signal_j. A contraction in the A-norm
/// for any t >= 0.
inline Eigen::MatrixXd diffuse(const SpectralBasis& basis, const Eigen::MatrixXd& signal,
                               const Eigen::VectorXd& times) {
  if (signal.rows() != basis.n())
    throw DimensionMismatch("diffuse: signal row count mismatch");
  if (times.size() != signal.cols())
    throw DimensionMismatch("diffuse: need one diffusion time per channel");
  Eigen::MatrixXd coeffs = project(basis, signal);
  for (int j = 0; j < coeffs.cols(); ++j)
    coeffs.col(j).array() *= (-basis.eigenvalues.array() * times[j]).exp();
  return unproject(basis, coeffs);
}

}  // namespace specmatch
