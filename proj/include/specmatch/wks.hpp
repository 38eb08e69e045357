#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "specmatch/spectral.hpp"

namespace specmatch {

/// Wave kernel signature parameters. The energy grid is log-spaced with a
/// 2-sigma margin at both ends and sigma = sigma_factor * grid step, the WKS
/// authors' convention. skip_first excludes the near-zero kernel eigenvalues
/// (raise it for multi-component meshes).
struct WksConfig {
  int num_energies = 128;
  double sigma_factor = 7.0;
  int skip_first = 1;
};

/// n x num_energies WKS feature matrix: band-filtered squared eigenfunctions,
/// normalized per energy band. Invariant to rigid motion and to eigenvector
/// sign flips.
inline Eigen::MatrixXd compute_wks(const SpectralBasis& basis, const WksConfig& cfg = {}) {
  if (cfg.num_energies < 2) throw InsufficientSpectrum("compute_wks: num_energies must be >= 2");
  if (cfg.sigma_factor <= 0.0) throw InsufficientSpectrum("compute_wks: sigma_factor must be > 0");
  if (basis.k() <= cfg.skip_first + 1)
    throw InsufficientSpectrum("compute_wks: basis has k=" + std::to_string(basis.k()) +
                               ", need more than skip_first+1=" +
                               std::to_string(cfg.skip_first + 1));

  const int k = basis.k();
  const int n = basis.n();
  const int kept = k - cfg.skip_first;
  Eigen::VectorXd log_ev(kept);
  for (int i = 0; i < kept; ++i)
    log_ev[i] = std::log(std::max(basis.eigenvalues[cfg.skip_first + i], 1e-300));

  const double e_min = log_ev[0];
  const double e_max = log_ev[kept - 1];
  const double delta = (e_max - e_min) / cfg.num_energies;
  const double sigma = cfg.sigma_factor * delta;
  if (!(e_max - e_min > 4.0 * sigma))
    throw InsufficientSpectrum("compute_wks: spectrum spread " + std::to_string(e_max - e_min) +
                               " does not clear the 4-sigma margin " + std::to_string(4.0 * sigma));

  Eigen::VectorXd energies(cfg.num_energies);
  const double lo = e_min + 2.0 * sigma;
  const double hi = e_max - 2.0 * sigma;
  for (int s = 0; s < cfg.num_energies; ++s)
    energies[s] = lo + (hi - lo) * s / (cfg.num_energies - 1);

  const Eigen::MatrixXd phi_sq =
      basis.eigenfunctions.rightCols(kept).array().square().matrix();  // n x kept

  Eigen::MatrixXd wks(n, cfg.num_energies);
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
  for (int s = 0; s < cfg.num_energies; ++s) {
    Eigen::VectorXd weights =
        (-(energies[s] - log_ev.array()).square() * inv_two_sigma_sq).exp();
    wks.col(s) = (phi_sq * weights) / weights.sum();
  }
  return wks;
}

}  // namespace specmatch
