#pragma once

// Block reduced states of the infinite XY chain via the correlation-matrix
// method.
//
// After the Jordan-Wigner map to Majorana operators a_{2m}, a_{2m+1} the
// ground state is Gaussian and fully described by <a_m a_n> = delta_mn +
// i Gamma_mn with Gamma real antisymmetric. For a block of L contiguous bulk
// sites Gamma is block Toeplitz,
//
//   Pi_l = [ [0, g_l], [-g_{-l}, 0] ],   Gamma[(m,n)] = Pi_{m-n},
//
// with g_l the Fourier coefficients of the symbol in quadrature.hpp. The
// canonical values nu_j of Gamma (the +-i nu eigenvalue pairs) give one
// two-level fermionic mode per site, occupation q_j = (1 + nu_j)/2, and the
// block's spectrum is the direct product of these binary spectra.

#include <algorithm>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "entflow/model.hpp"
#include "entflow/quadrature.hpp"
#include "entflow/spectra.hpp"

namespace entflow::freefermion {

struct BlockCorrelationMatrix {
  int sites = 0;
  Eigen::MatrixXd gamma;  // 2L x 2L, antisymmetric
};

inline BlockCorrelationMatrix build_block_correlation(BlockSize L, const CouplingPoint& point,
                                                      const QuadratureSpec& quad = {}) {
  detail::require_free_fermion_point(point);
  const int n = L.sites;
  std::vector<double> g = detail::coefficient_table(n, point, quad);
  auto gl = [&](int l) { return g[l + n - 1]; };

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      G(2 * m, 2 * k + 1) = gl(m - k);
      G(2 * m + 1, 2 * k) = -gl(k - m);
    }
  G = 0.5 * (G - G.transpose()).eval();  // exact antisymmetry
  return {n, std::move(G)};
}

// Canonical values of Gamma via the Hermitian matrix i*Gamma: eigenvalues come
// in +-nu_j pairs, matched greedily after sorting by magnitude. nu outside
// [0,1] by at most 1e-9 is clamped; anything larger indicates a construction
// bug and raises clamp_violation.
inline ModeOccupations mode_occupations(const BlockCorrelationMatrix& corr) {
  constexpr double pairing_tol = 1e-9;
  constexpr double clamp_tol = 1e-9;
  const int n = corr.sites;
  if (n < 1 || corr.gamma.rows() != 2 * n || corr.gamma.cols() != 2 * n)
    fail(ErrorCode::invalid_argument, "malformed block correlation matrix");

  Eigen::MatrixXcd herm = std::complex<double>(0.0, 1.0) * corr.gamma.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::convergence_failure, "eigendecomposition of i*Gamma failed");

  // Ascending spectrum of a real antisymmetric Gamma is symmetric about 0, so
  // the i-th smallest and i-th largest values form a +-nu pair; this is the
  // greedy matching by magnitude, stable under degeneracies.
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + 2 * n);
  std::sort(ev.begin(), ev.end());

  ModeOccupations modes;
  modes.sites = n;
  modes.q.reserve(n);
  for (int j = 0; j < n; ++j) {
    double a = ev[j], b = ev[2 * n - 1 - j];
    if (std::abs(a + b) > pairing_tol)
      fail(ErrorCode::pairing_failure, "eigenvalues " + std::to_string(a) + " and " +
                                           std::to_string(b) + " do not form a +-nu pair");
    double nu = 0.5 * (std::abs(a) + std::abs(b));
    if (nu > 1.0 + clamp_tol)
      fail(ErrorCode::clamp_violation, "canonical value " + std::to_string(nu) + " exceeds 1");
    nu = std::min(nu, 1.0);
    modes.q.push_back(0.5 * (1.0 + nu));
  }
  std::sort(modes.q.begin(), modes.q.end(), std::greater<>());
  return modes;
}

inline ModeOccupations mode_occupations(BlockSize L, const CouplingPoint& point,
                                        const QuadratureSpec& quad = {}) {
  return mode_occupations(build_block_correlation(L, point, quad));
}

// Smallest even L whose block entropy has stopped moving:
// |S_L - S_{L-2}| < tol, located by doubling then bisection over even L.
// Exceeding `cap` raises no_saturation (the point is too close to critical
// for the block to outgrow the correlation length).
inline BlockSize saturation_block_size(const CouplingPoint& point, const QuadratureSpec& quad,
                                       double tol, int cap = 1024) {
  detail::require_free_fermion_point(point);
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "saturation tolerance must be positive");
  if (cap < 2) fail(ErrorCode::invalid_argument, "saturation cap must be >= 2");
  cap -= cap % 2;

  std::map<int, double> entropy_at;
  auto entropy = [&](int L) {
    if (L <= 0) return 0.0;
    auto it = entropy_at.find(L);
    if (it != entropy_at.end()) return it->second;
    double s = spectra::block_entropy(mode_occupations(block_size(L), point, quad));
    entropy_at.emplace(L, s);
    return s;
  };
  auto settled = [&](int L) { return std::abs(entropy(L) - entropy(L - 2)) < tol; };

  int hi = 0;
  for (int L = 2; L <= cap; L *= 2) {
    if (settled(L)) {
      hi = L;
      break;
    }
    if (L * 2 > cap && L != cap && settled(cap)) {
      hi = cap;
      break;
    }
  }
  if (hi == 0) fail(ErrorCode::no_saturation, "entropy still moving at the block-size cap");

  int lo = hi / 2;  // settled(lo) is false (or lo < 2)
  while (hi - lo > 2) {
    int mid = lo + (hi - lo) / 2;
    mid += mid % 2;
    if (mid == hi) mid -= 2;
    if (settled(mid))
      hi = mid;
    else
      lo = mid;
  }
  return block_size(hi);
}

}  // namespace entflow::freefermion
