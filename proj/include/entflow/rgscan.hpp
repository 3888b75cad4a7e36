#pragma once

// Parameter scans and the scaling-law fits behind them: entropy profiles over
// a field grid, block-size scaling at criticality (slope (c + cbar)/6), the
// symmetric off-critical law S ~ -(1/6) log2|1 - lambda| on either side of
// the transition, UV/IR entropy comparison, and the subleading constant
// (1/6) log2(gamma/gamma') along the critical line.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "entflow/cache.hpp"
#include "entflow/freefermion.hpp"
#include "entflow/model.hpp"
#include "entflow/spectra.hpp"

namespace entflow::rgscan {

enum class SolverKind { freefermion, ed };

struct ScanRecord {
  CouplingPoint point;
  int block_sites = 0;
  double entropy_bits = 0.0;
  std::map<double, double> renyi;  // alpha -> bits
  bool saturated = false;
  double saturation_tol = 0.0;
  SolverKind solver = SolverKind::freefermion;
  std::string error;  // empty on success
};

struct ScanOptions {
  freefermion::QuadratureSpec quad{};
  double sat_tol = 1e-8;
  std::vector<double> renyi_alphas{};
  ModeCache* cache = nullptr;
};

inline ModeOccupations occupations_for(const CouplingPoint& pt, BlockSize L,
                                       const ScanOptions& opts) {
  if (opts.cache) return opts.cache->get_or_compute(pt, L, opts.quad);
  return freefermion::mode_occupations(L, pt, opts.quad);
}

// One record per grid point, in grid order. Per-point failures are recorded
// in the row instead of aborting the scan.
inline std::vector<ScanRecord> scan_lambda(double gamma, const std::vector<double>& lambda_grid,
                                           BlockSize L, const ScanOptions& opts = {}) {
  std::vector<ScanRecord> records;
  records.reserve(lambda_grid.size());
  for (double lam : lambda_grid) {
    ScanRecord rec;
    rec.point = CouplingPoint{gamma, lam, 0.0};
    rec.block_sites = L.sites;
    rec.saturation_tol = opts.sat_tol;
    try {
      validate(rec.point);
      ModeOccupations modes = occupations_for(rec.point, L, opts);
      rec.entropy_bits = spectra::block_entropy(modes);
      for (double alpha : opts.renyi_alphas) rec.renyi[alpha] = spectra::renyi_entropy(modes, alpha);
      double prev = 0.0;
      if (L.sites - 2 >= 1)
        prev = spectra::block_entropy(occupations_for(rec.point, block_size(L.sites - 2), opts));
      rec.saturated = std::abs(rec.entropy_bits - prev) < opts.sat_tol;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int points_used = 0;
};

inline FitResult fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (n < 2 || ys.size() != xs.size())
    fail(ErrorCode::insufficient_points, "a line fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) fail(ErrorCode::insufficient_points, "degenerate abscissas");
  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.points_used = n;
  return fit;
}

// Least-squares fit of S_L against log2 L at (or near) a critical point; the
// slope estimates (c + cbar)/6.
inline FitResult fit_critical_blocksize_scaling(double gamma, double lambda,
                                                const std::vector<int>& L_list,
                                                const ScanOptions& opts = {}) {
  if (L_list.size() < 4)
    fail(ErrorCode::insufficient_points, "the block-size fit needs at least 4 sizes");
  for (int L : L_list)
    if (L < 2 || L % 2 != 0)
      fail(ErrorCode::invalid_argument, "block sizes must be even and >= 2");
  CouplingPoint pt{gamma, lambda, 0.0};
  std::vector<double> xs, ys;
  for (int L : L_list) {
    xs.push_back(std::log2(static_cast<double>(L)));
    ys.push_back(spectra::block_entropy(occupations_for(pt, block_size(L), opts)));
  }
  return fit_line(xs, ys);
}

enum class Side { above, below };

struct OffcriticalPoint {
  double delta = 0.0;
  double lambda = 0.0;
  int block_sites = 0;
  double entropy_bits = 0.0;
  bool saturated = false;
};

struct OffcriticalFit {
  FitResult fit;                       // saturated S against log2 delta
  std::vector<OffcriticalPoint> points;  // unsaturated points flagged, excluded from the fit
};

inline OffcriticalFit fit_offcritical_scaling(double gamma, const std::vector<double>& deltas,
                                              Side side, const ScanOptions& opts = {},
                                              int saturation_cap = 1024) {
  OffcriticalFit out;
  std::vector<double> xs, ys;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 0.1))
      fail(ErrorCode::invalid_argument, "offcritical deltas must lie in (0, 0.1]");
    OffcriticalPoint p;
    p.delta = d;
    p.lambda = side == Side::above ? 1.0 + d : 1.0 - d;
    CouplingPoint pt{gamma, p.lambda, 0.0};
    try {
      BlockSize L = freefermion::saturation_block_size(pt, opts.quad, opts.sat_tol, saturation_cap);
      p.block_sites = L.sites;
      p.saturated = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_saturation) throw;
      p.block_sites = saturation_cap - saturation_cap % 2;
      p.saturated = false;
    }
    p.entropy_bits = spectra::block_entropy(occupations_for(pt, block_size(p.block_sites), opts));
    if (p.saturated) {
      xs.push_back(std::log2(d));
      ys.push_back(p.entropy_bits);
    }
    out.points.push_back(p);
  }
  if (xs.size() < 3)
    fail(ErrorCode::insufficient_points, "fewer than 3 saturated points for the offcritical fit");
  out.fit = fit_line(xs, ys);
  return out;
}

// S_L(uv) >= S_L(ir) - 1e-10 for each block size, both points on one branch
// with the IR point at least as far along the flow.
inline std::vector<bool> uv_ir_comparison(double gamma, double lambda_uv, double lambda_ir,
                                          const std::vector<int>& L_list,
                                          const ScanOptions& opts = {}) {
  CouplingPoint uv{gamma, lambda_uv, 0.0}, ir{gamma, lambda_ir, 0.0};
  if (lambda_uv != lambda_ir && !same_branch(uv, ir))
    fail(ErrorCode::invalid_argument, "UV and IR points must lie on the same branch");
  std::vector<bool> ok;
  for (int L : L_list) {
    double s_uv = spectra::block_entropy(occupations_for(uv, block_size(L), opts));
    double s_ir = spectra::block_entropy(occupations_for(ir, block_size(L), opts));
    ok.push_back(s_uv >= s_ir - 1e-10);
  }
  return ok;
}

// Measured entropy difference along the critical line against the predicted
// subleading constant (1/6) log2(gamma/gamma').
inline std::vector<std::pair<double, double>> critical_line_constant(
    const std::vector<std::pair<double, double>>& gamma_pairs, BlockSize L,
    const ScanOptions& opts = {}) {
  std::vector<std::pair<double, double>> out;
  for (auto [g1, g2] : gamma_pairs) {
    if (!(g1 > 0.0 && g1 <= 1.0 && g2 > 0.0 && g2 <= 1.0))
      fail(ErrorCode::invalid_argument, "critical-line anisotropies must lie in (0, 1]");
    double s1 = spectra::block_entropy(occupations_for(CouplingPoint{g1, 1.0, 0.0}, L, opts));
    double s2 = spectra::block_entropy(occupations_for(CouplingPoint{g2, 1.0, 0.0}, L, opts));
    out.emplace_back(s1 - s2, std::log2(g1 / g2) / 6.0);
  }
  return out;
}

}  // namespace entflow::rgscan
