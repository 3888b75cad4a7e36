#pragma once

// Fourier coefficients of the correlation symbol of the infinite XY chain.
//
// The ground-state Majorana correlations of a coupling point are generated by
// the unit-modulus symbol
//
//   g(phi) = (cos phi - lambda - i gamma sin phi) / |cos phi - lambda - i gamma sin phi|
//
// whose Fourier coefficients g_l = (1/2pi) int_0^{2pi} e^{+i l phi} g(phi) dphi
// are real and fill the 2x2 blocks of the block correlation matrix. Away from
// lambda = 1 the symbol is analytic and the periodic trapezoid sum converges
// spectrally; at lambda = 1 it has a unit jump at phi = 0, the coefficients
// decay like 1/l, and the trapezoid error falls off only as O(l/N^2). Nodes
// are offset by half a step so the singular phase is never sampled; the node
// count doubles until two successive coefficient tables agree to `tol` in max
// norm, and hitting `max_nodes` first raises quadrature_not_converged.

#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "entflow/model.hpp"

namespace entflow::freefermion {

struct QuadratureSpec {
  int start_nodes = 256;
  int max_nodes = 1 << 20;
  double tol = 1e-12;
};

struct SymbolSample {
  double phi = 0.0;
  std::complex<double> value;  // unit modulus
};

namespace detail {

inline std::complex<double> symbol_value(double phi, double gamma, double lambda) {
  std::complex<double> num(std::cos(phi) - lambda, -gamma * std::sin(phi));
  double mod = std::abs(num);
  if (mod < 1e-14)
    fail(ErrorCode::singular_symbol, "correlation symbol vanishes at phi = " + std::to_string(phi));
  return num / mod;
}

inline void require_free_fermion_point(const CouplingPoint& p) {
  validate(p);
  if (p.epsilon != 0.0)
    fail(ErrorCode::nonzero_epsilon, "the infinite-chain solver requires epsilon = 0");
}

inline int next_pow2_at_least(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// One offset-trapezoid pass: g_l for l in [-(L-1), L-1] at `nodes` nodes,
// stored at index l + L - 1. Uses an FFT over the sampled symbol:
//   g_l ~ (1/N) e^{i pi l / N} sum_j g(phi_j) w^{jl},  phi_j = 2pi (j+1/2)/N.
inline std::vector<double> coefficient_pass(int L, const CouplingPoint& pt, int nodes) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> samples(nodes);
  for (int j = 0; j < nodes; ++j)
    samples[j] = symbol_value(two_pi * (j + 0.5) / nodes, pt.gamma, pt.lambda);

  std::vector<std::complex<double>> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, samples);  // freq[k] = sum_j samples[j] e^{-2pi i jk/N}

  std::vector<double> g(2 * L - 1, 0.0);
  for (int l = -(L - 1); l <= L - 1; ++l) {
    int bin = ((nodes - l) % nodes + nodes) % nodes;
    std::complex<double> twiddle = std::polar(1.0, std::numbers::pi * l / nodes);
    std::complex<double> value = twiddle * freq[bin] / static_cast<double>(nodes);
    g[l + L - 1] = value.real();
  }
  return g;
}

// Refines until successive tables agree to quad.tol in max norm.
inline std::vector<double> coefficient_table(int L, const CouplingPoint& pt,
                                             const QuadratureSpec& quad) {
  require_free_fermion_point(pt);
  if (L < 1) fail(ErrorCode::invalid_argument, "coefficient table needs L >= 1");
  int nodes = next_pow2_at_least(std::max(quad.start_nodes, 4 * L));
  if (nodes > quad.max_nodes)
    fail(ErrorCode::quadrature_not_converged,
         "node cap below the minimum resolution for L = " + std::to_string(L));
  std::vector<double> prev = coefficient_pass(L, pt, nodes);
  while (nodes < quad.max_nodes) {
    nodes *= 2;
    std::vector<double> next = coefficient_pass(L, pt, nodes);
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      diff = std::max(diff, std::abs(next[i] - prev[i]));
    if (diff < quad.tol) return next;
    prev = std::move(next);
  }
  fail(ErrorCode::quadrature_not_converged,
       "coefficients not converged to " + std::to_string(quad.tol) + " at " +
           std::to_string(nodes) + " nodes (point too close to critical?)");
}

}  // namespace detail

inline SymbolSample symbol(double phi, const CouplingPoint& point) {
  detail::require_free_fermion_point(point);
  return {phi, detail::symbol_value(phi, point.gamma, point.lambda)};
}

// Single Fourier coefficient g_l, refined on the same doubling schedule as the
// table. Direct summation; the imaginary part is a numerical residue.
inline std::complex<double> fourier_coefficient(int l, const CouplingPoint& point,
                                                const QuadratureSpec& quad = {}) {
  detail::require_free_fermion_point(point);
  const double two_pi = 2.0 * std::numbers::pi;
  auto pass = [&](int nodes) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
      double phi = two_pi * (j + 0.5) / nodes;
      acc += std::polar(1.0, l * phi) * detail::symbol_value(phi, point.gamma, point.lambda);
    }
    return acc / static_cast<double>(nodes);
  };
  int nodes = detail::next_pow2_at_least(std::max(quad.start_nodes, 4 * (std::abs(l) + 1)));
  std::complex<double> prev = pass(nodes);
  while (nodes < quad.max_nodes) {
    nodes *= 2;
    std::complex<double> next = pass(nodes);
    if (std::abs(next - prev) < quad.tol) return next;
    prev = next;
  }
  fail(ErrorCode::quadrature_not_converged,
       "g_" + std::to_string(l) + " not converged within the node cap");
}

}  // namespace entflow::freefermion
