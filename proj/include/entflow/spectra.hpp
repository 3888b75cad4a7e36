#pragma once

// Entropies and majorization machinery on block spectra.
//
// A block's spectrum is the direct product of L binary mode spectra
// {q_j, 1-q_j}; entropies are therefore mode-additive, and the k largest
// product eigenvalues can be enumerated in exact descending order without
// forming the 2^L-element product. Majorization p < p' (p' "more ordered")
// is the full set of partial-sum inequalities cumsum(p)_n <= cumsum(p')_n;
// verdicts on truncated spectra carry the truncation tails as slack so that
// a true violation is never masked by more than the discarded mass.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "entflow/model.hpp"

namespace entflow::spectra {

inline double binary_entropy(double q) {
  if (!(q >= 0.5 && q <= 1.0))
    fail(ErrorCode::domain_error, "binary_entropy needs q in [1/2, 1]");
  double s = 0.0;
  if (q > 0.0 && q < 1.0) s = -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
  return s;
}

inline double block_entropy(const ModeOccupations& modes) {
  double s = 0.0;
  for (double q : modes.q) s += binary_entropy(q);
  return s;
}

// -sum p log2 p over an explicit eigenvalue list (0 log 0 = 0).
inline double shannon_entropy_bits(const std::vector<double>& probs) {
  double s = 0.0;
  for (double p : probs)
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

// Renyi entropy of index alpha in bits, mode-additively:
//   S_alpha = sum_j (1/(1-alpha)) log2(q^alpha + (1-q)^alpha),
// with alpha = infinity giving the min-entropy -log2 p_max = -sum log2 q_j.
inline double renyi_entropy(const ModeOccupations& modes, double alpha) {
  if (std::isinf(alpha) && alpha > 0) {
    double s = 0.0;
    for (double q : modes.q) s -= std::log2(q);
    return s;
  }
  if (!(alpha > 0.0) || alpha == 1.0)
    fail(ErrorCode::domain_error, "Renyi index must be positive and != 1");
  double s = 0.0;
  for (double q : modes.q)
    s += std::log2(std::pow(q, alpha) + std::pow(1.0 - q, alpha)) / (1.0 - alpha);
  return s;
}

// The k largest eigenvalues of the product spectrum, descending, truncated at
// eps_acc, plus an upper bound on the discarded mass.
struct TruncatedSpectrum {
  std::vector<double> probs;  // descending, all >= eps_acc
  double tail_bound = 0.0;
  double eps_acc = 0.0;
};

struct TopKOptions {
  std::size_t max_frontier = std::size_t(1) << 22;
};

// Best-first enumeration over flip sets. Modes are branched in ascending-q
// order; flipping mode j multiplies the eigenvalue by (1-q_j)/q_j <= 1, and
// each flip set is generated exactly once by the extend/slide tree, so the
// heap pops values in descending order. Eigenvalues are always recomputed as
// the full left-to-right product over modes, which keeps them bit-identical
// with an exhaustive enumeration using the same factor order. Modes with
// q = 1 (within 1e-15) never branch.
inline TruncatedSpectrum top_k_product_spectrum(const ModeOccupations& modes, int k,
                                                double eps_acc, const TopKOptions& opts = {}) {
  if (k < 1) fail(ErrorCode::invalid_argument, "k must be >= 1");
  if (!(eps_acc > 0.0 && eps_acc < 1.0))
    fail(ErrorCode::invalid_argument, "eps_acc must lie in (0, 1)");

  std::vector<double> q = modes.q;
  std::sort(q.begin(), q.end());  // ascending: branch the most mixed modes first
  int branchable = 0;
  while (branchable < static_cast<int>(q.size()) && q[branchable] < 1.0 - 1e-15) ++branchable;

  auto value_of = [&](const std::vector<int32_t>& flips) {
    double p = 1.0;
    std::size_t f = 0;
    for (int j = 0; j < static_cast<int>(q.size()); ++j) {
      if (f < flips.size() && flips[f] == j) {
        p *= 1.0 - q[j];
        ++f;
      } else {
        p *= q[j];
      }
    }
    return p;
  };

  struct Node {
    double p;
    std::vector<int32_t> flips;  // ascending branch positions
  };
  auto less_p = [](const Node& a, const Node& b) { return a.p < b.p; };
  std::priority_queue<Node, std::vector<Node>, decltype(less_p)> frontier(less_p);
  frontier.push({value_of({}), {}});

  TruncatedSpectrum out;
  out.eps_acc = eps_acc;
  while (!frontier.empty() && static_cast<int>(out.probs.size()) < k) {
    Node node = frontier.top();
    frontier.pop();
    if (node.p < eps_acc) break;  // descending pops: everything after is smaller
    out.probs.push_back(node.p);

    if (node.flips.empty()) {
      if (branchable > 0) frontier.push({value_of({0}), {0}});
    } else {
      int last = node.flips.back();
      if (last + 1 < branchable) {
        std::vector<int32_t> extended = node.flips;
        extended.push_back(last + 1);
        frontier.push({value_of(extended), std::move(extended)});
        std::vector<int32_t> slid = node.flips;
        slid.back() = last + 1;
        frontier.push({value_of(slid), std::move(slid)});
      }
    }
    if (frontier.size() > opts.max_frontier)
      fail(ErrorCode::capacity_exceeded, "enumeration frontier exceeded its memory budget");
  }

  std::stable_sort(out.probs.begin(), out.probs.end(), std::greater<>());
  double total = 0.0;
  for (double p : out.probs) total += p;
  out.tail_bound = std::max(0.0, 1.0 - total);
  return out;
}

// Result of a partial-sum comparison. worst_margin is the most negative value
// of cumsum(p')_n - cumsum(p)_n over all prefixes; worst_index is the length n
// of that prefix. holds <=> worst_margin >= -slack_used.
struct MajorizationVerdict {
  bool holds = false;
  double worst_margin = 0.0;
  int worst_index = 0;
  double slack_used = 0.0;
};

namespace detail {

inline MajorizationVerdict partial_sum_verdict(const std::vector<double>& p,
                                               const std::vector<double>& p_prime, double slack) {
  MajorizationVerdict v;
  v.slack_used = slack;
  v.worst_margin = std::numeric_limits<double>::infinity();
  std::size_t n = std::max(p.size(), p_prime.size());
  double cp = 0.0, cpp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cp += i < p.size() ? p[i] : 0.0;
    cpp += i < p_prime.size() ? p_prime[i] : 0.0;
    double margin = cpp - cp;
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      v.worst_index = static_cast<int>(i) + 1;
    }
  }
  if (n == 0) v.worst_margin = 0.0;
  v.holds = v.worst_margin >= -slack;
  return v;
}

}  // namespace detail

// Does p < p' hold (p majorized by p', p' further along the flow)? Truncated
// spectra are compared with slack = both tail bounds + 1e-12, padding the
// shorter spectrum with zeros.
inline MajorizationVerdict majorize(const TruncatedSpectrum& p, const TruncatedSpectrum& p_prime) {
  if (p.eps_acc != p_prime.eps_acc)
    fail(ErrorCode::incompatible_truncation, "spectra truncated at different eps_acc");
  return detail::partial_sum_verdict(p.probs, p_prime.probs,
                                     p.tail_bound + p_prime.tail_bound + 1e-12);
}

// Mode-wise ordering q_j(a) <= q_j(b) for every j, b further along the flow.
// Equivalent to majorization of each binary mode spectrum.
inline MajorizationVerdict modewise_majorize(const ModeOccupations& a, const ModeOccupations& b) {
  if (a.sites != b.sites || a.q.size() != b.q.size())
    fail(ErrorCode::length_mismatch, "mode vectors of different length");
  MajorizationVerdict v;
  v.slack_used = 1e-12;
  v.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < a.q.size(); ++j) {
    double margin = b.q[j] - a.q[j];
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      v.worst_index = static_cast<int>(j) + 1;
    }
  }
  if (a.q.empty()) v.worst_margin = 0.0;
  v.holds = v.worst_margin >= -v.slack_used;
  return v;
}

// Product-majorization step of the composition argument: given x < x' and
// y < y', the outer products z = x (x) y and z' = x' (x) y' must again satisfy
// z < z' (their transfer matrix is a tensor product of doubly stochastic
// matrices). Inputs are exact probability vectors; the returned verdict on
// valid premises failing would indicate a bug, not a runtime condition.
inline MajorizationVerdict lemma_product_majorization(const std::vector<double>& x,
                                                      const std::vector<double>& x_prime,
                                                      const std::vector<double>& y,
                                                      const std::vector<double>& y_prime) {
  auto outer_sorted = [](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> z;
    z.reserve(u.size() * v.size());
    for (double a : u)
      for (double b : v) z.push_back(a * b);
    std::stable_sort(z.begin(), z.end(), std::greater<>());
    return z;
  };
  std::vector<double> z = outer_sorted(x, y);
  std::vector<double> z_prime = outer_sorted(x_prime, y_prime);
  return detail::partial_sum_verdict(z, z_prime, 1e-12);
}

// Block-size ordering: the spectrum of the larger block (L+2 sites) is
// majorized by that of the smaller.
inline MajorizationVerdict blocksize_majorize(const ModeOccupations& modes_small,
                                              const ModeOccupations& modes_large, int k,
                                              double eps_acc = 1e-16) {
  if (modes_large.sites != modes_small.sites + 2)
    fail(ErrorCode::bad_increment, "block sizes must differ by exactly 2");
  TruncatedSpectrum p_large = top_k_product_spectrum(modes_large, k, eps_acc);
  TruncatedSpectrum p_small = top_k_product_spectrum(modes_small, k, eps_acc);
  return majorize(p_large, p_small);
}

}  // namespace entflow::spectra
