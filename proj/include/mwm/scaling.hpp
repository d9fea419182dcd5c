// mwm/scaling.hpp -- weight preprocessing: small-edge filtering, rescaling,
// rounding to powers of (1+eps), and the level arithmetic shared by the
// solver and the verifier.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwm/graph.hpp"

namespace mwm {

// floor(log_{1+eps}(x)) by repeated multiplication. Avoids floating log so
// that exact powers of (1+eps) land on their own level, and so results agree
// bit-for-bit with the power tables built below.
inline int ilog(double x, double eps) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("ilog: x must be positive and finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("ilog: eps must be positive");
  const double b = 1.0 + eps;
  if (x >= 1.0) {
    double p = 1.0;
    int i = 0;
    while (p * b <= x) {
      p *= b;
      ++i;
    }
    return i;
  }
  double p = 1.0;
  int i = 0;
  while (p > x) {
    p /= b;
    --i;
  }
  return i;
}

// (1+eps)^{ilog(x)}: the largest power of (1+eps) that is <= x.
inline double round_down(double x, double eps) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("round_down: x must be positive and finite");
  const double b = 1.0 + eps;
  if (x >= 1.0) {
    double p = 1.0;
    while (p * b <= x) p *= b;
    return p;
  }
  double p = 1.0;
  while (p > x) p /= b;
  return p;
}

// Smallest k >= 0 with (1+eps)^{-k} <= eps, i.e. eps * (1+eps)^k >= 1.
// Grows as Theta(eps^{-1} log eps^{-1}).
inline int compute_kmin(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("compute_kmin: eps must lie in (0,1)");
  const double b = 1.0 + eps;
  double p = 1.0;
  int k = 0;
  while (eps * p < 1.0) {
    p *= b;
    ++k;
  }
  return k;
}

// Fixed per-solve epsilon parameters and the power table (1+eps)^i for
// i in [-k_min, k_max+1]. The extra top slot exists because the invariant
// checks compare against (1+eps)^{j_v + 1} with j_v up to k_max.
// Immutable after construction.
class EpsilonConfig {
 public:
  // eps defaults to eps_prime/4: the loss budget has to cover rounding,
  // dropped small edges and the 2*eps dual slack together, and eps_prime/2
  // leaves nothing for the first two. End-to-end ratio is acceptance-tested.
  EpsilonConfig(double eps_prime, int n_total) : EpsilonConfig(eps_prime, eps_prime / 4.0, n_total) {}

  EpsilonConfig(double eps_prime, double eps, int n_total) : eps_prime_(eps_prime), eps_(eps) {
    if (!(eps_prime > 0.0) || !(eps_prime < 1.0)) throw std::invalid_argument("eps_prime must lie in (0,1)");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (n_total < 1) throw std::invalid_argument("n_total must be positive");
    k_min_ = compute_kmin(eps);
    k_max_ = ilog(static_cast<double>(n_total) / eps_prime, eps);
    // One multiplication chain in each direction keeps table entries
    // bit-identical with ilog/round_down above.
    table_.assign(static_cast<std::size_t>(k_min_) + k_max_ + 2, 0.0);
    const double b = 1.0 + eps;
    table_[static_cast<std::size_t>(k_min_)] = 1.0;
    for (int i = 1; i <= k_max_ + 1; ++i) table_[idx(i)] = table_[idx(i - 1)] * b;
    for (int i = -1; i >= -k_min_; --i) table_[idx(i)] = table_[idx(i + 1)] / b;
  }

  double eps_prime() const { return eps_prime_; }
  double eps() const { return eps_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  int min_level() const { return -k_min_; }

  // (1+eps)^i for i in [-k_min, k_max+1].
  double power(int i) const { return table_[idx(i)]; }

  // Table-based ilog for x >= power(-k_min), clamped into [-k_min, k_max].
  int level_of(double x) const {
    auto it = std::upper_bound(table_.begin(), table_.end(), x);
    int i = static_cast<int>(it - table_.begin()) - 1 - k_min_;
    return std::clamp(i, -k_min_, k_max_);
  }

 private:
  std::size_t idx(int i) const { return static_cast<std::size_t>(i + k_min_); }

  double eps_prime_;
  double eps_;
  int k_min_ = 0;
  int k_max_ = 0;
  std::vector<double> table_;
};

struct ScaledEdge {
  int u = -1;
  int v = -1;
  int orig_index = -1;
  double w_orig = 0.0;     // original units
  double w_rounded = 0.0;  // rescaled and rounded: exactly power(level)
  int level = 0;           // iLog of the rescaled weight
};

// Output of preprocessing: surviving edges with rescaled power-of-(1+eps)
// weights, plus the scale divisor needed to report results in original units.
class ScaledGraph {
 public:
  ScaledGraph(const BipartiteGraph& base, double scale, std::vector<ScaledEdge> kept, std::vector<int> dropped)
      : base_(&base), scale_(scale), kept_(std::move(kept)), dropped_(std::move(dropped)) {}

  const BipartiteGraph& base() const { return *base_; }
  double scale() const { return scale_; }
  const std::vector<ScaledEdge>& kept() const { return kept_; }
  const std::vector<int>& dropped() const { return dropped_; }  // original edge indices
  std::size_t dropped_count() const { return dropped_.size(); }

 private:
  const BipartiteGraph* base_;
  double scale_;
  std::vector<ScaledEdge> kept_;
  std::vector<int> dropped_;
};

// Rescale by `scale` and round down; edges with w/scale < 1 are dropped
// (zero-weight edges always fall here).
inline ScaledGraph preprocess_with_scale(const BipartiteGraph& g, const EpsilonConfig& cfg, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive and finite");
  std::vector<ScaledEdge> kept;
  std::vector<int> dropped;
  kept.reserve(static_cast<std::size_t>(g.m()));
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    const double x = ed.w / scale;
    if (x < 1.0) {
      dropped.push_back(e);
      continue;
    }
    // level_of clamps at k_max: the top edge rescales to n/eps' up to
    // floating error, never to a genuine higher level.
    const int level = cfg.level_of(x);
    kept.push_back(ScaledEdge{ed.u, ed.v, e, ed.w, cfg.power(level), level});
  }
  return ScaledGraph(g, scale, std::move(kept), std::move(dropped));
}

// Static preprocessing: threshold and scale are eps' * w_max / n.
inline ScaledGraph preprocess(const BipartiteGraph& g, const EpsilonConfig& cfg) {
  if (g.m() == 0) return ScaledGraph(g, 1.0, {}, {});
  const double w_max = g.max_weight();
  if (!(w_max > 0.0)) throw std::invalid_argument("preprocess: graph has no edge of positive weight");
  const double scale = cfg.eps_prime() * w_max / static_cast<double>(g.n_total());
  return preprocess_with_scale(g, cfg, scale);
}

}  // namespace mwm
