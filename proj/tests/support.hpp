#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "pacp/graph.hpp"
#include "pacp/simulator.hpp"

namespace pacp::oracle {

// Visits every support log of (n, m) once, with each arrival's targets in
// nondecreasing order (one representative per multiset of targets).
inline void for_each_support(std::int64_t n, int m,
                             const std::function<void(const AttachmentLog&)>& fn) {
  std::vector<Vertex> flat(static_cast<std::size_t>(std::max<std::int64_t>(0, n - 1) * m), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == flat.size()) {
      fn(AttachmentLog(n, m, flat));
      return;
    }
    const auto t = static_cast<Vertex>(pos / static_cast<std::size_t>(m)) + 2;
    const auto i = pos % static_cast<std::size_t>(m);
    const Vertex lo = i == 0 ? 0 : flat[pos - 1];
    for (Vertex v = lo; v < t; ++v) {
      flat[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);
}

// Log-likelihood by replaying the log with explicit per-vertex weights: the
// normalizer is the summed weight itself, not a closed form. Each arrival
// contributes the number of distinct orderings of its targets.
inline double replay_loglik(const AttachmentLog& g, const DeltaProfile& p) {
  const auto n = g.n();
  const int m = g.m();
  std::vector<double> deg(static_cast<std::size_t>(n + 1), 0.0);
  deg[0] = deg[1] = m;
  double ll = 0.0;
  for (std::int64_t t = 2; t <= n; ++t) {
    const double d = p.at(t);
    for (int i = 0; i < m; ++i) {
      double total = 0.0;
      for (std::int64_t v = 0; v < t; ++v) total += deg[static_cast<std::size_t>(v)] + d;
      const auto v = g.target(t, i + 1);
      ll += std::log((deg[static_cast<std::size_t>(v)] + d) / total);
      deg[static_cast<std::size_t>(v)] += 1.0;
    }
    deg[static_cast<std::size_t>(t)] += m;
    std::vector<Vertex> row(g.row(t).begin(), g.row(t).end());
    std::sort(row.begin(), row.end());
    double orderings = std::lgamma(m + 1.0);
    for (std::size_t a = 0; a < row.size();) {
      std::size_t b = a;
      while (b < row.size() && row[b] == row[a]) ++b;
      orderings -= std::lgamma(static_cast<double>(b - a) + 1.0);
      a = b;
    }
    ll += orderings;
  }
  return ll;
}

// Mixed-radix index of an m = 1 log: arrival t has t choices.
inline std::int64_t m1_index(const AttachmentLog& g) {
  std::int64_t idx = 0;
  for (std::int64_t t = g.n(); t >= 2; --t) idx = idx * t + g.target(t, 1);
  return idx;
}

// Kolmogorov distribution tail with Stephens' small-sample correction.
inline double ks_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double p = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    p += term;
    if (std::fabs(term) < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Pearson chi-square p-value of observed counts against expected probabilities.
inline double chi2_pvalue(const std::vector<std::int64_t>& counts, const std::vector<double>& probs) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = total * probs[i];
    if (e <= 0.0) continue;
    stat += (static_cast<double>(counts[i]) - e) * (static_cast<double>(counts[i]) - e) / e;
    ++cells;
  }
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace pacp::oracle
