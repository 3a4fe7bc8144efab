#include "pacp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "pacp/errors.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/numeric.hpp"
#include "pacp/simulator.hpp"
#include "pacp/theory.hpp"

namespace pacp {

const char* mle_status_name(MleStatus s) noexcept {
  switch (s) {
    case MleStatus::Converged: return "Converged";
    case MleStatus::NoInteriorRoot: return "NoInteriorRoot";
    case MleStatus::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

ScoreWindow::ScoreWindow(const AttachmentLog& g, std::int64_t first, std::int64_t last)
    : m_(g.m()), first_(std::max<std::int64_t>(first, 2)), last_(last) {
  require(last_ <= g.n() && first_ <= last_, ErrorKind::DomainError,
          "score window must be a nonempty range of arrivals within [2, n]");
  const auto dd = g.attachment_degrees();
  std::map<std::int64_t, std::int64_t> counts;
  const auto begin = static_cast<std::size_t>((first_ - 2) * m_);
  const auto end = static_cast<std::size_t>((last_ - 1) * m_);
  for (std::size_t idx = begin; idx < end; ++idx) ++counts[dd[idx]];
  degree_counts_.assign(counts.begin(), counts.end());
}

double ScoreWindow::score(double delta) const {
  CompensatedSum acc;
  for (const auto& [k, c] : degree_counts_) {
    acc.add(static_cast<double>(c) / (static_cast<double>(k) + delta));
  }
  for (std::int64_t t = first_; t <= last_; ++t) {
    const double td = static_cast<double>(t);
    for (int i = 1; i <= m_; ++i) acc.add(-td / s_value(t, i, delta, m_));
  }
  return acc.value();
}

double score(const AttachmentLog& g, std::int64_t first, std::int64_t last, double delta) {
  require(delta > -g.m(), ErrorKind::DomainError, "delta must exceed -m");
  return ScoreWindow(g, first, last).score(delta);
}

RootResult solve_score(const ScoreWindow& w, const MleOptions& opt) {
  RootResult out;
  const double lo_limit = -w.m() + opt.guard * w.m();
  double a = opt.delta_init;
  double sa = w.score(a);
  double b = a;
  double sb = sa;
  out.bracket_lo = out.bracket_hi = a;
  out.score_lo = out.score_hi = sa;
  if (sa == 0.0) {
    out.status = MleStatus::Converged;
    out.estimate = a;
    return out;
  }
  bool bracketed = false;
  if (sa > 0.0) {
    // Expand to the right by doubling the step.
    for (double step = 1.0;; step *= 2.0) {
      b = std::min(opt.delta_init + step, opt.delta_max);
      sb = w.score(b);
      if (sb <= 0.0) {
        bracketed = true;
        break;
      }
      a = b;
      sa = sb;
      if (b >= opt.delta_max) break;
    }
  } else {
    // Halve the distance to the lower limit -m + guard.
    const double gap = opt.delta_init - lo_limit;
    for (double frac = 0.5;; frac *= 0.5) {
      const bool last = gap * frac <= opt.guard * w.m();
      a = last ? lo_limit : lo_limit + gap * frac;
      sa = w.score(a);
      if (sa >= 0.0) {
        bracketed = true;
        break;
      }
      b = a;
      sb = sa;
      if (last) break;
    }
  }
  out.bracket_lo = a;
  out.bracket_hi = b;
  out.score_lo = sa;
  out.score_hi = sb;
  if (!bracketed) {
    out.status = MleStatus::NoInteriorRoot;
    out.estimate = std::numeric_limits<double>::quiet_NaN();
    out.score_at_estimate = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double best = std::fabs(sa) < std::fabs(sb) ? a : b;
  double best_score = std::fabs(sa) < std::fabs(sb) ? sa : sb;
  for (int it = 0; it < opt.max_iterations && std::fabs(best_score) > opt.tolerance; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double sm = w.score(mid);
    out.iterations = it + 1;
    if (std::fabs(sm) < std::fabs(best_score)) {
      best = mid;
      best_score = sm;
    }
    if (sm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  out.estimate = best;
  out.score_at_estimate = best_score;
  out.status = std::fabs(best_score) <= opt.tolerance ? MleStatus::Converged
                                                      : MleStatus::NotConverged;
  return out;
}

MleResult mle(const AttachmentLog& g, std::int64_t tau, const MleOptions& opt) {
  require(tau >= 2 && tau < g.n(), ErrorKind::DomainError,
          "mle requires 2 <= tau < n so both windows are nonempty");
  MleResult out;
  out.pre = solve_score(ScoreWindow(g, 2, tau), opt);
  out.post = solve_score(ScoreWindow(g, tau + 1, g.n()), opt);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.se0 = out.se1 = nan;
  const int m = g.m();
  if (out.pre.status == MleStatus::Converged) {
    const double nu0 = asymptotic_variance(0, out.pre.estimate, out.pre.estimate, m).value;
    out.se0 = 1.0 / std::sqrt(static_cast<double>(tau) * nu0);
    if (out.post.status == MleStatus::Converged) {
      const double nu1 = asymptotic_variance(1, out.pre.estimate, out.post.estimate, m).value;
      out.se1 = 1.0 / std::sqrt(static_cast<double>(g.n() - tau) * nu1);
    }
  }
  return out;
}

std::pair<double, double> confidence_interval(const MleResult& r, int j, std::int64_t tau,
                                              std::int64_t n, int m, double level) {
  require(level > 0.0 && level < 1.0, ErrorKind::DomainError, "level must lie in (0, 1)");
  require(j == 0 || j == 1, ErrorKind::DomainError, "j must be 0 or 1");
  require(r.converged(), ErrorKind::NoInteriorRoot, "confidence interval needs both estimates");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  const double est = j == 0 ? r.pre.estimate : r.post.estimate;
  const double len = static_cast<double>(j == 0 ? tau : n - tau);
  const double nu = asymptotic_variance(j, r.pre.estimate, r.post.estimate, m).value;
  const double half = z / std::sqrt(len * nu);
  return {est - half, est + half};
}

TestVerdict lr_test(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1) {
  TestVerdict v;
  v.mode = TestMode::KnownParams;
  v.delta0 = delta0;
  v.delta1 = delta1;
  v.statistic = log_lr(g, tau, delta0, delta1);
  v.reject = v.statistic > 0.0;
  return v;
}

TestVerdict plugin_lr_test(const AttachmentLog& g, std::int64_t tau, const MleOptions& opt) {
  const auto r = mle(g, tau, opt);
  if (r.pre.status != MleStatus::Converged) {
    throw Error(ErrorKind::NoInteriorRoot, std::string("pre-change window: ") +
                                               mle_status_name(r.pre.status));
  }
  if (r.post.status != MleStatus::Converged) {
    throw Error(ErrorKind::NoInteriorRoot, std::string("post-change window: ") +
                                               mle_status_name(r.post.status));
  }
  TestVerdict v;
  v.mode = TestMode::PluginMle;
  v.delta0 = r.pre.estimate;
  v.delta1 = r.post.estimate;
  v.statistic = log_lr(g, tau, v.delta0, v.delta1);
  v.reject = v.statistic > 0.0;
  return v;
}

Localization localize_tau(const AttachmentLog& g, double delta0, double delta1) {
  const int m = g.m();
  require(delta0 > -m && delta1 > -m, ErrorKind::DomainError, "deltas must exceed -m");
  const std::int64_t n = g.n();
  Localization out;
  out.profile.resize(static_cast<std::size_t>(n + 1));
  const auto dd = g.attachment_degrees();
  CompensatedSum acc;
  acc.add(log_likelihood(g, DeltaProfile::constant(delta1)).value);
  out.profile[0] = acc.value();
  // Moving tau -> tau + 1 switches arrival tau + 1 from delta1 to delta0.
  for (std::int64_t tau = 0; tau < n; ++tau) {
    const std::int64_t t = tau + 1;
    if (t >= 2) {
      for (int i = 1; i <= m; ++i) {
        const double d = static_cast<double>(dd[static_cast<std::size_t>((t - 2) * m + i - 1)]);
        acc.add(std::log(d + delta0) - std::log(d + delta1));
        acc.add(std::log(s_value(t, i, delta1, m)) - std::log(s_value(t, i, delta0, m)));
      }
    }
    out.profile[static_cast<std::size_t>(t)] = acc.value();
  }
  out.tau_hat = std::max_element(out.profile.begin(), out.profile.end()) - out.profile.begin();
  return out;
}

}  // namespace pacp
