#include "pacp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pacp/errors.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/numeric.hpp"
#include "pacp/theory.hpp"

namespace pacp {

ReductionContext make_reduction_context(const AttachmentLog& g, std::int64_t tau,
                                        std::int64_t tau_prime, double alpha, double delta0,
                                        double delta1) {
  const int m = g.m();
  require(tau_prime >= 0 && tau_prime < tau && tau <= g.n(), ErrorKind::DomainError,
          "reduction requires 0 <= tau' < tau <= n");
  require(alpha > 0.0, ErrorKind::DomainError, "alpha must be positive");
  require(delta0 > -m && delta1 > -m, ErrorKind::DomainError, "deltas must exceed -m");
  ReductionContext ctx;
  ctx.n = g.n();
  ctx.m = m;
  ctx.tau = tau;
  ctx.tau_prime = tau_prime;
  ctx.alpha = alpha;
  ctx.delta0 = delta0;
  ctx.delta1 = delta1;
  ctx.bold = bold_vertices(g, tau_prime);
  ctx.log_w = log_arrival_weights(g, delta0, delta1);
  bind_weights(ctx.bold, ctx.log_w);
  ctx.r = std::count_if(ctx.bold.members.begin(), ctx.bold.members.end(),
                        [&](Vertex v) { return v > tau; });
  CompensatedSum acc;
  for (std::int64_t t = std::max<std::int64_t>(tau + 1, 2); t <= g.n(); ++t) {
    for (int i = 1; i <= m; ++i) {
      acc.add(-std::log1p((delta1 - delta0) * static_cast<double>(t) /
                          s_value(t, i, delta0, m)));
    }
  }
  ctx.log_s_ratio = acc.value();
  return ctx;
}

std::vector<Vertex> kernel_sample(const BoldSet& bold, std::int64_t n, Rng& rng) {
  std::vector<Vertex> pi(static_cast<std::size_t>(n + 1));
  for (Vertex v = 0; v <= n; ++v) pi[static_cast<std::size_t>(v)] = v;
  std::vector<Vertex> images = bold.members;
  for (std::size_t i = images.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(images[i - 1], images[j]);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    pi[static_cast<std::size_t>(bold.members[i])] = images[i];
  }
  return pi;
}

std::vector<Vertex> kernel_sample(const AttachmentLog& g, std::int64_t tau_prime, Rng& rng) {
  return kernel_sample(bold_vertices(g, tau_prime), g.n(), rng);
}

bool event_Bn(const ReductionContext& ctx) {
  const double dp = static_cast<double>(ctx.delta_prime());
  const double threshold =
      ctx.tau_prime == 0 ? -std::numeric_limits<double>::infinity()
                         : dp * (1.0 - ctx.alpha * dp / static_cast<double>(ctx.tau_prime));
  return static_cast<double>(ctx.bold.size()) >= threshold && ctx.r == ctx.delta();
}

namespace {

// log(e_r(w) / C(N, r)): the mean product over r-subsets.
double log_mean_elementary(std::span<const double> log_w, std::int64_t r) {
  const auto N = static_cast<std::int64_t>(log_w.size());
  require(r >= 0, ErrorKind::DomainError, "order must be nonnegative");
  if (r == 0) return 0.0;
  if (r > N) return -std::numeric_limits<double>::infinity();
  double center = 0.0;
  for (const double lw : log_w) center += lw;
  center /= static_cast<double>(N);
  double spread = 0.0;
  for (const double lw : log_w) spread = std::max(spread, std::fabs(lw - center));
  const auto ru = static_cast<std::size_t>(r);
  if (static_cast<double>(r) * spread < 600.0) {
    // e_j / C(seen, j) stays a convex combination of products of scaled weights.
    std::vector<double> avg(ru + 1, 0.0);
    avg[0] = 1.0;
    for (std::int64_t seen = 1; seen <= N; ++seen) {
      const double u = std::exp(log_w[static_cast<std::size_t>(seen - 1)] - center);
      const auto s = static_cast<double>(seen);
      for (std::int64_t j = std::min(seen, r); j >= 1; --j) {
        const auto ju = static_cast<std::size_t>(j);
        const auto jd = static_cast<double>(j);
        avg[ju] = ((s - jd) * avg[ju] + jd * u * avg[ju - 1]) / s;
      }
    }
    return static_cast<double>(r) * center + std::log(avg[ru]);
  }
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> le(ru + 1, ninf);
  le[0] = 0.0;
  for (std::int64_t seen = 1; seen <= N; ++seen) {
    const double lw = log_w[static_cast<std::size_t>(seen - 1)] - center;
    for (std::int64_t j = std::min(seen, r); j >= 1; --j) {
      const auto ju = static_cast<std::size_t>(j);
      const double a = le[ju];
      const double b = lw + le[ju - 1];
      if (b == ninf) continue;
      const double hi = std::max(a, b);
      le[ju] = hi + std::log1p(std::exp(std::min(a, b) - hi));
    }
  }
  return static_cast<double>(r) * center + le[ru] - log_binomial(N, r);
}

}  // namespace

double log_elementary_symmetric(std::span<const double> log_w, std::int64_t r) {
  const double mean = log_mean_elementary(log_w, r);
  if (r == 0 || mean == -std::numeric_limits<double>::infinity()) return mean;
  return mean + log_binomial(static_cast<std::int64_t>(log_w.size()), r);
}

double permuted_lr_log(const ReductionContext& ctx) {
  if (ctx.delta() == 0) return 0.0;
  CompensatedSum acc;
  acc.add(ctx.log_s_ratio);
  for (std::int64_t t = ctx.tau + 1; t <= ctx.n; ++t) {
    if (ctx.bold.contains(t)) continue;
    const double lw = ctx.log_w[static_cast<std::size_t>(t)];
    require(std::isfinite(lw), ErrorKind::UndefinedWeight,
            "weight of arrival " + std::to_string(t) + " is undefined");
    acc.add(lw);
  }
  acc.add(log_mean_elementary(ctx.bold.log_weights, ctx.r));
  return acc.value();
}

double permuted_lr(const ReductionContext& ctx) { return std::exp(permuted_lr_log(ctx)); }

double boundintegral(double beta) {
  require(beta > 0.0, ErrorKind::DomainError, "beta must be positive");
  return std::sqrt(std::numbers::pi * std::exp(1.0 / (2.0 * beta)) / beta);
}

PreconditionReport second_moment_preconditions(std::int64_t n, std::int64_t tau,
                                               std::int64_t tau_prime, double alpha) {
  PreconditionReport rep;
  auto fail = [&](const std::string& what) {
    rep.ok = false;
    rep.failures.push_back(what);
  };
  const double dp = static_cast<double>(n - tau_prime);
  const double d = static_cast<double>(n - tau);
  if (tau_prime < 3) fail("tau' >= 3");
  if (!(tau_prime < tau)) fail("tau' < tau");
  if (tau_prime >= 1 && !(alpha * dp / static_cast<double>(tau_prime) <= 0.5)) {
    fail("alpha Delta'/tau' <= 1/2");
  }
  if (tau_prime < 1) fail("alpha Delta'/tau' <= 1/2");
  if (!(d / dp <= 0.25)) fail("Delta/Delta' <= 1/4");
  return rep;
}

double second_moment_rhs_exponent(double alpha, double delta, double delta_prime,
                                  double tau_prime, int m, double c1, double c2) {
  return 4.0 * alpha * delta * delta_prime / tau_prime + 22.0 * m * delta * delta / tau_prime +
         2.0 / (3.0 * delta_prime) +
         std::sqrt(c1 * delta * delta / delta_prime) * std::exp(c2 * delta * delta / delta_prime);
}

double event_bn_rhs(double C, double alpha, double delta, double delta_prime, double tau_prime,
                    double delta0) {
  const double base = (C / alpha) * (1.0 + alpha * delta * delta_prime / tau_prime);
  return delta0 == 0.0 ? base * std::log(tau_prime) : base;
}

double azuma_default_c(int m, double delta0, double delta1) {
  const double M = std::pow(std::max(1.0, (m + delta1) / (m + delta0)), m);
  return 1.0 / (8.0 * M * M);
}

namespace {

void check_probe(const ProbeConfig& cfg) {
  require(cfg.m >= 1 && cfg.n >= 2, ErrorKind::DomainError, "probe requires n >= 2, m >= 1");
  require(cfg.delta0 > -cfg.m && cfg.delta1 > -cfg.m, ErrorKind::DomainError,
          "deltas must exceed -m");
  if (cfg.delta0 < 0.0) {
    throw Error(ErrorKind::UnsupportedRegime, "reduction probes do not cover delta0 < 0");
  }
  require(cfg.replicates >= 1, ErrorKind::DomainError, "replicates must be >= 1");
}

McResult finish(const ProbeConfig& cfg, std::vector<std::string> columns,
                std::vector<ReplicateRecord> recs) {
  McResult res;
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  res.columns = std::move(columns);
  res.records = std::move(recs);
  res.failed = failed_count(res.records);
  return res;
}

}  // namespace

McResult second_moment_probe(const ProbeConfig& cfg) {
  check_probe(cfg);
  const auto pre = second_moment_preconditions(cfg.n, cfg.tau, cfg.tau_prime, cfg.alpha);
  if (!pre.ok && cfg.strict) {
    std::string what = "failed hypotheses:";
    for (const auto& f : pre.failures) what += " [" + f + "]";
    throw Error(ErrorKind::PreconditionViolated, what);
  }
  require(cfg.tau_prime >= 0 && cfg.tau_prime < cfg.tau && cfg.tau <= cfg.n,
          ErrorKind::PreconditionViolated, "requires 0 <= tau' < tau <= n");
  auto recs = run_replicates(cfg.replicates, cfg.seed, cfg.threads, [&](std::int64_t, Rng& rng) {
    const auto g = simulate(cfg.n, cfg.m, DeltaProfile::constant(cfg.delta0), rng);
    const auto ctx =
        make_reduction_context(g, cfg.tau, cfg.tau_prime, cfg.alpha, cfg.delta0, cfg.delta1);
    const bool b = event_Bn(ctx);
    const double log_y = permuted_lr_log(ctx);
    return std::vector<double>{b ? std::exp(2.0 * log_y) : 0.0, b ? std::exp(log_y) : 0.0,
                               b ? 1.0 : 0.0, log_y, static_cast<double>(ctx.bold.size())};
  });
  auto res = finish(cfg, {"y2_b", "y_b", "b", "log_y", "bold"}, std::move(recs));
  const auto y2 = mean_stat(column(res.records, 0));
  const auto y1 = mean_stat(column(res.records, 1));
  const auto pb = mean_stat(column(res.records, 2));
  res.estimate = y2.mean;
  res.stderr_ = y2.stderr_;
  const double d = static_cast<double>(cfg.n - cfg.tau);
  const double dp = static_cast<double>(cfg.n - cfg.tau_prime);
  const double expo = second_moment_rhs_exponent(cfg.alpha, d, dp,
                                                  static_cast<double>(cfg.tau_prime), cfg.m,
                                                  cfg.c1, cfg.c2);
  res.aux["mean_y_b"] = y1.mean;
  res.aux["stderr_y_b"] = y1.stderr_;
  res.aux["p_b"] = pb.mean;
  res.aux["rhs_exponent"] = expo;
  res.aux["rhs"] = std::exp(expo);
  res.aux["preconditions_ok"] = pre.ok;
  res.aux["precondition_failures"] = pre.failures;
  return res;
}

McResult event_bn_failure_probe(const ProbeConfig& cfg) {
  check_probe(cfg);
  require(cfg.tau_prime >= 2, ErrorKind::PreconditionViolated, "requires tau' >= 2");
  require(cfg.tau_prime < cfg.tau && cfg.tau <= cfg.n, ErrorKind::PreconditionViolated,
          "requires tau' < tau <= n");
  const auto profile = cfg.tau < cfg.n ? DeltaProfile::step(cfg.delta0, cfg.delta1, cfg.tau)
                                       : DeltaProfile::constant(cfg.delta0);
  auto recs = run_replicates(cfg.replicates, cfg.seed, cfg.threads, [&](std::int64_t, Rng& rng) {
    const auto g = simulate(cfg.n, cfg.m, profile, rng);
    const auto ctx =
        make_reduction_context(g, cfg.tau, cfg.tau_prime, cfg.alpha, cfg.delta0, cfg.delta1);
    return std::vector<double>{event_Bn(ctx) ? 0.0 : 1.0, static_cast<double>(ctx.bold.size()),
                               static_cast<double>(ctx.r)};
  });
  auto res = finish(cfg, {"bn_fail", "bold", "bold_late"}, std::move(recs));
  const auto fail = mean_stat(column(res.records, 0));
  res.estimate = fail.mean;
  res.stderr_ = fail.stderr_;
  const auto bold = mean_stat(column(res.records, 1));
  const auto late = mean_stat(column(res.records, 2));
  const double d = static_cast<double>(cfg.n - cfg.tau);
  const double dp = static_cast<double>(cfg.n - cfg.tau_prime);
  res.aux["mean_bold"] = bold.mean;
  res.aux["mean_bold_late"] = late.mean;
  res.aux["delta_prime"] = dp;
  res.aux["threshold"] = dp * (1.0 - cfg.alpha * dp / static_cast<double>(cfg.tau_prime));
  res.aux["rhs"] =
      event_bn_rhs(cfg.C, cfg.alpha, d, dp, static_cast<double>(cfg.tau_prime), cfg.delta0);
  return res;
}

McResult martingale_tail_probe(const ProbeConfig& cfg) {
  check_probe(cfg);
  require(cfg.tau_prime >= 3 && cfg.tau_prime < cfg.n, ErrorKind::PreconditionViolated,
          "requires 3 <= tau' < n");
  const auto mn = mean_weight_mn(cfg.tau_prime, cfg.n, cfg.delta0, cfg.delta1, cfg.m);
  const double dp = static_cast<double>(cfg.n - cfg.tau_prime);
  auto recs = run_replicates(cfg.replicates, cfg.seed, cfg.threads, [&](std::int64_t, Rng& rng) {
    const auto g = simulate(cfg.n, cfg.m, DeltaProfile::constant(cfg.delta0), rng);
    const auto lw = log_arrival_weights(g, cfg.delta0, cfg.delta1);
    CompensatedSum z;
    for (std::int64_t k = cfg.tau_prime + 1; k <= cfg.n; ++k) {
      z.add(std::exp(lw[static_cast<std::size_t>(k)]));
    }
    return std::vector<double>{z.value() / dp - mn.value};
  });
  auto res = finish(cfg, {"z_minus_mn"}, std::move(recs));
  const auto dev = column(res.records, 0);
  const auto st = mean_stat(dev);
  res.estimate = st.mean;
  res.stderr_ = st.stderr_;
  const double c = cfg.azuma_c > 0.0 ? cfg.azuma_c : azuma_default_c(cfg.m, cfg.delta0, cfg.delta1);
  std::vector<double> grid = cfg.x_grid;
  if (grid.empty()) grid = {0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<double> freq;
  std::vector<double> bound;
  std::int64_t violations = 0;
  for (const double x : grid) {
    const auto hits = std::count_if(dev.begin(), dev.end(), [&](double v) { return v >= x; });
    const double f = dev.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(dev.size());
    const double b = std::exp(-c * dp * x * x);
    freq.push_back(f);
    bound.push_back(b);
    if (f > b) ++violations;
  }
  res.aux["m_n"] = mn.value;
  res.aux["m_n_lower"] = mn.lower;
  res.aux["m_n_upper"] = mn.upper;
  res.aux["c"] = c;
  res.aux["x"] = grid;
  res.aux["tail_frequency"] = freq;
  res.aux["bound"] = bound;
  res.aux["violations"] = violations;
  return res;
}

ProbeRegime contiguity_regime(std::int64_t n) {
  require(n >= 8, ErrorKind::DomainError, "regime requires n >= 8");
  const double dn = static_cast<double>(n);
  // Integer floor of n^{2/3}: largest k with k^3 <= n^2, corrected from pow.
  auto k = static_cast<std::int64_t>(std::pow(dn, 2.0 / 3.0));
  const auto n2 = static_cast<long double>(n) * static_cast<long double>(n);
  while (static_cast<long double>(k + 1) * (k + 1) * (k + 1) <= n2) ++k;
  while (k > 0 && static_cast<long double>(k) * k * k > n2) --k;
  ProbeRegime r;
  r.tau = n - static_cast<std::int64_t>(std::floor(std::cbrt(dn) / std::log(dn)));
  r.tau_prime = n - k;
  r.alpha = std::log(dn);
  return r;
}

}  // namespace pacp
