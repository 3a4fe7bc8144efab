#include "pacp/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "pacp/errors.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/simulator.hpp"
#include "pacp/theory.hpp"

namespace pacp {

namespace {

void check_spec(const CampaignSpec& s) {
  require(s.n >= 3 && s.m >= 1, ErrorKind::DomainError, "campaign requires n >= 3, m >= 1");
  require(s.delta0 > -s.m && s.delta1 > -s.m, ErrorKind::DomainError, "deltas must exceed -m");
  require(s.tau >= 2 && s.tau < s.n, ErrorKind::DomainError, "campaign requires 2 <= tau < n");
  require(s.replicates >= 1, ErrorKind::DomainError, "replicates must be >= 1");
}

McResult wrap(const CampaignSpec& s, std::vector<std::string> columns,
              std::vector<ReplicateRecord> recs) {
  McResult res;
  res.replicates = s.replicates;
  res.seed = s.seed;
  res.columns = std::move(columns);
  res.records = std::move(recs);
  res.failed = failed_count(res.records);
  return res;
}

struct Outcome {
  double stat = std::numeric_limits<double>::quiet_NaN();
  double known = 0.0;
  bool reject = false;
  bool abstain = false;
};

Outcome evaluate(const AttachmentLog& g, const CampaignSpec& s, TestMode mode) {
  Outcome o;
  o.known = lr_test(g, s.tau, s.delta0, s.delta1).statistic;
  if (mode == TestMode::KnownParams) {
    o.stat = o.known;
    o.reject = o.stat > 0.0;
    return o;
  }
  try {
    const auto v = plugin_lr_test(g, s.tau);
    o.stat = v.statistic;
    o.reject = v.reject;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoInteriorRoot) throw;
    o.abstain = true;
  }
  return o;
}

}  // namespace

McResult test_campaign(const CampaignSpec& s, TestMode mode) {
  check_spec(s);
  const auto null_profile = DeltaProfile::constant(s.delta0);
  const auto alt_profile = DeltaProfile::step(s.delta0, s.delta1, s.tau);
  auto recs = run_replicates(s.replicates, s.seed, s.threads, [&](std::int64_t, Rng& rng) {
    const auto g0 = simulate(s.n, s.m, null_profile, rng);
    const auto g1 = simulate(s.n, s.m, alt_profile, rng);
    const auto o0 = evaluate(g0, s, mode);
    const auto o1 = evaluate(g1, s, mode);
    return std::vector<double>{o0.stat,         o0.reject ? 1.0 : 0.0, o0.abstain ? 1.0 : 0.0,
                               o1.stat,         o1.reject ? 1.0 : 0.0, o1.abstain ? 1.0 : 0.0,
                               o0.known,        o1.known};
  });
  auto res = wrap(s,
                  {"stat_h0", "reject_h0", "abstain_h0", "stat_h1", "reject_h1", "abstain_h1",
                   "known_h0", "known_h1"},
                  std::move(recs));
  std::int64_t used0 = 0, used1 = 0, rej0 = 0, acc1 = 0, abst = 0;
  std::vector<double> rate0, rate1, gap0, gap1;
  const double delta = static_cast<double>(s.n - s.tau);
  for (const auto& r : res.records) {
    if (!r.ok) continue;
    const auto& v = r.values;
    if (v[2] > 0.5) {
      ++abst;
    } else {
      ++used0;
      rej0 += v[1] > 0.5 ? 1 : 0;
      rate0.push_back(-v[0] / delta);
      gap0.push_back((v[0] - v[6]) / delta);
    }
    if (v[5] > 0.5) {
      ++abst;
    } else {
      ++used1;
      acc1 += v[4] > 0.5 ? 0 : 1;
      rate1.push_back(v[3] / delta);
      gap1.push_back((v[3] - v[7]) / delta);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double type1 = used0 ? static_cast<double>(rej0) / static_cast<double>(used0) : nan;
  const double type2 = used1 ? static_cast<double>(acc1) / static_cast<double>(used1) : nan;
  res.estimate = type1 + type2;
  res.stderr_ = std::sqrt((used0 ? type1 * (1 - type1) / static_cast<double>(used0) : 0.0) +
                          (used1 ? type2 * (1 - type2) / static_cast<double>(used1) : 0.0));
  const auto r0 = mean_stat(rate0);
  const auto r1 = mean_stat(rate1);
  res.aux["mode"] = mode == TestMode::KnownParams ? "known" : "plugin";
  res.aux["type1"] = type1;
  res.aux["type2"] = type2;
  res.aux["abstentions"] = abst;
  res.aux["abstention_rate"] =
      static_cast<double>(abst) / (2.0 * static_cast<double>(s.replicates - res.failed));
  res.aux["rate_h0"] = r0.mean;
  res.aux["rate_h0_stderr"] = r0.stderr_;
  res.aux["rate_h1"] = r1.mean;
  res.aux["rate_h1_stderr"] = r1.stderr_;
  if (s.delta0 != s.delta1) {
    res.aux["ell_inf_0"] = limit_loglr_rate(s.delta0, s.delta1, s.m, Hypothesis::H0).value;
    res.aux["ell_inf_1"] = limit_loglr_rate(s.delta0, s.delta1, s.m, Hypothesis::H1).value;
  }
  if (mode == TestMode::PluginMle) {
    res.aux["gap_h0"] = mean_stat(gap0).mean;
    res.aux["gap_h1"] = mean_stat(gap1).mean;
  }
  return res;
}

McResult mle_campaign(const CampaignSpec& s) {
  check_spec(s);
  const auto profile = DeltaProfile::step(s.delta0, s.delta1, s.tau);
  const double sq_pre = std::sqrt(static_cast<double>(s.tau));
  const double sq_post = std::sqrt(static_cast<double>(s.n - s.tau));
  auto recs = run_replicates(s.replicates, s.seed, s.threads, [&](std::int64_t, Rng& rng) {
    const auto g = simulate(s.n, s.m, profile, rng);
    const auto r = mle(g, s.tau);
    if (!r.converged()) {
      throw Error(ErrorKind::NoInteriorRoot,
                  r.pre.status != MleStatus::Converged ? "pre-change window"
                                                       : "post-change window");
    }
    return std::vector<double>{r.pre.estimate, r.post.estimate,
                               sq_pre * (r.pre.estimate - s.delta0),
                               sq_post * (r.post.estimate - s.delta1)};
  });
  auto res = wrap(s, {"delta0_hat", "delta1_hat", "z0", "z1"}, std::move(recs));
  const auto d0 = mean_stat(column(res.records, 0));
  const auto d1 = mean_stat(column(res.records, 1));
  const auto z0 = mean_stat(column(res.records, 2));
  const auto z1 = mean_stat(column(res.records, 3));
  const double nu0 = asymptotic_variance(0, s.delta0, s.delta1, s.m).value;
  const double nu1 = asymptotic_variance(1, s.delta0, s.delta1, s.m).value;
  res.estimate = d1.mean;
  res.stderr_ = d1.stderr_;
  res.aux["mean_delta0_hat"] = d0.mean;
  res.aux["mean_delta1_hat"] = d1.mean;
  res.aux["sd_z0"] = z0.sd;
  res.aux["sd_z1"] = z1.sd;
  res.aux["mean_z1"] = z1.mean;
  res.aux["nu0"] = nu0;
  res.aux["nu1"] = nu1;
  res.aux["predicted_sd_z0"] = 1.0 / std::sqrt(nu0);
  res.aux["predicted_sd_z1"] = 1.0 / std::sqrt(nu1);
  return res;
}

McResult localize_campaign(const CampaignSpec& s) {
  check_spec(s);
  require(s.delta0 != s.delta1, ErrorKind::DomainError, "localization needs delta0 != delta1");
  const auto profile = DeltaProfile::step(s.delta0, s.delta1, s.tau);
  auto recs = run_replicates(s.replicates, s.seed, s.threads, [&](std::int64_t, Rng& rng) {
    const auto g = simulate(s.n, s.m, profile, rng);
    const auto loc = localize_tau(g, s.delta0, s.delta1);
    return std::vector<double>{static_cast<double>(loc.tau_hat),
                               static_cast<double>(std::llabs(loc.tau_hat - s.tau))};
  });
  auto res = wrap(s, {"tau_hat", "abs_error"}, std::move(recs));
  const auto err = column(res.records, 1);
  const double threshold = std::pow(std::log(static_cast<double>(s.n)), 3.0);
  std::int64_t within = 0;
  for (const double e : err) within += e <= threshold ? 1 : 0;
  const auto st = mean_stat(err);
  res.estimate = err.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(err.size());
  res.stderr_ = std::sqrt(res.estimate * (1.0 - res.estimate) /
                          std::max<double>(1.0, static_cast<double>(err.size())));
  res.aux["threshold"] = threshold;
  res.aux["fraction_within"] = res.estimate;
  res.aux["mean_abs_error"] = st.mean;
  res.aux["mean_tau_hat"] = mean_stat(column(res.records, 0)).mean;
  return res;
}

}  // namespace pacp
