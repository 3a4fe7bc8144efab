#include "pacp/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "pacp/errors.hpp"
#include "pacp/numeric.hpp"

namespace pacp {
namespace {

// sum_k (N_{>k}(a) - N_{>k}(b)) f(k) over the realized range of a.
template <class F>
void add_tail_terms(CompensatedSum& acc, const DegreeTailCounts& a, const DegreeTailCounts* b,
                    F&& f) {
  for (std::size_t j = 0; j < a.tail.size(); ++j) {
    const std::int64_t k = a.m + static_cast<std::int64_t>(j);
    const std::int64_t count = a.tail[j] - (b ? b->at(k) : 0);
    if (count != 0) acc.add(static_cast<double>(count) * f(k));
  }
}

void check_delta(double delta, int m, const char* name) {
  require(delta > -m, ErrorKind::DomainError, std::string(name) + " must exceed -m");
}

}  // namespace

double s_value(std::int64_t t, int i, double delta, int m) {
  return (2.0 * m + delta) * static_cast<double>(t) - 2.0 * m + (i - 1);
}

double log_s_sum(std::int64_t first, std::int64_t last, double delta, int m) {
  CompensatedSum acc;
  for (std::int64_t t = std::max<std::int64_t>(first, 2); t <= last; ++t) {
    for (int i = 1; i <= m; ++i) acc.add(std::log(s_value(t, i, delta, m)));
  }
  return acc.value();
}

double log_multiplicity(const AttachmentLog& g) {
  const int m = g.m();
  CompensatedSum acc;
  acc.add(static_cast<double>(g.n() - 1) * log_factorial(m));
  if (m == 1) return acc.value();
  std::vector<Vertex> row(static_cast<std::size_t>(m));
  for (std::int64_t t = 2; t <= g.n(); ++t) {
    const auto r = g.row(t);
    std::copy(r.begin(), r.end(), row.begin());
    std::sort(row.begin(), row.end());
    std::size_t start = 0;
    for (std::size_t j = 1; j <= row.size(); ++j) {
      if (j == row.size() || row[j] != row[start]) {
        const auto mu = static_cast<std::int64_t>(j - start);
        if (mu > 1) acc.add(-log_factorial(mu));
        start = j;
      }
    }
  }
  return acc.value();
}

LogLik log_likelihood(const AttachmentLog& g, const DeltaProfile& profile) {
  profile.validate(g.m(), g.n());
  LogLik out;
  out.log_c = log_multiplicity(g);
  const std::int64_t tau =
      profile.kind == DeltaProfile::Kind::Step ? std::min(profile.tau, g.n()) : g.n();
  const double d0 = profile.delta0;
  const double d1 = profile.delta1;
  const auto full = degree_tail_counts(g);
  CompensatedSum num;
  if (tau >= g.n()) {
    add_tail_terms(num, full, nullptr, [&](std::int64_t k) { return std::log(k + d0); });
  } else {
    const auto pre = degree_tail_counts(g, tau);
    add_tail_terms(num, pre, nullptr, [&](std::int64_t k) { return std::log(k + d0); });
    add_tail_terms(num, full, &pre, [&](std::int64_t k) { return std::log(k + d1); });
  }
  out.numerator = num.value();
  out.normalizer = log_s_sum(2, tau, d0, g.m()) + log_s_sum(tau + 1, g.n(), d1, g.m());
  out.value = out.log_c + out.numerator - out.normalizer;
  return out;
}

double log_lr_tail(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1) {
  check_delta(delta0, g.m(), "delta0");
  check_delta(delta1, g.m(), "delta1");
  require(tau >= 0 && tau <= g.n(), ErrorKind::DomainError, "tau must lie in [0, n]");
  if (tau >= g.n() || delta0 == delta1) return 0.0;
  const double diff = delta1 - delta0;
  const int m = g.m();
  CompensatedSum acc;
  for (std::int64_t t = std::max<std::int64_t>(tau + 1, 2); t <= g.n(); ++t) {
    for (int i = 1; i <= m; ++i) {
      acc.add(-std::log1p(diff * static_cast<double>(t) / s_value(t, i, delta0, m)));
    }
  }
  const auto full = degree_tail_counts(g);
  const auto pre = degree_tail_counts(g, std::max<std::int64_t>(tau, 1));
  add_tail_terms(acc, full, &pre,
                 [&](std::int64_t k) { return std::log1p(diff / (k + delta0)); });
  return acc.value();
}

double log_lr_sequential(const AttachmentLog& g, std::int64_t tau, double delta0,
                         double delta1) {
  check_delta(delta0, g.m(), "delta0");
  check_delta(delta1, g.m(), "delta1");
  require(tau >= 0 && tau <= g.n(), ErrorKind::DomainError, "tau must lie in [0, n]");
  if (tau >= g.n()) return 0.0;
  const int m = g.m();
  const auto dd = g.attachment_degrees();
  CompensatedSum acc;
  for (std::int64_t t = std::max<std::int64_t>(tau + 1, 2); t <= g.n(); ++t) {
    for (int i = 1; i <= m; ++i) {
      const double d = static_cast<double>(dd[static_cast<std::size_t>((t - 2) * m + i - 1)]);
      acc.add(std::log(s_value(t, i, delta0, m)) - std::log(s_value(t, i, delta1, m)));
      acc.add(std::log(d + delta1) - std::log(d + delta0));
    }
  }
  return acc.value();
}

BoundedValue s_product_ratio(std::int64_t tau, std::int64_t n, double delta0, double delta1,
                             int m) {
  require(tau >= 3, ErrorKind::DomainError, "s_product_ratio requires tau >= 3");
  require(tau <= n, ErrorKind::DomainError, "tau must not exceed n");
  check_delta(delta0, m, "delta0");
  check_delta(delta1, m, "delta1");
  CompensatedSum acc;
  for (std::int64_t t = tau + 1; t <= n; ++t) {
    for (int i = 1; i <= m; ++i) {
      acc.add(-std::log1p((delta1 - delta0) * static_cast<double>(t) /
                          s_value(t, i, delta0, m)));
    }
  }
  const double delta = static_cast<double>(n - tau);
  const double center = m * delta * std::log((2.0 * m + delta0) / (2.0 * m + delta1));
  const double slack = 6.0 * m * delta / static_cast<double>(tau);
  BoundedValue out;
  out.log_value = acc.value();
  out.value = std::exp(out.log_value);
  out.lower = std::exp(center - slack);
  out.upper = std::exp(center + slack);
  return out;
}

}  // namespace pacp
