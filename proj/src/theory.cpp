#include "pacp/theory.hpp"

#include <algorithm>
#include <cmath>

#include "pacp/errors.hpp"
#include "pacp/numeric.hpp"

namespace pacp {
namespace {

constexpr double kRelTol = 1e-14;
constexpr std::int64_t kMaxTerms = 20'000'000;

void check_law(int m, double delta) {
  require(m >= 1, ErrorKind::DomainError, "m must be >= 1");
  require(delta > -m, ErrorKind::DomainError, "delta must exceed -m");
}

// E[h(X)] for X ~ p(delta). Beyond the truncation point K the summand is
// replaced by h_inf, with |h(k) - h_inf| <= r_bound(K) / (k + delta) for all
// k > K once K >= k_start; the neglected remainder is then at most
// r_bound(K) p_{>K} / (K + 1 + delta).
template <class H, class R>
SeriesValue expect(const DegreeLaw& law, H&& h, double h_inf, R&& r_bound, double k_start) {
  const std::int64_t m = law.m();
  const double delta = law.delta();
  CompensatedSum sum;
  double p = law.pmf(m);
  for (std::int64_t k = m;; ++k) {
    if ((k - m) % 1024 == 0) p = law.pmf(k);
    const double term = p * h(k);
    sum.add(term);
    if ((k - m) % 16 == 0 && static_cast<double>(k) >= k_start) {
      const double tail = law.tail(k);
      const double bound = r_bound(k) * tail / (static_cast<double>(k) + 1.0 + delta);
      const double value = sum.value() + h_inf * tail;
      const double scale = std::max(std::fabs(value), 1e-300);
      if ((std::fabs(term) <= kRelTol * scale && bound <= kRelTol * scale) ||
          k - m >= kMaxTerms) {
        return {value, bound, k - m + 1};
      }
    }
    p *= law.ratio(k);
  }
}

// sup_{j>k} (j + a) / (j + b).
double shift_ratio(std::int64_t k, double a, double b) {
  return std::max(1.0, (static_cast<double>(k) + 1.0 + a) / (static_cast<double>(k) + 1.0 + b));
}

}  // namespace

DegreeLaw::DegreeLaw(int m, double delta) : m_(m), delta_(delta) {
  check_law(m, delta);
  b_ = 3.0 + delta + delta / m;
  log_const_ = std::log(2.0 + delta / m) + std::lgamma(m + 2.0 + delta + delta / m) -
               std::lgamma(m + delta);
}

double DegreeLaw::log_pmf(std::int64_t k) const {
  require(k >= m_, ErrorKind::DomainError, "degree law is supported on k >= m");
  const double kd = static_cast<double>(k);
  return log_const_ + std::lgamma(kd + delta_) - std::lgamma(kd + b_);
}

double DegreeLaw::pmf(std::int64_t k) const { return std::exp(log_pmf(k)); }

double DegreeLaw::tail(std::int64_t k) const {
  return (static_cast<double>(k) + delta_) * (m_ / (2.0 * m_ + delta_)) * pmf(k);
}

double DegreeLaw::shifted_tail_mean(std::int64_t k) const {
  const double kd = static_cast<double>(k);
  return std::exp(log_const_ + std::lgamma(kd + 2.0 + delta_) - std::lgamma(kd + b_)) /
         (1.0 + delta_ / m_);
}

double limit_degree_pmf(std::int64_t k, int m, double delta) {
  return DegreeLaw(m, delta).pmf(k);
}

double limit_degree_tail(std::int64_t k, int m, double delta) {
  return DegreeLaw(m, delta).tail(k);
}

SeriesValue degree_law_mean(int m, double delta) {
  const DegreeLaw law(m, delta);
  // Partial sum up to K plus the closed-form remainder sum_{k>K} k p_k.
  const std::int64_t K = m + 64;
  CompensatedSum sum;
  for (std::int64_t k = m; k <= K; ++k) sum.add(static_cast<double>(k) * law.pmf(k));
  sum.add(law.shifted_tail_mean(K) - delta * law.tail(K));
  return {sum.value(), 0.0, K - m + 1};
}

SeriesValue limit_loglr_rate(double delta0, double delta1, int m, Hypothesis h) {
  check_law(m, delta0);
  check_law(m, delta1);
  if (delta0 == delta1) return {0.0, 0.0, 0};
  const DegreeLaw law(m, delta0);
  if (h == Hypothesis::H0) {
    const double c = delta1 - delta0;
    const auto e = expect(
        law,
        [&](std::int64_t k) {
          const double y = static_cast<double>(k) + delta0;
          return y * std::log1p(c / y);
        },
        c, [&](std::int64_t) { return c * c; }, 2.0 * std::fabs(c) - delta0);
    const double w = m / (2.0 * m + delta0);
    return {m * std::log1p(c / (2.0 * m + delta0)) - w * e.value, w * e.remainder_bound,
            e.terms};
  }
  const double c = delta0 - delta1;
  const auto e = expect(
      law,
      [&](std::int64_t k) {
        const double y = static_cast<double>(k) + delta1;
        return y * std::log1p(c / y);
      },
      c, [&](std::int64_t k) { return c * c * shift_ratio(k, delta0, delta1); },
      2.0 * std::fabs(c) - delta1);
  const double w = m / (2.0 * m + delta1);
  return {-w * (e.value - (2.0 * m + delta1) * std::log1p(c / (2.0 * m + delta1))),
          w * e.remainder_bound, e.terms};
}

SeriesValue asymptotic_variance(int j, double delta0, double delta1, int m) {
  check_law(m, delta0);
  check_law(m, delta1);
  require(j == 0 || j == 1, ErrorKind::DomainError, "j must be 0 or 1");
  const double dj = j == 0 ? delta0 : delta1;
  const DegreeLaw law(m, delta0);
  const auto e = expect(
      law, [&](std::int64_t k) { return 1.0 / (static_cast<double>(k) + dj); }, 0.0,
      [&](std::int64_t k) { return shift_ratio(k, delta0, dj); }, 0.0);
  const double w = m / (2.0 * m + dj);
  return {w * (e.value - 1.0 / (2.0 * m + dj)), w * e.remainder_bound, e.terms};
}

SeriesValue limit_score_rate(double delta, double delta0, double delta1, int m) {
  check_law(m, delta0);
  check_law(m, delta1);
  check_law(m, delta);
  const DegreeLaw law(m, delta0);
  const auto e = expect(
      law,
      [&](std::int64_t k) {
        const double kd = static_cast<double>(k);
        return (kd + delta1) / (kd + delta);
      },
      1.0, [&](std::int64_t k) { return std::fabs(delta1 - delta) * shift_ratio(k, delta0, delta); },
      0.0);
  const double w = m / (2.0 * m + delta1);
  return {w * e.value - m / (2.0 * m + delta), w * e.remainder_bound, e.terms};
}

MomentCoeffs degree_moment(std::int64_t u, std::int64_t t, int m, double delta0) {
  check_law(m, delta0);
  const std::int64_t r = std::max<std::int64_t>(1, u);
  require(u >= 0 && t >= r, ErrorKind::DomainError, "degree_moment requires t >= max(1, u)");
  MomentCoeffs out;
  double xi = 1.0;
  double kappa = 0.0;
  double gamma_prod = 1.0;
  for (std::int64_t j = t; j > r; --j) {
    // alpha_{j,m} = 1, beta_{j,m} = 0, stepped down to i = 0.
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 1.0;
    for (int i = m; i >= 1; --i) {
      const double s = s_value(j, i, delta0, m);
      beta = beta * (1.0 + 1.0 / s) + alpha / s;
      alpha *= 1.0 + 2.0 / s;
      gamma *= 1.0 + 1.0 / s;
    }
    kappa = xi * beta + kappa * gamma;
    xi *= alpha;
    gamma_prod *= gamma;
  }
  const double x0 = m + delta0;
  out.xi = xi;
  out.kappa = kappa;
  out.gamma_product = gamma_prod;
  out.mean = gamma_prod * x0;
  out.second_moment = xi * x0 * x0 + kappa * x0;
  return out;
}

double moment_growth_exponent(int m, double delta0) { return 2.0 * m / (2.0 * m + delta0); }

BoundedValue mean_weight_mn(std::int64_t tau_prime, std::int64_t n, double delta0,
                            double delta1, int m) {
  require(tau_prime >= 3, ErrorKind::DomainError, "mean_weight_mn requires tau' >= 3");
  require(tau_prime < n, ErrorKind::DomainError, "mean_weight_mn requires tau' < n");
  check_law(m, delta0);
  check_law(m, delta1);
  CompensatedSum sum;
  for (std::int64_t k = tau_prime + 1; k <= n; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= m; ++i) {
      acc += std::log1p((delta1 - delta0) * static_cast<double>(k) / s_value(k, i, delta0, m));
    }
    sum.add(std::exp(acc));
  }
  BoundedValue out;
  out.value = sum.value() / static_cast<double>(n - tau_prime);
  out.log_value = std::log(out.value);
  const double center = m * std::log((2.0 * m + delta1) / (2.0 * m + delta0));
  const double slack = 6.0 * m / static_cast<double>(tau_prime);
  out.lower = std::exp(center - slack);
  out.upper = std::exp(center + slack);
  return out;
}

}  // namespace pacp
