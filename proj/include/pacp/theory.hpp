#pragma once

#include <cstdint>

#include "pacp/likelihood.hpp"

namespace pacp {

// Limiting degree law of affine preferential attachment:
// p_k = (2 + delta/m) Gamma(k + delta) Gamma(m + 2 + delta + delta/m)
//       / (Gamma(m + delta) Gamma(k + 3 + delta + delta/m)),  k >= m.
class DegreeLaw {
 public:
  DegreeLaw(int m, double delta);

  int m() const noexcept { return m_; }
  double delta() const noexcept { return delta_; }
  double log_pmf(std::int64_t k) const;
  double pmf(std::int64_t k) const;
  // p_{>k} = (k + delta) (m / (2m + delta)) p_k.
  double tail(std::int64_t k) const;
  // sum_{j>k} (j + delta) p_j in closed form.
  double shifted_tail_mean(std::int64_t k) const;
  // p_{k+1} / p_k.
  double ratio(std::int64_t k) const { return (k + delta_) / (k + b_); }

 private:
  int m_;
  double delta_;
  double b_;          // 3 + delta + delta/m
  double log_const_;  // log of the k-independent factor
};

double limit_degree_pmf(std::int64_t k, int m, double delta);
double limit_degree_tail(std::int64_t k, int m, double delta);

// A truncated series value with a certified bound on the neglected remainder.
struct SeriesValue {
  double value = 0.0;
  double remainder_bound = 0.0;
  std::int64_t terms = 0;
};

SeriesValue degree_law_mean(int m, double delta);

enum class Hypothesis { H0, H1 };

// l_inf^0 or l_inf^1: the per-vertex drift of (1/Delta) log LR is -l^0 under
// H0 and +l^1 under H1.
SeriesValue limit_loglr_rate(double delta0, double delta1, int m, Hypothesis h);

// nu_j = (m/(2m+delta_j)) (sum_k p_k(delta0)/(k+delta_j) - 1/(2m+delta_j)).
SeriesValue asymptotic_variance(int j, double delta0, double delta1, int m);

// Limit of (1/Delta) score(post window, delta) under the change alternative.
SeriesValue limit_score_rate(double delta, double delta0, double delta1, int m);

struct MomentCoeffs {
  double xi = 1.0;
  double kappa = 0.0;
  double gamma_product = 1.0;
  double mean = 0.0;           // E[d_{G_t}(u) + delta0]
  double second_moment = 0.0;  // E[(d_{G_t}(u) + delta0)^2]
};

// Exact null moments of d_{G_t}(u) + delta0 via the backward recursions.
MomentCoeffs degree_moment(std::int64_t u, std::int64_t t, int m, double delta0);

// Exponent 2m/(2m + delta0) of the moment growth bound.
double moment_growth_exponent(int m, double delta0);

// m_n = (1/Delta') sum_{k>tau'} prod_i S_{k,i-1}(delta1)/S_{k,i-1}(delta0) with
// bounds exp(-+6m/tau') ((2m + delta1)/(2m + delta0))^m.
BoundedValue mean_weight_mn(std::int64_t tau_prime, std::int64_t n, double delta0,
                            double delta1, int m);

}  // namespace pacp
