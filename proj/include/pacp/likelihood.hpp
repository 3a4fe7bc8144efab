#pragma once

#include <cstdint>

#include "pacp/graph.hpp"
#include "pacp/simulator.hpp"

namespace pacp {

// S_{t,i-1}(delta) = (2m + delta) t - 2m + i - 1, the total attachment weight
// before the i-th edge of arrival t.
double s_value(std::int64_t t, int i, double delta, int m);

// sum_{t=first..last} sum_i log S_{t,i-1}(delta); zero when first > last.
double log_s_sum(std::int64_t first, std::int64_t last, double delta, int m);

struct LogLik {
  double value = 0.0;
  double log_c = 0.0;       // (n-1) log m! - sum log mu!
  double numerator = 0.0;   // sum_k N_{>k} log(k + delta) terms
  double normalizer = 0.0;  // sum log S terms
};

double log_multiplicity(const AttachmentLog& g);

LogLik log_likelihood(const AttachmentLog& g, const DeltaProfile& profile);

// log dQ1/dQ0 with Q1 = step(delta0, delta1, tau) and Q0 = constant(delta0).
double log_lr_tail(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1);
double log_lr_sequential(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1);
inline double log_lr(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1) {
  return log_lr_tail(g, tau, delta0, delta1);
}

struct BoundedValue {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double log_value = 0.0;
};

// prod_{t=tau+1..n} prod_i S_{t,i-1}(delta0) / S_{t,i-1}(delta1) with the
// two-sided bounds exp(-+6 m Delta / tau) ((2m + delta0)/(2m + delta1))^{m Delta}.
BoundedValue s_product_ratio(std::int64_t tau, std::int64_t n, double delta0, double delta1,
                             int m);

}  // namespace pacp
