#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacp/campaign.hpp"
#include "pacp/graph.hpp"
#include "pacp/simulator.hpp"

namespace pacp {

struct ReductionContext {
  std::int64_t n = 0;
  int m = 1;
  std::int64_t tau = 0;
  std::int64_t tau_prime = 0;
  double alpha = 1.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  BoldSet bold;                // with log weights bound
  std::vector<double> log_w;   // log W_t for every arrival t (index t)
  std::int64_t r = 0;          // |[tau+1, n] ∩ bold|
  double log_s_ratio = 0.0;    // log prod_{t>tau} prod_i S(delta0)/S(delta1)

  std::int64_t delta() const noexcept { return n - tau; }
  std::int64_t delta_prime() const noexcept { return n - tau_prime; }
};

// Requires 0 <= tau' < tau <= n, alpha > 0, deltas > -m.
ReductionContext make_reduction_context(const AttachmentLog& g, std::int64_t tau,
                                        std::int64_t tau_prime, double alpha, double delta0,
                                        double delta1);

// Uniform permutation of [0, n] fixing every label outside the bold set.
std::vector<Vertex> kernel_sample(const BoldSet& bold, std::int64_t n, Rng& rng);
std::vector<Vertex> kernel_sample(const AttachmentLog& g, std::int64_t tau_prime, Rng& rng);

// B_n = {|bold| >= Delta'(1 - alpha Delta'/tau'), [tau+1, n] ⊆ bold}.
bool event_Bn(const ReductionContext& ctx);

// log e_r(w) from log weights; weights are rescaled by their geometric mean and
// the DP runs on binomially averaged coefficients, falling back to a log-domain
// DP when the averaged values could overflow.
double log_elementary_symmetric(std::span<const double> log_w, std::int64_t r);

// log Y_n: S-ratio * prod_{t in [tau+1,n] \ bold} W_t * e_r(W_bold) / C(|bold|, r).
double permuted_lr_log(const ReductionContext& ctx);
double permuted_lr(const ReductionContext& ctx);

// Bound: integral_1^inf exp(-beta log^2 x) dx <= sqrt(pi e^{1/(2 beta)} / beta).
double boundintegral(double beta);

struct PreconditionReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// tau' >= 3, tau' < tau, alpha Delta'/tau' <= 1/2, Delta/Delta' <= 1/4.
PreconditionReport second_moment_preconditions(std::int64_t n, std::int64_t tau,
                                               std::int64_t tau_prime, double alpha);

// Exponent 4 a D D'/t' + 22 m D^2/t' + 2/(3 D') + sqrt(c1 D^2/D') e^{c2 D^2/D'}.
double second_moment_rhs_exponent(double alpha, double delta, double delta_prime,
                                  double tau_prime, int m, double c1, double c2);

// (C/alpha)(1 + alpha Delta Delta'/tau') (log tau' if delta0 == 0).
double event_bn_rhs(double C, double alpha, double delta, double delta_prime, double tau_prime,
                    double delta0);

// c = 1/(8 M^2), M = max(1, (m + delta1)/(m + delta0))^m: Azuma with increments 2M.
double azuma_default_c(int m, double delta0, double delta1);

// Delta = floor(n^{1/3} / log n), Delta' = floor(n^{2/3}), alpha = log n.
struct ProbeRegime {
  std::int64_t tau = 0;
  std::int64_t tau_prime = 0;
  double alpha = 1.0;
};
ProbeRegime contiguity_regime(std::int64_t n);

struct ProbeConfig {
  std::int64_t n = 0;
  int m = 1;
  double delta0 = 0.0;
  double delta1 = 0.0;
  std::int64_t tau = 0;
  std::int64_t tau_prime = 0;
  double alpha = 1.0;
  std::int64_t replicates = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  double c1 = 1.0;
  double c2 = 1.0;
  double C = 1.0;
  double azuma_c = 0.0;  // <= 0 selects azuma_default_c
  std::vector<double> x_grid;
  bool strict = false;   // throw PreconditionViolated instead of reporting
};

// E_0[Y_n^2 1_{B_n}] under the null, with its closed-form bound.
McResult second_moment_probe(const ProbeConfig& cfg);

// P_1(B_n^c), E_1|bold|, E_1|bold ∩ [tau+1, n]| under the change alternative.
McResult event_bn_failure_probe(const ProbeConfig& cfg);

// Tail frequencies P_0(Z_n - m_n >= x) against exp(-c Delta' x^2).
McResult martingale_tail_probe(const ProbeConfig& cfg);

}  // namespace pacp
