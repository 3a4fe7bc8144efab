#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pacp/graph.hpp"

namespace pacp {

// Attachment events of arrivals first..last summarized for score evaluation.
class ScoreWindow {
 public:
  ScoreWindow(const AttachmentLog& g, std::int64_t first, std::int64_t last);

  // sum_k dN_{>k} / (k + delta) - sum_t sum_i t / S_{t,i-1}(delta).
  double score(double delta) const;
  std::int64_t first() const noexcept { return first_; }
  std::int64_t last() const noexcept { return last_; }
  std::int64_t length() const noexcept { return last_ - first_ + 1; }
  int m() const noexcept { return m_; }

 private:
  int m_;
  std::int64_t first_;
  std::int64_t last_;
  std::vector<std::pair<std::int64_t, std::int64_t>> degree_counts_;  // (k, #events with D = k)
};

// Score of the window of arrivals first..last (first >= 2).
double score(const AttachmentLog& g, std::int64_t first, std::int64_t last, double delta);

enum class MleStatus { Converged, NoInteriorRoot, NotConverged };
const char* mle_status_name(MleStatus s) noexcept;

struct RootResult {
  MleStatus status = MleStatus::NoInteriorRoot;
  double estimate = 0.0;
  double score_at_estimate = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double score_lo = 0.0;
  double score_hi = 0.0;
  int iterations = 0;
};

struct MleOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
  double guard = 1e-9;  // multiplied by m: lower search limit -m + guard*m
  double delta_max = 1e6;
  double delta_init = 0.0;
};

// Bracket expansion from delta_init by doubling, then bisection.
RootResult solve_score(const ScoreWindow& w, const MleOptions& opt = {});

struct MleResult {
  RootResult pre;   // delta0 from arrivals 2..tau
  RootResult post;  // delta1 from arrivals tau+1..n
  double se0 = 0.0;
  double se1 = 0.0;
  bool converged() const {
    return pre.status == MleStatus::Converged && post.status == MleStatus::Converged;
  }
};

MleResult mle(const AttachmentLog& g, std::int64_t tau, const MleOptions& opt = {});

// delta_hat -+ z / sqrt(len * nu_hat_j).
std::pair<double, double> confidence_interval(const MleResult& r, int j, std::int64_t tau,
                                              std::int64_t n, int m, double level);

enum class TestMode { KnownParams, PluginMle };

struct TestVerdict {
  double statistic = 0.0;
  bool reject = false;
  TestMode mode = TestMode::KnownParams;
  double delta0 = 0.0;
  double delta1 = 0.0;
};

TestVerdict lr_test(const AttachmentLog& g, std::int64_t tau, double delta0, double delta1);

// Throws NoInteriorRoot when either window has no interior score root.
TestVerdict plugin_lr_test(const AttachmentLog& g, std::int64_t tau, const MleOptions& opt = {});

struct Localization {
  std::int64_t tau_hat = 0;
  std::vector<double> profile;  // log-likelihood of step(delta0, delta1, tau), tau = 0..n
};

// One O(nm) sweep; ties resolve to the smallest tau.
Localization localize_tau(const AttachmentLog& g, double delta0, double delta1);

}  // namespace pacp
