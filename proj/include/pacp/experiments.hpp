#pragma once

#include <cstdint>

#include "pacp/campaign.hpp"
#include "pacp/inference.hpp"

namespace pacp {

// Shared parameters of the inference campaigns. Replicate r draws from
// Rng(seed, r); a replicate that needs both hypotheses simulates the null graph
// first and the change graph second from the same stream.
struct CampaignSpec {
  std::int64_t n = 0;
  int m = 1;
  double delta0 = 0.0;
  double delta1 = 0.0;
  std::int64_t tau = 0;
  std::int64_t replicates = 100;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Error rates of T_n (KnownParams) or T_n' (PluginMle) with graphs from both
// hypotheses. Plug-in abstentions (NoInteriorRoot) are counted separately and
// excluded from the error-rate denominators.
McResult test_campaign(const CampaignSpec& spec, TestMode mode);

// MLE under the change alternative: spread of sqrt(Delta)(delta1_hat - delta1)
// against nu_1^{-1/2}. Replicates without an interior root are tallied as failed.
McResult mle_campaign(const CampaignSpec& spec);

// Localization error |tau_hat - tau| under the change alternative, with the
// fraction within log(n)^3.
McResult localize_campaign(const CampaignSpec& spec);

}  // namespace pacp
