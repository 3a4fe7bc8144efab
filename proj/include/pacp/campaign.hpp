#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pacp/simulator.hpp"

namespace pacp {

// Outcome of one replicate: a fixed-width row of values, or a recorded error.
struct ReplicateRecord {
  bool ok = true;
  std::string error_kind;
  std::vector<double> values;
};

using ReplicateFn = std::function<std::vector<double>(std::int64_t replicate, Rng& rng)>;

// Runs fn for replicates 0..count-1 on `threads` workers. Replicate r draws from
// Rng(seed, r) and lands in slot r, so the output is independent of threads.
// A pacp::Error inside fn marks that replicate failed without stopping others.
std::vector<ReplicateRecord> run_replicates(std::int64_t count, std::uint64_t seed, int threads,
                                            const ReplicateFn& fn);

// Worker count: PACP_THREADS if set, else the flag, else hardware concurrency.
int resolve_threads(std::optional<int> flag);

struct MeanStat {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample sd / sqrt(count)
  double sd = 0.0;
  std::int64_t count = 0;
};

MeanStat mean_stat(const std::vector<double>& xs);

// Column `col` of the successful replicates.
std::vector<double> column(const std::vector<ReplicateRecord>& recs, std::size_t col);
std::int64_t failed_count(const std::vector<ReplicateRecord>& recs);

struct McResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t replicates = 0;
  std::int64_t failed = 0;
  std::uint64_t seed = 0;
  nlohmann::ordered_json aux = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<ReplicateRecord> records;

  nlohmann::ordered_json summary() const;
  std::string csv() const;
};

}  // namespace pacp
