#include "pacp/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "pacp/errors.hpp"

namespace pacp {

std::vector<ReplicateRecord> run_replicates(std::int64_t count, std::uint64_t seed, int threads,
                                            const ReplicateFn& fn) {
  require(count >= 1, ErrorKind::DomainError, "replicates must be >= 1");
  std::vector<ReplicateRecord> out(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= count) return;
      auto& rec = out[static_cast<std::size_t>(r)];
      try {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        rec.values = fn(r, rng);
      } catch (const Error& e) {
        rec.ok = false;
        rec.error_kind = e.kind_name();
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);
  return out;
}

int resolve_threads(std::optional<int> flag) {
  if (const char* env = std::getenv("PACP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  if (flag && *flag >= 1) return *flag;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MeanStat mean_stat(const std::vector<double>& xs) {
  MeanStat s;
  s.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    s.stderr_ = s.sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

std::vector<double> column(const std::vector<ReplicateRecord>& recs, std::size_t col) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) {
    if (r.ok && col < r.values.size()) out.push_back(r.values[col]);
  }
  return out;
}

std::int64_t failed_count(const std::vector<ReplicateRecord>& recs) {
  std::int64_t f = 0;
  for (const auto& r : recs) f += r.ok ? 0 : 1;
  return f;
}

nlohmann::ordered_json McResult::summary() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["stderr"] = stderr_;
  j["replicates"] = replicates;
  j["failed"] = failed;
  j["seed"] = seed;
  j["aux"] = aux;
  return j;
}

std::string McResult::csv() const {
  std::ostringstream os;
  os << "replicate,status";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  char buf[32];
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    os << r << ',' << (rec.ok ? "ok" : rec.error_kind);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << ',';
      if (rec.ok && c < rec.values.size()) {
        std::snprintf(buf, sizeof buf, "%.17g", rec.values[c]);
        os << buf;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pacp
