#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pacp {

using Vertex = std::int64_t;

// Arrival-ordered encoding of a labeled preferential-attachment multigraph on
// vertices 0..n. Arrival t = 1 is implicit (m edges 1 -> 0); for t = 2..n the
// log stores the m targets V_{t,1..m}, each in [0, t-1].
class AttachmentLog {
 public:
  // Validates the flat target array laid out as (t - 2) * m + (i - 1).
  AttachmentLog(std::int64_t n, int m, std::vector<Vertex> targets);

  // rows[t - 2] holds the targets of arrival t; checks row count and lengths.
  static AttachmentLog from_rows(std::int64_t n, int m,
                                 const std::vector<std::vector<Vertex>>& rows);
  static AttachmentLog base(int m) { return AttachmentLog(1, m, {}); }

  std::int64_t n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  Vertex target(std::int64_t t, int i) const {
    return targets_[static_cast<std::size_t>((t - 2) * m_ + (i - 1))];
  }
  std::span<const Vertex> row(std::int64_t t) const {
    return {targets_.data() + (t - 2) * m_, static_cast<std::size_t>(m_)};
  }
  const std::vector<Vertex>& targets() const noexcept { return targets_; }

  // Degrees (in + out) of every vertex in g ∩ [0, upto]; upto defaults to n.
  std::vector<std::int64_t> degrees(std::optional<std::int64_t> upto = {}) const;

  // D_{t,i} = d_{G_{t,i-1}}(V_{t,i}) in the flat target layout, by replay.
  std::vector<std::int64_t> attachment_degrees() const;

  bool operator==(const AttachmentLog& other) const = default;

 private:
  std::int64_t n_;
  int m_;
  std::vector<Vertex> targets_;
};

// Tail counts N_{>k}(g ∩ [0, upto]) for k >= m, plus optional split in-degrees.
struct DegreeTailCounts {
  std::int64_t n = 0;
  int m = 0;
  std::int64_t upto = 0;
  // tail[k - m] = N_{>k}; entries past the end are zero.
  std::vector<std::int64_t> tail;
  std::optional<std::int64_t> split_at;
  // In-degree of v from parents <= split_at and > split_at (within upto).
  std::vector<std::int64_t> in_le;
  std::vector<std::int64_t> in_gt;

  std::int64_t at(std::int64_t k) const {
    if (k < m) return upto + 1;
    const auto idx = static_cast<std::size_t>(k - m);
    return idx < tail.size() ? tail[idx] : 0;
  }
  std::int64_t max_k() const { return m + static_cast<std::int64_t>(tail.size()) - 1; }
};

DegreeTailCounts degree_tail_counts(const AttachmentLog& g,
                                    std::optional<std::int64_t> upto = {},
                                    std::optional<std::int64_t> split_at = {});

// Bold vertices: v in [tau'+1, n] with d(v) = m, every child of v at most tau',
// and every other parent of each such child at most tau'.
struct BoldSet {
  std::int64_t tau_prime = 0;
  std::vector<Vertex> members;  // sorted
  // log W_v for each member, filled by bind_weights.
  std::vector<double> log_weights;

  bool contains(Vertex v) const;
  std::size_t size() const noexcept { return members.size(); }
};

BoldSet bold_vertices(const AttachmentLog& g, std::int64_t tau_prime);

// log W_t = sum_i log((D_{t,i} + delta1) / (D_{t,i} + delta0)) for t = 2..n,
// indexed by t (entries 0 and 1 are zero).
std::vector<double> log_arrival_weights(const AttachmentLog& g, double delta0,
                                        double delta1);

void bind_weights(BoldSet& bold, const std::vector<double>& log_w);

// Relabels every vertex v as pi[v]. Throws SupportViolation when the result
// is not a valid attachment log.
AttachmentLog apply_permutation(const AttachmentLog& g, const std::vector<Vertex>& pi);

AttachmentLog prefix(const AttachmentLog& g, std::int64_t t);

// PALOG v1 text format.
AttachmentLog read_palog(std::istream& in);
AttachmentLog read_palog_file(const std::string& path);
void write_palog(std::ostream& out, const AttachmentLog& g);
std::string to_palog(const AttachmentLog& g);

}  // namespace pacp
