#include "pacp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacp/errors.hpp"

namespace pacp {

AttachmentLog::AttachmentLog(std::int64_t n, int m, std::vector<Vertex> targets)
    : n_(n), m_(m), targets_(std::move(targets)) {
  require(n_ >= 1, ErrorKind::DomainError, "n must be >= 1");
  require(m_ >= 1, ErrorKind::DomainError, "m must be >= 1");
  const auto expected = static_cast<std::size_t>((n_ - 1) * m_);
  if (targets_.size() < expected) {
    throw Error(ErrorKind::MissingRow, "attachment log has fewer than (n-1)*m targets");
  }
  if (targets_.size() > expected) {
    throw Error(ErrorKind::WrongOutDegree, "attachment log has more than (n-1)*m targets");
  }
  for (std::int64_t t = 2; t <= n_; ++t) {
    for (int i = 1; i <= m_; ++i) {
      const Vertex v = target(t, i);
      if (v < 0 || v >= t) {
        throw Error(ErrorKind::TargetTooLarge,
                    "arrival " + std::to_string(t) + " targets vertex " + std::to_string(v));
      }
    }
  }
}

AttachmentLog AttachmentLog::from_rows(std::int64_t n, int m,
                                       const std::vector<std::vector<Vertex>>& rows) {
  require(n >= 1 && m >= 1, ErrorKind::DomainError, "n and m must be >= 1");
  if (static_cast<std::int64_t>(rows.size()) < n - 1) {
    throw Error(ErrorKind::MissingRow, "expected one row per arrival 2..n");
  }
  if (static_cast<std::int64_t>(rows.size()) > n - 1) {
    throw Error(ErrorKind::MalformedLog, "more rows than arrivals 2..n");
  }
  std::vector<Vertex> flat;
  flat.reserve(static_cast<std::size_t>((n - 1) * m));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != m) {
      throw Error(ErrorKind::WrongOutDegree,
                  "arrival " + std::to_string(r + 2) + " has " +
                      std::to_string(rows[r].size()) + " targets, expected " +
                      std::to_string(m));
    }
    flat.insert(flat.end(), rows[r].begin(), rows[r].end());
  }
  return AttachmentLog(n, m, std::move(flat));
}

std::vector<std::int64_t> AttachmentLog::degrees(std::optional<std::int64_t> upto) const {
  const std::int64_t last = upto.value_or(n_);
  require(last >= 1 && last <= n_, ErrorKind::DomainError, "prefix time out of range");
  std::vector<std::int64_t> deg(static_cast<std::size_t>(last + 1), 0);
  deg[0] = m_;
  deg[1] = m_;
  for (std::int64_t t = 2; t <= last; ++t) {
    for (const Vertex v : row(t)) ++deg[static_cast<std::size_t>(v)];
    deg[static_cast<std::size_t>(t)] = m_;
  }
  return deg;
}

std::vector<std::int64_t> AttachmentLog::attachment_degrees() const {
  std::vector<std::int64_t> deg(static_cast<std::size_t>(n_ + 1), 0);
  std::vector<std::int64_t> out(targets_.size());
  deg[0] = m_;
  deg[1] = m_;
  std::size_t idx = 0;
  for (std::int64_t t = 2; t <= n_; ++t) {
    for (const Vertex v : row(t)) {
      out[idx++] = deg[static_cast<std::size_t>(v)]++;
    }
    deg[static_cast<std::size_t>(t)] = m_;
  }
  return out;
}

DegreeTailCounts degree_tail_counts(const AttachmentLog& g, std::optional<std::int64_t> upto,
                                    std::optional<std::int64_t> split_at) {
  DegreeTailCounts out;
  out.n = g.n();
  out.m = g.m();
  out.upto = upto.value_or(g.n());
  require(out.upto >= 1 && out.upto <= g.n(), ErrorKind::DomainError, "upto out of range");
  const auto deg = g.degrees(out.upto);
  const std::int64_t max_deg = *std::max_element(deg.begin(), deg.end());
  std::vector<std::int64_t> hist(static_cast<std::size_t>(max_deg + 1), 0);
  for (const auto d : deg) ++hist[static_cast<std::size_t>(d)];
  // N_{>k} for k = m..max_deg-1; zero from max_deg on.
  out.tail.assign(static_cast<std::size_t>(max_deg - g.m()), 0);
  std::int64_t above = 0;
  for (std::int64_t k = max_deg - 1; k >= g.m(); --k) {
    above += hist[static_cast<std::size_t>(k + 1)];
    out.tail[static_cast<std::size_t>(k - g.m())] = above;
  }
  if (split_at) {
    const std::int64_t tau = *split_at;
    require(tau >= 0 && tau <= out.upto, ErrorKind::DomainError, "split time out of range");
    out.split_at = tau;
    out.in_le.assign(static_cast<std::size_t>(out.upto + 1), 0);
    out.in_gt.assign(static_cast<std::size_t>(out.upto + 1), 0);
    (1 <= tau ? out.in_le : out.in_gt)[0] += g.m();
    for (std::int64_t t = 2; t <= out.upto; ++t) {
      auto& bucket = t <= tau ? out.in_le : out.in_gt;
      for (const Vertex v : g.row(t)) ++bucket[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

bool BoldSet::contains(Vertex v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

BoldSet bold_vertices(const AttachmentLog& g, std::int64_t tau_prime) {
  require(tau_prime >= 0 && tau_prime < g.n(), ErrorKind::DomainError,
          "tau' must lie in [0, n)");
  const std::int64_t n = g.n();
  const auto deg = g.degrees();
  // Largest and second-largest distinct parent of every vertex.
  std::vector<Vertex> p1(static_cast<std::size_t>(n + 1), -1);
  std::vector<Vertex> p2(static_cast<std::size_t>(n + 1), -1);
  auto note_parent = [&](Vertex child, Vertex parent) {
    auto& a = p1[static_cast<std::size_t>(child)];
    if (a == parent) return;
    p2[static_cast<std::size_t>(child)] = a;
    a = parent;
  };
  note_parent(0, 1);
  for (std::int64_t t = 2; t <= n; ++t) {
    for (const Vertex w : g.row(t)) note_parent(w, t);
  }
  BoldSet out;
  out.tau_prime = tau_prime;
  for (Vertex v = tau_prime + 1; v <= n; ++v) {
    if (deg[static_cast<std::size_t>(v)] != g.m()) continue;
    bool bold = true;
    auto check_child = [&](Vertex w) {
      const auto wi = static_cast<std::size_t>(w);
      if (w > tau_prime || p1[wi] != v || p2[wi] > tau_prime) bold = false;
    };
    if (v == 1) {
      check_child(0);
    } else {
      for (const Vertex w : g.row(v)) check_child(w);
    }
    if (bold) out.members.push_back(v);
  }
  return out;
}

std::vector<double> log_arrival_weights(const AttachmentLog& g, double delta0, double delta1) {
  const auto dd = g.attachment_degrees();
  std::vector<double> out(static_cast<std::size_t>(g.n() + 1), 0.0);
  std::size_t idx = 0;
  for (std::int64_t t = 2; t <= g.n(); ++t) {
    double acc = 0.0;
    for (int i = 0; i < g.m(); ++i) {
      const double d = static_cast<double>(dd[idx++]);
      acc += std::log1p((delta1 - delta0) / (d + delta0));
    }
    out[static_cast<std::size_t>(t)] = acc;
  }
  return out;
}

void bind_weights(BoldSet& bold, const std::vector<double>& log_w) {
  bold.log_weights.clear();
  bold.log_weights.reserve(bold.members.size());
  for (const Vertex v : bold.members) bold.log_weights.push_back(log_w[static_cast<std::size_t>(v)]);
}

AttachmentLog apply_permutation(const AttachmentLog& g, const std::vector<Vertex>& pi) {
  const std::int64_t n = g.n();
  require(static_cast<std::int64_t>(pi.size()) == n + 1, ErrorKind::DomainError,
          "permutation must act on [0, n]");
  std::vector<Vertex> inv(static_cast<std::size_t>(n + 1), -1);
  for (Vertex v = 0; v <= n; ++v) {
    const Vertex img = pi[static_cast<std::size_t>(v)];
    require(img >= 0 && img <= n && inv[static_cast<std::size_t>(img)] == -1,
            ErrorKind::DomainError, "permutation is not a bijection of [0, n]");
    inv[static_cast<std::size_t>(img)] = v;
  }
  const int m = g.m();
  auto violation = [](Vertex label) {
    return Error(ErrorKind::SupportViolation,
                 "relabeled vertex " + std::to_string(label) + " breaks the support");
  };
  // Vertex 0 is the only vertex without out-edges, so it must stay fixed.
  if (inv[0] != 0) throw violation(0);
  std::vector<Vertex> targets;
  targets.reserve(g.targets().size());
  for (Vertex s = 1; s <= n; ++s) {
    const Vertex old = inv[static_cast<std::size_t>(s)];
    if (old == 0) throw violation(s);
    for (int i = 1; i <= m; ++i) {
      const Vertex w = old == 1 ? pi[0] : pi[static_cast<std::size_t>(g.target(old, i))];
      if (w >= s) throw violation(s);
      if (s >= 2) targets.push_back(w);
    }
  }
  return AttachmentLog(n, m, std::move(targets));
}

AttachmentLog prefix(const AttachmentLog& g, std::int64_t t) {
  require(t >= 1 && t <= g.n(), ErrorKind::DomainError, "prefix time out of range");
  const auto count = static_cast<std::size_t>((t - 1) * g.m());
  return AttachmentLog(t, g.m(),
                       std::vector<Vertex>(g.targets().begin(), g.targets().begin() +
                                                                   static_cast<std::ptrdiff_t>(count)));
}

}  // namespace pacp
