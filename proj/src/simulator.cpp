#include "pacp/simulator.hpp"

#include <string>

#include "pacp/errors.hpp"

namespace pacp {

void DeltaProfile::validate(int m, std::int64_t n) const {
  require(m >= 1, ErrorKind::DomainError, "m must be >= 1");
  require(delta0 > -m, ErrorKind::DomainError, "delta0 must exceed -m");
  if (kind == Kind::Step) {
    require(delta1 > -m, ErrorKind::DomainError, "delta1 must exceed -m");
    require(tau >= 1 && tau <= n, ErrorKind::DomainError, "tau must lie in [1, n]");
  }
}

Rng::Rng(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

SamplerState::SamplerState(std::int64_t capacity_n, int m)
    : m_(m),
      capacity_(capacity_n + 1),
      tree_(static_cast<std::size_t>(capacity_n + 2), 0),
      degree_(static_cast<std::size_t>(capacity_n + 1), 0) {
  require(capacity_n >= 1 && m >= 1, ErrorKind::DomainError, "sampler needs n >= 1, m >= 1");
  while (top_bit_ * 2 <= capacity_) top_bit_ *= 2;
  add(0, m);
  add(1, m);
}

void SamplerState::add(Vertex v, std::int64_t amount) {
  degree_[static_cast<std::size_t>(v)] += amount;
  for (std::int64_t pos = v + 1; pos <= capacity_; pos += pos & -pos) {
    tree_[static_cast<std::size_t>(pos)] += amount;
  }
}

void SamplerState::begin_arrival(std::int64_t t, double delta) {
  require(t == t_ + 1 && t < capacity_, ErrorKind::DomainError, "arrivals must be consecutive");
  t_ = t;
  i_ = 1;
  delta_ = delta;
  active_ = t;
}

double SamplerState::total() const {
  return (2.0 * m_ + delta_) * static_cast<double>(t_) - 2.0 * m_ + (i_ - 1);
}

double SamplerState::probability(Vertex v) const {
  return (static_cast<double>(degree(v)) + delta_) / total();
}

Vertex SamplerState::sample(Rng& rng) const {
  double rem = rng.uniform() * total();
  std::int64_t pos = 0;
  for (std::int64_t step = top_bit_; step > 0; step >>= 1) {
    const std::int64_t nxt = pos + step;
    if (nxt > active_) continue;
    const double w = static_cast<double>(tree_[static_cast<std::size_t>(nxt)]) +
                     static_cast<double>(step) * delta_;
    if (rem >= w) {
      rem -= w;
      pos = nxt;
    }
  }
  // Rounding can push the descent one past the last active vertex.
  return pos < active_ ? pos : active_ - 1;
}

void SamplerState::attach(Vertex v) {
  add(v, 1);
  ++i_;
}

Vertex SamplerState::sample_and_attach(Rng& rng) {
  const Vertex v = sample(rng);
  attach(v);
  return v;
}

void SamplerState::end_arrival() { add(t_, m_); }

AttachmentLog simulate(std::int64_t n, int m, const DeltaProfile& profile, Rng& rng) {
  profile.validate(m, n);
  std::vector<Vertex> targets;
  targets.reserve(static_cast<std::size_t>((n - 1) * m));
  SamplerState state(n, m);
  for (std::int64_t t = 2; t <= n; ++t) {
    state.begin_arrival(t, profile.at(t));
    for (int i = 1; i <= m; ++i) targets.push_back(state.sample_and_attach(rng));
    state.end_arrival();
  }
  return AttachmentLog(n, m, std::move(targets));
}

AttachmentLog simulate(std::int64_t n, int m, const DeltaProfile& profile, std::uint64_t seed) {
  Rng rng(seed, 0);
  return simulate(n, m, profile, rng);
}

}  // namespace pacp
