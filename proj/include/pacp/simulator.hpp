#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pacp/graph.hpp"

namespace pacp {

// delta(t) = delta0 for t <= tau, delta1 for t > tau.
struct DeltaProfile {
  enum class Kind { Constant, Step };
  Kind kind = Kind::Constant;
  double delta0 = 0.0;
  double delta1 = 0.0;
  std::int64_t tau = 0;

  static DeltaProfile constant(double d0) { return {Kind::Constant, d0, d0, 0}; }
  static DeltaProfile step(double d0, double d1, std::int64_t tau) {
    return {Kind::Step, d0, d1, tau};
  }

  double at(std::int64_t t) const {
    return kind == Kind::Step && t > tau ? delta1 : delta0;
  }
  // Throws DomainError unless delta > -m everywhere and 1 <= tau <= n for Step.
  void validate(int m, std::int64_t n) const;
};

// Stream (master, stream) of a seeded 64-bit Mersenne twister. Replicate r of
// a campaign uses stream r, so results do not depend on scheduling.
class Rng {
 public:
  Rng(std::uint64_t master, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Prefix-sum tree over integer degrees. The affine shift delta is applied
// during the descent: a tree node covering `len` active vertices has weight
// degree_sum + len * delta, so changing delta needs no rebuild and the total
// is exactly the closed form (2m + delta) t - 2m + i - 1.
class SamplerState {
 public:
  SamplerState(std::int64_t capacity_n, int m);

  // Starts arrival t >= 2 under parameter delta.
  void begin_arrival(std::int64_t t, double delta);
  // Draws V_{t,i} for the current sub-step i and records the edge.
  Vertex sample_and_attach(Rng& rng);
  // Draws without recording; exposed for pmf tests.
  Vertex sample(Rng& rng) const;
  // Records an edge to v for the current sub-step.
  void attach(Vertex v);
  // Closes the current arrival: vertex t joins with degree m.
  void end_arrival();

  std::int64_t t() const noexcept { return t_; }
  int i() const noexcept { return i_; }
  double delta() const noexcept { return delta_; }
  std::int64_t degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }
  // S_{t,i-1}(delta) for the current sub-step.
  double total() const;
  double probability(Vertex v) const;

 private:
  void add(Vertex v, std::int64_t amount);

  int m_;
  std::int64_t capacity_;
  std::int64_t t_ = 1;
  int i_ = 1;
  double delta_ = 0.0;
  std::int64_t active_ = 2;  // vertices 0..active_-1 may be targeted
  std::vector<std::int64_t> tree_;
  std::vector<std::int64_t> degree_;
  std::int64_t top_bit_ = 1;
};

AttachmentLog simulate(std::int64_t n, int m, const DeltaProfile& profile, Rng& rng);
AttachmentLog simulate(std::int64_t n, int m, const DeltaProfile& profile, std::uint64_t seed);

}  // namespace pacp
