#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "pacp/errors.hpp"
#include "pacp/graph.hpp"
#include "pacp/reduction.hpp"
#include "pacp/simulator.hpp"
#include "support.hpp"

namespace pacp {
namespace {

AttachmentLog rows1(std::int64_t n, std::vector<Vertex> targets) {
  return AttachmentLog(n, 1, std::move(targets));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no pacp::Error thrown";
  return ErrorKind::DomainError;
}

TEST(AttachmentLog, BaseGraphHasMultiEdge) {
  const auto g = AttachmentLog::base(3);
  EXPECT_EQ(g.n(), 1);
  EXPECT_EQ(g.degrees(), (std::vector<std::int64_t>{3, 3}));
}

TEST(AttachmentLog, DegreesByReplay) {
  const auto g = rows1(3, {0, 1});
  EXPECT_EQ(g.degrees(), (std::vector<std::int64_t>{2, 2, 1, 1}));
  EXPECT_EQ(g.degrees(2), (std::vector<std::int64_t>{2, 1, 1}));
}

TEST(AttachmentLog, RejectsInvalidLogs) {
  EXPECT_EQ(kind_of([] { rows1(2, {2}); }), ErrorKind::TargetTooLarge);
  EXPECT_EQ(kind_of([] { rows1(3, {0, 3}); }), ErrorKind::TargetTooLarge);
  EXPECT_EQ(kind_of([] { rows1(3, {0}); }), ErrorKind::MissingRow);
  EXPECT_EQ(kind_of([] { rows1(3, {0, 0, 0}); }), ErrorKind::WrongOutDegree);
  EXPECT_EQ(kind_of([] { AttachmentLog::from_rows(3, 2, {{0, 1}, {0}}); }),
            ErrorKind::WrongOutDegree);
  EXPECT_EQ(kind_of([] { AttachmentLog::from_rows(3, 1, {{0}}); }), ErrorKind::MissingRow);
}

TEST(AttachmentLog, AttachmentDegreesMatchReplay) {
  const auto g = AttachmentLog::from_rows(3, 2, {{0, 0}, {2, 1}});
  // Arrival 2: d(0) = 2, then 3. Arrival 3: d(2) = 2, d(1) = 2.
  EXPECT_EQ(g.attachment_degrees(), (std::vector<std::int64_t>{2, 3, 2, 2}));
}

TEST(DegreeTailCounts, HandCountedExample) {
  const auto tc = degree_tail_counts(rows1(3, {0, 0}));
  EXPECT_EQ(tc.at(1), 1);
  EXPECT_EQ(tc.at(2), 1);
  EXPECT_EQ(tc.at(3), 0);
  EXPECT_EQ(tc.at(10), 0);
}

TEST(DegreeTailCounts, BaseGraphHasNoExcess) {
  const auto tc = degree_tail_counts(AttachmentLog::base(1));
  EXPECT_EQ(tc.at(1), 0);
}

TEST(DegreeTailCounts, ExcessIdentityAndMonotone) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int m = 1 + static_cast<int>(s % 3);
    const std::int64_t n = 2 + static_cast<std::int64_t>(s * 7 % 300);
    const auto g = simulate(n, m, DeltaProfile::constant(s % 2 ? -0.5 : 1.5), s);
    const auto tc = degree_tail_counts(g);
    std::int64_t sum = 0;
    for (std::int64_t k = m; k <= n * m; ++k) {
      sum += tc.at(k);
      EXPECT_LE(tc.at(k + 1), tc.at(k));
    }
    EXPECT_EQ(sum, m * (n - 1));
    EXPECT_EQ(tc.at(n * m), 0);
  }
}

TEST(DegreeTailCounts, PrefixAgreesWithUpto) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto g = simulate(120, 2, DeltaProfile::constant(0.3), s);
    for (std::int64_t t : {1, 2, 17, 60, 120}) {
      const auto a = degree_tail_counts(prefix(g, t));
      const auto b = degree_tail_counts(g, t);
      for (std::int64_t k = 2; k <= 240; ++k) ASSERT_EQ(a.at(k), b.at(k)) << t << " " << k;
    }
  }
}

TEST(DegreeTailCounts, SplitInDegreesSumToInDegree) {
  const auto g = simulate(300, 2, DeltaProfile::constant(0.0), 5);
  const auto tc = degree_tail_counts(g, {}, 150);
  const auto deg = g.degrees();
  for (Vertex v = 0; v <= g.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    // Out-degree is m for every vertex except 0, whose m base edges count as in-degree.
    const std::int64_t in = deg[i] - (v == 0 ? 0 : 2);
    EXPECT_EQ(tc.in_le[i] + tc.in_gt[i], in) << v;
  }
}

TEST(Prefix, Examples) {
  const auto g = rows1(3, {0, 1});
  EXPECT_EQ(prefix(g, 3), g);
  EXPECT_EQ(prefix(g, 2), rows1(2, {0}));
}

TEST(BoldVertices, EarlyCoParentsOnly) {
  const auto bold = bold_vertices(rows1(4, {0, 1, 2}), 2);
  EXPECT_EQ(bold.members, (std::vector<Vertex>{3, 4}));
}

TEST(BoldVertices, LateChildExcludesParent) {
  // 4 points at the late vertex 3; relabeling 4 below 3 would reverse that edge.
  const auto bold = bold_vertices(rows1(4, {0, 1, 3}), 2);
  EXPECT_TRUE(bold.members.empty());
}

TEST(BoldVertices, GainedDegreeExcludes) {
  const auto bold = bold_vertices(rows1(5, {0, 1, 0, 3}), 2);
  EXPECT_FALSE(bold.contains(3));  // degree 2 after 5 -> 3
  EXPECT_TRUE(bold.contains(4));
  EXPECT_FALSE(bold.contains(5));  // child 3 is late
  const auto g = rows1(5, {0, 1, 0, 4});
  const auto b2 = bold_vertices(g, 3);
  EXPECT_FALSE(b2.contains(4));  // degree 2
}

TEST(BoldVertices, SharedChildNeedsEarlyCoParents) {
  // 3 and 4 both attach to 0, whose other late parent disqualifies both.
  const auto bold = bold_vertices(rows1(4, {1, 0, 0}), 2);
  EXPECT_TRUE(bold.members.empty());
  // With cutoff 3 only vertex 4 is late; its co-parents 1 and 3 are early.
  EXPECT_EQ(bold_vertices(rows1(4, {1, 0, 0}), 3).members, (std::vector<Vertex>{4}));
}

// Literal reimplementation of the membership clauses, quadratic time.
std::vector<Vertex> bold_brute(const AttachmentLog& g, std::int64_t tp) {
  const auto deg = g.degrees();
  std::vector<Vertex> out;
  for (Vertex v = tp + 1; v <= g.n(); ++v) {
    if (deg[static_cast<std::size_t>(v)] != g.m()) continue;
    bool ok = true;
    std::vector<Vertex> children;
    if (v == 1) children.push_back(0);
    if (v >= 2) children.assign(g.row(v).begin(), g.row(v).end());
    for (const Vertex w : children) {
      if (w > tp) ok = false;
      for (Vertex u = 1; u <= g.n() && ok; ++u) {
        if (u == v) continue;
        bool parent = u == 1 ? w == 0 : false;
        if (u >= 2) {
          for (const Vertex x : g.row(u)) parent = parent || x == w;
        }
        if (parent && u > tp) ok = false;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

TEST(BoldVertices, MatchesClauseByClauseDefinition) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const int m = 1 + static_cast<int>(s % 2);
    const std::int64_t n = 3 + static_cast<std::int64_t>(s % 40);
    const auto g = simulate(n, m, DeltaProfile::constant(s % 3 ? 0.0 : 4.0), s);
    for (std::int64_t tp = 0; tp < n; tp += 1 + n / 7) {
      EXPECT_EQ(bold_vertices(g, tp).members, bold_brute(g, tp)) << s << " " << tp;
    }
  }
}

TEST(ApplyPermutation, IdentityAndSwap) {
  const auto g = rows1(4, {0, 1, 2});
  EXPECT_EQ(apply_permutation(g, {0, 1, 2, 3, 4}), g);
  EXPECT_EQ(apply_permutation(g, {0, 1, 2, 4, 3}), rows1(4, {0, 2, 1}));
}

TEST(ApplyPermutation, UpwardEdgeIsSupportViolation) {
  const auto g = rows1(4, {0, 1, 3});
  EXPECT_EQ(kind_of([&] { apply_permutation(g, {0, 1, 2, 4, 3}); }),
            ErrorKind::SupportViolation);
}

TEST(ApplyPermutation, KernelPermutationsPreserveSupportAndBoldSet) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int m = 1 + static_cast<int>(s % 3);
    const std::int64_t n = 4 + static_cast<std::int64_t>(s % 200);
    const auto g = simulate(n, m, DeltaProfile::constant(s % 2 ? 0.0 : 2.0), s);
    const std::int64_t tp = n / 2;
    const auto bold = bold_vertices(g, tp);
    Rng rng(s, 99);
    const auto pi = kernel_sample(bold, n, rng);
    AttachmentLog h = g;
    ASSERT_NO_THROW(h = apply_permutation(g, pi)) << s;
    // The relabeled log must pass validation from scratch.
    ASSERT_NO_THROW(AttachmentLog(h.n(), h.m(), h.targets()));
    EXPECT_EQ(bold_vertices(h, tp).members, bold.members) << s;
    EXPECT_EQ(degree_tail_counts(h).tail, degree_tail_counts(g).tail);
  }
}

TEST(Palog, RoundTripIsExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = simulate(50 + static_cast<std::int64_t>(s), 1 + static_cast<int>(s % 3),
                            DeltaProfile::constant(0.5), s);
    std::istringstream in(to_palog(g));
    const auto h = read_palog(in);
    EXPECT_EQ(h, g);
    EXPECT_EQ(h.degrees(), g.degrees());
    EXPECT_EQ(to_palog(h), to_palog(g));
  }
}

TEST(Palog, Format) {
  EXPECT_EQ(to_palog(rows1(3, {0, 1})), "PALOG v1 n=3 m=1\n2 0\n3 1\n");
  EXPECT_EQ(to_palog(AttachmentLog::base(2)), "PALOG v1 n=1 m=2\n");
}

ErrorKind parse_kind(const std::string& text) {
  return kind_of([&] {
    std::istringstream in(text);
    read_palog(in);
  });
}

TEST(Palog, RejectsMalformedInput) {
  EXPECT_EQ(parse_kind("PALOG v2 n=3 m=1\n2 0\n3 1\n"), ErrorKind::MalformedLog);
  EXPECT_EQ(parse_kind("PALOG v1 n=3\n2 0\n3 1\n"), ErrorKind::MalformedLog);
  EXPECT_EQ(parse_kind("PALOG v1 n=3 m=1\n2 0\n2 0\n3 1\n"), ErrorKind::MalformedLog);
  EXPECT_EQ(parse_kind("PALOG v1 n=3 m=1\n3 1\n2 0\n"), ErrorKind::MissingRow);
  EXPECT_EQ(parse_kind("PALOG v1 n=3 m=1\n2 0\n"), ErrorKind::MissingRow);
  EXPECT_EQ(parse_kind("PALOG v1 n=3 m=1\n2 0\n3 1 0\n"), ErrorKind::WrongOutDegree);
  EXPECT_EQ(parse_kind("PALOG v1 n=3 m=1\n2 0\n3 3\n"), ErrorKind::TargetTooLarge);
  EXPECT_EQ(parse_kind("PALOG v1 n=2 m=1\n2 0\n3 1\n"), ErrorKind::MalformedLog);
  EXPECT_EQ(parse_kind("PALOG v1 n=2 m=1\n2 x\n"), ErrorKind::MalformedLog);
}

TEST(LogArrivalWeights, HandComputed) {
  // Arrival 3 attaches to vertex 1 of degree 1; arrival 2 to vertex 0 of degree 1.
  const auto lw = log_arrival_weights(rows1(3, {0, 1}), 0.0, 1.0);
  ASSERT_EQ(lw.size(), 4u);
  EXPECT_DOUBLE_EQ(lw[2], std::log(2.0));
  EXPECT_DOUBLE_EQ(lw[3], std::log(2.0));
}

}  // namespace
}  // namespace pacp
