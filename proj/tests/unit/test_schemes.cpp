#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qss/error.hpp"
#include "qss/schemes.hpp"
#include "qss/verifier.hpp"

using namespace qss;

namespace {

AccessStructure S(int n, std::vector<std::vector<int>> sets) {
  return AccessStructure::from_lists(n, sets);
}

PlayerSubset P(int n, std::vector<int> players) { return PlayerSubset::from_players(n, players); }

}  // namespace

TEST(Example1, SharedStateHasFourEqualTerms) {
  const std::array<double, 2> mixed = {0.5, 0.5};
  const auto st = share_state(build_example1(), mixed);
  const auto terms = nonzero_terms(st);
  ASSERT_EQ(terms.size(), 4u);
  const std::vector<std::string> kets = {"00000", "01111", "10011", "11100"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(terms[i].first, kets[i]);
    EXPECT_NEAR(terms[i].second.real(), 0.5, 1e-12);
    EXPECT_NEAR(terms[i].second.imag(), 0.0, 1e-12);
  }
}

TEST(Example1, IsAResultOneInstance) {
  const auto r = build_result1(4, P(4, {1, 2}));
  EXPECT_EQ(r.scheme.basis_images, build_example1().basis_images);
  EXPECT_EQ(r.gamma, threshold_structure(3, 4));
}

TEST(Result1, MinimalSets) {
  EXPECT_EQ(build_result1(5, P(5, {1, 2})).gamma.label(), "{123,124,125,1345,2345}");
  EXPECT_EQ(build_result1(3, P(3, {1})).gamma.label(), "{12,13}");
  EXPECT_EQ(build_result1(6, P(6, {1, 2, 3})).gamma.label(), "{1234,1235,1236,1456,2456,3456}");
  EXPECT_THROW(build_result1(2, P(2, {1})), InputError);
  EXPECT_THROW(build_result1(8, P(8, {1})), InputError);
  EXPECT_THROW(build_result1(4, P(4, {})), InputError);
  EXPECT_THROW(build_result1(4, P(4, {1, 2, 3, 4})), InputError);
}

TEST(Result1, AlwaysAdmissibleAndIsometric) {
  for (int n = 3; n <= 7; ++n) {
    for (std::uint32_t b = 1; b + 1 < (1u << n); ++b) {
      const auto r = build_result1(n, PlayerSubset(n, b));
      EXPECT_TRUE(is_quantum_admissible(r.gamma)) << r.scheme.name;
      EXPECT_NO_THROW(check_isometry({r.scheme.basis_images[0], r.scheme.basis_images[1]}));
    }
  }
}

TEST(Star, AllPairsThroughCenter) {
  EXPECT_EQ(build_star(4, 1).gamma.label(), "{12,13,14}");
  EXPECT_EQ(build_star(5, 1).gamma.label(), "{12,13,14,15}");
  EXPECT_EQ(build_star(3, 2).gamma.label(), "{12,23}");
  EXPECT_THROW(build_star(4, 5), InputError);
}

TEST(Assignment, PartitionValidation) {
  EXPECT_THROW(Assignment::from_lists(4, {{1, 2}, {2}, {3}, {4}}), InputError);
  EXPECT_THROW(Assignment::from_lists(4, {{1}, {2}, {3}}), InputError);
  const auto a = Assignment::from_lists(5, {{2}, {3}, {4}, {5}}, {1});
  EXPECT_EQ(a.holder(1), kDealer);
  EXPECT_EQ(a.describe(), "P1<-{2} P2<-{3} P3<-{4} P4<-{5} DEALER<-{1}");
}

TEST(Induce, DealerRouteGivesSingleFourPlayerSet) {
  const auto r = build_result1(5, P(5, {1, 2}));
  const auto a = Assignment::from_lists(5, {{2}, {3}, {4}, {5}}, {1});
  EXPECT_EQ(induce_structure(r.gamma, a).structure, S(4, {{1, 2, 3, 4}}));
}

TEST(Induce, CorrectedMergedAssignment) {
  const auto r = build_result1(6, P(6, {1, 2, 3}));
  const auto a = Assignment::from_lists(6, {{1, 4}, {2}, {3}, {5, 6}});
  EXPECT_EQ(induce_structure(r.gamma, a).structure, S(4, {{1, 2, 3}, {1, 4}}));
}

TEST(Induce, PrintedMergedAssignmentMisses) {
  const auto r = build_result1(6, P(6, {1, 2, 3}));
  const auto a = Assignment::from_lists(6, {{1, 4}, {2, 3}, {5}, {6}});
  const auto induced = induce_structure(r.gamma, a).structure;
  EXPECT_NE(induced, S(4, {{1, 2, 3}, {1, 4}}));
  EXPECT_TRUE(induced.contains(P(4, {1, 2})));
  EXPECT_FALSE(induced.contains(P(4, {1, 4})));
}

TEST(Induce, IdentityAndMonotonicity) {
  const auto r = build_result1(5, P(5, {1, 2}));
  EXPECT_EQ(induce_structure(r.gamma, Assignment::identity(5)).structure, r.gamma);
  // Handing a dealer particle to P1 can only enlarge the closure.
  const auto before = induce_structure(r.gamma, Assignment::from_lists(5, {{2}, {3}, {4}, {5}}, {1}));
  const auto after = induce_structure(r.gamma, Assignment::from_lists(5, {{1, 2}, {3}, {4}, {5}}));
  for (std::uint32_t bits = 1; bits < 16; ++bits) {
    const PlayerSubset s(4, bits);
    if (before.structure.contains(s)) EXPECT_TRUE(after.structure.contains(s)) << s.label();
  }
}

TEST(Induce, PermutationTransfer) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial % 3;
    const auto r = build_result1(n, P(n, {1, 2}));
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto moved = permute_particles(r.scheme, perm);
    const auto induced = induce_structure(moved, *moved.particle_structure).structure;
    EXPECT_EQ(induced, permute(r.gamma, perm));
    // The permuted scheme realizes the permuted structure, not just induces it.
    EXPECT_TRUE(verify(moved, permute(r.gamma, perm), Model::kGeneralized).meets_model);
  }
}

TEST(Search, FindsCorrectedAssignment) {
  const auto r = build_result1(6, P(6, {1, 2, 3}));
  const auto target = S(4, {{1, 2, 3}, {1, 4}});
  const auto found = search_assignment(r.scheme, r.gamma, target, true, generalized_acceptor());
  ASSERT_TRUE(found);
  EXPECT_EQ(induce_structure(r.gamma, *found).structure, target);
  EXPECT_TRUE(verify(with_assignment(r.scheme, *found), target, Model::kGeneralized).meets_model);
}

TEST(Search, Example1CannotInduceAStar) {
  const auto s = build_example1();
  EXPECT_FALSE(search_assignment(s, *s.particle_structure, S(4, {{1, 2}, {1, 3}, {1, 4}}), true,
                                 generalized_acceptor()));
}

TEST(Search, PrintedSevenParticleRouteValidates) {
  const auto r = build_result1(7, P(7, {1, 2, 3}));
  const auto a = Assignment::from_lists(7, {{1, 5}, {2, 4}, {3}, {6}, {7}});
  const auto target = S(5, {{1, 2, 3}, {1, 2, 4, 5}});
  EXPECT_EQ(induce_structure(r.gamma, a).structure, target);
  EXPECT_TRUE(verify(with_assignment(r.scheme, a), target, Model::kGeneralized).meets_model);
}

TEST(ShareState, QubitBudget) {
  const std::array<double, 2> mixed = {0.5, 0.5};
  EXPECT_EQ(share_state(build_result1(7, P(7, {1})).scheme, mixed).layout().total_qubits(), 8);
  const auto e = encode_secret(build_example1(), 1.0, 0.0);
  EXPECT_NEAR(std::abs(e.amplitude("0000")), 1 / std::sqrt(2.0), 1e-15);
}
