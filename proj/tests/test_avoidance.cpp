#include <gtest/gtest.h>

#include <set>

#include "cantordyn/avoidance.hpp"
#include "cantordyn/error.hpp"
#include "oracle.hpp"

namespace cantordyn {
namespace {

using oracle::Str;

const std::vector<Str> kRemoved{"100", "11001001", "1110010010011"};

bool fixture_member(const Str& s) {
  for (const Str& r : kRemoved) {
    if (oracle::starts_with(s, r)) return false;
  }
  return true;
}

// Some extension of w to `depth` letters avoids every removed cylinder.
bool fixture_cylinder_alive(const Str& w, std::size_t depth) {
  if (!fixture_member(w)) return false;
  if (w.size() >= depth) return true;
  return fixture_cylinder_alive(w + '0', depth) || fixture_cylinder_alive(w + '1', depth);
}

ClosedClass fixture_class(std::size_t depth) {
  return ClosedClass::from_predicate(2, depth, "fixture", [](const Word& w) { return fixture_member(w.str()); });
}

TEST(PeriodicPoints, LyndonGenerators) {
  for (int k : {2, 3}) {
    std::vector<Str> expected;
    for (std::size_t len = 1; len <= 6; ++len) {
      for (const Str& s : oracle::strings_of_length(k, len)) {
        if (oracle::is_lyndon(s)) expected.push_back(s);
      }
    }
    std::vector<Word> got = enumerate_periodic_points(k, 6);
    ASSERT_EQ(got.size(), expected.size()) << k;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].str(), expected[i]);
  }
  std::vector<Word> two = enumerate_periodic_points(2, 2);
  EXPECT_EQ(two, (std::vector<Word>{Word("0"), Word("1"), Word("01")}));
  std::vector<Word> four = enumerate_periodic_points(2, 4);
  EXPECT_NE(std::find(four.begin(), four.end(), Word("0011")), four.end());
  EXPECT_EQ(shift_orbit(Word("0011"), 8).size(), 4u);
}

TEST(Dodging, ZeroPointIsDodgedByOnes) {
  ClosedClass p = ClosedClass::explicit_nodes(2, 16, {Word::constant(0, 16)});
  DodgeOutcome out = build_dodging_class(p);
  ASSERT_EQ(out.which, DodgeCase::kOrbit);
  EXPECT_EQ(out.orbit_generator, std::optional<Word>(Word("1")));
  for (const Word& w : out.system.space.members(16)) EXPECT_FALSE(p.contains(w));
  EXPECT_TRUE(validate_system(out.system).ok());
}

TEST(Dodging, GoldenMeanLeftIsDodgedByOnes) {
  ClosedClass p = ClosedClass::from_predicate(2, 16, "golden-left", [](const Word& w) {
    return (w.empty() || w[0] == 0) && !w.contains_factor(Word("11"));
  });
  DodgeOutcome out = build_dodging_class(p);
  ASSERT_EQ(out.which, DodgeCase::kOrbit);
  EXPECT_EQ(out.orbit_generator, std::optional<Word>(Word("1")));
}

TEST(Dodging, FullSpaceGivesDegenerateHat) {
  const std::size_t depth = 16;
  DodgeOutcome out = build_dodging_class(ClosedClass::full(2, depth));
  ASSERT_EQ(out.which, DodgeCase::kHat);
  const Str lone = "1" + Str(depth - 1, '0');
  ASSERT_TRUE(out.probe);
  EXPECT_EQ(out.probe->str(), lone);
  std::set<Str> members;
  for (const Word& w : out.hat->members(depth)) members.insert(w.str());
  EXPECT_EQ(members, std::set<Str>{lone});
  EXPECT_TRUE(verify_not_ap(*out.hat, 3));
  // The lone 1 is never revisited by the orbit.
  for (std::size_t n = 1; n < depth; ++n) EXPECT_NE(lone[n], '1');
}

TEST(Dodging, FixtureBuildsSigmaSequence) {
  const std::size_t depth = 32;
  DodgeOptions options;
  options.sigma_stages = 3;
  DodgeOutcome out = build_dodging_class(fixture_class(depth), options);
  ASSERT_EQ(out.which, DodgeCase::kHat);
  ASSERT_FALSE(out.probe);

  // Rebuild the sequence on strings: each n is the least repetition whose
  // cylinder misses the class.
  std::vector<Str> sigmas;
  std::vector<std::size_t> reps;
  std::vector<std::size_t> cs;
  std::size_t total = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    Str block;
    for (std::size_t j = sigmas.size(); j-- > 0;) block += sigmas[j];
    block += Str(i, '1');
    if (i == 0) block = "0";
    std::size_t n = 1;
    while (fixture_cylinder_alive(Str(i + 1, '1') + [&] {
      Str r;
      for (std::size_t t = 0; t < n; ++t) r += block;
      return r;
    }(), depth)) {
      ++n;
    }
    Str sigma;
    for (std::size_t t = 0; t < n; ++t) sigma += block;
    sigmas.push_back(sigma);
    reps.push_back(n);
    total += sigma.size();
    cs.push_back(2 * (i + 1) + total);
  }
  ASSERT_EQ(out.sequence.sigmas.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out.sequence.sigmas[i].str(), sigmas[i]) << i;
    EXPECT_EQ(out.sequence.reps[i], reps[i]) << i;
    EXPECT_EQ(out.sequence.c[i], cs[i]) << i;
  }
  EXPECT_EQ(sigmas, (std::vector<Str>{"00", "001001", "0010010011"}));
  EXPECT_EQ(cs, (std::vector<std::size_t>{4, 12, 24}));

  // Structural invariants, checked on strings.
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i) {
    EXPECT_TRUE(oracle::starts_with(sigmas[i + 1], sigmas[i]));
    EXPECT_NE(sigmas[i + 1].find(Str(i + 1, '1')), Str::npos);
    EXPECT_EQ(sigmas[i + 1].find(Str(i + 2, '1')), Str::npos);
  }
  EXPECT_TRUE(check_sigma_sequence(out.sequence).empty());
  EXPECT_EQ(sigma_block(out.sequence).str(), "0010010011" "001001" "00" "111");

  // Hat soundness on its first members.
  std::vector<Word> members = out.hat->members(depth, 64);
  ASSERT_FALSE(members.empty());
  for (const Word& w : members) {
    const Str x = w.str();
    EXPECT_TRUE(fixture_member(x));
    EXPECT_EQ(x[0], '0');
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_NE(x.substr(0, cs[k - 1]).find(Str(k, '1')), Str::npos) << x;
  }
  EXPECT_TRUE(verify_not_ap(*out.hat, 3));
}

TEST(Dodging, FixtureProbeSurvivesAtFourthStage) {
  const std::size_t depth = 32;
  DodgeOutcome out = build_dodging_class(fixture_class(depth));
  ASSERT_EQ(out.which, DodgeCase::kHat);
  ASSERT_TRUE(out.probe);
  const Str probe = out.probe->str();
  const Str block = "0010010011" "001001" "00" "111";
  EXPECT_EQ(probe, (Str(4, '1') + oracle::periodic(block, depth)).substr(0, depth));
  EXPECT_TRUE(fixture_member(probe));
  // 1111 never occurs again after position 0.
  EXPECT_EQ(probe.find("1111", 1), Str::npos);
  EXPECT_TRUE(verify_not_ap(*out.hat, 3, 4));
  EXPECT_FALSE(verify_not_ap(*out.hat, 3, 1));
}

TEST(NotAp, HandBuiltHat) {
  const std::size_t depth = 12;
  const std::vector<std::size_t> c{3, 6, 10};
  auto hat_member = [c](const Str& s) {
    if (!s.empty() && s[0] != '0') return false;
    for (std::size_t k = 1; k <= c.size(); ++k) {
      if (s.size() >= c[k - 1] && s.substr(0, c[k - 1]).find(Str(k, '1')) == Str::npos) return false;
    }
    return true;
  };
  ClosedClass hat = ClosedClass::from_predicate(2, depth, "hat", [hat_member](const Word& w) { return hat_member(w.str()); });
  EXPECT_TRUE(verify_not_ap(hat, 3));
  for (const Str& x : oracle::tree_level(2, depth, hat_member)) {
    for (std::size_t b = 1; b <= 3; ++b) EXPECT_NE(x.find(Str(b, '1')), Str::npos) << x;
  }
  ClosedClass zeros = ClosedClass::explicit_nodes(2, depth, {Word::constant(0, depth)});
  EXPECT_FALSE(verify_not_ap(zeros, 1));
}

TEST(Dodging, DeeperHorizonKeepsOrbitCase) {
  ClosedClass shallow = ClosedClass::stagewise(ClosedClass::full(2, 12), {{3, Word("1")}}, 4);
  ClosedClass deep = ClosedClass::stagewise(ClosedClass::full(2, 12), {{3, Word("1")}, {6, Word("01")}}, 8);
  EXPECT_EQ(build_dodging_class(shallow).which, DodgeCase::kOrbit);
  EXPECT_EQ(build_dodging_class(deep).which, DodgeCase::kOrbit);
}

}  // namespace
}  // namespace cantordyn
