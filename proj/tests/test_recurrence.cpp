#include <gtest/gtest.h>

#include <set>

#include "cantordyn/error.hpp"
#include "cantordyn/recurrence.hpp"
#include "oracle.hpp"

namespace cantordyn {
namespace {

using oracle::Str;
using oracle::TreePred;
using oracle::extended;
using oracle::gadget_oracle;
using oracle::recurrent_oracle;

struct TreeFixture {
  std::string name;
  std::size_t depth;
  TreePred member;
};

ClosedClass to_class(const TreeFixture& t) {
  return ClosedClass::from_predicate(2, t.depth, t.name, [m = t.member](const Word& w) { return m(w.str()); });
}

std::vector<TreeFixture> fixtures() {
  return {
      {"zeros", 6, [](const Str& s) { return s.find('1') == Str::npos; }},
      {"full", 5, [](const Str&) { return true; }},
      {"stem", 6, [](const Str& s) { return s.size() <= 3 && s.find('1') == Str::npos; }},
      {"mixed", 6, [](const Str& s) { return s.find("11") == Str::npos && (s.size() < 2 || s[1] == '0'); }},
  };
}

TEST(Gadget, CaseTableExamples) {
  ClosedClass zeros = ClosedClass::from_predicate(2, 6, "zeros", [](const Word& w) { return !w.contains_factor(Word("1")); });
  TernaryGadget g = build_ternary_gadget(zeros, 6);
  EXPECT_EQ(g.system.map(Word("20")), Word("0"));
  EXPECT_EQ(g.system.map(Word("010")), Word("02"));
  EXPECT_EQ(g.system.map(Word()), Word());

  TernaryGadget full = build_ternary_gadget(ClosedClass::full(2, 5), 5);
  for (const Word& w : all_words(2, 5)) EXPECT_EQ(full.system.map(w), w.prefix(4));
}

TEST(Gadget, MapMatchesCaseTableOracle) {
  for (const TreeFixture& t : fixtures()) {
    TernaryGadget g = build_ternary_gadget(to_class(t), 7);
    TreePred in_tree = extended(t.member, t.depth);
    for (const Str& s : oracle::strings_up_to(3, 7)) {
      ASSERT_EQ(g.system.map(Word(s)).str(), gadget_oracle(in_tree, s)) << t.name << " " << s;
    }
  }
}

TEST(Gadget, RecurrentSetEqualsPaths) {
  for (const TreeFixture& t : fixtures()) {
    const std::size_t n = t.depth;
    GadgetComparison cmp = compare_gadget(to_class(t), n);
    std::set<Str> expected = recurrent_oracle(extended(t.member, t.depth), n);
    std::set<Str> got;
    for (const Word& w : cmp.recurrent) got.insert(w.str());
    EXPECT_EQ(got, expected) << t.name;
    std::set<Str> paths;
    for (const Str& s : oracle::tree_level(2, n, t.member)) paths.insert(s);
    EXPECT_EQ(expected, paths) << t.name;
    EXPECT_TRUE(cmp.equal) << t.name;
  }
}

TEST(Gadget, RejectsMalformedTrees) {
  ClosedClass gap = ClosedClass::from_predicate(2, 4, "gap", [](const Word& w) { return w.size() != 2; });
  EXPECT_THROW(build_ternary_gadget(gap, 4), CantorError);
  ClosedClass ternary = ClosedClass::full(3, 4);
  EXPECT_THROW(build_ternary_gadget(ternary, 4), CantorError);
  EXPECT_THROW(build_ternary_gadget(ClosedClass::full(2, 6), 4), CantorError);
}

// Cover stages computed straight from their definitions under the shift.
struct StageValue {
  std::size_t s;
  std::set<Str> u;
};

std::vector<StageValue> stages_oracle(const TreePred& in_c, std::size_t depth, std::size_t count) {
  std::vector<StageValue> out;
  std::set<Str> previous{""};
  const auto words = oracle::strings_up_to(2, depth);
  for (std::size_t i = 0; i < count; ++i) {
    auto in_u = [&](const Str& rho, std::size_t s) {
      if (!in_c(rho) || rho.size() < i) return false;
      bool extends = false;
      for (const Str& p : previous) extends = extends || (rho.size() > p.size() && oracle::starts_with(rho, p));
      if (!extends) return false;
      for (std::size_t n = i; n <= s; ++n) {
        if (oracle::starts_with(oracle::shift(rho, n), rho.substr(0, i))) return true;
      }
      return false;
    };
    std::optional<std::size_t> bound;
    for (std::size_t s = 0; s <= depth && !bound; ++s) {
      bool covers = true;
      for (const Str& sigma : oracle::tree_level(2, s, in_c)) {
        bool reached = false;
        for (std::size_t n = 0; n <= s && !reached; ++n) {
          const Str image = oracle::shift(sigma, n);
          for (std::size_t len = 0; len <= image.size() && !reached; ++len) reached = in_u(image.substr(0, len), s);
        }
        if (!reached) {
          covers = false;
          break;
        }
      }
      if (covers) bound = s;
    }
    if (!bound) break;
    std::set<Str> minimal;
    for (const Str& rho : words) {
      if (!in_u(rho, *bound)) continue;
      bool has_smaller = false;
      for (std::size_t len = 0; len < rho.size() && !has_smaller; ++len) has_smaller = in_u(rho.substr(0, len), *bound);
      if (!has_smaller) minimal.insert(rho);
    }
    out.push_back({*bound, minimal});
    previous = minimal;
  }
  return out;
}

void expect_stages_match(const DynSystem& sys, const TreePred& in_c, std::size_t c_max,
                         const std::vector<std::size_t>& frozen_s) {
  RecurrentPointResult r = construct_recurrent_point(sys, c_max);
  std::vector<StageValue> expected = stages_oracle(in_c, sys.depth(), c_max + 1);
  ASSERT_EQ(r.stages.size(), expected.size());
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    EXPECT_EQ(r.stages[i].s, expected[i].s) << i;
    EXPECT_EQ(r.stages[i].s, frozen_s[i]) << i;
    std::set<Str> u;
    for (const Word& w : r.stages[i].u) u.insert(w.str());
    EXPECT_EQ(u, expected[i].u) << i;
    EXPECT_TRUE(audit_cover_stage(sys, r.stages[i], i > 0 ? &r.stages[i - 1] : nullptr).empty()) << i;
    bool inside = false;
    for (const Word& w : r.stages[i].u) inside = inside || r.point.prefix.extends(w);
    EXPECT_TRUE(inside) << i;
  }
  EXPECT_TRUE(verify_recurrence(r.point, r.cert));
  EXPECT_EQ(r.cert.entries.size(), c_max);
}

TEST(RecurrentPoint, FullShiftStagesMatchOracle) {
  DynSystem sys{ClosedClass::full(2, 12), left_shift(2, 12)};
  expect_stages_match(sys, [](const Str&) { return true; }, 2, {1, 3, 10});
}

TEST(RecurrentPoint, GoldenMeanStagesMatchOracle) {
  DynSystem sys{ClosedClass::forbidden_words(2, 12, {Word("11")}), left_shift(2, 12)};
  expect_stages_match(sys, [](const Str& s) { return s.find("11") == Str::npos; }, 2, {1, 3, 7});
}

TEST(RecurrentPoint, IdentityAndFixedPoints) {
  DynSystem id{ClosedClass::full(2, 10), builtin_map(MapKind::kIdentity, 2, 10)};
  RecurrentPointResult r = construct_recurrent_point(id, 3);
  EXPECT_TRUE(verify_recurrence(r.point, r.cert));

  DynSystem two{ClosedClass::explicit_nodes(2, 10, {Word::constant(0, 10), Word::constant(1, 10)}), left_shift(2, 10)};
  RecurrentPointResult p = construct_recurrent_point(two, 4);
  EXPECT_TRUE(p.point.prefix == Word::constant(0, 10) || p.point.prefix == Word::constant(1, 10));
  EXPECT_TRUE(verify_recurrence(p.point, p.cert));
}

TEST(RecurrentPoint, ErrorsNameTheProblem) {
  DynSystem empty{ClosedClass::from_predicate(2, 6, "short", [](const Word& w) { return w.size() < 3; }),
                  left_shift(2, 6)};
  try {
    construct_recurrent_point(empty, 2);
    FAIL() << "expected empty-class";
  } catch (const CantorError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyClass);
  }
  DynSystem full{ClosedClass::full(2, 8), left_shift(2, 8)};
  try {
    construct_recurrent_point(full, 3);
    FAIL() << "expected horizon-exhausted";
  } catch (const CantorError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHorizonExhausted);
  }
}

TEST(CoverStageAudit, CatchesTamperedStages) {
  DynSystem sys{ClosedClass::full(2, 10), left_shift(2, 10)};
  RecurrentPointResult r = construct_recurrent_point(sys, 1);
  CoverStage tampered = r.stages[1];
  tampered.s = 1;
  EXPECT_FALSE(audit_cover_stage(sys, tampered, &r.stages[0]).empty());
  CoverStage orphan = r.stages[1];
  orphan.u.push_back(Word("1"));
  EXPECT_FALSE(audit_cover_stage(sys, orphan, &r.stages[0]).empty());
}

}  // namespace
}  // namespace cantordyn
