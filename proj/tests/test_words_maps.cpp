#include <gtest/gtest.h>

#include <random>

#include "cantordyn/coded_map.hpp"
#include "cantordyn/error.hpp"
#include "oracle.hpp"

namespace cantordyn {
namespace {

std::vector<std::pair<Word, Word>> to_pairs(const std::map<std::string, std::string>& f) {
  std::vector<std::pair<Word, Word>> out;
  for (const auto& [in, img] : f) out.emplace_back(Word(in), Word(img));
  return out;
}

bool has_condition(const std::vector<Violation>& vs, const std::string& condition) {
  for (const Violation& v : vs) {
    if (v.condition == condition) return true;
  }
  return false;
}

TEST(Word, PrefixOrderAndSlicing) {
  Word w("0110");
  EXPECT_EQ(w.prefix(2), Word("01"));
  EXPECT_EQ(w.drop(3), Word("0"));
  EXPECT_TRUE(w.extends(Word("011")));
  EXPECT_TRUE(w.extends(Word()));
  EXPECT_FALSE(Word("01").extends(w));
  EXPECT_TRUE(w.contains_factor(Word("11")));
  EXPECT_FALSE(w.contains_factor(Word("00")));
  EXPECT_TRUE(length_lex_less(Word("1"), Word("00")));
  EXPECT_EQ(Word::periodic(Word("01"), 5), Word("01010"));
}

TEST(Word, LexIndexMatchesEnumeration) {
  for (int k : {2, 3}) {
    std::vector<Word> words = all_words(k, 4);
    const auto expected = oracle::strings_of_length(k, 4);
    ASSERT_EQ(words.size(), expected.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      EXPECT_EQ(words[i].str(), expected[i]);
      EXPECT_EQ(lex_index(words[i], k), i);
      EXPECT_EQ(word_at_index(i, k, 4), words[i]);
    }
  }
}

TEST(Word, ShiftOrbitListsDistinctShifts) {
  EXPECT_EQ(shift_orbit(Word("01"), 4), (std::vector<Word>{Word("0101"), Word("1010")}));
  EXPECT_EQ(shift_orbit(Word("0"), 3), (std::vector<Word>{Word("000")}));
  EXPECT_EQ(shift_orbit(Word("0011"), 6).size(), 4u);
}

TEST(Word, PowerSaturates) {
  EXPECT_EQ(power(2, 10), 1024u);
  EXPECT_EQ(power(2, 64), std::numeric_limits<std::size_t>::max());
}

TEST(Builtins, ShiftIdentityColumns) {
  CodedMap shift = builtin_map(MapKind::kLeftShift, 2, 8);
  EXPECT_EQ(shift(Word("101")), Word("01"));
  EXPECT_EQ(shift.iterate(Word("0110"), 2), Word("10"));
  EXPECT_EQ(shift.iterate(Word("0110"), 0), Word("0110"));
  EXPECT_EQ(shift.iterate(Word("0110"), 5), Word());

  CodedMap id = builtin_map(MapKind::kIdentity, 2, 8);
  EXPECT_EQ(id(Word("101")), Word("10"));
  EXPECT_EQ(iterate_map(id, 2)(Word("10110")), Word("101"));

  CodedMap columns = builtin_map(MapKind::kColumnShift, 3, 8, 2);
  EXPECT_EQ(columns(Word("0120")), Word("20"));
  EXPECT_EQ(columns(Word("0")), Word());
}

TEST(Builtins, ShiftModulus) {
  CodedMap shift = left_shift(2, 8);
  EXPECT_EQ(shift.modulus(3), 4u);
  EXPECT_EQ(iterate_map(shift, 3)(Word("01101100")), Word("01100"));
  EXPECT_THROW(iterate_map(shift, 3).modulus(7), CantorError);
  EXPECT_FALSE(shift.try_modulus(8).has_value());
}

TEST(Builtins, DepthIsEnforced) {
  CodedMap shift = left_shift(2, 4);
  EXPECT_THROW(shift(Word("00000")), CantorError);
}

TEST(Normalize, TruncatesToShrink) {
  CodedMap grow = table_map(2, 2, {{Word(), Word()}, {Word("0"), Word("01")}, {Word("1"), Word("1")},
                                   {Word("00"), Word("011")}, {Word("01"), Word("0110")},
                                   {Word("10"), Word("10")}, {Word("11"), Word("11")}});
  CodedMap hat = normalize(grow);
  EXPECT_EQ(hat(Word("01")), Word("0"));
  EXPECT_EQ(hat(Word("1")), Word());
  EXPECT_EQ(hat(Word()), Word());
  for (const Word& w : words_up_to(2, 2)) {
    EXPECT_TRUE(hat(w).is_prefix_of(grow(w)));
    if (!w.empty()) {
      EXPECT_LT(hat(w).size(), w.size());
    }
  }
}

TEST(Normalize, ShiftUnchanged) {
  CodedMap shift = left_shift(2, 6);
  CodedMap hat = normalize(shift);
  for (const Word& w : words_up_to(2, 6)) EXPECT_EQ(hat(w), shift(w));
}

TEST(CheckMap, ReportsEachBrokenCondition) {
  // Order preservation fails: "0" ↦ "1" but "00" ↦ "0".
  CodedMap broken = table_map(2, 2, {{Word(), Word()}, {Word("0"), Word("1")}, {Word("1"), Word()},
                                     {Word("00"), Word("0")}, {Word("01"), Word("1")},
                                     {Word("10"), Word("1")}, {Word("11"), Word("1")}});
  std::vector<Violation> v = check_map(broken, 2);
  EXPECT_TRUE(has_condition(v, "order-preservation"));
  EXPECT_TRUE(has_condition(v, "shrink"));

  CodedMap partial = table_map(2, 1, {{Word(), Word()}, {Word("0"), Word()}});
  EXPECT_TRUE(has_condition(check_map(partial, 1), "totality"));

  CodedMap wide = table_map(2, 1, {{Word(), Word()}, {Word("0"), Word("2")}, {Word("1"), Word()}});
  EXPECT_TRUE(has_condition(check_map(wide, 1), "alphabet"));

  EXPECT_TRUE(check_map(left_shift(3, 5), 5).empty());
}

TEST(CheckMap, ConstantMapHasNoModulus) {
  CodedMap dead(2, 4, "dead", [](const Word&) { return Word(); });
  EXPECT_TRUE(has_condition(check_map(dead, 4), "modulus"));
}

TEST(IterateTable, MatchesRepeatedApplication) {
  CodedMap shift = left_shift(2, 6);
  IterateTable table(shift, 6);
  for (const Word& w : all_words(2, 6)) {
    for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(table.at(w, n), shift.iterate(w, n));
  }
}

// Property: random monotone tables obey the iterate laws the oracle computes.
TEST(IterateProperty, CoherenceAndMonotonicityOnRandomMaps) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t depth = 6;
    auto f = oracle::random_monotone_map(rng, 2, depth);
    CodedMap map = normalize(table_map(2, depth, to_pairs(f)));
    for (const Violation& v : check_map(map, depth)) EXPECT_EQ(v.condition, "modulus");
    for (const auto& [in, img] : f) {
      const Word w(in);
      EXPECT_EQ(map(w).str(), img);
      for (std::size_t a = 0; a <= 3; ++a) {
        for (std::size_t b = 0; b <= 3; ++b) {
          EXPECT_EQ(map.iterate(w, a + b), map.iterate(map.iterate(w, a), b));
        }
        EXPECT_EQ(map.iterate(w, a).str(), oracle::iterate(f, in, a));
      }
      if (!in.empty()) {
        EXPECT_TRUE(map(w.prefix(in.size() - 1)).is_prefix_of(map(w)));
      }
    }
  }
}

}  // namespace
}  // namespace cantordyn
