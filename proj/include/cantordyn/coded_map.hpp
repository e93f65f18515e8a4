#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cantordyn/word.hpp"

namespace cantordyn {

/// One failed invariant, with the word that exhibits it.
struct Violation {
  std::string condition;
  Word witness;
  std::string detail;
};

/// A word function f: k^{<=N} -> k^{<ω} encoding a continuous self-map of
/// k^ω (total, prefix-order preserving, output length unbounded).
///
/// The working depth N bounds every input. Maps are stored as rules and
/// evaluated on demand; `materialize` produces a dense table when one is
/// wanted. The optional length bound reports, for an input length L, a value
/// every image of a length-L word is guaranteed to reach; when absent it is
/// computed by exhaustive scan.
class CodedMap {
 public:
  using Rule = std::function<Word(const Word&)>;
  using LengthBound = std::function<std::size_t(std::size_t)>;

  CodedMap(int k, std::size_t depth, std::string name, Rule rule, LengthBound bound = {});

  int alphabet() const { return impl_->k; }
  std::size_t depth() const { return impl_->depth; }
  const std::string& name() const { return impl_->name; }

  /// Throws depth-exceeded when |w| > depth().
  Word operator()(const Word& w) const;
  /// f^n(w); f^0(w) = w.
  Word iterate(const Word& w, std::size_t n) const;
  /// [f^0(w), ..., f^steps(w)].
  std::vector<Word> orbit(const Word& w, std::size_t steps) const;

  /// Least output length over all inputs of length `input_length`.
  std::size_t guaranteed_length(std::size_t input_length) const;
  /// Least m <= depth such that every word of length m has an image of
  /// length >= l; nullopt when no such m exists at this depth.
  std::optional<std::size_t> try_modulus(std::size_t l) const;
  /// As try_modulus, throwing modulus-exhausted on failure.
  std::size_t modulus(std::size_t l) const;

  /// Same rule at a different working depth.
  CodedMap with_depth(std::size_t depth) const;
  CodedMap renamed(std::string name) const;

 private:
  struct Impl {
    int k;
    std::size_t depth;
    std::string name;
    Rule rule;
    LengthBound bound;
  };
  struct Cache;
  std::shared_ptr<const Impl> impl_;
  std::shared_ptr<Cache> cache_;
};

enum class MapKind { kLeftShift, kIdentity, kColumnShift };

/// The named map, already normalized. `columns` is used by kColumnShift:
/// position p belongs to column p mod columns and every column is shifted
/// left by one, which on words is dropping the first `columns` letters.
CodedMap builtin_map(MapKind kind, int k, std::size_t depth, std::size_t columns = 1);
CodedMap left_shift(int k, std::size_t depth);
CodedMap column_shift(int k, std::size_t depth, std::size_t columns);

/// Explicit table. Inputs missing from the table make evaluation throw, and
/// check_map reports them as totality failures.
CodedMap table_map(int k, std::size_t depth, std::vector<std::pair<Word, Word>> pairs,
                   std::string name = "table");

/// Dense table of every input of length <= depth.
CodedMap materialize(const CodedMap& map);

/// f̂(λ) = λ and f̂(σ) = f(σ)↾(|σ|-1): the shrinking map with the same limit.
CodedMap normalize(const CodedMap& map);

/// f^n as a coded map. Its length bound is f's bound applied n times, which is
/// the composed modulus; asking it for a modulus beyond depth throws
/// modulus-exhausted.
CodedMap iterate_map(const CodedMap& map, std::size_t n);

/// Exhaustive audit of the coded-map conditions over inputs of length <=
/// audit_depth: totality, letters within the alphabet, order preservation,
/// the shrink property, and a modulus witness for l = 1.
std::vector<Violation> check_map(const CodedMap& map, std::size_t audit_depth);

/// Memoized f^n(σ) for n <= horizon.
class IterateTable {
 public:
  IterateTable(CodedMap base, std::size_t horizon);

  const CodedMap& base() const { return base_; }
  std::size_t horizon() const { return horizon_; }
  const Word& at(const Word& w, std::size_t n);

 private:
  CodedMap base_;
  std::size_t horizon_;
  std::unordered_map<Word, std::vector<Word>, WordHash> entries_;
};

}  // namespace cantordyn
