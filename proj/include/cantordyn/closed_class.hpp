#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantordyn/word.hpp"

namespace cantordyn {

/// A downward-closed set of words (a tree) read at working depth N, optionally
/// presented as an effectively closed class: membership may depend on a stage
/// s <= stage_horizon, shrinking as s grows. Plain classes ignore the stage.
///
/// "Nonempty" always means "has a member of length N".
class ClosedClass {
 public:
  using Membership = std::function<bool(const Word&, std::size_t stage)>;
  using NodeFilter = std::function<bool(const Word&)>;

  ClosedClass(int k, std::size_t depth, std::string name, Membership membership,
              std::size_t stage_horizon = 0, bool staged = false);

  static ClosedClass full(int k, std::size_t depth);
  /// Words containing none of `forbidden` as a factor (a subshift of finite type).
  static ClosedClass forbidden_words(int k, std::size_t depth, std::vector<Word> forbidden);
  /// The downward closure of `nodes`.
  static ClosedClass explicit_nodes(int k, std::size_t depth, const std::vector<Word>& nodes);
  static ClosedClass from_predicate(int k, std::size_t depth, std::string name,
                                    std::function<bool(const Word&)> predicate);

  /// `base` minus every cylinder [node] once its removal stage has passed.
  static ClosedClass stagewise(const ClosedClass& base, std::vector<std::pair<std::size_t, Word>> removals,
                               std::size_t stage_horizon);

  int alphabet() const { return impl_->k; }
  std::size_t depth() const { return impl_->depth; }
  std::size_t stage_horizon() const { return impl_->stage_horizon; }
  bool staged() const { return impl_->staged; }
  const std::string& name() const { return impl_->name; }

  bool contains(const Word& w) const { return contains_at(w, impl_->stage_horizon); }
  bool contains_at(const Word& w, std::size_t stage) const;

  struct Probe {
    /// Lex-least member of the requested length, when one exists.
    std::optional<Word> witness;
    /// When there is no witness: the least length with no member.
    std::size_t extinction = 0;
    std::size_t nodes_visited = 0;
  };

  /// Depth-first search for the lex-least member of `length` extending
  /// `stem`, visiting only nodes accepted by `filter`.
  Probe probe(std::size_t length, const Word& stem = Word(), const NodeFilter& filter = {},
              std::optional<std::size_t> stage = std::nullopt) const;

  bool nonempty_at_depth() const { return probe(impl_->depth).witness.has_value(); }
  std::optional<Word> first_member(std::size_t length) const { return probe(length).witness; }
  /// Least s <= depth with no member of length s; nullopt when the class is
  /// nonempty at depth.
  std::optional<std::size_t> extinction_length() const;

  /// Visits members of exactly `length` in lex order until `visit` returns false.
  void for_each_member(std::size_t length, const std::function<bool(const Word&)>& visit,
                       const NodeFilter& filter = {}) const;
  std::vector<Word> members(std::size_t length,
                            std::size_t cap = std::numeric_limits<std::size_t>::max()) const;

  /// Same membership, different working depth.
  ClosedClass with_depth(std::size_t depth) const;
  ClosedClass renamed(std::string name) const;
  /// Intersection with an extra downward-closed predicate.
  ClosedClass restricted(std::string name, std::function<bool(const Word&)> predicate) const;

 private:
  struct Impl {
    int k;
    std::size_t depth;
    std::string name;
    Membership membership;
    std::size_t stage_horizon;
    bool staged;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace cantordyn
