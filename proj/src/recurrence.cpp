#include "cantordyn/recurrence.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "cantordyn/error.hpp"
#include "cantordyn/parallel.hpp"

namespace cantordyn {
namespace {

using WordSet = std::unordered_set<Word, WordHash>;

// Letter-2-free words whose truncation to the tree's depth lies in the tree.
bool in_extended_tree(const ClosedClass& tree, const Word& w) {
  if (!w.empty() && w.max_letter() > 1) return false;
  return tree.contains(w.prefix(tree.depth()));
}

Word gadget_rule(const ClosedClass& tree, const Word& sigma) {
  if (sigma.empty()) return Word();
  const std::size_t n = sigma.size() - 1;
  if (in_extended_tree(tree, sigma)) return sigma.prefix(n);
  std::size_t len = 1;
  while (in_extended_tree(tree, sigma.prefix(len))) ++len;
  Word pi = sigma.prefix(len);
  if (pi == Word("2")) return Word::constant(0, n);
  Word stem = pi;
  if (stem.back() == 2) stem = stem.prefix(stem.size() - 1);
  // stem = ρ0 or ρ1.
  Word rho = stem.prefix(stem.size() - 1);
  Word out = rho.with(stem.back() == 0 ? 1 : 2);
  while (out.size() < n) out = out.with(0);
  return out.prefix(n);
}

std::optional<std::size_t> least_return(const CodedMap& f, const Word& tau, std::size_t i, std::size_t cap) {
  const Word target = tau.prefix(i);
  Word image = f.iterate(tau, i);
  for (std::size_t n = i; n <= cap; ++n) {
    if (image.extends(target)) return n;
    if (image.size() < target.size()) return std::nullopt;
    image = f(image);
  }
  return std::nullopt;
}

bool has_proper_prefix_in(const Word& w, const WordSet& set) {
  for (std::size_t len = 0; len < w.size(); ++len) {
    if (set.count(w.prefix(len))) return true;
  }
  return false;
}

bool has_prefix_in(const Word& w, const WordSet& set) {
  for (std::size_t len = 0; len <= w.size(); ++len) {
    if (set.count(w.prefix(len))) return true;
  }
  return false;
}

class StageBuilder {
 public:
  StageBuilder(const DynSystem& sys, std::size_t i, const WordSet& previous)
      : sys_(sys), i_(i), previous_(previous) {}

  bool in_u(const Word& rho, std::size_t s) {
    if (!has_proper_prefix_in(rho, previous_) || !sys_.space.contains(rho)) return false;
    auto it = returns_.find(rho);
    if (it == returns_.end()) it = returns_.emplace(rho, least_return(sys_.map, rho, i_, sys_.depth())).first;
    return it->second && *it->second <= s;
  }

  // Some iterate f^n(σ), n <= s, has a prefix in U[s].
  bool reaches_u(const Word& sigma, std::size_t s) {
    Word image = sigma;
    for (std::size_t n = 0; n <= s; ++n) {
      for (std::size_t len = 1; len <= image.size(); ++len) {
        if (in_u(image.prefix(len), s)) return true;
      }
      if (image.empty()) break;
      image = sys_.map(image);
    }
    return false;
  }

  bool covers(std::size_t s) {
    bool all = true;
    sys_.space.for_each_member(s, [&](const Word& sigma) {
      all = reaches_u(sigma, s);
      return all;
    });
    return all;
  }

  // Minimal members of C satisfying `pick`, up to length max_len, searching
  // only below `prune`-compatible nodes.
  template <typename Pick, typename Prune>
  std::vector<Word> minimal_members(std::size_t max_len, Pick pick, Prune compatible) {
    std::vector<Word> out;
    std::vector<Word> frontier{Word()};
    while (!frontier.empty()) {
      Word w = std::move(frontier.back());
      frontier.pop_back();
      if (!sys_.space.contains(w) || !compatible(w)) continue;
      if (pick(w)) {
        out.push_back(w);
        continue;
      }
      if (w.size() >= max_len) continue;
      for (int a = sys_.alphabet() - 1; a >= 0; --a) frontier.push_back(w.with(a));
    }
    std::sort(out.begin(), out.end(), length_lex_less);
    return out;
  }

  bool compatible_with_previous(const Word& w) {
    if (has_prefix_in(w, previous_)) return true;
    return std::any_of(previous_.begin(), previous_.end(), [&](const Word& p) { return w.is_prefix_of(p); });
  }

  CoverStage build() {
    for (std::size_t s = 0; s <= sys_.depth(); ++s) {
      if (!covers(s)) continue;
      CoverStage stage;
      stage.i = i_;
      stage.s = s;
      // U[s] is upward closed with no length bound of its own; its minimal
      // elements are searched up to the working depth.
      stage.u = minimal_members(
          sys_.depth(), [&](const Word& w) { return in_u(w, s); },
          [&](const Word& w) { return compatible_with_previous(w); });
      stage.v = minimal_members(
          s, [&](const Word& w) { return reaches_u(w, s); }, [](const Word&) { return true; });
      return stage;
    }
    throw CantorError(ErrorCode::kHorizonExhausted,
                      "no cover stage s <= " + std::to_string(sys_.depth()) + " for stage i=" + std::to_string(i_));
  }

 private:
  const DynSystem& sys_;
  std::size_t i_;
  const WordSet& previous_;
  std::unordered_map<Word, std::optional<std::size_t>, WordHash> returns_;
};

}  // namespace

TernaryGadget build_ternary_gadget(const ClosedClass& tree, std::size_t depth) {
  if (tree.alphabet() != 2) {
    throw CantorError(ErrorCode::kMalformedTree, "source tree must be binary");
  }
  if (depth < tree.depth()) {
    throw CantorError(ErrorCode::kInvalidArgument, "gadget depth below tree depth");
  }
  const std::size_t audit = std::min<std::size_t>(tree.depth(), 16);
  for (const Word& w : words_up_to(2, audit)) {
    if (!w.empty() && tree.contains(w) && !tree.contains(w.prefix(w.size() - 1))) {
      throw CantorError(ErrorCode::kMalformedTree, "node " + w.display() + " has no parent in the tree");
    }
  }
  if (!tree.contains(Word())) throw CantorError(ErrorCode::kMalformedTree, "tree has no root");
  ClosedClass source = tree;
  CodedMap map(
      3, depth, "ternary-gadget", [source](const Word& w) { return gadget_rule(source, w); },
      [](std::size_t len) { return len == 0 ? 0 : len - 1; });
  return TernaryGadget{tree, DynSystem{ClosedClass::full(3, depth), map}};
}

GadgetComparison compare_gadget(const ClosedClass& tree, std::size_t n, std::size_t margin) {
  TernaryGadget gadget = build_ternary_gadget(tree, std::max(tree.depth(), n + margin));
  const CodedMap& f = gadget.system.map;
  const std::vector<Word> words = all_words(3, n);
  const std::vector<Word> tails = words_up_to(3, margin);
  std::vector<char> recurrent(words.size(), 0);
  parallel_first_failure(words.size(), [&](std::size_t idx) {
    const Word& w = words[idx];
    for (const Word& tail : tails) {
      if (tail.size() != margin) continue;
      Word image = w + tail;
      for (std::size_t k = 1; k <= margin; ++k) {
        image = f(image);
        if (image.extends(w)) {
          recurrent[idx] = 1;
          return true;
        }
      }
    }
    return true;
  });
  GadgetComparison out;
  for (std::size_t idx = 0; idx < words.size(); ++idx) {
    if (recurrent[idx]) out.recurrent.push_back(words[idx]);
    if (in_extended_tree(tree, words[idx])) out.paths.push_back(words[idx]);
  }
  out.equal = out.recurrent == out.paths;
  return out;
}

bool gadget_recurrent_equals_paths(const ClosedClass& tree, std::size_t n) {
  return compare_gadget(tree, n).equal;
}

RecurrentPointResult construct_recurrent_point(const DynSystem& sys, std::size_t c_max) {
  if (!sys.space.nonempty_at_depth()) {
    throw CantorError(ErrorCode::kEmptyClass, sys.space.name() + " has no member of length " +
                                                  std::to_string(sys.depth()));
  }
  std::vector<CoverStage> stages;
  WordSet previous{Word()};
  for (std::size_t i = 0; i <= c_max; ++i) {
    StageBuilder builder(sys, i, previous);
    stages.push_back(builder.build());
    previous = WordSet(stages.back().u.begin(), stages.back().u.end());
  }
  WordSet stems;
  for (const Word& u : stages.back().u) {
    for (std::size_t len = 0; len <= u.size(); ++len) stems.insert(u.prefix(len));
  }
  ClosedClass::Probe probe = sys.space.probe(sys.depth(), Word(), [&](const Word& w) {
    return stems.count(w) > 0 || has_prefix_in(w, previous);
  });
  if (!probe.witness) {
    throw CantorError(ErrorCode::kHorizonExhausted,
                      "no depth-" + std::to_string(sys.depth()) + " member inside the last stage");
  }
  RecurrentPointResult out{make_point(sys, *probe.witness), {}, std::move(stages)};
  for (std::size_t c = 1; c <= c_max; ++c) {
    const CoverStage& stage = out.stages[c];
    for (const Word& tau : stage.u) {
      if (!tau.is_prefix_of(out.point.prefix)) continue;
      std::optional<std::size_t> n = least_return(sys.map, tau, c, stage.s);
      if (n) out.cert.entries.push_back({c, *n, tau.size()});
      break;
    }
  }
  return out;
}

std::vector<std::string> audit_cover_stage(const DynSystem& sys, const CoverStage& stage,
                                           const CoverStage* previous) {
  std::vector<std::string> failures;
  const CodedMap& f = sys.map;
  for (const Word& tau : stage.u) {
    std::optional<std::size_t> n = least_return(f, tau, stage.i, stage.s);
    if (!n) failures.push_back("u element " + tau.display() + " has no return within s");
    if (previous) {
      bool nested = std::any_of(previous->u.begin(), previous->u.end(),
                                [&](const Word& p) { return p.is_prefix_of(tau) && p.size() < tau.size(); });
      if (!nested) failures.push_back("u element " + tau.display() + " extends no previous u element");
    } else if (tau.empty()) {
      failures.push_back("u contains the empty word");
    }
  }
  const WordSet u(stage.u.begin(), stage.u.end());
  for (const Word& sigma : stage.v) {
    bool reached = false;
    Word image = sigma;
    for (std::size_t n = 0; n <= stage.s && !reached; ++n) {
      reached = has_prefix_in(image, u);
      if (image.empty()) break;
      image = f(image);
    }
    if (!reached) failures.push_back("v element " + sigma.display() + " never reaches u within s");
  }
  const WordSet v(stage.v.begin(), stage.v.end());
  sys.space.for_each_member(stage.s, [&](const Word& w) {
    if (!has_prefix_in(w, v)) {
      failures.push_back("member " + w.display() + " of length s extends no v element");
      return false;
    }
    return true;
  });
  return failures;
}

}  // namespace cantordyn
