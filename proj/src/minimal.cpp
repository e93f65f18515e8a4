#include "cantordyn/minimal.hpp"

#include <algorithm>
#include <memory>
#include <unordered_set>

#include "cantordyn/error.hpp"

namespace cantordyn {
namespace {

bool at_most_one_change(const Word& w) {
  int changes = 0;
  for (std::size_t p = 1; p < w.size(); ++p) changes += w[p] != w[p - 1];
  return changes <= 1;
}

Word column_of(const Word& w, std::size_t j, std::size_t m) {
  std::string letters;
  for (std::size_t p = j; p < w.size(); p += m) letters.push_back(static_cast<char>('0' + w[p]));
  return Word(std::move(letters));
}

}  // namespace

MinimalResult minimal_subsystem(const DynSystem& sys, std::size_t max_word_length) {
  MinimalResult out{sys, {}};
  ClosedClass current = sys.space;
  for (const Word& sigma : words_up_to(sys.alphabet(), max_word_length)) {
    RemovalStep step{sigma, false, false, current};
    if (!current.contains(sigma)) {
      step.vacuous = true;
    } else {
      ClosedClass candidate = avoid_words(current, sys.map, {sigma});
      if (candidate.nonempty_at_depth()) {
        current = candidate.renamed(sys.space.name() + "-minimal");
        step.removed = true;
        step.space = current;
      }
    }
    out.chain.steps.push_back(std::move(step));
  }
  out.system = DynSystem{current, sys.map};
  return out;
}

ApBound ap_bound_from_minimal(const DynSystem& sys, const Word& tau) {
  ClosedClass e = avoid_words(sys.space, sys.map, {tau});
  ClosedClass::Probe probe = e.probe(sys.depth());
  ApBound out;
  if (probe.witness) {
    out.counterexample = probe.witness;
  } else {
    out.bound = probe.extinction;
  }
  return out;
}

std::vector<Word> periodic_orbit_members(std::size_t i, std::size_t depth) {
  if (i == 0) throw CantorError(ErrorCode::kInvalidArgument, "S_i needs i >= 1");
  return shift_orbit(Word::constant(0, i) + Word::constant(1, i), depth);
}

ClosedClass build_bit_coder(std::size_t n, const HaltingSim& sim, std::size_t depth) {
  auto it = std::find_if(sim.bits.begin(), sim.bits.end(), [&](const HaltingBit& b) { return b.n == n; });
  if (it == sim.bits.end()) {
    throw CantorError(ErrorCode::kInvalidArgument, "bit " + std::to_string(n) + " is not in the simulation");
  }
  const std::optional<std::size_t> t = it->t;
  if (t && *t == 0) throw CantorError(ErrorCode::kInvalidArgument, "entry stages start at 1");
  std::shared_ptr<const std::unordered_set<Word, WordHash>> orbit_prefixes;
  if (t) {
    auto set = std::make_shared<std::unordered_set<Word, WordHash>>();
    for (const Word& w : periodic_orbit_members(*t, depth)) {
      for (std::size_t len = 0; len <= w.size(); ++len) set->insert(w.prefix(len));
    }
    orbit_prefixes = set;
  }
  std::string name = "coder(" + std::to_string(n) + ",t=" + (t ? std::to_string(*t) : std::string("inf")) + ")";
  return ClosedClass(
      2, depth, std::move(name),
      [t, orbit_prefixes](const Word& w, std::size_t stage) {
        if (t && stage >= *t) return orbit_prefixes->count(w) > 0;
        return at_most_one_change(w.prefix(stage));
      },
      sim.stage_horizon, true);
}

ProductSystem product_system(const std::vector<ClosedClass>& parts) {
  if (parts.empty()) throw CantorError(ErrorCode::kColumnMismatch, "product of no columns");
  const int k = parts.front().alphabet();
  const std::size_t depth = parts.front().depth();
  std::size_t horizon = 0;
  bool staged = false;
  for (const ClosedClass& part : parts) {
    if (part.alphabet() != k || part.depth() != depth) {
      throw CantorError(ErrorCode::kColumnMismatch, "column " + part.name() + " differs in alphabet or depth");
    }
    horizon = std::max(horizon, part.stage_horizon());
    staged = staged || part.staged();
  }
  const std::size_t m = parts.size();
  ClosedClass space(
      k, depth * m, "product(" + std::to_string(m) + ")",
      [parts, m](const Word& w, std::size_t stage) {
        for (std::size_t j = 0; j < m && j <= w.size(); ++j) {
          if (!parts[j].contains_at(column_of(w, j, m), stage)) return false;
        }
        return true;
      },
      horizon, staged);
  return ProductSystem{DynSystem{space, column_shift(k, depth * m, m)}, m};
}

ProductSystem halting_product(const HaltingSim& sim, std::size_t column_depth) {
  std::vector<ClosedClass> parts;
  for (const HaltingBit& bit : sim.bits) parts.push_back(build_bit_coder(bit.n, sim, column_depth));
  return product_system(parts);
}

bool decode_bit(const DynSystem& minimal_sys, std::size_t n, std::size_t columns) {
  if (columns == 0 || n >= columns) {
    throw CantorError(ErrorCode::kColumnMismatch,
                      "column " + std::to_string(n) + " outside a " + std::to_string(columns) + "-column product");
  }
  const ClosedClass& space = minimal_sys.space;
  if (space.depth() < n + columns + 1) {
    throw CantorError(ErrorCode::kDepthInsufficient, "depth too small to read two letters of a column");
  }
  if (space.staged() && space.stage_horizon() < space.depth() / columns) {
    throw CantorError(ErrorCode::kUndecidedAtDepth, "stage horizon " + std::to_string(space.stage_horizon()) +
                                                        " is shorter than a column of length " +
                                                        std::to_string(space.depth() / columns));
  }
  ClosedClass::Probe probe = space.probe(space.depth(), Word(), [&](const Word& w) {
    if (w.size() > n && w[n] != 0) return false;
    if (w.size() > n + columns && w[n + columns] != 1) return false;
    return true;
  });
  return probe.witness.has_value();
}

}  // namespace cantordyn
