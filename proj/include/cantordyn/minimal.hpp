#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cantordyn/system.hpp"

namespace cantordyn {

struct RemovalStep {
  Word sigma;
  /// The class after this step differs from the one before.
  bool removed = false;
  /// σ was not a member, so avoiding it changes nothing.
  bool vacuous = false;
  ClosedClass space;
};

struct RemovalChain {
  std::vector<RemovalStep> steps;
};

struct MinimalResult {
  DynSystem system;
  RemovalChain chain;
};

/// Greedy extraction: for each word σ in length-lex order up to
/// max_word_length, replace the class by the σ-avoiding class whenever that
/// class still has a depth-N member.
MinimalResult minimal_subsystem(const DynSystem& sys, std::size_t max_word_length = 4);

struct ApBound {
  /// Every depth-N member enters [τ] within `bound` steps.
  std::optional<std::size_t> bound;
  /// Set when the τ-avoiding class survives to depth N (the system is not minimal).
  std::optional<Word> counterexample;
};

/// Length of the τ-avoiding class's extinction, or a surviving member.
ApBound ap_bound_from_minimal(const DynSystem& sys, const Word& tau);

/// t = nullopt stands for "never halts".
struct HaltingBit {
  std::size_t n = 0;
  std::optional<std::size_t> t;
  bool operator==(const HaltingBit&) const = default;
};

struct HaltingSim {
  std::vector<HaltingBit> bits;
  std::size_t stage_horizon = 0;
  bool operator==(const HaltingSim&) const = default;
};

/// Shifts of (0^i 1^i)^ω truncated to `depth`: the 2i generators of S_i.
std::vector<Word> periodic_orbit_members(std::size_t i, std::size_t depth);

/// Single-column coder for bit `n`: before stage t the class is the set of
/// words whose stage-length prefix has at most one letter change; from stage t
/// on it is S_t. With t unset the first form holds at every stage.
ClosedClass build_bit_coder(std::size_t n, const HaltingSim& sim, std::size_t depth);

struct ProductSystem {
  DynSystem system;
  std::size_t columns = 0;
};

/// Position p of a product word belongs to column p mod m. Parts must share
/// alphabet and depth; the product depth is m times the part depth.
ProductSystem product_system(const std::vector<ClosedClass>& parts);

/// The coder columns for every bit of `sim` as one product system.
ProductSystem halting_product(const HaltingSim& sim, std::size_t column_depth);

/// Whether some depth-N member has column n extending "01". Throws
/// undecided-at-depth when the class's stage horizon is shorter than a column.
bool decode_bit(const DynSystem& minimal_sys, std::size_t n, std::size_t columns);

}  // namespace cantordyn
