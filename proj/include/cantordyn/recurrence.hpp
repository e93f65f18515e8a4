#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cantordyn/system.hpp"

namespace cantordyn {

/// A binary tree T read inside the ternary alphabet, and the system on 3^ω
/// whose recurrent points are exactly the paths through T.
struct TernaryGadget {
  ClosedClass source_tree;
  DynSystem system;
};

/// Past T's own depth the tree is extended cylindrically: a binary word is
/// in T iff its prefix of length T.depth() is. Throws malformed-tree if T is
/// not downward closed or mentions the letter 2.
TernaryGadget build_ternary_gadget(const ClosedClass& tree, std::size_t depth);

struct GadgetComparison {
  std::vector<Word> recurrent;
  std::vector<Word> paths;
  bool equal = false;
};

/// Brute force at depth n: a depth-n ternary word is recurrent when some
/// extension of length n + margin is carried by f^k, k >= 1, onto an
/// extension of it. Compares that set with the depth-n words of T.
GadgetComparison compare_gadget(const ClosedClass& tree, std::size_t n, std::size_t margin = 2);
bool gadget_recurrent_equals_paths(const ClosedClass& tree, std::size_t n);

/// One stage of the cover construction. Every τ in `u` returns to τ↾i within
/// s steps (after at least i steps); every σ in `v` is carried into [u]
/// within s steps; and every length-s member of the space extends some
/// element of `v`. Both sets are antichains of minimal elements.
struct CoverStage {
  std::size_t i = 0;
  std::vector<Word> u;
  std::vector<Word> v;
  std::size_t s = 0;
};

struct RecurrentPointResult {
  PointApprox point;
  RecCert cert;
  std::vector<CoverStage> stages;
};

/// Builds stages i = 0..c_max and returns the lex-least depth-N member
/// inside every [u], with a recurrence certificate for c = 1..c_max.
/// Throws empty-class or horizon-exhausted (naming the stage).
RecurrentPointResult construct_recurrent_point(const DynSystem& sys, std::size_t c_max = 6);

/// Re-checks a stage's three invariants and, when `previous` is given, that
/// every element of u strictly extends an element of previous->u. Returns
/// the failures found.
std::vector<std::string> audit_cover_stage(const DynSystem& sys, const CoverStage& stage,
                                           const CoverStage* previous = nullptr);

}  // namespace cantordyn
