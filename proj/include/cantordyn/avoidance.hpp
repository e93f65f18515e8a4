#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cantordyn/system.hpp"

namespace cantordyn {

/// Lyndon words of length <= max_period in length-lex order: one generator
/// σ per shift orbit of σ^ω.
std::vector<Word> enumerate_periodic_points(int k, std::size_t max_period);

/// sigmas[j] is σ_{j+1}; reps[j] the repetition count that produced it;
/// c[j] = 2(j+1) + |σ_1| + ... + |σ_{j+1}|.
struct SigmaSequence {
  std::vector<Word> sigmas;
  std::vector<std::size_t> reps;
  std::vector<std::size_t> c;
};

/// The word σ_i σ_{i-1} ... σ_1 1^i, with i = seq.sigmas.size().
Word sigma_block(const SigmaSequence& seq);
/// Structural checks of a sequence: the recurrence defining each σ, the
/// prefix chain, the 1-run content and the c formula. Returns the failures.
std::vector<std::string> check_sigma_sequence(const SigmaSequence& seq);

enum class DodgeCase { kOrbit, kHat };

struct DodgeOptions {
  std::size_t max_period = 6;
  /// Number of σ stages built in the second case.
  std::size_t sigma_stages = 4;
};

struct DodgeOutcome {
  DodgeCase which = DodgeCase::kOrbit;
  /// The shift on C: the periodic orbit in the first case, the full space otherwise.
  DynSystem system;

  // First case.
  std::optional<Word> orbit_generator;
  std::size_t orbit_index = 0;
  std::size_t detection_stage = 0;

  // Second case.
  std::optional<ClosedClass> hat;
  SigmaSequence sequence;
  /// Set when a probe point itself lies in P; the hat is then P ∩ [probe↾N].
  std::optional<Word> probe;
};

/// Either a periodic orbit disjoint from P (found at the least stage, then
/// least index), or a nonempty subclass of P whose members are not almost
/// periodic under the shift. Throws horizon-exhausted with the partial
/// sequence when some repetition count cannot be settled at depth.
DodgeOutcome build_dodging_class(const ClosedClass& p, const DodgeOptions& options = {});

/// True iff every depth-N member X of `hat` has, for each b <= b_max, b shift
/// iterates in a row that miss [X↾cylinder].
bool verify_not_ap(const ClosedClass& hat, std::size_t b_max, std::size_t cylinder = 1);

}  // namespace cantordyn
