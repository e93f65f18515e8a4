#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantordyn/system.hpp"

namespace cantordyn {

/// g(σ) = f^{j(σ↾l)}(σ) for |σ| >= l, with 1 <= j <= b; shorter words map to λ.
struct PiecewiseIterate {
  std::size_t l = 0;
  std::size_t b = 1;
  CodedMap base;
  std::function<std::size_t(const Word&)> j;
};

/// l = 0, b = 1, j ≡ 1: the certificate of a plain subsystem.
PiecewiseIterate trivial_cert(const CodedMap& f);
/// j read from a table indexed by lex_index of the length-l word.
PiecewiseIterate table_cert(const CodedMap& f, std::size_t l, std::size_t b, std::vector<std::size_t> table);
/// Same certificate with j cached per lookup word.
PiecewiseIterate memoized(PiecewiseIterate cert);
/// j over every word of length l, in lex order. Throws invalid-argument when
/// there are more than `limit` such words.
std::vector<std::size_t> j_table(const PiecewiseIterate& cert, std::size_t limit = 1u << 16);
/// Every j value lies in [1, b].
std::vector<Violation> check_cert(const PiecewiseIterate& cert);

CodedMap induced_map(const PiecewiseIterate& cert);

/// outer is over g, inner induces g from f. The result is over f with
/// b = b_inner * b_outer and induces g^{j_outer} on words of length >= l.
/// Throws depth-insufficient if no lookup length fits the depth.
PiecewiseIterate compose(const PiecewiseIterate& outer, const PiecewiseIterate& inner);

/// A child system whose map is a piecewise combination of the parent's iterates.
struct Refinement {
  DynSystem child;
  DynSystem parent;
  PiecewiseIterate cert;
};

/// First word among `words` (of length >= l) where the child map disagrees
/// with f^{j(σ↾l)}.
std::optional<Word> cert_mismatch(const PiecewiseIterate& cert, const CodedMap& child_map,
                                  const std::vector<Word>& words);
/// Exhaustive check over every word of length l..max_length.
bool cert_sound(const PiecewiseIterate& cert, const CodedMap& child_map, std::size_t max_length);
/// Random words with lengths uniform in [l, depth], plus every prefix of
/// length >= l of each word in `extra`.
std::optional<Word> cert_mismatch_sampled(const PiecewiseIterate& cert, const CodedMap& child_map,
                                          std::size_t samples, std::uint64_t seed,
                                          const std::vector<Word>& extra = {});

/// For every start time n whose window stays nonempty, some k <= b has
/// f^{n+k}(X↾N) in the child space (b from the certificate).
bool return_bound_check(const Refinement& r, const PointApprox& x);

/// A stagewise enumerated set of words U; U[s] grows with s.
struct OpenRequest {
  std::string name;
  /// τ ∈ U[s].
  std::function<bool(const Word& tau, std::size_t stage)> member;
  /// Some prefix of the image lies in U[s].
  std::function<bool(const Word& image, std::size_t stage)> hits;
  /// The (stage, word) list when the request was given explicitly.
  std::vector<std::pair<std::size_t, Word>> listed;

  static OpenRequest from_words(std::string name, std::vector<std::pair<std::size_t, Word>> words);
  static OpenRequest from_predicate(std::string name, std::function<bool(const Word&, std::size_t)> member);
};

struct MeetOrAvoid {
  Refinement refinement;
  bool met = false;
  /// Meet case: least length with no D_0 word. Every member of the parent
  /// reaches the child within s + 1 steps.
  std::size_t s = 0;
  ClosedClass d0;
};

MeetOrAvoid meet_or_avoid(const DynSystem& sys, const OpenRequest& u);

/// A decidable φ(m, τ, P).
struct Phi1Predicate {
  std::string name;
  std::function<bool(std::size_t m, const Word& tau, const std::optional<Word>& param)> decide;
  std::optional<Word> param;
};

struct ForcingResult {
  Refinement refinement;
  /// nullopt: the witness set is empty on every member of the child.
  std::optional<std::size_t> least;
  std::vector<std::string> log;
};

/// The refinement on which the least φ-witness is settled.
ForcingResult least_element_forcing(const DynSystem& sys, const Phi1Predicate& phi);

struct NbhResult {
  Refinement refinement;
  /// The avoided length-i words E and their bitmask code (bit = lex index).
  std::vector<Word> avoided;
  std::size_t code = 0;
  /// For each length-i word outside E, the extinction length s_σ.
  std::vector<std::pair<Word, std::size_t>> returns;
  /// max s_σ: every member of the child enters its own length-i cylinder
  /// within b steps.
  std::size_t b = 0;
};

NbhResult nbh_periodicity(const DynSystem& sys, std::size_t i);

struct ApStep {
  std::string kind;
  std::string label;
  std::string outcome;
  std::size_t bound = 0;
};

struct ApPointResult {
  PointApprox point;
  APCert cert;
  /// One refinement over the original map covering the whole chain.
  Refinement chain;
  std::vector<ApStep> log;
};

/// Alternates meet_or_avoid over `requests` with nbh_periodicity at cylinder
/// lengths 1..c_max (requests first), composing every step into one
/// certificate, and returns the lex-least depth-N survivor with the least
/// verifying return bound for each c <= c_max.
ApPointResult construct_ap_point(const DynSystem& sys, const std::vector<OpenRequest>& requests,
                                 std::size_t c_max);

}  // namespace cantordyn
