#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <optional>
#include <vector>

#include "cantordyn/closed_class.hpp"
#include "cantordyn/coded_map.hpp"
#include "cantordyn/word.hpp"

namespace cantordyn {

/// A closed class together with a normalized map that keeps it invariant.
struct DynSystem {
  ClosedClass space;
  CodedMap map;

  int alphabet() const { return space.alphabet(); }
  std::size_t depth() const { return space.depth(); }
};

/// True when `image` extends a word that is forbidden for inputs of length
/// `level`. Forbidden sets must grow with the level.
using ImageTest = std::function<bool(const Word& image, std::size_t level)>;

/// {σ ∈ base : ∀n <= |σ|, f^n(σ) extends no word forbidden at level |σ|}.
/// Forward invariant whenever base is and f shrinks.
ClosedClass avoidance_class(const ClosedClass& base, const CodedMap& f, ImageTest hits, std::string name);
/// The same with a fixed forbidden list.
ClosedClass avoid_words(const ClosedClass& base, const CodedMap& f, std::vector<Word> words);

struct ValidateOptions {
  /// Exhaustive checks cover words of length <= audit_depth. 0 picks the
  /// largest length whose word count stays below 2^16.
  std::size_t audit_depth = 0;
  /// Random root-to-depth member paths checked beyond the audit depth.
  std::size_t samples = 32;
  std::uint64_t seed = 1;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t audit_depth = 0;
  std::size_t sampled_paths = 0;

  bool ok() const { return violations.empty(); }
};

/// Checks the system conditions at depth: the space is a tree with a
/// depth-N member, the map is a valid shrinking coded map on the same
/// alphabet and depth, C is forward invariant, and stage memberships shrink.
/// At most one witness is reported per condition.
ValidationReport validate_system(const DynSystem& sys, const ValidateOptions& options = {});

/// A depth-N prefix of a point of the system.
struct PointApprox {
  Word prefix;
  DynSystem parent;
};

/// Throws invalid-argument unless `prefix` has length N and every prefix of
/// it is a member of the space.
PointApprox make_point(const DynSystem& sys, const Word& prefix);

/// [f^0(X↾N), ..., f^steps(X↾N)].
std::vector<Word> orbit(const PointApprox& x, std::size_t steps);

struct RecEntry {
  std::size_t c = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  bool operator==(const RecEntry&) const = default;
};

struct RecCert {
  std::vector<RecEntry> entries;
};

/// True iff every entry has l > c, n >= 1 and f^n(X↾l) ⪰ X↾c. Entries with
/// l > N throw depth-exceeded.
bool verify_recurrence(const PointApprox& x, const RecCert& cert);

struct APRow {
  std::size_t c = 0;
  std::size_t b = 0;
  /// witnesses[n] = k < b with f^{n+k}(X↾N) ⪰ X↾c.
  std::vector<std::size_t> witnesses;
  bool operator==(const APRow&) const = default;
};

struct APCert {
  std::vector<APRow> rows;
};

/// Number of starting times n checked by a row (c, b): those n for which
/// f^{n+b-1}(X↾N) still has at least c letters.
std::size_t ap_range(const PointApprox& x, std::size_t c, std::size_t b);

/// True iff every row has b >= 1, a nonempty range, one witness per start
/// time in the range, and each witness k < b verifies.
bool verify_ap(const PointApprox& x, const APCert& cert);

/// The row for c with the least b <= b_max that verifies; nullopt if none.
std::optional<APRow> least_ap_row(const PointApprox& x, std::size_t c, std::size_t b_max);

/// Rows for c = 1..c_max, each with the least verifying b. Throws
/// horizon-exhausted naming the first c without a bound.
APCert build_ap_cert(const PointApprox& x, std::size_t c_max, std::size_t b_max);

/// The recurrence certificate implied by an almost-periodicity certificate:
/// the return witnessed at start time 1.
RecCert rec_cert_from_ap(const PointApprox& x, const APCert& cert);

}  // namespace cantordyn
