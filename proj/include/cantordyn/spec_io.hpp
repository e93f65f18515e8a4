#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantordyn/minimal.hpp"
#include "cantordyn/refinement.hpp"

namespace cantordyn {

enum class TreeKind { kFull, kForbiddenWords, kExplicitNodes, kStagewise };

struct TreeSpec {
  TreeKind kind = TreeKind::kFull;
  /// forbidden_words or explicit_nodes.
  std::vector<Word> words;
  /// stagewise: (stage, node) removals from the full tree.
  std::vector<std::pair<std::size_t, Word>> removals;
  bool operator==(const TreeSpec&) const = default;
};

enum class MapSpecKind { kShift, kIdentity, kColumnShift, kTable, kPiecewise };

struct MapSpec {
  MapSpecKind kind = MapSpecKind::kShift;
  std::size_t columns = 1;
  std::vector<std::pair<Word, Word>> table;
  std::size_t l = 0;
  std::size_t b = 1;
  std::vector<std::size_t> j;
  /// Exactly one element for piecewise maps.
  std::vector<MapSpec> base;
  bool operator==(const MapSpec&) const = default;
};

struct SystemSpec {
  int alphabet = 2;
  std::size_t depth = 0;
  std::size_t stage_horizon = 0;
  TreeSpec tree;
  MapSpec map;
  bool operator==(const SystemSpec&) const = default;
};

/// Throws kParseError with "line L, column C" for syntax errors and the
/// offending field path for schema errors.
SystemSpec parse_spec(const std::string& text);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string emit_spec(const SystemSpec& spec);

ClosedClass build_tree(const SystemSpec& spec);
CodedMap build_map(const SystemSpec& spec);
DynSystem build_system(const SystemSpec& spec);

/// [{"name": ..., "words": ["w", [stage, "w"], ...]}, ...]; bare words enter at stage 0.
std::vector<OpenRequest> parse_requests(const std::string& text);
/// {"bits": [{"n": 0, "t": 3}, {"n": 1, "t": null}], "stage_horizon": 20}.
HaltingSim parse_halting(const std::string& text);
/// {"name": ..., "kind": "never" | "extends" | "letter_at", ...}:
///   never: φ ≡ false
///   extends: φ(m, τ) ≡ m = "m" ∧ τ ⪰ "word"
///   letter_at: φ(m, τ) ≡ τ(m) = "letter"
/// An optional "param" word is passed through to φ.
Phi1Predicate parse_predicate(const std::string& text);

/// FNV-1a, rendered as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace cantordyn
