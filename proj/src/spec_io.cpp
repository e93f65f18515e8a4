#include "cantordyn/spec_io.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

#include "cantordyn/error.hpp"

namespace cantordyn {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& message) {
  throw CantorError(ErrorCode::kParseError, "field '" + path + "': " + message);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw CantorError(ErrorCode::kParseError,
                      "line " + std::to_string(line) + ", column " + std::to_string(column) + ": syntax error");
  }
}

const json& require(const json& object, const std::string& key, const std::string& path) {
  if (!object.is_object()) field_error(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::size_t as_count(const json& value, const std::string& path) {
  if (!value.is_number_unsigned()) field_error(path, "expected a non-negative integer");
  return value.get<std::size_t>();
}

Word as_word(const json& value, int k, const std::string& path) {
  if (!value.is_string()) field_error(path, "expected a word string");
  const std::string letters = value.get<std::string>();
  for (char ch : letters) {
    if (ch < '0' || ch - '0' >= k) field_error(path, "letter '" + std::string(1, ch) + "' outside the alphabet");
  }
  return Word(letters);
}

std::vector<Word> as_words(const json& value, int k, const std::string& path) {
  if (!value.is_array()) field_error(path, "expected a list of words");
  std::vector<Word> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(as_word(value[i], k, path + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<std::size_t, Word> as_staged_word(const json& value, int k, const std::string& path) {
  if (value.is_string()) return {0, as_word(value, k, path)};
  if (!value.is_array() || value.size() != 2) field_error(path, "expected a word or [stage, word]");
  return {as_count(value[0], path + "[0]"), as_word(value[1], k, path + "[1]")};
}

TreeSpec parse_tree(const json& value, int k, const std::string& path) {
  TreeSpec tree;
  if (value.is_string()) {
    if (value.get<std::string>() != "full") field_error(path, "unknown tree '" + value.get<std::string>() + "'");
    return tree;
  }
  if (!value.is_object() || value.size() != 1) field_error(path, "expected \"full\" or a one-key object");
  const std::string key = value.begin().key();
  const json& body = value.begin().value();
  const std::string sub = path + "." + key;
  if (key == "forbidden_words") {
    tree.kind = TreeKind::kForbiddenWords;
    tree.words = as_words(body, k, sub);
  } else if (key == "explicit_nodes") {
    tree.kind = TreeKind::kExplicitNodes;
    tree.words = as_words(body, k, sub);
  } else if (key == "stagewise") {
    tree.kind = TreeKind::kStagewise;
    if (!body.is_array()) field_error(sub, "expected a list of [stage, word]");
    for (std::size_t i = 0; i < body.size(); ++i) {
      const std::string item = sub + "[" + std::to_string(i) + "]";
      if (!body[i].is_array()) field_error(item, "expected [stage, word]");
      tree.removals.push_back(as_staged_word(body[i], k, item));
    }
  } else {
    field_error(path, "unknown tree kind '" + key + "'");
  }
  return tree;
}

MapSpec parse_map(const json& value, int k, const std::string& path) {
  MapSpec map;
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "shift") return map;
    if (name == "identity") {
      map.kind = MapSpecKind::kIdentity;
      return map;
    }
    field_error(path, "unknown map '" + name + "'");
  }
  if (!value.is_object() || value.size() != 1) field_error(path, "expected a map name or a one-key object");
  const std::string key = value.begin().key();
  const json& body = value.begin().value();
  const std::string sub = path + "." + key;
  if (key == "column_shift") {
    map.kind = MapSpecKind::kColumnShift;
    map.columns = as_count(body, sub);
    if (map.columns == 0) field_error(sub, "needs at least one column");
  } else if (key == "table") {
    map.kind = MapSpecKind::kTable;
    if (!body.is_array()) field_error(sub, "expected a list of [input, output]");
    for (std::size_t i = 0; i < body.size(); ++i) {
      const std::string item = sub + "[" + std::to_string(i) + "]";
      if (!body[i].is_array() || body[i].size() != 2) field_error(item, "expected [input, output]");
      map.table.emplace_back(as_word(body[i][0], k, item + "[0]"), as_word(body[i][1], k, item + "[1]"));
    }
  } else if (key == "piecewise") {
    map.kind = MapSpecKind::kPiecewise;
    map.l = as_count(require(body, "l", sub), sub + ".l");
    map.b = as_count(require(body, "b", sub), sub + ".b");
    const json& j = require(body, "j", sub);
    if (!j.is_array()) field_error(sub + ".j", "expected a list of exponents");
    for (std::size_t i = 0; i < j.size(); ++i) map.j.push_back(as_count(j[i], sub + ".j[" + std::to_string(i) + "]"));
    map.base.push_back(parse_map(require(body, "base", sub), k, sub + ".base"));
  } else {
    field_error(path, "unknown map kind '" + key + "'");
  }
  return map;
}

json tree_json(const TreeSpec& tree) {
  auto words = [](const std::vector<Word>& ws) {
    json out = json::array();
    for (const Word& w : ws) out.push_back(w.str());
    return out;
  };
  switch (tree.kind) {
    case TreeKind::kFull:
      return "full";
    case TreeKind::kForbiddenWords:
      return json{{"forbidden_words", words(tree.words)}};
    case TreeKind::kExplicitNodes:
      return json{{"explicit_nodes", words(tree.words)}};
    case TreeKind::kStagewise: {
      json list = json::array();
      for (const auto& [stage, w] : tree.removals) list.push_back(json::array({stage, w.str()}));
      return json{{"stagewise", list}};
    }
  }
  return nullptr;
}

json map_json(const MapSpec& map) {
  switch (map.kind) {
    case MapSpecKind::kShift:
      return "shift";
    case MapSpecKind::kIdentity:
      return "identity";
    case MapSpecKind::kColumnShift:
      return json{{"column_shift", map.columns}};
    case MapSpecKind::kTable: {
      json list = json::array();
      for (const auto& [in, out] : map.table) list.push_back(json::array({in.str(), out.str()}));
      return json{{"table", list}};
    }
    case MapSpecKind::kPiecewise:
      return json{{"piecewise", {{"l", map.l}, {"b", map.b}, {"j", map.j}, {"base", map_json(map.base.at(0))}}}};
  }
  return nullptr;
}

CodedMap map_from_spec(const MapSpec& map, int k, std::size_t depth) {
  switch (map.kind) {
    case MapSpecKind::kShift:
      return builtin_map(MapKind::kLeftShift, k, depth);
    case MapSpecKind::kIdentity:
      return builtin_map(MapKind::kIdentity, k, depth);
    case MapSpecKind::kColumnShift:
      return builtin_map(MapKind::kColumnShift, k, depth, map.columns);
    case MapSpecKind::kTable:
      return normalize(table_map(k, depth, map.table));
    case MapSpecKind::kPiecewise:
      return induced_map(table_cert(map_from_spec(map.base.at(0), k, depth), map.l, map.b, map.j));
  }
  throw CantorError(ErrorCode::kUnsupportedKind, "unknown map kind");
}

}  // namespace

SystemSpec parse_spec(const std::string& text) {
  const json root = parse_text(text);
  if (!root.is_object()) field_error("", "a system spec must be a JSON object");
  for (auto it = root.begin(); it != root.end(); ++it) {
    static const std::vector<std::string> known{"alphabet", "depth", "stage_horizon", "tree", "map"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) field_error(it.key(), "unknown field");
  }
  SystemSpec spec;
  const std::size_t k = as_count(require(root, "alphabet", ""), "alphabet");
  if (k != 2 && k != 3) field_error("alphabet", "must be 2 or 3");
  spec.alphabet = static_cast<int>(k);
  spec.depth = as_count(require(root, "depth", ""), "depth");
  if (spec.depth == 0) field_error("depth", "must be positive");
  if (root.contains("stage_horizon")) spec.stage_horizon = as_count(root["stage_horizon"], "stage_horizon");
  spec.tree = parse_tree(require(root, "tree", ""), spec.alphabet, "tree");
  spec.map = parse_map(require(root, "map", ""), spec.alphabet, "map");
  return spec;
}

std::string emit_spec(const SystemSpec& spec) {
  json root{{"alphabet", spec.alphabet},
            {"depth", spec.depth},
            {"stage_horizon", spec.stage_horizon},
            {"tree", tree_json(spec.tree)},
            {"map", map_json(spec.map)}};
  return root.dump(2) + "\n";
}

ClosedClass build_tree(const SystemSpec& spec) {
  const int k = spec.alphabet;
  switch (spec.tree.kind) {
    case TreeKind::kFull:
      return ClosedClass::full(k, spec.depth);
    case TreeKind::kForbiddenWords:
      return ClosedClass::forbidden_words(k, spec.depth, spec.tree.words);
    case TreeKind::kExplicitNodes:
      return ClosedClass::explicit_nodes(k, spec.depth, spec.tree.words);
    case TreeKind::kStagewise:
      return ClosedClass::stagewise(ClosedClass::full(k, spec.depth), spec.tree.removals,
                                    spec.stage_horizon == 0 ? spec.depth : spec.stage_horizon);
  }
  throw CantorError(ErrorCode::kUnsupportedKind, "unknown tree kind");
}

CodedMap build_map(const SystemSpec& spec) { return map_from_spec(spec.map, spec.alphabet, spec.depth); }

DynSystem build_system(const SystemSpec& spec) { return DynSystem{build_tree(spec), build_map(spec)}; }

std::vector<OpenRequest> parse_requests(const std::string& text) {
  const json root = parse_text(text);
  if (!root.is_array()) field_error("", "expected a list of requests");
  std::vector<OpenRequest> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    const json& name = require(root[i], "name", path);
    if (!name.is_string()) field_error(path + ".name", "expected a string");
    const json& words = require(root[i], "words", path);
    if (!words.is_array()) field_error(path + ".words", "expected a list");
    std::vector<std::pair<std::size_t, Word>> staged;
    for (std::size_t w = 0; w < words.size(); ++w) {
      staged.push_back(as_staged_word(words[w], 10, path + ".words[" + std::to_string(w) + "]"));
    }
    out.push_back(OpenRequest::from_words(name.get<std::string>(), std::move(staged)));
  }
  return out;
}

HaltingSim parse_halting(const std::string& text) {
  const json root = parse_text(text);
  HaltingSim sim;
  const json& bits = require(root, "bits", "");
  if (!bits.is_array()) field_error("bits", "expected a list");
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::string path = "bits[" + std::to_string(i) + "]";
    HaltingBit bit;
    bit.n = as_count(require(bits[i], "n", path), path + ".n");
    const json& t = require(bits[i], "t", path);
    if (!t.is_null()) bit.t = as_count(t, path + ".t");
    sim.bits.push_back(bit);
  }
  if (root.contains("stage_horizon")) sim.stage_horizon = as_count(root["stage_horizon"], "stage_horizon");
  return sim;
}

Phi1Predicate parse_predicate(const std::string& text) {
  const json root = parse_text(text);
  const json& kind_value = require(root, "kind", "");
  if (!kind_value.is_string()) field_error("kind", "expected a string");
  const std::string kind = kind_value.get<std::string>();
  Phi1Predicate phi;
  phi.name = root.contains("name") && root["name"].is_string() ? root["name"].get<std::string>() : kind;
  if (root.contains("param")) phi.param = as_word(root["param"], 10, "param");
  if (kind == "never") {
    phi.decide = [](std::size_t, const Word&, const std::optional<Word>&) { return false; };
  } else if (kind == "extends") {
    const std::size_t m = as_count(require(root, "m", ""), "m");
    const Word w = as_word(require(root, "word", ""), 10, "word");
    phi.decide = [m, w](std::size_t n, const Word& tau, const std::optional<Word>&) { return n == m && tau.extends(w); };
  } else if (kind == "letter_at") {
    const std::size_t letter = as_count(require(root, "letter", ""), "letter");
    phi.decide = [letter](std::size_t m, const Word& tau, const std::optional<Word>&) {
      return m < tau.size() && static_cast<std::size_t>(tau[m]) == letter;
    };
  } else {
    field_error("kind", "unknown predicate '" + kind + "'");
  }
  return phi;
}

std::string digest(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace cantordyn
