#include "cantordyn/coded_map.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

#include "cantordyn/error.hpp"

namespace cantordyn {

struct CodedMap::Cache {
  std::mutex mutex;
  std::unordered_map<std::size_t, std::size_t> min_length;
};

CodedMap::CodedMap(int k, std::size_t depth, std::string name, Rule rule, LengthBound bound)
    : impl_(std::make_shared<const Impl>(Impl{k, depth, std::move(name), std::move(rule), std::move(bound)})),
      cache_(std::make_shared<Cache>()) {
  if (k < 2 || k > 10) throw CantorError(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 10]");
}

Word CodedMap::operator()(const Word& w) const {
  if (w.size() > impl_->depth) {
    throw CantorError(ErrorCode::kDepthExceeded, "input " + w.display() + " longer than depth " +
                                                     std::to_string(impl_->depth));
  }
  return impl_->rule(w);
}

Word CodedMap::iterate(const Word& w, std::size_t n) const {
  Word out = w;
  for (std::size_t i = 0; i < n; ++i) {
    // Images of λ are λ for every shrinking map; stop early.
    if (out.empty()) break;
    out = (*this)(out);
  }
  return out;
}

std::vector<Word> CodedMap::orbit(const Word& w, std::size_t steps) const {
  std::vector<Word> out;
  out.reserve(steps + 1);
  out.push_back(w);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(out.back().empty() ? Word() : (*this)(out.back()));
  return out;
}

std::size_t CodedMap::guaranteed_length(std::size_t input_length) const {
  if (impl_->bound) return impl_->bound(input_length);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (auto it = cache_->min_length.find(input_length); it != cache_->min_length.end()) return it->second;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::size_t count = power(impl_->k, input_length);
  for (std::size_t i = 0; i < count && best > 0; ++i) {
    best = std::min(best, impl_->rule(word_at_index(i, impl_->k, input_length)).size());
  }
  cache_->min_length[input_length] = best;
  return best;
}

std::optional<std::size_t> CodedMap::try_modulus(std::size_t l) const {
  for (std::size_t m = 0; m <= impl_->depth; ++m) {
    if (guaranteed_length(m) >= l) return m;
  }
  return std::nullopt;
}

std::size_t CodedMap::modulus(std::size_t l) const {
  if (auto m = try_modulus(l)) return *m;
  throw CantorError(ErrorCode::kModulusExhausted,
                    "no modulus for l=" + std::to_string(l) + " within depth " + std::to_string(impl_->depth) +
                        " for map " + impl_->name);
}

CodedMap CodedMap::with_depth(std::size_t depth) const {
  return CodedMap(impl_->k, depth, impl_->name, impl_->rule, impl_->bound);
}

CodedMap CodedMap::renamed(std::string name) const {
  return CodedMap(impl_->k, impl_->depth, std::move(name), impl_->rule, impl_->bound);
}

CodedMap left_shift(int k, std::size_t depth) {
  return CodedMap(
      k, depth, "shift", [](const Word& w) { return w.drop(1); },
      [](std::size_t len) { return len == 0 ? 0 : len - 1; });
}

CodedMap column_shift(int k, std::size_t depth, std::size_t columns) {
  if (columns == 0) throw CantorError(ErrorCode::kInvalidArgument, "column-shift needs at least one column");
  return CodedMap(
      k, depth, "column_shift(" + std::to_string(columns) + ")",
      [columns](const Word& w) { return w.drop(columns); },
      [columns](std::size_t len) { return len > columns ? len - columns : 0; });
}

CodedMap builtin_map(MapKind kind, int k, std::size_t depth, std::size_t columns) {
  if (depth < 1) throw CantorError(ErrorCode::kInvalidArgument, "builtin maps need depth >= 1");
  switch (kind) {
    case MapKind::kLeftShift:
      return left_shift(k, depth);
    case MapKind::kIdentity:
      return CodedMap(
          k, depth, "identity", [](const Word& w) { return w.prefix(w.empty() ? 0 : w.size() - 1); },
          [](std::size_t len) { return len == 0 ? 0 : len - 1; });
    case MapKind::kColumnShift:
      return column_shift(k, depth, columns);
  }
  throw CantorError(ErrorCode::kUnsupportedKind, "unknown builtin map kind");
}

CodedMap table_map(int k, std::size_t depth, std::vector<std::pair<Word, Word>> pairs, std::string name) {
  auto table = std::make_shared<std::unordered_map<Word, Word, WordHash>>();
  for (auto& [in, out] : pairs) (*table)[in] = out;
  return CodedMap(k, depth, std::move(name), [table](const Word& w) {
    auto it = table->find(w);
    if (it == table->end()) {
      throw CantorError(ErrorCode::kInvalidArgument, "table has no image for " + w.display());
    }
    return it->second;
  });
}

CodedMap materialize(const CodedMap& map) {
  std::vector<std::pair<Word, Word>> pairs;
  for (const Word& w : words_up_to(map.alphabet(), map.depth())) pairs.emplace_back(w, map(w));
  return table_map(map.alphabet(), map.depth(), std::move(pairs), map.name());
}

CodedMap normalize(const CodedMap& map) {
  CodedMap base = map;
  return CodedMap(
      map.alphabet(), map.depth(), map.name(),
      [base](const Word& w) {
        if (w.empty()) return Word();
        return base(w).prefix(w.size() - 1);
      },
      [base](std::size_t len) { return len == 0 ? 0 : std::min(base.guaranteed_length(len), len - 1); });
}

CodedMap iterate_map(const CodedMap& map, std::size_t n) {
  CodedMap base = map;
  return CodedMap(
      map.alphabet(), map.depth(), map.name() + "^" + std::to_string(n),
      [base, n](const Word& w) { return base.iterate(w, n); },
      [base, n](std::size_t len) {
        for (std::size_t i = 0; i < n; ++i) len = base.guaranteed_length(len);
        return len;
      });
}

std::vector<Violation> check_map(const CodedMap& map, std::size_t audit_depth) {
  std::vector<Violation> out;
  const int k = map.alphabet();
  audit_depth = std::min(audit_depth, map.depth());
  std::unordered_map<Word, Word, WordHash> images;
  for (const Word& w : words_up_to(k, audit_depth)) {
    try {
      Word image = map(w);
      if (image.max_letter() >= k) out.push_back({"alphabet", w, "image " + image.display() + " leaves the alphabet"});
      if (!w.empty() && image.size() >= w.size()) {
        out.push_back({"shrink", w, "image " + image.display() + " is not shorter than the input"});
      }
      images.emplace(w, std::move(image));
    } catch (const CantorError& e) {
      out.push_back({"totality", w, e.what()});
    }
  }
  for (const auto& [w, image] : images) {
    if (w.empty()) continue;
    auto parent = images.find(w.prefix(w.size() - 1));
    if (parent != images.end() && !parent->second.is_prefix_of(image)) {
      out.push_back({"order-preservation", w,
                     "f(" + parent->first.display() + ")=" + parent->second.display() + " is not a prefix of " +
                         image.display()});
    }
  }
  bool has_modulus = false;
  for (std::size_t m = 0; m <= audit_depth && !has_modulus; ++m) {
    bool all_long = true;
    for (const Word& w : all_words(k, m)) {
      auto it = images.find(w);
      if (it == images.end() || it->second.empty()) {
        all_long = false;
        break;
      }
    }
    has_modulus = all_long;
  }
  if (!has_modulus) out.push_back({"modulus", Word(), "no m <= audit depth forces images of length >= 1"});
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.condition != b.condition) return a.condition < b.condition;
    return length_lex_less(a.witness, b.witness);
  });
  return out;
}

IterateTable::IterateTable(CodedMap base, std::size_t horizon) : base_(std::move(base)), horizon_(horizon) {}

const Word& IterateTable::at(const Word& w, std::size_t n) {
  if (n > horizon_) {
    throw CantorError(ErrorCode::kHorizonExhausted,
                      "iterate " + std::to_string(n) + " beyond horizon " + std::to_string(horizon_));
  }
  auto it = entries_.find(w);
  if (it == entries_.end()) it = entries_.emplace(w, base_.orbit(w, horizon_)).first;
  return it->second[n];
}

}  // namespace cantordyn
