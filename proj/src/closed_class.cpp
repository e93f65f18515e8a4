#include "cantordyn/closed_class.hpp"

#include <algorithm>
#include <unordered_set>

#include "cantordyn/error.hpp"

namespace cantordyn {

ClosedClass::ClosedClass(int k, std::size_t depth, std::string name, Membership membership,
                         std::size_t stage_horizon, bool staged)
    : impl_(std::make_shared<const Impl>(
          Impl{k, depth, std::move(name), std::move(membership), stage_horizon, staged})) {
  if (k < 2 || k > 10) throw CantorError(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 10]");
}

ClosedClass ClosedClass::full(int k, std::size_t depth) {
  return ClosedClass(k, depth, "full", [](const Word&, std::size_t) { return true; });
}

ClosedClass ClosedClass::forbidden_words(int k, std::size_t depth, std::vector<Word> forbidden) {
  std::string name = "forbidden_words(";
  for (std::size_t i = 0; i < forbidden.size(); ++i) name += (i ? "," : "") + forbidden[i].str();
  name += ")";
  return ClosedClass(k, depth, std::move(name), [forbidden = std::move(forbidden)](const Word& w, std::size_t) {
    return std::none_of(forbidden.begin(), forbidden.end(), [&](const Word& f) { return w.contains_factor(f); });
  });
}

ClosedClass ClosedClass::explicit_nodes(int k, std::size_t depth, const std::vector<Word>& nodes) {
  auto closure = std::make_shared<std::unordered_set<Word, WordHash>>();
  for (const Word& node : nodes) {
    for (std::size_t len = 0; len <= node.size(); ++len) closure->insert(node.prefix(len));
  }
  if (closure->empty()) closure->insert(Word());
  return ClosedClass(k, depth, "explicit_nodes",
                     [closure](const Word& w, std::size_t) { return closure->count(w) > 0; });
}

ClosedClass ClosedClass::from_predicate(int k, std::size_t depth, std::string name,
                                        std::function<bool(const Word&)> predicate) {
  return ClosedClass(k, depth, std::move(name),
                     [predicate = std::move(predicate)](const Word& w, std::size_t) { return predicate(w); });
}

ClosedClass ClosedClass::stagewise(const ClosedClass& base, std::vector<std::pair<std::size_t, Word>> removals,
                                   std::size_t stage_horizon) {
  ClosedClass inner = base;
  return ClosedClass(
      base.alphabet(), base.depth(), base.name() + "+stagewise",
      [inner, removals = std::move(removals)](const Word& w, std::size_t stage) {
        if (!inner.contains_at(w, stage)) return false;
        for (const auto& [at, node] : removals) {
          if (at <= stage && w.extends(node)) return false;
        }
        return true;
      },
      stage_horizon, true);
}

bool ClosedClass::contains_at(const Word& w, std::size_t stage) const {
  if (!w.empty() && w.max_letter() >= impl_->k) return false;
  return impl_->membership(w, std::min(stage, impl_->stage_horizon));
}

ClosedClass::Probe ClosedClass::probe(std::size_t length, const Word& stem, const NodeFilter& filter,
                                      std::optional<std::size_t> stage) const {
  const std::size_t at = stage.value_or(impl_->stage_horizon);
  Probe out;
  auto accepts = [&](const Word& w) {
    ++out.nodes_visited;
    return contains_at(w, at) && (!filter || filter(w));
  };
  // Every prefix of the stem must be a member for the stem to have extensions.
  for (std::size_t len = 0; len <= stem.size(); ++len) {
    if (!accepts(stem.prefix(len))) {
      out.extinction = len;
      return out;
    }
  }
  if (stem.size() >= length) {
    out.witness = stem.prefix(length);
    return out;
  }
  std::size_t deepest = stem.size();
  // Explicit stack of (node, next letter to try).
  std::vector<std::pair<Word, int>> stack;
  stack.emplace_back(stem, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next >= impl_->k) {
      stack.pop_back();
      continue;
    }
    Word child = node.with(next++);
    if (!accepts(child)) continue;
    deepest = std::max(deepest, child.size());
    if (child.size() == length) {
      out.witness = std::move(child);
      return out;
    }
    stack.emplace_back(std::move(child), 0);
  }
  out.extinction = deepest + 1;
  return out;
}

std::optional<std::size_t> ClosedClass::extinction_length() const {
  Probe p = probe(impl_->depth);
  if (p.witness) return std::nullopt;
  return p.extinction;
}

void ClosedClass::for_each_member(std::size_t length, const std::function<bool(const Word&)>& visit,
                                  const NodeFilter& filter) const {
  auto accepts = [&](const Word& w) { return contains(w) && (!filter || filter(w)); };
  if (!accepts(Word())) return;
  if (length == 0) {
    visit(Word());
    return;
  }
  std::vector<std::pair<Word, int>> stack;
  stack.emplace_back(Word(), 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next >= impl_->k) {
      stack.pop_back();
      continue;
    }
    Word child = node.with(next++);
    if (!accepts(child)) continue;
    if (child.size() == length) {
      if (!visit(child)) return;
      continue;
    }
    stack.emplace_back(std::move(child), 0);
  }
}

std::vector<Word> ClosedClass::members(std::size_t length, std::size_t cap) const {
  std::vector<Word> out;
  for_each_member(length, [&](const Word& w) {
    out.push_back(w);
    return out.size() < cap;
  });
  return out;
}

ClosedClass ClosedClass::with_depth(std::size_t depth) const {
  return ClosedClass(impl_->k, depth, impl_->name, impl_->membership, impl_->stage_horizon, impl_->staged);
}

ClosedClass ClosedClass::renamed(std::string name) const {
  return ClosedClass(impl_->k, impl_->depth, std::move(name), impl_->membership, impl_->stage_horizon,
                     impl_->staged);
}

ClosedClass ClosedClass::restricted(std::string name, std::function<bool(const Word&)> predicate) const {
  Membership inner = impl_->membership;
  return ClosedClass(
      impl_->k, impl_->depth, std::move(name),
      [inner, predicate = std::move(predicate)](const Word& w, std::size_t stage) {
        return inner(w, stage) && predicate(w);
      },
      impl_->stage_horizon, impl_->staged);
}

}  // namespace cantordyn
