#include "cantordyn/system.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "cantordyn/error.hpp"

namespace cantordyn {
namespace {

std::size_t default_audit_depth(int k, std::size_t depth) {
  std::size_t a = 0;
  while (a < depth && power(static_cast<std::size_t>(k), a + 1) <= (std::size_t{1} << 16)) ++a;
  return a;
}

void add_once(std::vector<Violation>& out, const std::string& condition, const Word& witness,
              const std::string& detail) {
  for (const Violation& v : out) {
    if (v.condition == condition) return;
  }
  out.push_back({condition, witness, detail});
}

}  // namespace

ClosedClass avoidance_class(const ClosedClass& base, const CodedMap& f, ImageTest hits, std::string name) {
  return ClosedClass(
      base.alphabet(), base.depth(), std::move(name),
      [base, f, hits = std::move(hits)](const Word& w, std::size_t stage) {
        if (!base.contains_at(w, stage)) return false;
        Word image = w;
        for (std::size_t n = 0; n <= w.size(); ++n) {
          if (hits(image, w.size())) return false;
          if (image.empty()) break;
          image = f(image);
        }
        return true;
      },
      base.stage_horizon(), base.staged());
}

ClosedClass avoid_words(const ClosedClass& base, const CodedMap& f, std::vector<Word> words) {
  std::string name = base.name() + "-avoid(";
  for (std::size_t i = 0; i < words.size(); ++i) name += (i ? "," : "") + words[i].display();
  name += ")";
  return avoidance_class(
      base, f,
      [words = std::move(words)](const Word& image, std::size_t) {
        return std::any_of(words.begin(), words.end(), [&](const Word& t) { return image.extends(t); });
      },
      std::move(name));
}

ValidationReport validate_system(const DynSystem& sys, const ValidateOptions& options) {
  ValidationReport report;
  auto& out = report.violations;
  const ClosedClass& c = sys.space;
  const CodedMap& f = sys.map;
  if (c.alphabet() != f.alphabet()) {
    add_once(out, "alphabet-consistency", Word(),
             "space alphabet " + std::to_string(c.alphabet()) + " vs map alphabet " + std::to_string(f.alphabet()));
  }
  if (c.depth() != f.depth()) {
    add_once(out, "depth-consistency", Word(),
             "space depth " + std::to_string(c.depth()) + " vs map depth " + std::to_string(f.depth()));
  }
  const int k = c.alphabet();
  const std::size_t depth = std::min(c.depth(), f.depth());
  const std::size_t audit = options.audit_depth ? std::min(options.audit_depth, depth) : default_audit_depth(k, depth);
  report.audit_depth = audit;

  for (Violation& v : check_map(f, audit)) add_once(out, "map-" + v.condition, v.witness, v.detail);

  const std::vector<Word> words = words_up_to(k, audit);
  for (const Word& w : words) {
    if (!c.contains(w)) continue;
    if (!w.empty() && !c.contains(w.prefix(w.size() - 1))) {
      add_once(out, "downward-closure", w, "member whose parent is not a member");
    }
    try {
      Word image = f(w);
      if (!c.contains(image)) {
        add_once(out, "forward-invariance", w, "f(" + w.display() + ")=" + image.display() + " leaves the class");
      }
    } catch (const CantorError&) {
      // Reported by the map audit.
    }
  }

  if (c.staged()) {
    const std::size_t schedule_depth = std::min<std::size_t>(audit, 10);
    for (std::size_t s = 0; s < c.stage_horizon(); ++s) {
      for (const Word& w : words) {
        if (w.size() > schedule_depth) break;
        if (c.contains_at(w, s + 1) && !c.contains_at(w, s)) {
          add_once(out, "schedule-monotonicity", w,
                   "member at stage " + std::to_string(s + 1) + " but not at stage " + std::to_string(s));
        }
      }
    }
  }

  ClosedClass::Probe probe = c.probe(c.depth());
  if (!probe.witness) {
    add_once(out, "nonempty-at-depth", Word(),
             "no member of length " + std::to_string(c.depth()) + "; extinct at length " +
                 std::to_string(probe.extinction));
  } else if (depth > audit && options.samples > 0) {
    // Random member paths reaching past the exhaustive audit depth.
    std::mt19937_64 rng(options.seed);
    for (std::size_t sample = 0; sample < options.samples; ++sample) {
      Word path;
      bool reached = true;
      while (path.size() < c.depth()) {
        std::vector<int> letters;
        for (int a = 0; a < k; ++a) {
          if (c.contains(path.with(a))) letters.push_back(a);
        }
        if (letters.empty()) {
          reached = false;
          break;
        }
        path = path.with(letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)]);
      }
      ++report.sampled_paths;
      Word previous_image;
      for (std::size_t len = audit + 1; len <= path.size(); ++len) {
        Word w = path.prefix(len);
        Word image;
        try {
          image = f(w);
        } catch (const CantorError& e) {
          add_once(out, "map-totality", w, e.what());
          break;
        }
        if (!c.contains(image)) {
          add_once(out, "forward-invariance", w, "f(" + w.display() + ")=" + image.display() + " leaves the class");
        }
        if (image.size() >= w.size()) add_once(out, "map-shrink", w, "image is not shorter than the input");
        if (len > audit + 1 && !previous_image.is_prefix_of(image)) {
          add_once(out, "map-order-preservation", w, "image does not extend the parent's image");
        }
        previous_image = std::move(image);
      }
      (void)reached;
    }
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.condition != b.condition) return a.condition < b.condition;
    return length_lex_less(a.witness, b.witness);
  });
  return report;
}

PointApprox make_point(const DynSystem& sys, const Word& prefix) {
  if (prefix.size() != sys.depth()) {
    throw CantorError(ErrorCode::kInvalidArgument, "point prefix " + prefix.display() + " has length " +
                                                       std::to_string(prefix.size()) + ", expected " +
                                                       std::to_string(sys.depth()));
  }
  for (std::size_t len = 0; len <= prefix.size(); ++len) {
    if (!sys.space.contains(prefix.prefix(len))) {
      throw CantorError(ErrorCode::kInvalidArgument,
                        "prefix " + prefix.prefix(len).display() + " is not a member of " + sys.space.name());
    }
  }
  return PointApprox{prefix, sys};
}

std::vector<Word> orbit(const PointApprox& x, std::size_t steps) {
  if (steps > x.parent.depth()) {
    throw CantorError(ErrorCode::kDepthExceeded, "orbit of " + std::to_string(steps) + " steps exceeds depth");
  }
  return x.parent.map.orbit(x.prefix, steps);
}

bool verify_recurrence(const PointApprox& x, const RecCert& cert) {
  const std::size_t depth = x.prefix.size();
  for (const RecEntry& e : cert.entries) {
    if (e.l > depth) {
      throw CantorError(ErrorCode::kDepthExceeded,
                        "entry (" + std::to_string(e.c) + "," + std::to_string(e.n) + "," + std::to_string(e.l) +
                            ") reads beyond depth " + std::to_string(depth));
    }
  }
  for (const RecEntry& e : cert.entries) {
    if (e.l <= e.c || e.n < 1) return false;
    if (!x.parent.map.iterate(x.prefix.prefix(e.l), e.n).extends(x.prefix.prefix(e.c))) return false;
  }
  return true;
}

std::size_t ap_range(const PointApprox& x, std::size_t c, std::size_t b) {
  if (b == 0) return 0;
  std::vector<Word> words = x.parent.map.orbit(x.prefix, x.prefix.size() + 1);
  std::size_t count = 0;
  while (count + b - 1 < words.size() && words[count + b - 1].size() >= c) ++count;
  return count;
}

bool verify_ap(const PointApprox& x, const APCert& cert) {
  std::vector<Word> words = x.parent.map.orbit(x.prefix, x.prefix.size() + 1);
  for (const APRow& row : cert.rows) {
    if (row.b == 0 || row.c > x.prefix.size()) return false;
    const std::size_t range = ap_range(x, row.c, row.b);
    if (range == 0 || row.witnesses.size() != range) return false;
    const Word target = x.prefix.prefix(row.c);
    for (std::size_t n = 0; n < range; ++n) {
      const std::size_t k = row.witnesses[n];
      if (k >= row.b || n + k >= words.size() || !words[n + k].extends(target)) return false;
    }
  }
  return true;
}

std::optional<APRow> least_ap_row(const PointApprox& x, std::size_t c, std::size_t b_max) {
  if (c > x.prefix.size()) return std::nullopt;
  std::vector<Word> words = x.parent.map.orbit(x.prefix, x.prefix.size() + 1);
  const Word target = x.prefix.prefix(c);
  for (std::size_t b = 1; b <= b_max; ++b) {
    const std::size_t range = ap_range(x, c, b);
    if (range == 0) break;
    APRow row{c, b, {}};
    bool ok = true;
    for (std::size_t n = 0; n < range && ok; ++n) {
      ok = false;
      for (std::size_t k = 0; k < b; ++k) {
        if (words[n + k].extends(target)) {
          row.witnesses.push_back(k);
          ok = true;
          break;
        }
      }
    }
    if (ok) return row;
  }
  return std::nullopt;
}

APCert build_ap_cert(const PointApprox& x, std::size_t c_max, std::size_t b_max) {
  APCert cert;
  for (std::size_t c = 1; c <= c_max; ++c) {
    std::optional<APRow> row = least_ap_row(x, c, b_max);
    if (!row) {
      throw CantorError(ErrorCode::kHorizonExhausted,
                        "no return bound <= " + std::to_string(b_max) + " for cylinder length " + std::to_string(c));
    }
    cert.rows.push_back(std::move(*row));
  }
  return cert;
}

RecCert rec_cert_from_ap(const PointApprox& x, const APCert& cert) {
  RecCert out;
  for (const APRow& row : cert.rows) {
    if (row.witnesses.size() < 2) {
      throw CantorError(ErrorCode::kDepthInsufficient,
                        "row for c=" + std::to_string(row.c) + " has no witness at start time 1");
    }
    out.entries.push_back({row.c, 1 + row.witnesses[1], x.prefix.size()});
  }
  return out;
}

}  // namespace cantordyn
