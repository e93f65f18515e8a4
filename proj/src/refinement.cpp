#include "cantordyn/refinement.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <random>
#include <unordered_map>

#include "cantordyn/error.hpp"

namespace cantordyn {
namespace {

std::string cert_name(const PiecewiseIterate& cert) {
  return "piecewise(l=" + std::to_string(cert.l) + ",b=" + std::to_string(cert.b) + ")";
}

// Keeps the current system of a refinement chain and one certificate over
// the original map.
struct Chain {
  DynSystem original;
  DynSystem current;
  PiecewiseIterate cert;

  explicit Chain(const DynSystem& sys) : original(sys), current(sys), cert(trivial_cert(sys.map)) {}

  void apply(const Refinement& r) {
    cert = compose(r.cert, cert);
    current = r.child;
  }

  Refinement refinement() const { return Refinement{current, original, cert}; }
};

OpenRequest predicate_request(std::string name, std::function<bool(const Word&)> member) {
  return OpenRequest::from_predicate(std::move(name),
                                     [member = std::move(member)](const Word& tau, std::size_t) { return member(tau); });
}

// O(<= n) = {τ : ∃m <= n φ(m, τ, P)}.
std::function<bool(const Word&)> witness_set(const Phi1Predicate& phi, std::size_t n) {
  return [phi, n](const Word& tau) {
    for (std::size_t m = 0; m <= n; ++m) {
      if (phi.decide(m, tau, phi.param)) return true;
    }
    return false;
  };
}

}  // namespace

PiecewiseIterate trivial_cert(const CodedMap& f) {
  return PiecewiseIterate{0, 1, f, [](const Word&) { return std::size_t{1}; }};
}

PiecewiseIterate table_cert(const CodedMap& f, std::size_t l, std::size_t b, std::vector<std::size_t> table) {
  const int k = f.alphabet();
  if (table.size() != power(static_cast<std::size_t>(k), l)) {
    throw CantorError(ErrorCode::kInvalidArgument, "j table has " + std::to_string(table.size()) +
                                                       " entries, expected " +
                                                       std::to_string(power(static_cast<std::size_t>(k), l)));
  }
  return PiecewiseIterate{l, b, f, [table = std::move(table), k](const Word& rho) { return table[lex_index(rho, k)]; }};
}

PiecewiseIterate memoized(PiecewiseIterate cert) {
  struct Memo {
    std::mutex mutex;
    std::unordered_map<Word, std::size_t, WordHash> values;
  };
  auto memo = std::make_shared<Memo>();
  auto inner = cert.j;
  cert.j = [memo, inner](const Word& rho) {
    {
      std::lock_guard<std::mutex> lock(memo->mutex);
      auto it = memo->values.find(rho);
      if (it != memo->values.end()) return it->second;
    }
    std::size_t value = inner(rho);
    std::lock_guard<std::mutex> lock(memo->mutex);
    memo->values.emplace(rho, value);
    return value;
  };
  return cert;
}

std::vector<std::size_t> j_table(const PiecewiseIterate& cert, std::size_t limit) {
  const std::size_t count = power(static_cast<std::size_t>(cert.base.alphabet()), cert.l);
  if (count > limit) {
    throw CantorError(ErrorCode::kInvalidArgument, "j table of " + std::to_string(count) + " entries exceeds limit");
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  for (const Word& rho : all_words(cert.base.alphabet(), cert.l)) out.push_back(cert.j(rho));
  return out;
}

std::vector<Violation> check_cert(const PiecewiseIterate& cert) {
  std::vector<Violation> out;
  if (cert.b == 0) out.push_back({"j-range", Word(), "b must be at least 1"});
  for (const Word& rho : all_words(cert.base.alphabet(), cert.l)) {
    std::size_t value = cert.j(rho);
    if (value < 1 || value > cert.b) {
      out.push_back({"j-range", rho, "j=" + std::to_string(value) + " outside [1," + std::to_string(cert.b) + "]"});
    }
  }
  return out;
}

CodedMap induced_map(const PiecewiseIterate& cert) {
  const CodedMap base = cert.base;
  const std::size_t l = cert.l;
  const std::size_t b = cert.b;
  auto j = cert.j;
  return CodedMap(
      base.alphabet(), base.depth(), cert_name(cert),
      [base, l, j](const Word& w) {
        if (w.size() < l) return Word();
        return base.iterate(w, j(w.prefix(l)));
      },
      [base, l, b](std::size_t len) {
        if (len < l) return std::size_t{0};
        for (std::size_t step = 0; step < b && len > 0; ++step) len = base.guaranteed_length(len);
        return len;
      });
}

PiecewiseIterate compose(const PiecewiseIterate& outer, const PiecewiseIterate& inner) {
  const CodedMap g = outer.base;
  const std::size_t depth = inner.base.depth();
  const std::size_t l1 = inner.l;
  const std::size_t l2 = outer.l;
  std::optional<std::size_t> l3;
  for (std::size_t len = l2 + 1; len <= depth && !l3; ++len) {
    std::size_t reach = len;
    bool long_enough = reach > l1;
    for (std::size_t n = 1; n < outer.b && long_enough; ++n) {
      reach = g.guaranteed_length(reach);
      long_enough = reach > l1;
    }
    if (long_enough) l3 = len;
  }
  if (!l3) {
    throw CantorError(ErrorCode::kDepthInsufficient, "no lookup length <= " + std::to_string(depth) +
                                                         " keeps " + std::to_string(outer.b) +
                                                         " outer iterates longer than " + std::to_string(l1));
  }
  auto j1 = inner.j;
  auto j2 = outer.j;
  PiecewiseIterate out{*l3, inner.b * outer.b, inner.base, [g, j1, j2, l1, l2](const Word& rho) {
                         const std::size_t m = j2(rho.prefix(l2));
                         std::size_t total = 0;
                         Word w = rho;
                         for (std::size_t i = 0; i < m; ++i) {
                           total += j1(w.prefix(l1));
                           w = g(w);
                         }
                         return total;
                       }};
  return memoized(std::move(out));
}

std::optional<Word> cert_mismatch(const PiecewiseIterate& cert, const CodedMap& child_map,
                                  const std::vector<Word>& words) {
  for (const Word& w : words) {
    if (w.size() < cert.l) continue;
    if (child_map(w) != cert.base.iterate(w, cert.j(w.prefix(cert.l)))) return w;
  }
  return std::nullopt;
}

bool cert_sound(const PiecewiseIterate& cert, const CodedMap& child_map, std::size_t max_length) {
  for (std::size_t len = cert.l; len <= max_length; ++len) {
    if (cert_mismatch(cert, child_map, all_words(cert.base.alphabet(), len))) return false;
  }
  return true;
}

std::optional<Word> cert_mismatch_sampled(const PiecewiseIterate& cert, const CodedMap& child_map,
                                          std::size_t samples, std::uint64_t seed, const std::vector<Word>& extra) {
  const std::size_t depth = cert.base.depth();
  std::vector<Word> words;
  for (const Word& w : extra) {
    for (std::size_t len = cert.l; len <= w.size(); ++len) words.push_back(w.prefix(len));
  }
  if (depth >= cert.l) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> length(cert.l, depth);
    std::uniform_int_distribution<int> letter(0, cert.base.alphabet() - 1);
    for (std::size_t i = 0; i < samples; ++i) {
      std::string letters(length(rng), '0');
      for (char& ch : letters) ch = static_cast<char>('0' + letter(rng));
      words.emplace_back(letters);
    }
  }
  return cert_mismatch(cert, child_map, words);
}

bool return_bound_check(const Refinement& r, const PointApprox& x) {
  const std::size_t b = r.cert.b;
  std::vector<Word> words = r.parent.map.orbit(x.prefix, x.prefix.size() + 1);
  for (std::size_t n = 0; n + b < words.size() && !words[n + b].empty(); ++n) {
    bool entered = false;
    for (std::size_t k = 0; k <= b && !entered; ++k) entered = r.child.space.contains(words[n + k]);
    if (!entered) return false;
  }
  return true;
}

OpenRequest OpenRequest::from_words(std::string name, std::vector<std::pair<std::size_t, Word>> words) {
  OpenRequest out;
  out.name = std::move(name);
  out.listed = words;
  auto shared = std::make_shared<const std::vector<std::pair<std::size_t, Word>>>(std::move(words));
  out.member = [shared](const Word& tau, std::size_t stage) {
    return std::any_of(shared->begin(), shared->end(),
                       [&](const auto& entry) { return entry.first <= stage && entry.second == tau; });
  };
  out.hits = [shared](const Word& image, std::size_t stage) {
    return std::any_of(shared->begin(), shared->end(),
                       [&](const auto& entry) { return entry.first <= stage && image.extends(entry.second); });
  };
  return out;
}

OpenRequest OpenRequest::from_predicate(std::string name, std::function<bool(const Word&, std::size_t)> member) {
  OpenRequest out;
  out.name = std::move(name);
  out.member = member;
  out.hits = [member](const Word& image, std::size_t stage) {
    for (std::size_t len = 0; len <= image.size(); ++len) {
      if (member(image.prefix(len), stage)) return true;
    }
    return false;
  };
  return out;
}

MeetOrAvoid meet_or_avoid(const DynSystem& sys, const OpenRequest& u) {
  const ClosedClass& c = sys.space;
  const CodedMap& f = sys.map;
  ClosedClass d0 = avoidance_class(
      c, f, [hits = u.hits](const Word& image, std::size_t level) { return hits(image, level); },
      c.name() + "-avoid(" + u.name + ")");
  ClosedClass::Probe probe = d0.probe(sys.depth());
  if (probe.witness) {
    return MeetOrAvoid{Refinement{DynSystem{d0, f}, sys, trivial_cert(f)}, false, 0, d0};
  }
  const std::size_t s = probe.extinction;
  std::optional<std::size_t> l = f.try_modulus(s);
  if (!l) {
    throw CantorError(ErrorCode::kHorizonExhausted,
                      "no lookup length <= " + std::to_string(sys.depth()) + " forces images of length " +
                          std::to_string(s));
  }
  auto hits = u.hits;
  PiecewiseIterate cert{*l, s + 1, f, [c, f, hits, s](const Word& rho) {
                          if (!c.contains(rho)) return std::size_t{1};
                          Word image = rho;
                          for (std::size_t k = 1; k <= s + 1; ++k) {
                            image = f(image);
                            if (hits(image, s)) return k;
                          }
                          throw CantorError(ErrorCode::kInconsistentDepth,
                                            "member " + rho.display() + " does not reach the request within " +
                                                std::to_string(s + 1) + " steps");
                        }};
  cert = memoized(std::move(cert));
  ClosedClass d1 = c.restricted(c.name() + "-meet(" + u.name + ")",
                                [hits, s](const Word& w) { return w.size() < s || hits(w, s); });
  if (!d1.nonempty_at_depth()) {
    throw CantorError(ErrorCode::kHorizonExhausted, "meet class for " + u.name + " is empty at depth");
  }
  return MeetOrAvoid{Refinement{DynSystem{d1, induced_map(cert)}, sys, cert}, true, s, d0};
}

ForcingResult least_element_forcing(const DynSystem& sys, const Phi1Predicate& phi) {
  const std::size_t depth = sys.depth();
  Chain chain(sys);
  ForcingResult out{chain.refinement(), std::nullopt, {}};
  for (int pass = 0; pass < 2; ++pass) {
    const DynSystem current = chain.current;
    std::optional<std::size_t> b;
    for (std::size_t n = 0; n <= depth && !b; ++n) {
      ClosedClass c_le = avoidance_class(
          current.space, current.map,
          [set = witness_set(phi, n)](const Word& image, std::size_t) {
            for (std::size_t len = 0; len <= image.size(); ++len) {
              if (set(image.prefix(len))) return true;
            }
            return false;
          },
          "C(<=" + std::to_string(n) + ")");
      if (!c_le.nonempty_at_depth()) b = n;
    }
    if (!b) {
      out.log.push_back("S is empty at depth " + std::to_string(depth));
      if (pass == 1) {
        throw CantorError(ErrorCode::kHorizonExhausted, "least witness still unsettled after the meet refinement");
      }
      OpenRequest u = OpenRequest::from_predicate("U(" + phi.name + ")", [phi, depth](const Word& tau, std::size_t s) {
        if (tau.size() > s) return false;
        for (std::size_t m = 0; m <= std::min(s, depth); ++m) {
          if (phi.decide(m, tau, phi.param)) return true;
        }
        return false;
      });
      MeetOrAvoid moa = meet_or_avoid(current, u);
      chain.apply(moa.refinement);
      if (!moa.met) {
        out.log.push_back("avoid: no member meets a witness");
        out.refinement = chain.refinement();
        return out;
      }
      out.log.push_back("meet at s=" + std::to_string(moa.s) + "; re-running on the refined system");
      continue;
    }
    out.log.push_back("least element of S is " + std::to_string(*b));
    MeetOrAvoid into = meet_or_avoid(current, predicate_request("O(<=" + std::to_string(*b) + ")", witness_set(phi, *b)));
    if (!into.met) {
      throw CantorError(ErrorCode::kInconsistentDepth, "C(<=" + std::to_string(*b) + ") is empty but its avoidance survives");
    }
    chain.apply(into.refinement);
    out.log.push_back("meet into O(<=" + std::to_string(*b) + ") at s=" + std::to_string(into.s));
    if (*b > 0) {
      MeetOrAvoid carve =
          meet_or_avoid(chain.current, predicate_request("O(<" + std::to_string(*b) + ")", witness_set(phi, *b - 1)));
      if (carve.met) {
        throw CantorError(ErrorCode::kInconsistentDepth,
                          "avoiding O(<" + std::to_string(*b) + ") empties the refined class at depth");
      }
      chain.apply(carve.refinement);
      out.log.push_back("avoid O(<" + std::to_string(*b) + ")");
    }
    out.least = b;
    out.refinement = chain.refinement();
    return out;
  }
  return out;
}

NbhResult nbh_periodicity(const DynSystem& sys, std::size_t i) {
  const std::vector<Word> words = all_words(sys.alphabet(), i);
  if (words.size() > 64) {
    throw CantorError(ErrorCode::kInvalidArgument, "cylinder length " + std::to_string(i) + " gives more than 64 words");
  }
  if (!sys.space.nonempty_at_depth()) throw CantorError(ErrorCode::kEmptyClass, sys.space.name() + " is empty at depth");
  std::vector<Word> avoided;
  std::size_t code = 0;
  // Greedy from the high bit: the largest code whose avoidance class survives.
  for (std::size_t idx = words.size(); idx-- > 0;) {
    std::vector<Word> trial = avoided;
    trial.push_back(words[idx]);
    if (avoid_words(sys.space, sys.map, trial).nonempty_at_depth()) {
      avoided = std::move(trial);
      code |= std::size_t{1} << idx;
    }
  }
  std::sort(avoided.begin(), avoided.end());
  NbhResult out{Refinement{DynSystem{avoid_words(sys.space, sys.map, avoided), sys.map}, sys, trivial_cert(sys.map)},
                avoided, code, {}, 0};
  for (std::size_t idx = 0; idx < words.size(); ++idx) {
    if (code >> idx & 1) continue;
    std::vector<Word> with = avoided;
    with.push_back(words[idx]);
    ClosedClass::Probe probe = avoid_words(sys.space, sys.map, with).probe(sys.depth());
    if (probe.witness) {
      throw CantorError(ErrorCode::kHorizonExhausted,
                        "avoiding " + words[idx].display() + " as well still survives at depth");
    }
    out.returns.emplace_back(words[idx], probe.extinction);
    out.b = std::max(out.b, probe.extinction);
  }
  return out;
}

ApPointResult construct_ap_point(const DynSystem& sys, const std::vector<OpenRequest>& requests,
                                 std::size_t c_max) {
  Chain chain(sys);
  std::vector<ApStep> log;
  auto partial = [&]() {
    std::string text;
    for (const ApStep& step : log) text += " [" + step.kind + " " + step.label + ": " + step.outcome + "]";
    return text;
  };
  try {
    const std::size_t rounds = std::max(requests.size(), c_max);
    for (std::size_t t = 0; t < rounds; ++t) {
      if (t < requests.size()) {
        MeetOrAvoid moa = meet_or_avoid(chain.current, requests[t]);
        chain.apply(moa.refinement);
        log.push_back({"request", requests[t].name, moa.met ? "meet" : "avoid", moa.met ? moa.s + 1 : 0});
      }
      if (t < c_max) {
        NbhResult nbh = nbh_periodicity(chain.current, t + 1);
        chain.apply(nbh.refinement);
        std::string avoided;
        for (const Word& w : nbh.avoided) avoided += (avoided.empty() ? "" : ",") + w.str();
        log.push_back({"periodicity", "i=" + std::to_string(t + 1), "avoid {" + avoided + "}", nbh.b});
      }
    }
  } catch (const CantorError& e) {
    throw CantorError(e.code(), std::string(e.what()) + "; partial log:" + partial());
  }
  std::optional<Word> survivor = chain.current.space.first_member(sys.depth());
  if (!survivor) throw CantorError(ErrorCode::kEmptyClass, "refined class is empty at depth; log:" + partial());
  PointApprox point = make_point(sys, *survivor);
  APCert cert = build_ap_cert(point, c_max, sys.depth());
  return ApPointResult{point, cert, chain.refinement(), log};
}

}  // namespace cantordyn
