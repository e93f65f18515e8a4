#include "cantordyn/avoidance.hpp"

#include <algorithm>

#include "cantordyn/error.hpp"

namespace cantordyn {
namespace {

// Duval's algorithm, generating Lyndon words in lex order.
std::vector<Word> lyndon_words(int k, std::size_t max_length) {
  std::vector<Word> out;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    std::string letters;
    for (int a : w) letters.push_back(static_cast<char>('0' + a));
    out.emplace_back(letters);
    const std::size_t m = w.size();
    while (w.size() < max_length) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == k - 1) w.pop_back();
  }
  return out;
}

bool has_gap(const Word& w, std::size_t b, std::size_t cylinder) {
  if (w.size() < cylinder || b == 0) return b == 0;
  std::size_t run = 0;
  for (std::size_t p = 0; p + cylinder <= w.size(); ++p) {
    run = w.str().compare(p, cylinder, w.str(), 0, cylinder) == 0 ? 0 : run + 1;
    if (run >= b) return true;
  }
  return false;
}

}  // namespace

std::vector<Word> enumerate_periodic_points(int k, std::size_t max_period) {
  if (max_period == 0) return {};
  std::vector<Word> out = lyndon_words(k, max_period);
  std::stable_sort(out.begin(), out.end(), length_lex_less);
  return out;
}

Word sigma_block(const SigmaSequence& seq) {
  Word block;
  for (std::size_t j = seq.sigmas.size(); j-- > 0;) block += seq.sigmas[j];
  return block + Word::constant(1, seq.sigmas.size());
}

std::vector<std::string> check_sigma_sequence(const SigmaSequence& seq) {
  std::vector<std::string> failures;
  const std::size_t count = seq.sigmas.size();
  if (seq.reps.size() != count || seq.c.size() != count) failures.push_back("length mismatch between fields");
  std::size_t total = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const Word& sigma = seq.sigmas[j];
    const std::size_t n = j < seq.reps.size() ? seq.reps[j] : 0;
    if (n == 0) failures.push_back("repetition count " + std::to_string(j + 1) + " is zero");
    Word expected;
    if (j == 0) {
      expected = Word::constant(0, n);
    } else {
      SigmaSequence head{{seq.sigmas.begin(), seq.sigmas.begin() + j}, {}, {}};
      expected = Word::repeat(sigma_block(head), n);
    }
    if (sigma != expected) failures.push_back("sigma " + std::to_string(j + 1) + " does not match its recurrence");
    if (j > 0 && !seq.sigmas[j - 1].is_prefix_of(sigma)) {
      failures.push_back("sigma " + std::to_string(j) + " is not a prefix of sigma " + std::to_string(j + 1));
    }
    if (j > 0) {
      if (!sigma.contains_factor(Word::constant(1, j))) {
        failures.push_back("sigma " + std::to_string(j + 1) + " lacks 1^" + std::to_string(j));
      }
      if (sigma.contains_factor(Word::constant(1, j + 1))) {
        failures.push_back("sigma " + std::to_string(j + 1) + " contains 1^" + std::to_string(j + 1));
      }
    }
    total += sigma.size();
    if (j < seq.c.size() && seq.c[j] != 2 * (j + 1) + total) {
      failures.push_back("c_" + std::to_string(j + 1) + " disagrees with its formula");
    }
  }
  return failures;
}

DodgeOutcome build_dodging_class(const ClosedClass& p, const DodgeOptions& options) {
  const int k = p.alphabet();
  const std::size_t depth = p.depth();
  const CodedMap shift = left_shift(k, depth);
  const std::vector<Word> generators = enumerate_periodic_points(k, options.max_period);
  std::vector<std::vector<Word>> orbits;
  for (const Word& g : generators) orbits.push_back(shift_orbit(g, depth));

  DodgeOutcome out{DodgeCase::kOrbit, DynSystem{ClosedClass::full(k, depth), shift}, std::nullopt, 0, 0, std::nullopt, {}, std::nullopt};
  const std::size_t last_stage = std::max(p.stage_horizon(), generators.size());
  for (std::size_t s = 1; s <= last_stage; ++s) {
    const std::size_t stage = std::min(s, p.stage_horizon());
    for (std::size_t i = 0; i < s && i < generators.size(); ++i) {
      bool disjoint = std::none_of(orbits[i].begin(), orbits[i].end(),
                                   [&](const Word& w) { return p.probe(depth, w, {}, stage).witness.has_value(); });
      if (!disjoint) continue;
      out.which = DodgeCase::kOrbit;
      out.orbit_generator = generators[i];
      out.orbit_index = i;
      out.detection_stage = s;
      ClosedClass orbit = ClosedClass::explicit_nodes(k, depth, orbits[i]).renamed("orbit(" + generators[i].str() + ")");
      out.system = DynSystem{orbit, shift};
      return out;
    }
  }

  out.which = DodgeCase::kHat;
  out.system = DynSystem{ClosedClass::full(k, depth), shift};
  auto probe_hat = [&](const Word& probe) {
    out.probe = probe;
    out.hat = p.restricted("hat(probe " + probe.str() + ")", [probe](const Word& w) {
      return w.size() <= probe.size() ? w.is_prefix_of(probe) : w.extends(probe);
    });
    return out;
  };
  SigmaSequence& seq = out.sequence;
  std::size_t total = 0;
  for (std::size_t i = 0; i < options.sigma_stages; ++i) {
    // Probe 1^{i+1} block^ω, where block = σ_i ... σ_1 1^i (just 0 for i = 0).
    const Word lead = Word::constant(1, i + 1);
    const Word block = i == 0 ? Word("0") : sigma_block(seq);
    const Word probe = (lead + Word::periodic(block, depth)).prefix(depth);
    if (p.contains(probe) && p.probe(depth, probe).witness) return probe_hat(probe);
    std::optional<std::size_t> reps;
    for (std::size_t n = 1; lead.size() + n * block.size() <= depth; ++n) {
      if (!p.probe(depth, lead + Word::repeat(block, n)).witness) {
        reps = n;
        break;
      }
    }
    if (!reps) {
      throw CantorError(ErrorCode::kHorizonExhausted,
                        "no repetition count for sigma " + std::to_string(i + 1) + " within depth " +
                            std::to_string(depth) + " after " + std::to_string(seq.sigmas.size()) + " sigmas");
    }
    seq.sigmas.push_back(Word::repeat(block, *reps));
    seq.reps.push_back(*reps);
    total += seq.sigmas.back().size();
    seq.c.push_back(2 * (i + 1) + total);
  }
  std::vector<std::size_t> c = seq.c;
  out.hat = p.restricted("hat(K=" + std::to_string(c.size()) + ")", [c](const Word& w) {
    if (!w.empty() && w[0] != 0) return false;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] <= w.size() && !w.prefix(c[j]).contains_factor(Word::constant(1, j + 1))) return false;
    }
    return true;
  });
  return out;
}

bool verify_not_ap(const ClosedClass& hat, std::size_t b_max, std::size_t cylinder) {
  for (std::size_t b = 1; b <= b_max; ++b) {
    ClosedClass::Probe probe =
        hat.probe(hat.depth(), Word(), [b, cylinder](const Word& w) { return !has_gap(w, b, cylinder); });
    if (probe.witness) return false;
  }
  return true;
}

}  // namespace cantordyn
