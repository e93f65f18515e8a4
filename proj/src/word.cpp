#include "cantordyn/word.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "cantordyn/error.hpp"

namespace cantordyn {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDepthExceeded: return "depth-exceeded";
    case ErrorCode::kModulusExhausted: return "modulus-exhausted";
    case ErrorCode::kHorizonExhausted: return "horizon-exhausted";
    case ErrorCode::kEmptyClass: return "empty-class";
    case ErrorCode::kMalformedTree: return "malformed-tree";
    case ErrorCode::kUnsupportedKind: return "unsupported-kind";
    case ErrorCode::kColumnMismatch: return "column-mismatch";
    case ErrorCode::kUndecidedAtDepth: return "undecided-at-depth";
    case ErrorCode::kDepthInsufficient: return "depth-insufficient";
    case ErrorCode::kInconsistentDepth: return "inconsistent-depth";
    case ErrorCode::kParseError: return "parse-error";
  }
  return "unknown";
}

Word::Word(std::string letters) : letters_(std::move(letters)) {
  for (char c : letters_) {
    if (c < '0' || c > '9') {
      throw CantorError(ErrorCode::kInvalidArgument,
                        "word letters must be digits, got '" + letters_ + "'");
    }
  }
}

Word Word::repeat(const Word& block, std::size_t times) {
  std::string out;
  out.reserve(block.size() * times);
  for (std::size_t i = 0; i < times; ++i) out += block.letters_;
  return Word(std::move(out), 0);
}

Word Word::periodic(const Word& block, std::size_t length) {
  if (block.empty()) throw CantorError(ErrorCode::kInvalidArgument, "periodic word needs a nonempty block");
  std::string out(length, '0');
  for (std::size_t i = 0; i < length; ++i) out[i] = block.letters_[i % block.size()];
  return Word(std::move(out), 0);
}

Word Word::constant(int letter, std::size_t length) {
  return Word(std::string(length, static_cast<char>('0' + letter)), 0);
}

Word Word::prefix(std::size_t n) const {
  if (n >= letters_.size()) return *this;
  return Word(letters_.substr(0, n), 0);
}

Word Word::drop(std::size_t n) const {
  if (n >= letters_.size()) return Word();
  return Word(letters_.substr(n), 0);
}

Word Word::with(int letter) const {
  std::string out = letters_;
  out.push_back(static_cast<char>('0' + letter));
  return Word(std::move(out), 0);
}

bool Word::is_prefix_of(const Word& other) const {
  return letters_.size() <= other.letters_.size() &&
         std::equal(letters_.begin(), letters_.end(), other.letters_.begin());
}

bool Word::contains_factor(const Word& factor) const {
  return letters_.find(factor.letters_) != std::string::npos;
}

int Word::max_letter() const {
  int best = -1;
  for (char c : letters_) best = std::max(best, c - '0');
  return best;
}

std::string Word::display() const { return letters_.empty() ? "λ" : letters_; }

std::ostream& operator<<(std::ostream& out, const Word& w) { return out << w.display(); }

bool length_lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::size_t power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    out *= base;
  }
  return out;
}

Word word_at_index(std::size_t index, int k, std::size_t length) {
  std::string out(length, '0');
  for (std::size_t i = length; i-- > 0;) {
    out[i] = static_cast<char>('0' + index % k);
    index /= k;
  }
  return Word(out);
}

std::size_t lex_index(const Word& w, int k) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < w.size(); ++i) index = index * k + w[i];
  return index;
}

std::vector<Word> all_words(int k, std::size_t length) {
  const std::size_t count = power(k, length);
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(word_at_index(i, k, length));
  return out;
}

std::vector<Word> words_up_to(int k, std::size_t max_length) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_length; ++len) {
    auto layer = all_words(k, len);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<Word> shift_orbit(const Word& block, std::size_t length) {
  std::vector<Word> out;
  for (std::size_t shift = 0; shift < block.size(); ++shift) {
    Word w = Word::periodic(block, length + shift).drop(shift);
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace cantordyn
