#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cantordyn {

/// A finite string over the alphabet {0, ..., k-1}, k <= 10. Letters are kept
/// as the characters '0'..'9' so words print and hash as plain strings.
///
/// Ordering via operator<=> is the lexicographic order in which a word sorts
/// before its proper extensions; use length_lex_less for enumeration order.
class Word {
 public:
  Word() = default;
  explicit Word(std::string letters);
  Word(const char* letters) : Word(std::string(letters)) {}

  static Word repeat(const Word& block, std::size_t times);
  /// The first `length` letters of block^ω. `block` must be nonempty.
  static Word periodic(const Word& block, std::size_t length);
  static Word constant(int letter, std::size_t length);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i] - '0'; }
  int back() const { return letters_.back() - '0'; }

  /// σ↾n. Clipped to the word's length.
  Word prefix(std::size_t n) const;
  /// Removes the first n letters (clipped).
  Word drop(std::size_t n) const;
  Word with(int letter) const;

  /// this ⪯ other
  bool is_prefix_of(const Word& other) const;
  /// other ⪯ this
  bool extends(const Word& other) const { return other.is_prefix_of(*this); }
  bool contains_factor(const Word& factor) const;
  int max_letter() const;

  const std::string& str() const { return letters_; }
  /// "λ" for the empty word.
  std::string display() const;

  Word operator+(const Word& other) const { return Word(letters_ + other.letters_, 0); }
  Word& operator+=(const Word& other) {
    letters_ += other.letters_;
    return *this;
  }

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  Word(std::string letters, int) : letters_(std::move(letters)) {}

  std::string letters_;
};

bool length_lex_less(const Word& a, const Word& b);

std::ostream& operator<<(std::ostream& out, const Word& w);

struct WordHash {
  std::size_t operator()(const Word& w) const { return std::hash<std::string>{}(w.str()); }
};

/// Every word of exactly `length` letters over k letters, in lexicographic order.
std::vector<Word> all_words(int k, std::size_t length);
/// Every word of length <= max_length, in length-lex order.
std::vector<Word> words_up_to(int k, std::size_t max_length);
/// Position of `w` in all_words(k, w.size()).
std::size_t lex_index(const Word& w, int k);
Word word_at_index(std::size_t index, int k, std::size_t length);
/// Saturates at SIZE_MAX.
std::size_t power(std::size_t base, std::size_t exponent);
/// The distinct shifts of block^ω, each truncated to `length`, in shift order.
std::vector<Word> shift_orbit(const Word& block, std::size_t length);

}  // namespace cantordyn
