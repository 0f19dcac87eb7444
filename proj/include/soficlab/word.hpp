#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soficlab {

/// A finite generating set. Each generator is named by one lowercase ASCII
/// letter; the matching uppercase letter denotes its inverse in word syntax.
class GeneratorAlphabet {
 public:
  GeneratorAlphabet() = default;
  /// Builds an alphabet from a string of distinct lowercase letters, e.g. "ab".
  explicit GeneratorAlphabet(std::string_view names);

  std::size_t rank() const noexcept { return names_.size(); }
  char name(std::size_t gen) const { return names_.at(gen); }
  const std::string& names() const noexcept { return names_; }

  /// Index of the generator named `c` (lowercase or uppercase), or -1.
  int index_of(char c) const noexcept;

  friend bool operator==(const GeneratorAlphabet&,
                         const GeneratorAlphabet&) = default;

 private:
  std::string names_;
};

struct Letter {
  std::uint32_t gen = 0;
  bool inverse = false;

  Letter inverted() const noexcept { return {gen, !inverse}; }
  int sign() const noexcept { return inverse ? -1 : 1; }

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// A freely reduced word. The empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Freely reduces an arbitrary letter sequence.
  static Word reduce(std::span<const Letter> letters);
  static Word generator(std::uint32_t gen, bool inverse = false) {
    Word w;
    w.letters_.push_back({gen, inverse});
    return w;
  }

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  Word inverse() const;
  Word operator*(const Word& rhs) const;

  /// Prefix of the given length (a reduced word's prefixes are reduced).
  Word prefix(std::size_t len) const;

  // Shortlex order: shorter words first, then lexicographic on letters.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Raw (possibly unreduced) letters -> canonical reduced word.
inline Word free_reduce(std::span<const Letter> letters) {
  return Word::reduce(letters);
}
inline Word word_multiply(const Word& u, const Word& v) { return u * v; }
inline Word word_inverse(const Word& u) { return u.inverse(); }

/// Parses "abAB" style syntax; "1" or "" is the identity. Throws InvalidInput
/// on letters outside the alphabet.
Word parse_word(std::string_view text, const GeneratorAlphabet& alphabet);
std::vector<Letter> parse_letters(std::string_view text,
                                  const GeneratorAlphabet& alphabet);
std::string format_word(const Word& w, const GeneratorAlphabet& alphabet);

/// Exponent sum of generator `gen` in `w`.
long exponent_sum(const Word& w, std::uint32_t gen);

/// All reduced non-identity words of length 1..max_length, in shortlex order.
std::vector<Word> enumerate_words(std::size_t rank, std::size_t max_length);

}  // namespace soficlab
