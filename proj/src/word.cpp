#include "soficlab/word.hpp"

#include <algorithm>
#include <cctype>

#include "soficlab/error.hpp"

namespace soficlab {

GeneratorAlphabet::GeneratorAlphabet(std::string_view names) : names_(names) {
  if (names_.empty()) throw InvalidInput("generator alphabet must be nonempty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const char c = names_[i];
    if (c < 'a' || c > 'z')
      throw InvalidInput(std::string("generator names must be lowercase letters, got '") + c + "'");
    if (names_.find(c) != i)
      throw InvalidInput(std::string("duplicate generator '") + c + "'");
  }
}

int GeneratorAlphabet::index_of(char c) const noexcept {
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto pos = names_.find(lower);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

Word Word::reduce(std::span<const Letter> letters) {
  Word w;
  w.letters_.reserve(letters.size());
  for (const Letter& x : letters) {
    if (!w.letters_.empty() && w.letters_.back() == x.inverted())
      w.letters_.pop_back();
    else
      w.letters_.push_back(x);
  }
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    w.letters_.push_back(it->inverted());
  return w;
}

Word Word::operator*(const Word& rhs) const {
  // Cancel the longest suffix of *this against the prefix of rhs.
  std::size_t cancel = 0;
  const std::size_t limit = std::min(letters_.size(), rhs.letters_.size());
  while (cancel < limit &&
         letters_[letters_.size() - 1 - cancel] == rhs.letters_[cancel].inverted())
    ++cancel;
  Word w;
  w.letters_.reserve(letters_.size() + rhs.letters_.size() - 2 * cancel);
  w.letters_.assign(letters_.begin(), letters_.end() - static_cast<std::ptrdiff_t>(cancel));
  w.letters_.insert(w.letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(cancel),
                    rhs.letters_.end());
  return w;
}

Word Word::prefix(std::size_t len) const {
  Word w;
  w.letters_.assign(letters_.begin(),
                    letters_.begin() + static_cast<std::ptrdiff_t>(std::min(len, letters_.size())));
  return w;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

std::vector<Letter> parse_letters(std::string_view text, const GeneratorAlphabet& alphabet) {
  std::vector<Letter> out;
  if (text == "1") return out;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const int idx = alphabet.index_of(c);
    if (idx < 0 || !std::isalpha(static_cast<unsigned char>(c)))
      throw InvalidInput(std::string("unknown letter '") + c + "' in word \"" +
                         std::string(text) + "\"");
    out.push_back({static_cast<std::uint32_t>(idx),
                   std::isupper(static_cast<unsigned char>(c)) != 0});
  }
  return out;
}

Word parse_word(std::string_view text, const GeneratorAlphabet& alphabet) {
  return Word::reduce(parse_letters(text, alphabet));
}

std::string format_word(const Word& w, const GeneratorAlphabet& alphabet) {
  if (w.is_identity()) return "1";
  std::string s;
  s.reserve(w.length());
  for (const Letter& x : w.letters()) {
    const char c = alphabet.name(x.gen);
    s.push_back(x.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
  }
  return s;
}

long exponent_sum(const Word& w, std::uint32_t gen) {
  long sum = 0;
  for (const Letter& x : w.letters())
    if (x.gen == gen) sum += x.sign();
  return sum;
}

std::vector<Word> enumerate_words(std::size_t rank, std::size_t max_length) {
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (std::uint32_t g = 0; g < rank; ++g) {
        for (bool inv : {false, true}) {
          const Letter x{g, inv};
          if (!w.is_identity() && w.letters().back() == x.inverted()) continue;
          next.push_back(w * Word::generator(g, inv));
        }
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace soficlab
