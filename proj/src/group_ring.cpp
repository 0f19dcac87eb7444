#include "soficlab/group_ring.hpp"

#include <cctype>
#include <sstream>

#include "soficlab/error.hpp"

namespace soficlab {

GroupRingElement GroupRingElement::monomial(const Word& w, const Integer& coeff) {
  GroupRingElement x;
  x.add_term(w, coeff);
  return x;
}

Integer GroupRingElement::coefficient(const Word& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? Integer{0} : it->second;
}

void GroupRingElement::add_term(const Word& w, const Integer& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& rhs) const {
  GroupRingElement out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add_term(w, c);
  return out;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& rhs) const {
  GroupRingElement out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add_term(w, -c);
  return out;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& rhs) const {
  GroupRingElement out;
  for (const auto& [u, a] : terms_)
    for (const auto& [v, b] : rhs.terms_) out.add_term(u * v, a * b);
  return out;
}

GroupRingElement GroupRingElement::scaled(const Integer& k) const {
  GroupRingElement out;
  if (k == 0) return out;
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, c * k);
  return out;
}

GroupRingElement GroupRingElement::involution() const {
  GroupRingElement out;
  for (const auto& [w, c] : terms_) out.add_term(w.inverse(), c);
  return out;
}

GroupRingElement parse_group_ring(std::string_view text, const GeneratorAlphabet& alphabet) {
  GroupRingElement out;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw InvalidInput("cannot parse group-ring element \"" + std::string(text) + "\": " + why);
  };
  skip_space();
  if (i == text.size()) fail("empty expression");
  if (text.substr(i) == "0") return out;
  bool first = true;
  while (true) {
    skip_space();
    if (i == text.size()) break;
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_space();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    std::string digits;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits.push_back(text[i++]);
    skip_space();
    if (i < text.size() && text[i] == '*') {
      if (digits.empty()) fail("'*' without coefficient");
      ++i;
      skip_space();
    }
    std::string letters;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) letters.push_back(text[i++]);
    if (digits.empty() && letters.empty()) fail("empty term");
    const Integer coeff = digits.empty() ? Integer{1} : Integer{digits};
    out.add_term(parse_word(letters, alphabet), sign * coeff);
  }
  return out;
}

std::string format_group_ring(const GroupRingElement& x, const GeneratorAlphabet& alphabet) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    const bool negative = c < 0;
    const Integer mag = negative ? Integer{-c} : c;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    if (w.is_identity())
      os << mag;
    else {
      if (mag != 1) os << mag;
      os << format_word(w, alphabet);
    }
  }
  return os.str();
}

GroupRingMatrix GroupRingMatrix::operator*(const GroupRingMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InvalidInput("group-ring matrix shapes do not compose");
  GroupRingMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < rhs.cols_; ++k) {
      GroupRingElement acc;
      for (std::size_t j = 0; j < cols_; ++j) acc = acc + at(i, j) * rhs.at(j, k);
      out.at(i, k) = std::move(acc);
    }
  return out;
}

GroupRingMatrix GroupRingMatrix::transposed() const {
  GroupRingMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

GroupRingMatrix GroupRingMatrix::involuted() const {
  GroupRingMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].involution();
  return out;
}

bool GroupRingMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

std::size_t GroupRingMatrix::max_word_length() const {
  std::size_t len = 0;
  for (const auto& e : entries_)
    for (const auto& [w, c] : e.terms()) len = std::max(len, w.length());
  return len;
}

GroupRingMatrix parse_group_ring_matrix(const std::vector<std::vector<std::string>>& rows,
                                        const GeneratorAlphabet& alphabet) {
  if (rows.empty()) throw InvalidInput("group-ring matrix needs at least one row");
  const std::size_t cols = rows.front().size();
  GroupRingMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidInput("ragged group-ring matrix");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = parse_group_ring(rows[i][j], alphabet);
  }
  return m;
}

GroupRingElement fox_derivative(const Word& w, std::uint32_t gen) {
  // d(x_1...x_k) = sum_j x_1...x_{j-1} d(x_j); ds = 1, dS = -S.
  GroupRingElement out;
  const auto letters = w.letters();
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (letters[j].gen != gen) continue;
    if (!letters[j].inverse)
      out.add_term(w.prefix(j), 1);
    else
      out.add_term(w.prefix(j + 1), -1);
  }
  return out;
}

Presentation Presentation::parse(std::string_view generators, const std::vector<std::string>& relators) {
  Presentation p{GeneratorAlphabet(generators), {}};
  for (const auto& r : relators) {
    Word w = parse_word(r, p.alphabet);
    if (w.is_identity()) throw InvalidInput("relator \"" + r + "\" reduces to the identity");
    p.relators.push_back(std::move(w));
  }
  return p;
}

}  // namespace soficlab
