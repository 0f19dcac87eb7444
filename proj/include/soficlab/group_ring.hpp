#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "soficlab/word.hpp"

namespace soficlab {

using Integer = boost::multiprecision::cpp_int;

/// Finitely supported integer combination of formal reduced words.
///
/// Keys are words, not group elements: two words that are equal in a
/// presented group may both appear. Consumers evaluate elements through a
/// permutation action, which identifies them.
class GroupRingElement {
 public:
  using Terms = std::map<Word, Integer>;

  GroupRingElement() = default;
  static GroupRingElement identity() { return monomial(Word{}, 1); }
  static GroupRingElement monomial(const Word& w, const Integer& coeff);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t support_size() const noexcept { return terms_.size(); }
  Integer coefficient(const Word& w) const;

  void add_term(const Word& w, const Integer& coeff);

  GroupRingElement operator+(const GroupRingElement& rhs) const;
  GroupRingElement operator-(const GroupRingElement& rhs) const;
  GroupRingElement operator-() const { return scaled(-1); }
  /// Convolution: the coefficient of w is the sum of x^u y^v over uv = w.
  GroupRingElement operator*(const GroupRingElement& rhs) const;
  GroupRingElement scaled(const Integer& k) const;
  /// The anti-involution sum f^g g -> sum f^g g^{-1}.
  GroupRingElement involution() const;

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  Terms terms_;
};

inline GroupRingElement gr_add(const GroupRingElement& x, const GroupRingElement& y) { return x + y; }
inline GroupRingElement gr_scale(const GroupRingElement& x, const Integer& k) { return x.scaled(k); }
inline GroupRingElement gr_multiply(const GroupRingElement& x, const GroupRingElement& y) { return x * y; }

/// Parses expressions such as "1 - A", "2ab - 3bA + 1", "-a".
GroupRingElement parse_group_ring(std::string_view text, const GeneratorAlphabet& alphabet);
std::string format_group_ring(const GroupRingElement& x, const GeneratorAlphabet& alphabet);

/// r x s matrix over the integral group ring. Right convolution by an r x s
/// matrix maps (K^r)^G to (K^s)^G. A dimension may be zero (e.g. the empty
/// top coboundary of a graph).
class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const GroupRingElement& at(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }
  GroupRingElement& at(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }

  GroupRingMatrix operator*(const GroupRingMatrix& rhs) const;
  GroupRingMatrix transposed() const;
  GroupRingMatrix involuted() const;
  bool is_zero() const;
  /// Longest support word over all entries.
  std::size_t max_word_length() const;

  friend bool operator==(const GroupRingMatrix&, const GroupRingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GroupRingElement> entries_;
};

GroupRingMatrix parse_group_ring_matrix(const std::vector<std::vector<std::string>>& rows,
                                        const GeneratorAlphabet& alphabet);

/// Fox derivative d w / d s_gen in the integral group ring of the free group.
GroupRingElement fox_derivative(const Word& w, std::uint32_t gen);

struct Presentation {
  GeneratorAlphabet alphabet;
  std::vector<Word> relators;

  static Presentation parse(std::string_view generators, const std::vector<std::string>& relators);
};

}  // namespace soficlab
