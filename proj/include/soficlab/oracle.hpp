#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "soficlab/group_ring.hpp"
#include "soficlab/sofic.hpp"

namespace soficlab {

inline constexpr std::uint64_t kDefaultOracleCap = std::uint64_t{1} << 24;

/// A subshift of finite type X ⊆ K^G given by a window W and allowed
/// patterns P ⊆ K^W. Symbols of K are 0..|K|-1. A pattern lists one symbol
/// per window word, in window order.
class PatternSystem {
 public:
  using Pattern = std::vector<std::uint32_t>;
  using Table = std::vector<std::vector<std::uint32_t>>;

  /// Explicit pattern set. When `multiplication` is given it must be a group
  /// table on the symbols (closure, associativity, identity, inverses).
  static PatternSystem explicit_patterns(std::uint32_t alphabet_size, std::vector<Word> window,
                                         std::set<Pattern> patterns, std::optional<Table> multiplication = {});

  /// ker of right convolution by M over GF(p): symbols encode (GF(p))^r in
  /// base p, component i being digit i. W is the identity plus the support.
  static PatternSystem kernel_condition(const GroupRingMatrix& m, std::uint32_t prime);

  std::uint32_t alphabet_size() const noexcept { return alphabet_size_; }
  const std::vector<Word>& window() const noexcept { return window_; }
  bool is_linear() const noexcept { return prime_ != 0; }
  std::uint32_t prime() const noexcept { return prime_; }
  std::size_t components() const noexcept { return components_; }
  const std::optional<Table>& multiplication() const noexcept { return table_; }
  /// Identity symbol of the group structure; 0 for linear systems.
  std::uint32_t identity() const;
  std::uint32_t multiply(std::uint32_t x, std::uint32_t y) const;

  bool allows(const Pattern& pattern) const;

 private:
  struct Term {
    std::size_t position;  // index into the window
    std::size_t component;
    std::uint32_t coeff;
  };

  PatternSystem() = default;

  std::uint32_t alphabet_size_ = 0;
  std::vector<Word> window_;
  std::set<Pattern> patterns_;
  std::optional<Table> table_;
  std::uint32_t prime_ = 0;
  std::size_t components_ = 1;
  std::vector<std::vector<Term>> equations_;   // one per output column
  std::vector<std::vector<std::uint32_t>> digits_;  // symbol -> components
};

/// Number of labelings a : D_n -> K with w -> a(sigma(w)(delta)) in P for
/// every delta. Throws CapExceeded when |K|^N exceeds `cap`.
std::uint64_t brute_force_fix_count(const PatternSystem& ps, const SoficApproximation& s,
                                    std::uint64_t cap = kDefaultOracleCap);

struct OracleCheck {
  std::uint64_t linear_count = 0;
  std::uint64_t brute_count = 0;
  std::size_t kernel_dim = 0;
};

/// Compares p^(dim ker sigma(M)) with the brute-force count of the kernel
/// pattern system. Throws OracleMismatch when they differ.
OracleCheck cross_check_kernel(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime,
                               std::uint64_t cap = kDefaultOracleCap);

}  // namespace soficlab
