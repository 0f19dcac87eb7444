#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "soficlab/group_ring.hpp"
#include "soficlab/permutation.hpp"
#include "soficlab/word.hpp"

namespace soficlab {

inline constexpr std::size_t kDefaultCosetCap = 1'000'000;

/// Complete coset table of a finite-index subgroup. Columns are letters:
/// column 2g is generator g, column 2g+1 its inverse. Entry (c, x) is the
/// coset c·x (right multiplication). Coset 0 is the subgroup itself.
class CosetTable {
 public:
  CosetTable(std::size_t rank, std::size_t index, std::vector<std::uint32_t> entries);

  std::size_t rank() const noexcept { return rank_; }
  std::size_t index() const noexcept { return index_; }
  std::size_t columns() const noexcept { return 2 * rank_; }
  std::uint32_t at(std::uint32_t coset, Letter x) const {
    return entries_[coset * columns() + column_of(x)];
  }
  static std::size_t column_of(Letter x) noexcept { return 2 * x.gen + (x.inverse ? 1 : 0); }

  /// Coset reached from `coset` by right-multiplying with `w`.
  std::uint32_t trace(std::uint32_t coset, const Word& w) const;

  /// Closed, mutually-inverse columns, transitive from coset 0, and every
  /// relator returns each coset to itself.
  bool is_valid_for(const Presentation& presentation) const;

 private:
  std::size_t rank_;
  std::size_t index_;
  std::vector<std::uint32_t> entries_;
};

/// HLT coset enumeration with lookahead. Throws CapExceeded when more than
/// `coset_cap` cosets would be simultaneously alive (an infinite index is
/// reported the same way).
CosetTable todd_coxeter(const Presentation& presentation, std::span<const Word> subgroup_generators,
                        std::size_t coset_cap = kDefaultCosetCap);

/// One level of a sofic approximation: a permutation of {0..N-1} for each
/// generator. The stored permutation of generator a is the left action
/// a * G_n u = G_n u a^{-1}, so sigma(uv) = sigma(u) o sigma(v).
class SoficApproximation {
 public:
  SoficApproximation(std::size_t level, std::vector<Permutation> perms, bool is_homomorphism,
                     std::string provenance);

  std::size_t level() const noexcept { return level_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t rank() const noexcept { return perms_.size(); }
  bool is_homomorphism() const noexcept { return is_homomorphism_; }
  const std::string& provenance() const noexcept { return provenance_; }
  const Permutation& generator(std::size_t g) const { return perms_.at(g); }
  const Permutation& generator_inverse(std::size_t g) const { return inverses_.at(g); }

  std::uint32_t apply(Letter x, std::uint32_t point) const {
    return x.inverse ? inverses_[x.gen](point) : perms_[x.gen](point);
  }
  /// sigma(w)(point), composing right to left along w.
  std::uint32_t apply(const Word& w, std::uint32_t point) const;

  /// Conjugate every generator permutation by `relabel` (point i becomes
  /// relabel(i)).
  SoficApproximation relabeled(const Permutation& relabel) const;

  /// Number of connected components of the Schreier graph.
  std::size_t orbit_count() const;

 private:
  std::size_t level_;
  std::size_t size_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverses_;
  bool is_homomorphism_;
  std::string provenance_;
};

Permutation sigma_of_word(const SoficApproximation& s, const Word& w);

/// Fraction of points fixed by sigma(w).
double farber_defect(const SoficApproximation& s, const Word& w);

SoficApproximation from_coset_table(const CosetTable& table, std::size_t level, std::string provenance);

/// Each entry of `images` gives sigma(generator) at one level. Relators are
/// checked (RelatorViolated otherwise) and the action is restricted to the
/// orbit of point 0, relabeled in breadth-first order.
std::vector<SoficApproximation> chain_from_quotients(const Presentation& presentation,
                                                     const std::vector<std::vector<Permutation>>& images,
                                                     std::size_t first_level = 1);

/// Quotients (Z/m^k)^rank for k = 1..levels, generators acting by unit
/// translations. Valid whenever every relator has exponent sums divisible
/// by m^k (free groups, Z^d, surface groups); otherwise RelatorViolated.
std::vector<SoficApproximation> abelianization_chain(const Presentation& presentation, std::uint64_t modulus,
                                                     std::size_t levels);

/// Independent uniform permutations per generator; not a homomorphism.
SoficApproximation random_sofic_model(std::size_t rank, std::size_t size, std::uint64_t seed,
                                      std::size_t level = 0);

/// Uniform random permutation from Fisher-Yates over mt19937_64, portable
/// across standard libraries.
Permutation random_permutation(std::size_t size, std::mt19937_64& rng);

}  // namespace soficlab
