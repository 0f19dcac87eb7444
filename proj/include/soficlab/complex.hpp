#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "soficlab/fflinalg.hpp"
#include "soficlab/group_ring.hpp"
#include "soficlab/sofic.hpp"

namespace soficlab {

/// Realizes right convolution by M at a sofic level: an (s·N) x (r·N) matrix
/// whose entry at output (delta, j), input (delta', i) is the sum of m^h_{ij}
/// over support words h with sigma(h)(delta) = delta'. Coordinate (delta, i)
/// is stored at index i·N + delta.
FFMatrix sigma_matrix(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime);
IntMatrix sigma_matrix_integer(const GroupRingMatrix& m, const SoficApproximation& s);

/// Ornstein-Weiss coboundary: the 1 x |S| matrix (1 - s^{-1})_s, so that
/// (x * entry)(g) = x(g) - x(gs).
GroupRingMatrix ow_matrix(const GeneratorAlphabet& alphabet);

/// Free cocompact G-complex given by orbit counts c_0..c_d and group-ring
/// coboundaries delta^1..delta^d, delta^p of shape c_{p-1} x c_p.
class EquivariantComplex {
 public:
  EquivariantComplex(GeneratorAlphabet alphabet, std::vector<std::size_t> orbit_counts,
                     std::vector<GroupRingMatrix> coboundaries, std::string description);

  const GeneratorAlphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t dimension() const noexcept { return orbit_counts_.size() - 1; }
  const std::vector<std::size_t>& orbit_counts() const noexcept { return orbit_counts_; }
  std::size_t orbit_count(std::size_t p) const { return p < orbit_counts_.size() ? orbit_counts_[p] : 0; }
  /// delta^p for 1 <= p <= dimension().
  const GroupRingMatrix& coboundary(std::size_t p) const { return coboundaries_.at(p - 1); }
  bool has_coboundary(std::size_t p) const noexcept { return p >= 1 && p <= coboundaries_.size(); }
  const std::string& description() const noexcept { return description_; }

  /// Dimensions p for which the user asserts H^p(L, K) = 0, allowing the
  /// entropy of ker delta^{p+1} to be labeled as the image of delta^p.
  const std::set<std::size_t>& acyclic_dims() const noexcept { return acyclic_dims_; }
  void declare_acyclic(std::size_t p) { acyclic_dims_.insert(p); }

  /// How delta^2 was assembled, for presentation complexes.
  const std::string& convention() const noexcept { return convention_; }
  void set_convention(std::string c) { convention_ = std::move(c); }

 private:
  GeneratorAlphabet alphabet_;
  std::vector<std::size_t> orbit_counts_;
  std::vector<GroupRingMatrix> coboundaries_;
  std::string description_;
  std::set<std::size_t> acyclic_dims_;
  std::string convention_;
};

/// A homomorphism level on which to check candidate delta^2 conventions: an
/// abelianization quotient or a small finite coset action, when one exists.
std::optional<SoficApproximation> find_validation_level(const Presentation& presentation);

/// Presentation 2-complex: one vertex orbit, |S| edge orbits, |R| polygon
/// orbits. delta^1 is the Ornstein-Weiss matrix; delta^2 has entry (s, w)
/// built from the Fox derivative dw/ds, with the involution g -> g^{-1}
/// applied or not, whichever makes delta^2 o delta^1 vanish at the
/// validation level. Throws InvariantViolation if neither does.
EquivariantComplex cayley_complex(const Presentation& presentation,
                                  const std::optional<SoficApproximation>& validation = std::nullopt);

/// True iff sigma(delta^{p+1}) * sigma(delta^p) = 0 for every p.
bool composite_zero(const EquivariantComplex& c, const SoficApproximation& s, std::uint32_t prime);

struct RealizedLevel {
  std::size_t level = 0;
  std::size_t size = 0;
  std::uint32_t prime = 0;
  std::vector<FFMatrix> realizations;  // delta^1 .. delta^d
  std::vector<RankResult> ranks;
};

RealizedLevel realize(const EquivariantComplex& c, const SoficApproximation& s, std::uint32_t prime);

struct QuotientBetti {
  std::size_t dim_ffp = 0;        // dim H^p over GF(prime)
  std::size_t kernel_next = 0;    // dim ker delta^{p+1}_n
  std::size_t rank_prev = 0;      // rank delta^p_n
  std::optional<std::size_t> dim_q;
  bool q_certain = false;
};

struct BettiOptions {
  bool rational = true;
  bool finite_field = true;
  std::size_t prime_count = 3;
  std::size_t exact_limit = kExactRankLimit;
};

/// dim H^p of the quotient complex over GF(prime) and, optionally, over Q.
/// Requires a homomorphism level (NotHomomorphism otherwise).
QuotientBetti quotient_betti(const EquivariantComplex& c, const SoficApproximation& s, std::size_t p_dim,
                             std::uint32_t prime, const BettiOptions& options = {});

}  // namespace soficlab
