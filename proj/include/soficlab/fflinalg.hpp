#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace soficlab {

using FieldElement = std::uint32_t;

bool is_prime(std::uint64_t n) noexcept;

/// Arithmetic in GF(p) for a prime p < 2^32.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t prime() const noexcept { return p_; }
  FieldElement add(FieldElement a, FieldElement b) const noexcept {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<FieldElement>(s >= p_ ? s - p_ : s);
  }
  FieldElement sub(FieldElement a, FieldElement b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  FieldElement neg(FieldElement a) const noexcept { return a == 0 ? 0 : p_ - a; }
  FieldElement mul(FieldElement a, FieldElement b) const noexcept {
    return static_cast<FieldElement>(std::uint64_t{a} * b % p_);
  }
  FieldElement inv(FieldElement a) const;
  FieldElement reduce(std::int64_t v) const noexcept {
    const std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<FieldElement>(r < 0 ? r + p_ : r);
  }

 private:
  std::uint32_t p_;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  std::int64_t value;
};

/// Sparse matrix over GF(p) in compressed-row form. Entries are nonzero and
/// unique per (row, col); rows are sorted by column.
class FFMatrix {
 public:
  struct Entry {
    std::uint32_t col;
    FieldElement value;
  };

  FFMatrix(std::size_t rows, std::size_t cols, std::uint32_t prime);
  /// Duplicate (row, col) values are summed mod p; zero sums are dropped.
  static FFMatrix from_triplets(std::size_t rows, std::size_t cols, std::uint32_t prime,
                                std::vector<Triplet> triplets);
  static FFMatrix identity(std::size_t n, std::uint32_t prime);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t prime() const noexcept { return field_.prime(); }
  const PrimeField& field() const noexcept { return field_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Entry> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  FieldElement at(std::size_t i, std::size_t j) const;
  double fill() const noexcept;

  FFMatrix transposed() const;
  FFMatrix operator*(const FFMatrix& rhs) const;
  std::vector<FieldElement> apply(std::span<const FieldElement> v) const;
  bool is_zero() const noexcept { return entries_.empty(); }

  friend bool operator==(const FFMatrix& a, const FFMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  PrimeField field_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

enum class RankMethod { automatic, dense, sparse, bitpacked };

std::string_view to_string(RankMethod m) noexcept;

struct RankResult {
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  RankMethod method = RankMethod::automatic;
  double elapsed = 0.0;  // seconds
};

/// Exact rank over GF(p). The automatic policy eliminates densely when
/// rows*cols <= 2^18 or fill >= 20% (bit-packed rows for p = 2), and
/// otherwise runs minimum-fill sparse elimination that hands the residual
/// block to the dense path once it fills in.
RankResult rank_gf(const FFMatrix& m, RankMethod method = RankMethod::automatic);

/// Basis of the right kernel {v : m v = 0}. Throws DimensionCap when the
/// kernel dimension exceeds max_dim.
std::vector<std::vector<FieldElement>> kernel_basis_gf(const FFMatrix& m, std::size_t max_dim);

/// Sparse integer matrix, used for rational ranks.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const Triplet> triplets() const noexcept { return triplets_; }
  FFMatrix reduce(std::uint32_t prime) const;
  IntMatrix transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> triplets_;
};

struct RationalRank {
  std::size_t rank = 0;
  bool certain = false;  // confirmed by exact fraction-free elimination
  std::vector<std::uint32_t> primes;
  std::vector<std::size_t> modular_ranks;
};

inline constexpr std::size_t kExactRankLimit = 400;

/// Rank over Q: the maximum of ranks modulo `prime_count` primes above 2^30
/// (a certified lower bound), confirmed by Bareiss elimination when
/// max(rows, cols) <= exact_limit.
RationalRank rank_q(const IntMatrix& m, std::size_t prime_count = 3, std::size_t exact_limit = kExactRankLimit,
                    std::uint64_t seed = 0x50f1c1ab);

/// Fraction-free exact rank; cost grows quickly, intended for small inputs.
std::size_t rank_q_exact(const IntMatrix& m);

/// Primes in (2^30, 2^31) drawn from a seeded generator.
std::vector<std::uint32_t> choose_large_primes(std::size_t count, std::uint64_t seed);

/// SMS text format: "rows cols p" header, 1-based "row col value" triplets,
/// terminated by "0 0 0".
void write_sms(std::ostream& os, const FFMatrix& m);
FFMatrix read_sms(std::istream& is);

}  // namespace soficlab
