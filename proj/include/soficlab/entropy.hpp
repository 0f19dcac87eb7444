#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soficlab/complex.hpp"

namespace soficlab {

/// An exact logarithmic count dim · log p. Floats appear only in nats().
struct LogCount {
  std::int64_t dim = 0;
  std::uint32_t prime = 2;

  double nats() const { return static_cast<double>(dim) * std::log(static_cast<double>(prime)); }
  friend bool operator==(const LogCount&, const LogCount&) = default;
};

/// An algebraic subshift of finite type over GF(p).
class SubshiftSpec {
 public:
  enum class Kind { kernel, ker_coboundary, full_shift };

  /// ker of right convolution by M on (K^r)^G.
  static SubshiftSpec kernel(GroupRingMatrix m, std::uint32_t prime);
  /// ker delta^dim of a complex; for dim beyond the top, all cochains.
  static SubshiftSpec ker_coboundary(std::shared_ptr<const EquivariantComplex> complex, std::size_t dim,
                                     std::uint32_t prime);
  static SubshiftSpec full_shift(std::size_t components, std::uint32_t prime);

  Kind kind() const noexcept { return kind_; }
  std::uint32_t prime() const noexcept { return prime_; }
  /// Number of K-coordinates per group element (r).
  std::size_t components() const noexcept { return components_; }
  /// The defining matrix, absent for full shifts and top-dimensional cochains.
  const std::optional<GroupRingMatrix>& matrix() const noexcept { return matrix_; }
  std::string describe() const;

 private:
  SubshiftSpec(Kind kind, std::uint32_t prime, std::size_t components, std::optional<GroupRingMatrix> matrix,
               std::string label);

  Kind kind_;
  std::uint32_t prime_;
  std::size_t components_;
  std::optional<GroupRingMatrix> matrix_;
  std::string label_;
};

/// log of the number of level-n periodic points (on homomorphism levels) or
/// of witnessed labelings (on general sofic levels).
LogCount fix_log_count(const SubshiftSpec& x, const SoficApproximation& s);
/// log |image of sigma_n(M) on the whole cochain space|.
LogCount image_log_count(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime);

struct EntropyRecord {
  std::size_t level = 0;
  std::size_t size = 0;
  LogCount log_count;
  double normalized = 0.0;  // dim / N, in units of log p

  double normalized_nats() const { return normalized * std::log(static_cast<double>(log_count.prime)); }
};

/// A per-level sequence of normalized values (units of log p unless noted)
/// with limsup/liminf over the last `tail_window` levels.
struct TailSummary {
  std::size_t window = 3;
  double limsup = 0.0;
  double liminf = 0.0;
};

TailSummary summarize_tail(std::span<const double> values, std::size_t window);

struct EntropySequence {
  std::uint32_t prime = 2;
  std::vector<EntropyRecord> records;
  TailSummary tail;
};

inline constexpr std::size_t kDefaultTailWindow = 3;

EntropySequence entropy_sequence(const SubshiftSpec& x, std::span<const SoficApproximation> levels,
                                 std::size_t tail_window = kDefaultTailWindow);

/// Failure of the addition formula at one level, computed twice: from the
/// three kernel entropies and from the quotient Betti number.
struct DefectRecord {
  std::size_t level = 0;
  std::size_t size = 0;
  std::uint32_t prime = 2;
  std::size_t kernel_p = 0;        // dim ker delta^p_n
  std::size_t kernel_next = 0;     // dim ker delta^{p+1}_n
  std::size_t cochains_prev = 0;   // c_{p-1} · N
  std::int64_t defect_dim = 0;     // kernel_p + kernel_next - cochains_prev
  std::size_t betti_dim = 0;       // dim_K H^p(G_n \ L, K)

  LogCount defect() const { return {defect_dim, prime}; }
  double normalized() const { return static_cast<double>(defect_dim) / static_cast<double>(size); }
  double normalized_nats() const { return defect().nats() / static_cast<double>(size); }
};

/// Throws InvariantViolation when the two routes disagree.
DefectRecord yuzvinsky_defect(const EquivariantComplex& c, std::size_t p_dim, const SoficApproximation& s,
                              std::uint32_t prime);

struct BettiPoint {
  std::size_t level = 0;
  std::size_t size = 0;
  std::size_t dim = 0;
  double normalized = 0.0;
  bool certain = true;
};

struct BettiSequence {
  std::vector<BettiPoint> points;
  TailSummary tail;
};

/// Per-level defect / log p = dim_K H^p / N; the tail limsup estimates the
/// sofic entropy Betti number.
BettiSequence sofic_betti(const EquivariantComplex& c, std::size_t p_dim, std::span<const SoficApproximation> levels,
                          std::uint32_t prime, std::size_t tail_window = kDefaultTailWindow);

/// dim_Q H^p(G_n \ L) / N along the levels.
BettiSequence luck_sequence(const EquivariantComplex& c, std::size_t p_dim, std::span<const SoficApproximation> levels,
                            std::size_t tail_window = kDefaultTailWindow, const BettiOptions& options = {});

/// Literature reference values: first l2-Betti number and supremum-cost.
struct CostBounds {
  std::string group;
  std::int64_t beta1 = 0;
  std::int64_t cost_sup = 0;
  std::uint32_t prime = 2;

  /// (1 + beta1) log p and cost_sup log p.
  LogCount lower() const { return {1 + beta1, prime}; }
  LogCount upper() const { return {cost_sup, prime}; }
};

/// Tags: "F<r>" free group of rank r, "Z<d>" or "Z^<d>" free abelian,
/// "surface<g>" closed orientable surface group of genus g. Throws
/// UnknownGroup otherwise.
CostBounds cost_bounds_report(const std::string& group_tag, std::uint32_t prime);

}  // namespace soficlab
