#include "soficlab/fflinalg.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <string>

#include "soficlab/error.hpp"

namespace soficlab {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d : {2u, 3u, 5u, 7u}) {
    if (n % d == 0) return n == d;
  }
  for (std::uint64_t d = 11; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
}

FieldElement PrimeField::inv(FieldElement a) const {
  if (a == 0) throw InvalidInput("inverse of zero");
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a, e = p_ - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<FieldElement>(result);
}

FFMatrix::FFMatrix(std::size_t rows, std::size_t cols, std::uint32_t prime)
    : rows_(rows), cols_(cols), field_(prime), offsets_(rows + 1, 0) {}

FFMatrix FFMatrix::from_triplets(std::size_t rows, std::size_t cols, std::uint32_t prime,
                                 std::vector<Triplet> triplets) {
  FFMatrix m(rows, cols, prime);
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.entries_.reserve(triplets.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    m.offsets_[i] = m.entries_.size();
    while (k < triplets.size() && triplets[k].row == i) {
      const std::uint32_t col = triplets[k].col;
      if (col >= cols) throw InvalidInput("triplet column out of range");
      FieldElement sum = 0;
      while (k < triplets.size() && triplets[k].row == i && triplets[k].col == col)
        sum = m.field_.add(sum, m.field_.reduce(triplets[k++].value));
      if (sum != 0) m.entries_.push_back({col, sum});
    }
  }
  if (k != triplets.size()) throw InvalidInput("triplet row out of range");
  m.offsets_[rows] = m.entries_.size();
  return m;
}

FFMatrix FFMatrix::identity(std::size_t n, std::uint32_t prime) {
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < n; ++i) t.push_back({i, i, 1});
  return from_triplets(n, n, prime, std::move(t));
}

FieldElement FFMatrix::at(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  const auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
  return it != r.end() && it->col == j ? it->value : 0;
}

double FFMatrix::fill() const noexcept {
  const double cells = static_cast<double>(rows_) * static_cast<double>(cols_);
  return cells == 0 ? 0.0 : static_cast<double>(entries_.size()) / cells;
}

FFMatrix FFMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(entries_.size());
  for (std::uint32_t i = 0; i < rows_; ++i)
    for (const Entry& e : row(i)) t.push_back({e.col, i, e.value});
  return from_triplets(cols_, rows_, prime(), std::move(t));
}

FFMatrix FFMatrix::operator*(const FFMatrix& rhs) const {
  if (cols_ != rhs.rows_ || prime() != rhs.prime()) throw InvalidInput("matrix product shape or field mismatch");
  std::vector<Triplet> t;
  std::vector<FieldElement> acc(rhs.cols_, 0);
  std::vector<bool> seen(rhs.cols_, false);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t i = 0; i < rows_; ++i) {
    for (const Entry& a : row(i))
      for (const Entry& b : rhs.row(a.col)) {
        if (!seen[b.col]) {
          seen[b.col] = true;
          touched.push_back(b.col);
        }
        acc[b.col] = field_.add(acc[b.col], field_.mul(a.value, b.value));
      }
    for (std::uint32_t c : touched) {
      if (acc[c] != 0) t.push_back({i, c, acc[c]});
      acc[c] = 0;
      seen[c] = false;
    }
    touched.clear();
  }
  return from_triplets(rows_, rhs.cols_, prime(), std::move(t));
}

std::vector<FieldElement> FFMatrix::apply(std::span<const FieldElement> v) const {
  if (v.size() != cols_) throw InvalidInput("vector length does not match matrix columns");
  std::vector<FieldElement> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const Entry& e : row(i)) out[i] = field_.add(out[i], field_.mul(e.value, v[e.col]));
  return out;
}

bool operator==(const FFMatrix& a, const FFMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.prime() != b.prime()) return false;
  if (a.offsets_ != b.offsets_) return false;
  return std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                    [](const FFMatrix::Entry& x, const FFMatrix::Entry& y) {
                      return x.col == y.col && x.value == y.value;
                    });
}

std::string_view to_string(RankMethod m) noexcept {
  switch (m) {
    case RankMethod::automatic: return "automatic";
    case RankMethod::dense: return "dense";
    case RankMethod::sparse: return "sparse";
    case RankMethod::bitpacked: return "bitpacked";
  }
  return "?";
}

namespace {

using SparseRows = std::vector<std::vector<FFMatrix::Entry>>;

// Row echelon rank of a dense row-major block.
std::size_t dense_rank(std::vector<FieldElement>& a, std::size_t rows, std::size_t cols, const PrimeField& f) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * cols),
                       a.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * cols),
                       a.begin() + static_cast<std::ptrdiff_t>(rank * cols));
    const FieldElement* prow = &a[rank * cols];
    const FieldElement inv = f.inv(prow[c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      FieldElement* row = &a[r * cols];
      if (row[c] == 0) continue;
      const FieldElement factor = f.mul(row[c], inv);
      for (std::size_t k = c; k < cols; ++k)
        if (prow[k] != 0) row[k] = f.sub(row[k], f.mul(factor, prow[k]));
    }
    ++rank;
  }
  return rank;
}

std::size_t bitpacked_rank(std::vector<std::uint64_t>& bits, std::size_t rows, std::size_t cols) {
  const std::size_t words = (cols + 63) / 64;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rank;
    while (pivot < rows && !(bits[pivot * words + w] & mask)) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      std::swap_ranges(bits.begin() + static_cast<std::ptrdiff_t>(pivot * words),
                       bits.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * words),
                       bits.begin() + static_cast<std::ptrdiff_t>(rank * words));
    const std::uint64_t* prow = &bits[rank * words];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint64_t* row = &bits[r * words];
      if (!(row[w] & mask)) continue;
      for (std::size_t k = w; k < words; ++k) row[k] ^= prow[k];
    }
    ++rank;
  }
  return rank;
}

// Dense (or bit-packed) rank of a set of sparse rows over `cols` columns.
// Orientation is chosen so the packed dimension is the longer one.
std::size_t dense_rank_of(const SparseRows& rows, std::size_t cols, const PrimeField& f, bool packed) {
  std::size_t nrows = rows.size();
  if (nrows == 0 || cols == 0) return 0;
  if (packed) {
    const std::size_t words = (cols + 63) / 64;
    std::vector<std::uint64_t> bits(nrows * words, 0);
    for (std::size_t i = 0; i < nrows; ++i)
      for (const auto& e : rows[i]) bits[i * words + e.col / 64] |= std::uint64_t{1} << (e.col % 64);
    return bitpacked_rank(bits, nrows, cols);
  }
  std::vector<FieldElement> a(nrows * cols, 0);
  for (std::size_t i = 0; i < nrows; ++i)
    for (const auto& e : rows[i]) a[i * cols + e.col] = e.value;
  return dense_rank(a, nrows, cols, f);
}

SparseRows rows_of(const FFMatrix& m, bool transpose) {
  const FFMatrix& src = m;
  if (transpose) {
    const FFMatrix t = m.transposed();
    SparseRows out(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) out[i].assign(t.row(i).begin(), t.row(i).end());
    return out;
  }
  SparseRows out(src.rows());
  for (std::size_t i = 0; i < src.rows(); ++i) out[i].assign(src.row(i).begin(), src.row(i).end());
  return out;
}

// Minimum-fill sparse elimination. Pivot rows are taken shortest-first and
// the pivot column within a row is the one held by the fewest live rows.
// When the live block reaches 20% fill it is finished densely.
class SparseEliminator {
 public:
  SparseEliminator(SparseRows rows, std::size_t cols, const PrimeField& f)
      : rows_(std::move(rows)), cols_(cols), f_(f), col_count_(cols, 0), col_rows_(cols), alive_(rows_.size(), true) {
    for (std::uint32_t i = 0; i < rows_.size(); ++i) {
      live_nnz_ += rows_[i].size();
      for (const auto& e : rows_[i]) {
        ++col_count_[e.col];
        col_rows_[e.col].push_back(i);
      }
      heap_.push({rows_[i].size(), i});
    }
    live_rows_ = rows_.size();
    for (std::size_t c = 0; c < cols_; ++c) live_cols_ += col_count_[c] > 0;
  }

  std::size_t run() {
    std::size_t rank = 0;
    while (!heap_.empty()) {
      if (should_densify()) return rank + finish_dense();
      const auto [len, r] = heap_.top();
      heap_.pop();
      if (!alive_[r] || rows_[r].size() != len) continue;
      if (len == 0) {
        retire(r);
        continue;
      }
      std::uint32_t pivot_col = rows_[r].front().col;
      FieldElement pivot_val = rows_[r].front().value;
      for (const auto& e : rows_[r])
        if (col_count_[e.col] < col_count_[pivot_col]) {
          pivot_col = e.col;
          pivot_val = e.value;
        }
      const FieldElement inv = f_.inv(pivot_val);
      auto candidates = std::move(col_rows_[pivot_col]);
      col_rows_[pivot_col].clear();
      for (std::uint32_t r2 : candidates) {
        if (r2 == r || !alive_[r2]) continue;
        const FieldElement v = value_in(r2, pivot_col);
        if (v == 0) continue;
        eliminate(r2, r, f_.mul(v, inv));
        heap_.push({rows_[r2].size(), r2});
      }
      retire(r);
      ++rank;
    }
    return rank;
  }

 private:
  FieldElement value_in(std::uint32_t r, std::uint32_t col) const {
    const auto& row = rows_[r];
    const auto it = std::lower_bound(row.begin(), row.end(), col,
                                     [](const FFMatrix::Entry& e, std::uint32_t c) { return e.col < c; });
    return it != row.end() && it->col == col ? it->value : 0;
  }

  // rows_[target] -= factor * rows_[pivot]
  void eliminate(std::uint32_t target, std::uint32_t pivot, FieldElement factor) {
    const auto& a = rows_[target];
    const auto& b = rows_[pivot];
    scratch_.clear();
    scratch_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
        scratch_.push_back(a[i++]);
      } else if (i == a.size() || b[j].col < a[i].col) {
        const std::uint32_t c = b[j].col;
        scratch_.push_back({c, f_.neg(f_.mul(factor, b[j].value))});
        note_gain(c, target);
        ++j;
      } else {
        const FieldElement v = f_.sub(a[i].value, f_.mul(factor, b[j].value));
        if (v != 0)
          scratch_.push_back({a[i].col, v});
        else
          note_loss(a[i].col);
        ++i;
        ++j;
      }
    }
    live_nnz_ = live_nnz_ + scratch_.size() - a.size();
    rows_[target].swap(scratch_);
  }

  void note_gain(std::uint32_t c, std::uint32_t row) {
    if (col_count_[c]++ == 0) ++live_cols_;
    col_rows_[c].push_back(row);
  }
  void note_loss(std::uint32_t c) {
    if (--col_count_[c] == 0) --live_cols_;
  }

  void retire(std::uint32_t r) {
    alive_[r] = false;
    --live_rows_;
    live_nnz_ -= rows_[r].size();
    for (const auto& e : rows_[r]) note_loss(e.col);
    rows_[r].clear();
    rows_[r].shrink_to_fit();
  }

  bool should_densify() const {
    if (live_rows_ == 0 || live_cols_ == 0) return false;
    const double cells = static_cast<double>(live_rows_) * static_cast<double>(live_cols_);
    const bool packed = f_.prime() == 2;
    const double budget = packed ? static_cast<double>(1u << 31) : static_cast<double>(1u << 25);
    return cells <= budget && static_cast<double>(live_nnz_) >= 0.2 * cells;
  }

  std::size_t finish_dense() {
    std::vector<std::int64_t> remap(cols_, -1);
    std::size_t ncols = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (col_count_[c] > 0) remap[c] = static_cast<std::int64_t>(ncols++);
    SparseRows block;
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r] || rows_[r].empty()) continue;
      auto row = rows_[r];
      for (auto& e : row) e.col = static_cast<std::uint32_t>(remap[e.col]);
      block.push_back(std::move(row));
    }
    return dense_rank_of(block, ncols, f_, f_.prime() == 2);
  }

  SparseRows rows_;
  std::size_t cols_;
  const PrimeField& f_;
  std::vector<std::uint32_t> col_count_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<bool> alive_;
  using HeapItem = std::pair<std::size_t, std::uint32_t>;
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap_;
  std::vector<FFMatrix::Entry> scratch_;
  std::size_t live_nnz_ = 0;
  std::size_t live_rows_ = 0;
  std::size_t live_cols_ = 0;
};

}  // namespace

RankResult rank_gf(const FFMatrix& m, RankMethod method) {
  const auto start = std::chrono::steady_clock::now();
  RankResult result;
  if (method == RankMethod::automatic) {
    const double cells = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
    const bool dense = cells <= static_cast<double>(1u << 18) || m.fill() >= 0.2;
    if (!dense)
      method = RankMethod::sparse;
    else
      method = m.prime() == 2 ? RankMethod::bitpacked : RankMethod::dense;
  }
  if (method == RankMethod::bitpacked && m.prime() != 2) throw InvalidInput("bit-packed elimination needs p = 2");
  result.method = method;
  if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) {
    result.rank = 0;
  } else if (method == RankMethod::sparse) {
    // Eliminate over the shorter rows: rows of the orientation with more rows.
    const bool transpose = m.cols() > m.rows();
    SparseEliminator e(rows_of(m, transpose), transpose ? m.rows() : m.cols(), m.field());
    result.rank = e.run();
  } else {
    // Pack along the longer dimension.
    const bool transpose = m.rows() > m.cols();
    const SparseRows rows = rows_of(m, transpose);
    result.rank = dense_rank_of(rows, transpose ? m.rows() : m.cols(), m.field(), method == RankMethod::bitpacked);
  }
  result.kernel_dim = m.cols() - result.rank;
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<std::vector<FieldElement>> kernel_basis_gf(const FFMatrix& m, std::size_t max_dim) {
  const RankResult rr = rank_gf(m);
  if (rr.kernel_dim > max_dim)
    throw DimensionCap("kernel dimension " + std::to_string(rr.kernel_dim) + " exceeds cap " +
                       std::to_string(max_dim));
  const PrimeField& f = m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<FieldElement> a(rows * cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (const auto& e : m.row(i)) a[i * cols + e.col] = e.value;
  // Reduced row echelon form.
  std::vector<std::int64_t> pivot_of_col(cols, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(a[p * cols + k], a[rank * cols + k]);
    const FieldElement inv = f.inv(a[rank * cols + c]);
    for (std::size_t k = 0; k < cols; ++k) a[rank * cols + k] = f.mul(a[rank * cols + k], inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r * cols + c] == 0) continue;
      const FieldElement factor = a[r * cols + c];
      for (std::size_t k = 0; k < cols; ++k)
        a[r * cols + k] = f.sub(a[r * cols + k], f.mul(factor, a[rank * cols + k]));
    }
    pivot_of_col[c] = static_cast<std::int64_t>(rank++);
  }
  if (rank != rr.rank) throw InvariantViolation("kernel_basis_gf: echelon rank disagrees with rank_gf");
  std::vector<std::vector<FieldElement>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    std::vector<FieldElement> v(cols, 0);
    v[free] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) v[c] = f.neg(a[static_cast<std::size_t>(pivot_of_col[c]) * cols + free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols), triplets_(std::move(triplets)) {
  for (const auto& t : triplets_)
    if (t.row >= rows_ || t.col >= cols_) throw InvalidInput("integer matrix triplet out of range");
}

FFMatrix IntMatrix::reduce(std::uint32_t prime) const {
  return FFMatrix::from_triplets(rows_, cols_, prime, triplets_);
}

IntMatrix IntMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(triplets_.size());
  for (const auto& x : triplets_) t.push_back({x.col, x.row, x.value});
  return IntMatrix(cols_, rows_, std::move(t));
}

std::vector<std::uint32_t> choose_large_primes(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> primes;
  while (primes.size() < count) {
    std::uint32_t candidate = static_cast<std::uint32_t>((std::uint64_t{1} << 30) + (rng() >> 34)) | 1u;
    while (!is_prime(candidate)) candidate += 2;
    if (std::find(primes.begin(), primes.end(), candidate) == primes.end()) primes.push_back(candidate);
  }
  return primes;
}

RationalRank rank_q(const IntMatrix& m, std::size_t prime_count, std::size_t exact_limit, std::uint64_t seed) {
  RationalRank out;
  out.primes = choose_large_primes(prime_count, seed);
  for (std::uint32_t p : out.primes) {
    const std::size_t r = rank_gf(m.reduce(p)).rank;
    out.modular_ranks.push_back(r);
    out.rank = std::max(out.rank, r);
  }
  if (std::max(m.rows(), m.cols()) <= exact_limit) {
    const std::size_t exact = rank_q_exact(m);
    if (exact < out.rank) throw InvariantViolation("modular rank exceeds exact rational rank");
    out.rank = exact;
    out.certain = true;
  }
  return out;
}

void write_sms(std::ostream& os, const FFMatrix& m) {
  os << m.rows() << ' ' << m.cols() << ' ' << m.prime() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& e : m.row(i)) os << (i + 1) << ' ' << (e.col + 1) << ' ' << e.value << '\n';
  os << "0 0 0\n";
}

FFMatrix read_sms(std::istream& is) {
  std::size_t rows = 0, cols = 0;
  std::uint64_t p = 0;
  if (!(is >> rows >> cols >> p)) throw InvalidInput("SMS: missing header");
  std::vector<Triplet> t;
  while (true) {
    std::uint64_t i = 0, j = 0;
    std::int64_t v = 0;
    if (!(is >> i >> j >> v)) throw InvalidInput("SMS: missing terminator line");
    if (i == 0 && j == 0 && v == 0) break;
    if (i == 0 || j == 0 || i > rows || j > cols) throw InvalidInput("SMS: index out of range");
    t.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1), v});
  }
  return FFMatrix::from_triplets(rows, cols, static_cast<std::uint32_t>(p), std::move(t));
}

}  // namespace soficlab
