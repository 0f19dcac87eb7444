#include <gmpxx.h>

#include <vector>

#include "soficlab/fflinalg.hpp"

namespace soficlab {

// Bareiss fraction-free elimination: every intermediate entry is a minor of
// the input, so divisions are exact.
std::size_t rank_q_exact(const IntMatrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<mpz_class> a(rows * cols, 0);
  for (const auto& t : m.triplets()) a[t.row * cols + t.col] += static_cast<long>(t.value);
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t k = 0; k < cols; ++k) swap(a[p * cols + k], a[rank * cols + k]);
    const mpz_class& pivot = a[rank * cols + c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const mpz_class lead = a[r * cols + c];
      for (std::size_t k = c + 1; k < cols; ++k) {
        mpz_class v = pivot * a[r * cols + k] - lead * a[rank * cols + k];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r * cols + k] = std::move(v);
      }
      a[r * cols + c] = 0;
    }
    prev = pivot;
    ++rank;
  }
  return rank;
}

}  // namespace soficlab
