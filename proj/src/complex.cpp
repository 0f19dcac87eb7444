#include "soficlab/complex.hpp"

#include <algorithm>
#include <limits>

#include "soficlab/error.hpp"

namespace soficlab {

namespace {

constexpr std::uint32_t kCheckPrime = 2147483647u;

std::int64_t to_int64(const Integer& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw InvalidInput("group-ring coefficient does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

// Integer triplets of the realization; duplicates are left for the caller to sum.
std::vector<Triplet> realization_triplets(const GroupRingMatrix& m, const SoficApproximation& s,
                                          std::uint32_t reduce_mod) {
  const std::uint32_t n = static_cast<std::uint32_t>(s.size());
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < m.rows(); ++i)
    for (std::uint32_t j = 0; j < m.cols(); ++j)
      for (const auto& [h, coeff] : m.at(i, j).terms()) {
        std::int64_t c;
        if (reduce_mod != 0) {
          Integer r = coeff % reduce_mod;
          if (r < 0) r += reduce_mod;
          c = static_cast<std::int64_t>(r);
          if (c == 0) continue;
        } else {
          c = to_int64(coeff);
        }
        for (std::uint32_t delta = 0; delta < n; ++delta)
          t.push_back({j * n + delta, i * n + s.apply(h, delta), c});
      }
  return t;
}

}  // namespace

FFMatrix sigma_matrix(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime) {
  const std::size_t n = s.size();
  return FFMatrix::from_triplets(m.cols() * n, m.rows() * n, prime, realization_triplets(m, s, prime));
}

IntMatrix sigma_matrix_integer(const GroupRingMatrix& m, const SoficApproximation& s) {
  const std::size_t n = s.size();
  auto t = realization_triplets(m, s, 0);
  // Merge duplicate coordinates so the integer matrix is canonical.
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Triplet> merged;
  for (const auto& x : t) {
    if (!merged.empty() && merged.back().row == x.row && merged.back().col == x.col)
      merged.back().value += x.value;
    else
      merged.push_back(x);
  }
  std::erase_if(merged, [](const Triplet& x) { return x.value == 0; });
  return IntMatrix(m.cols() * n, m.rows() * n, std::move(merged));
}

GroupRingMatrix ow_matrix(const GeneratorAlphabet& alphabet) {
  GroupRingMatrix m(1, alphabet.rank());
  for (std::uint32_t g = 0; g < alphabet.rank(); ++g) {
    GroupRingElement e = GroupRingElement::identity();
    e.add_term(Word::generator(g, true), -1);
    m.at(0, g) = std::move(e);
  }
  return m;
}

EquivariantComplex::EquivariantComplex(GeneratorAlphabet alphabet, std::vector<std::size_t> orbit_counts,
                                       std::vector<GroupRingMatrix> coboundaries, std::string description)
    : alphabet_(std::move(alphabet)),
      orbit_counts_(std::move(orbit_counts)),
      coboundaries_(std::move(coboundaries)),
      description_(std::move(description)) {
  if (orbit_counts_.empty()) throw InvalidInput("complex needs at least one dimension");
  if (coboundaries_.size() + 1 != orbit_counts_.size())
    throw InvalidInput("complex of dimension d needs exactly d coboundary matrices");
  for (std::size_t p = 1; p <= coboundaries_.size(); ++p) {
    const auto& m = coboundaries_[p - 1];
    if (m.rows() != orbit_counts_[p - 1] || m.cols() != orbit_counts_[p])
      throw InvalidInput("coboundary delta^" + std::to_string(p) + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(orbit_counts_[p - 1]) + "x" +
                         std::to_string(orbit_counts_[p]));
  }
}

std::optional<SoficApproximation> find_validation_level(const Presentation& presentation) {
  const std::size_t rank = presentation.alphabet.rank();
  for (std::uint64_t m = 3; m <= 7; ++m) {
    std::uint64_t size = 1;
    for (std::size_t g = 0; g < rank; ++g) size *= m;
    if (size > 4096) break;
    try {
      return abelianization_chain(presentation, m, 1).front();
    } catch (const RelatorViolated&) {
    }
  }
  try {
    const CosetTable t = todd_coxeter(presentation, {}, 4096);
    if (t.index() > 1) return from_coset_table(t, 0, "regular representation");
  } catch (const CapExceeded&) {
  }
  return std::nullopt;
}

bool composite_zero(const EquivariantComplex& c, const SoficApproximation& s, std::uint32_t prime) {
  for (std::size_t p = 1; p < c.dimension(); ++p) {
    const FFMatrix lower = sigma_matrix(c.coboundary(p), s, prime);
    const FFMatrix upper = sigma_matrix(c.coboundary(p + 1), s, prime);
    if (!(upper * lower).is_zero()) return false;
  }
  return true;
}

EquivariantComplex cayley_complex(const Presentation& presentation,
                                  const std::optional<SoficApproximation>& validation) {
  const auto& alphabet = presentation.alphabet;
  const std::size_t gens = alphabet.rank();
  const std::size_t rels = presentation.relators.size();
  GroupRingMatrix fox(gens, rels);
  for (std::uint32_t g = 0; g < gens; ++g)
    for (std::size_t k = 0; k < rels; ++k) fox.at(g, k) = fox_derivative(presentation.relators[k], g);

  std::string description = "presentation complex <" + alphabet.names() + " |";
  for (std::size_t k = 0; k < rels; ++k)
    description += (k ? ", " : " ") + format_word(presentation.relators[k], alphabet);
  description += " >";

  auto build = [&](GroupRingMatrix d2) {
    return EquivariantComplex(alphabet, {1, gens, rels}, {ow_matrix(alphabet), std::move(d2)}, description);
  };

  std::optional<SoficApproximation> level = validation;
  if (!level) level = find_validation_level(presentation);
  if (!level) {
    auto c = build(fox.involuted());
    c.set_convention("involuted Fox derivatives (no validation level found)");
    return c;
  }
  if (!level->is_homomorphism()) throw NotHomomorphism("validation level must be a homomorphism");
  auto involuted = build(fox.involuted());
  if (composite_zero(involuted, *level, kCheckPrime)) {
    involuted.set_convention("involuted Fox derivatives, validated at N=" + std::to_string(level->size()));
    return involuted;
  }
  auto plain = build(fox);
  if (composite_zero(plain, *level, kCheckPrime)) {
    plain.set_convention("plain Fox derivatives, validated at N=" + std::to_string(level->size()));
    return plain;
  }
  throw InvariantViolation("no delta^2 convention satisfies delta^2 o delta^1 = 0 for " + description);
}

RealizedLevel realize(const EquivariantComplex& c, const SoficApproximation& s, std::uint32_t prime) {
  RealizedLevel out;
  out.level = s.level();
  out.size = s.size();
  out.prime = prime;
  for (std::size_t p = 1; p <= c.dimension(); ++p) {
    out.realizations.push_back(sigma_matrix(c.coboundary(p), s, prime));
    out.ranks.push_back(rank_gf(out.realizations.back()));
  }
  return out;
}

QuotientBetti quotient_betti(const EquivariantComplex& c, const SoficApproximation& s, std::size_t p_dim,
                             std::uint32_t prime, const BettiOptions& options) {
  if (!s.is_homomorphism())
    throw NotHomomorphism("quotient Betti numbers need a homomorphism level; got " + s.provenance());
  if (p_dim > c.dimension()) throw InvalidInput("cohomological degree exceeds complex dimension");
  const std::size_t n = s.size();
  QuotientBetti out;
  const std::size_t cochains = c.orbit_count(p_dim) * n;

  // The incoming rank is read off the transposed realization (row rank), so
  // it does not share an elimination with kernel counts of the same matrix.
  if (options.finite_field) {
    if (c.has_coboundary(p_dim))
      out.rank_prev = rank_gf(sigma_matrix(c.coboundary(p_dim), s, prime).transposed()).rank;
    out.kernel_next = c.has_coboundary(p_dim + 1)
                          ? rank_gf(sigma_matrix(c.coboundary(p_dim + 1), s, prime)).kernel_dim
                          : cochains;
    if (out.kernel_next < out.rank_prev) throw InvariantViolation("image of delta^p is larger than ker delta^{p+1}");
    out.dim_ffp = out.kernel_next - out.rank_prev;
  }

  if (options.rational) {
    std::size_t rank_prev = 0, kernel_next = cochains;
    bool certain = true;
    if (c.has_coboundary(p_dim)) {
      const auto r = rank_q(sigma_matrix_integer(c.coboundary(p_dim), s).transposed(), options.prime_count,
                            options.exact_limit);
      rank_prev = r.rank;
      certain = certain && r.certain;
    }
    if (c.has_coboundary(p_dim + 1)) {
      const auto r = rank_q(sigma_matrix_integer(c.coboundary(p_dim + 1), s), options.prime_count,
                            options.exact_limit);
      kernel_next = cochains - r.rank;
      certain = certain && r.certain;
    }
    out.dim_q = kernel_next - rank_prev;
    out.q_certain = certain;
  }
  return out;
}

}  // namespace soficlab
