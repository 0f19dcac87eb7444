#include "soficlab/sofic.hpp"

#include <deque>
#include <limits>

#include "soficlab/error.hpp"

namespace soficlab {

SoficApproximation::SoficApproximation(std::size_t level, std::vector<Permutation> perms, bool is_homomorphism,
                                       std::string provenance)
    : level_(level),
      size_(perms.empty() ? 0 : perms.front().size()),
      perms_(std::move(perms)),
      is_homomorphism_(is_homomorphism),
      provenance_(std::move(provenance)) {
  if (perms_.empty()) throw InvalidInput("sofic approximation needs at least one generator");
  if (size_ == 0) throw InvalidInput("sofic approximation needs at least one point");
  inverses_.reserve(perms_.size());
  for (const auto& p : perms_) {
    if (p.size() != size_) throw InvalidInput("generator permutations have different degrees");
    inverses_.push_back(p.inverse());
  }
}

std::uint32_t SoficApproximation::apply(const Word& w, std::uint32_t point) const {
  const auto letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) point = apply(*it, point);
  return point;
}

SoficApproximation SoficApproximation::relabeled(const Permutation& relabel) const {
  const Permutation inv = relabel.inverse();
  std::vector<Permutation> perms;
  perms.reserve(perms_.size());
  for (const auto& p : perms_) perms.push_back(relabel * p * inv);
  return SoficApproximation(level_, std::move(perms), is_homomorphism_, provenance_ + " (relabeled)");
}

std::size_t SoficApproximation::orbit_count() const {
  std::vector<bool> seen(size_, false);
  std::size_t orbits = 0;
  std::deque<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < size_; ++start) {
    if (seen[start]) continue;
    ++orbits;
    seen[start] = true;
    queue.push_back(start);
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      for (std::size_t g = 0; g < perms_.size(); ++g)
        for (std::uint32_t y : {perms_[g](x), inverses_[g](x)})
          if (!seen[y]) {
            seen[y] = true;
            queue.push_back(y);
          }
    }
  }
  return orbits;
}

Permutation sigma_of_word(const SoficApproximation& s, const Word& w) {
  std::vector<std::uint32_t> images(s.size());
  for (std::uint32_t i = 0; i < s.size(); ++i) images[i] = s.apply(w, i);
  return Permutation(std::move(images));
}

double farber_defect(const SoficApproximation& s, const Word& w) {
  std::size_t fixed = 0;
  for (std::uint32_t i = 0; i < s.size(); ++i) fixed += s.apply(w, i) == i;
  return static_cast<double>(fixed) / static_cast<double>(s.size());
}

SoficApproximation from_coset_table(const CosetTable& table, std::size_t level, std::string provenance) {
  // sigma(a)(G_n u) = G_n u a^{-1}: read the inverse-letter column.
  std::vector<Permutation> perms;
  for (std::uint32_t g = 0; g < table.rank(); ++g) {
    std::vector<std::uint32_t> images(table.index());
    for (std::uint32_t c = 0; c < table.index(); ++c) images[c] = table.at(c, Letter{g, true});
    perms.emplace_back(std::move(images));
  }
  return SoficApproximation(level, std::move(perms), true, std::move(provenance));
}

namespace {

void check_relators(const Presentation& presentation, const SoficApproximation& s) {
  for (const Word& r : presentation.relators)
    for (std::uint32_t i = 0; i < s.size(); ++i)
      if (s.apply(r, i) != i) throw RelatorViolated(s.level(), format_word(r, presentation.alphabet));
}

// Restriction of the action to the orbit of point 0, numbered breadth-first.
std::vector<Permutation> restrict_to_base_orbit(const std::vector<Permutation>& perms) {
  const std::size_t n = perms.front().size();
  std::vector<std::int64_t> label(n, -1);
  std::vector<std::uint32_t> order{0};
  label[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto x = order[head];
    for (const auto& p : perms) {
      const auto y = p(x);
      if (label[y] < 0) {
        label[y] = static_cast<std::int64_t>(order.size());
        order.push_back(y);
      }
    }
  }
  // Orbits of a finite permutation group are closed under the forward maps.
  std::vector<Permutation> out;
  for (const auto& p : perms) {
    std::vector<std::uint32_t> images(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) images[k] = static_cast<std::uint32_t>(label[p(order[k])]);
    out.emplace_back(std::move(images));
  }
  return out;
}

}  // namespace

std::vector<SoficApproximation> chain_from_quotients(const Presentation& presentation,
                                                     const std::vector<std::vector<Permutation>>& images,
                                                     std::size_t first_level) {
  std::vector<SoficApproximation> out;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const std::size_t level = first_level + k;
    if (images[k].size() != presentation.alphabet.rank())
      throw InvalidInput("level " + std::to_string(level) + " supplies " + std::to_string(images[k].size()) +
                         " generator images, expected " + std::to_string(presentation.alphabet.rank()));
    SoficApproximation full(level, images[k], true, "quotient");
    check_relators(presentation, full);
    auto restricted = restrict_to_base_orbit(images[k]);
    out.emplace_back(level, std::move(restricted), true,
                     "quotient of degree " + std::to_string(full.size()) + ", base orbit");
  }
  return out;
}

std::vector<SoficApproximation> abelianization_chain(const Presentation& presentation, std::uint64_t modulus,
                                                     std::size_t levels) {
  if (modulus < 2) throw InvalidInput("abelianization modulus must be at least 2");
  const std::size_t rank = presentation.alphabet.rank();
  std::vector<SoficApproximation> out;
  std::uint64_t m = 1;
  for (std::size_t k = 1; k <= levels; ++k) {
    m *= modulus;
    std::uint64_t size = 1;
    for (std::size_t g = 0; g < rank; ++g) {
      size *= m;
      if (size > (1u << 26)) throw CapExceeded("abelianization level too large");
    }
    // Point x in mixed radix m; generator g translates coordinate g by -1.
    std::vector<Permutation> perms;
    std::uint64_t stride = 1;
    for (std::size_t g = 0; g < rank; ++g) {
      std::vector<std::uint32_t> images(size);
      for (std::uint64_t x = 0; x < size; ++x) {
        const std::uint64_t digit = (x / stride) % m;
        const std::uint64_t moved = (digit + m - 1) % m;
        images[x] = static_cast<std::uint32_t>(x - digit * stride + moved * stride);
      }
      perms.emplace_back(std::move(images));
      stride *= m;
    }
    SoficApproximation s(k, std::move(perms), true,
                         "abelianization mod " + std::to_string(modulus) + "^" + std::to_string(k));
    check_relators(presentation, s);
    out.push_back(std::move(s));
  }
  return out;
}

Permutation random_permutation(std::size_t size, std::mt19937_64& rng) {
  std::vector<std::uint32_t> images(size);
  for (std::uint32_t i = 0; i < size; ++i) images[i] = i;
  for (std::size_t i = size; i > 1; --i) {
    // Unbiased draw from [0, i) by rejection.
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    std::swap(images[i - 1], images[r % bound]);
  }
  return Permutation(std::move(images));
}

SoficApproximation random_sofic_model(std::size_t rank, std::size_t size, std::uint64_t seed, std::size_t level) {
  if (size == 0) throw InvalidInput("random sofic model needs N >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Permutation> perms;
  for (std::size_t g = 0; g < rank; ++g) perms.push_back(random_permutation(size, rng));
  return SoficApproximation(level, std::move(perms), false,
                            "random model N=" + std::to_string(size) + " seed=" + std::to_string(seed));
}

}  // namespace soficlab
