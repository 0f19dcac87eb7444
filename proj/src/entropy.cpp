#include "soficlab/entropy.hpp"

#include <algorithm>
#include <cctype>

#include "soficlab/error.hpp"

namespace soficlab {

SubshiftSpec::SubshiftSpec(Kind kind, std::uint32_t prime, std::size_t components,
                           std::optional<GroupRingMatrix> matrix, std::string label)
    : kind_(kind), prime_(prime), components_(components), matrix_(std::move(matrix)), label_(std::move(label)) {
  if (!is_prime(prime_)) throw InvalidInput(std::to_string(prime_) + " is not prime");
  if (components_ == 0) throw InvalidInput("subshift needs at least one coordinate per group element");
}

SubshiftSpec SubshiftSpec::kernel(GroupRingMatrix m, std::uint32_t prime) {
  const std::size_t r = m.rows();
  return SubshiftSpec(Kind::kernel, prime, r, std::move(m), "kernel of convolution matrix");
}

SubshiftSpec SubshiftSpec::ker_coboundary(std::shared_ptr<const EquivariantComplex> complex, std::size_t dim,
                                          std::uint32_t prime) {
  if (!complex) throw InvalidInput("ker_coboundary needs a complex");
  if (dim == 0) throw InvalidInput("coboundary degrees start at 1");
  const std::size_t r = complex->orbit_count(dim - 1);
  std::optional<GroupRingMatrix> m;
  if (complex->has_coboundary(dim)) m = complex->coboundary(dim);
  return SubshiftSpec(Kind::ker_coboundary, prime, r, std::move(m),
                      "ker delta^" + std::to_string(dim) + " of " + complex->description());
}

SubshiftSpec SubshiftSpec::full_shift(std::size_t components, std::uint32_t prime) {
  return SubshiftSpec(Kind::full_shift, prime, components, std::nullopt,
                      "full shift (GF(" + std::to_string(prime) + ")^" + std::to_string(components) + ")^G");
}

std::string SubshiftSpec::describe() const { return label_; }

LogCount fix_log_count(const SubshiftSpec& x, const SoficApproximation& s) {
  if (!x.matrix()) return {static_cast<std::int64_t>(x.components() * s.size()), x.prime()};
  const RankResult r = rank_gf(sigma_matrix(*x.matrix(), s, x.prime()));
  return {static_cast<std::int64_t>(r.kernel_dim), x.prime()};
}

LogCount image_log_count(const GroupRingMatrix& m, const SoficApproximation& s, std::uint32_t prime) {
  return {static_cast<std::int64_t>(rank_gf(sigma_matrix(m, s, prime)).rank), prime};
}

TailSummary summarize_tail(std::span<const double> values, std::size_t window) {
  TailSummary t;
  t.window = window;
  if (values.empty()) return t;
  const std::size_t w = std::min(std::max<std::size_t>(window, 1), values.size());
  const auto tail = values.subspan(values.size() - w);
  t.limsup = *std::max_element(tail.begin(), tail.end());
  t.liminf = *std::min_element(tail.begin(), tail.end());
  return t;
}

EntropySequence entropy_sequence(const SubshiftSpec& x, std::span<const SoficApproximation> levels,
                                 std::size_t tail_window) {
  if (levels.empty()) throw InvalidInput("entropy sequence needs at least one level");
  EntropySequence seq;
  seq.prime = x.prime();
  std::vector<double> values;
  for (const auto& s : levels) {
    EntropyRecord rec;
    rec.level = s.level();
    rec.size = s.size();
    rec.log_count = fix_log_count(x, s);
    rec.normalized = static_cast<double>(rec.log_count.dim) / static_cast<double>(rec.size);
    values.push_back(rec.normalized);
    seq.records.push_back(rec);
  }
  seq.tail = summarize_tail(values, tail_window);
  return seq;
}

DefectRecord yuzvinsky_defect(const EquivariantComplex& c, std::size_t p_dim, const SoficApproximation& s,
                              std::uint32_t prime) {
  if (p_dim == 0) throw InvalidInput("the addition-formula defect is defined for p >= 1");
  if (!s.is_homomorphism()) throw NotHomomorphism("defect needs a homomorphism level; got " + s.provenance());
  auto shared = std::make_shared<const EquivariantComplex>(c);
  DefectRecord d;
  d.level = s.level();
  d.size = s.size();
  d.prime = prime;
  d.kernel_p = static_cast<std::size_t>(fix_log_count(SubshiftSpec::ker_coboundary(shared, p_dim, prime), s).dim);
  d.kernel_next =
      static_cast<std::size_t>(fix_log_count(SubshiftSpec::ker_coboundary(shared, p_dim + 1, prime), s).dim);
  d.cochains_prev = c.orbit_count(p_dim - 1) * s.size();
  d.defect_dim = static_cast<std::int64_t>(d.kernel_p + d.kernel_next) - static_cast<std::int64_t>(d.cochains_prev);
  d.betti_dim = quotient_betti(c, s, p_dim, prime, BettiOptions{.rational = false, .finite_field = true}).dim_ffp;
  if (d.defect_dim != static_cast<std::int64_t>(d.betti_dim))
    throw InvariantViolation("defect " + std::to_string(d.defect_dim) + " != dim H^" + std::to_string(p_dim) + " = " +
                             std::to_string(d.betti_dim) + " at level " + std::to_string(d.level));
  return d;
}

BettiSequence sofic_betti(const EquivariantComplex& c, std::size_t p_dim, std::span<const SoficApproximation> levels,
                          std::uint32_t prime, std::size_t tail_window) {
  BettiSequence seq;
  std::vector<double> values;
  for (const auto& s : levels) {
    const DefectRecord d = yuzvinsky_defect(c, p_dim, s, prime);
    if (d.defect_dim < 0) throw InvariantViolation("negative sofic Betti value");
    seq.points.push_back({d.level, d.size, static_cast<std::size_t>(d.defect_dim), d.normalized(), true});
    values.push_back(d.normalized());
  }
  seq.tail = summarize_tail(values, tail_window);
  return seq;
}

BettiSequence luck_sequence(const EquivariantComplex& c, std::size_t p_dim, std::span<const SoficApproximation> levels,
                            std::size_t tail_window, const BettiOptions& options) {
  BettiSequence seq;
  std::vector<double> values;
  BettiOptions opts = options;
  opts.rational = true;
  opts.finite_field = false;
  for (const auto& s : levels) {
    const QuotientBetti b = quotient_betti(c, s, p_dim, 2, opts);
    const double v = static_cast<double>(*b.dim_q) / static_cast<double>(s.size());
    seq.points.push_back({s.level(), s.size(), *b.dim_q, v, b.q_certain});
    values.push_back(v);
  }
  seq.tail = summarize_tail(values, tail_window);
  return seq;
}

namespace {

std::optional<std::int64_t> parse_suffix(const std::string& tag, const std::string& prefix) {
  if (tag.size() <= prefix.size() || tag.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  const std::string rest = tag.substr(prefix.size());
  if (!std::all_of(rest.begin(), rest.end(), [](unsigned char ch) { return std::isdigit(ch); })) return std::nullopt;
  if (rest.size() > 6) return std::nullopt;
  return std::stoll(rest);
}

}  // namespace

CostBounds cost_bounds_report(const std::string& group_tag, std::uint32_t prime) {
  if (!is_prime(prime)) throw InvalidInput(std::to_string(prime) + " is not prime");
  CostBounds b;
  b.group = group_tag;
  b.prime = prime;
  if (auto r = parse_suffix(group_tag, "F"); r && *r >= 1) {
    b.beta1 = *r - 1;
    b.cost_sup = *r;
  } else if (auto d = parse_suffix(group_tag, "Z^"); d && *d >= 1) {
    b.beta1 = 0;
    b.cost_sup = 1;
  } else if (auto d2 = parse_suffix(group_tag, "Z"); d2 && *d2 >= 1) {
    b.beta1 = 0;
    b.cost_sup = 1;
  } else if (auto g = parse_suffix(group_tag, "surface"); g && *g >= 1) {
    // Genus 1 is Z^2 (fixed price 1); genus g >= 2 has beta1 = 2g - 2 and
    // cost 2g - 1.
    b.beta1 = *g == 1 ? 0 : 2 * *g - 2;
    b.cost_sup = *g == 1 ? 1 : 2 * *g - 1;
  } else {
    throw UnknownGroup("no reference values for group \"" + group_tag + "\"");
  }
  return b;
}

}  // namespace soficlab
