#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "soficlab/cli.hpp"
#include "soficlab/error.hpp"

namespace soficlab::cli {

namespace {

SoficApproximation with_level(const SoficApproximation& s, std::size_t level) {
  std::vector<Permutation> perms;
  for (std::size_t g = 0; g < s.rank(); ++g) perms.push_back(s.generator(g));
  return SoficApproximation(level, std::move(perms), s.is_homomorphism(), s.provenance());
}

std::vector<Permutation> quotient_images(const QuotientLevel& q, const GeneratorAlphabet& alphabet) {
  for (const auto& [name, images] : q.perms)
    if (alphabet.index_of(name) < 0 || name != alphabet.name(static_cast<std::size_t>(alphabet.index_of(name))))
      throw InvalidInput(std::string("quotient_perms names unknown generator '") + name + "'");
  std::vector<Permutation> perms;
  std::size_t size = 0;
  for (std::size_t g = 0; g < alphabet.rank(); ++g) {
    const auto it = q.perms.find(alphabet.name(g));
    if (it == q.perms.end())
      throw InvalidInput(std::string("quotient_perms is missing generator '") + alphabet.name(g) + "'");
    if (g > 0 && it->second.size() != size) throw InvalidInput("quotient_perms permutations differ in size");
    size = it->second.size();
    perms.emplace_back(it->second);
  }
  return perms;
}

// Runs fn(0..n-1) on up to `jobs` threads. The first failure in index order
// is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      if (failed) break;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool needs_complex(ExperimentKind kind, const ExperimentConfig& c) {
  if (kind == ExperimentKind::betti || kind == ExperimentKind::defect || kind == ExperimentKind::luck) return true;
  return c.subshift && c.subshift->kind == SubshiftSpec::Kind::ker_coboundary;
}

std::vector<double> series(const Report& r) {
  std::vector<double> v;
  for (const auto& row : r.rows) {
    const double n = static_cast<double>(row.size);
    switch (r.kind) {
      case ExperimentKind::betti: v.push_back(static_cast<double>(row.dim_h_ffp.value_or(0)) / n); break;
      case ExperimentKind::defect: v.push_back(static_cast<double>(row.defect.value_or(0)) / n); break;
      case ExperimentKind::luck: v.push_back(static_cast<double>(row.dim_h_q.value_or(0)) / n); break;
      default: v.push_back(static_cast<double>(row.dim_ker.value_or(0)) / n); break;
    }
  }
  return v;
}

}  // namespace

std::vector<SoficApproximation> build_chain(const ExperimentConfig& config, const Presentation& presentation) {
  std::vector<SoficApproximation> out;
  for (std::size_t k = 0; k < config.chain.size(); ++k) {
    const auto& entry = config.chain[k];
    if (const auto* a = std::get_if<AbelianizationLevels>(&entry)) {
      for (const auto& s : abelianization_chain(presentation, a->modulus, a->levels))
        out.push_back(with_level(s, out.size() + 1));
    } else if (const auto* q = std::get_if<QuotientLevel>(&entry)) {
      const auto levels = chain_from_quotients(presentation, {quotient_images(*q, presentation.alphabet)},
                                               out.size() + 1);
      out.push_back(levels.front());
    } else if (const auto* sg = std::get_if<SubgroupLevel>(&entry)) {
      std::vector<Word> gens;
      for (const auto& w : sg->generators) gens.push_back(parse_word(w, presentation.alphabet));
      const auto table = todd_coxeter(presentation, gens, config.caps.coset_cap);
      std::string prov = "coset action on <";
      for (std::size_t i = 0; i < sg->generators.size(); ++i) prov += (i ? ", " : "") + sg->generators[i];
      out.push_back(from_coset_table(table, out.size() + 1, prov + ">"));
    } else {
      const auto& r = std::get<RandomLevel>(entry);
      out.push_back(random_sofic_model(presentation.alphabet.rank(), r.size, r.seed.value_or(config.seed + k),
                                       out.size() + 1));
    }
  }
  return out;
}

EquivariantComplex build_complex(const ExperimentConfig& config, const Presentation& presentation) {
  if (config.complex.cayley) {
    auto c = cayley_complex(presentation);
    for (auto d : config.complex.acyclic) c.declare_acyclic(d);
    return c;
  }
  std::vector<GroupRingMatrix> cob;
  for (const auto& rows : config.complex.coboundaries)
    cob.push_back(parse_group_ring_matrix(rows, presentation.alphabet));
  EquivariantComplex c(presentation.alphabet, config.complex.orbit_counts, std::move(cob), "explicit complex");
  for (auto d : config.complex.acyclic) c.declare_acyclic(d);
  return c;
}

Report run_experiment(const ExperimentConfig& config, ExperimentKind kind, std::size_t jobs) {
  const Presentation presentation = Presentation::parse(config.generators, config.relators);
  const auto levels = build_chain(config, presentation);
  const std::uint32_t p = config.prime;

  Report report;
  report.name = config.name;
  report.kind = kind;
  report.prime = p;
  report.dim = config.dim;
  report.tail.window = config.tail;

  if (kind == ExperimentKind::chain_info) {
    const auto words = enumerate_words(presentation.alphabet.rank(), config.max_word_length);
    report.subject = "words of length <= " + std::to_string(config.max_word_length);
    report.chain_rows.resize(levels.size());
    parallel_for(levels.size(), jobs, [&](std::size_t i) {
      const auto& s = levels[i];
      ChainInfoRow row{s.level(), s.size(), s.orbit_count(), s.is_homomorphism(), {}};
      for (const auto& w : words) row.words.push_back({format_word(w, presentation.alphabet), farber_defect(s, w)});
      report.chain_rows[i] = std::move(row);
    });
    return report;
  }

  std::optional<EquivariantComplex> complex;
  if (needs_complex(kind, config)) {
    complex.emplace(build_complex(config, presentation));
    report.subject = complex->description();
  }

  // The matrix whose kernel the entropy and oracle kinds count.
  std::optional<GroupRingMatrix> kernel_matrix;
  std::size_t components = 1;
  if (kind == ExperimentKind::entropy || kind == ExperimentKind::oracle_check) {
    if (!config.subshift) throw InvalidInput("kind " + std::string(to_string(kind)) + " needs a [subshift] table");
    const auto& sx = *config.subshift;
    switch (sx.kind) {
      case SubshiftSpec::Kind::kernel:
        kernel_matrix = parse_group_ring_matrix(sx.matrix, presentation.alphabet);
        components = kernel_matrix->rows();
        report.subject = "kernel of convolution matrix";
        break;
      case SubshiftSpec::Kind::ker_coboundary: {
        const auto spec = SubshiftSpec::ker_coboundary(std::make_shared<const EquivariantComplex>(*complex), sx.dim, p);
        components = spec.components();
        kernel_matrix = spec.matrix();
        report.subject = spec.describe();
        break;
      }
      case SubshiftSpec::Kind::full_shift:
        components = sx.components;
        report.subject = SubshiftSpec::full_shift(components, p).describe();
        break;
    }
    if (components == 0) throw InvalidInput("subshift has no coordinates at this dimension");
  }

  if (kind != ExperimentKind::entropy && kind != ExperimentKind::oracle_check) {
    for (const auto& s : levels)
      if (!s.is_homomorphism())
        throw NotHomomorphism("level " + std::to_string(s.level()) + " (" + s.provenance() +
                              ") is not a homomorphism; " + std::string(to_string(kind)) + " needs chain levels");
  }

  BettiOptions opts;
  opts.rational = config.rational;
  opts.prime_count = config.prime_count;
  opts.exact_limit = config.caps.exact_rank_limit;

  report.rows.resize(levels.size());
  parallel_for(levels.size(), jobs, [&](std::size_t i) {
    const auto& s = levels[i];
    LevelRow row;
    row.level = s.level();
    row.size = s.size();
    row.provenance = s.provenance();
    row.homomorphism = s.is_homomorphism();
    if (complex && s.is_homomorphism() && !composite_zero(*complex, s, p))
      throw InvariantViolation("coboundaries do not compose to zero at level " + std::to_string(s.level()));

    switch (kind) {
      case ExperimentKind::entropy: {
        if (kernel_matrix) {
          const auto r = rank_gf(sigma_matrix(*kernel_matrix, s, p));
          row.dim_ker = r.kernel_dim;
          row.rank = r.rank;
        } else {
          row.dim_ker = components * s.size();
          row.rank = 0;
        }
        break;
      }
      case ExperimentKind::oracle_check: {
        const GroupRingMatrix m = kernel_matrix ? *kernel_matrix : GroupRingMatrix(components, 1);
        const auto check = cross_check_kernel(m, s, p, config.caps.oracle_cap);
        row.dim_ker = check.kernel_dim;
        row.rank = components * s.size() - check.kernel_dim;
        row.linear_count = check.linear_count;
        row.brute_count = check.brute_count;
        break;
      }
      case ExperimentKind::betti: {
        const auto b = quotient_betti(*complex, s, config.dim, p, opts);
        row.dim_ker = b.kernel_next;
        row.rank = b.rank_prev;
        row.dim_h_ffp = b.dim_ffp;
        row.dim_h_q = b.dim_q;
        if (b.dim_q) row.q_certain = b.q_certain;
        break;
      }
      case ExperimentKind::defect: {
        const auto d = yuzvinsky_defect(*complex, config.dim, s, p);
        row.dim_ker = d.kernel_p;
        row.rank = d.cochains_prev - d.kernel_p;
        row.dim_h_ffp = d.betti_dim;
        row.defect = d.defect_dim;
        if (config.rational) {
          BettiOptions q = opts;
          q.finite_field = false;
          const auto b = quotient_betti(*complex, s, config.dim, p, q);
          row.dim_h_q = b.dim_q;
          row.q_certain = b.q_certain;
        }
        break;
      }
      case ExperimentKind::luck: {
        BettiOptions q = opts;
        q.rational = true;
        const auto b = quotient_betti(*complex, s, config.dim, p, q);
        row.dim_ker = b.kernel_next;
        row.rank = b.rank_prev;
        row.dim_h_ffp = b.dim_ffp;
        row.dim_h_q = b.dim_q;
        row.q_certain = b.q_certain;
        break;
      }
      case ExperimentKind::chain_info: break;
    }
    if (row.dim_h_q && row.dim_h_ffp && *row.dim_h_q > *row.dim_h_ffp)
      throw InvariantViolation("rational Betti number exceeds the GF(p) one at level " + std::to_string(s.level()));
    report.rows[i] = std::move(row);
  });

  report.tail = summarize_tail(series(report), config.tail);
  if (config.reference_group) {
    const auto b = cost_bounds_report(*config.reference_group, p);
    if (kind == ExperimentKind::entropy) {
      report.references.push_back({"1 + beta1 (" + b.group + ")", static_cast<double>(b.lower().dim)});
      if (b.upper().dim != b.lower().dim)
        report.references.push_back({"cost_sup (" + b.group + ")", static_cast<double>(b.upper().dim)});
    } else if (kind != ExperimentKind::oracle_check) {
      report.references.push_back({"beta1 (" + b.group + ")", static_cast<double>(b.beta1)});
    }
  }
  return report;
}

}  // namespace soficlab::cli
