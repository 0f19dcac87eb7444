// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "soficlab/cli.hpp"
#include "soficlab/complex.hpp"
#include "soficlab/entropy.hpp"
#include "soficlab/error.hpp"
#include "soficlab/oracle.hpp"

using namespace soficlab;

namespace {

// Tolerances, in units of log p.
constexpr double kF2TailTol = 0.01;
constexpr double kZ2DefectTol = 0.02;
constexpr double kZ2ImageTol = 0.02;
constexpr std::size_t kZ2MinN = 100;
constexpr double kGenus2Tol = 0.05;
constexpr std::size_t kGenus2MinN = 200;
constexpr double kF2TimeBudget = 30.0;
constexpr std::size_t kF2TimedN = 4096;
constexpr std::size_t kOracleInstances = 200;
constexpr double kOracleTimeBudget = 60.0;
constexpr std::size_t kRankNullityInstances = 100;
constexpr std::size_t kFoxInstances = 500;
constexpr double kFarberTol = 0.05;
constexpr std::size_t kFarberWordLength = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Experiment {
  std::string label;
  Presentation presentation;
  EquivariantComplex complex;
  std::vector<SoficApproximation> levels;
  std::uint32_t prime;
};

Experiment from_config(const std::string& file, const std::string& label) {
  auto cfg = cli::load_config(std::string(SOFICLAB_CONFIG_DIR) + "/" + file);
  auto pres = Presentation::parse(cfg.generators, cfg.relators);
  auto complex = cli::build_complex(cfg, pres);
  auto levels = cli::build_chain(cfg, pres);
  return {label, std::move(pres), std::move(complex), std::move(levels), cfg.prime};
}

Experiment free_group(std::size_t rank, std::uint32_t prime, std::uint64_t seed) {
  const std::string gens = std::string("abcdef").substr(0, rank);
  auto pres = Presentation::parse(gens, {});
  auto complex = cayley_complex(pres);
  std::size_t depth = 0;
  for (std::size_t n = std::size_t{1} << rank; n <= 4096; n <<= rank) ++depth;
  auto levels = abelianization_chain(pres, 2, depth);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Permutation>> images;
  for (std::size_t n : {500, 1000}) {
    std::vector<Permutation> perms;
    for (std::size_t g = 0; g < rank; ++g) perms.push_back(random_permutation(n, rng));
    images.push_back(std::move(perms));
  }
  for (auto& s : chain_from_quotients(pres, images, levels.size() + 1)) levels.push_back(std::move(s));
  return {"F" + std::to_string(rank), std::move(pres), std::move(complex), std::move(levels), prime};
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<const SoficApproximation*> tail_levels(const Experiment& e, std::size_t window, std::size_t min_n = 0) {
  std::vector<const SoficApproximation*> out;
  for (std::size_t k = e.levels.size() >= window ? e.levels.size() - window : 0; k < e.levels.size(); ++k)
    if (e.levels[k].size() >= min_n) out.push_back(&e.levels[k]);
  return out;
}

// 1. Ornstein-Weiss for F2.
Check criterion1(const Experiment& f2) {
  Check c;
  const auto ow = ow_matrix(f2.presentation.alphabet);
  auto shared = std::make_shared<const EquivariantComplex>(f2.complex);
  const auto top = SubshiftSpec::ker_coboundary(shared, 2, 2);
  std::size_t max_n = 0;
  for (const auto& s : f2.levels) {
    const std::string at = " at N=" + std::to_string(s.size());
    const auto n = static_cast<std::int64_t>(s.size());
    max_n = std::max(max_n, s.size());
    c.expect(fix_log_count(SubshiftSpec::kernel(ow, 2), s).dim == 1, "dim ker OW != 1" + at);
    c.expect(fix_log_count(top, s).dim == 2 * n, "ker delta^2 != 2N" + at);
    const auto d = yuzvinsky_defect(f2.complex, 1, s, 2);
    c.expect(d.defect_dim == n + 1, "defect != N+1" + at);
  }
  c.expect(max_n >= 1024, "chain does not reach N >= 1024");
  const auto seq = sofic_betti(f2.complex, 1, f2.levels, 2, kDefaultTailWindow);
  c.expect(std::abs(seq.tail.limsup - 1.0) <= kF2TailTol && std::abs(seq.tail.liminf - 1.0) <= kF2TailTol,
           "tail not within tolerance of log 2");
  c.note("tail defect/(N log 2) in [" + fmt_double(seq.tail.liminf) + ", " + fmt_double(seq.tail.limsup) + "]");

  const SoficApproximation* timed = nullptr;
  for (const auto& s : f2.levels)
    if (s.size() == kF2TimedN) timed = &s;
  c.expect(timed != nullptr, "no level with N = 4096");
  if (timed) {
    const auto t0 = Clock::now();
    const auto m = sigma_matrix(ow, *timed, 2);
    const auto packed = rank_gf(m, RankMethod::bitpacked);
    const double t_packed = seconds_since(t0);
    const auto t1 = Clock::now();
    const auto d = yuzvinsky_defect(f2.complex, 1, *timed, 2);
    const double t_level = seconds_since(t1);
    c.expect(packed.kernel_dim == 1, "bit-packed kernel dim != 1 at N=4096");
    c.expect(d.defect_dim == static_cast<std::int64_t>(kF2TimedN) + 1, "defect at N=4096");
    c.expect(t_packed < kF2TimeBudget, "bit-packed rank took " + fmt_double(t_packed) + " s");
    c.expect(t_level < kF2TimeBudget, "defect level took " + fmt_double(t_level) + " s");
    c.note("N=4096: bit-packed rank " + fmt_double(t_packed) + " s, full defect level " + fmt_double(t_level) + " s");
  }
  return c;
}

// 2. Free groups: ker delta^2 = everything, r log p, matching both cost bounds.
Check criterion2(const std::vector<Experiment>& free_groups) {
  Check c;
  for (const auto& e : free_groups) {
    const std::size_t r = e.presentation.alphabet.rank();
    auto shared = std::make_shared<const EquivariantComplex>(e.complex);
    const auto spec = SubshiftSpec::ker_coboundary(shared, 2, e.prime);
    const auto bounds = cost_bounds_report(e.label, e.prime);
    c.expect(bounds.lower() == bounds.upper(), e.label + ": cost bounds differ");
    c.expect(bounds.lower() == LogCount{static_cast<std::int64_t>(r), e.prime}, e.label + ": lower bound != r log p");
    const auto seq = entropy_sequence(spec, e.levels);
    for (const auto& rec : seq.records) {
      c.expect(rec.log_count.dim == static_cast<std::int64_t>(r * rec.size),
               e.label + ": log count != rN at N=" + std::to_string(rec.size));
      c.expect(rec.log_count.dim == bounds.lower().dim * static_cast<std::int64_t>(rec.size),
               e.label + ": normalized entropy off the cost bound");
    }
    c.note(e.label + " over GF(" + std::to_string(e.prime) + "): " + std::to_string(seq.records.size()) + " levels");
  }
  return c;
}

// 3. Z^2: defect 2, image entropy close to log p.
Check criterion3(const Experiment& z2) {
  Check c;
  const auto ow = ow_matrix(z2.presentation.alphabet);
  auto shared = std::make_shared<const EquivariantComplex>(z2.complex);
  std::size_t tail_count = 0;
  for (std::uint32_t p : {2u, z2.prime}) {
    for (const auto& s : z2.levels) {
      const std::string at = " at N=" + std::to_string(s.size()) + ", p=" + std::to_string(p);
      const auto d = yuzvinsky_defect(z2.complex, 1, s, p);
      c.expect(d.defect_dim == 2, "defect != 2" + at);
      c.expect(fix_log_count(SubshiftSpec::ker_coboundary(shared, 2, p), s).dim ==
                   static_cast<std::int64_t>(s.size()) + 1,
               "ker delta^2 != N+1" + at);
      if (s.size() < kZ2MinN) continue;
      ++tail_count;
      c.expect(d.normalized() < kZ2DefectTol, "defect/N not below tolerance" + at);
      const double image = static_cast<double>(image_log_count(ow, s, p).dim) / static_cast<double>(s.size());
      c.expect(std::abs(image - 1.0) <= kZ2ImageTol, "image entropy off log p" + at);
    }
  }
  c.expect(tail_count > 0, "no levels with N >= 100");
  c.note("deepest N=" + std::to_string(z2.levels.back().size()) + " (" + z2.levels.back().provenance() + ")");
  return c;
}

// 4. Genus-2 surface group: dim H^1 = 2N + 2, confirmed by Euler characteristic.
Check criterion4(const Experiment& g2) {
  Check c;
  std::vector<SoficApproximation> tail;
  for (const auto& s : g2.levels) {
    const std::string at = " at N=" + std::to_string(s.size());
    if (s.orbit_count() != 1) {
      c.note("skipped disconnected level" + at);
      continue;
    }
    const auto n = static_cast<long>(s.size());
    const BettiOptions gf{.rational = false};
    const long h0 = static_cast<long>(quotient_betti(g2.complex, s, 0, g2.prime, gf).dim_ffp);
    const long h1 = static_cast<long>(quotient_betti(g2.complex, s, 1, g2.prime, gf).dim_ffp);
    const long h2 = static_cast<long>(quotient_betti(g2.complex, s, 2, g2.prime, gf).dim_ffp);
    const auto& oc = g2.complex.orbit_counts();
    const long euler = n * (static_cast<long>(oc[0]) - static_cast<long>(oc[1]) + static_cast<long>(oc[2]));
    c.expect(h1 == 2 * n + 2, "dim H^1 != 2N+2" + at);
    c.expect(h0 - h1 + h2 == euler, "Betti numbers do not sum to the Euler characteristic" + at);
    c.expect(h0 == 1 && h2 == 1, "H^0 or H^2 of the quotient surface is not 1" + at);
    if (s.size() >= kGenus2MinN) tail.push_back(s);
  }
  c.expect(!tail.empty(), "no levels with N >= 200");
  const auto seq = sofic_betti(g2.complex, 1, tail, g2.prime, tail.size());
  c.expect(std::abs(seq.tail.limsup - 2.0) <= kGenus2Tol && std::abs(seq.tail.liminf - 2.0) <= kGenus2Tol,
           "sofic Betti tail not within tolerance of 2");
  c.note("tail dim H^1/N over N >= 200 in [" + fmt_double(seq.tail.liminf) + ", " + fmt_double(seq.tail.limsup) +
         "]");
  return c;
}

// 5. Rational sequences agree with the finite-field ones and approach beta1.
Check criterion5(const std::vector<std::pair<const Experiment*, std::pair<double, double>>>& cases) {
  Check c;
  for (const auto& [e, target] : cases) {
    const auto [beta1, tol] = target;
    const auto q = luck_sequence(e->complex, 1, e->levels);
    const auto f = sofic_betti(e->complex, 1, e->levels, e->prime);
    std::size_t certain = 0;
    for (std::size_t k = 0; k < e->levels.size(); ++k) {
      c.expect(q.points[k].dim == f.points[k].dim,
               e->label + ": dim_Q H^1 != dim_GF(p) H^1 at N=" + std::to_string(e->levels[k].size()));
      certain += q.points[k].certain ? 1 : 0;
    }
    std::vector<double> tail_values;
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const bool in_tail = k + kDefaultTailWindow >= q.points.size();
      if (in_tail) tail_values.push_back(q.points[k].normalized);
    }
    for (double v : tail_values) c.expect(std::abs(v - beta1) <= tol, e->label + ": rational tail off beta1");
    c.note(e->label + ": " + std::to_string(e->levels.size()) + " levels, " + std::to_string(certain) +
           " confirmed by exact elimination, tail " + fmt_double(q.tail.liminf) + ".." + fmt_double(q.tail.limsup));
  }
  return c;
}

// 6. Brute-force periodic point counts equal p^dim ker.
Check criterion6() {
  Check c;
  std::mt19937_64 rng(0x0c0ffee);
  const auto f2 = Presentation::parse("ab", {});
  const auto words = enumerate_words(2, 2);
  std::vector<Word> support{Word{}};
  support.insert(support.end(), words.begin(), words.end());
  const std::uint32_t primes[] = {2, 3, 5};
  std::size_t hom = 0, random_levels = 0;
  const auto t0 = Clock::now();
  for (std::size_t t = 0; t < kOracleInstances; ++t) {
    const std::uint32_t p = primes[t % 3];
    const std::size_t r = 1 + rng() % 2, s = 1 + rng() % 2;
    GroupRingMatrix m(r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        const std::size_t terms = rng() % 4;
        for (std::size_t k = 0; k < terms; ++k) m.at(i, j).add_term(support[rng() % support.size()], rng() % p);
      }
    // Largest N <= 8 with p^(rN) inside the oracle cap.
    std::size_t n_max = 8;
    while (std::pow(static_cast<double>(p), static_cast<double>(r * n_max)) > static_cast<double>(kDefaultOracleCap))
      --n_max;
    const std::size_t n = 1 + rng() % n_max;
    SoficApproximation level = [&] {
      if (t % 2 == 0) {
        ++random_levels;
        return random_sofic_model(2, n, rng());
      }
      ++hom;
      std::vector<Permutation> perms{random_permutation(n, rng), random_permutation(n, rng)};
      return chain_from_quotients(f2, {perms}).front();
    }();
    try {
      const auto check = cross_check_kernel(m, level, p);
      c.expect(check.linear_count == check.brute_count, "counts differ");
    } catch (const OracleMismatch& e) {
      c.expect(false, std::string("instance ") + std::to_string(t) + ": " + e.what());
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < kOracleTimeBudget, "oracle instances took " + fmt_double(elapsed) + " s");
  c.note(std::to_string(kOracleInstances) + " instances (" + std::to_string(hom) + " homomorphism, " +
         std::to_string(random_levels) + " random levels) in " + fmt_double(elapsed) + " s");
  return c;
}

// 7. Composite-zero, rank-nullity conservation, Fox identity.
Check criterion7(const std::vector<const Experiment*>& experiments) {
  Check c;
  std::size_t composite_checks = 0;
  for (const auto* e : experiments)
    for (const auto& s : e->levels) {
      if (!s.is_homomorphism()) continue;
      for (std::uint32_t p : {2u, 3u, 2147483647u}) {
        ++composite_checks;
        c.expect(composite_zero(e->complex, s, p), e->label + ": composite nonzero at N=" + std::to_string(s.size()));
      }
    }

  std::mt19937_64 rng(0x5eed);
  for (std::size_t t = 0; t < kRankNullityInstances; ++t) {
    const std::size_t rank = 1 + rng() % 3;
    const GeneratorAlphabet al(std::string("abc").substr(0, rank));
    const std::size_t r = 1 + rng() % 3, s = 1 + rng() % 3;
    GroupRingMatrix m(r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = rng() % 4; k > 0; --k) {
          std::vector<Letter> letters;
          for (std::size_t l = rng() % 4; l > 0; --l)
            letters.push_back({static_cast<std::uint32_t>(rng() % rank), rng() % 2 == 1});
          m.at(i, j).add_term(free_reduce(letters), static_cast<int>(rng() % 11) - 5);
        }
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5, 7, 101}[rng() % 5];
    const std::size_t n = 1 + rng() % 300;
    const auto level = random_sofic_model(rank, n, rng());
    const auto kernel = fix_log_count(SubshiftSpec::kernel(m, p), level);
    const auto image = image_log_count(m, level, p);
    c.expect(kernel.dim + image.dim == static_cast<std::int64_t>(r * n), "rank-nullity broken");
  }

  for (std::size_t t = 0; t < kFoxInstances; ++t) {
    const std::size_t rank = 1 + rng() % 4;
    std::vector<Letter> letters;
    for (std::size_t l = rng() % 13; l > 0; --l)
      letters.push_back({static_cast<std::uint32_t>(rng() % rank), rng() % 2 == 1});
    const Word w = free_reduce(letters);
    GroupRingElement sum;
    for (std::uint32_t g = 0; g < rank; ++g)
      sum = sum + fox_derivative(w, g) *
                      (GroupRingElement::monomial(Word::generator(g), 1) - GroupRingElement::identity());
    c.expect(sum == GroupRingElement::monomial(w, 1) - GroupRingElement::identity(), "Fox identity broken");
  }
  c.note(std::to_string(composite_checks) + " composite-zero checks, " + std::to_string(kRankNullityInstances) +
         " rank-nullity, " + std::to_string(kFoxInstances) + " Fox identities");
  return c;
}

// 8. Farber condition at the deepest level of each chain.
Check criterion8(const std::vector<const Experiment*>& experiments) {
  Check c;
  for (const auto* e : experiments) {
    const auto& s = e->levels.back();
    const auto words = enumerate_words(s.rank(), kFarberWordLength);
    std::size_t trivial = 0;
    double worst = 0;
    for (const auto& w : words) {
      if (sigma_of_word(s, w).is_identity()) {
        ++trivial;
        continue;
      }
      const double f = farber_defect(s, w);
      worst = std::max(worst, f);
      c.expect(f < kFarberTol, e->label + ": word " + format_word(w, e->presentation.alphabet) + " fixes " +
                                   fmt_double(f) + " of N=" + std::to_string(s.size()));
    }
    c.note(e->label + " N=" + std::to_string(s.size()) + ": max fraction " + fmt_double(worst) + ", " +
           std::to_string(trivial) + " of " + std::to_string(words.size()) + " words act trivially");
  }
  return c;
}

int report(int number, const std::string& title, const std::function<Check()>& run) {
  Check c;
  const auto t0 = Clock::now();
  try {
    c = run();
  } catch (const std::exception& e) {
    c.ok = false;
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %d: %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", number, title.c_str(), seconds_since(t0));
  for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
  for (const auto& f : c.failures) std::printf("    failed: %s\n", f.c_str());
  std::fflush(stdout);
  return c.ok ? 0 : 1;
}

}  // namespace

int main() {
  const Experiment f2 = from_config("f2_ow.toml", "F2");
  const Experiment z2 = from_config("z2.toml", "Z^2");
  const Experiment g2 = from_config("genus2.toml", "surface2");
  std::vector<Experiment> free_groups;
  free_groups.push_back(free_group(2, 3, 1));
  free_groups.push_back(free_group(3, 2, 2));
  free_groups.push_back(free_group(4, 5, 3));
  free_groups.push_back(from_config("f3_tree.toml", "F3"));

  int failures = 0;
  failures += report(1, "Ornstein-Weiss for F2", [&] { return criterion1(f2); });
  failures += report(2, "free groups: entropy of ker delta^2 equals both cost bounds",
                     [&] { return criterion2(free_groups); });
  failures += report(3, "Z^2 fixed price 1", [&] { return criterion3(z2); });
  failures += report(4, "genus-2 surface group", [&] { return criterion4(g2); });
  failures += report(5, "rational sequences match GF(p) and approach beta1", [&] {
    return criterion5({{&f2, {1.0, kF2TailTol}},
                       {&free_groups[0], {1.0, kF2TailTol}},
                       {&z2, {0.0, kZ2DefectTol}},
                       {&g2, {2.0, kGenus2Tol}}});
  });
  failures += report(6, "oracle equivalence", [] { return criterion6(); });
  std::vector<const Experiment*> all{&f2, &z2, &g2};
  for (const auto& e : free_groups) all.push_back(&e);
  failures += report(7, "structural invariants", [&] { return criterion7(all); });
  failures += report(8, "Farber defect at the deepest levels", [&] { return criterion8(all); });
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
