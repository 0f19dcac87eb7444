#include <doctest.h>

#include <random>

#include "soficlab/complex.hpp"
#include "soficlab/error.hpp"

using namespace soficlab;

namespace {

GroupRingMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t rank) {
  GroupRingMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (int k = 0; k < 3; ++k) {
        std::vector<Letter> letters;
        for (std::size_t l = rng() % 3; l > 0; --l)
          letters.push_back({static_cast<std::uint32_t>(rng() % rank), rng() % 2 == 1});
        m.at(i, j).add_term(free_reduce(letters), static_cast<int>(rng() % 5) - 2);
      }
  return m;
}

std::vector<Permutation> random_perms(std::mt19937_64& rng, std::size_t count, std::size_t n) {
  std::vector<Permutation> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_permutation(n, rng));
  return out;
}

}  // namespace

TEST_CASE("sigma matrix examples") {
  const auto f1 = Presentation::parse("a", {});
  const auto s = random_sofic_model(1, 7, 5);
  GroupRingMatrix one(1, 1);
  one.at(0, 0) = GroupRingElement::identity();
  CHECK(sigma_matrix(one, s, 3) == FFMatrix::identity(7, 3));

  const auto trivial = random_sofic_model(1, 1, 0);
  const auto ow1 = ow_matrix(f1.alphabet);
  CHECK(ow1.at(0, 0) == parse_group_ring("1 - A", f1.alphabet));
  CHECK(sigma_matrix(ow1, trivial, 2).is_zero());

  const auto f2 = Presentation::parse("ab", {});
  const auto ow = ow_matrix(f2.alphabet);
  CHECK(ow.cols() == 2);
  CHECK(ow.at(0, 1) == parse_group_ring("1 - B", f2.alphabet));
  const auto level = abelianization_chain(f2, 2, 1).front();
  const auto m = sigma_matrix(ow, level, 2);
  CHECK(m.rows() == 8);
  CHECK(m.cols() == 4);
  CHECK(m.nnz() == 16);
  CHECK(rank_gf(m).rank == 3);
}

TEST_CASE("sigma matrix is an anti-homomorphism") {
  // Right convolution by M1 M2 is convolution by M1 followed by M2.
  std::mt19937_64 rng(12);
  const auto f2 = Presentation::parse("ab", {});
  const auto chain = abelianization_chain(f2, 3, 2);
  for (int t = 0; t < 40; ++t) {
    const std::size_t r = 1 + rng() % 2, k = 1 + rng() % 2, c = 1 + rng() % 2;
    const auto m1 = random_matrix(rng, r, k, 2), m2 = random_matrix(rng, k, c, 2);
    const auto& s = chain[t % 2];
    for (std::uint32_t p : {2u, 5u})
      CHECK(sigma_matrix(m1 * m2, s, p) == sigma_matrix(m2, s, p) * sigma_matrix(m1, s, p));
  }
}

TEST_CASE("cayley complex shapes") {
  const auto f2 = cayley_complex(Presentation::parse("ab", {}));
  CHECK(f2.orbit_counts() == std::vector<std::size_t>{1, 2, 0});
  CHECK(f2.coboundary(2).cols() == 0);
  const auto z2 = cayley_complex(Presentation::parse("ab", {"abAB"}));
  CHECK(z2.orbit_counts() == std::vector<std::size_t>{1, 2, 1});
  const auto g2 = cayley_complex(Presentation::parse("abcd", {"abABcdCD"}));
  CHECK(g2.orbit_counts() == std::vector<std::size_t>{1, 4, 1});
  CHECK(g2.dimension() == 2);
}

TEST_CASE("composite zero on homomorphism levels") {
  std::mt19937_64 rng(6);
  const auto z2p = Presentation::parse("ab", {"abAB"});
  const auto z2 = cayley_complex(z2p);
  for (const auto& s : abelianization_chain(z2p, 2, 3)) CHECK(composite_zero(z2, s, 2));
  for (const auto& s : abelianization_chain(z2p, 3, 2)) CHECK(composite_zero(z2, s, 7));

  const auto g2p = Presentation::parse("abcd", {"abABcdCD"});
  const auto g2 = cayley_complex(g2p);
  for (const auto& s : abelianization_chain(g2p, 2, 2)) CHECK(composite_zero(g2, s, 3));
  // Nonabelian levels through the map a, d -> x and b, c -> y.
  for (int t = 0; t < 5; ++t) {
    const auto xy = random_perms(rng, 2, 9);
    const auto levels = chain_from_quotients(g2p, {{xy[0], xy[1], xy[1], xy[0]}});
    CHECK(composite_zero(g2, levels[0], 2));
  }

  // S3 presentation: composite zero must also hold on its regular representation.
  const auto s3p = Presentation::parse("ab", {"aa", "bbb", "abab"});
  const auto s3 = cayley_complex(s3p);
  CHECK(composite_zero(s3, from_coset_table(todd_coxeter(s3p, {}), 0, "regular"), 11));
}

TEST_CASE("composite zero fails on non-homomorphism levels") {
  const auto z2p = Presentation::parse("ab", {"abAB"});
  const auto z2 = cayley_complex(z2p);
  bool any_nonzero = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) any_nonzero |= !composite_zero(z2, random_sofic_model(2, 10, seed), 2);
  CHECK(any_nonzero);
}

TEST_CASE("explicit complexes validate shapes") {
  const GeneratorAlphabet ab("ab");
  CHECK_THROWS_AS(EquivariantComplex(ab, {1, 2}, {GroupRingMatrix(2, 2)}, "bad"), InvalidInput);
  CHECK_THROWS_AS(EquivariantComplex(ab, {1, 2, 1}, {GroupRingMatrix(1, 2)}, "bad"), InvalidInput);
  CHECK_NOTHROW(EquivariantComplex(ab, {1, 2}, {ow_matrix(ab)}, "graph"));
}

TEST_CASE("quotient betti numbers") {
  const auto f2p = Presentation::parse("ab", {});
  const auto f2 = cayley_complex(f2p);
  for (const auto& s : abelianization_chain(f2p, 2, 3)) {
    const auto b = quotient_betti(f2, s, 1, 2);
    CHECK(b.dim_ffp == s.size() + 1);
    CHECK(b.dim_q == s.size() + 1);
    CHECK(quotient_betti(f2, s, 0, 2).dim_ffp == 1);
  }

  const auto z2p = Presentation::parse("ab", {"abAB"});
  const auto z2 = cayley_complex(z2p);
  for (const auto& s : abelianization_chain(z2p, 2, 3)) {
    CHECK(quotient_betti(z2, s, 0, 2).dim_ffp == 1);
    CHECK(quotient_betti(z2, s, 1, 2).dim_ffp == 2);
    CHECK(quotient_betti(z2, s, 2, 2).dim_ffp == 1);
    CHECK(quotient_betti(z2, s, 1, 5).dim_q == 2);
  }

  const auto g2p = Presentation::parse("abcd", {"abABcdCD"});
  const auto g2 = cayley_complex(g2p);
  for (const auto& s : abelianization_chain(g2p, 2, 1)) {
    const std::size_t n = s.size();
    const auto h0 = quotient_betti(g2, s, 0, 3).dim_ffp;
    const auto h1 = quotient_betti(g2, s, 1, 3).dim_ffp;
    const auto h2 = quotient_betti(g2, s, 2, 3).dim_ffp;
    CHECK(h1 == 2 * n + 2);
    // Euler characteristic of the quotient surface: N - 4N + N = -2N.
    CHECK(static_cast<long>(h0) - static_cast<long>(h1) + static_cast<long>(h2) == -2 * static_cast<long>(n));
  }

  CHECK_THROWS_AS(quotient_betti(z2, random_sofic_model(2, 4, 1), 1, 2), NotHomomorphism);
  CHECK_THROWS_AS(quotient_betti(z2, abelianization_chain(z2p, 2, 1)[0], 3, 2), InvalidInput);
}

TEST_CASE("torsion is visible only over finite fields") {
  // <a | a^2> at the trivial level: the quotient is the projective plane.
  const auto p = Presentation::parse("a", {"aa"});
  const auto c = cayley_complex(p);
  const auto s = chain_from_quotients(p, {{Permutation(1)}}).front();
  const auto b2 = quotient_betti(c, s, 2, 2);
  CHECK(b2.dim_ffp == 1);
  CHECK(b2.dim_q == 0);
  CHECK(quotient_betti(c, s, 2, 3).dim_ffp == 0);
  CHECK(quotient_betti(c, s, 1, 2).dim_ffp == 1);
  CHECK(quotient_betti(c, s, 1, 2).dim_q == 0);
}

TEST_CASE("realize") {
  const auto z2p = Presentation::parse("ab", {"abAB"});
  const auto z2 = cayley_complex(z2p);
  const auto s = abelianization_chain(z2p, 2, 2).back();
  const auto r = realize(z2, s, 2);
  REQUIRE(r.ranks.size() == 2);
  CHECK(r.ranks[0].rank == s.size() - 1);
  CHECK(r.ranks[1].rank == s.size() - 1);
  for (std::size_t p = 0; p < 2; ++p) CHECK(r.ranks[p].rank + r.ranks[p].kernel_dim == r.realizations[p].cols());
}
