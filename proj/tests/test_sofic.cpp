#include <doctest.h>

#include <random>

#include "soficlab/error.hpp"
#include "soficlab/sofic.hpp"

using namespace soficlab;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  std::vector<Letter> letters;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) letters.push_back({static_cast<std::uint32_t>(rng() % rank), rng() % 2 == 1});
  return free_reduce(letters);
}

}  // namespace

TEST_CASE("permutations") {
  const Permutation a(std::vector<std::uint32_t>{1, 2, 0});
  const Permutation b(std::vector<std::uint32_t>{1, 0, 2});
  CHECK((a * b)(0) == a(b(0)));
  CHECK((a * a.inverse()).is_identity());
  CHECK(b.fixed_points() == 1);
  CHECK_THROWS_AS(Permutation(std::vector<std::uint32_t>{0, 0, 1}), InvalidInput);
  CHECK_THROWS_AS(Permutation(std::vector<std::uint32_t>{0, 3}), InvalidInput);
}

TEST_CASE("todd-coxeter on subgroups of F2") {
  const auto f2 = Presentation::parse("ab", {});
  const auto& al = f2.alphabet;
  const std::vector<Word> h{parse_word("aa", al), parse_word("b", al), parse_word("abA", al)};
  const auto t = todd_coxeter(f2, h);
  CHECK(t.index() == 2);
  CHECK(t.is_valid_for(f2));
  const std::vector<Word> all{parse_word("a", al), parse_word("b", al)};
  const auto whole = todd_coxeter(f2, all);
  CHECK(whole.index() == 1);
  CHECK(from_coset_table(whole, 0, "whole").generator(0).is_identity());
}

TEST_CASE("todd-coxeter on Z2") {
  const auto z2 = Presentation::parse("ab", {"abAB"});
  const std::vector<Word> h{parse_word("aaa", z2.alphabet), parse_word("bbb", z2.alphabet)};
  const auto t = todd_coxeter(z2, h);
  CHECK(t.index() == 9);
  CHECK(t.is_valid_for(z2));
  const auto s = from_coset_table(t, 1, "Z2 mod 3");
  CHECK(s.is_homomorphism());
  CHECK(s.orbit_count() == 1);
  for (std::uint32_t x = 0; x < 9; ++x) CHECK(s.apply(parse_word("abAB", z2.alphabet), x) == x);
}

TEST_CASE("todd-coxeter on finite groups") {
  // S3 = <a, b | a^2, b^3, (ab)^2> has order 6.
  const auto s3 = Presentation::parse("ab", {"aa", "bbb", "abab"});
  CHECK(todd_coxeter(s3, {}).index() == 6);
  // <a,b | a^2, b^3, (ab)^5> is A5 and (ab)^4 gives S4.
  const auto a5 = Presentation::parse("ab", {"aa", "bbb", "ababababab"});
  CHECK(todd_coxeter(a5, {}).index() == 60);
  const auto s4 = Presentation::parse("ab", {"aa", "bbb", "abababab"});
  CHECK(todd_coxeter(s4, {}).index() == 24);
}

TEST_CASE("todd-coxeter cap") {
  const auto z2 = Presentation::parse("ab", {"abAB"});
  CHECK_THROWS_AS(todd_coxeter(z2, {}, 500), CapExceeded);
}

TEST_CASE("abelianization chain") {
  const auto f2 = Presentation::parse("ab", {});
  const auto chain = abelianization_chain(f2, 2, 3);
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].size() == 4);
  CHECK(chain[1].size() == 16);
  CHECK(chain[2].size() == 64);
  const auto& al = f2.alphabet;
  CHECK(farber_defect(chain[0], parse_word("a", al)) == 0.0);
  CHECK(farber_defect(chain[0], parse_word("abAB", al)) == 1.0);
  CHECK(farber_defect(chain[0], Word{}) == 1.0);
  CHECK(farber_defect(chain[2], parse_word("aa", al)) == 0.0);
  CHECK(farber_defect(chain[0], parse_word("aa", al)) == 1.0);

  const auto genus2 = Presentation::parse("abcd", {"abABcdCD"});
  CHECK(abelianization_chain(genus2, 2, 1).front().size() == 16);
  const auto bad = Presentation::parse("ab", {"aab"});
  CHECK_THROWS_AS(abelianization_chain(bad, 2, 1), RelatorViolated);
}

TEST_CASE("chains from quotients") {
  const auto z2 = Presentation::parse("ab", {"abAB"});
  const Permutation c3(std::vector<std::uint32_t>{1, 2, 0});
  const Permutation id(3);
  const auto chain = chain_from_quotients(z2, {{c3, id}, {Permutation(1), Permutation(1)}});
  CHECK(chain[0].size() == 3);
  CHECK(chain[0].level() == 1);
  CHECK(chain[1].size() == 1);
  CHECK(chain[1].generator(0).is_identity());
  // Non-commuting images violate the relator.
  const Permutation t(std::vector<std::uint32_t>{1, 0, 2});
  CHECK_THROWS_AS(chain_from_quotients(z2, {{c3, t}}), RelatorViolated);
  // The action is restricted to the orbit of 0.
  const Permutation swap01(std::vector<std::uint32_t>{1, 0, 2, 3});
  const auto sub = chain_from_quotients(Presentation::parse("ab", {}), {{swap01, Permutation(4)}});
  CHECK(sub[0].size() == 2);
}

TEST_CASE("random models") {
  const auto trivial = random_sofic_model(2, 1, 9);
  CHECK(trivial.generator(0).is_identity());
  CHECK(trivial.generator(1).is_identity());
  const auto x = random_sofic_model(2, 8, 42), y = random_sofic_model(2, 8, 42);
  CHECK(x.generator(0) == y.generator(0));
  CHECK(x.generator(1) == y.generator(1));
  CHECK_FALSE(x.is_homomorphism());
  const auto z = random_sofic_model(1, 5, 7);
  CHECK(z.rank() == 1);
  CHECK(is_bijection(z.generator(0).images()));
}

TEST_CASE("sigma is a homomorphism on chain levels") {
  const auto f2 = Presentation::parse("ab", {});
  const auto s = abelianization_chain(f2, 3, 2).back();
  const auto random = random_sofic_model(2, 30, 1);
  std::mt19937_64 rng(17);
  for (const auto* level : {&s, &random}) {
    CHECK(sigma_of_word(*level, Word{}).is_identity());
    CHECK(sigma_of_word(*level, Word::generator(1)) == level->generator(1));
    for (int t = 0; t < 100; ++t) {
      const Word u = random_word(rng, 2, 8), v = random_word(rng, 2, 8);
      CHECK(sigma_of_word(*level, u * v) == sigma_of_word(*level, u) * sigma_of_word(*level, v));
      CHECK(sigma_of_word(*level, u * u.inverse()).is_identity());
    }
  }
}

TEST_CASE("action convention on cosets") {
  // sigma(a)(G_n u) = G_n u a^{-1}: on Z/5 with a acting as -1, sigma(ab) = sigma(a) o sigma(b).
  const auto z = Presentation::parse("a", {"aaaaa"});
  const auto t = todd_coxeter(z, {});
  const auto s = from_coset_table(t, 0, "Z/5");
  for (std::uint32_t x = 0; x < 5; ++x) CHECK(s.apply(Letter{0, false}, x) == t.at(x, Letter{0, true}));
}

TEST_CASE("relabeling") {
  const auto s = random_sofic_model(2, 6, 3);
  const Permutation r(std::vector<std::uint32_t>{3, 0, 5, 1, 2, 4});
  const auto t = s.relabeled(r);
  for (std::uint32_t x = 0; x < 6; ++x) CHECK(t.apply(Letter{1, false}, r(x)) == r(s.apply(Letter{1, false}, x)));
}
