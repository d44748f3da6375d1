#include <random>

#include <doctest.h>

#include "knotcover/enumerate.hpp"
#include "knotcover/error.hpp"
#include "oracles.hpp"

using namespace knotcover;

namespace {

  std::vector<Word> words(Presentation const& p,
                          std::initializer_list<char const*> texts) {
    std::vector<Word> out;
    for (auto t : texts) {
      out.push_back(parse_word(t, p));
    }
    return out;
  }

  void check_relators(CosetTable const& t, Presentation const& p) {
    for (Coset c = 0; c < t.num_cosets(); ++c) {
      for (auto const& r : p.relators()) {
        CHECK(trace(t, c, r) == c);
      }
    }
  }

}  // namespace

TEST_SUITE("enumerate") {

  TEST_CASE("index of <x^2> in Z") {
    auto p = parse_presentation("<x | >");
    auto t = enumerate_cosets(p, words(p, {"x^2"}), 100);
    REQUIRE(t.num_cosets() == 2);
    auto rep = coset_action(t);
    CHECK(rep.images[0] == Permutation{1, 0});
    CHECK(trace(t, 0, parse_word("x", p)) == 1);
    CHECK(trace(t, 1, Word{}) == 1);
  }

  TEST_CASE("symmetric group S3") {
    auto p = parse_presentation("<a, b | a^2, b^3, (a*b)^2>");
    CHECK(enumerate_cosets(p, words(p, {"a"})).num_cosets() == 3);
    auto t = enumerate_cosets(p, {});
    CHECK(t.num_cosets()
          == oracle::closure_order({{1, 0, 2}, {1, 2, 0}}));
    check_relators(t, p);
  }

  TEST_CASE("alternating group A4") {
    auto p = parse_presentation("<a, b | a^2, b^3, (a*b)^3>");
    auto t = enumerate_cosets(p, {});
    CHECK(t.num_cosets()
          == oracle::closure_order({{1, 0, 3, 2}, {1, 2, 0, 3}}));
    CHECK(t.num_cosets() == 12);
    check_relators(t, p);
    validate_table(t, p);
  }

  TEST_CASE("the meridian normally generates the trefoil group") {
    auto p = parse_presentation("<x, y | y*x*y = x*y*x>");
    auto q = p.with_relators(words(p, {"x"}));
    CHECK(enumerate_cosets(q, {}).num_cosets() == 1);
  }

  TEST_CASE("overflow is a resource error") {
    auto p = parse_presentation("<x | >");
    CHECK_THROWS_AS(enumerate_cosets(p, {}, 100), ResourceError);
    CHECK_THROWS_AS(enumerate_cosets(p, {}, 0), Error);
  }

  TEST_CASE("subgroup words must use known generators") {
    auto p = parse_presentation("<x | x^3>");
    CHECK_THROWS_AS(enumerate_cosets(p, std::vector<Word>{Word{make_letter(1)}}), Error);
  }

  TEST_CASE("tables are consistent and deterministic") {
    auto p = parse_presentation("<a, b | a^2, b^3, (a*b)^5>");
    auto t = enumerate_cosets(p, words(p, {"b"}));
    CHECK(t.num_cosets() == 20);
    CHECK(t.is_complete());
    CHECK(t.is_consistent());
    check_relators(t, p);
    CHECK(trace(t, 0, parse_word("b", p)) == 0);
    CHECK(enumerate_cosets(p, words(p, {"b"})) == t);
    CHECK(is_transitive(coset_action(t)));
  }

  TEST_CASE("the action is a homomorphism") {
    auto p   = parse_presentation("<a, b | a^2, b^3, (a*b)^5>");
    auto rep = coset_action(enumerate_cosets(p, {}));
    REQUIRE(rep.degree == 60);
    std::mt19937                          rng(3);
    std::uniform_int_distribution<Letter> pick(0, 3);
    for (int i = 0; i < 200; ++i) {
      Word u(rng() % 10), v(rng() % 10);
      for (auto& l : u) l = pick(rng);
      for (auto& l : v) l = pick(rng);
      CHECK(word_image(rep, concat(u, v))
            == compose(word_image(rep, u), word_image(rep, v)));
    }
    for (auto const& r : p.relators()) {
      CHECK(word_image(rep, r) == identity_permutation(rep.degree));
    }
  }

  TEST_CASE("tracing an undefined transition throws") {
    CosetTable t(1, 2);
    t.link(0, make_letter(0), 1);
    CHECK(trace(t, 0, Word{make_letter(0)}) == 1);
    CHECK_THROWS_AS(trace(t, 1, Word{make_letter(0)}), Error);
    CHECK_THROWS_AS(coset_action(t), Error);
  }

  TEST_CASE("permutation helpers") {
    Permutation a{1, 2, 0};
    CHECK(compose(a, invert(a)) == identity_permutation(3));
    CHECK(compose(a, a) == Permutation{2, 0, 1});
  }

  TEST_CASE("csv dump") {
    auto p = parse_presentation("<x | x^2>");
    auto t = enumerate_cosets(p, {});
    CHECK(t.to_csv(p.generator_names()) == "coset,x,x^-1\n0,1,1\n1,0,0\n");
  }

}
