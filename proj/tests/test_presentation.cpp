#include <random>

#include <doctest.h>

#include "knotcover/catalog.hpp"
#include "knotcover/error.hpp"
#include "knotcover/presentation.hpp"

using namespace knotcover;

namespace {

  Word random_word(std::mt19937& rng, std::size_t gens, std::size_t len) {
    std::uniform_int_distribution<Letter> pick(0, static_cast<Letter>(2 * gens - 1));
    Word w(len);
    for (auto& l : w) {
      l = pick(rng);
    }
    return w;
  }

  Word letters(std::initializer_list<int> signed_gens) {
    Word w;
    for (int s : signed_gens) {
      w.push_back(make_letter(static_cast<std::size_t>(std::abs(s) - 1), s < 0));
    }
    return w;
  }

}  // namespace

TEST_SUITE("presentation") {

  TEST_CASE("trefoil Wirtinger form") {
    auto p = parse_presentation("< x, y | y*x*y = x*y*x >");
    REQUIRE(p.num_generators() == 2);
    REQUIRE(p.relators().size() == 1);
    CHECK(p.relators()[0].size() == 6);
    CHECK(p.relators()[0] == letters({2, 1, 2, -1, -2, -1}));
  }

  TEST_CASE("free group of rank one") {
    auto p = parse_presentation("< x | >");
    CHECK(p.num_generators() == 1);
    CHECK(p.relators().empty());
  }

  TEST_CASE("equation becomes one relator") {
    auto p = parse_presentation("< x, y | x^2 = y^3 >");
    REQUIRE(p.relators().size() == 1);
    CHECK(p.relators()[0] == letters({1, 1, -2, -2, -2}));
  }

  TEST_CASE("equation chains expand pairwise") {
    auto p = parse_presentation("<x,y,z | x = y = z>");
    REQUIRE(p.relators().size() == 2);
    CHECK(p.relators()[0] == letters({1, -2}));
    CHECK(p.relators()[1] == letters({2, -3}));
  }

  TEST_CASE("parentheses, negative powers and juxtaposition") {
    auto p = parse_presentation("<a, b | (a b)^-2, a^2 * b^-1 >");
    REQUIRE(p.relators().size() == 2);
    CHECK(p.relators()[0] == letters({-2, -1, -2, -1}));
    CHECK(p.relators()[1] == letters({1, 1, -2}));
  }

  TEST_CASE("relators are cyclically reduced") {
    auto p = parse_presentation("<x, y | y*x*y^-1>");
    CHECK(p.relators()[0] == letters({1}));
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_presentation("< x, y | x*y* >");
      FAIL("expected a parse error");
    } catch (ParseError const& e) {
      CHECK(e.code() == ErrorCode::parse);
      CHECK(e.position() == 14);
    }
    CHECK_THROWS_AS(parse_presentation("x, y | x"), ParseError);
    CHECK_THROWS_AS(parse_presentation("< x, x | x >"), Error);
    CHECK_THROWS_AS(parse_presentation("< 1x | x >"), ParseError);
  }

  TEST_CASE("unknown generators are rejected") {
    try {
      parse_presentation("< x | x*q >");
      FAIL("expected an error");
    } catch (Error const& e) {
      CHECK(e.code() == ErrorCode::unknown_generator);
    }
  }

  TEST_CASE("relators reducing to nothing are rejected") {
    CHECK_THROWS_AS(parse_presentation("< x, y | x*y*y^-1*x^-1 >"), ParseError);
  }

  TEST_CASE("free reduction") {
    CHECK(free_reduce(letters({1, -1, 2})) == letters({2}));
    CHECK(free_reduce(Word{}).empty());
    CHECK(free_reduce(letters({1, 2, -2, -1})).empty());

    std::mt19937 rng(7);
    for (int i = 0; i < 500; ++i) {
      Word w = random_word(rng, 3, 12);
      Word r = free_reduce(w);
      CHECK(r.size() <= w.size());
      CHECK(free_reduce(r) == r);
      for (std::size_t k = 1; k < r.size(); ++k) {
        CHECK(r[k] != inverse(r[k - 1]));
      }
    }
  }

  TEST_CASE("abelianized relations") {
    auto m = abelianized_relations(parse_presentation("<x, y | x^2*y^-3>"));
    REQUIRE(m.rows == 1);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(0, 1) == -3);

    auto f = abelianized_relations(parse_presentation("<x, y | >"));
    CHECK(f.rows == 0);
    CHECK(f.cols == 2);

    auto t = abelianized_relations(parse_presentation("<x, y | y*x*y = x*y*x>"));
    CHECK(t.at(0, 0) == -1);
    CHECK(t.at(0, 1) == 1);
  }

  TEST_CASE("render and parse round-trip on the catalog") {
    auto const& cat = Catalog::builtin();
    for (auto const& key : cat.keys()) {
      CAPTURE(key);
      auto const& p = cat.get(key).presentation;
      CHECK(parse_presentation(render(p)) == p);
    }
  }

  TEST_CASE("render and parse round-trip on random presentations") {
    std::mt19937 rng(11);
    std::vector<std::string> names{"a", "b2", "gen_c"};
    for (int i = 0; i < 200; ++i) {
      std::vector<Word> rels;
      for (int r = 0; r < 3; ++r) {
        Word w = cyclic_reduce(random_word(rng, 3, 9));
        if (!w.empty()) {
          rels.push_back(std::move(w));
        }
      }
      Presentation p(names, rels);
      CHECK(parse_presentation(render(p)) == p);
    }
  }

  TEST_CASE("word helpers") {
    Word w = letters({1, 2});
    CHECK(inverse_word(w) == letters({-2, -1}));
    CHECK(power(w, 2) == letters({1, 2, 1, 2}));
    CHECK(power(w, -1) == letters({-2, -1}));
    CHECK(power(w, 0).empty());
    CHECK(concat(w, w) == power(w, 2));
    CHECK(free_reduce(concat(w, inverse_word(w))).empty());
    CHECK(exponent_sums(letters({1, 1, -2}), 2) == std::vector<long long>{2, -1});
  }

}
