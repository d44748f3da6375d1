#include <doctest.h>

#include "knotcover/catalog.hpp"
#include "knotcover/error.hpp"
#include "knotcover/lowindex.hpp"
#include "oracles.hpp"

using namespace knotcover;

namespace {

  using Counts = std::vector<std::size_t>;

  Counts eta(std::string_view text, std::size_t d) {
    return eta_sequence(parse_presentation(text), d).counts;
  }

  Counts eta_of(std::string const& key, std::size_t d,
                LowIndexOptions const& opts = {}) {
    return eta_sequence(Catalog::builtin().get(key).presentation, d, opts)
        .counts;
  }

}  // namespace

TEST_SUITE("lowindex") {

  TEST_CASE("knot and link groups") {
    CHECK(eta_of("trefoil", 8) == Counts{1, 1, 2, 3, 2, 8, 7, 10});
    CHECK(eta_of("figure8", 8) == Counts{1, 1, 1, 2, 4, 11, 9, 10});
    CHECK(eta_of("whitehead", 7) == Counts{1, 3, 6, 17, 22, 79, 94});
  }

  TEST_CASE("small groups") {
    CHECK(eta("<x | >", 5) == Counts{1, 1, 1, 1, 1});
    CHECK(eta("<x | x^6>", 6) == Counts{1, 1, 1, 0, 0, 1});
    CHECK(eta_of("brieskorn_235", 10) == Counts{1, 0, 0, 0, 1, 1, 0, 0, 0, 1});
  }

  TEST_CASE("total subgroup counts of the free group follow Hall") {
    auto p    = parse_presentation("<a, b | >");
    auto recs = low_index_subgroups(p, 5);
    auto tot  = total_subgroup_counts(recs, 5);
    auto hall = oracle::hall_counts(2, 5);
    REQUIRE(tot.size() == 5);
    for (std::size_t d = 0; d < 5; ++d) {
      CHECK(mpz_class(static_cast<unsigned long>(tot[d])) == hall[d]);
    }
    CHECK(tot == Counts{1, 3, 13, 71, 461});
  }

  TEST_CASE("classes agree with brute-force transitive actions") {
    for (auto const& key : Catalog::builtin().keys()) {
      auto const& p    = Catalog::builtin().get(key).presentation;
      std::size_t maxd = p.num_generators() > 3 ? 3 : 4;
      auto        recs = low_index_subgroups(p, maxd);
      auto        tot  = total_subgroup_counts(recs, maxd);
      for (std::size_t d = 1; d <= maxd; ++d) {
        CAPTURE(key);
        CAPTURE(d);
        auto brute = oracle::transitive_actions(p, d);
        std::size_t classes = 0;
        for (auto const& r : recs) {
          classes += r.index == d;
        }
        std::size_t fact = 1;
        for (std::size_t i = 2; i < d; ++i) {
          fact *= i;
        }
        CHECK(classes == brute.classes);
        CHECK(tot[d - 1] * fact == brute.transitive_homs);
      }
    }
  }

  TEST_CASE("records are complete and relators act trivially") {
    auto const& p = Catalog::builtin().get("figure8").presentation;
    for (auto const& r : low_index_subgroups(p, 6)) {
      CHECK(r.table.num_cosets() == r.index);
      CHECK(r.rep.degree == r.index);
      CHECK_NOTHROW(validate_table(r.table, p));
      CHECK(is_transitive(r.rep));
      CHECK(r.covering_type == classify_covering(r));
    }
  }

  TEST_CASE("generator elimination does not change the answer") {
    LowIndexOptions plain;
    plain.eliminate_generators = false;
    for (std::string key : {"fig8_sub2", "brieskorn_235", "gamma_plus_min",
                            "borromean"}) {
      CAPTURE(key);
      auto const& p = Catalog::builtin().get(key).presentation;
      auto a = low_index_subgroups(p, 4);
      auto b = low_index_subgroups(p, 4, plain);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].table == b[i].table);
      }
    }
  }

  TEST_CASE("output is deterministic and canonically sorted") {
    auto const& p = Catalog::builtin().get("trefoil").presentation;
    auto a = low_index_subgroups(p, 6);
    auto b = low_index_subgroups(p, 6);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].table == b[i].table);
      if (i > 0 && a[i].index == a[i - 1].index) {
        CHECK(a[i - 1].table.flattened() < a[i].table.flattened());
      }
      CHECK(standardized(a[i].table, 0) == a[i].table.flattened());
    }
  }

  TEST_CASE("covering types") {
    auto const& p    = Catalog::builtin().get("trefoil").presentation;
    auto        recs = low_index_subgroups(p, 6);
    std::size_t reg6 = 0;
    for (auto const& r : recs) {
      if (r.index == 2) {
        CHECK(r.covering_type == CoveringType::cyclic);
      }
      if (r.index == 3 && r.covering_type == CoveringType::irregular) {
        CHECK(r.image_order == 6u);
        CHECK(conjugacy_class_size(r) == 3);
      }
      if (r.index == 6 && r.covering_type == CoveringType::regular) {
        CHECK(r.image_order == 6u);
        CHECK(conjugacy_class_size(r) == 1);
        ++reg6;
      }
    }
    CHECK(reg6 == 1);
    CHECK(to_string(CoveringType::cyclic) == "cyc");
    CHECK(to_string(CoveringType::regular) == "reg");
    CHECK(to_string(CoveringType::irregular) == "irr");
  }

  TEST_CASE("trefoil index-3 class acts as S3") {
    auto const& p = Catalog::builtin().get("trefoil").presentation;
    for (auto const& r : low_index_subgroups(p, 3)) {
      if (r.index == 3 && r.covering_type == CoveringType::irregular) {
        std::vector<oracle::Perm> gens;
        for (auto const& g : r.rep.images) {
          gens.emplace_back(g.begin(), g.end());
        }
        CHECK(oracle::closure_order(gens) == 6);
      }
    }
  }

  TEST_CASE("cusp counts") {
    auto const& e    = Catalog::builtin().get("trefoil");
    auto        recs = low_index_subgroups(e.presentation, 3);
    CHECK(cusp_count(recs[0], e.peripherals) == 1);
    CHECK(cusp_count(recs[1], e.peripherals) == 1);
    for (auto const& r : recs) {
      if (r.index == 3 && r.covering_type == CoveringType::irregular) {
        CHECK(cusp_count(r, e.peripherals) == 2);
      }
    }
    CHECK_THROWS_AS(cusp_count(recs[0], {}), Error);

    auto const& b = Catalog::builtin().get("borromean");
    auto        r = low_index_subgroups(b.presentation, 1);
    CHECK(cusp_count(r[0], b.peripherals) == 3);
  }

  TEST_CASE("node budget") {
    LowIndexOptions tiny;
    tiny.node_budget = 50;
    CHECK_THROWS_AS(eta_of("whitehead", 6, tiny), ResourceError);
    CHECK_THROWS_AS(eta("<x | >", 0), Error);
  }

}
