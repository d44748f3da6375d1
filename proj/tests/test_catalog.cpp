#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <doctest.h>

#include "knotcover/catalog.hpp"
#include "knotcover/enumerate.hpp"
#include "knotcover/error.hpp"
#include "knotcover/homology.hpp"

using namespace knotcover;

namespace {

  Catalog const& cat() {
    return Catalog::builtin();
  }

  std::optional<ErrorCode> code_of(auto&& f) {
    try {
      f();
    } catch (Error const& e) {
      return e.code();
    }
    return std::nullopt;
  }

  std::size_t order(Presentation const& p) {
    return enumerate_cosets(p, {}).num_cosets();
  }

}  // namespace

TEST_SUITE("catalog") {

  TEST_CASE("built-in keys") {
    auto keys = cat().keys();
    CHECK(keys.size() >= 13);
    CHECK(keys.front() == "trefoil");
    for (std::string k : {"figure8", "whitehead", "borromean", "modular_gamma",
                          "gamma_plus_min", "brieskorn_235", "brieskorn_237",
                          "fig8_sub2", "fig8_sub3", "fig8_sub4a4", "fig8_sub5",
                          "trefoil_torus_form"}) {
      CHECK(cat().contains(k));
    }
    for (auto const& k : keys) {
      auto const& e = cat().get(k);
      CHECK(e.key == k);
      CHECK_FALSE(e.name.empty());
      bool known = e.source == "published" || e.source == "derived"
                   || e.source == "external";
      CHECK(known);
    }
  }

  TEST_CASE("unknown keys list the known ones") {
    try {
      cat().get("trefoli");
      FAIL("no throw");
    } catch (Error const& e) {
      CHECK(e.code() == ErrorCode::unknown_key);
      CHECK(std::string(e.what()).find("trefoil") != std::string::npos);
    }
  }

  TEST_CASE("shapes of entries") {
    auto const& g = cat().get("gamma_plus_min");
    CHECK(g.presentation.num_generators() == 3);
    CHECK(g.presentation.relators().size() == 6);
    CHECK(cat().get("borromean").components == 3);
    CHECK(cat().get("borromean").peripherals.size() == 3);
    CHECK(cat().get("whitehead").peripherals.empty());
    CHECK(cat().get("trefoil").oracle.eta->alternatives.at(9)
          == std::vector<std::size_t>{10});
  }

  TEST_CASE("the two trefoil presentations agree") {
    auto a = low_index_subgroups(cat().get("trefoil").presentation, 7);
    auto b = low_index_subgroups(cat().get("trefoil_torus_form").presentation, 7);
    CHECK(total_subgroup_counts(a, 7) == total_subgroup_counts(b, 7));
    CHECK(eta_sequence(cat().get("trefoil").presentation, 7).counts
          == eta_sequence(cat().get("trefoil_torus_form").presentation, 7).counts);
  }

  TEST_CASE("finite groups") {
    CHECK(order(cat().get("brieskorn_235").presentation) == 120);
    CHECK(cat().get("brieskorn_235").oracle.order == 120u);
  }

  TEST_CASE("Dehn surgery") {
    auto const& t = cat().get("trefoil");
    CHECK(order(surgery_quotient(t, 0, -1, 1)) == 120);
    auto zero = surgery_quotient(t, 0, 0, 1);
    CHECK(render_homology(first_homology(zero)) == "1");
    CHECK(render_homology(first_homology(surgery_quotient(t, 0, 5, 1))) == "1/5");
    CHECK(render_homology(first_homology(surgery_quotient(t, 0, 1, 1))) == "0");
    auto const& f = cat().get("figure8");
    CHECK(render_homology(first_homology(surgery_quotient(f, 0, 0, 1))) == "1");
    CHECK(eta_sequence(surgery_quotient(f, 0, 0, 1), 6).counts
          == std::vector<std::size_t>{1, 1, 1, 2, 2, 5});
    CHECK(eta_sequence(surgery_quotient(t, 0, 1, 1), 8).counts
          == std::vector<std::size_t>{1, 0, 0, 0, 0, 0, 2, 1});
    auto const& b = cat().get("borromean");
    CHECK(render_homology(first_homology(surgery_quotient(b, 2, 3, 1))) == "1/3+1+1");
  }

  TEST_CASE("surgery errors") {
    auto const& t = cat().get("trefoil");
    CHECK(code_of([&] { surgery_quotient(t, 1, 1, 1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { surgery_quotient(t, 0, 2, 4); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { surgery_quotient(t, 0, 0, 0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { surgery_quotient(cat().get("whitehead"), 0, 1, 1); })
          == ErrorCode::missing_data);
  }

  TEST_CASE("meridians commute with longitudes") {
    for (auto [key, d] : {std::pair{"trefoil", 6}, {"trefoil_torus_form", 6},
                          {"figure8", 6}, {"borromean", 4}}) {
      CAPTURE(key);
      auto r = check_peripherals(cat().get(key), std::size_t(d));
      CHECK(r.commute);
      CHECK(r.classes_checked > 0);
    }
    auto bad = Catalog::parse("k: < x, y | y*x*y = x*y*x >\n"
                              "  components 1\n"
                              "  peripheral x ; y\n");
    auto r   = check_peripherals(bad.get("k"), 3);
    CHECK_FALSE(r.commute);
    CHECK(r.failure.find("index 3") != std::string::npos);
    CHECK(code_of([&] { check_peripherals(cat().get("whitehead"), 2); })
          == ErrorCode::missing_data);
  }

  TEST_CASE("index-one cusps equal components") {
    for (auto const& k : cat().keys()) {
      auto const& e = cat().get(k);
      if (e.peripherals.empty()) {
        continue;
      }
      auto r = low_index_subgroups(e.presentation, 1);
      CHECK(cusp_count(r[0], e.peripherals) == e.components);
    }
  }

  TEST_CASE("catalog parse errors") {
    auto line_of = [](std::string_view text) -> std::string {
      try {
        Catalog::parse(text);
      } catch (ParseError const& e) {
        std::string w = e.what();
        auto        at = w.find("line ");
        return at == std::string::npos ? w : w.substr(at, 7);
      }
      return "";
    };
    CHECK(line_of("  name orphan\n") == "line 1:");
    CHECK(line_of("a: <x | x^2>\n  colour red\n") == "line 2:");
    CHECK(line_of("a: <x | x^2>\n  source rumour\n") == "line 2:");
    CHECK(line_of("a: <x | x^2>\na: <y | y^3>\n") == "line 2:");
    CHECK(line_of("a <x | x^2>\n") == "line 1:");
    CHECK(line_of("\n\na: <x | x^>\n") == "line 3:");
    CHECK(line_of("a: <x | x^2>\n  components 2\n  peripheral x ; x\n") == "line 1:");
    CHECK(line_of("a: <x | x^2>\n  peripheral x ; q\n") == "line 2:");
    CHECK(line_of("a: <x | x^2>\n  components two\n") == "line 2:");
    CHECK(code_of([] { Catalog::parse("a: <x | x^2>\n", "{"); }) == ErrorCode::parse);
    CHECK(code_of([] { Catalog::parse("a: <x | x^2>\n", R"({"b": {}})"); })
          == ErrorCode::parse);
    CHECK(code_of([] { Catalog::parse("a: <x | x^2>\n", R"({"a": {"eta": {}}})"); })
          == ErrorCode::parse);
    auto ok = Catalog::parse("# comment\na: <x | x^2>\n  name two\n",
                             R"({"_note": 1, "a": {"eta": {"values": [1, 1]}}})");
    CHECK(ok.get("a").oracle.eta->values == std::vector<std::size_t>{1, 1});
    CHECK(ok.get("a").source == "external");
  }

  TEST_CASE("directories and merging") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "knotcover_catalog_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "a.txt") << "z3: <x | x^3>\n  name cyclic\n";
    std::ofstream(dir / "a.json") << R"({"z3": {"eta": {"values": [1, 0, 1]}}})";
    std::ofstream(dir / "b.txt") << "trefoil: <x | x^2>\n  name replaced\n";
    std::ofstream(dir / "ignored.md") << "not a catalog";

    auto loaded = Catalog::load_directory(dir);
    CHECK(loaded.keys() == std::vector<std::string>{"z3", "trefoil"});
    CHECK(loaded.get("z3").oracle.eta->values == std::vector<std::size_t>{1, 0, 1});

    auto merged = Catalog::parse("trefoil: <x, y | y*x*y = x*y*x>\n");
    merged.merge(loaded);
    CHECK(merged.keys() == std::vector<std::string>{"trefoil", "z3"});
    CHECK(merged.get("trefoil").name == "replaced");

    std::ofstream(dir / "c.txt") << "bad line\n";
    try {
      Catalog::load_directory(dir);
      FAIL("no throw");
    } catch (Error const& e) {
      CHECK(std::string(e.what()).find("c.txt") != std::string::npos);
    }
    CHECK(code_of([&] { Catalog::load_directory(dir / "missing"); }) == ErrorCode::io);
    fs::remove_all(dir);
  }

}
