// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "knotcover/catalog.hpp"
#include "knotcover/enumerate.hpp"
#include "knotcover/error.hpp"
#include "knotcover/homology.hpp"
#include "knotcover/lowindex.hpp"
#include "knotcover/povm.hpp"
#include "oracles.hpp"

using namespace knotcover;

namespace {

  constexpr double rank_tolerance  = 1e-8;
  constexpr double sic_tolerance   = 1e-8;
  constexpr double orbit_tolerance = 1e-9;
  constexpr double eta_seconds     = 120;
  constexpr double stretch_seconds = 900;
  // Unsimplified rewrites need more search nodes than the default.
  constexpr std::uint64_t rewrite_budget = 5'000'000'000;

  using Counts = std::vector<std::size_t>;
  using Clock  = std::chrono::steady_clock;

  std::string show(Counts const& c) {
    std::string out = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
      out += (i ? "," : "") + std::to_string(c[i]);
    }
    return out + "}";
  }

  double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  struct Outcome {
    bool        pass = true;
    std::string detail;

    void require(bool ok, std::string const& what) {
      if (!ok) {
        pass = false;
      }
      detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "FAILED ")
                + what;
    }
  };

  Catalog const& cat() {
    return Catalog::builtin();
  }

  Counts timed_eta(Presentation const& p, std::size_t d, double limit,
                   Outcome& o, std::string const& label,
                   LowIndexOptions const& opts = {}) {
    auto t0 = Clock::now();
    Counts c;
    try {
      c = eta_sequence(p, d, opts).counts;
    } catch (Error const& e) {
      o.require(false, label + " raised " + e.what());
      return c;
    }
    double s = seconds_since(t0);
    char   buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    o.require(s <= limit, label + " " + show(c) + " in " + buf);
    return c;
  }

  Outcome criterion_eta() {
    Outcome o;
    auto check = [&](std::string const& key, std::size_t d, Counts const& want,
                     double limit) {
      auto got = timed_eta(cat().get(key).presentation, d, limit, o, key);
      o.require(got == want, key + " matches " + show(want));
    };
    check("trefoil", 8, {1, 1, 2, 3, 2, 8, 7, 10}, eta_seconds);
    check("figure8", 8, {1, 1, 1, 2, 4, 11, 9, 10}, eta_seconds);
    check("whitehead", 7, {1, 3, 6, 17, 22, 79, 94}, eta_seconds);
    check("whitehead", 10, {1, 3, 6, 17, 22, 79, 94, 412, 616, 1659},
          stretch_seconds);
    return o;
  }

  Outcome criterion_subgroups() {
    Outcome     o;
    auto const& e    = cat().get("figure8");
    auto        recs = low_index_subgroups(e.presentation, 5);
    LowIndexOptions opts;
    opts.node_budget = rewrite_budget;
    auto eta_of = [&](std::string const& label, SubgroupRecord const& r,
                      std::size_t d) {
      auto sub = rewrite_presentation(e.presentation, r.table);
      return timed_eta(sub, d, eta_seconds, o, label, opts);
    };
    Counts const want5{1, 7, 15, 88, 123, 802, 1328};
    std::size_t  five_classes = 0, five_matches = 0;
    for (auto const& r : recs) {
      if (r.index == 2) {
        Counts want{1, 1, 5, 6, 8, 33, 21, 32};
        o.require(eta_of("index 2", r, 8) == want, "index 2 matches " + show(want));
      } else if (r.index == 3) {
        Counts want{1, 7, 4, 47, 19, 66, 42, 484};
        o.require(eta_of("index 3", r, 8) == want, "index 3 matches " + show(want));
      } else if (r.index == 4 && r.image_order == 12u) {
        Counts want{1, 3, 8, 25, 36, 229, 435};
        o.require(eta_of("index 4 (A4 image)", r, 7) == want,
                  "index 4 (A4 image) matches " + show(want));
      } else if (r.index == 5 && cusp_count(r, e.peripherals) == 2) {
        ++five_classes;
        five_matches += eta_of("index 5 (two cusps)", r, 7) == want5;
      }
    }
    o.require(five_classes > 0 && five_matches == five_classes,
              std::to_string(five_matches) + " of " + std::to_string(five_classes)
                  + " two-cusp index-5 classes match " + show(want5));
    // Catalog copies of the same subgroups.
    for (auto [key, d] : {std::pair{"fig8_sub2", 8}, {"fig8_sub3", 8},
                          {"fig8_sub4a4", 7}, {"fig8_sub5", 7}}) {
      auto const& c   = cat().get(key);
      auto        got = timed_eta(c.presentation, std::size_t(d), eta_seconds, o, key);
      o.require(got == c.oracle.eta->values, std::string(key) + " matches catalog oracle");
    }
    return o;
  }

  Outcome criterion_surgery() {
    Outcome     o;
    auto const& t = cat().get("trefoil");
    auto const& k = cat().get("figure8");
    struct Case {
      CatalogEntry const* e;
      long                p, q;
      Counts              want;
      std::string         label;
    };
    for (auto const& c : {Case{&t, -1, 1, {1, 0, 0, 0, 1, 1, 0, 0, 0, 1}, "T(-1,1)"},
                          Case{&t, 1, 1, {1, 0, 0, 0, 0, 0, 2, 1, 1, 0}, "T(1,1)"},
                          Case{&t, 0, 1, {1, 1, 2, 2, 1, 5, 3, 2, 4, 1}, "T(0,1)"},
                          Case{&k, 0, 1, {1, 1, 1, 2, 2, 5, 1, 2, 2, 4}, "K(0,1)"}}) {
      auto q   = surgery_quotient(*c.e, 0, c.p, c.q);
      auto got = timed_eta(q, 10, eta_seconds, o, c.label);
      o.require(got == c.want, c.label + " matches " + show(c.want));
    }
    auto        q = surgery_quotient(t, 0, -1, 1);
    std::size_t n = enumerate_cosets(q, {}).num_cosets();
    o.require(n == 120, "T(-1,1) trivial subgroup has " + std::to_string(n) + " cosets");
    return o;
  }

  std::string hom(Presentation const& p, SubgroupRecord const& r) {
    return render_homology(first_homology(rewrite_presentation(p, r.table)));
  }

  Outcome criterion_homology() {
    Outcome     o;
    auto const& t    = cat().get("trefoil");
    auto        recs = low_index_subgroups(t.presentation, 6);
    std::multiset<std::string> got, want;
    std::size_t                z3_at_6 = 0;
    for (auto const& r : recs) {
      if (r.index < 2) {
        continue;
      }
      std::string h = hom(t.presentation, r);
      got.insert(std::to_string(r.index) + ":" + std::string(to_string(r.covering_type))
                 + ":" + h + ":" + std::to_string(cusp_count(r, t.peripherals)));
      if (r.index == 6 && h == "1+1+1") {
        ++z3_at_6;
      }
      if (r.index == 2) {
        o.require(h == "1/3+1", "d=2 homology " + h);
      }
    }
    for (auto const& row : t.oracle.coverings->rows) {
      want.insert(std::to_string(row.d) + ":" + row.ty + ":" + row.hom + ":"
                  + std::to_string(row.cp.value_or(0)));
    }
    o.require(got == want, "trefoil d<=6 rows equal the stored table ("
                               + std::to_string(got.size()) + " classes)");
    o.require(z3_at_6 == 3, std::to_string(z3_at_6) + " classes with 1+1+1 at d=6");

    auto const&                b = cat().get("borromean");
    std::multiset<std::string> bh;
    for (auto const& r : low_index_subgroups(b.presentation, 2)) {
      if (r.index == 2) {
        bh.insert(hom(b.presentation, r));
      }
    }
    for (auto const& row : b.oracle.coverings->rows) {
      if (row.d == 2) {
        o.require(bh.count(row.hom) > 0, "Borromean d=2 contains " + row.hom);
      }
    }
    return o;
  }

  SubgroupRecord find_class(CatalogEntry const& e, std::size_t d,
                            std::function<bool(SubgroupRecord const&)> pred) {
    for (auto& r : low_index_subgroups(e.presentation, d)) {
      if (r.index == d && pred(r)) {
        return r;
      }
    }
    throw std::runtime_error("class not found");
  }

  double orbit_sum_error(StateVector const& psi, PauliGroupSpec const& spec) {
    auto          orbit = pauli_orbit(psi, spec);
    auto          d     = static_cast<Eigen::Index>(spec.dimension());
    ComplexMatrix sum   = ComplexMatrix::Zero(d, d);
    for (auto const& m : orbit) {
      sum += m;
    }
    sum -= double(d) * ComplexMatrix::Identity(d, d);
    return sum.cwiseAbs().maxCoeff();
  }

  Outcome criterion_povm() {
    Outcome        o;
    PovmTolerances tol;
    tol.rank_relative = rank_tolerance;
    tol.sic           = sic_tolerance;
    double worst_orbit = 0;
    auto   track       = [&](PovmScan const& s, PauliGroupSpec const& spec) {
      for (auto const& r : s.reports) {
        worst_orbit = std::max(worst_orbit, orbit_sum_error(r.fiducial, spec));
      }
    };

    auto const& t   = cat().get("trefoil");
    auto        s3  = find_class(t, 3, [](auto const& r) {
      return r.covering_type == CoveringType::irregular;
    });
    auto        sp3 = PauliGroupSpec::for_dimension(3);
    auto        a   = povm_scan(s3, sp3, 20'000, tol);
    track(a, sp3);
    auto const& b3 = a.best_report();
    auto        orbit = pauli_orbit(b3.fiducial, sp3);
    double      dev   = 0;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (std::size_t j = i + 1; j < orbit.size(); ++j) {
        double v = (orbit[i] * orbit[j]).trace().real();
        dev      = std::max(dev, std::abs(v - 0.25));
      }
    }
    o.require(b3.gram.gram_rank == 9 && b3.gram.is_sic && dev <= sic_tolerance,
              "d=3 rank " + std::to_string(b3.gram.gram_rank) + ", max |overlap - 1/4| "
                  + std::to_string(dev));

    auto const& k   = cat().get("figure8");
    auto        a4  = find_class(k, 4, [](auto const& r) { return r.image_order == 12u; });
    PauliGroupSpec qubits({2, 2});
    auto           s4 = povm_scan(a4, qubits, 20'000, tol);
    track(s4, qubits);
    Complex w6 = std::polar(1.0, std::numbers::pi / 3);
    ComplexVector target(4);
    target << 0, 1, -w6, w6 - 1.0;
    StateVector want(target);
    bool        matched = false;
    for (auto const& r : s4.reports) {
      if (r.fiducial.approx_equal(want, 1e-9)) {
        matched = r.gram.gram_rank == 16;
      }
    }
    o.require(matched, "d=4 A4 class: fiducial (0,1,-w6,w6-1) found with rank 16");

    auto s5c = find_class(k, 5, [&](auto const& r) {
      return r.covering_type == CoveringType::irregular
             && cusp_count(r, k.peripherals) == 2;
    });
    auto sp5 = PauliGroupSpec::for_dimension(5);
    auto s5  = povm_scan(s5c, sp5, 20'000, tol);
    track(s5, sp5);
    auto const& b5 = s5.best_report();
    o.require(b5.gram.gram_rank == 25 && b5.field_norm.pp == 1,
              "d=5 rank " + std::to_string(b5.gram.gram_rank) + " with pp "
                  + std::to_string(b5.field_norm.pp) + " after field norm (numeric clusters "
                  + std::to_string(b5.gram.pp) + ")");
    o.require(worst_orbit <= orbit_tolerance,
              "orbit sums within " + std::to_string(worst_orbit));
    return o;
  }

  Outcome criterion_properties() {
    Outcome o;
    auto    free2 = parse_presentation("<a, b | >");
    auto    tot   = total_subgroup_counts(low_index_subgroups(free2, 5), 5);
    auto    hall  = oracle::hall_counts(2, 5);
    bool    same  = tot.size() == 5;
    for (std::size_t i = 0; same && i < 5; ++i) {
      same = mpz_class(static_cast<unsigned long>(tot[i])) == hall[i];
    }
    o.require(same, "Hall counts " + show(tot));

    std::size_t compared = 0, mismatched = 0;
    for (auto const& key : cat().keys()) {
      auto const& p    = cat().get(key).presentation;
      auto        recs = low_index_subgroups(p, 4);
      for (std::size_t d = 1; d <= 4; ++d) {
        std::size_t classes = 0;
        for (auto const& r : recs) {
          classes += r.index == d;
        }
        ++compared;
        if (classes != oracle::transitive_actions(p, d).classes) {
          ++mismatched;
          o.require(false, key + " d=" + std::to_string(d));
        }
      }
    }
    o.require(mismatched == 0,
              "brute-force class counts agree (" + std::to_string(compared) + " cases)");

    std::mt19937                    rng(2024);
    std::uniform_int_distribution<> dim(1, 6), val(-6, 6), zero(0, 3);
    std::size_t                     bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t rows = dim(rng), cols = dim(rng);
      std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
      for (auto& r : m) {
        for (auto& v : r) {
          v = zero(rng) == 0 ? 0 : val(rng);
        }
      }
      auto s   = smith_normal_form(m);
      auto ref = oracle::invariant_factors(m);
      bool ok  = s.rank == ref.size();
      for (std::size_t i = 0; ok && i < ref.size(); ++i) {
        ok = abs(s.diagonal[i]) == abs(ref[i])
             && (i == 0 || s.diagonal[i] % s.diagonal[i - 1] == 0);
      }
      bad += !ok;
    }
    o.require(bad == 0, "SNF matches minor gcds on 200 random matrices");

    std::size_t records = 0, invalid = 0;
    for (auto const& key : cat().keys()) {
      auto const& p = cat().get(key).presentation;
      for (auto const& r : low_index_subgroups(p, 5)) {
        ++records;
        try {
          validate_table(r.table, p);
          if (r.rep.degree != r.index || !is_transitive(r.rep)) {
            ++invalid;
          }
        } catch (Error const&) {
          ++invalid;
        }
      }
    }
    o.require(invalid == 0, std::to_string(records) + " records re-validated");
    return o;
  }

  Outcome criterion_inconsistencies() {
    Outcome o;
    auto run = [&](std::string const& table, std::string& out) {
      std::string cmd = std::string(KNOTCOVER_CLI_PATH) + " reproduce " + table + " 2>&1";
      FILE*       f   = popen(cmd.c_str(), "r");
      if (f == nullptr) {
        return -1;
      }
      char buf[4096];
      while (std::fgets(buf, sizeof buf, f) != nullptr) {
        out += buf;
      }
      int status = pclose(f);
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto has_line = [](std::string const& text, std::string const& status,
                       std::vector<std::string> const& needles) {
      std::istringstream in(text);
      for (std::string line; std::getline(in, line);) {
        if (!line.starts_with(status)) {
          continue;
        }
        bool all = true;
        for (auto const& n : needles) {
          all = all && line.find(n) != std::string::npos;
        }
        if (all) {
          return true;
        }
      }
      return false;
    };
    std::string t1, t2;
    int         c1 = run("t1", t1);
    int         c2 = run("t2", t2);
    o.require(c1 == 0 && c2 == 0, "exit codes " + std::to_string(c1) + ", "
                                      + std::to_string(c2));
    o.require(t1.find("FAIL ") == std::string::npos
                  && t2.find("FAIL ") == std::string::npos,
              "no FAIL lines");
    o.require(has_line(t1, "WARN", {"eta d=9", "computed 18"}), "WARN for eta_9 with computed 18");
    o.require(has_line(t2, "WARN", {"d=4", "cyc"}), "WARN for the d=4 cyc/irr label");
    o.require(has_line(t2, "WARN", {"d=4", "pp 2"}), "WARN for the two-qubit pp");
    return o;
  }

}  // namespace

int main() {
  struct Criterion {
    char const*            name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"1 eta sequences", criterion_eta},
      {"2 subgroup eta sequences", criterion_subgroups},
      {"3 surgery quotients", criterion_surgery},
      {"4 covering homology", criterion_homology},
      {"5 POVM certification", criterion_povm},
      {"6 property oracles", criterion_properties},
      {"7 inconsistency warnings", criterion_inconsistencies},
  };
  int failed = 0;
  for (auto const& c : criteria) {
    auto    t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (std::exception const& e) {
      o.pass   = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", seconds_since(t0));
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " [" << buf << "]: "
              << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
