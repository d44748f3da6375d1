#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"

namespace kccli {

  using nlohmann::json;

  namespace {

    struct Check {
      std::string status;  // PASS, WARN, FAIL or CAP
      std::string item;
      std::string computed;
      std::string expected;
      std::string note;
    };

    class Reporter {
     public:
      explicit Reporter(std::string table) : table_(std::move(table)) {}

      void add(Check c) {
        checks_.push_back(std::move(c));
      }

      int finish(std::ostream& out, std::string const& format) const {
        std::map<std::string, std::size_t> tally;
        for (auto const& c : checks_) {
          ++tally[c.status];
        }
        if (format == "json") {
          json a = json::array();
          for (auto const& c : checks_) {
            a.push_back({{"status", c.status},
                         {"item", c.item},
                         {"computed", c.computed},
                         {"expected", c.expected},
                         {"note", c.note}});
          }
          out << json({{"table", table_}, {"checks", a}}).dump(2) << "\n";
        } else {
          for (auto const& c : checks_) {
            out << c.status << ' ' << table_ << ' ' << c.item
                << ": computed " << c.computed << "; expected " << c.expected;
            if (!c.note.empty()) {
              out << " (" << c.note << ")";
            }
            out << '\n';
          }
          out << table_ << " summary: " << tally["PASS"] << " pass, "
              << tally["WARN"] << " warn, " << tally["FAIL"] << " fail";
          if (tally["CAP"] != 0) {
            out << ", " << tally["CAP"] << " resource cap";
          }
          out << '\n';
        }
        if (tally["FAIL"] != 0) {
          return exit_mismatch;
        }
        return tally["CAP"] != 0 ? exit_resource : exit_ok;
      }

     private:
      std::string        table_;
      std::vector<Check> checks_;
    };

    std::string join(std::vector<std::size_t> const& v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
      }
      return s + "}";
    }

    std::string cp_text(std::optional<std::size_t> cp) {
      return cp ? "cp " + std::to_string(*cp) : "cp -";
    }

    // Runs f, turning a resource cap into a CAP check.
    template <class F>
    void guarded(Reporter& rep, std::string const& item, F&& f) {
      try {
        f();
      } catch (Failure const& e) {
        if (e.status != KC_ERR_RESOURCE) {
          throw;
        }
        rep.add({"CAP", item, "-", "-", e.what()});
      }
    }

    void eta_check(Reporter& rep, std::string const& item,
                   kc_presentation const* p, json const& eta,
                   Settings const& st) {
      auto expected = eta.at("values").get<std::vector<std::size_t>>();
      guarded(rep, item, [&] {
        std::vector<std::size_t> counts(expected.size());
        std::size_t              partial = 0;
        check(kc_eta_sequence(p, expected.size(), &st.lowindex, counts.data(),
                              &partial));
        for (std::size_t d = 1; d <= expected.size(); ++d) {
          auto const key = std::to_string(d);
          if (eta.contains("alternatives")
              && eta["alternatives"].contains(key)) {
            auto alts = eta["alternatives"][key].get<std::vector<std::size_t>>();
            alts.insert(alts.begin(), expected[d - 1]);
            bool known = std::find(alts.begin(), alts.end(), counts[d - 1])
                         != alts.end();
            rep.add({known ? "WARN" : "FAIL",
                     item + " eta d=" + key,
                     std::to_string(counts[d - 1]),
                     "one of " + join(alts),
                     "published values disagree with each other"});
            if (known) {
              expected[d - 1] = counts[d - 1];
            }
          }
        }
        rep.add({counts == expected ? "PASS" : "FAIL", item + " eta",
                 join(counts), join(expected), ""});
      });
    }

    struct Classes {
      SubgroupsPtr           handle;
      std::vector<ClassInfo> info;
    };

    Classes classes(kc_presentation const* p, std::size_t max_d,
                    Settings const& st) {
      Classes       out;
      kc_subgroups* raw     = nullptr;
      std::size_t   partial = 0;
      kc_status     s = kc_low_index(p, max_d, &st.lowindex, &raw, &partial);
      if (s == KC_ERR_RESOURCE) {
        throw Failure(s, "node budget exhausted after "
                             + std::to_string(partial) + " classes");
      }
      check(s);
      out.handle.reset(raw);
      for (std::size_t i = 0; i < kc_subgroups_count(raw); ++i) {
        out.info.push_back(class_info(raw, i, true));
      }
      return out;
    }

    std::string summarize(std::vector<ClassInfo> const& cs, std::size_t d,
                          std::string const& ty) {
      std::map<std::string, std::size_t> counts;
      for (auto const& c : cs) {
        if (c.d == d && c.ty == ty) {
          ++counts[c.hom + " " + cp_text(c.cp)];
        }
      }
      std::string s;
      for (auto const& [k, n] : counts) {
        s += (s.empty() ? "" : ", ") + k + (n > 1 ? " x" + std::to_string(n) : "");
      }
      return s.empty() ? "no " + ty + " class" : s;
    }

    void coverings_check(Reporter& rep, std::string const& label,
                         Classes const& cs, json const& oracle,
                         std::size_t max_d) {
      bool const            complete = oracle.value("complete", false);
      std::vector<bool>     used(cs.info.size(), false);
      std::vector<std::size_t> degrees;
      for (auto const& row : oracle.at("rows")) {
        std::size_t d = row.at("d");
        if (d > max_d) {
          continue;
        }
        degrees.push_back(d);
        std::string ty  = row.at("ty");
        std::string hom = row.at("hom");
        std::optional<std::size_t> cp;
        if (!row["cp"].is_null()) {
          cp = row["cp"].get<std::size_t>();
        }
        std::string const conflict = row.value("conflict", "");
        std::string const item = label + " d=" + std::to_string(d) + " " + ty
                                 + " " + hom + " " + cp_text(cp);
        bool found = false;
        for (std::size_t i = 0; i < cs.info.size() && !found; ++i) {
          auto const& c = cs.info[i];
          if (!used[i] && c.d == d && c.ty == ty && c.hom == hom
              && (!cp || c.cp == cp)) {
            used[i] = true;
            found   = true;
          }
        }
        if (found) {
          rep.add({"PASS", item, "present", "present",
                   conflict.empty() ? "" : "flagged row matched: " + conflict});
        } else {
          rep.add({conflict.empty() ? "FAIL" : "WARN", item,
                   summarize(cs.info, d, ty), "present", conflict});
        }
      }
      if (!complete) {
        return;
      }
      for (std::size_t i = 0; i < cs.info.size(); ++i) {
        auto const& c = cs.info[i];
        if (!used[i]
            && std::find(degrees.begin(), degrees.end(), c.d) != degrees.end()) {
          rep.add({"FAIL",
                   label + " d=" + std::to_string(c.d) + " " + c.ty + " "
                       + c.hom + " " + cp_text(c.cp),
                   "present", "absent", "class missing from the oracle rows"});
        }
      }
    }

    void povm_check(Reporter& rep, std::string const& label,
                    Classes const& cs, json const& rows, std::size_t max_d,
                    kc_povm_options const& opts) {
      std::map<std::size_t, PovmSummary> cache;
      auto scan = [&](std::size_t i) -> PovmSummary const& {
        auto it = cache.find(i);
        if (it == cache.end()) {
          it = cache.emplace(i, povm_summary(cs.handle.get(), i, opts)).first;
        }
        return it->second;
      };
      for (auto const& row : rows) {
        std::size_t d = row.at("d");
        if (d > max_d) {
          continue;
        }
        std::string ty = row.at("ty");
        std::optional<std::string> hom;
        if (!row["hom"].is_null()) {
          hom = row["hom"].get<std::string>();
        }
        std::optional<std::size_t> cp, pp;
        if (!row["cp"].is_null()) {
          cp = row["cp"].get<std::size_t>();
        }
        if (!row["pp"].is_null()) {
          pp = row["pp"].get<std::size_t>();
        }
        auto const  rk  = row.at("rk").get<std::vector<std::size_t>>();
        bool const  sic = row.value("sic", false);
        std::string const conflict = row.value("conflict", "");

        std::string item = label + " povm d=" + std::to_string(d) + " " + ty;
        if (hom) {
          item += " " + *hom;
        }
        item += " " + cp_text(cp);
        std::string expected = "rk " + join(rk);
        if (pp) {
          expected += " pp " + std::to_string(*pp);
        }
        if (sic) {
          expected += " SIC";
        }

        bool        ok = false;
        std::string computed;
        for (std::size_t i = 0; i < cs.info.size(); ++i) {
          auto const& c = cs.info[i];
          if (c.d != d || c.ty != ty || (hom && c.hom != *hom)
              || (cp && c.cp != cp)) {
            continue;
          }
          auto const& s = scan(i);
          if (!s.available) {
            computed += (computed.empty() ? "" : " | ") + std::string("none");
            continue;
          }
          std::size_t const best = s.best.gram_rank;
          bool match = best == *std::max_element(rk.begin(), rk.end());
          for (auto r : rk) {
            match = match
                    && std::find(s.ranks.begin(), s.ranks.end(), r)
                           != s.ranks.end();
          }
          match = match && (!pp || s.best.pp_field_norm == *pp);
          match = match && (!sic || s.best.is_sic);
          ok    = ok || match;
          computed += (computed.empty() ? "" : " | ") + ("rk " + std::to_string(best))
                      + " pp " + std::to_string(s.best.pp_field_norm)
                      + " (numeric " + std::to_string(s.best.pp) + ")"
                      + (s.best.is_sic ? " SIC" : "");
        }
        if (computed.empty()) {
          computed = "no matching class";
        }
        rep.add({ok ? "PASS" : conflict.empty() ? "FAIL" : "WARN", item,
                 computed, expected, ok ? "" : conflict});
      }
      double worst = 0;
      for (auto const& [i, s] : cache) {
        worst = std::max(worst, s.orbit_sum_error);
      }
      if (!cache.empty()) {
        std::ostringstream w;
        w << worst;
        rep.add({worst <= 1e-9 ? "PASS" : "FAIL", label + " orbit sums",
                 "max deviation " + w.str(), "<= 1e-9",
                 std::to_string(cache.size()) + " fiducials"});
      }
    }

    PresentationPtr from_catalog(std::string const& key) {
      kc_presentation* raw = nullptr;
      check(kc_presentation_from_catalog(key.c_str(), &raw));
      return PresentationPtr(raw);
    }

    void knot_table(Reporter& rep, std::string const& key, Settings const& st,
                    std::size_t max_d, kc_povm_options const& opts) {
      json const entry = catalog_entry(key);
      json const& o    = entry.at("oracle");
      auto        p    = from_catalog(key);
      if (o.contains("eta")) {
        eta_check(rep, key, p.get(), o["eta"], st);
      }
      guarded(rep, key + " coverings", [&] {
        auto cs = classes(p.get(), max_d, st);
        if (o.contains("coverings")) {
          coverings_check(rep, key, cs, o["coverings"], max_d);
        }
        if (o.contains("povm")) {
          povm_check(rep, key, cs, o["povm"]["rows"], max_d, opts);
        }
      });
    }

    int table_t1(Settings const& st, std::optional<std::size_t> max_d,
                 kc_povm_options const& opts, std::ostream& out) {
      Reporter rep("t1");
      knot_table(rep, "trefoil", st, max_d.value_or(6), opts);
      auto other = from_catalog("trefoil_torus_form");
      eta_check(rep, "trefoil_torus_form",
                other.get(), catalog_entry("trefoil_torus_form")["oracle"]["eta"],
                st);
      return rep.finish(out, st.format);
    }

    int table_t2(Settings const& st, std::optional<std::size_t> max_d,
                 kc_povm_options const& opts, std::ostream& out) {
      Reporter rep("t2");
      knot_table(rep, "figure8", st, max_d.value_or(5), opts);
      return rep.finish(out, st.format);
    }

    int table_t4(Settings const& st, std::optional<std::size_t> max_d,
                 kc_povm_options const& opts, std::ostream& out) {
      Reporter rep("t4");
      json const o = catalog_entry("borromean")["oracle"];
      knot_table(rep, "borromean", st,
                 max_d.value_or(o["coverings"]["max_degree"].get<std::size_t>()),
                 opts);
      return rep.finish(out, st.format);
    }

    int table_t5(Settings const& st, std::optional<std::size_t> max_d,
                 std::ostream& out) {
      Reporter          rep("t5");
      std::size_t const limit = max_d.value_or(10);
      for (std::string key : {"trefoil", "figure8"}) {
        json const o = catalog_entry(key)["oracle"];
        if (!o.contains("surgeries")) {
          continue;
        }
        for (auto const& s : o["surgeries"]) {
          long const        p = s["p"], q = s["q"];
          std::size_t const c = s["component"];
          std::string const item = key + "(" + std::to_string(p) + ","
                                   + std::to_string(q) + ")";
          kc_presentation* raw = nullptr;
          check(kc_presentation_surgery(key.c_str(), c, p, q, &raw));
          PresentationPtr pres(raw);
          json            eta = {{"values", s["eta"]}};
          auto values = s["eta"].get<std::vector<std::size_t>>();
          values.resize(std::min(values.size(), limit));
          eta["values"] = values;
          eta_check(rep, item, pres.get(), eta, st);
          if (!s["order"].is_null()) {
            guarded(rep, item + " order", [&] {
              std::size_t n = 0;
              check(kc_coset_count(pres.get(), "", st.max_cosets, &n));
              std::size_t want = s["order"];
              rep.add({n == want ? "PASS" : "FAIL",
                       item + " trivial-subgroup cosets", std::to_string(n),
                       std::to_string(want), ""});
            });
          }
        }
      }
      for (std::string key : {"brieskorn_235", "brieskorn_237"}) {
        json const o = catalog_entry(key)["oracle"];
        auto       p = from_catalog(key);
        eta_check(rep, key, p.get(), o["eta"], st);
        if (o.contains("order")) {
          guarded(rep, key + " order", [&] {
            std::size_t n = 0;
            check(kc_coset_count(p.get(), "", st.max_cosets, &n));
            std::size_t want = o["order"];
            rep.add({n == want ? "PASS" : "FAIL",
                     key + " trivial-subgroup cosets", std::to_string(n),
                     std::to_string(want), ""});
          });
        }
      }
      return rep.finish(out, st.format);
    }

  }  // namespace

  int cmd_reproduce(std::string const& table, Settings const& st,
                    std::optional<std::size_t> max_d,
                    kc_povm_options const& opts, std::ostream& out) {
    if (table == "t1") {
      return table_t1(st, max_d, opts, out);
    }
    if (table == "t2") {
      return table_t2(st, max_d, opts, out);
    }
    if (table == "t4") {
      return table_t4(st, max_d, opts, out);
    }
    if (table == "t5") {
      return table_t5(st, max_d, out);
    }
    std::cerr << "unknown table '" << table << "'; expected t1, t2, t4 or t5\n";
    return exit_usage;
  }

}  // namespace kccli
