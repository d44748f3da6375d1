#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kccli {

  using nlohmann::json;

  int exit_code_for(kc_status s) {
    switch (s) {
      case KC_OK: return exit_ok;
      case KC_ERR_PARSE:
      case KC_ERR_UNKNOWN_GENERATOR:
      case KC_ERR_UNKNOWN_KEY:
      case KC_ERR_INVALID_ARGUMENT:
      case KC_ERR_MISSING_DATA:
      case KC_ERR_IO: return exit_usage;
      case KC_ERR_RESOURCE: return exit_resource;
      default: return exit_mismatch;
    }
  }

  std::string Source::label() const {
    std::string base = !group.empty() ? group
                       : !file.empty() ? file
                                       : presentation;
    if (!surgery.empty()) {
      base += "(" + surgery + ")";
      if (component != 0) {
        base += "[" + std::to_string(component) + "]";
      }
    }
    return base;
  }

  namespace {

    std::pair<long, long> parse_slope(std::string const& s) {
      auto comma = s.find(',');
      if (comma == std::string::npos) {
        throw Failure(KC_ERR_INVALID_ARGUMENT,
                      "surgery slope must be 'p,q', got '" + s + "'");
      }
      try {
        return {std::stol(s.substr(0, comma)), std::stol(s.substr(comma + 1))};
      } catch (std::exception const&) {
        throw Failure(KC_ERR_INVALID_ARGUMENT,
                      "surgery slope must be 'p,q', got '" + s + "'");
      }
    }

    std::string csv_cell(std::string const& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
      }
      std::string out = "\"";
      for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
      }
      return out + "\"";
    }

    template <class T>
    std::string opt(std::optional<T> const& v) {
      return v ? std::to_string(*v) : std::string();
    }

    template <class T>
    json opt_json(std::optional<T> const& v) {
      return v ? json(*v) : json(nullptr);
    }

    SubgroupsPtr subgroups(kc_presentation const* p, std::size_t max_d,
                           Settings const& st) {
      kc_subgroups* raw     = nullptr;
      std::size_t   partial = 0;
      kc_status     s = kc_low_index(p, max_d, &st.lowindex, &raw, &partial);
      if (s == KC_ERR_RESOURCE) {
        throw Failure(s, std::string("node budget exhausted after ")
                             + std::to_string(partial)
                             + " classes: " + kc_last_error());
      }
      check(s);
      return SubgroupsPtr(raw);
    }

  }  // namespace

  PresentationPtr load(Source const& src) {
    int given = !src.group.empty() + !src.presentation.empty()
                + !src.file.empty();
    if (given != 1) {
      throw Failure(KC_ERR_INVALID_ARGUMENT,
                    "give exactly one of --group, --presentation, --file");
    }
    kc_presentation* raw = nullptr;
    if (!src.surgery.empty()) {
      if (src.group.empty()) {
        throw Failure(KC_ERR_INVALID_ARGUMENT,
                      "--surgery needs a catalog --group");
      }
      auto [p, q] = parse_slope(src.surgery);
      check(kc_presentation_surgery(src.group.c_str(), src.component, p, q,
                                    &raw));
    } else if (!src.group.empty()) {
      check(kc_presentation_from_catalog(src.group.c_str(), &raw));
    } else if (!src.presentation.empty()) {
      check(kc_presentation_parse(src.presentation.c_str(), &raw));
    } else {
      std::ifstream in(src.file);
      if (!in) {
        throw Failure(KC_ERR_IO, "cannot read " + src.file);
      }
      std::stringstream ss;
      ss << in.rdbuf();
      check(kc_presentation_parse(ss.str().c_str(), &raw));
    }
    return PresentationPtr(raw);
  }

  json catalog_entry(std::string const& key) {
    char* raw = nullptr;
    check(kc_catalog_entry_json(key.c_str(), &raw));
    return json::parse(take(raw));
  }

  void write_rows(std::ostream& out, std::vector<Row> const& rows,
                  std::string const& format) {
    if (format == "json") {
      json a = json::array();
      for (auto const& r : rows) {
        a.push_back({{"d", r.d},
                     {"ty", r.ty},
                     {"hom", r.hom},
                     {"cp", opt_json(r.cp)},
                     {"rk", opt_json(r.rk)},
                     {"pp", opt_json(r.pp)},
                     {"comment", r.comment}});
      }
      out << a.dump(2) << "\n";
      return;
    }
    out << "d,ty,hom,cp,rk,pp,comment\n";
    for (auto const& r : rows) {
      out << r.d << ',' << r.ty << ',' << csv_cell(r.hom) << ',' << opt(r.cp)
          << ',' << opt(r.rk) << ',' << opt(r.pp) << ','
          << csv_cell(r.comment) << '\n';
    }
  }

  ClassInfo class_info(kc_subgroups const* s, std::size_t i, bool homology) {
    ClassInfo c;
    c.d           = kc_subgroup_index(s, i);
    c.ty          = kc_subgroup_type(s, i);
    c.class_size  = kc_subgroup_class_size(s, i);
    c.image_order = kc_subgroup_image_order(s, i);
    if (homology) {
      char* raw = nullptr;
      check(kc_subgroup_homology(s, i, &raw));
      c.hom = take(raw);
    }
    std::size_t cp = 0;
    kc_status   st = kc_subgroup_cusps(s, i, &cp);
    if (st == KC_OK) {
      c.cp = cp;
    } else if (st != KC_ERR_MISSING_DATA) {
      check(st);
    }
    return c;
  }

  PovmSummary povm_summary(kc_subgroups const* s, std::size_t i,
                           kc_povm_options const& opts) {
    PovmSummary out;
    kc_povm*    raw = nullptr;
    check(kc_povm_scan(s, i, &opts, &raw));
    PovmPtr v(raw);
    out.truncated       = kc_povm_truncated(v.get()) != 0;
    out.stabilizer_pool = kc_povm_stabilizer_pool(v.get()) != 0;
    std::size_t n       = kc_povm_report_count(v.get());
    for (std::size_t r = 0; r < n; ++r) {
      kc_povm_report rep{};
      check(kc_povm_get_report(v.get(), r, &rep));
      out.ranks.push_back(rep.gram_rank);
    }
    if (n == 0) {
      return out;
    }
    std::size_t best = kc_povm_best(v.get());
    out.available    = true;
    check(kc_povm_get_report(v.get(), best, &out.best));
    out.fiducial_re.resize(out.best.dimension);
    out.fiducial_im.resize(out.best.dimension);
    check(kc_povm_fiducial(v.get(), best, out.fiducial_re.data(),
                           out.fiducial_im.data()));
    check(kc_povm_orbit_sum_error(v.get(), best, &out.orbit_sum_error));
    char* js = nullptr;
    check(kc_povm_report_json(v.get(), best, &js));
    out.json = take(js);
    return out;
  }

  std::string describe(PovmSummary const& p) {
    if (!p.available) {
      return "no candidate states";
    }
    std::string c = p.best.is_sic ? "SIC" : p.best.is_ic ? "IC" : "not IC";
    if (p.best.pp_field_norm != p.best.pp) {
      c += "; field-norm pp " + std::to_string(p.best.pp_field_norm);
    }
    if (p.stabilizer_pool) {
      c += "; stabilizer states only";
    }
    if (p.truncated) {
      c += "; image above element cap, generators and products scanned";
    }
    return c;
  }

  int cmd_eta(Source const& src, Settings const& st, std::size_t max_d,
              bool oracle, std::ostream& out) {
    auto                     p = load(src);
    std::vector<std::size_t> counts(max_d);
    std::size_t              partial = 0;
    kc_status s = kc_eta_sequence(p.get(), max_d, &st.lowindex, counts.data(),
                                  &partial);
    if (s == KC_ERR_RESOURCE) {
      std::cerr << "node budget exhausted after " << partial
                << " classes; raise --node-budget or KNOTCOVER_NODE_BUDGET\n";
      return exit_resource;
    }
    check(s);

    if (st.format == "json") {
      out << json({{"group", src.label()}, {"eta", counts}}).dump() << "\n";
    } else {
      out << "d,count\n";
      for (std::size_t d = 1; d <= max_d; ++d) {
        out << d << ',' << counts[d - 1] << '\n';
      }
    }
    if (!oracle) {
      return exit_ok;
    }

    if (src.group.empty()) {
      throw Failure(KC_ERR_INVALID_ARGUMENT, "--oracle needs a catalog --group");
    }
    json const               entry = catalog_entry(src.group);
    json const&              o     = entry.at("oracle");
    std::vector<std::size_t> expected;
    json                     alternatives = json::object();
    if (src.surgery.empty()) {
      if (o.contains("eta")) {
        expected     = o["eta"]["values"].get<std::vector<std::size_t>>();
        alternatives = o["eta"]["alternatives"];
      }
    } else {
      auto [pp, qq] = parse_slope(src.surgery);
      if (o.contains("surgeries")) {
        for (auto const& row : o["surgeries"]) {
          if (row["p"] == pp && row["q"] == qq
              && row["component"] == src.component) {
            expected = row["eta"].get<std::vector<std::size_t>>();
          }
        }
      }
    }
    if (expected.empty()) {
      throw Failure(KC_ERR_MISSING_DATA,
                    "no eta oracle for " + src.label());
    }
    bool        ok = true;
    std::size_t n  = std::min(max_d, expected.size());
    for (std::size_t d = 1; d <= n; ++d) {
      auto const key = std::to_string(d);
      if (alternatives.contains(key)) {
        std::cerr << "WARN d=" << d << ": published values "
                  << expected[d - 1] << " and "
                  << alternatives[key].dump() << " disagree; computed "
                  << counts[d - 1] << "\n";
      }
      if (counts[d - 1] != expected[d - 1]) {
        ok = false;
        std::cerr << "FAIL d=" << d << ": computed " << counts[d - 1]
                  << ", expected " << expected[d - 1] << "\n";
      }
    }
    if (max_d > expected.size()) {
      std::cerr << "note: no oracle value beyond d=" << expected.size() << "\n";
    }
    std::cerr << (ok ? "PASS" : "FAIL") << " eta " << src.label()
              << " d<=" << n << "\n";
    return ok ? exit_ok : exit_mismatch;
  }

  int cmd_coverings(Source const& src, Settings const& st, std::size_t max_d,
                    std::string const& dump_dir, std::ostream& out) {
    auto             p = load(src);
    auto             s = subgroups(p.get(), max_d, st);
    std::vector<Row> rows;
    std::size_t      n = kc_subgroups_count(s.get());
    if (!dump_dir.empty()) {
      std::filesystem::create_directories(dump_dir);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto c = class_info(s.get(), i, true);
      Row  r;
      r.d       = c.d;
      r.ty      = c.ty;
      r.hom     = c.hom;
      r.cp      = c.cp;
      r.comment = "class size " + std::to_string(c.class_size);
      if (c.image_order != 0) {
        r.comment += "; image order " + std::to_string(c.image_order);
      }
      rows.push_back(std::move(r));
      if (!dump_dir.empty()) {
        char* csv = nullptr;
        check(kc_subgroup_table_csv(s.get(), i, &csv));
        std::ofstream f(std::filesystem::path(dump_dir)
                        / ("class_" + std::to_string(i) + "_d"
                           + std::to_string(c.d) + ".csv"));
        f << take(csv);
      }
    }
    write_rows(out, rows, st.format);
    return exit_ok;
  }

  int cmd_povm(Source const& src, Settings const& st, std::size_t degree,
               kc_povm_options const& opts, bool all_reports,
               std::ostream& out) {
    auto             p = load(src);
    auto             s = subgroups(p.get(), degree, st);
    std::vector<Row> rows;
    json             detail = json::array();
    std::size_t      n      = kc_subgroups_count(s.get());
    std::size_t      k      = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (kc_subgroup_index(s.get(), i) != degree) {
        continue;
      }
      auto c   = class_info(s.get(), i, true);
      auto sum = povm_summary(s.get(), i, opts);
      Row  r;
      r.d   = c.d;
      r.ty  = c.ty;
      r.hom = c.hom;
      r.cp  = c.cp;
      if (sum.available) {
        r.rk = sum.best.gram_rank;
        r.pp = sum.best.pp;
      }
      r.comment = "class " + std::to_string(k) + ": " + describe(sum);
      rows.push_back(r);
      json j = {{"class", k},
                {"d", c.d},
                {"ty", c.ty},
                {"hom", c.hom},
                {"cp", c.cp ? json(*c.cp) : json(nullptr)},
                {"truncated", sum.truncated},
                {"stabilizer_pool", sum.stabilizer_pool},
                {"orbit_sum_error", sum.orbit_sum_error},
                {"best", sum.available ? json::parse(sum.json) : json(nullptr)}};
      if (all_reports) {
        j["ranks"] = sum.ranks;
      }
      detail.push_back(std::move(j));
      ++k;
    }
    if (st.format == "json") {
      out << detail.dump(2) << "\n";
    } else {
      write_rows(out, rows, st.format);
      if (all_reports) {
        for (auto const& j : detail) {
          out << "# class " << j["class"] << " ranks " << j["ranks"].dump()
              << "\n";
        }
      }
    }
    return exit_ok;
  }

  int cmd_cosets(Source const& src, Settings const& st,
                 std::string const& subgroup, bool table, std::ostream& out) {
    auto p = load(src);
    if (table) {
      char* csv = nullptr;
      check(kc_coset_table_csv(p.get(), subgroup.c_str(), st.max_cosets, &csv));
      out << take(csv);
    } else {
      std::size_t count = 0;
      check(kc_coset_count(p.get(), subgroup.c_str(), st.max_cosets, &count));
      out << count << "\n";
    }
    return exit_ok;
  }

  int cmd_catalog(std::string const& key, std::ostream& out) {
    if (key.empty()) {
      char* raw = nullptr;
      check(kc_catalog_keys(&raw));
      for (auto const& k : json::parse(take(raw))) {
        json e = catalog_entry(k.get<std::string>());
        out << k.get<std::string>() << "\t" << e["name"].get<std::string>()
            << "\n";
      }
      return exit_ok;
    }
    out << catalog_entry(key).dump(2) << "\n";
    return exit_ok;
  }

}  // namespace kccli
