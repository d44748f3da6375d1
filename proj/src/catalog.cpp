#include "knotcover/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "catalog_data.hpp"
#include "knotcover/error.hpp"

namespace knotcover {

  namespace {

    using nlohmann::json;

    std::string_view trim(std::string_view s) {
      auto const b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) {
        return {};
      }
      auto const e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    }

    struct Line {
      std::size_t      offset;
      std::size_t      number;
      std::string_view text;
    };

    std::vector<Line> split_lines(std::string_view text) {
      std::vector<Line> out;
      std::size_t       pos = 0;
      std::size_t       n   = 1;
      while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
          end = text.size();
        }
        out.push_back({pos, n++, text.substr(pos, end - pos)});
        pos = end + 1;
      }
      return out;
    }

    [[noreturn]] void fail(Line const& l, std::string const& msg) {
      throw ParseError(l.offset,
                       "line " + std::to_string(l.number) + ": " + msg);
    }

    std::size_t to_size(Line const& l, std::string_view s) {
      std::size_t value = 0;
      if (s.empty()
          || !std::all_of(s.begin(), s.end(),
                          [](char c) { return c >= '0' && c <= '9'; })) {
        fail(l, "expected a nonnegative integer, got '" + std::string(s)
                    + "'");
      }
      for (char c : s) {
        value = value * 10 + static_cast<std::size_t>(c - '0');
      }
      return value;
    }

    void parse_attribute(CatalogEntry& e, Line const& l,
                         std::string_view body) {
      auto const       sp   = body.find_first_of(" \t");
      std::string_view name = body.substr(0, sp);
      std::string_view rest =
          sp == std::string_view::npos ? std::string_view{}
                                       : trim(body.substr(sp));
      try {
        if (name == "name") {
          e.name = std::string(rest);
        } else if (name == "components") {
          e.components = to_size(l, rest);
        } else if (name == "source") {
          if (rest != "published" && rest != "derived" && rest != "external") {
            fail(l, "source must be published, derived or external");
          }
          e.source = std::string(rest);
        } else if (name == "peripheral") {
          auto const semi = rest.find(';');
          if (semi == std::string_view::npos) {
            fail(l, "peripheral needs '<meridian> ; <longitude>'");
          }
          Peripheral per;
          per.meridian  = parse_word(trim(rest.substr(0, semi)), e.presentation);
          per.longitude = parse_word(trim(rest.substr(semi + 1)), e.presentation);
          e.peripherals.push_back(std::move(per));
        } else {
          fail(l, "unknown attribute '" + std::string(name) + "'");
        }
      } catch (ParseError const&) {
        throw;
      } catch (Error const& err) {
        fail(l, err.what());
      }
    }

    void finish(CatalogEntry const& e, Line const& l) {
      if (!e.peripherals.empty() && e.peripherals.size() != e.components) {
        fail(l, "entry '" + e.key + "' has " + std::to_string(e.components)
                    + " components but " + std::to_string(e.peripherals.size())
                    + " peripheral pairs");
      }
    }

    std::vector<CatalogEntry> parse_entries(std::string_view text) {
      std::vector<CatalogEntry> out;
      Line                      start{};
      for (Line const& l : split_lines(text)) {
        std::string_view t = trim(l.text);
        if (t.empty() || t.front() == '#') {
          continue;
        }
        bool const indented = l.text.front() == ' ' || l.text.front() == '\t';
        if (indented) {
          if (out.empty()) {
            fail(l, "attribute before any entry");
          }
          parse_attribute(out.back(), l, t);
          continue;
        }
        if (!out.empty()) {
          finish(out.back(), start);
        }
        auto const colon = t.find(':');
        if (colon == std::string_view::npos) {
          fail(l, "expected '<key>: <presentation>'");
        }
        CatalogEntry e;
        e.key = std::string(trim(t.substr(0, colon)));
        if (e.key.empty()) {
          fail(l, "empty key");
        }
        for (auto const& other : out) {
          if (other.key == e.key) {
            fail(l, "duplicate key '" + e.key + "'");
          }
        }
        try {
          e.presentation = parse_presentation(trim(t.substr(colon + 1)));
        } catch (Error const& err) {
          fail(l, err.what());
        }
        e.source = "external";
        out.push_back(std::move(e));
        start = l;
      }
      if (!out.empty()) {
        finish(out.back(), start);
      }
      return out;
    }

    std::vector<std::size_t> sizes(json const& j) {
      return j.get<std::vector<std::size_t>>();
    }

    EtaOracle parse_eta(json const& j) {
      EtaOracle o;
      o.values = sizes(j.at("values"));
      o.source = j.value("source", "");
      o.note   = j.value("note", "");
      if (j.contains("alternatives")) {
        for (auto const& [k, v] : j.at("alternatives").items()) {
          o.alternatives[std::stoul(k)] = sizes(v);
        }
      }
      return o;
    }

    CoveringsOracle parse_coverings(json const& j) {
      CoveringsOracle o;
      o.source     = j.value("source", "");
      o.complete   = j.value("complete", false);
      o.max_degree = j.value("max_degree", std::size_t{0});
      for (auto const& r : j.at("rows")) {
        CoveringRow row;
        row.d   = r.at("d").get<std::size_t>();
        row.ty  = r.at("ty").get<std::string>();
        row.hom = r.at("hom").get<std::string>();
        if (r.contains("cp")) {
          row.cp = r.at("cp").get<std::size_t>();
        }
        row.comment  = r.value("comment", "");
        row.conflict = r.value("conflict", "");
        o.rows.push_back(std::move(row));
      }
      return o;
    }

    PovmRow parse_povm_row(json const& r) {
      PovmRow row;
      row.d  = r.at("d").get<std::size_t>();
      row.ty = r.at("ty").get<std::string>();
      if (r.contains("hom")) {
        row.hom = r.at("hom").get<std::string>();
      }
      if (r.contains("cp")) {
        row.cp = r.at("cp").get<std::size_t>();
      }
      row.rk = sizes(r.at("rk"));
      if (r.contains("pp")) {
        row.pp = r.at("pp").get<std::size_t>();
      }
      row.sic      = r.value("sic", false);
      row.comment  = r.value("comment", "");
      row.conflict = r.value("conflict", "");
      return row;
    }

    SurgeryOracle parse_surgery(json const& j) {
      SurgeryOracle s;
      s.component = j.value("component", std::size_t{0});
      s.p         = j.at("p").get<long>();
      s.q         = j.at("q").get<long>();
      s.name      = j.value("name", "");
      s.eta       = sizes(j.at("eta"));
      if (j.contains("order")) {
        s.order = j.at("order").get<std::size_t>();
      }
      s.source = j.value("source", "");
      return s;
    }

    Oracle parse_oracle(json const& j) {
      Oracle o;
      if (j.contains("eta")) {
        o.eta = parse_eta(j.at("eta"));
      }
      if (j.contains("coverings")) {
        o.coverings = parse_coverings(j.at("coverings"));
      }
      if (j.contains("povm")) {
        o.povm_source = j.at("povm").value("source", "");
        for (auto const& r : j.at("povm").at("rows")) {
          o.povm.push_back(parse_povm_row(r));
        }
      }
      if (j.contains("surgeries")) {
        for (auto const& s : j.at("surgeries")) {
          o.surgeries.push_back(parse_surgery(s));
        }
      }
      if (j.contains("order")) {
        o.order = j.at("order").at("value").get<std::size_t>();
      }
      return o;
    }

    void attach_oracles(std::vector<CatalogEntry>& entries,
                        std::string_view           text) {
      if (trim(text).empty()) {
        return;
      }
      try {
        json const j = json::parse(text);
        for (auto const& [key, value] : j.items()) {
          if (key.starts_with('_')) {
            continue;
          }
          auto it = std::find_if(entries.begin(), entries.end(),
                                 [&](auto const& e) { return e.key == key; });
          if (it == entries.end()) {
            throw Error(ErrorCode::parse,
                        "oracle data for unknown catalog key '" + key + "'");
          }
          it->oracle = parse_oracle(value);
        }
      } catch (json::exception const& ex) {
        throw Error(ErrorCode::parse,
                    std::string("malformed oracle JSON: ") + ex.what());
      }
    }

    std::string read_file(std::filesystem::path const& path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw Error(ErrorCode::io, "cannot read " + path.string());
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }

  }  // namespace

  Catalog Catalog::parse(std::string_view catalog_text,
                         std::string_view oracle_json) {
    Catalog c;
    c.entries_ = parse_entries(catalog_text);
    attach_oracles(c.entries_, oracle_json);
    return c;
  }

  Catalog Catalog::load_directory(std::filesystem::path const& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
      throw Error(ErrorCode::io, "not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (auto const& item : fs::directory_iterator(dir)) {
      if (item.is_regular_file() && item.path().extension() == ".txt") {
        files.push_back(item.path());
      }
    }
    std::sort(files.begin(), files.end());
    Catalog out;
    for (auto const& f : files) {
      auto        sidecar = fs::path(f).replace_extension(".json");
      std::string oracle  = fs::exists(sidecar) ? read_file(sidecar) : "";
      try {
        out.merge(parse(read_file(f), oracle));
      } catch (Error const& e) {
        throw Error(e.code(), f.string() + ": " + e.what());
      }
    }
    return out;
  }

  Catalog const& Catalog::builtin() {
    static Catalog const instance = [] {
      Catalog c = parse(detail::builtin_catalog_text,
                        detail::builtin_oracle_json);
      if (char const* dir = std::getenv("KNOTCOVER_CATALOG_DIR");
          dir != nullptr && *dir != '\0') {
        c.merge(load_directory(dir));
      }
      return c;
    }();
    return instance;
  }

  void Catalog::merge(Catalog const& other) {
    for (auto const& e : other.entries_) {
      auto it = std::find_if(entries_.begin(), entries_.end(),
                             [&](auto const& x) { return x.key == e.key; });
      if (it == entries_.end()) {
        entries_.push_back(e);
      } else {
        *it = e;
      }
    }
  }

  CatalogEntry const& Catalog::get(std::string_view key) const {
    for (auto const& e : entries_) {
      if (e.key == key) {
        return e;
      }
    }
    std::string known;
    for (auto const& e : entries_) {
      known += (known.empty() ? "" : ", ") + e.key;
    }
    throw Error(ErrorCode::unknown_key, "unknown catalog key '"
                                            + std::string(key)
                                            + "'; known keys: " + known);
  }

  bool Catalog::contains(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](auto const& e) { return e.key == key; });
  }

  std::vector<std::string> Catalog::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (auto const& e : entries_) {
      out.push_back(e.key);
    }
    return out;
  }

  Presentation surgery_quotient(CatalogEntry const& e, std::size_t component,
                                long p, long q) {
    if (e.peripherals.empty()) {
      throw Error(ErrorCode::missing_data,
                  "catalog entry '" + e.key + "' has no peripheral words");
    }
    if (component >= e.peripherals.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "component " + std::to_string(component) + " out of range for '"
                      + e.key + "' (" + std::to_string(e.peripherals.size())
                      + " components)");
    }
    if (std::gcd(p, q) != 1) {
      throw Error(ErrorCode::invalid_argument,
                  "surgery slope (" + std::to_string(p) + ","
                      + std::to_string(q) + ") is not primitive");
    }
    auto const& per = e.peripherals[component];
    Word const  slope =
        concat(power(per.meridian, p), power(per.longitude, q));
    return e.presentation.with_relators({slope});
  }

  PeripheralCheck check_peripherals(CatalogEntry const&    e,
                                    std::size_t            max_index,
                                    LowIndexOptions const& opts) {
    if (e.peripherals.empty()) {
      throw Error(ErrorCode::missing_data,
                  "catalog entry '" + e.key + "' has no peripheral words");
    }
    PeripheralCheck out;
    for (auto const& r : low_index_subgroups(e.presentation, max_index, opts)) {
      ++out.classes_checked;
      for (std::size_t c = 0; c < e.peripherals.size(); ++c) {
        auto const m = word_image(r.rep, e.peripherals[c].meridian);
        auto const l = word_image(r.rep, e.peripherals[c].longitude);
        if (compose(m, l) != compose(l, m)) {
          out.commute = false;
          out.failure = "component " + std::to_string(c) + ", index "
                        + std::to_string(r.index) + " class "
                        + std::to_string(out.classes_checked);
          return out;
        }
      }
    }
    return out;
  }

}  // namespace knotcover
