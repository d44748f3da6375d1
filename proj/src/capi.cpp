#include "knotcover/knotcover.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "knotcover/catalog.hpp"
#include "knotcover/enumerate.hpp"
#include "knotcover/error.hpp"
#include "knotcover/homology.hpp"
#include "knotcover/lowindex.hpp"
#include "knotcover/povm.hpp"
#include "knotcover/presentation.hpp"

struct kc_presentation {
  knotcover::Presentation              presentation;
  std::vector<knotcover::Peripheral>   peripherals;
};

struct kc_subgroups {
  knotcover::Presentation                   presentation;
  std::vector<knotcover::Peripheral>        peripherals;
  std::vector<knotcover::SubgroupRecord>    records;
};

struct kc_povm {
  knotcover::PauliGroupSpec spec;
  knotcover::PovmScan       scan;
};

namespace {

  using namespace knotcover;
  using nlohmann::json;

  thread_local std::string last_error;

  kc_status fail(kc_status s, std::string msg) {
    last_error = std::move(msg);
    return s;
  }

  template <class F>
  kc_status guarded(F&& f) {
    try {
      f();
      return KC_OK;
    } catch (Error const& e) {
      return fail(static_cast<kc_status>(e.code()), e.what());
    } catch (std::bad_alloc const&) {
      return fail(KC_ERR_RESOURCE, "out of memory");
    } catch (std::exception const& e) {
      return fail(KC_ERR_INTERNAL, e.what());
    } catch (...) {
      return fail(KC_ERR_INTERNAL, "unknown error");
    }
  }

  char* dup(std::string const& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
      throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
  }

  void require(bool ok, char const* what) {
    if (!ok) {
      throw Error(ErrorCode::invalid_argument, what);
    }
  }

  SubgroupRecord const& record(kc_subgroups const* s, std::size_t i) {
    require(s != nullptr, "null subgroup list");
    if (i >= s->records.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "subgroup " + std::to_string(i) + " out of range");
    }
    return s->records[i];
  }

  PovmReport const& report(kc_povm const* v, std::size_t r) {
    require(v != nullptr, "null povm scan");
    if (r >= v->scan.reports.size()) {
      throw Error(ErrorCode::invalid_argument,
                  "report " + std::to_string(r) + " out of range");
    }
    return v->scan.reports[r];
  }

  std::vector<Word> parse_word_list(char const* text, Presentation const& p) {
    std::vector<Word> out;
    if (text == nullptr) {
      return out;
    }
    std::string_view rest(text);
    while (!rest.empty()) {
      auto        comma = rest.find(',');
      auto        piece = rest.substr(0, comma);
      auto const  b     = piece.find_first_not_of(" \t");
      if (b != std::string_view::npos) {
        out.push_back(parse_word(piece, p));
      }
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  LowIndexOptions to_options(kc_lowindex_options const* o) {
    LowIndexOptions out;
    if (o != nullptr) {
      out.node_budget          = o->node_budget;
      out.image_order_cap      = o->image_order_cap;
      out.eliminate_generators = o->eliminate_generators != 0;
    }
    return out;
  }

  json words_json(std::vector<Peripheral> const& per,
                  std::vector<std::string> const& names) {
    json a = json::array();
    for (auto const& x : per) {
      a.push_back({{"meridian", render_word(x.meridian, names)},
                   {"longitude", render_word(x.longitude, names)}});
    }
    return a;
  }

  json oracle_json(Oracle const& o) {
    json j = json::object();
    if (o.eta) {
      json alt = json::object();
      for (auto const& [d, v] : o.eta->alternatives) {
        alt[std::to_string(d)] = v;
      }
      j["eta"] = {{"values", o.eta->values},
                  {"source", o.eta->source},
                  {"alternatives", alt},
                  {"note", o.eta->note}};
    }
    if (o.coverings) {
      json rows = json::array();
      for (auto const& r : o.coverings->rows) {
        json row = {{"d", r.d}, {"ty", r.ty}, {"hom", r.hom}};
        row["cp"] = r.cp ? json(*r.cp) : json(nullptr);
        row["comment"]  = r.comment;
        row["conflict"] = r.conflict;
        rows.push_back(std::move(row));
      }
      j["coverings"] = {{"source", o.coverings->source},
                        {"complete", o.coverings->complete},
                        {"max_degree", o.coverings->max_degree},
                        {"rows", rows}};
    }
    if (!o.povm.empty()) {
      json rows = json::array();
      for (auto const& r : o.povm) {
        json row = {{"d", r.d}, {"ty", r.ty}};
        row["hom"]      = r.hom ? json(*r.hom) : json(nullptr);
        row["cp"]       = r.cp ? json(*r.cp) : json(nullptr);
        row["rk"]       = r.rk;
        row["pp"]       = r.pp ? json(*r.pp) : json(nullptr);
        row["sic"]      = r.sic;
        row["comment"]  = r.comment;
        row["conflict"] = r.conflict;
        rows.push_back(std::move(row));
      }
      j["povm"] = {{"source", o.povm_source}, {"rows", rows}};
    }
    if (!o.surgeries.empty()) {
      json rows = json::array();
      for (auto const& s : o.surgeries) {
        json row = {{"component", s.component}, {"p", s.p}, {"q", s.q},
                    {"name", s.name},           {"eta", s.eta},
                    {"source", s.source}};
        row["order"] = s.order ? json(*s.order) : json(nullptr);
        rows.push_back(std::move(row));
      }
      j["surgeries"] = rows;
    }
    if (o.order) {
      j["order"] = *o.order;
    }
    return j;
  }

  json angles_json(std::vector<AngleClass> const& a) {
    json out = json::array();
    for (auto const& c : a) {
      out.push_back({{"value", c.value}, {"count", c.count}});
    }
    return out;
  }

}  // namespace

extern "C" {

KC_API const char* kc_version(void) {
  return "1.0.0";
}

KC_API const char* kc_status_name(kc_status status) {
  switch (status) {
    case KC_OK: return "ok";
    case KC_ERR_PARSE: return "parse error";
    case KC_ERR_UNKNOWN_GENERATOR: return "unknown generator";
    case KC_ERR_UNKNOWN_KEY: return "unknown key";
    case KC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KC_ERR_RESOURCE: return "resource limit";
    case KC_ERR_INCOMPLETE_TABLE: return "incomplete table";
    case KC_ERR_MISSING_DATA: return "missing data";
    case KC_ERR_IO: return "i/o error";
    case KC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

KC_API const char* kc_last_error(void) {
  return last_error.c_str();
}

KC_API void kc_string_free(char* s) {
  std::free(s);
}

KC_API kc_status kc_presentation_parse(const char* text, kc_presentation** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new kc_presentation{parse_presentation(text), {}};
  });
}

KC_API kc_status kc_presentation_from_catalog(const char* key,
                                              kc_presentation** out) {
  return guarded([&] {
    require(key != nullptr && out != nullptr, "null argument");
    auto const& e = Catalog::builtin().get(key);
    *out          = new kc_presentation{e.presentation, e.peripherals};
  });
}

KC_API kc_status kc_presentation_surgery(const char* key, size_t component,
                                         long p, long q,
                                         kc_presentation** out) {
  return guarded([&] {
    require(key != nullptr && out != nullptr, "null argument");
    auto const& e = Catalog::builtin().get(key);
    *out = new kc_presentation{surgery_quotient(e, component, p, q), {}};
  });
}

KC_API kc_status kc_presentation_render(const kc_presentation* p, char** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = dup(render(p->presentation));
  });
}

KC_API size_t kc_presentation_num_generators(const kc_presentation* p) {
  return p == nullptr ? 0 : p->presentation.num_generators();
}

KC_API size_t kc_presentation_num_relators(const kc_presentation* p) {
  return p == nullptr ? 0 : p->presentation.relators().size();
}

KC_API int kc_presentation_has_peripherals(const kc_presentation* p) {
  return p != nullptr && !p->peripherals.empty() ? 1 : 0;
}

KC_API void kc_presentation_free(kc_presentation* p) {
  delete p;
}

KC_API kc_status kc_catalog_keys(char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "null argument");
    *out_json = dup(json(Catalog::builtin().keys()).dump());
  });
}

KC_API kc_status kc_catalog_entry_json(const char* key, char** out_json) {
  return guarded([&] {
    require(key != nullptr && out_json != nullptr, "null argument");
    auto const& e     = Catalog::builtin().get(key);
    auto const  names = e.presentation.generator_names();
    json        j     = {{"key", e.key},
                         {"name", e.name},
                         {"presentation", render(e.presentation)},
                         {"components", e.components},
                         {"peripherals", words_json(e.peripherals, names)},
                         {"source", e.source},
                         {"oracle", oracle_json(e.oracle)}};
    *out_json = dup(j.dump());
  });
}

KC_API kc_status kc_catalog_check_peripherals(const char* key,
                                              size_t max_index, int* commute) {
  return guarded([&] {
    require(key != nullptr && commute != nullptr, "null argument");
    auto const r = check_peripherals(Catalog::builtin().get(key), max_index);
    if (!r.commute) {
      last_error = "peripheral words do not commute: " + r.failure;
    }
    *commute = r.commute ? 1 : 0;
  });
}

KC_API kc_status kc_coset_count(const kc_presentation* p,
                                const char* subgroup_words, size_t max_cosets,
                                size_t* out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    auto const h = parse_word_list(subgroup_words, p->presentation);
    *out = enumerate_cosets(p->presentation, h, max_cosets).num_cosets();
  });
}

KC_API kc_status kc_coset_table_csv(const kc_presentation* p,
                                    const char* subgroup_words,
                                    size_t max_cosets, char** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    auto const h = parse_word_list(subgroup_words, p->presentation);
    auto const t = enumerate_cosets(p->presentation, h, max_cosets);
    *out         = dup(t.to_csv(p->presentation.generator_names()));
  });
}

KC_API void kc_lowindex_options_init(kc_lowindex_options* opts) {
  if (opts != nullptr) {
    LowIndexOptions const d;
    opts->node_budget          = d.node_budget;
    opts->image_order_cap      = d.image_order_cap;
    opts->eliminate_generators = d.eliminate_generators ? 1 : 0;
  }
}

KC_API kc_status kc_eta_sequence(const kc_presentation* p, size_t max_index,
                                 const kc_lowindex_options* opts,
                                 size_t* counts, size_t* partial) {
  return guarded([&] {
    require(p != nullptr && counts != nullptr, "null argument");
    try {
      auto const eta = eta_sequence(p->presentation, max_index, to_options(opts));
      for (std::size_t d = 0; d < max_index; ++d) {
        counts[d] = eta.counts.at(d);
      }
    } catch (ResourceError const& e) {
      if (partial != nullptr) {
        *partial = e.partial_progress();
      }
      throw;
    }
  });
}

KC_API kc_status kc_low_index(const kc_presentation* p, size_t max_index,
                              const kc_lowindex_options* opts,
                              kc_subgroups** out, size_t* partial) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    try {
      auto recs = low_index_subgroups(p->presentation, max_index,
                                      to_options(opts));
      *out = new kc_subgroups{p->presentation, p->peripherals, std::move(recs)};
    } catch (ResourceError const& e) {
      if (partial != nullptr) {
        *partial = e.partial_progress();
      }
      throw;
    }
  });
}

KC_API size_t kc_subgroups_count(const kc_subgroups* s) {
  return s == nullptr ? 0 : s->records.size();
}

KC_API void kc_subgroups_free(kc_subgroups* s) {
  delete s;
}

KC_API size_t kc_subgroup_index(const kc_subgroups* s, size_t i) {
  return s == nullptr || i >= s->records.size() ? 0 : s->records[i].index;
}

KC_API const char* kc_subgroup_type(const kc_subgroups* s, size_t i) {
  if (s == nullptr || i >= s->records.size()) {
    return "";
  }
  return to_string(s->records[i].covering_type).data();
}

KC_API size_t kc_subgroup_class_size(const kc_subgroups* s, size_t i) {
  return s == nullptr || i >= s->records.size() ? 0 : s->records[i].class_size;
}

KC_API size_t kc_subgroup_image_order(const kc_subgroups* s, size_t i) {
  if (s == nullptr || i >= s->records.size()) {
    return 0;
  }
  return s->records[i].image_order.value_or(0);
}

KC_API kc_status kc_subgroup_homology(const kc_subgroups* s, size_t i,
                                      char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& r = record(s, i);
    auto const  h = first_homology(rewrite_presentation(s->presentation, r.table));
    *out          = dup(render_homology(h));
  });
}

KC_API kc_status kc_subgroup_cusps(const kc_subgroups* s, size_t i,
                                   size_t* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& r = record(s, i);
    *out          = cusp_count(r, s->peripherals);
  });
}

KC_API kc_status kc_subgroup_permutations_json(const kc_subgroups* s, size_t i,
                                               char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = dup(json(record(s, i).rep.images).dump());
  });
}

KC_API kc_status kc_subgroup_table_csv(const kc_subgroups* s, size_t i,
                                       char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& r = record(s, i);
    *out          = dup(r.table.to_csv(s->presentation.generator_names()));
  });
}

KC_API kc_status kc_subgroup_rewrite(const kc_subgroups* s, size_t i,
                                     kc_presentation** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& r = record(s, i);
    *out = new kc_presentation{rewrite_presentation(s->presentation, r.table),
                               {}};
  });
}

KC_API void kc_povm_options_init(kc_povm_options* opts) {
  if (opts != nullptr) {
    PovmTolerances const t;
    opts->element_cap   = 20'000;
    opts->factors       = nullptr;
    opts->num_factors   = 0;
    opts->rank_relative = t.rank_relative;
    opts->sic           = t.sic;
    opts->pp_gap        = t.pp_gap;
    opts->stabilizer    = t.stabilizer;
    opts->dedup         = t.dedup;
  }
}

KC_API kc_status kc_povm_scan(const kc_subgroups* s, size_t i,
                              const kc_povm_options* opts, kc_povm** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const&     r = record(s, i);
    kc_povm_options o;
    kc_povm_options_init(&o);
    if (opts != nullptr) {
      o = *opts;
    }
    for (double v : {o.rank_relative, o.sic, o.pp_gap, o.stabilizer, o.dedup}) {
      require(v > 0 && std::isfinite(v), "tolerances must be positive");
    }
    PovmTolerances tol{o.rank_relative, o.sic, o.pp_gap, o.stabilizer, o.dedup};
    auto spec = o.factors != nullptr && o.num_factors > 0
                    ? PauliGroupSpec(std::vector<std::size_t>(
                        o.factors, o.factors + o.num_factors))
                    : PauliGroupSpec::for_dimension(r.index);
    auto scan = povm_scan(r, spec, o.element_cap, tol);
    *out      = new kc_povm{std::move(spec), std::move(scan)};
  });
}

KC_API size_t kc_povm_report_count(const kc_povm* v) {
  return v == nullptr ? 0 : v->scan.reports.size();
}

KC_API size_t kc_povm_best(const kc_povm* v) {
  return v == nullptr ? 0 : v->scan.best;
}

KC_API int kc_povm_truncated(const kc_povm* v) {
  return v != nullptr && v->scan.truncated ? 1 : 0;
}

KC_API int kc_povm_stabilizer_pool(const kc_povm* v) {
  return v != nullptr && v->scan.stabilizer_pool ? 1 : 0;
}

KC_API kc_status kc_povm_get_report(const kc_povm* v, size_t r,
                                    kc_povm_report* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& rep     = report(v, r);
    out->dimension      = rep.dimension;
    out->gram_rank      = rep.gram.gram_rank;
    out->pp             = rep.gram.pp;
    out->pp_field_norm  = rep.field_norm.pp;
    out->is_ic          = rep.gram.is_ic ? 1 : 0;
    out->is_equiangular = rep.gram.is_equiangular ? 1 : 0;
    out->is_sic         = rep.gram.is_sic ? 1 : 0;
    out->stabilizer_fiducial = rep.stabilizer_fiducial ? 1 : 0;
  });
}

KC_API kc_status kc_povm_fiducial(const kc_povm* v, size_t r, double* re,
                                  double* im) {
  return guarded([&] {
    require(re != nullptr && im != nullptr, "null argument");
    auto const& rep = report(v, r);
    for (std::size_t k = 0; k < rep.fiducial.dimension(); ++k) {
      re[k] = rep.fiducial[k].real();
      im[k] = rep.fiducial[k].imag();
    }
  });
}

KC_API kc_status kc_povm_orbit_sum_error(const kc_povm* v, size_t r,
                                         double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& rep   = report(v, r);
    auto const  orbit = pauli_orbit(rep.fiducial, v->spec);
    auto const  d     = static_cast<Eigen::Index>(rep.dimension);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (auto const& pr : orbit) {
      sum += pr;
    }
    sum -= static_cast<double>(rep.dimension) * ComplexMatrix::Identity(d, d);
    *out = sum.cwiseAbs().maxCoeff();
  });
}

KC_API kc_status kc_povm_report_json(const kc_povm* v, size_t r, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto const& rep = report(v, r);
    json        fid = json::array();
    for (std::size_t k = 0; k < rep.fiducial.dimension(); ++k) {
      fid.push_back({rep.fiducial[k].real(), rep.fiducial[k].imag()});
    }
    json j = {{"dimension", rep.dimension},
              {"factors", v->spec.factor_dims()},
              {"fiducial", fid},
              {"stabilizer_fiducial", rep.stabilizer_fiducial},
              {"gram_rank", rep.gram.gram_rank},
              {"pp", rep.gram.pp},
              {"pp_field_norm", rep.field_norm.pp},
              {"is_ic", rep.gram.is_ic},
              {"is_equiangular", rep.gram.is_equiangular},
              {"is_sic", rep.gram.is_sic},
              {"angles", angles_json(rep.gram.angles)},
              {"field_norm_angles", angles_json(rep.field_norm.angles)}};
    *out = dup(j.dump());
  });
}

KC_API void kc_povm_free(kc_povm* v) {
  delete v;
}

}  // extern "C"
