#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotcover/knotcover.h"

namespace kccli {

  enum ExitCode : int {
    exit_ok       = 0,
    exit_mismatch = 1,
    exit_usage    = 2,
    exit_resource = 3,
  };

  class Failure : public std::runtime_error {
   public:
    Failure(kc_status s, std::string const& msg)
        : std::runtime_error(msg), status(s) {}
    kc_status status;
  };

  inline void check(kc_status s) {
    if (s != KC_OK) {
      throw Failure(s, std::string(kc_status_name(s)) + ": " + kc_last_error());
    }
  }

  int exit_code_for(kc_status s);

  inline std::string take(char* s) {
    std::string out(s == nullptr ? "" : s);
    kc_string_free(s);
    return out;
  }

  struct Deleter {
    void operator()(kc_presentation* p) const { kc_presentation_free(p); }
    void operator()(kc_subgroups* s) const { kc_subgroups_free(s); }
    void operator()(kc_povm* v) const { kc_povm_free(v); }
  };
  using PresentationPtr = std::unique_ptr<kc_presentation, Deleter>;
  using SubgroupsPtr    = std::unique_ptr<kc_subgroups, Deleter>;
  using PovmPtr         = std::unique_ptr<kc_povm, Deleter>;

  // Where the group comes from.
  struct Source {
    std::string group;
    std::string presentation;
    std::string file;
    std::string surgery;  // "p,q"
    std::size_t component = 0;

    std::string label() const;
  };

  struct Settings {
    kc_lowindex_options lowindex{};
    std::size_t         max_cosets = 1'000'000;
    std::string         format     = "csv";
  };

  PresentationPtr load(Source const& src);
  nlohmann::json  catalog_entry(std::string const& key);

  // One output row; empty optionals print as empty cells.
  struct Row {
    std::size_t                d = 0;
    std::string                ty;
    std::string                hom;
    std::optional<std::size_t> cp;
    std::optional<std::size_t> rk;
    std::optional<std::size_t> pp;
    std::string                comment;
  };

  void write_rows(std::ostream& out, std::vector<Row> const& rows,
                  std::string const& format);

  // Per-class data shared by coverings, povm and reproduce.
  struct ClassInfo {
    std::size_t                d = 0;
    std::string                ty;
    std::string                hom;
    std::optional<std::size_t> cp;
    std::size_t                class_size = 1;
    std::size_t                image_order = 0;
  };

  ClassInfo class_info(kc_subgroups const* s, std::size_t i, bool homology);

  struct PovmSummary {
    bool                       available = false;
    kc_povm_report             best{};
    std::vector<std::size_t>   ranks;  // every report, in order
    bool                       truncated = false;
    bool                       stabilizer_pool = false;
    double                     orbit_sum_error = 0;
    std::vector<double>        fiducial_re, fiducial_im;
    std::string                json;
  };

  PovmSummary povm_summary(kc_subgroups const* s, std::size_t i,
                           kc_povm_options const& opts);

  std::string describe(PovmSummary const& p);

}  // namespace kccli
