#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotcover/lowindex.hpp"
#include "knotcover/presentation.hpp"

namespace knotcover {

  struct EtaOracle {
    std::vector<std::size_t> values;  // values[d - 1]
    std::string              source;
    // Other published values for a degree, reported as warnings.
    std::map<std::size_t, std::vector<std::size_t>> alternatives;
    std::string                                     note;
  };

  struct CoveringRow {
    std::size_t                d = 0;
    std::string                ty;
    std::string                hom;
    std::optional<std::size_t> cp;
    std::string                comment;
    std::string                conflict;  // nonempty: known inconsistency
  };

  struct CoveringsOracle {
    std::string source;
    // Rows list every class up to max_degree (multiset equality), rather
    // than a selection (containment).
    bool                     complete   = false;
    std::size_t              max_degree = 0;
    std::vector<CoveringRow> rows;
  };

  struct PovmRow {
    std::size_t                d = 0;
    std::string                ty;
    std::optional<std::string> hom;
    std::optional<std::size_t> cp;
    // Ranks observed for the class; the largest is the best rank.
    std::vector<std::size_t>   rk;
    std::optional<std::size_t> pp;
    bool                       sic = false;
    std::string                comment;
    std::string                conflict;
  };

  struct SurgeryOracle {
    std::size_t                component = 0;
    long                       p = 0;
    long                       q = 0;
    std::string                name;
    std::vector<std::size_t>   eta;
    std::optional<std::size_t> order;
    std::string                source;
  };

  struct Oracle {
    std::optional<EtaOracle>       eta;
    std::optional<CoveringsOracle> coverings;
    std::string                    povm_source;
    std::vector<PovmRow>           povm;
    std::vector<SurgeryOracle>     surgeries;
    std::optional<std::size_t>     order;  // finite group order
  };

  struct CatalogEntry {
    std::string             key;
    std::string             name;
    Presentation            presentation;
    std::size_t             components = 0;
    std::vector<Peripheral> peripherals;  // empty or one per component
    std::string             source;       // published, derived or external
    Oracle                  oracle;
  };

  class Catalog {
   public:
    // Embedded catalog, then every *.txt file (with an optional *.json
    // sidecar of the same stem) in $KNOTCOVER_CATALOG_DIR.
    static Catalog const& builtin();

    // Throws ParseError on malformed catalog text and Error(parse) on
    // malformed JSON.
    static Catalog parse(std::string_view catalog_text,
                         std::string_view oracle_json = {});

    static Catalog load_directory(std::filesystem::path const& dir);

    // Entries of `other` replace entries with the same key.
    void merge(Catalog const& other);

    // Throws Error(unknown_key) listing the known keys.
    CatalogEntry const& get(std::string_view key) const;
    bool                contains(std::string_view key) const;
    std::vector<std::string> keys() const;  // in file order

   private:
    std::vector<CatalogEntry> entries_;
  };

  // Quotient by the normal closure of m^p l^q for one component.
  // Throws Error(missing_data) without peripherals and Error(invalid_argument)
  // for a bad component or gcd(p, q) != 1.
  Presentation surgery_quotient(CatalogEntry const& e, std::size_t component,
                                long p, long q);

  struct PeripheralCheck {
    bool        commute = true;
    std::size_t classes_checked = 0;
    std::string failure;  // first offending class, when !commute
  };

  // Checks that each meridian commutes with its longitude in every
  // transitive permutation representation of degree <= max_index.
  PeripheralCheck check_peripherals(CatalogEntry const& e,
                                    std::size_t         max_index,
                                    LowIndexOptions const& opts = {});

}  // namespace knotcover
