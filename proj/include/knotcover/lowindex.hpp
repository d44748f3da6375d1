#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "knotcover/enumerate.hpp"
#include "knotcover/presentation.hpp"

namespace knotcover {

  enum class CoveringType { cyclic, regular, irregular };

  // "cyc", "reg" or "irr".
  std::string_view to_string(CoveringType t);

  struct SubgroupRecord {
    std::size_t                index = 0;
    CosetTable                 table;
    PermutationRep             rep;
    CoveringType               covering_type = CoveringType::irregular;
    std::optional<std::size_t> image_order;  // nullopt: above the cap
    std::size_t                class_size = 1;
  };

  // Meridian and longitude of one link component.
  struct Peripheral {
    Word meridian;
    Word longitude;
  };

  struct LowIndexProgress {
    std::uint64_t nodes = 0;
    std::size_t   tables_found = 0;
  };

  struct LowIndexOptions {
    std::uint64_t node_budget     = 100'000'000;
    std::size_t   image_order_cap = 20'000;
    // Search over a presentation with generators eliminated through relators
    // in which they occur once; found tables are lifted back to the original
    // generators and re-validated.
    bool eliminate_generators = true;
    // Called roughly every 2^20 search nodes.
    std::function<void(LowIndexProgress const&)> progress;
  };

  // One record per conjugacy class of subgroups of index <= max_index, in
  // canonical order: by index, then lexicographically by flattened table.
  // Throws ResourceError (partial progress = classes found so far) when the
  // node budget is exhausted.
  std::vector<SubgroupRecord>
  low_index_subgroups(Presentation const&    p,
                      std::size_t            max_index,
                      LowIndexOptions const& opts = {});

  struct EtaSequence {
    std::vector<std::size_t> counts;  // counts[d - 1] = classes of index d

    std::size_t at_index(std::size_t d) const {
      return counts.at(d - 1);
    }
  };

  // Same search as low_index_subgroups, counting only.
  EtaSequence eta_sequence(Presentation const&    p,
                           std::size_t            max_index,
                           LowIndexOptions const& opts = {});

  CoveringType classify_covering(SubgroupRecord const& r);

  // Number of subgroups in the conjugacy class of r (index of the
  // normaliser).
  std::size_t conjugacy_class_size(CosetTable const& t);
  inline std::size_t conjugacy_class_size(SubgroupRecord const& r) {
    return conjugacy_class_size(r.table);
  }

  // Orbits of the peripheral subgroup of each component on the cosets,
  // summed over components. Throws Error(missing_data) when peripherals is
  // empty.
  std::size_t cusp_count(SubgroupRecord const& r,
                         std::span<Peripheral const> peripherals);

  // Total number of subgroups (not classes) per index, from class sizes.
  std::vector<std::size_t>
  total_subgroup_counts(std::span<SubgroupRecord const> records,
                        std::size_t                     max_index);

  // Relabels a complete table in breadth-first order from `root` (rows
  // scanned in order, columns in order) and returns the flattened result.
  std::vector<Coset> standardized(CosetTable const& t, Coset root);

  // Order of the group generated by the images, or nullopt if it exceeds cap.
  std::optional<std::size_t> permutation_group_order(PermutationRep const& rep,
                                                     std::size_t cap);

  // Elements of the group generated by the images in breadth-first order
  // from the identity, generators in order. Stops after `cap` elements and
  // sets *truncated.
  std::vector<Permutation> permutation_group_elements(PermutationRep const& rep,
                                                      std::size_t cap,
                                                      bool* truncated);

  bool is_cyclic_image(PermutationRep const& rep);

}  // namespace knotcover
