#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "knotcover/presentation.hpp"

namespace knotcover {

  using Coset = std::uint32_t;

  // Action of the generators (and their inverses) on cosets. Column code is
  // the Letter encoding, so column 2k is generator k and 2k + 1 its inverse.
  class CosetTable {
   public:
    static constexpr Coset undefined = UINT32_MAX;

    CosetTable() = default;
    CosetTable(std::size_t num_generators, std::size_t num_cosets);

    std::size_t num_generators() const noexcept {
      return ncols_ / 2;
    }
    std::size_t num_columns() const noexcept {
      return ncols_;
    }
    std::size_t num_cosets() const noexcept {
      return ncols_ == 0 ? 0 : data_.size() / ncols_;
    }

    Coset get(Coset c, Letter col) const {
      return data_[c * ncols_ + col];
    }
    // Sets both (c, col) -> target and (target, col^-1) -> c.
    void link(Coset c, Letter col, Coset target) {
      data_[c * ncols_ + col]                = target;
      data_[target * ncols_ + inverse(col)] = c;
    }
    void set(Coset c, Letter col, Coset target) {
      data_[c * ncols_ + col] = target;
    }

    bool is_complete() const noexcept;
    // entry(i, g) = j  <=>  entry(j, g^-1) = i, for all defined entries.
    bool is_consistent() const noexcept;

    std::vector<Coset> const& flattened() const noexcept {
      return data_;
    }

    // One row per coset; columns "coset,x,x^-1,y,y^-1,...". Undefined
    // entries are left empty.
    std::string to_csv(std::vector<std::string> const& generator_names) const;

    friend bool operator==(CosetTable const&, CosetTable const&) = default;

   private:
    std::size_t        ncols_ = 0;
    std::vector<Coset> data_;
  };

  using Permutation = std::vector<std::uint32_t>;

  struct PermutationRep {
    std::size_t              degree = 0;
    std::vector<Permutation> images;  // one per generator
  };

  constexpr std::size_t default_max_cosets = 1'000'000;

  // HLT coset enumeration with coincidence processing. Subgroup generators
  // are scanned from coset 0 first, then every live coset in order has each
  // relator scanned and its remaining gaps filled. Throws ResourceError when
  // the live coset count would exceed max_cosets.
  CosetTable enumerate_cosets(Presentation const&     p,
                              std::span<Word const>   subgroup_generators,
                              std::size_t max_cosets = default_max_cosets);

  // Endpoint of the path labelled w from start. Throws on an undefined
  // transition.
  Coset trace(CosetTable const& t, Coset start, std::span<Letter const> w);

  PermutationRep coset_action(CosetTable const& t);

  // Permutation induced by a word: point i maps to i.w (right action).
  Permutation word_image(PermutationRep const& rep, std::span<Letter const> w);

  Permutation identity_permutation(std::size_t degree);
  // Right action composition: (a * b)(i) = b(a(i)).
  Permutation compose(Permutation const& a, Permutation const& b);
  Permutation invert(Permutation const& a);

  bool is_transitive(PermutationRep const& rep);

  // Re-checks completeness, consistency, that every relator fixes every
  // coset, and that every subgroup generator fixes coset 0. Throws
  // Error(internal) describing the first violation.
  void validate_table(CosetTable const&      t,
                      Presentation const&    p,
                      std::span<Word const>  subgroup_generators = {});

}  // namespace knotcover
