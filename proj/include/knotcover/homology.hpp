#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "knotcover/enumerate.hpp"
#include "knotcover/presentation.hpp"

namespace knotcover {

  // Free rank plus torsion coefficients d1 | d2 | ..., each >= 2.
  struct AbelianInvariants {
    std::size_t                free_rank = 0;
    std::vector<std::uint64_t> torsion;

    friend bool operator==(AbelianInvariants const&,
                           AbelianInvariants const&) = default;
  };

  // Torsion first as "1/k", then one "1" per free factor, joined by '+'.
  // The trivial group renders as "0".
  std::string render_homology(AbelianInvariants const& h);

  struct SmithForm {
    // Length min(rows, cols): nonzero invariants in divisibility order,
    // then zeros.
    std::vector<mpz_class> diagonal;
    std::size_t            rank = 0;
  };

  // Smallest-absolute-value pivoting with a divisibility repair pass.
  SmithForm smith_normal_form(std::vector<std::vector<mpz_class>> m);
  SmithForm smith_normal_form(RelationMatrix const& m);

  // Cokernel of the abelianized relation matrix.
  AbelianInvariants first_homology(Presentation const& p);

  // Breadth-first Schreier transversal. `column_order` lists the table
  // columns in the order they are explored; empty means 0, 1, 2, ...
  struct Transversal {
    std::vector<Word>   representatives;  // per coset, as a word in G
    std::vector<Coset>  parent;           // parent coset, undefined for 0
    std::vector<Letter> parent_letter;    // column used to reach the coset
  };
  Transversal schreier_transversal(CosetTable const&         t,
                                   std::span<Letter const> column_order = {});

  struct SchreierGenerator {
    Coset       coset;
    std::size_t generator;
    Word        word;  // rep(coset) * g * rep(coset.g)^-1, freely reduced
  };

  // Nontrivial Schreier generators ordered by (coset, generator).
  std::vector<SchreierGenerator>
  schreier_generators(Presentation const&     p,
                      CosetTable const&       t,
                      std::span<Letter const> column_order = {});

  // Reidemeister-Schreier presentation of the subgroup: generators are the
  // nontrivial Schreier generators (named <generator>_<coset>), relators
  // are every ambient relator rewritten from every coset. Freely and
  // cyclically reduced; trivial relators dropped; otherwise unsimplified.
  Presentation rewrite_presentation(Presentation const&     p,
                                    CosetTable const&       t,
                                    std::span<Letter const> column_order = {});

}  // namespace knotcover
