#include "knotcover/homology.hpp"

#include <algorithm>
#include <numeric>

#include "knotcover/error.hpp"

namespace knotcover {

  std::string render_homology(AbelianInvariants const& h) {
    std::string out;
    auto        add = [&out](std::string const& term) {
      if (!out.empty()) {
        out += '+';
      }
      out += term;
    };
    for (auto t : h.torsion) {
      add("1/" + std::to_string(t));
    }
    for (std::size_t i = 0; i < h.free_rank; ++i) {
      add("1");
    }
    return out.empty() ? "0" : out;
  }

  namespace {

    using Matrix = std::vector<std::vector<mpz_class>>;

    // Finds the entry of least nonzero absolute value in the lower-right
    // block starting at (t, t). Returns false if the block is zero.
    bool find_pivot(Matrix const& a, std::size_t t, std::size_t& pr,
                    std::size_t& pc) {
      bool      found = false;
      mpz_class best;
      for (std::size_t i = t; i < a.size(); ++i) {
        for (std::size_t j = t; j < a[i].size(); ++j) {
          if (sgn(a[i][j]) == 0) {
            continue;
          }
          mpz_class v = abs(a[i][j]);
          if (!found || v < best) {
            found = true;
            best  = v;
            pr    = i;
            pc    = j;
            if (best == 1) {
              return true;
            }
          }
        }
      }
      return found;
    }

    void swap_cols(Matrix& a, std::size_t c1, std::size_t c2) {
      if (c1 == c2) {
        return;
      }
      for (auto& row : a) {
        std::swap(row[c1], row[c2]);
      }
    }

  }  // namespace

  SmithForm smith_normal_form(std::vector<std::vector<mpz_class>> a) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (auto const& row : a) {
      if (row.size() != cols) {
        throw Error(ErrorCode::invalid_argument, "ragged matrix");
      }
    }
    std::size_t diag_len = std::min(rows, cols);
    SmithForm   out;
    out.diagonal.assign(diag_len, 0);

    std::size_t t = 0;
    while (t < diag_len) {
      std::size_t pr = 0;
      std::size_t pc = 0;
      if (!find_pivot(a, t, pr, pc)) {
        break;
      }
      std::swap(a[t], a[pr]);
      swap_cols(a, t, pc);

      while (true) {
        bool dirty = false;
        // Clear column t below the pivot.
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (sgn(a[i][t]) == 0) {
            continue;
          }
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
          for (std::size_t j = t; j < cols; ++j) {
            a[i][j] -= q * a[t][j];
          }
          if (sgn(a[i][t]) != 0) {
            dirty = true;
          }
        }
        // Clear row t right of the pivot.
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (sgn(a[t][j]) == 0) {
            continue;
          }
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
          for (std::size_t i = t; i < rows; ++i) {
            a[i][j] -= q * a[i][t];
          }
          if (sgn(a[t][j]) != 0) {
            dirty = true;
          }
        }
        if (dirty) {
          // A smaller remainder appeared in row or column t: re-pivot on it.
          std::size_t br = t;
          std::size_t bc = t;
          mpz_class   best = abs(a[t][t]);
          for (std::size_t i = t + 1; i < rows; ++i) {
            if (sgn(a[i][t]) != 0 && abs(a[i][t]) < best) {
              best = abs(a[i][t]);
              br   = i;
              bc   = t;
            }
          }
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (sgn(a[t][j]) != 0 && abs(a[t][j]) < best) {
              best = abs(a[t][j]);
              br   = t;
              bc   = j;
            }
          }
          std::swap(a[t], a[br]);
          swap_cols(a, t, bc);
          continue;
        }
        // Divisibility repair: fold a row carrying a non-multiple into t.
        bool repaired = false;
        for (std::size_t i = t + 1; i < rows && !repaired; ++i) {
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
              for (std::size_t k = t; k < cols; ++k) {
                a[t][k] += a[i][k];
              }
              repaired = true;
              break;
            }
          }
        }
        if (!repaired) {
          break;
        }
      }
      out.diagonal[t] = abs(a[t][t]);
      ++t;
    }
    out.rank = t;
    return out;
  }

  SmithForm smith_normal_form(RelationMatrix const& m) {
    Matrix a(m.rows, std::vector<mpz_class>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        a[i][j] = static_cast<long>(m.at(i, j));
      }
    }
    return smith_normal_form(std::move(a));
  }

  AbelianInvariants first_homology(Presentation const& p) {
    auto              m   = abelianized_relations(p);
    auto              snf = smith_normal_form(m);
    AbelianInvariants h;
    h.free_rank = p.num_generators() - snf.rank;
    for (std::size_t i = 0; i < snf.rank; ++i) {
      auto const& d = snf.diagonal[i];
      if (d == 1) {
        continue;
      }
      if (!d.fits_ulong_p()) {
        throw Error(ErrorCode::internal,
                    "torsion coefficient " + d.get_str() + " exceeds 64 bits");
      }
      h.torsion.push_back(d.get_ui());
    }
    return h;
  }

  Transversal schreier_transversal(CosetTable const&       t,
                                   std::span<Letter const> column_order) {
    if (!t.is_complete()) {
      throw Error(ErrorCode::incomplete_table,
                  "Schreier transversal requires a complete table");
    }
    std::vector<Letter> order(column_order.begin(), column_order.end());
    if (order.empty()) {
      order.resize(t.num_columns());
      std::iota(order.begin(), order.end(), 0U);
    }
    {
      auto sorted = order;
      std::sort(sorted.begin(), sorted.end());
      std::vector<Letter> expected(t.num_columns());
      std::iota(expected.begin(), expected.end(), 0U);
      if (sorted != expected) {
        throw Error(ErrorCode::invalid_argument,
                    "column order must be a permutation of the table columns");
      }
    }
    std::size_t n = t.num_cosets();
    Transversal tr;
    tr.representatives.assign(n, {});
    tr.parent.assign(n, CosetTable::undefined);
    tr.parent_letter.assign(n, 0);
    std::vector<bool>  seen(n, false);
    std::vector<Coset> queue{0};
    seen[0] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      Coset c = queue[qi];
      for (Letter col : order) {
        Coset x = t.get(c, col);
        if (seen[x]) {
          continue;
        }
        seen[x]                = true;
        tr.parent[x]           = c;
        tr.parent_letter[x]    = col;
        tr.representatives[x]  = tr.representatives[c];
        tr.representatives[x].push_back(col);
        queue.push_back(x);
      }
    }
    if (queue.size() != n) {
      throw Error(ErrorCode::invalid_argument, "coset table is not transitive");
    }
    return tr;
  }

  namespace {

    // Ordinal of the Schreier generator for (coset, generator), or npos when
    // it is trivial (a transversal edge).
    struct SchreierIndex {
      static constexpr std::size_t npos = SIZE_MAX;
      std::vector<std::size_t>     ordinal;  // coset * ngens + gen
      std::vector<SchreierGenerator> generators;
    };

    SchreierIndex index_generators(Presentation const&     p,
                                   CosetTable const&       t,
                                   std::span<Letter const> column_order) {
      if (t.num_generators() != p.num_generators()) {
        throw Error(ErrorCode::invalid_argument,
                    "table and presentation have different generators");
      }
      auto          tr    = schreier_transversal(t, column_order);
      std::size_t   ngens = p.num_generators();
      SchreierIndex idx;
      idx.ordinal.assign(t.num_cosets() * ngens, SchreierIndex::npos);
      for (Coset c = 0; c < t.num_cosets(); ++c) {
        for (std::size_t g = 0; g < ngens; ++g) {
          Letter l      = make_letter(g);
          Coset  target = t.get(c, l);
          Word   w      = tr.representatives[c];
          w.push_back(l);
          auto back = inverse_word(tr.representatives[target]);
          w.insert(w.end(), back.begin(), back.end());
          w = free_reduce(w);
          if (w.empty()) {
            continue;
          }
          idx.ordinal[c * ngens + g] = idx.generators.size();
          idx.generators.push_back({c, g, std::move(w)});
        }
      }
      return idx;
    }

  }  // namespace

  std::vector<SchreierGenerator>
  schreier_generators(Presentation const&     p,
                      CosetTable const&       t,
                      std::span<Letter const> column_order) {
    return index_generators(p, t, column_order).generators;
  }

  Presentation rewrite_presentation(Presentation const&     p,
                                    CosetTable const&       t,
                                    std::span<Letter const> column_order) {
    auto        idx   = index_generators(p, t, column_order);
    std::size_t ngens = p.num_generators();
    std::vector<std::string> names;
    for (auto const& s : idx.generators) {
      names.push_back(p.generators()[s.generator].name + "_"
                      + std::to_string(s.coset));
    }
    std::vector<Word> relators;
    for (Coset c = 0; c < t.num_cosets(); ++c) {
      for (auto const& r : p.relators()) {
        Word  rewritten;
        Coset at = c;
        for (Letter l : r) {
          std::size_t g = generator_of(l);
          if (is_inverse(l)) {
            Coset       prev = t.get(at, l);
            std::size_t k    = idx.ordinal[prev * ngens + g];
            if (k != SchreierIndex::npos) {
              rewritten.push_back(make_letter(k, true));
            }
            at = prev;
          } else {
            std::size_t k = idx.ordinal[at * ngens + g];
            if (k != SchreierIndex::npos) {
              rewritten.push_back(make_letter(k));
            }
            at = t.get(at, l);
          }
        }
        if (at != c) {
          throw Error(ErrorCode::invalid_argument,
                      "relator does not close in the coset table");
        }
        Word reduced = cyclic_reduce(rewritten);
        if (!reduced.empty()) {
          relators.push_back(std::move(reduced));
        }
      }
    }
    return Presentation(std::move(names), std::move(relators));
  }

}  // namespace knotcover
