#include "knotcover/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "knotcover/error.hpp"

namespace knotcover {

  CosetTable::CosetTable(std::size_t num_generators, std::size_t num_cosets)
      : ncols_(2 * num_generators),
        data_(2 * num_generators * num_cosets, undefined) {}

  bool CosetTable::is_complete() const noexcept {
    return std::find(data_.begin(), data_.end(), undefined) == data_.end();
  }

  bool CosetTable::is_consistent() const noexcept {
    std::size_t n = num_cosets();
    for (Coset c = 0; c < n; ++c) {
      for (Letter col = 0; col < ncols_; ++col) {
        Coset t = get(c, col);
        if (t == undefined) {
          continue;
        }
        if (t >= n || get(t, inverse(col)) != c) {
          return false;
        }
      }
    }
    return true;
  }

  std::string
  CosetTable::to_csv(std::vector<std::string> const& generator_names) const {
    std::string out = "coset";
    for (std::size_t g = 0; g < num_generators(); ++g) {
      out += "," + generator_names.at(g) + "," + generator_names.at(g) + "^-1";
    }
    out += '\n';
    for (Coset c = 0; c < num_cosets(); ++c) {
      out += std::to_string(c);
      for (Letter col = 0; col < ncols_; ++col) {
        out += ',';
        if (Coset t = get(c, col); t != undefined) {
          out += std::to_string(t);
        }
      }
      out += '\n';
    }
    return out;
  }

  namespace {

    // Working state of one HLT run. Rows are never freed during the run;
    // dead rows are skipped via the union-find forest and dropped on
    // compaction.
    class Enumerator {
     public:
      Enumerator(std::size_t num_generators, std::size_t max_cosets)
          : ncols_(2 * num_generators), max_live_(max_cosets) {
        new_row();
      }

      void scan_and_fill(Coset c, Word const& w) {
        if (w.empty()) {
          return;
        }
        Coset       f = c;
        Coset       b = c;
        std::size_t i = 0;
        std::size_t j = w.size();  // letters [i, j) still untraced
        while (true) {
          while (i < j && at(f, w[i]) != CosetTable::undefined) {
            f = at(f, w[i]);
            ++i;
          }
          if (i == j) {
            if (f != b) {
              coincidence(f, b);
            }
            return;
          }
          while (j > i && at(b, inverse(w[j - 1])) != CosetTable::undefined) {
            b = at(b, inverse(w[j - 1]));
            --j;
          }
          if (i == j) {
            coincidence(f, b);
            return;
          }
          if (j == i + 1) {
            link(f, w[i], b);
            return;
          }
          define(f, w[i]);
        }
      }

      void run(std::vector<Word> const& relators,
               std::span<Word const>    subgroup_generators) {
        for (auto const& w : subgroup_generators) {
          scan_and_fill(0, w);
        }
        for (Coset c = 0; c < parent_.size(); ++c) {
          if (!alive(c)) {
            continue;
          }
          for (auto const& r : relators) {
            scan_and_fill(c, r);
            if (!alive(c)) {
              break;
            }
          }
          if (!alive(c)) {
            continue;
          }
          for (Letter col = 0; col < ncols_; ++col) {
            if (at(c, col) == CosetTable::undefined) {
              define(c, col);
            }
          }
        }
      }

      CosetTable compact() const {
        std::vector<Coset> renumber(parent_.size(), CosetTable::undefined);
        Coset              next = 0;
        for (Coset c = 0; c < parent_.size(); ++c) {
          if (parent_[c] == c) {
            renumber[c] = next++;
          }
        }
        CosetTable t(ncols_ / 2, next);
        for (Coset c = 0; c < parent_.size(); ++c) {
          if (parent_[c] != c) {
            continue;
          }
          for (Letter col = 0; col < ncols_; ++col) {
            Coset x = at(c, col);
            t.set(renumber[c], col,
                  x == CosetTable::undefined ? x : renumber[x]);
          }
        }
        return t;
      }

     private:
      Coset& at(Coset c, Letter col) {
        return table_[c * ncols_ + col];
      }
      Coset at(Coset c, Letter col) const {
        return table_[c * ncols_ + col];
      }
      bool alive(Coset c) const {
        return parent_[c] == c;
      }
      void link(Coset c, Letter col, Coset t) {
        at(c, col)          = t;
        at(t, inverse(col)) = c;
      }

      Coset new_row() {
        if (live_ >= max_live_) {
          throw ResourceError("coset enumeration exceeded "
                                  + std::to_string(max_live_) + " live cosets",
                              live_);
        }
        Coset c = static_cast<Coset>(parent_.size());
        parent_.push_back(c);
        table_.resize(table_.size() + ncols_, CosetTable::undefined);
        ++live_;
        return c;
      }

      void define(Coset c, Letter col) {
        Coset n = new_row();
        link(c, col, n);
      }

      Coset rep(Coset c) {
        Coset r = c;
        while (parent_[r] != r) {
          r = parent_[r];
        }
        while (parent_[c] != r) {
          Coset next = parent_[c];
          parent_[c] = r;
          c          = next;
        }
        return r;
      }

      void merge(Coset a, Coset b, std::deque<Coset>& queue) {
        a = rep(a);
        b = rep(b);
        if (a == b) {
          return;
        }
        if (a > b) {
          std::swap(a, b);
        }
        parent_[b] = a;
        --live_;
        queue.push_back(b);
      }

      void coincidence(Coset a, Coset b) {
        std::deque<Coset> queue;
        merge(a, b, queue);
        while (!queue.empty()) {
          Coset e = queue.front();
          queue.pop_front();
          for (Letter col = 0; col < ncols_; ++col) {
            Coset f = at(e, col);
            if (f == CosetTable::undefined) {
              continue;
            }
            at(f, inverse(col)) = CosetTable::undefined;
            Coset e1            = rep(e);
            Coset f1            = rep(f);
            if (at(e1, col) != CosetTable::undefined) {
              merge(f1, at(e1, col), queue);
            } else if (at(f1, inverse(col)) != CosetTable::undefined) {
              merge(e1, at(f1, inverse(col)), queue);
            } else {
              link(e1, col, f1);
            }
          }
        }
#ifndef NDEBUG
        check_live_consistency();
#endif
      }

#ifndef NDEBUG
      void check_live_consistency() const {
        for (Coset c = 0; c < parent_.size(); ++c) {
          if (parent_[c] != c) {
            continue;
          }
          for (Letter col = 0; col < ncols_; ++col) {
            Coset t = at(c, col);
            if (t == CosetTable::undefined) {
              continue;
            }
            if (parent_[t] != t || at(t, inverse(col)) != c) {
              throw Error(ErrorCode::internal,
                          "coset table inconsistent after coincidence");
            }
          }
        }
      }
#endif

      std::size_t        ncols_;
      std::size_t        max_live_;
      std::size_t        live_ = 0;
      std::vector<Coset> table_;
      std::vector<Coset> parent_;
    };

    void check_letters(Word const& w, std::size_t num_generators) {
      for (Letter l : w) {
        if (generator_of(l) >= num_generators) {
          throw Error(ErrorCode::unknown_generator,
                      "word references generator ordinal "
                          + std::to_string(generator_of(l)));
        }
      }
    }

  }  // namespace

  CosetTable enumerate_cosets(Presentation const&   p,
                              std::span<Word const> subgroup_generators,
                              std::size_t           max_cosets) {
    if (max_cosets < 1) {
      throw Error(ErrorCode::invalid_argument, "max_cosets must be at least 1");
    }
    std::vector<Word> subgens;
    for (auto const& w : subgroup_generators) {
      check_letters(w, p.num_generators());
      subgens.push_back(free_reduce(w));
    }
    Enumerator e(p.num_generators(), max_cosets);
    e.run(p.relators(), subgens);
    return e.compact();
  }

  Coset trace(CosetTable const& t, Coset start, std::span<Letter const> w) {
    Coset c = start;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= t.num_columns()) {
        throw Error(ErrorCode::unknown_generator,
                    "letter outside the table's generators");
      }
      Coset next = t.get(c, w[i]);
      if (next == CosetTable::undefined) {
        throw Error(ErrorCode::incomplete_table,
                    "undefined transition from coset " + std::to_string(c)
                        + " at letter " + std::to_string(i));
      }
      c = next;
    }
    return c;
  }

  PermutationRep coset_action(CosetTable const& t) {
    if (!t.is_complete()) {
      throw Error(ErrorCode::incomplete_table,
                  "coset action requires a complete table");
    }
    PermutationRep rep;
    rep.degree = t.num_cosets();
    for (std::size_t g = 0; g < t.num_generators(); ++g) {
      Permutation p(rep.degree);
      for (Coset c = 0; c < rep.degree; ++c) {
        p[c] = t.get(c, make_letter(g));
      }
      rep.images.push_back(std::move(p));
    }
    return rep;
  }

  Permutation identity_permutation(std::size_t degree) {
    Permutation p(degree);
    std::iota(p.begin(), p.end(), 0U);
    return p;
  }

  Permutation compose(Permutation const& a, Permutation const& b) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = b[a[i]];
    }
    return out;
  }

  Permutation invert(Permutation const& a) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[a[i]] = static_cast<std::uint32_t>(i);
    }
    return out;
  }

  Permutation word_image(PermutationRep const& rep, std::span<Letter const> w) {
    Permutation out = identity_permutation(rep.degree);
    for (std::size_t i = 0; i < rep.degree; ++i) {
      std::uint32_t x = static_cast<std::uint32_t>(i);
      for (Letter l : w) {
        auto const& g = rep.images.at(generator_of(l));
        if (is_inverse(l)) {
          x = static_cast<std::uint32_t>(std::find(g.begin(), g.end(), x)
                                         - g.begin());
        } else {
          x = g[x];
        }
      }
      out[i] = x;
    }
    return out;
  }

  bool is_transitive(PermutationRep const& rep) {
    if (rep.degree == 0) {
      return false;
    }
    std::vector<bool>          seen(rep.degree, false);
    std::vector<std::uint32_t> stack{0};
    seen[0]            = true;
    std::size_t count  = 1;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto const& g : rep.images) {
        for (std::uint32_t y : {g[x], static_cast<std::uint32_t>(
                                          std::find(g.begin(), g.end(), x)
                                          - g.begin())}) {
          if (!seen[y]) {
            seen[y] = true;
            ++count;
            stack.push_back(y);
          }
        }
      }
    }
    return count == rep.degree;
  }

  void validate_table(CosetTable const&     t,
                      Presentation const&   p,
                      std::span<Word const> subgroup_generators) {
    if (t.num_generators() != p.num_generators()) {
      throw Error(ErrorCode::internal, "table/presentation generator mismatch");
    }
    if (!t.is_complete()) {
      throw Error(ErrorCode::internal, "table is incomplete");
    }
    if (!t.is_consistent()) {
      throw Error(ErrorCode::internal, "table is inconsistent");
    }
    for (Coset c = 0; c < t.num_cosets(); ++c) {
      for (std::size_t r = 0; r < p.relators().size(); ++r) {
        if (trace(t, c, p.relators()[r]) != c) {
          throw Error(ErrorCode::internal,
                      "relator " + std::to_string(r) + " does not fix coset "
                          + std::to_string(c));
        }
      }
    }
    for (auto const& w : subgroup_generators) {
      if (trace(t, 0, w) != 0) {
        throw Error(ErrorCode::internal,
                    "subgroup generator does not fix coset 0");
      }
    }
  }

}  // namespace knotcover
