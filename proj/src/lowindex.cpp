#include "knotcover/lowindex.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "knotcover/error.hpp"

namespace knotcover {

  std::string_view to_string(CoveringType t) {
    switch (t) {
      case CoveringType::cyclic:
        return "cyc";
      case CoveringType::regular:
        return "reg";
      case CoveringType::irregular:
        return "irr";
    }
    return "?";
  }

  namespace {

    using Node                = std::uint8_t;
    constexpr Node undefined  = 0xFF;
    constexpr std::size_t max_supported_index = 254;

    // Backtracking search over partial coset tables in standard form.
    //
    // Slots are filled in row-major order; the first undefined slot is the
    // branching point and a new node is only ever created there, so node
    // labels always coincide with the breadth-first labelling from node 0.
    // After each choice the relator cycles through every newly defined edge
    // are traced: a full cycle must close, a cycle missing a single edge
    // forces it. A table survives only if no re-rooting produces a
    // lexicographically smaller standard table, which leaves exactly one
    // table per conjugacy class.
    class SimsSearch {
     public:
      using Visitor = std::function<void(std::vector<Node> const&, std::size_t)>;

      SimsSearch(Presentation const& p, std::size_t max_index,
                 LowIndexOptions const& opts, Visitor visit)
          : ncols_(2 * p.num_generators()),
            max_nodes_(max_index),
            opts_(opts),
            visit_(std::move(visit)),
            table_(max_index * 2 * p.num_generators(), undefined),
            relabel_(max_index),
            preimage_(max_index) {
        rotations_.resize(ncols_);
        for (auto const& r : p.relators()) {
          for (std::size_t s = 0; s < r.size(); ++s) {
            Word rot(r.begin() + s, r.end());
            rot.insert(rot.end(), r.begin(), r.begin() + s);
            auto& bucket = rotations_[rot[0]];
            if (std::find(bucket.begin(), bucket.end(), rot) == bucket.end()) {
              bucket.push_back(std::move(rot));
            }
          }
        }
      }

      void run() {
        if (max_nodes_ == 0) {
          return;
        }
        num_nodes_ = 1;
        if (ncols_ == 0) {
          visit_(table_, 1);
          return;
        }
        descend(0);
      }

      std::uint64_t nodes_visited() const {
        return nodes_;
      }
      std::size_t tables_found() const {
        return found_;
      }

     private:
      void descend(std::size_t from) {
        std::size_t end = num_nodes_ * ncols_;
        std::size_t pos = from;
        while (pos < end && table_[pos] != undefined) {
          ++pos;
        }
        if (pos == end) {
          ++found_;
          visit_(table_, num_nodes_);
          return;
        }
        std::size_t node = pos / ncols_;
        Letter      col  = static_cast<Letter>(pos % ncols_);
        std::size_t limit
            = num_nodes_ < max_nodes_ ? num_nodes_ + 1 : num_nodes_;
        for (std::size_t t = 0; t < limit; ++t) {
          bool fresh = t == num_nodes_;
          if (!fresh && table_[t * ncols_ + inverse(col)] != undefined) {
            continue;
          }
          tick();
          std::size_t mark = trail_.size();
          if (fresh) {
            ++num_nodes_;
          }
          queue_.clear();
          assign(node, col, t);
          if (propagate() && is_canonical()) {
            descend(pos + 1);
          }
          undo(mark);
          if (fresh) {
            --num_nodes_;
          }
        }
      }

      void tick() {
        ++nodes_;
        if (nodes_ > opts_.node_budget) {
          throw ResourceError("low-index search exceeded the node budget of "
                                  + std::to_string(opts_.node_budget),
                              found_);
        }
        if (opts_.progress && (nodes_ & 0xFFFFF) == 0) {
          opts_.progress(LowIndexProgress{nodes_, found_});
        }
      }

      void assign(std::size_t node, Letter col, std::size_t target) {
        std::size_t a = node * ncols_ + col;
        std::size_t b = target * ncols_ + inverse(col);
        table_[a]     = static_cast<Node>(target);
        table_[b]     = static_cast<Node>(node);
        trail_.push_back(a);
        queue_.push_back(a);
        if (b != a) {
          trail_.push_back(b);
          queue_.push_back(b);
        }
      }

      void undo(std::size_t mark) {
        while (trail_.size() > mark) {
          table_[trail_.back()] = undefined;
          trail_.pop_back();
        }
      }

      Node step(std::size_t node, Letter col) const {
        return table_[node * ncols_ + col];
      }

      bool propagate() {
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
          std::size_t pos   = queue_[qi];
          std::size_t start = pos / ncols_;
          Letter      col   = static_cast<Letter>(pos % ncols_);
          for (auto const& w : rotations_[col]) {
            std::size_t len = w.size();
            std::size_t f   = start;
            std::size_t i   = 0;
            while (i < len) {
              Node x = step(f, w[i]);
              if (x == undefined) {
                break;
              }
              f = x;
              ++i;
            }
            if (i == len) {
              if (f != start) {
                return false;
              }
              continue;
            }
            std::size_t b = start;
            std::size_t j = len;
            while (j > i + 1) {
              Node x = step(b, inverse(w[j - 1]));
              if (x == undefined) {
                break;
              }
              b = x;
              --j;
            }
            if (j == i + 1) {
              if (step(b, inverse(w[i])) != undefined) {
                return false;
              }
              assign(f, w[i], b);
            }
          }
        }
        return true;
      }

      // True unless some other root yields a smaller standard table on the
      // prefix where both are determined.
      bool is_canonical() {
        std::size_t n = num_nodes_;
        for (std::size_t root = 1; root < n; ++root) {
          std::fill(relabel_.begin(), relabel_.begin() + n, undefined);
          relabel_[root]  = 0;
          preimage_[0]    = static_cast<Node>(root);
          std::size_t next = 1;
          bool        done = false;
          for (std::size_t row = 0; row < n && !done; ++row) {
            if (row >= next) {
              break;
            }
            std::size_t src = preimage_[row];
            for (std::size_t col = 0; col < ncols_; ++col) {
              Node orig = table_[row * ncols_ + col];
              Node x    = table_[src * ncols_ + col];
              if (orig == undefined || x == undefined) {
                done = true;
                break;
              }
              if (relabel_[x] == undefined) {
                relabel_[x]     = static_cast<Node>(next);
                preimage_[next] = x;
                ++next;
              }
              Node y = relabel_[x];
              if (y < orig) {
                return false;
              }
              if (y > orig) {
                done = true;
                break;
              }
            }
          }
        }
        return true;
      }

      std::size_t                    ncols_;
      std::size_t                    max_nodes_;
      LowIndexOptions const&         opts_;
      Visitor                        visit_;
      std::vector<Node>              table_;
      std::vector<Node>              relabel_;
      std::vector<Node>              preimage_;
      std::vector<std::vector<Word>> rotations_;
      std::vector<std::size_t>       trail_;
      std::vector<std::size_t>       queue_;
      std::size_t                    num_nodes_ = 0;
      std::uint64_t                  nodes_     = 0;
      std::size_t                    found_     = 0;
    };

    void check_index(std::size_t max_index) {
      if (max_index < 1) {
        throw Error(ErrorCode::invalid_argument, "maximum index must be >= 1");
      }
      if (max_index > max_supported_index) {
        throw Error(ErrorCode::invalid_argument,
                    "maximum index above "
                        + std::to_string(max_supported_index)
                        + " is not supported");
      }
    }

    // Presentation used by the search plus what is needed to lift its
    // tables back to the original generators.
    struct SearchPresentation {
      Presentation             reduced;
      std::vector<std::size_t> kept;  // original ordinal of each reduced one
      // Eliminated generators in elimination order; each expression is a
      // word over original ordinals that were still present at the time.
      std::vector<std::pair<std::size_t, Word>> eliminated;
    };

    Word substitute(Word const& w, std::size_t g, Word const& expr,
                    Word const& expr_inv) {
      Word out;
      out.reserve(w.size());
      for (Letter l : w) {
        if (generator_of(l) != g) {
          out.push_back(l);
        } else {
          auto const& e = is_inverse(l) ? expr_inv : expr;
          out.insert(out.end(), e.begin(), e.end());
        }
      }
      return cyclic_reduce(out);
    }

    struct EliminationState {
      std::vector<Word>                         rels;
      std::vector<bool>                         alive;
      std::vector<std::pair<std::size_t, Word>> eliminated;
      std::size_t                               total = 0;
    };

    // Removes generator g using relator ri, in which it occurs once.
    EliminationState eliminate(EliminationState const& st, std::size_t ri,
                               std::size_t g) {
      Word const& r  = st.rels[ri];
      std::size_t at = 0;
      while (generator_of(r[at]) != g) {
        ++at;
      }
      // Rotate so the generator leads: g^e w = 1.
      Word rest(r.begin() + at + 1, r.end());
      rest.insert(rest.end(), r.begin(), r.begin() + at);
      Word expr     = is_inverse(r[at]) ? rest : inverse_word(rest);
      Word expr_inv = inverse_word(expr);
      EliminationState out;
      out.alive      = st.alive;
      out.alive[g]   = false;
      out.eliminated = st.eliminated;
      for (std::size_t i = 0; i < st.rels.size(); ++i) {
        if (i == ri) {
          continue;
        }
        Word w = substitute(st.rels[i], g, expr, expr_inv);
        if (!w.empty()) {
          out.total += w.size();
          out.rels.push_back(std::move(w));
        }
      }
      out.eliminated.emplace_back(g, std::move(expr));
      return out;
    }

    std::size_t alive_count(EliminationState const& st) {
      return static_cast<std::size_t>(
          std::count(st.alive.begin(), st.alive.end(), true));
    }

    // Beam search over elimination orders. The result has the fewest
    // generators found, then the shortest total relator length.
    SearchPresentation reduce_for_search(Presentation const& p) {
      constexpr std::size_t beam_width = 24;
      std::size_t           ngens      = p.num_generators();

      EliminationState start;
      start.rels  = p.relators();
      start.alive = std::vector<bool>(ngens, true);
      for (auto const& r : start.rels) {
        start.total += r.size();
      }
      std::size_t const length_cap = std::max<std::size_t>(4 * start.total, 256);

      auto better = [](EliminationState const& a, EliminationState const& b) {
        std::size_t ga = alive_count(a), gb = alive_count(b);
        return ga != gb ? ga < gb : a.total < b.total;
      };

      EliminationState              best = start;
      std::vector<EliminationState> beam{start};
      while (!beam.empty()) {
        std::vector<EliminationState> next;
        std::set<std::vector<Word>>   seen;
        for (auto const& st : beam) {
          for (std::size_t ri = 0; ri < st.rels.size(); ++ri) {
            std::vector<std::size_t> occ(ngens, 0);
            for (Letter l : st.rels[ri]) {
              ++occ[generator_of(l)];
            }
            for (std::size_t g = 0; g < ngens; ++g) {
              if (occ[g] != 1) {
                continue;
              }
              auto child = eliminate(st, ri, g);
              if (child.total > length_cap) {
                continue;
              }
              auto key = child.rels;
              std::sort(key.begin(), key.end());
              if (seen.insert(std::move(key)).second) {
                next.push_back(std::move(child));
              }
            }
          }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](auto const& a, auto const& b) { return a.total < b.total; });
        if (next.size() > beam_width) {
          next.resize(beam_width);
        }
        for (auto const& st : next) {
          if (better(st, best)) {
            best = st;
          }
        }
        beam = std::move(next);
      }

      SearchPresentation out;
      out.eliminated = std::move(best.eliminated);
      std::vector<std::size_t> new_ordinal(ngens, SIZE_MAX);
      std::vector<std::string> names;
      for (std::size_t g = 0; g < ngens; ++g) {
        if (best.alive[g]) {
          new_ordinal[g] = out.kept.size();
          out.kept.push_back(g);
          names.push_back(p.generators()[g].name);
        }
      }
      for (auto& w : best.rels) {
        for (Letter& l : w) {
          l = make_letter(new_ordinal[generator_of(l)], is_inverse(l));
        }
      }
      out.reduced = Presentation(std::move(names), std::move(best.rels));
      return out;
    }

    SearchPresentation identity_reduction(Presentation const& p) {
      SearchPresentation out;
      out.reduced = p;
      for (std::size_t g = 0; g < p.num_generators(); ++g) {
        out.kept.push_back(g);
      }
      return out;
    }

    CosetTable to_coset_table(std::vector<Node> const& raw, std::size_t n,
                              std::size_t num_generators) {
      CosetTable  t(num_generators, n);
      std::size_t ncols = 2 * num_generators;
      for (std::size_t c = 0; c < n; ++c) {
        for (Letter col = 0; col < ncols; ++col) {
          t.set(static_cast<Coset>(c), col, raw[c * ncols + col]);
        }
      }
      return t;
    }

    SearchPresentation prepare(Presentation const&    p,
                               LowIndexOptions const& opts) {
      return opts.eliminate_generators ? reduce_for_search(p)
                                       : identity_reduction(p);
    }

  }  // namespace

  std::vector<Coset> standardized(CosetTable const& t, Coset root) {
    std::size_t        n     = t.num_cosets();
    std::size_t        ncols = t.num_columns();
    std::vector<Coset> relabel(n, CosetTable::undefined);
    std::vector<Coset> preimage(n, CosetTable::undefined);
    std::vector<Coset> out;
    out.reserve(n * ncols);
    relabel[root]    = 0;
    preimage[0]      = root;
    std::size_t next = 1;
    for (std::size_t row = 0; row < next; ++row) {
      for (Letter col = 0; col < ncols; ++col) {
        Coset x = t.get(preimage[row], col);
        if (x == CosetTable::undefined) {
          throw Error(ErrorCode::incomplete_table,
                      "standardization requires a complete table");
        }
        if (relabel[x] == CosetTable::undefined) {
          relabel[x]       = static_cast<Coset>(next);
          preimage[next++] = x;
        }
        out.push_back(relabel[x]);
      }
    }
    if (next != n) {
      throw Error(ErrorCode::invalid_argument, "table is not transitive");
    }
    return out;
  }

  namespace {

    // Rebuilds a table of the reduced presentation over the original
    // generators and returns it in canonical form (least standard table over
    // all roots), matching what a search on the original would emit.
    CosetTable lift_table(SearchPresentation const& sp, CosetTable const& t,
                          std::size_t num_generators) {
      if (sp.eliminated.empty()) {
        return t;
      }
      std::size_t              n = t.num_cosets();
      std::vector<Permutation> perm(num_generators);
      auto                     reduced_rep = coset_action(t);
      for (std::size_t i = 0; i < sp.kept.size(); ++i) {
        perm[sp.kept[i]] = reduced_rep.images[i];
      }
      for (auto it = sp.eliminated.rbegin(); it != sp.eliminated.rend(); ++it) {
        Permutation acc = identity_permutation(n);
        for (Letter l : it->second) {
          auto const& g = perm[generator_of(l)];
          acc = compose(acc, is_inverse(l) ? invert(g) : g);
        }
        perm[it->first] = std::move(acc);
      }
      CosetTable full(num_generators, n);
      for (std::size_t g = 0; g < num_generators; ++g) {
        for (Coset c = 0; c < n; ++c) {
          full.link(c, make_letter(g), perm[g][c]);
        }
      }
      auto best = standardized(full, 0);
      for (Coset r = 1; r < n; ++r) {
        best = std::min(best, standardized(full, r));
      }
      CosetTable  canon(num_generators, n);
      std::size_t ncols = full.num_columns();
      for (Coset c = 0; c < n; ++c) {
        for (Letter col = 0; col < ncols; ++col) {
          canon.set(c, col, best[c * ncols + col]);
        }
      }
      return canon;
    }

  }  // namespace

  std::size_t conjugacy_class_size(CosetTable const& t) {
    auto        base  = standardized(t, 0);
    std::size_t fixed = 0;
    for (Coset r = 0; r < t.num_cosets(); ++r) {
      if (r == 0 || standardized(t, r) == base) {
        ++fixed;
      }
    }
    return t.num_cosets() / fixed;
  }

  std::vector<Permutation> permutation_group_elements(PermutationRep const& rep,
                                                      std::size_t cap,
                                                      bool* truncated) {
    std::vector<Permutation> elements{identity_permutation(rep.degree)};
    std::set<Permutation>    seen{elements.front()};
    if (truncated != nullptr) {
      *truncated = false;
    }
    for (std::size_t i = 0; i < elements.size(); ++i) {
      for (auto const& g : rep.images) {
        Permutation next = compose(elements[i], g);
        if (seen.insert(next).second) {
          if (elements.size() >= cap) {
            if (truncated != nullptr) {
              *truncated = true;
            }
            return elements;
          }
          elements.push_back(std::move(next));
        }
      }
    }
    return elements;
  }

  std::optional<std::size_t> permutation_group_order(PermutationRep const& rep,
                                                     std::size_t cap) {
    bool truncated = false;
    auto elements  = permutation_group_elements(rep, cap, &truncated);
    if (truncated) {
      return std::nullopt;
    }
    return elements.size();
  }

  bool is_cyclic_image(PermutationRep const& rep) {
    for (std::size_t a = 0; a < rep.images.size(); ++a) {
      for (std::size_t b = a + 1; b < rep.images.size(); ++b) {
        if (compose(rep.images[a], rep.images[b])
            != compose(rep.images[b], rep.images[a])) {
          return false;
        }
      }
    }
    // A transitive abelian group is regular, so it has exactly `degree`
    // elements; it is cyclic iff one of them is a full cycle.
    bool truncated = false;
    auto elements  = permutation_group_elements(rep, rep.degree + 1, &truncated);
    if (truncated) {
      return false;
    }
    for (auto const& g : elements) {
      std::size_t   len = 1;
      std::uint32_t x   = g[0];
      while (x != 0) {
        x = g[x];
        ++len;
      }
      if (len == rep.degree) {
        return true;
      }
    }
    return false;
  }

  CoveringType classify_covering(SubgroupRecord const& r) {
    if (is_cyclic_image(r.rep)) {
      return CoveringType::cyclic;
    }
    if (conjugacy_class_size(r.table) == 1) {
      return CoveringType::regular;
    }
    return CoveringType::irregular;
  }

  std::vector<SubgroupRecord> low_index_subgroups(Presentation const&    p,
                                                  std::size_t            max_index,
                                                  LowIndexOptions const& opts) {
    check_index(max_index);
    std::vector<SubgroupRecord> out;
    auto        sp     = prepare(p, opts);
    std::size_t ngens  = p.num_generators();
    std::size_t rgens  = sp.reduced.num_generators();
    SimsSearch search(sp.reduced, max_index, opts,
                      [&](std::vector<Node> const& raw, std::size_t n) {
                        SubgroupRecord r;
                        r.index = n;
                        r.table = lift_table(sp, to_coset_table(raw, n, rgens),
                                             ngens);
                        out.push_back(std::move(r));
                      });
    search.run();
    std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
      if (a.index != b.index) {
        return a.index < b.index;
      }
      return a.table.flattened() < b.table.flattened();
    });
    for (auto& r : out) {
      validate_table(r.table, p);
      r.rep           = coset_action(r.table);
      r.class_size    = conjugacy_class_size(r.table);
      r.image_order   = permutation_group_order(r.rep, opts.image_order_cap);
      r.covering_type = classify_covering(r);
    }
    return out;
  }

  EtaSequence eta_sequence(Presentation const&    p,
                           std::size_t            max_index,
                           LowIndexOptions const& opts) {
    check_index(max_index);
    EtaSequence eta;
    eta.counts.assign(max_index, 0);
    auto       sp = prepare(p, opts);
    SimsSearch search(sp.reduced, max_index, opts,
                      [&](std::vector<Node> const&, std::size_t n) {
                        ++eta.counts[n - 1];
                      });
    search.run();
    return eta;
  }

  std::size_t cusp_count(SubgroupRecord const& r,
                         std::span<Peripheral const> peripherals) {
    if (peripherals.empty()) {
      throw Error(ErrorCode::missing_data,
                  "cusp count needs peripheral (meridian, longitude) words");
    }
    std::size_t total = 0;
    for (auto const& per : peripherals) {
      PermutationRep sub;
      sub.degree = r.rep.degree;
      sub.images = {word_image(r.rep, per.meridian),
                    word_image(r.rep, per.longitude)};
      std::vector<bool> seen(sub.degree, false);
      for (std::uint32_t s = 0; s < sub.degree; ++s) {
        if (seen[s]) {
          continue;
        }
        ++total;
        std::vector<std::uint32_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
          auto x = stack.back();
          stack.pop_back();
          for (auto const& g : sub.images) {
            if (!seen[g[x]]) {
              seen[g[x]] = true;
              stack.push_back(g[x]);
            }
          }
        }
      }
    }
    return total;
  }

  std::vector<std::size_t>
  total_subgroup_counts(std::span<SubgroupRecord const> records,
                        std::size_t                     max_index) {
    std::vector<std::size_t> totals(max_index, 0);
    for (auto const& r : records) {
      if (r.index >= 1 && r.index <= max_index) {
        totals[r.index - 1] += r.class_size;
      }
    }
    return totals;
  }

}  // namespace knotcover
