#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace knotcover {

  // A letter is a column code: generator k is 2k, its inverse is 2k + 1. The
  // same code indexes coset-table columns, so tracing never branches on sign.
  using Letter = std::uint32_t;
  using Word   = std::vector<Letter>;

  constexpr Letter make_letter(std::size_t generator, bool inverted = false) {
    return static_cast<Letter>(2 * generator + (inverted ? 1 : 0));
  }
  constexpr Letter inverse(Letter l) {
    return l ^ 1U;
  }
  constexpr std::size_t generator_of(Letter l) {
    return l >> 1U;
  }
  constexpr bool is_inverse(Letter l) {
    return (l & 1U) != 0;
  }

  Word free_reduce(std::span<Letter const> w);
  // Free reduction followed by removal of mutually inverse end letters.
  Word cyclic_reduce(std::span<Letter const> w);
  Word inverse_word(std::span<Letter const> w);
  Word power(std::span<Letter const> w, long exponent);
  Word concat(std::span<Letter const> u, std::span<Letter const> v);

  struct GeneratorSymbol {
    std::string name;
    std::size_t index;
  };

  struct RelationMatrix {
    std::size_t            rows = 0;
    std::size_t            cols = 0;
    std::vector<long long> entries;  // row-major

    long long at(std::size_t r, std::size_t c) const {
      return entries[r * cols + c];
    }
  };

  class Presentation {
   public:
    Presentation() = default;

    // Relators are freely and cyclically reduced here; an empty result is
    // rejected. Generator names must be unique identifiers.
    Presentation(std::vector<std::string> generator_names,
                 std::vector<Word>        relators,
                 std::string              source_text = {});

    std::size_t num_generators() const noexcept {
      return generators_.size();
    }
    std::vector<GeneratorSymbol> const& generators() const noexcept {
      return generators_;
    }
    std::vector<Word> const& relators() const noexcept {
      return relators_;
    }
    // Text this presentation was parsed from, empty when built directly.
    std::string const& source_text() const noexcept {
      return source_;
    }

    std::optional<std::size_t> find_generator(std::string_view name) const;
    std::vector<std::string>   generator_names() const;

    Presentation with_relators(std::vector<Word> extra) const;

    friend bool operator==(Presentation const& a, Presentation const& b) {
      if (a.relators_ != b.relators_
          || a.generators_.size() != b.generators_.size()) {
        return false;
      }
      for (std::size_t i = 0; i < a.generators_.size(); ++i) {
        if (a.generators_[i].name != b.generators_[i].name) {
          return false;
        }
      }
      return true;
    }

   private:
    std::vector<GeneratorSymbol> generators_;
    std::vector<Word>            relators_;
    std::string                  source_;
  };

  // Grammar:
  //   presentation := '<' gens '|' items '>'
  //   gens         := ident (',' ident)*
  //   items        := [ item (',' item)* ]
  //   item         := word ('=' word)*
  //   word         := factor (['*'] factor)*  |  '1'
  //   factor       := atom ['^' integer]
  //   atom         := ident | '(' word ')' | '1'
  // Juxtaposed identifiers must be separated by whitespace.
  Presentation parse_presentation(std::string_view text);

  // Parses a word over the generators of `p` (same word grammar as above).
  Word parse_word(std::string_view text, Presentation const& p);
  Word parse_word(std::string_view text, std::vector<std::string> const& names);

  std::string render_word(std::span<Letter const> w,
                          std::vector<std::string> const& names);
  std::string render(Presentation const& p);

  RelationMatrix abelianized_relations(Presentation const& p);

  // Exponent sum of every generator in w.
  std::vector<long long> exponent_sums(std::span<Letter const> w,
                                       std::size_t num_generators);

}  // namespace knotcover
