#include "knotcover/presentation.hpp"

#include <cctype>
#include <charconv>
#include <unordered_set>

#include "knotcover/error.hpp"

namespace knotcover {

  Word free_reduce(std::span<Letter const> w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
      if (!out.empty() && out.back() == inverse(l)) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    return out;
  }

  Word cyclic_reduce(std::span<Letter const> w) {
    Word        r     = free_reduce(w);
    std::size_t begin = 0;
    std::size_t end   = r.size();
    while (end - begin >= 2 && r[begin] == inverse(r[end - 1])) {
      ++begin;
      --end;
    }
    return Word(r.begin() + begin, r.begin() + end);
  }

  Word inverse_word(std::span<Letter const> w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(inverse(*it));
    }
    return out;
  }

  Word power(std::span<Letter const> w, long exponent) {
    Word base = exponent < 0 ? inverse_word(w) : Word(w.begin(), w.end());
    long n    = exponent < 0 ? -exponent : exponent;
    Word out;
    out.reserve(base.size() * static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      out.insert(out.end(), base.begin(), base.end());
    }
    return out;
  }

  Word concat(std::span<Letter const> u, std::span<Letter const> v) {
    Word out(u.begin(), u.end());
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  namespace {

    bool is_identifier(std::string_view s) {
      if (s.empty() || std::isalpha(static_cast<unsigned char>(s[0])) == 0) {
        return false;
      }
      for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_') {
          return false;
        }
      }
      return true;
    }

    // Recursive-descent parser over a single string. Positions in errors are
    // byte offsets into the original text.
    class Parser {
     public:
      Parser(std::string_view text, std::size_t offset = 0)
          : text_(text), pos_(0), offset_(offset) {}

      void set_generators(std::vector<std::string> names) {
        names_ = std::move(names);
      }

      std::vector<std::string> parse_generators() {
        std::vector<std::string> names;
        skip_ws();
        if (peek() == '|') {
          return names;
        }
        while (true) {
          names.push_back(identifier());
          skip_ws();
          if (peek() != ',') {
            break;
          }
          ++pos_;
        }
        return names;
      }

      std::vector<Word> parse_items() {
        std::vector<Word> relators;
        skip_ws();
        if (peek() == '>' || at_end()) {
          return relators;
        }
        while (true) {
          std::size_t start = here();
          Word        lhs   = word();
          skip_ws();
          bool equation = false;
          while (peek() == '=') {
            equation = true;
            ++pos_;
            Word rhs = word();
            push_relator(relators, concat(lhs, inverse_word(rhs)), start);
            lhs = std::move(rhs);
            skip_ws();
          }
          if (!equation) {
            push_relator(relators, lhs, start);
          }
          skip_ws();
          if (peek() != ',') {
            break;
          }
          ++pos_;
        }
        return relators;
      }

      Word word() {
        Word out;
        skip_ws();
        if (!starts_atom()) {
          fail("expected a generator, '(' or '1'");
        }
        while (true) {
          Word f = factor();
          out.insert(out.end(), f.begin(), f.end());
          skip_ws();
          if (peek() == '*') {
            ++pos_;
            skip_ws();
            if (!starts_atom()) {
              fail("expected a factor after '*'");
            }
            continue;
          }
          if (starts_atom()) {
            continue;
          }
          break;
        }
        return free_reduce(out);
      }

      void expect(char c) {
        skip_ws();
        if (peek() != c) {
          fail(std::string("expected '") + c + "'");
        }
        ++pos_;
      }

      void expect_end() {
        skip_ws();
        if (!at_end()) {
          fail("unexpected trailing input");
        }
      }

      [[noreturn]] void fail(std::string const& msg) const {
        throw ParseError(here(), msg);
      }

     private:
      Word factor() {
        Word a = atom();
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          skip_ws();
          long e = integer();
          return free_reduce(power(a, e));
        }
        return a;
      }

      Word atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
          ++pos_;
          Word w = word();
          expect(')');
          return w;
        }
        if (c == '1') {
          ++pos_;
          return {};
        }
        std::size_t start = here();
        std::string name  = identifier();
        for (std::size_t i = 0; i < names_.size(); ++i) {
          if (names_[i] == name) {
            return {make_letter(i)};
          }
        }
        throw Error(ErrorCode::unknown_generator,
                    "unknown generator '" + name + "' at position "
                        + std::to_string(start));
      }

      long integer() {
        std::size_t start = pos_;
        bool        paren = false;
        if (peek() == '(' || peek() == '{') {
          paren = true;
          ++pos_;
          skip_ws();
        }
        std::size_t num_start = pos_;
        if (peek() == '-' || peek() == '+') {
          ++pos_;
        }
        while (!at_end()
               && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
          ++pos_;
        }
        std::string_view digits = text_.substr(num_start, pos_ - num_start);
        if (!digits.empty() && digits[0] == '+') {
          digits.remove_prefix(1);
        }
        long value = 0;
        auto [ptr, ec]
            = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || ptr != digits.data() + digits.size()
            || digits.empty() || digits == "-") {
          pos_ = start;
          fail("expected an integer exponent");
        }
        if (paren) {
          skip_ws();
          if (peek() != ')' && peek() != '}') {
            fail("unclosed exponent");
          }
          ++pos_;
        }
        return value;
      }

      std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        if (at_end() || std::isalpha(static_cast<unsigned char>(peek())) == 0) {
          fail("expected an identifier");
        }
        while (!at_end()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0
                   || text_[pos_] == '_')) {
          ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
      }

      bool starts_atom() const {
        char c = peek();
        return c == '(' || c == '1' || std::isalpha(static_cast<unsigned char>(c)) != 0;
      }

      void push_relator(std::vector<Word>& out, Word const& w, std::size_t at) {
        Word r = cyclic_reduce(w);
        if (r.empty()) {
          throw ParseError(at, "relator reduces to the empty word");
        }
        out.push_back(std::move(r));
      }

      void skip_ws() {
        while (!at_end()
               && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
          ++pos_;
        }
      }
      bool at_end() const {
        return pos_ >= text_.size();
      }
      char peek() const {
        return at_end() ? '\0' : text_[pos_];
      }
      std::size_t here() const {
        return offset_ + pos_;
      }

      std::string_view         text_;
      std::size_t              pos_;
      std::size_t              offset_;
      std::vector<std::string> names_;
    };

  }  // namespace

  Presentation::Presentation(std::vector<std::string> generator_names,
                             std::vector<Word>        relators,
                             std::string              source_text)
      : source_(std::move(source_text)) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < generator_names.size(); ++i) {
      auto& name = generator_names[i];
      if (!is_identifier(name)) {
        throw Error(ErrorCode::invalid_argument,
                    "invalid generator name '" + name + "'");
      }
      if (!seen.insert(name).second) {
        throw Error(ErrorCode::invalid_argument,
                    "duplicate generator name '" + name + "'");
      }
      generators_.push_back({std::move(name), i});
    }
    relators_.reserve(relators.size());
    for (auto const& r : relators) {
      for (Letter l : r) {
        if (generator_of(l) >= generators_.size()) {
          throw Error(ErrorCode::unknown_generator,
                      "relator references generator ordinal "
                          + std::to_string(generator_of(l)));
        }
      }
      Word c = cyclic_reduce(r);
      if (c.empty()) {
        throw Error(ErrorCode::invalid_argument,
                    "relator reduces to the empty word");
      }
      relators_.push_back(std::move(c));
    }
  }

  std::optional<std::size_t>
  Presentation::find_generator(std::string_view name) const {
    for (auto const& g : generators_) {
      if (g.name == name) {
        return g.index;
      }
    }
    return std::nullopt;
  }

  std::vector<std::string> Presentation::generator_names() const {
    std::vector<std::string> out;
    out.reserve(generators_.size());
    for (auto const& g : generators_) {
      out.push_back(g.name);
    }
    return out;
  }

  Presentation Presentation::with_relators(std::vector<Word> extra) const {
    std::vector<Word> rels = relators_;
    for (auto& w : extra) {
      Word r = cyclic_reduce(w);
      if (!r.empty()) {
        rels.push_back(std::move(r));
      }
    }
    return Presentation(generator_names(), std::move(rels));
  }

  Presentation parse_presentation(std::string_view text) {
    Parser p(text);
    p.expect('<');
    auto names = p.parse_generators();
    p.expect('|');
    {
      std::unordered_set<std::string> seen;
      for (auto const& n : names) {
        if (!seen.insert(n).second) {
          p.fail("duplicate generator '" + n + "'");
        }
      }
    }
    p.set_generators(names);
    auto rels = p.parse_items();
    p.expect('>');
    p.expect_end();
    return Presentation(std::move(names), std::move(rels), std::string(text));
  }

  Word parse_word(std::string_view text, std::vector<std::string> const& names) {
    Parser p(text);
    p.set_generators(names);
    Word w = p.word();
    p.expect_end();
    return w;
  }

  Word parse_word(std::string_view text, Presentation const& p) {
    return parse_word(text, p.generator_names());
  }

  std::string render_word(std::span<Letter const> w,
                          std::vector<std::string> const& names) {
    if (w.empty()) {
      return "1";
    }
    std::string out;
    std::size_t i = 0;
    while (i < w.size()) {
      std::size_t g = generator_of(w[i]);
      long        e = 0;
      std::size_t j = i;
      while (j < w.size() && generator_of(w[j]) == g
             && is_inverse(w[j]) == is_inverse(w[i])) {
        e += is_inverse(w[j]) ? -1 : 1;
        ++j;
      }
      if (!out.empty()) {
        out += '*';
      }
      out += names.at(g);
      if (e != 1) {
        out += '^';
        out += std::to_string(e);
      }
      i = j;
    }
    return out;
  }

  std::string render(Presentation const& p) {
    auto        names = p.generator_names();
    std::string out   = "< ";
    for (std::size_t i = 0; i < names.size(); ++i) {
      out += (i == 0 ? "" : ", ") + names[i];
    }
    out += " | ";
    for (std::size_t i = 0; i < p.relators().size(); ++i) {
      out += (i == 0 ? "" : ", ") + render_word(p.relators()[i], names);
    }
    out += p.relators().empty() ? ">" : " >";
    return out;
  }

  std::vector<long long> exponent_sums(std::span<Letter const> w,
                                       std::size_t num_generators) {
    std::vector<long long> sums(num_generators, 0);
    for (Letter l : w) {
      sums.at(generator_of(l)) += is_inverse(l) ? -1 : 1;
    }
    return sums;
  }

  RelationMatrix abelianized_relations(Presentation const& p) {
    RelationMatrix m;
    m.rows = p.relators().size();
    m.cols = p.num_generators();
    m.entries.reserve(m.rows * m.cols);
    for (auto const& r : p.relators()) {
      auto sums = exponent_sums(r, m.cols);
      m.entries.insert(m.entries.end(), sums.begin(), sums.end());
    }
    return m;
  }

}  // namespace knotcover
