#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtmlab/errors.hpp"

namespace qtmlab::tape {

inline constexpr char kBlank = '_';

// a tape cell: base glyph plus the marked ("extra") flag; marked symbols are
// written 1', _' and so on
struct Symbol {
  char base = kBlank;
  bool marked = false;
  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

inline Symbol sym(char base, bool marked = false) { return Symbol{base, marked}; }
inline Symbol blank() { return Symbol{}; }
inline Symbol mark(Symbol s) {
  s.marked = true;
  return s;
}
inline Symbol unmark(Symbol s) {
  s.marked = false;
  return s;
}
inline bool is_plain_blank(const Symbol& s) { return s.base == kBlank && !s.marked; }

enum class Direction : std::uint8_t { L, R };

inline char direction_glyph(Direction d) { return d == Direction::L ? 'L' : 'R'; }

using Word = std::vector<Symbol>;

// tape triple: head sits on the first symbol of `right`; an empty right
// content reads as the unmarked blank
struct Configuration {
  Word left;
  int state = 0;
  Word right;
  auto operator<=>(const Configuration&) const = default;
  bool operator==(const Configuration&) const = default;
};

// strips leading unmarked blanks on the left and trailing unmarked blanks on
// the right; marked blanks stay
inline Configuration canonicalize(Word left, int state, Word right) {
  std::size_t i = 0;
  while (i < left.size() && is_plain_blank(left[i])) ++i;
  left.erase(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(i));
  while (!right.empty() && is_plain_blank(right.back())) right.pop_back();
  return Configuration{std::move(left), state, std::move(right)};
}

inline Symbol current_symbol(const Configuration& c) {
  return c.right.empty() ? blank() : c.right.front();
}

// symbol in the cell just left of the head
inline Symbol left_symbol(const Configuration& c) {
  return c.left.empty() ? blank() : c.left.back();
}

// write v into the current cell, move the head in direction d, enter state p
inline Configuration step(const Configuration& c, int p, Symbol v, Direction d) {
  Word left = c.left;
  Word right = c.right;
  if (!right.empty()) right.erase(right.begin());
  if (d == Direction::R) {
    left.push_back(v);
  } else {
    Symbol w = blank();
    if (!left.empty()) {
      w = left.back();
      left.pop_back();
    }
    right.insert(right.begin(), v);
    right.insert(right.begin(), w);
  }
  return canonicalize(std::move(left), p, std::move(right));
}

// inverse of step: reverse_step(step(C, p, v, d), q, u, d) == C whenever C had
// state q and current symbol u.  For d == R the undone write sits at the end
// of the left content; for d == L it sits one cell right of the head.
inline Configuration reverse_step(const Configuration& c, int q, Symbol u, Direction d) {
  Word left = c.left;
  Word right = c.right;
  if (d == Direction::R) {
    if (!left.empty()) left.pop_back();
    right.insert(right.begin(), u);
  } else {
    Symbol w = blank();
    if (!right.empty()) {
      w = right.front();
      right.erase(right.begin());
    }
    if (!right.empty()) right.erase(right.begin());
    left.push_back(w);
    right.insert(right.begin(), u);
  }
  return canonicalize(std::move(left), q, std::move(right));
}

// output value: number of cells holding 1, marked or not
inline std::uint64_t val(const Configuration& c) {
  std::uint64_t n = 0;
  for (const auto& s : c.left) n += s.base == '1';
  for (const auto& s : c.right) n += s.base == '1';
  return n;
}

inline std::uint64_t mark_count(const Configuration& c) {
  std::uint64_t n = 0;
  for (const auto& s : c.left) n += s.marked;
  for (const auto& s : c.right) n += s.marked;
  return n;
}

// the configuration k marching steps after c: the current symbol and the k-1
// symbols right of it move behind the head in marked form, padded with marked
// blanks past the right content.  Test-support constructor; evolution only
// produces marks through target-state rows.
inline Configuration mark_k(const Configuration& c, std::uint64_t k) {
  if (k == 0) return c;
  if (mark_count(c) != 0)
    throw semantic_error("mark_k: configuration already carries marked symbols");
  Word left = c.left;
  Word right = c.right;
  for (std::uint64_t t = 0; t < k; ++t) {
    Symbol s = blank();
    if (!right.empty()) {
      s = right.front();
      right.erase(right.begin());
    }
    s.marked = true;
    left.push_back(s);
  }
  return canonicalize(std::move(left), c.state, std::move(right));
}

inline std::string word_text(const Word& w) {
  if (w.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += w[i].base;
    if (w[i].marked) s += '\'';
  }
  return s;
}

// canonical textual form, also the bit-exact hash key:
// "<alpha> | q | <beta>" with marked symbols suffixed ' and empty content "-"
inline std::string to_text(const Configuration& c, const std::string& state_name) {
  return word_text(c.left) + " | " + state_name + " | " + word_text(c.right);
}

}  // namespace qtmlab::tape
