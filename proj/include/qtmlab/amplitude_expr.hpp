#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "qtmlab/errors.hpp"
#include "qtmlab/format.hpp"

namespace qtmlab::machine {

using Amplitude = std::complex<double>;

// recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | 'i' | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor
//   number := decimal literal, optional fraction and exponent
// evaluated in double precision
class AmplitudeParser {
 public:
  // col_offset shifts reported columns when text is a slice of a longer line
  explicit AmplitudeParser(std::string_view text, int line = 0, int col_offset = 0)
      : text_(text), line_(line), col_offset_(col_offset) {}

  Amplitude parse_expr() {
    Amplitude v = parse_term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        v += parse_term();
      } else if (consume('-')) {
        v -= parse_term();
      } else {
        return v;
      }
    }
  }

  void skip_ws() {
    while (p_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[p_]))) ++p_;
  }
  bool at_end() {
    skip_ws();
    return p_ >= text_.size();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }
  char peek() {
    skip_ws();
    return p_ < text_.size() ? text_[p_] : '\0';
  }
  bool consume(char c) {
    if (peek() != c || c == '\0') return false;
    ++p_;
    return true;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::uint64_t parse_nat() {
    skip_ws();
    std::size_t start = p_;
    while (p_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p_]))) ++p_;
    if (p_ == start) fail("expected a natural number");
    std::uint64_t v = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + p_, v);
    if (res.ec != std::errc{}) fail("natural number out of range");
    return v;
  }

  std::size_t pos() const { return p_; }

 private:
  Amplitude parse_term() {
    Amplitude v = parse_factor();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        v *= parse_factor();
      } else if (consume('/')) {
        v /= parse_factor();
      } else {
        return v;
      }
    }
  }

  Amplitude parse_factor() {
    char c = peek();
    if (c == '-') {
      ++p_;
      Amplitude v = -parse_factor();
      // drop signed zeros so sqrt(-1) takes the +i branch
      return {v.real() == 0.0 ? 0.0 : v.real(), v.imag() == 0.0 ? 0.0 : v.imag()};
    }
    if (c == '(') {
      ++p_;
      Amplitude v = parse_expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = p_;
      while (p_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[p_]))) ++p_;
      std::string_view name = text_.substr(start, p_ - start);
      if (name == "i") return Amplitude{0.0, 1.0};
      if (name == "pi") return Amplitude{std::numbers::pi, 0.0};
      if (name == "sqrt") {
        expect('(');
        Amplitude v = parse_expr();
        expect(')');
        return std::sqrt(v);
      }
      fail("unknown name '" + std::string(name) + "'");
    }
    fail(c == '\0' ? "unexpected end of expression"
                   : std::string("unexpected character '") + c + "'");
  }

  Amplitude parse_number() {
    std::size_t start = p_;
    while (p_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p_]))) ++p_;
    if (p_ < text_.size() && text_[p_] == '.') {
      ++p_;
      std::size_t frac = p_;
      while (p_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p_]))) ++p_;
      if (p_ == frac) fail("digit expected after decimal point");
    }
    if (p_ < text_.size() && (text_[p_] == 'e' || text_[p_] == 'E')) {
      std::size_t mark = p_;
      ++p_;
      if (p_ < text_.size() && (text_[p_] == '+' || text_[p_] == '-')) ++p_;
      std::size_t digits = p_;
      while (p_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p_]))) ++p_;
      if (p_ == digits) p_ = mark;  // not an exponent after all
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + p_, v);
    if (res.ec != std::errc{} || res.ptr != text_.data() + p_)
      fail("bad number literal");
    return Amplitude{v, 0.0};
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg, line_, col_offset_ + static_cast<int>(p_) + 1);
  }

  std::string_view text_;
  std::size_t p_ = 0;
  int line_;
  int col_offset_ = 0;
};

inline Amplitude parse_amplitude(std::string_view text, int line = 0, int col_offset = 0) {
  AmplitudeParser ap(text, line, col_offset);
  Amplitude v = ap.parse_expr();
  ap.expect_end();
  return v;
}

// emits an expression the grammar above reads back to the same double pair
inline std::string format_amplitude(const Amplitude& a) {
  double re = a.real(), im = a.imag();
  if (im == 0.0) return g17(re);
  std::string s;
  if (re != 0.0) {
    s = g17(re) + (im < 0 ? "-" : "+");
  } else if (im < 0) {
    s = "-";
  }
  return s + g17(std::abs(im)) + "*i";
}

}  // namespace qtmlab::machine
