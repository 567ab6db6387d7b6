#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "qtmlab/amplitude_expr.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/machine.hpp"

namespace qtmlab::machine {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// comment-stripped, trimmed line content; empty when nothing is left
inline std::string_view meaningful(std::string_view line) {
  if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return trim(line);
}

struct RawRule {
  int line = 0;
  std::string from, read, to, write, dir;
  std::string amp;     // rest-of-line expression text
  int amp_col = 0;     // 0-based column of amp within the original line
};

// directive soup shared by the two file formats; the caller enforces the
// header value and which directives are legal under it
struct RawMachine {
  std::string header;
  int header_line = 0;
  std::string alphabet;
  int alphabet_line = 0;
  std::vector<std::string> state_names;
  std::vector<std::string> source_names, target_names;
  int source_line = 0, target_line = 0;
  std::string initial_name, final_name;
  int initial_line = 0, final_line = 0;
  std::vector<RawRule> rules;
};

inline std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

inline RawMachine parse_raw(std::string_view text) {
  RawMachine raw;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view body = meaningful(line);
    if (body.empty()) continue;

    if (raw.header.empty()) {
      auto toks = split_tokens(body);
      if (toks.size() != 1)
        throw parse_error("expected a single header word", lineno);
      raw.header = toks[0];
      raw.header_line = lineno;
      continue;
    }

    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos)
      throw parse_error("expected a directive like 'rule:'", lineno);
    std::string key(trim(body.substr(0, colon)));
    std::string_view rest = body.substr(colon + 1);

    if (key == "alphabet") {
      if (raw.alphabet_line)
        throw parse_error("duplicate 'alphabet:' directive", lineno);
      raw.alphabet_line = lineno;
      for (const auto& t : split_tokens(rest)) {
        if (t.size() != 1)
          throw parse_error("alphabet symbols are single characters, got '" + t + "'", lineno);
        raw.alphabet += t[0];
      }
      if (raw.alphabet.empty()) throw parse_error("empty alphabet", lineno);
    } else if (key == "states") {
      for (auto& t : split_tokens(rest)) raw.state_names.push_back(std::move(t));
    } else if (key == "source") {
      if (!raw.source_line) raw.source_line = lineno;
      for (auto& t : split_tokens(rest)) raw.source_names.push_back(std::move(t));
    } else if (key == "target") {
      if (!raw.target_line) raw.target_line = lineno;
      for (auto& t : split_tokens(rest)) raw.target_names.push_back(std::move(t));
    } else if (key == "initial" || key == "final") {
      auto toks = split_tokens(rest);
      if (toks.size() != 1)
        throw parse_error("'" + key + ":' takes exactly one state name", lineno);
      auto& slot = key == "initial" ? raw.initial_name : raw.final_name;
      auto& slot_line = key == "initial" ? raw.initial_line : raw.final_line;
      if (slot_line) throw parse_error("duplicate '" + key + ":' directive", lineno);
      slot = toks[0];
      slot_line = lineno;
    } else if (key == "rule") {
      // six fixed tokens, then the amplitude expression as free text
      RawRule r;
      r.line = lineno;
      std::size_t i = 0;
      auto next_tok = [&]() {
        while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        std::size_t start = i;
        while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
        return std::string(rest.substr(start, i - start));
      };
      r.from = next_tok();
      r.read = next_tok();
      std::string arrow = next_tok();
      r.to = next_tok();
      r.write = next_tok();
      r.dir = next_tok();
      if (r.dir.empty())
        throw parse_error("rule needs 'from read -> to write dir amplitude'", lineno);
      if (arrow != "->") throw parse_error("expected '->' in rule", lineno);
      while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
      r.amp = std::string(trim(rest.substr(i)));
      if (r.amp.empty()) throw parse_error("missing amplitude expression", lineno);
      r.amp_col = static_cast<int>((body.data() - line.data()) + (colon + 1) + i);
      raw.rules.push_back(std::move(r));
    } else {
      throw parse_error("unknown directive '" + key + ":'", lineno);
    }
  }
  if (raw.header.empty()) throw parse_error("empty file: missing header line");
  return raw;
}

inline char single_glyph(const std::string& tok, const char* what, int line) {
  if (tok.size() != 1)
    throw parse_error(std::string(what) + " must be a single symbol, got '" + tok + "'", line);
  return tok[0];
}

inline Direction parse_dir(const std::string& tok, int line) {
  if (tok == "L") return Direction::L;
  if (tok == "R") return Direction::R;
  throw parse_error("direction must be L or R, got '" + tok + "'", line);
}

}  // namespace detail

inline std::string sniff_header(std::string_view text) {
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view body = detail::meaningful(line);
    if (body.empty()) continue;
    auto toks = detail::split_tokens(body);
    return toks.empty() ? std::string() : toks[0];
  }
  return std::string();
}

// parses the marked-sweep machine format (header `qtm`) and runs the
// structural checks; numeric validation is a separate step
inline QTMDef parse_qtm(std::string_view text, std::string name = "") {
  detail::RawMachine raw = detail::parse_raw(text);
  if (raw.header != "qtm")
    throw parse_error("expected header 'qtm', got '" + raw.header + "'", raw.header_line);
  if (raw.alphabet_line == 0) throw parse_error("missing 'alphabet:' directive");
  if (raw.state_names.empty()) throw parse_error("missing 'states:' directive");

  QTMDef m;
  m.name = std::move(name);
  m.alphabet = raw.alphabet;
  for (const auto& n : raw.state_names) m.states.push_back({n, false, false, false, false});

  auto resolve = [&](const std::string& n, int line) {
    int q = m.state_index(n);
    if (q < 0) throw parse_error("unknown state '" + n + "'", line);
    return q;
  };
  for (const auto& n : raw.source_names)
    m.states[resolve(n, raw.source_line)].is_source = true;
  for (const auto& n : raw.target_names)
    m.states[resolve(n, raw.target_line)].is_target = true;
  if (raw.initial_line) m.states[resolve(raw.initial_name, raw.initial_line)].is_initial = true;
  if (raw.final_line) m.states[resolve(raw.final_name, raw.final_line)].is_final = true;

  for (const auto& rr : raw.rules) {
    Rule r;
    r.from = resolve(rr.from, rr.line);
    r.read = detail::single_glyph(rr.read, "read symbol", rr.line);
    r.to = resolve(rr.to, rr.line);
    r.write = detail::single_glyph(rr.write, "write symbol", rr.line);
    r.dir = detail::parse_dir(rr.dir, rr.line);
    r.amp = parse_amplitude(rr.amp, rr.line, rr.amp_col);
    m.rules.push_back(r);
  }
  m.finalize_structure();
  return m;
}

// canonical emission; parse_qtm(write_qtm(m)) reproduces m's table exactly
inline std::string write_qtm(const QTMDef& m) {
  std::string out = "qtm\n";
  out += "alphabet:";
  for (char c : m.alphabet) {
    out += ' ';
    out += c;
  }
  out += "\nstates:";
  for (const auto& s : m.states) out += " " + s.name;
  out += "\nsource:";
  out += " " + m.state_name(m.initial_state);
  for (const auto& s : m.states)
    if (s.is_source && !s.is_initial) out += " " + s.name;
  out += "\ntarget:";
  out += " " + m.state_name(m.final_state);
  for (const auto& s : m.states)
    if (s.is_target && !s.is_final) out += " " + s.name;
  out += "\ninitial: " + m.state_name(m.initial_state);
  out += "\nfinal: " + m.state_name(m.final_state);
  out += "\n";
  for (const auto& r : m.rules) {
    out += "rule: " + m.state_name(r.from) + " " + r.read + std::string(" -> ") +
           m.state_name(r.to) + " " + r.write + " " +
           tape::direction_glyph(r.dir) + " " + format_amplitude(r.amp) + "\n";
  }
  return out;
}

}  // namespace qtmlab::machine
