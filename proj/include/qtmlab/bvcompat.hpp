#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtmlab/distribution.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/evolution.hpp"
#include "qtmlab/machine.hpp"
#include "qtmlab/machine_io.hpp"
#include "qtmlab/tape.hpp"

namespace qtmlab::bvcompat {

using evolution::Superposition;
using tape::Direction;

// machine in the loop formalism: a total transition table on all states, the
// final state looping back to the initial one; no marked symbols anywhere
class BVQTM {
 public:
  std::string name;
  std::string alphabet;
  std::vector<std::string> state_names;
  int initial_state = -1;
  int final_state = -1;
  std::vector<machine::Rule> rules;

  int state_index(std::string_view n) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
      if (state_names[i] == n) return static_cast<int>(i);
    return -1;
  }
  const std::string& state_name(int q) const { return state_names.at(q); }
  bool valid_state(int q) const {
    return q >= 0 && q < static_cast<int>(state_names.size());
  }
  bool has_symbol(char c) const { return alphabet.find(c) != std::string::npos; }

  void finalize_structure() {
    if (alphabet.empty() || !has_symbol(tape::kBlank) || !has_symbol('1'))
      throw semantic_error("alphabet must contain '_' and '1'");
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet.find(alphabet[i], i + 1) != std::string::npos)
        throw semantic_error(std::string("duplicate alphabet symbol '") + alphabet[i] + "'");
    if (state_names.empty()) throw semantic_error("no states declared");
    for (std::size_t i = 0; i < state_names.size(); ++i) {
      if (state_names[i].empty()) throw semantic_error("empty state name");
      for (std::size_t j = i + 1; j < state_names.size(); ++j)
        if (state_names[i] == state_names[j])
          throw semantic_error("duplicate state name '" + state_names[i] + "'");
    }
    if (!valid_state(initial_state)) throw semantic_error("missing initial state");
    if (!valid_state(final_state)) throw semantic_error("missing final state");
    std::vector<machine::Rule> kept;
    for (const machine::Rule& r : rules) {
      if (!valid_state(r.from) || !valid_state(r.to))
        throw semantic_error("rule references an unknown state");
      if (!has_symbol(r.read) || !has_symbol(r.write))
        throw semantic_error("rule uses a symbol outside the alphabet");
      if (!hilbert::is_finite(r.amp)) throw semantic_error("non-finite rule amplitude");
      if (r.amp == hilbert::Amplitude{0.0}) continue;
      kept.push_back(r);
    }
    rules = std::move(kept);
    for (std::size_t i = 0; i < rules.size(); ++i)
      for (std::size_t j = i + 1; j < rules.size(); ++j) {
        const machine::Rule &a = rules[i], &b = rules[j];
        if (a.from == b.from && a.read == b.read && a.to == b.to &&
            a.write == b.write && a.dir == b.dir)
          throw semantic_error("duplicate rule for (" + state_name(a.from) + "," + a.read + ")");
      }
    rows_.clear();
    for (std::size_t i = 0; i < rules.size(); ++i)
      rows_[{rules[i].from, rules[i].read}].push_back(static_cast<int>(i));
  }

  const std::vector<int>* row(int q, char a) const {
    auto it = rows_.find({q, a});
    return it == rows_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::pair<int, char>, std::vector<int>> rows_;
};

// header `bvqtm`; same directives as the qtm format minus source:/target:,
// optionally auto-completing the final-state loop rows
inline BVQTM parse_bv(std::string_view text, std::string name = "",
                      bool complete_loops = false) {
  machine::detail::RawMachine raw = machine::detail::parse_raw(text);
  if (raw.header != "bvqtm")
    throw parse_error("expected header 'bvqtm', got '" + raw.header + "'", raw.header_line);
  if (raw.source_line)
    throw parse_error("'source:' is not part of this format", raw.source_line);
  if (raw.target_line)
    throw parse_error("'target:' is not part of this format", raw.target_line);
  if (raw.alphabet_line == 0) throw parse_error("missing 'alphabet:' directive");
  if (raw.state_names.empty()) throw parse_error("missing 'states:' directive");
  if (raw.initial_line == 0) throw parse_error("missing 'initial:' directive");
  if (raw.final_line == 0) throw parse_error("missing 'final:' directive");

  BVQTM bv;
  bv.name = std::move(name);
  bv.alphabet = raw.alphabet;
  bv.state_names = raw.state_names;
  auto resolve = [&](const std::string& n, int line) {
    int q = bv.state_index(n);
    if (q < 0) throw parse_error("unknown state '" + n + "'", line);
    return q;
  };
  bv.initial_state = resolve(raw.initial_name, raw.initial_line);
  bv.final_state = resolve(raw.final_name, raw.final_line);
  for (const auto& rr : raw.rules) {
    machine::Rule r;
    r.from = resolve(rr.from, rr.line);
    r.read = machine::detail::single_glyph(rr.read, "read symbol", rr.line);
    r.to = resolve(rr.to, rr.line);
    r.write = machine::detail::single_glyph(rr.write, "write symbol", rr.line);
    r.dir = machine::detail::parse_dir(rr.dir, rr.line);
    r.amp = machine::parse_amplitude(rr.amp, rr.line, rr.amp_col);
    bv.rules.push_back(r);
  }
  if (complete_loops) {
    for (char a : bv.alphabet) {
      bool present = false;
      for (const auto& r : bv.rules)
        if (r.from == bv.final_state && r.read == a) present = true;
      if (!present)
        bv.rules.push_back({bv.final_state, a, bv.initial_state, a, Direction::R, 1.0});
    }
  }
  bv.finalize_structure();
  return bv;
}

struct BVReport {
  std::vector<std::string> violations;
  machine::UnitarityReport unitarity;
  bool passed = false;
};

// totality, the loop constraint on the final state, initial-state isolation,
// and the numeric conditions on the full table
inline BVReport validate_bv(const BVQTM& bv, double eps = machine::kDefaultEps) {
  BVReport rep;
  for (std::size_t q = 0; q < bv.state_names.size(); ++q)
    for (char a : bv.alphabet) {
      const auto* idxs = bv.row(static_cast<int>(q), a);
      if (!idxs || idxs->empty())
        rep.violations.push_back("missing row (" + bv.state_name(static_cast<int>(q)) +
                                 "," + std::string(1, a) + ")");
    }
  for (char a : bv.alphabet) {
    const auto* idxs = bv.row(bv.final_state, a);
    if (!idxs) continue;  // already reported as missing
    bool ok = idxs->size() == 1;
    if (ok) {
      const machine::Rule& r = bv.rules[(*idxs)[0]];
      ok = r.to == bv.initial_state && r.write == a && r.dir == Direction::R &&
           std::abs(r.amp - hilbert::Amplitude{1.0}) <= eps;
    }
    if (!ok)
      rep.violations.push_back("final row (" + bv.state_name(bv.final_state) + "," +
                               std::string(1, a) +
                               ") must loop to the initial state with amplitude 1");
  }
  for (const auto& r : bv.rules)
    if (r.to == bv.initial_state && r.from != bv.final_state)
      rep.violations.push_back("rule into the initial state from (" +
                               bv.state_name(r.from) + "," + std::string(1, r.read) + ")");
  rep.unitarity = machine::detail::condition_deviations(
      bv.rules, [&](int q) { return bv.state_name(q); });
  rep.passed = rep.violations.empty() && rep.unitarity.passes(eps);
  return rep;
}

// drops the loop rows and declares the initial/final states as the source and
// target; the result must pass the marked-sweep validation
inline machine::QTMDef convert(const BVQTM& bv, double eps = machine::kDefaultEps) {
  BVReport rep = validate_bv(bv, eps);
  if (!rep.passed) {
    std::string msg = "loop machine '" + bv.name + "' fails validation";
    if (!rep.violations.empty()) msg += ": " + rep.violations.front();
    throw semantic_error(msg);
  }
  machine::QTMDef m;
  m.name = bv.name;
  m.alphabet = bv.alphabet;
  for (std::size_t i = 0; i < bv.state_names.size(); ++i) {
    machine::StateInfo s;
    s.name = bv.state_names[i];
    s.is_source = s.is_initial = static_cast<int>(i) == bv.initial_state;
    s.is_target = s.is_final = static_cast<int>(i) == bv.final_state;
    m.states.push_back(std::move(s));
  }
  for (const auto& r : bv.rules)
    if (r.from != bv.final_state) m.rules.push_back(r);
  return machine::validate(std::move(m), eps);
}

// direct simulator of the total table; deliberately independent of the
// marked-sweep evolution so the two can be compared
inline Superposition bv_step(const BVQTM& bv, const Superposition& phi) {
  Superposition out;
  for (const auto& [c, a] : phi.entries()) {
    tape::Symbol u = tape::current_symbol(c);
    if (u.marked) throw semantic_error("loop machine tapes carry no marked symbols");
    if (const auto* idxs = bv.row(c.state, u.base))
      for (int i : *idxs) {
        const machine::Rule& r = bv.rules[i];
        out.accumulate(tape::step(c, r.to, tape::sym(r.write), r.dir), a * r.amp);
      }
  }
  out.finish();
  return out;
}

inline std::vector<Superposition> bv_evolve(const BVQTM& bv, const Superposition& phi0,
                                            std::size_t k) {
  std::vector<Superposition> seq;
  seq.reserve(k + 1);
  seq.push_back(phi0);
  for (std::size_t i = 0; i < k; ++i) seq.push_back(bv_step(bv, seq.back()));
  return seq;
}

inline Superposition bv_encode_input(const BVQTM& bv,
                                     const std::vector<distribution::InputTerm>& terms) {
  if (terms.empty()) throw semantic_error("empty input superposition");
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.amp);
  if (std::abs(s - 1.0) > 1e-9)
    throw semantic_error("input squared norm is " + g12(s) + ", must be 1");
  Superposition phi;
  for (const auto& t : terms) {
    tape::Configuration c;
    c.state = bv.initial_state;
    c.right = tape::Word(t.n + 1, tape::sym('1'));
    phi.insert_term(std::move(c), t.amp);
  }
  return phi;
}

enum class HaltKind { HALTED, STATIONARITY_VIOLATION, NONE };

struct HaltResult {
  HaltKind kind = HaltKind::NONE;
  std::uint64_t step = 0;
};

// first all-final step; a step mixing final and nonfinal support breaks the
// stationarity discipline and is reported as such
inline HaltResult halt_detect(const BVQTM& bv, const Superposition& phi0,
                              std::uint64_t max_steps) {
  Superposition phi = phi0;
  for (std::uint64_t k = 0;; ++k) {
    bool any_final = false, any_nonfinal = false;
    for (const auto& [c, a] : phi.entries())
      (c.state == bv.final_state ? any_final : any_nonfinal) = true;
    if (any_final && any_nonfinal) return {HaltKind::STATIONARITY_VIOLATION, k};
    if (any_final) return {HaltKind::HALTED, k};
    if (k == max_steps) return {HaltKind::NONE, max_steps};
    phi = bv_step(bv, phi);
  }
}

// trajectory-by-trajectory agreement on input n up to the halting step,
// comparing configurations through their textual form under each machine's
// own state names
inline bool bounded_equiv(const BVQTM& bv, const machine::QTMDef& m, std::uint64_t n,
                          std::uint64_t max_steps, double eps = machine::kDefaultEps) {
  Superposition phi_bv = bv_encode_input(bv, {{1.0, n}});
  HaltResult hr = halt_detect(bv, phi_bv, max_steps);
  if (hr.kind != HaltKind::HALTED) return false;
  auto traj_bv = bv_evolve(bv, phi_bv, hr.step);
  auto traj_m = evolution::evolve(m, distribution::encode_input(m, {{1.0, n}}), hr.step);
  for (std::size_t i = 0; i <= hr.step; ++i) {
    std::map<std::string, hilbert::Amplitude> lhs, rhs;
    for (const auto& [c, a] : traj_bv[i].entries())
      lhs[tape::to_text(c, bv.state_name(c.state))] = a;
    for (const auto& [c, a] : traj_m[i].entries())
      rhs[machine::config_text(m, c)] = a;
    if (lhs.size() != rhs.size()) return false;
    for (const auto& [k, a] : lhs) {
      auto it = rhs.find(k);
      if (it == rhs.end() || std::abs(a - it->second) > eps) return false;
    }
  }
  return true;
}

}  // namespace qtmlab::bvcompat
