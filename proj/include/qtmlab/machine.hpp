#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qtmlab/errors.hpp"
#include "qtmlab/format.hpp"
#include "qtmlab/hilbert.hpp"
#include "qtmlab/tape.hpp"

namespace qtmlab::machine {

using hilbert::Amplitude;
using tape::Configuration;
using tape::Direction;
using tape::Symbol;

inline constexpr double kDefaultEps = 1e-9;

struct StateInfo {
  std::string name;
  bool is_source = false;
  bool is_target = false;
  bool is_initial = false;
  bool is_final = false;
};

// one weighted transition of the explicit table; read/write are unmarked base
// glyphs (the marked sweeps are implicit)
struct Rule {
  int from = -1;
  char read = tape::kBlank;
  int to = -1;
  char write = tape::kBlank;
  Direction dir = Direction::R;
  Amplitude amp{1.0};
};

struct UnitarityReport {
  double max_dev_norm = 0.0;  // row squared-mass away from 1
  double max_dev_orth = 0.0;  // inner product of distinct rows
  double max_dev_sep = 0.0;   // L/R overlap entering a common state
  std::string witness_norm, witness_orth, witness_sep;  // worst case per condition
  bool passes(double eps) const {
    return max_dev_norm <= eps && max_dev_orth <= eps && max_dev_sep <= eps;
  }
  // witnesses of the conditions that actually fail at eps
  std::vector<std::string> offending(double eps = 1e-9) const {
    std::vector<std::string> v;
    if (max_dev_norm > eps && !witness_norm.empty()) v.push_back(witness_norm);
    if (max_dev_orth > eps && !witness_orth.empty()) v.push_back(witness_orth);
    if (max_dev_sep > eps && !witness_sep.empty()) v.push_back(witness_sep);
    return v;
  }
};

class validation_error : public semantic_error {
 public:
  validation_error(const std::string& msg, UnitarityReport rep)
      : semantic_error(msg), report(std::move(rep)) {}
  UnitarityReport report;
};

class completeness_error : public semantic_error {
 public:
  completeness_error(const std::string& msg, std::vector<std::string> rows)
      : semantic_error(msg), missing(std::move(rows)) {}
  std::vector<std::string> missing;
};

class QTMDef {
 public:
  std::string name;
  std::string alphabet;  // base glyphs; contains '_' and '1'
  std::vector<StateInfo> states;
  std::vector<Rule> rules;
  int initial_state = -1;
  int final_state = -1;
  bool validated = false;

  int state_index(std::string_view n) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].name == n) return static_cast<int>(i);
    return -1;
  }
  const std::string& state_name(int q) const { return states.at(q).name; }
  bool valid_state(int q) const {
    return q >= 0 && q < static_cast<int>(states.size());
  }
  bool is_source(int q) const { return states.at(q).is_source; }
  bool is_target(int q) const { return states.at(q).is_target; }
  bool is_neutral(int q) const {
    return !states.at(q).is_source && !states.at(q).is_target;
  }
  bool is_final(int q) const { return states.at(q).is_final; }
  bool has_symbol(char c) const { return alphabet.find(c) != std::string::npos; }

  // structural checks plus index build; call before any evolution
  void finalize_structure() {
    if (alphabet.empty() || !has_symbol(tape::kBlank) || !has_symbol('1'))
      throw semantic_error("alphabet must contain '_' and '1'");
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet.find(alphabet[i], i + 1) != std::string::npos)
        throw semantic_error(std::string("duplicate alphabet symbol '") + alphabet[i] + "'");
    if (states.empty()) throw semantic_error("no states declared");
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].name.empty()) throw semantic_error("empty state name");
      for (std::size_t j = i + 1; j < states.size(); ++j)
        if (states[i].name == states[j].name)
          throw semantic_error("duplicate state name '" + states[i].name + "'");
      if (states[i].is_source && states[i].is_target)
        throw semantic_error("state '" + states[i].name + "' cannot be both source and target");
    }
    int ninit = 0, nfin = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].is_initial) {
        ++ninit;
        initial_state = static_cast<int>(i);
        if (!states[i].is_source)
          throw semantic_error("initial state must be a source state");
      }
      if (states[i].is_final) {
        ++nfin;
        final_state = static_cast<int>(i);
        if (!states[i].is_target)
          throw semantic_error("final state must be a target state");
      }
    }
    if (ninit != 1) throw semantic_error("exactly one initial state required");
    if (nfin != 1) throw semantic_error("exactly one final state required");

    std::vector<Rule> kept;
    for (const Rule& r : rules) {
      if (!valid_state(r.from) || !valid_state(r.to))
        throw semantic_error("rule references an unknown state");
      if (is_target(r.from))
        throw semantic_error("rule leaves target state '" + state_name(r.from) + "'");
      if (is_source(r.to))
        throw semantic_error("rule enters source state '" + state_name(r.to) + "'");
      if (!has_symbol(r.read) || !has_symbol(r.write))
        throw semantic_error("rule uses a symbol outside the alphabet");
      if (!hilbert::is_finite(r.amp)) throw semantic_error("non-finite rule amplitude");
      if (r.amp == Amplitude{0.0}) continue;  // zero rules are omitted
      kept.push_back(r);
    }
    rules = std::move(kept);
    for (std::size_t i = 0; i < rules.size(); ++i)
      for (std::size_t j = i + 1; j < rules.size(); ++j) {
        const Rule &a = rules[i], &b = rules[j];
        if (a.from == b.from && a.read == b.read && a.to == b.to &&
            a.write == b.write && a.dir == b.dir)
          throw semantic_error("duplicate rule for (" + state_name(a.from) + "," + a.read + ")");
      }

    rows_.clear();
    tgt_.clear();
    tgt_dir_.clear();
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Rule& r = rules[i];
      rows_[{r.from, r.read}].push_back(static_cast<int>(i));
      tgt_[{r.to, r.write, static_cast<int>(r.dir)}].push_back(static_cast<int>(i));
      tgt_dir_[{r.to, static_cast<int>(r.dir)}].push_back(static_cast<int>(i));
    }
  }

  const std::vector<int>* row(int q, char a) const {
    auto it = rows_.find({q, a});
    return it == rows_.end() ? nullptr : &it->second;
  }
  const std::vector<int>* rules_into(int p, char b, Direction d) const {
    auto it = tgt_.find({p, b, static_cast<int>(d)});
    return it == tgt_.end() ? nullptr : &it->second;
  }
  const std::vector<int>* rules_into_dir(int p, Direction d) const {
    auto it = tgt_dir_.find({p, static_cast<int>(d)});
    return it == tgt_dir_.end() ? nullptr : &it->second;
  }

  // the explicit-table domain: every non-target state crossed with the alphabet
  std::vector<std::pair<int, char>> table_domain() const {
    std::vector<std::pair<int, char>> dom;
    for (std::size_t q = 0; q < states.size(); ++q)
      if (!states[q].is_target)
        for (char a : alphabet) dom.push_back({static_cast<int>(q), a});
    return dom;
  }

 private:
  std::map<std::pair<int, char>, std::vector<int>> rows_;
  std::map<std::tuple<int, char, int>, std::vector<int>> tgt_;
  std::map<std::pair<int, int>, std::vector<int>> tgt_dir_;
};

struct DeltaEntry {
  int to;
  Symbol write;
  Direction dir;
  Amplitude amp;
};

// full transition row for (q, u), covering the implicit sweeps: a source state
// reading a marked symbol unmarks it and moves right; a target state reading
// an unmarked symbol marks it and moves right
inline std::vector<DeltaEntry> delta(const QTMDef& m, int q, Symbol u) {
  if (!m.valid_state(q)) throw semantic_error("delta: unknown state");
  if (u.marked) {
    if (m.is_source(q)) return {{q, tape::unmark(u), Direction::R, 1.0}};
    throw protocol_violation("no transition: state '" + m.state_name(q) +
                             "' reading a marked symbol");
  }
  if (m.is_target(q)) return {{q, tape::mark(u), Direction::R, 1.0}};
  std::vector<DeltaEntry> out;
  if (const auto* idxs = m.row(q, u.base))
    for (int i : *idxs) {
      const Rule& r = m.rules[i];
      out.push_back({r.to, tape::sym(r.write), r.dir, r.amp});
    }
  return out;
}

enum class ConfigClass { Plain, SourceSweep, TargetSweep };
enum class TargetClass { Plain, SourceSweep, TargetSweep };

// partition by (state, current symbol): explicit-table configurations, the
// source unmarking sweep, and the target marking sweep
inline ConfigClass classify(const QTMDef& m, const Configuration& c) {
  if (!m.valid_state(c.state)) throw semantic_error("classify: unknown state");
  Symbol u = tape::current_symbol(c);
  if (u.marked) {
    if (m.is_source(c.state)) return ConfigClass::SourceSweep;
    throw protocol_violation("state '" + m.state_name(c.state) +
                             "' reading a marked symbol has no class");
  }
  if (m.is_target(c.state)) return ConfigClass::TargetSweep;
  return ConfigClass::Plain;
}

// partition of possible step images by (state, symbol left of the head)
inline TargetClass classify_target(const QTMDef& m, const Configuration& c) {
  if (!m.valid_state(c.state)) throw semantic_error("classify_target: unknown state");
  Symbol v = tape::left_symbol(c);
  if (m.is_source(c.state)) {
    if (v.marked)
      throw protocol_violation("source state '" + m.state_name(c.state) +
                               "' behind a marked symbol has no image class");
    return TargetClass::SourceSweep;
  }
  if (v.marked) {
    if (m.is_target(c.state)) return TargetClass::TargetSweep;
    throw protocol_violation("state '" + m.state_name(c.state) +
                             "' behind a marked symbol has no image class");
  }
  return TargetClass::Plain;
}

// neutral states admit no marks; source states allow a marked prefix of the
// right content; target states allow a marked suffix of the left content
inline bool well_formed(const QTMDef& m, const Configuration& c) {
  if (!m.valid_state(c.state)) throw semantic_error("well_formed: unknown state");
  for (const auto& s : c.left)
    if (!m.has_symbol(s.base)) return false;
  for (const auto& s : c.right)
    if (!m.has_symbol(s.base)) return false;
  auto all_unmarked = [](const tape::Word& w) {
    for (const auto& s : w)
      if (s.marked) return false;
    return true;
  };
  if (m.is_source(c.state)) {
    if (!all_unmarked(c.left)) return false;
    bool plain_seen = false;
    for (const auto& s : c.right) {
      if (!s.marked) plain_seen = true;
      else if (plain_seen) return false;
    }
    return true;
  }
  if (m.is_target(c.state)) {
    if (!all_unmarked(c.right)) return false;
    bool marked_seen = false;
    for (const auto& s : c.left) {
      if (s.marked) marked_seen = true;
      else if (marked_seen) return false;
    }
    return true;
  }
  return all_unmarked(c.left) && all_unmarked(c.right);
}

// mark_k guarded by finality of the state
inline Configuration mark_final(const QTMDef& m, const Configuration& c, std::uint64_t k) {
  if (!m.valid_state(c.state) || !m.is_final(c.state))
    throw semantic_error("mark_final: configuration is not final");
  return tape::mark_k(c, k);
}

inline std::string config_text(const QTMDef& m, const Configuration& c) {
  return tape::to_text(c, m.state_name(c.state));
}

namespace detail {

// the three numeric conditions on an explicit rule table, shared between the
// marked-sweep machines (table = the explicit rows) and loop machines (table
// = the total transition function)
inline UnitarityReport condition_deviations(
    const std::vector<Rule>& rules,
    const std::function<std::string(int)>& name_of) {
  UnitarityReport rep;
  using RowKey = std::pair<int, char>;
  auto row_text = [&](const RowKey& k) {
    return "(" + name_of(k.first) + "," + std::string(1, k.second) + ")";
  };

  std::map<RowKey, std::vector<int>> rows;
  for (std::size_t i = 0; i < rules.size(); ++i)
    rows[{rules[i].from, rules[i].read}].push_back(static_cast<int>(i));

  for (const auto& [key, idxs] : rows) {
    double s = 0.0;
    for (int i : idxs) s += std::norm(rules[i].amp);
    double dev = std::abs(s - 1.0);
    if (dev > rep.max_dev_norm) {
      rep.max_dev_norm = dev;
      rep.witness_norm = "cond1 row " + row_text(key) + " squared mass " + g12(s);
    }
  }

  std::map<std::tuple<int, char, int>, std::vector<int>> tgt;
  for (std::size_t i = 0; i < rules.size(); ++i)
    tgt[{rules[i].to, rules[i].write, static_cast<int>(rules[i].dir)}].push_back(
        static_cast<int>(i));

  std::map<std::pair<RowKey, RowKey>, Amplitude> pair_ip;
  for (const auto& [key, idxs] : tgt)
    for (int a : idxs)
      for (int b : idxs) {
        RowKey ra{rules[a].from, rules[a].read}, rb{rules[b].from, rules[b].read};
        if (ra < rb) pair_ip[{ra, rb}] += std::conj(rules[a].amp) * rules[b].amp;
      }
  for (const auto& [key, v] : pair_ip) {
    double dev = std::abs(v);
    if (dev > rep.max_dev_orth) {
      rep.max_dev_orth = dev;
      rep.witness_orth = "cond2 rows " + row_text(key.first) + " x " +
                         row_text(key.second) + " overlap " + g12(dev);
    }
  }

  std::map<std::pair<int, int>, std::vector<int>> bydir;
  for (std::size_t i = 0; i < rules.size(); ++i)
    bydir[{rules[i].to, static_cast<int>(rules[i].dir)}].push_back(static_cast<int>(i));

  std::map<std::tuple<RowKey, char, RowKey, char>, Amplitude> sep;
  for (const auto& [key, ridxs] : bydir) {
    if (static_cast<Direction>(key.second) != Direction::R) continue;
    auto it = bydir.find({key.first, static_cast<int>(Direction::L)});
    if (it == bydir.end()) continue;
    for (int iR : ridxs)
      for (int iL : it->second) {
        RowKey rr{rules[iR].from, rules[iR].read}, rl{rules[iL].from, rules[iL].read};
        sep[{rr, rules[iR].write, rl, rules[iL].write}] +=
            std::conj(rules[iL].amp) * rules[iR].amp;
      }
  }
  for (const auto& [key, v] : sep) {
    double dev = std::abs(v);
    if (dev > rep.max_dev_sep) {
      rep.max_dev_sep = dev;
      rep.witness_sep = "cond3 " + row_text(std::get<0>(key)) + " writing " +
                        std::string(1, std::get<1>(key)) + " rightward x " +
                        row_text(std::get<2>(key)) + " writing " +
                        std::string(1, std::get<3>(key)) + " leftward, overlap " + g12(dev);
    }
  }
  return rep;
}

}  // namespace detail

inline std::vector<std::string> missing_rows(const QTMDef& m) {
  std::vector<std::string> missing;
  for (const auto& [q, a] : m.table_domain()) {
    const auto* idxs = m.row(q, a);
    if (!idxs || idxs->empty())
      missing.push_back("(" + m.state_name(q) + "," + std::string(1, a) + ")");
  }
  return missing;
}

inline UnitarityReport check_local_unitarity(const QTMDef& m) {
  return detail::condition_deviations(m.rules,
                                      [&](int q) { return m.state_name(q); });
}

// completeness plus the three conditions at tolerance eps; the returned copy
// carries validated = true
inline QTMDef validate(QTMDef m, double eps = kDefaultEps) {
  m.finalize_structure();
  auto missing = missing_rows(m);
  if (!missing.empty())
    throw completeness_error("machine '" + m.name + "' is missing transition rows",
                             std::move(missing));
  UnitarityReport rep = check_local_unitarity(m);
  if (!rep.passes(eps))
    throw validation_error("machine '" + m.name + "' violates the local unitary conditions",
                           std::move(rep));
  m.validated = true;
  return m;
}

}  // namespace qtmlab::machine
