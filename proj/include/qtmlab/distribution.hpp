#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtmlab/amplitude_expr.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/evolution.hpp"
#include "qtmlab/format.hpp"
#include "qtmlab/machine.hpp"

namespace qtmlab::distribution {

using evolution::Superposition;
using hilbert::Amplitude;

inline constexpr double kDefaultSettleEps = 1e-6;
inline constexpr std::size_t kSettleWindow = 50;

// partial probability distribution over naturals; the undefined mass is
// always derived, never stored
class PPD {
 public:
  void add(std::uint64_t n, double p) {
    if (p != 0.0) mass_[n] += p;
  }
  double prob(std::uint64_t n) const {
    auto it = mass_.find(n);
    return it == mass_.end() ? 0.0 : it->second;
  }
  double total() const {
    double s = 0.0;
    for (const auto& [n, p] : mass_) s += p;
    return s;
  }
  double bottom() const { return std::max(0.0, 1.0 - total()); }
  const std::map<std::uint64_t, double>& mass() const { return mass_; }
  bool operator==(const PPD&) const = default;

 private:
  std::map<std::uint64_t, double> mass_;
};

inline PPD ppd_of(const machine::QTMDef& m, const Superposition& phi) {
  PPD p;
  for (const auto& [c, a] : phi.entries())
    if (m.is_final(c.state)) p.add(tape::val(c), std::norm(a));
  return p;
}

// pointwise dominance within slack
inline bool leq(const PPD& p1, const PPD& p2, double slack = 1e-12) {
  for (const auto& [n, p] : p1.mass())
    if (p > p2.prob(n) + slack) return false;
  return true;
}

enum class StatusKind { FINITARY, CONVERGED_ESTIMATE, BUDGET_EXHAUSTED };

struct OutputStatus {
  StatusKind kind;
  std::size_t step = 0;  // the all-final step for FINITARY
  double residual = 0.0;
};

// evolves up to max_steps; stops early with the exact distribution when the
// whole superposition is final, otherwise classifies by how much mass still
// arrived over the trailing window
inline std::pair<PPD, OutputStatus> computed_output(
    const machine::QTMDef& m, const Superposition& phi0, std::size_t max_steps,
    double settle_eps = kDefaultSettleEps) {
  Superposition phi = phi0;
  std::vector<double> totals;
  for (std::size_t k = 0;; ++k) {
    if (evolution::is_final(m, phi)) {
      PPD p = ppd_of(m, phi);
      return {p, {StatusKind::FINITARY, k, p.bottom()}};
    }
    PPD p = ppd_of(m, phi);
    totals.push_back(p.total());
    if (k == max_steps) {
      std::size_t w = std::min(kSettleWindow, totals.size() - 1);
      OutputStatus st;
      st.step = k;
      st.residual = p.bottom();
      double gain = totals.back() - totals[totals.size() - 1 - w];
      st.kind = (w > 0 && gain < settle_eps) ? StatusKind::CONVERGED_ESTIMATE
                                             : StatusKind::BUDGET_EXHAUSTED;
      return {p, st};
    }
    phi = evolution::apply_U(m, phi);
  }
}

struct InputTerm {
  Amplitude amp;
  std::uint64_t n = 0;
};

// the natural n enters as the string of n+1 ones under the head
inline Superposition encode_input(const machine::QTMDef& m,
                                  const std::vector<InputTerm>& terms) {
  if (terms.empty()) throw semantic_error("empty input superposition");
  std::set<std::uint64_t> seen;
  double s = 0.0;
  for (const auto& t : terms) {
    if (!seen.insert(t.n).second)
      throw semantic_error("duplicate input value " + std::to_string(t.n));
    s += std::norm(t.amp);
  }
  if (std::abs(s - 1.0) > 1e-9)
    throw semantic_error("input squared norm is " + g12(s) + ", must be 1");
  Superposition phi;
  for (const auto& t : terms) {
    tape::Configuration c;
    c.state = m.initial_state;
    c.right = tape::Word(t.n + 1, tape::sym('1'));
    phi.insert_term(std::move(c), t.amp);
  }
  return phi;
}

// `amp|n>` terms joined by + or -; the amplitude reuses the rule expression
// grammar and stops at the '|'
inline std::vector<InputTerm> parse_input_terms(std::string_view text) {
  machine::AmplitudeParser ap(text);
  std::vector<InputTerm> terms;
  double sign = 1.0;
  for (;;) {
    InputTerm t;
    t.amp = sign * ap.parse_expr();
    ap.expect('|');
    t.n = ap.parse_nat();
    ap.expect('>');
    terms.push_back(t);
    if (ap.at_end()) break;
    if (ap.consume('+')) {
      sign = 1.0;
    } else if (ap.consume('-')) {
      sign = -1.0;
    } else {
      throw parse_error("expected '+' or '-' between terms", 0,
                        static_cast<int>(ap.pos()) + 1);
    }
  }
  return terms;
}

inline std::string render(const PPD& p) {
  std::string out;
  for (const auto& [n, v] : p.mass()) out += std::to_string(n) + "\t" + g12(v) + "\n";
  out += "BOTTOM\t" + g12(p.bottom()) + "\n";
  return out;
}

}  // namespace qtmlab::distribution
