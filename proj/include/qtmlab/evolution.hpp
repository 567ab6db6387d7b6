#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtmlab/hilbert.hpp"
#include "qtmlab/machine.hpp"
#include "qtmlab/tape.hpp"

namespace qtmlab::evolution {

using hilbert::Amplitude;
using tape::Configuration;
using tape::Direction;

using Superposition = hilbert::SparseVector<Configuration>;

// one application of the time evolution operator; exact linear image, no
// normalisation or pruning beyond cancellation cleanup
inline Superposition apply_U(const machine::QTMDef& m, const Superposition& phi) {
  Superposition out;
  for (const auto& [c, a] : phi.entries())
    for (const auto& e : machine::delta(m, c.state, tape::current_symbol(c)))
      out.accumulate(tape::step(c, e.to, e.write, e.dir), a * e.amp);
  out.finish();
  return out;
}

// the adjoint: each configuration pulls in its candidate predecessors.  A
// right move leaves the written symbol at the end of the left content, a left
// move leaves it one cell right of the head; sweep images have exactly one
// preimage each.
inline Superposition apply_U_adjoint(const machine::QTMDef& m, const Superposition& phi) {
  Superposition out;
  for (const auto& [d, a] : phi.entries()) {
    switch (machine::classify_target(m, d)) {
      case machine::TargetClass::SourceSweep: {
        tape::Symbol v = tape::left_symbol(d);
        out.accumulate(tape::reverse_step(d, d.state, tape::mark(v), Direction::R), a);
        break;
      }
      case machine::TargetClass::TargetSweep: {
        tape::Symbol v = tape::left_symbol(d);
        out.accumulate(tape::reverse_step(d, d.state, tape::unmark(v), Direction::R), a);
        break;
      }
      case machine::TargetClass::Plain: {
        tape::Symbol vr = tape::left_symbol(d);
        if (const auto* idxs = m.rules_into(d.state, vr.base, Direction::R))
          for (int i : *idxs) {
            const machine::Rule& r = m.rules[i];
            out.accumulate(tape::reverse_step(d, r.from, tape::sym(r.read), Direction::R),
                           a * std::conj(r.amp));
          }
        tape::Symbol vl = d.right.size() >= 2 ? d.right[1] : tape::blank();
        if (!vl.marked)
          if (const auto* idxs = m.rules_into(d.state, vl.base, Direction::L))
            for (int i : *idxs) {
              const machine::Rule& r = m.rules[i];
              out.accumulate(tape::reverse_step(d, r.from, tape::sym(r.read), Direction::L),
                             a * std::conj(r.amp));
            }
        break;
      }
    }
  }
  out.finish();
  return out;
}

// the trajectory phi_0 .. phi_k
inline std::vector<Superposition> evolve(const machine::QTMDef& m,
                                         const Superposition& phi0, std::size_t k) {
  std::vector<Superposition> seq;
  seq.reserve(k + 1);
  seq.push_back(phi0);
  for (std::size_t i = 0; i < k; ++i) seq.push_back(apply_U(m, seq.back()));
  return seq;
}

inline bool is_final(const machine::QTMDef& m, const Superposition& phi) {
  if (phi.empty()) return false;
  for (const auto& [c, a] : phi.entries())
    if (!m.is_final(c.state)) return false;
  return true;
}

inline Superposition final_part(const machine::QTMDef& m, const Superposition& phi) {
  Superposition out;
  for (const auto& [c, a] : phi.entries())
    if (m.is_final(c.state)) out.insert_term(c, a);
  return out;
}

inline Superposition nonfinal_part(const machine::QTMDef& m, const Superposition& phi) {
  Superposition out;
  for (const auto& [c, a] : phi.entries())
    if (!m.is_final(c.state)) out.insert_term(c, a);
  return out;
}

}  // namespace qtmlab::evolution
