#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qtmlab/bvcompat.hpp"
#include "qtmlab/distribution.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/machine.hpp"
#include "qtmlab/machine_io.hpp"

namespace qtmlab::machine {

// built-in machine tables; the files under machines/ carry the same bytes
namespace corpus_text {

inline constexpr std::string_view succ_finite = R"(# successor machine: halts after two steps with n+1 ones on the tape
qtm
alphabet: _ 1
states: q0 s qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> s 1 L 1
rule: q0 _ -> s _ L 1
rule: s _ -> qf _ R 1
rule: s 1 -> qf 1 R 1
)";

inline constexpr std::string_view coin = R"(# fair-coin behaviour through input branching: value 1 halts with output 2,
# value 3 walks forever through the rewrite loop
qtm
alphabet: _ 1 $
states: q0 a b r qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> a 1 R 1
rule: q0 _ -> a _ R 1
rule: q0 $ -> a $ R 1
rule: a 1 -> b 1 R 1
rule: a _ -> b _ R 1
rule: a $ -> b $ R 1
rule: b _ -> qf _ R 1
rule: b 1 -> r 1 R 1
rule: b $ -> qf $ R 1
rule: r 1 -> r $ R 1
rule: r _ -> r _ R 1
rule: r $ -> qf 1 R 1
)";

inline constexpr std::string_view succ_limit = R"(# successor in the limit: each round sends amplitude 1/sqrt(2) to the final
# state and bounces the rest back through b and h; the h row flips the sign
# to keep the rows orthogonal
qtm
alphabet: _ 1
states: q0 b h qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> qf 1 R 1/sqrt(2)
rule: q0 1 -> b 1 L 1/sqrt(2)
rule: q0 _ -> qf _ R 1
rule: h 1 -> qf 1 R 1/sqrt(2)
rule: h 1 -> b 1 L -1/sqrt(2)
rule: h _ -> h 1 R 1
rule: b _ -> h _ R 1
rule: b 1 -> b _ L 1
)";

inline constexpr std::string_view broken_norm = R"(# deliberately broken: the (q0,1) row has squared mass 0.25
qtm
alphabet: _ 1
states: q0 qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> qf 1 R 0.5
rule: q0 _ -> qf _ R 1
)";

inline constexpr std::string_view broken_orth = R"(# deliberately broken: two distinct rows collide on the same target
qtm
alphabet: _ 1
states: q0 qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> qf 1 R 1
rule: q0 _ -> qf 1 R 1
)";

inline constexpr std::string_view broken_sep = R"(# deliberately broken: a right mover and a left mover meet in state p
qtm
alphabet: _ 1
states: q0 p qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 1 -> p 1 R 1
rule: q0 _ -> p 1 L 1
rule: p 1 -> qf 1 R 1
rule: p _ -> qf _ R 1
)";

inline constexpr std::string_view broken_missing = R"(# deliberately broken: the (q0,1) row is absent entirely
qtm
alphabet: _ 1
states: q0 qf
source: q0
target: qf
initial: q0
final: qf
rule: q0 _ -> qf _ R 1
)";

inline constexpr std::string_view bv_succ = R"(# successor as a loop machine: the final state loops every symbol back to q0
bvqtm
alphabet: _ 1
states: q0 s qf
initial: q0
final: qf
rule: q0 1 -> s 1 L 1
rule: q0 _ -> s _ L 1
rule: s _ -> qf _ R 1
rule: s 1 -> qf 1 R 1
rule: qf _ -> q0 _ R 1
rule: qf 1 -> q0 1 R 1
)";

inline constexpr std::string_view bv_coin = R"(# coin machine in loop form; on the two-value input one branch halts while
# the other keeps walking, so the halt test sees a mixed step
bvqtm
alphabet: _ 1 $
states: q0 a b r qf
initial: q0
final: qf
rule: q0 1 -> a 1 R 1
rule: q0 _ -> a _ R 1
rule: q0 $ -> a $ R 1
rule: a 1 -> b 1 R 1
rule: a _ -> b _ R 1
rule: a $ -> b $ R 1
rule: b _ -> qf _ R 1
rule: b 1 -> r 1 R 1
rule: b $ -> qf $ R 1
rule: r 1 -> r $ R 1
rule: r _ -> r _ R 1
rule: r $ -> qf 1 R 1
rule: qf _ -> q0 _ R 1
rule: qf 1 -> q0 1 R 1
rule: qf $ -> q0 $ R 1
)";

}  // namespace corpus_text

inline std::vector<std::string> corpus_names() {
  return {"succ_finite", "coin", "succ_limit"};
}
inline std::vector<std::string> broken_names() {
  return {"broken_norm", "broken_orth", "broken_sep", "broken_missing"};
}
inline std::vector<std::string> bv_names() { return {"bv_succ", "bv_coin"}; }

inline std::string_view machine_text(std::string_view name) {
  namespace ct = corpus_text;
  if (name == "succ_finite") return ct::succ_finite;
  if (name == "coin") return ct::coin;
  if (name == "succ_limit") return ct::succ_limit;
  if (name == "broken_norm") return ct::broken_norm;
  if (name == "broken_orth") return ct::broken_orth;
  if (name == "broken_sep") return ct::broken_sep;
  if (name == "broken_missing") return ct::broken_missing;
  if (name == "bv_succ") return ct::bv_succ;
  if (name == "bv_coin") return ct::bv_coin;
  throw semantic_error("unknown corpus machine '" + std::string(name) + "'");
}

inline QTMDef build_machine(std::string_view name, double eps = kDefaultEps) {
  return validate(parse_qtm(machine_text(name), std::string(name)), eps);
}

inline std::vector<QTMDef> build_corpus(double eps = kDefaultEps) {
  std::vector<QTMDef> out;
  for (const auto& n : corpus_names()) out.push_back(build_machine(n, eps));
  return out;
}

// parsed and structurally finalized but never validated; each one fails
// validation for its own reason
inline std::vector<QTMDef> build_broken() {
  std::vector<QTMDef> out;
  for (const auto& n : broken_names())
    out.push_back(parse_qtm(machine_text(n), n));
  return out;
}

inline bvcompat::BVQTM build_bv(std::string_view name) {
  return bvcompat::parse_bv(machine_text(name), std::string(name));
}

struct CorpusInput {
  std::string label;
  std::vector<distribution::InputTerm> terms;
};

// standard inputs exercised by the tests; the superposition entries use the
// balanced two-value input when the machine behaviour differs per value
inline std::vector<CorpusInput> corpus_inputs(std::string_view machine_name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (machine_name == "succ_finite")
    return {{"1|2>", {{1.0, 2}}}, {"1|0>", {{1.0, 0}}}};
  if (machine_name == "coin")
    return {{"1/sqrt(2)|1> + 1/sqrt(2)|3>", {{r, 1}, {r, 3}}}, {"1|1>", {{1.0, 1}}}};
  if (machine_name == "succ_limit")
    return {{"1|1>", {{1.0, 1}}}, {"1|0>", {{1.0, 0}}}};
  throw semantic_error("no inputs for machine '" + std::string(machine_name) + "'");
}

}  // namespace qtmlab::machine
