// shared helpers for the test suites: seeded random configurations,
// random superpositions, and small assertion utilities.
#pragma once

#include "qtmlab/qtmlab.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace qtmtest {

using qtmlab::hilbert::Amplitude;
using qtmlab::tape::Configuration;
using qtmlab::tape::Symbol;
using qtmlab::tape::Word;

inline bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }
inline bool near(Amplitude a, Amplitude b, double eps) { return std::abs(a - b) <= eps; }

// uniform pick from [0, n)
inline std::uint64_t pick(qtmlab::rng::SplitMix64& g, std::uint64_t n) {
    return g.next() % n;
}

inline char random_glyph(qtmlab::rng::SplitMix64& g, const qtmlab::machine::QTMDef& m) {
    return m.alphabet[pick(g, m.alphabet.size())];
}

// unmarked word over the machine alphabet
inline Word random_plain_word(qtmlab::rng::SplitMix64& g, const qtmlab::machine::QTMDef& m,
                              std::size_t max_len) {
    Word w;
    std::size_t len = pick(g, max_len + 1);
    for (std::size_t i = 0; i < len; ++i) w.push_back(qtmlab::tape::sym(random_glyph(g, m)));
    return w;
}

// well-formed configuration for a uniformly chosen state: neutral states get an
// unmarked tape, source states may carry a marked prefix on the right word,
// target states a marked suffix on the left word.
inline Configuration random_config(qtmlab::rng::SplitMix64& g, const qtmlab::machine::QTMDef& m,
                                   std::size_t max_len = 4) {
    Configuration c;
    c.state = static_cast<int>(pick(g, m.states.size()));
    c.left = random_plain_word(g, m, max_len);
    c.right = random_plain_word(g, m, max_len);
    if (m.is_source(c.state)) {
        std::size_t marked = pick(g, c.right.size() + 1);
        for (std::size_t i = 0; i < marked; ++i) c.right[i].marked = true;
    } else if (m.is_target(c.state)) {
        std::size_t marked = pick(g, c.left.size() + 1);
        for (std::size_t i = 0; i < marked; ++i) c.left[c.left.size() - 1 - i].marked = true;
    }
    return qtmlab::tape::canonicalize(std::move(c.left), c.state, std::move(c.right));
}

// unmarked configuration in the machine's final state
inline Configuration random_final_config(qtmlab::rng::SplitMix64& g,
                                         const qtmlab::machine::QTMDef& m,
                                         std::size_t max_len = 4) {
    Configuration c;
    c.state = m.final_state;
    c.left = random_plain_word(g, m, max_len);
    c.right = random_plain_word(g, m, max_len);
    return qtmlab::tape::canonicalize(std::move(c.left), c.state, std::move(c.right));
}

inline Amplitude random_amplitude(qtmlab::rng::SplitMix64& g) {
    return {2.0 * g.uniform01() - 1.0, 2.0 * g.uniform01() - 1.0};
}

// normalized superposition of at most `support` well-formed configurations
inline qtmlab::evolution::Superposition random_superposition(qtmlab::rng::SplitMix64& g,
                                                             const qtmlab::machine::QTMDef& m,
                                                             std::size_t support,
                                                             std::size_t max_len = 4) {
    qtmlab::evolution::Superposition phi;
    for (std::size_t i = 0; i < support; ++i)
        phi.insert_term(random_config(g, m, max_len), random_amplitude(g));
    if (phi.empty()) phi.insert_term(random_config(g, m, max_len), 1.0);
    return qtmlab::hilbert::normalize(phi);
}

inline std::string superposition_text(const qtmlab::machine::QTMDef& m,
                                      const qtmlab::evolution::Superposition& phi) {
    std::string out;
    for (const auto& [c, a] : phi.entries()) {
        out += "(" + qtmlab::machine::format_amplitude(a) + ") ";
        out += qtmlab::machine::config_text(m, c);
        out += "\n";
    }
    return out;
}

}  // namespace qtmtest
