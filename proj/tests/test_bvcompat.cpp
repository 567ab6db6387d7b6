#include "qtmlab/bvcompat.hpp"
#include "qtmlab/corpus.hpp"
#include "qtmlab/machine_io.hpp"

#include <gtest/gtest.h>

#include <string>

namespace {

using namespace qtmlab;
using bvcompat::BVQTM;
using bvcompat::HaltKind;
using evolution::Superposition;
using tape::Configuration;
using tape::sym;

std::string strip_loop_rules(std::string_view text, const std::string& final_name) {
    std::string out;
    std::size_t pos = 0;
    std::string prefix = "rule: " + final_name + " ";
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line(text.substr(pos, nl == std::string_view::npos
                                              ? std::string_view::npos
                                              : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.rfind(prefix, 0) == 0) continue;
        if (pos <= text.size() || !line.empty()) out += line + "\n";
    }
    return out;
}

TEST(ParseBv, ReadsTheLoopCorpus) {
    BVQTM bv = machine::build_bv("bv_succ");
    EXPECT_EQ(bv.alphabet, "_1");
    EXPECT_EQ(bv.state_names, (std::vector<std::string>{"q0", "s", "qf"}));
    EXPECT_EQ(bv.initial_state, 0);
    EXPECT_EQ(bv.final_state, 2);
    EXPECT_EQ(bv.rules.size(), 6u);  // four work rules plus two loop rows
}

TEST(ParseBv, RejectsWrongHeaders) {
    EXPECT_THROW(bvcompat::parse_bv(machine::machine_text("succ_finite")), parse_error);
    EXPECT_THROW(machine::parse_qtm(machine::machine_text("bv_succ")), parse_error);
}

TEST(ParseBv, RejectsSweepDirectives) {
    std::string text =
        "bvqtm\nalphabet: _ 1\nstates: q0 qf\nsource: q0\n"
        "initial: q0\nfinal: qf\n";
    try {
        bvcompat::parse_bv(text);
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_NE(std::string(e.what()).find("source"), std::string::npos);
    }
}

TEST(ParseBv, RequiresInitialAndFinal) {
    EXPECT_THROW(bvcompat::parse_bv("bvqtm\nalphabet: _ 1\nstates: q0 qf\nfinal: qf\n"),
                 parse_error);
    EXPECT_THROW(bvcompat::parse_bv("bvqtm\nalphabet: _ 1\nstates: q0 qf\ninitial: q0\n"),
                 parse_error);
}

TEST(ParseBv, CompleteLoopsFillsMissingFinalRows) {
    std::string text = strip_loop_rules(machine::machine_text("bv_succ"), "qf");
    BVQTM partial = bvcompat::parse_bv(text, "partial");
    EXPECT_EQ(partial.rules.size(), 4u);
    EXPECT_FALSE(bvcompat::validate_bv(partial).passed);

    BVQTM completed = bvcompat::parse_bv(text, "completed", true);
    EXPECT_EQ(completed.rules.size(), 6u);  // one loop row per alphabet symbol
    EXPECT_TRUE(bvcompat::validate_bv(completed).passed);
}

TEST(ValidateBv, CorpusPasses) {
    for (const auto& name : machine::bv_names()) {
        auto rep = bvcompat::validate_bv(machine::build_bv(name));
        EXPECT_TRUE(rep.passed) << name;
        EXPECT_TRUE(rep.violations.empty()) << name;
        EXPECT_LE(rep.unitarity.max_dev_norm, 1e-9) << name;
    }
}

TEST(ValidateBv, FlagsMissingRows) {
    std::string text = strip_loop_rules(machine::machine_text("bv_succ"), "qf");
    auto rep = bvcompat::validate_bv(bvcompat::parse_bv(text));
    bool missing = false;
    for (const auto& v : rep.violations) missing |= v == "missing row (qf,_)";
    EXPECT_TRUE(missing);
    EXPECT_FALSE(rep.passed);
}

TEST(ValidateBv, FlagsBrokenLoopRows) {
    // loop row with the wrong amplitude
    std::string text =
        "bvqtm\nalphabet: _ 1\nstates: q0 s qf\ninitial: q0\nfinal: qf\n"
        "rule: q0 1 -> s 1 L 1\nrule: q0 _ -> s _ L 1\n"
        "rule: s _ -> qf _ R 1\nrule: s 1 -> qf 1 R 1\n"
        "rule: qf _ -> q0 _ R 0.5\nrule: qf 1 -> q0 1 R 1\n";
    auto rep = bvcompat::validate_bv(bvcompat::parse_bv(text));
    bool flagged = false;
    for (const auto& v : rep.violations)
        flagged |= v == "final row (qf,_) must loop to the initial state with amplitude 1";
    EXPECT_TRUE(flagged);
    EXPECT_FALSE(rep.passed);
}

TEST(ValidateBv, FlagsForeignRulesIntoTheInitialState) {
    std::string text =
        "bvqtm\nalphabet: _ 1\nstates: q0 s qf\ninitial: q0\nfinal: qf\n"
        "rule: q0 1 -> s 1 L 1\nrule: q0 _ -> s _ L 1\n"
        "rule: s _ -> qf _ R 1\nrule: s 1 -> q0 1 R 1\n"
        "rule: qf _ -> q0 _ R 1\nrule: qf 1 -> q0 1 R 1\n";
    auto rep = bvcompat::validate_bv(bvcompat::parse_bv(text));
    bool flagged = false;
    for (const auto& v : rep.violations)
        flagged |= v == "rule into the initial state from (s,1)";
    EXPECT_TRUE(flagged);
}

TEST(Convert, LoopSuccessorBecomesTheSweepSuccessor) {
    machine::QTMDef converted = bvcompat::convert(machine::build_bv("bv_succ"));
    EXPECT_TRUE(converted.validated);
    EXPECT_EQ(machine::write_qtm(converted),
              machine::write_qtm(machine::build_machine("succ_finite")));
    for (const auto& r : converted.rules) EXPECT_NE(r.from, converted.final_state);
}

TEST(Convert, LoopCoinBecomesTheSweepCoin) {
    machine::QTMDef converted = bvcompat::convert(machine::build_bv("bv_coin"));
    EXPECT_TRUE(converted.validated);
    EXPECT_EQ(machine::write_qtm(converted),
              machine::write_qtm(machine::build_machine("coin")));
}

TEST(Convert, RefusesInvalidLoopMachines) {
    std::string text = strip_loop_rules(machine::machine_text("bv_succ"), "qf");
    BVQTM partial = bvcompat::parse_bv(text, "partial");
    EXPECT_THROW(bvcompat::convert(partial), semantic_error);
}

TEST(BvStep, TotalTableTrajectory) {
    BVQTM bv = machine::build_bv("bv_succ");
    auto traj = bvcompat::bv_evolve(bv, bvcompat::bv_encode_input(bv, {{1.0, 2}}), 4);
    int q0 = 0, s = 1, qf = 2;
    EXPECT_EQ(traj[0], Superposition::single(
                           Configuration{{}, q0, {sym('1'), sym('1'), sym('1')}}));
    EXPECT_EQ(traj[1], Superposition::single(
                           Configuration{{}, s, {sym('_'), sym('1'), sym('1'), sym('1')}}));
    EXPECT_EQ(traj[2], Superposition::single(
                           Configuration{{}, qf, {sym('1'), sym('1'), sym('1')}}));
    // the loop row sends the head right and re-enters the initial state
    EXPECT_EQ(traj[3], Superposition::single(
                           Configuration{{sym('1')}, q0, {sym('1'), sym('1')}}));
    EXPECT_EQ(traj[4], Superposition::single(
                           Configuration{{}, s, {sym('1'), sym('1'), sym('1')}}));
}

TEST(BvStep, RejectsMarkedSymbols) {
    BVQTM bv = machine::build_bv("bv_succ");
    Superposition phi = Superposition::single(Configuration{{}, 0, {sym('1', true)}});
    EXPECT_THROW(bvcompat::bv_step(bv, phi), semantic_error);
}

TEST(BvEncodeInput, ChecksTheNorm) {
    BVQTM bv = machine::build_bv("bv_succ");
    EXPECT_THROW(bvcompat::bv_encode_input(bv, {}), semantic_error);
    EXPECT_THROW(bvcompat::bv_encode_input(bv, {{0.5, 1}}), semantic_error);
}

TEST(HaltDetect, HaltsAndBudgets) {
    BVQTM bv = machine::build_bv("bv_succ");
    for (std::uint64_t n = 0; n <= 5; ++n) {
        auto hr = bvcompat::halt_detect(bv, bvcompat::bv_encode_input(bv, {{1.0, n}}), 50);
        EXPECT_EQ(hr.kind, HaltKind::HALTED);
        EXPECT_EQ(hr.step, 2u);
    }
    auto none = bvcompat::halt_detect(bv, bvcompat::bv_encode_input(bv, {{1.0, 1}}), 1);
    EXPECT_EQ(none.kind, HaltKind::NONE);
    EXPECT_EQ(none.step, 1u);
}

TEST(HaltDetect, MixedSupportIsAStationarityViolation) {
    BVQTM bv = machine::build_bv("bv_coin");
    const double r = 1.0 / std::sqrt(2.0);
    auto hr = bvcompat::halt_detect(
        bv, bvcompat::bv_encode_input(bv, {{r, 1}, {r, 3}}), 50);
    EXPECT_EQ(hr.kind, HaltKind::STATIONARITY_VIOLATION);
    EXPECT_EQ(hr.step, 3u);

    auto pure = bvcompat::halt_detect(bv, bvcompat::bv_encode_input(bv, {{1.0, 1}}), 50);
    EXPECT_EQ(pure.kind, HaltKind::HALTED);
    EXPECT_EQ(pure.step, 3u);
}

TEST(BoundedEquiv, TrajectoriesAgreeUpToTheHalt) {
    BVQTM bv = machine::build_bv("bv_succ");
    machine::QTMDef m = machine::build_machine("succ_finite");
    for (std::uint64_t n = 0; n <= 5; ++n)
        EXPECT_TRUE(bvcompat::bounded_equiv(bv, m, n, 50)) << "n=" << n;

    BVQTM bvc = machine::build_bv("bv_coin");
    machine::QTMDef mc = machine::build_machine("coin");
    EXPECT_TRUE(bvcompat::bounded_equiv(bvc, mc, 0, 50));
    EXPECT_TRUE(bvcompat::bounded_equiv(bvc, mc, 1, 50));
    EXPECT_FALSE(bvcompat::bounded_equiv(bvc, mc, 3, 30));  // never halts
}

TEST(BoundedEquiv, DetectsAnAmplitudeMutation) {
    BVQTM bv = machine::build_bv("bv_succ");
    machine::QTMDef m = machine::build_machine("succ_finite");
    bool mutated = false;
    for (auto& r : m.rules)
        if (m.state_name(r.from) == "s" && r.read == '_') {
            r.amp = -1.0;  // still unitary, but a different machine
            mutated = true;
        }
    ASSERT_TRUE(mutated);
    EXPECT_FALSE(bvcompat::bounded_equiv(bv, m, 1, 50));
}

TEST(Convert, OutputDistributionMatchesTheLoopHalt) {
    BVQTM bv = machine::build_bv("bv_succ");
    machine::QTMDef m = bvcompat::convert(bv);
    for (std::uint64_t n = 0; n <= 3; ++n) {
        auto phi_bv = bvcompat::bv_encode_input(bv, {{1.0, n}});
        auto hr = bvcompat::halt_detect(bv, phi_bv, 50);
        ASSERT_EQ(hr.kind, HaltKind::HALTED);
        auto traj = bvcompat::bv_evolve(bv, phi_bv, hr.step);

        auto [ppd, st] = distribution::computed_output(
            m, distribution::encode_input(m, {{1.0, n}}), 50);
        EXPECT_EQ(st.kind, distribution::StatusKind::FINITARY);
        EXPECT_EQ(st.step, hr.step);
        for (const auto& [c, a] : traj.back().entries())
            EXPECT_NEAR(ppd.prob(tape::val(c)), std::norm(a), 1e-12);
    }
}

}  // namespace
