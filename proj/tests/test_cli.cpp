// end-to-end tests of the qtm binary; commands run through the shell with
// stdout/stderr captured in the test temp directory
#include "qtmlab/corpus.hpp"
#include "qtmlab/machine_io.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(const std::string& args, const std::string& env_prefix = "") {
    static std::atomic<int> counter{0};
    int id = ++counter;
    std::string base = ::testing::TempDir() + "qtmcli_" + std::to_string(id);
    std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + QTMLAB_CLI_PATH +
                      " " + args + " >" + base + ".out 2>" + base + ".err";
    int rc = std::system(cmd.c_str());
    CliResult res;
    res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp(base + ".out");
    res.err = slurp(base + ".err");
    return res;
}

std::string mp(const std::string& name, const std::string& ext = ".qtm") {
    return std::string(QTMLAB_MACHINE_DIR) + "/" + name + ext;
}

TEST(CliCheck, CleanMachinesPass) {
    auto r = cli("check " + mp("succ_finite"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "cond1 max_dev=0\ncond2 max_dev=0\ncond3 max_dev=0\nOK\n");

    auto c = cli("check " + mp("coin"));
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.out, "cond1 max_dev=0\ncond2 max_dev=0\ncond3 max_dev=0\nOK\n");

    auto l = cli("check " + mp("succ_limit"));
    EXPECT_EQ(l.code, 0);
    EXPECT_EQ(l.out,
              "cond1 max_dev=2.22044604925e-16\ncond2 max_dev=0\ncond3 max_dev=0\nOK\n");

    for (const auto& name : qtmlab::machine::bv_names()) {
        auto b = cli("check " + mp(name, ".bvqtm"));
        EXPECT_EQ(b.code, 0) << name;
        EXPECT_NE(b.out.find("\nOK\n"), std::string::npos) << name;
    }
}

TEST(CliCheck, BrokenMachinesFailWithWitnesses) {
    auto n = cli("check " + mp("broken_norm"));
    EXPECT_EQ(n.code, 2);
    EXPECT_EQ(n.out,
              "cond1 max_dev=0.75\ncond2 max_dev=0\ncond3 max_dev=0\n"
              "cond1 row (q0,1) squared mass 0.25\nFAIL\n");

    auto o = cli("check " + mp("broken_orth"));
    EXPECT_EQ(o.code, 2);
    EXPECT_EQ(o.out,
              "cond1 max_dev=0\ncond2 max_dev=1\ncond3 max_dev=0\n"
              "cond2 rows (q0,1) x (q0,_) overlap 1\nFAIL\n");

    auto s = cli("check " + mp("broken_sep"));
    EXPECT_EQ(s.code, 2);
    EXPECT_EQ(s.out,
              "cond1 max_dev=0\ncond2 max_dev=0\ncond3 max_dev=1\n"
              "cond3 (q0,1) writing 1 rightward x (q0,_) writing 1 leftward, overlap 1\n"
              "FAIL\n");

    auto m = cli("check " + mp("broken_missing"));
    EXPECT_EQ(m.code, 2);
    EXPECT_EQ(m.out,
              "cond1 max_dev=0\ncond2 max_dev=0\ncond3 max_dev=0\n"
              "missing row (q0,1)\nFAIL\n");
}

TEST(CliCheck, ParseErrorsExitOne) {
    std::string bad = ::testing::TempDir() + "bad_amp.qtm";
    spit(bad,
         "qtm\nalphabet: _ 1\nstates: q0 qf\nsource: q0\ntarget: qf\n"
         "initial: q0\nfinal: qf\nrule: q0 1 -> qf 1 R 1+\n");
    auto r = cli("check " + bad);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 8"), std::string::npos);
}

TEST(CliCheck, MissingFileIsAUsageError) {
    auto r = cli("check /nonexistent/machine.qtm");
    EXPECT_EQ(r.code, 1);
}

TEST(CliRun, RendersTheDistribution) {
    auto r = cli("run " + mp("succ_finite") + " --input '1|3>' --steps 5");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "4\t1\nBOTTOM\t0\n");

    auto zero = cli("run " + mp("succ_finite") + " --input '1|3>' --steps 0");
    EXPECT_EQ(zero.out, "BOTTOM\t1\n");

    auto coin = cli("run " + mp("coin") +
                    " --input '1/sqrt(2)|1> + 1/sqrt(2)|3>' --steps 12");
    EXPECT_EQ(coin.code, 0);
    EXPECT_EQ(coin.out, "2\t0.5\nBOTTOM\t0.5\n");
}

TEST(CliRun, TracePrintsEveryStep) {
    auto r = cli("run " + mp("succ_finite") + " --input '1|3>' --steps 2 --trace");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out,
              "step=0\nBOTTOM\t1\n"
              "step=1\nBOTTOM\t1\n"
              "step=2\n4\t1\nBOTTOM\t0\n");
}

TEST(CliRun, InputErrors) {
    auto semantic = cli("run " + mp("succ_finite") + " --input '1|1> + 1|2>' --steps 2");
    EXPECT_EQ(semantic.code, 2);
    EXPECT_NE(semantic.err.find("error:"), std::string::npos);

    auto syntax = cli("run " + mp("succ_finite") + " --input '1|' --steps 2");
    EXPECT_EQ(syntax.code, 1);

    auto broken = cli("run " + mp("broken_norm") + " --input '1|1>' --steps 2");
    EXPECT_EQ(broken.code, 2);  // refuses to evolve an invalid machine
}

TEST(CliLimit, ReportsTheStatus) {
    auto fin = cli("limit " + mp("succ_finite") + " --input '1|2>'");
    EXPECT_EQ(fin.code, 0);
    EXPECT_EQ(fin.out, "3\t1\nBOTTOM\t0\nFINITARY 2\n");

    auto conv = cli("limit " + mp("succ_limit") + " --input '1|1>' --max-steps 100");
    EXPECT_EQ(conv.code, 0);
    EXPECT_EQ(conv.out.rfind("2\t1\nBOTTOM\t", 0), 0u);
    EXPECT_NE(conv.out.find("\nCONVERGED "), std::string::npos);

    auto budget = cli("limit " + mp("succ_limit") + " --input '1|1>' --max-steps 1");
    EXPECT_EQ(budget.code, 0);
    EXPECT_EQ(budget.out, "2\t0.5\nBOTTOM\t0.5\nBUDGET 0.5\n");
}

TEST(CliObserve, ExactModeMatchesTheRun) {
    auto r = cli("observe " + mp("coin") +
                 " --input '1/sqrt(2)|1> + 1/sqrt(2)|3>' --schedule 0+1*i --depth 12");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "2\t0.5\nBOTTOM\t0.5\n");

    auto off = cli("observe " + mp("coin") +
                   " --input '1|1>' --schedule 2+3*i --depth 12");
    EXPECT_EQ(off.code, 2);
    EXPECT_NE(off.err.find("not an observation point"), std::string::npos);
}

TEST(CliObserve, MonteCarloIsSeedDeterministic) {
    std::string args = "observe " + mp("succ_limit") +
                       " --input '1|1>' --schedule 0+1*i --depth 9 --mode mc"
                       " --samples 2000 --seed 99";
    auto a = cli(args);
    auto b = cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);  // byte-identical
    EXPECT_EQ(a.out.rfind("samples=2000 seed=99\n", 0), 0u);
    EXPECT_NE(a.out.find("\nBOT\t"), std::string::npos);
}

TEST(CliObserve, MonteCarloTraceShowsEvents) {
    auto r = cli("observe " + mp("succ_limit") +
                 " --input '1|1>' --schedule 0+1*i --depth 5 --mode mc"
                 " --samples 2 --seed 7 --trace");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sample=0\n"), std::string::npos);
    EXPECT_NE(r.out.find("sample=1\n"), std::string::npos);
    EXPECT_NE(r.out.find("step=0 outcome="), std::string::npos);
}

TEST(CliObserve, BranchCapFromTheEnvironment) {
    auto r = cli("observe " + mp("succ_limit") +
                     " --input '1|1>' --schedule 0+1*i --depth 3",
                 "QTMLAB_BRANCH_CAP=1");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("branch cap"), std::string::npos);
}

TEST(CliConvert, EmitsTheSweepMachine) {
    std::string out = ::testing::TempDir() + "converted_succ.qtm";
    auto r = cli("convert-bv " + mp("bv_succ", ".bvqtm") + " --out " + out);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(slurp(out),
              qtmlab::machine::write_qtm(qtmlab::machine::build_machine("succ_finite")));

    auto chk = cli("check " + out);
    EXPECT_EQ(chk.code, 0);
}

TEST(CliConvert, IncompleteLoopsNeedTheFlag) {
    // bv_succ with its loop rows removed
    std::string partial = ::testing::TempDir() + "partial.bvqtm";
    spit(partial,
         "bvqtm\nalphabet: _ 1\nstates: q0 s qf\ninitial: q0\nfinal: qf\n"
         "rule: q0 1 -> s 1 L 1\nrule: q0 _ -> s _ L 1\n"
         "rule: s _ -> qf _ R 1\nrule: s 1 -> qf 1 R 1\n");
    std::string out = ::testing::TempDir() + "partial_converted.qtm";

    auto bare = cli("convert-bv " + partial + " --out " + out);
    EXPECT_EQ(bare.code, 2);
    EXPECT_NE(bare.err.find("missing row"), std::string::npos);

    auto fixed = cli("convert-bv " + partial + " --out " + out + " --complete-loops");
    EXPECT_EQ(fixed.code, 0);
    auto chk = cli("check " + out);
    EXPECT_EQ(chk.code, 0);
    EXPECT_EQ(slurp(out),
              qtmlab::machine::write_qtm(qtmlab::machine::build_machine("succ_finite")));
}

TEST(CliMisc, UsageErrors) {
    EXPECT_EQ(cli("frobnicate").code, 1);
    EXPECT_EQ(cli("--help").code, 0);
    EXPECT_EQ(cli("run " + mp("succ_finite")).code, 1);  // --input is required
}

}  // namespace
