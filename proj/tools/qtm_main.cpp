#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtmlab/qtmlab.hpp"

namespace {

using namespace qtmlab;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw resource_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void print_conditions(const machine::UnitarityReport& rep, double eps) {
  std::cout << "cond1 max_dev=" << g12(rep.max_dev_norm) << "\n";
  std::cout << "cond2 max_dev=" << g12(rep.max_dev_orth) << "\n";
  std::cout << "cond3 max_dev=" << g12(rep.max_dev_sep) << "\n";
  for (const auto& w : rep.offending(eps)) std::cout << w << "\n";
}

int do_check(const std::string& path, double eps) {
  std::string text = read_file(path);
  std::string header = machine::sniff_header(text);
  if (header == "bvqtm") {
    bvcompat::BVQTM bv = bvcompat::parse_bv(text, stem_of(path));
    bvcompat::BVReport rep = bvcompat::validate_bv(bv, eps);
    for (const auto& v : rep.violations) std::cout << v << "\n";
    print_conditions(rep.unitarity, eps);
    std::cout << (rep.passed ? "OK" : "FAIL") << "\n";
    return rep.passed ? 0 : 2;
  }
  machine::QTMDef m = machine::parse_qtm(text, stem_of(path));
  auto missing = machine::missing_rows(m);
  machine::UnitarityReport rep = machine::check_local_unitarity(m);
  print_conditions(rep, eps);
  for (const auto& s : missing) std::cout << "missing row " << s << "\n";
  bool ok = missing.empty() && rep.passes(eps);
  std::cout << (ok ? "OK" : "FAIL") << "\n";
  return ok ? 0 : 2;
}

machine::QTMDef load_validated(const std::string& path) {
  std::string text = read_file(path);
  return machine::validate(machine::parse_qtm(text, stem_of(path)));
}

int do_run(const std::string& path, const std::string& input, std::uint64_t steps,
           bool trace) {
  machine::QTMDef m = load_validated(path);
  auto phi0 = distribution::encode_input(m, distribution::parse_input_terms(input));
  auto traj = evolution::evolve(m, phi0, steps);
  if (trace) {
    for (std::size_t k = 0; k < traj.size(); ++k)
      std::cout << "step=" << k << "\n"
                << distribution::render(distribution::ppd_of(m, traj[k]));
  } else {
    std::cout << distribution::render(distribution::ppd_of(m, traj.back()));
  }
  return 0;
}

int do_limit(const std::string& path, const std::string& input, std::uint64_t max_steps,
             double settle_eps) {
  machine::QTMDef m = load_validated(path);
  auto phi0 = distribution::encode_input(m, distribution::parse_input_terms(input));
  auto [ppd, st] = distribution::computed_output(m, phi0, max_steps, settle_eps);
  std::cout << distribution::render(ppd);
  switch (st.kind) {
    case distribution::StatusKind::FINITARY:
      std::cout << "FINITARY " << st.step << "\n";
      break;
    case distribution::StatusKind::CONVERGED_ESTIMATE:
      std::cout << "CONVERGED " << g12(st.residual) << "\n";
      break;
    case distribution::StatusKind::BUDGET_EXHAUSTED:
      std::cout << "BUDGET " << g12(st.residual) << "\n";
      break;
  }
  return 0;
}

int do_observe(const std::string& path, const std::string& input,
               const std::string& schedule, std::uint64_t depth, const std::string& mode,
               std::uint64_t samples, std::uint64_t seed, bool trace) {
  machine::QTMDef m = load_validated(path);
  auto phi0 = distribution::encode_input(m, distribution::parse_input_terms(input));
  observation::Schedule tau = observation::parse_schedule(schedule);
  if (mode == "exact") {
    std::cout << distribution::render(
        observation::observed_distribution_exact(m, phi0, tau, depth));
    return 0;
  }
  std::cout << "samples=" << samples << " seed=" << seed << "\n";
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t bottom = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto sr = observation::sample_run(m, phi0, tau, depth, rng::derive_seed(seed, i));
    if (trace) {
      std::cout << "sample=" << i << "\n";
      for (const auto& ev : sr.trace) {
        std::cout << "step=" << ev.step << " outcome=";
        if (ev.outcome)
          std::cout << *ev.outcome;
        else
          std::cout << "BOT";
        std::cout << " p=" << g12(ev.probability) << "\n";
      }
    }
    if (sr.outcome)
      ++counts[*sr.outcome];
    else
      ++bottom;
  }
  for (const auto& [n, c] : counts)
    std::cout << n << "\t" << c << "\t"
              << g12(static_cast<double>(c) / static_cast<double>(samples)) << "\n";
  std::cout << "BOT\t" << bottom << "\t"
            << g12(static_cast<double>(bottom) / static_cast<double>(samples)) << "\n";
  return 0;
}

int do_convert_bv(const std::string& path, const std::string& out, bool complete_loops) {
  std::string text = read_file(path);
  bvcompat::BVQTM bv = bvcompat::parse_bv(text, stem_of(path), complete_loops);
  bvcompat::BVReport rep = bvcompat::validate_bv(bv);
  if (!rep.passed) {
    for (const auto& v : rep.violations) std::cerr << v << "\n";
    for (const auto& w : rep.unitarity.offending()) std::cerr << w << "\n";
    return 2;
  }
  machine::QTMDef m = bvcompat::convert(bv);
  std::ofstream of(out, std::ios::binary);
  if (!of) throw resource_error("cannot write '" + out + "'");
  of << machine::write_qtm(m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Turing machine workbench"};
  app.require_subcommand(1);

  std::string chk_path;
  double chk_eps = machine::kDefaultEps;
  auto* chk = app.add_subcommand("check", "validate a machine file");
  chk->add_option("machine", chk_path, "machine file")->required()->check(CLI::ExistingFile);
  chk->add_option("--eps", chk_eps, "tolerance for the unitary conditions");

  std::string run_path, run_input;
  std::uint64_t run_steps = 0;
  bool run_trace = false;
  auto* run = app.add_subcommand("run", "evolve an input and print the distribution");
  run->add_option("machine", run_path, "machine file")->required()->check(CLI::ExistingFile);
  run->add_option("--input", run_input, "input superposition, e.g. \"1|3>\"")->required();
  run->add_option("--steps", run_steps, "number of evolution steps")->required();
  run->add_flag("--trace", run_trace, "print the distribution after every step");

  std::string lim_path, lim_input;
  std::uint64_t lim_max = 1000;
  double lim_settle = distribution::kDefaultSettleEps;
  auto* lim = app.add_subcommand("limit", "evolve until final, settled, or out of budget");
  lim->add_option("machine", lim_path, "machine file")->required()->check(CLI::ExistingFile);
  lim->add_option("--input", lim_input, "input superposition")->required();
  lim->add_option("--max-steps", lim_max, "step budget");
  lim->add_option("--settle-eps", lim_settle, "mass-gain threshold over the window");

  std::string obs_path, obs_input, obs_sched, obs_mode = "exact";
  std::uint64_t obs_depth = 0, obs_samples = 100000, obs_seed = 1;
  bool obs_trace = false;
  auto* obs = app.add_subcommand("observe", "run under an observation schedule");
  obs->add_option("machine", obs_path, "machine file")->required()->check(CLI::ExistingFile);
  obs->add_option("--input", obs_input, "input superposition")->required();
  obs->add_option("--schedule", obs_sched, "a+b*i or comma-separated steps")->required();
  obs->add_option("--depth", obs_depth, "number of evolution steps")->required();
  obs->add_option("--mode", obs_mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  obs->add_option("--samples", obs_samples, "sample count for mc mode");
  obs->add_option("--seed", obs_seed, "base seed for mc mode");
  obs->add_flag("--trace", obs_trace, "print each sampled run's observations (mc mode)");

  std::string cb_path, cb_out;
  bool cb_loops = false;
  auto* cb = app.add_subcommand("convert-bv", "convert a loop machine file");
  cb->add_option("machine", cb_path, "loop machine file")->required()->check(CLI::ExistingFile);
  cb->add_option("--out", cb_out, "output machine file")->required();
  cb->add_flag("--complete-loops", cb_loops, "add missing final-state loop rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(chk)) return do_check(chk_path, chk_eps);
    if (app.got_subcommand(run)) return do_run(run_path, run_input, run_steps, run_trace);
    if (app.got_subcommand(lim)) return do_limit(lim_path, lim_input, lim_max, lim_settle);
    if (app.got_subcommand(obs))
      return do_observe(obs_path, obs_input, obs_sched, obs_depth, obs_mode, obs_samples,
                        obs_seed, obs_trace);
    if (app.got_subcommand(cb)) return do_convert_bv(cb_path, cb_out, cb_loops);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const machine::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& w : e.report.offending()) std::cerr << w << "\n";
    return 2;
  } catch (const machine::completeness_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& s : e.missing) std::cerr << "missing row " << s << "\n";
    return 2;
  } catch (const semantic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
