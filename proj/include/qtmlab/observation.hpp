#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtmlab/amplitude_expr.hpp"
#include "qtmlab/distribution.hpp"
#include "qtmlab/errors.hpp"
#include "qtmlab/evolution.hpp"
#include "qtmlab/rng.hpp"

namespace qtmlab::observation {

using evolution::Superposition;

// strictly increasing observation points, either affine tau(i) = a + b*i or
// an explicit list
class Schedule {
 public:
  static Schedule affine(std::uint64_t offset, std::uint64_t stride) {
    if (stride < 1) throw semantic_error("schedule stride must be at least 1");
    Schedule s;
    s.affine_ = true;
    s.a_ = offset;
    s.b_ = stride;
    return s;
  }

  static Schedule explicit_points(std::vector<std::uint64_t> pts) {
    if (pts.empty()) throw semantic_error("empty schedule");
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i] <= pts[i - 1])
        throw semantic_error("schedule points must be strictly increasing");
    Schedule s;
    s.affine_ = false;
    s.pts_ = std::move(pts);
    return s;
  }

  bool contains(std::uint64_t h) const {
    if (affine_) return h >= a_ && (h - a_) % b_ == 0;
    for (auto p : pts_)
      if (p == h) return true;
    return false;
  }

  std::vector<std::uint64_t> points_up_to(std::uint64_t depth) const {
    std::vector<std::uint64_t> out;
    if (affine_) {
      for (std::uint64_t h = a_; h <= depth; h += b_) out.push_back(h);
    } else {
      for (auto p : pts_)
        if (p <= depth) out.push_back(p);
    }
    return out;
  }

 private:
  Schedule() = default;
  bool affine_ = true;
  std::uint64_t a_ = 0, b_ = 1;
  std::vector<std::uint64_t> pts_;
};

// `a+b*i` or a comma-separated strictly increasing list
inline Schedule parse_schedule(std::string_view text) {
  if (text.find(',') == std::string_view::npos &&
      text.find('i') != std::string_view::npos) {
    machine::AmplitudeParser ap(text);
    std::uint64_t a = ap.parse_nat();
    ap.expect('+');
    std::uint64_t b = ap.parse_nat();
    ap.expect('*');
    ap.expect('i');
    ap.expect_end();
    return Schedule::affine(a, b);
  }
  std::vector<std::uint64_t> pts;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                ? comma
                                                : comma - pos);
    machine::AmplitudeParser ap(tok);
    pts.push_back(ap.parse_nat());
    ap.expect_end();
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Schedule::explicit_points(std::move(pts));
}

struct OutputObservation {
  std::optional<std::uint64_t> outcome;  // empty means no value yet
  Superposition collapsed;
  double probability = 0.0;
};

// one branch per final support configuration, in configuration order, then
// the residual no-value branch last when nonfinal mass remains
inline std::vector<OutputObservation> measure_output(const machine::QTMDef& m,
                                                     const Superposition& phi) {
  if (std::abs(hilbert::norm(phi) - 1.0) > 1e-9)
    throw semantic_error("measurement requires a unit superposition");
  std::vector<OutputObservation> out;
  for (const auto& [c, a] : phi.entries())
    if (m.is_final(c.state)) {
      OutputObservation br;
      br.outcome = tape::val(c);
      br.collapsed = Superposition::single(c, a / std::abs(a));
      br.probability = std::norm(a);
      out.push_back(std::move(br));
    }
  Superposition nf = evolution::nonfinal_part(m, phi);
  if (!nf.empty()) {
    OutputObservation br;
    br.probability = hilbert::norm_sq(nf);
    br.collapsed = hilbert::normalize(nf);
    out.push_back(std::move(br));
  }
  return out;
}

struct ObsEvent {
  std::uint64_t step = 0;
  std::optional<std::uint64_t> outcome;
  double probability = 1.0;
};

// a finite observed run: states[h] is the superposition after h steps, with
// the post-measurement state at observation points
struct FiniteRun {
  std::vector<Superposition> states;
  std::vector<ObsEvent> observations;
  double probability = 1.0;

  std::optional<std::uint64_t> observed_output() const {
    for (const auto& e : observations)
      if (e.outcome) return e.outcome;
    return std::nullopt;
  }
};

inline std::size_t default_branch_cap() {
  if (const char* env = std::getenv("QTMLAB_BRANCH_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

// breadth-first expansion of every tau-observed run up to depth.  A run that
// has produced a numeric outcome is collapsed onto a single final
// configuration; later observations repeat that outcome with probability 1,
// so the run is carried forward without re-branching.
inline std::vector<FiniteRun> enumerate_runs(const machine::QTMDef& m,
                                             const Superposition& phi0,
                                             const Schedule& tau,
                                             std::uint64_t depth,
                                             std::size_t cap = default_branch_cap()) {
  struct Live {
    FiniteRun run;
    std::optional<std::uint64_t> frozen;
  };
  std::vector<Live> live;
  live.push_back({FiniteRun{{phi0}, {}, 1.0}, std::nullopt});

  for (std::uint64_t h = 0;; ++h) {
    if (tau.contains(h)) {
      std::vector<Live> next;
      for (Live& lr : live) {
        if (lr.frozen) {
          lr.run.observations.push_back({h, lr.frozen, 1.0});
          next.push_back(std::move(lr));
          continue;
        }
        auto branches = measure_output(m, lr.run.states.back());
        for (auto& br : branches) {
          Live child = lr;
          child.run.states.back() = br.collapsed;
          child.run.observations.push_back({h, br.outcome, br.probability});
          child.run.probability *= br.probability;
          if (br.outcome) child.frozen = br.outcome;
          next.push_back(std::move(child));
        }
      }
      live = std::move(next);
      if (live.size() > cap)
        throw resource_error("run enumeration exceeded the branch cap of " +
                             std::to_string(cap));
    }
    if (h == depth) break;
    for (Live& lr : live) lr.run.states.push_back(evolution::apply_U(m, lr.run.states.back()));
  }

  std::vector<FiniteRun> runs;
  runs.reserve(live.size());
  for (Live& lr : live) runs.push_back(std::move(lr.run));
  return runs;
}

// run probabilities aggregated by observed output; depth must be an
// observation point for the aggregate to mirror the unobserved distribution
inline distribution::PPD observed_distribution_exact(
    const machine::QTMDef& m, const Superposition& phi0, const Schedule& tau,
    std::uint64_t depth, std::size_t cap = default_branch_cap()) {
  if (!tau.contains(depth))
    throw semantic_error("depth " + std::to_string(depth) +
                         " is not an observation point");
  distribution::PPD out;
  for (const auto& run : enumerate_runs(m, phi0, tau, depth, cap))
    if (auto o = run.observed_output()) out.add(*o, run.probability);
  return out;
}

struct TraceEvent {
  std::uint64_t step = 0;
  std::optional<std::uint64_t> outcome;
  double probability = 1.0;
};

struct SampleResult {
  std::optional<std::uint64_t> outcome;
  std::vector<TraceEvent> trace;
};

// one random tau-observed run; a numeric outcome is definitive, so the walk
// stops there
inline SampleResult sample_run(const machine::QTMDef& m, const Superposition& phi0,
                               const Schedule& tau, std::uint64_t depth,
                               std::uint64_t seed) {
  rng::SplitMix64 gen(seed);
  Superposition phi = phi0;
  SampleResult res;
  for (std::uint64_t h = 0;; ++h) {
    if (tau.contains(h)) {
      auto branches = measure_output(m, phi);
      double u = gen.uniform01();
      std::size_t pick = branches.size() - 1;  // guards rounding shortfall
      double acc = 0.0;
      for (std::size_t i = 0; i < branches.size(); ++i) {
        acc += branches[i].probability;
        if (u < acc) {
          pick = i;
          break;
        }
      }
      const auto& br = branches[pick];
      res.trace.push_back({h, br.outcome, br.probability});
      if (br.outcome) {
        res.outcome = br.outcome;
        return res;
      }
      phi = br.collapsed;
    }
    if (h == depth) break;
    phi = evolution::apply_U(m, phi);
  }
  return res;
}

// square-root weighted sum of final run states; matches the unobserved state
// at observation points
inline Superposition reconstruct(const machine::QTMDef& m, const Superposition& phi0,
                                 const Schedule& tau, std::uint64_t depth,
                                 std::size_t cap = default_branch_cap()) {
  if (!tau.contains(depth))
    throw semantic_error("depth " + std::to_string(depth) +
                         " is not an observation point");
  Superposition acc;
  for (const auto& run : enumerate_runs(m, phi0, tau, depth, cap)) {
    double w = std::sqrt(run.probability);
    for (const auto& [c, a] : run.states.back().entries()) acc.accumulate(c, w * a);
  }
  acc.finish();
  return acc;
}

}  // namespace qtmlab::observation
