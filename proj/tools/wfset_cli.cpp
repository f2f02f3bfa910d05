// wfset: analyze a configured atom, check Gabor frames, or run the self test.
//
//   wfset analyze config.json [--strict] [--out dir] [--threads N]
//   wfset frames [config.json]
//   wfset selftest [--corrupt]
//
// Exit codes: 0 ok, 1 failures (crosscheck under --strict, frames, selftest),
// 2 indeterminate-only analysis, 64 configuration error, 70 internal error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "wfset/config.hpp"
#include "wfset/error.hpp"
#include "wfset/gabor.hpp"
#include "wfset/io.hpp"
#include "wfset/transform.hpp"
#include "wfset/wavefront.hpp"

namespace fs = std::filesystem;
using namespace wfset;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitConfig = 64;
constexpr int kExitInternal = 70;

std::string join(const std::string& dir, const std::string& file) {
  if (dir.empty() || fs::path(file).is_absolute()) return file;
  return (fs::path(dir) / file).string();
}

int cmd_analyze(const std::string& path, bool strict, const std::string& out, unsigned threads) {
  const AnalysisConfig cfg = load_config(path);
  if (!out.empty()) fs::create_directories(out);
  const WavefrontReport rep = analyze(cfg.atom, cfg.points, cfg.params, threads);
  const CrosscheckSummary cc = crosscheck(rep);

  nlohmann::json j = rep.to_json();
  j["crosscheck"] = cc.to_json();
  write_atomic(join(out, cfg.outputs.json), j.dump(2) + "\n");
  write_atomic(join(out, cfg.outputs.csv), rep.to_csv());
  if (!cfg.outputs.svg.empty()) write_atomic(join(out, cfg.outputs.svg), svg_rose(rep));

  int decided = 0;
  for (const auto& c : rep.cells) decided += c.verdict != Verdict::Indeterminate;
  std::cout << rep.atom << ": " << rep.cells.size() << " cells, " << cc.indeterminate << " indeterminate, "
            << cc.disagreements.size() << " disagreements, " << cc.micro_violations.size() << " micro-locality and "
            << cc.k_violations.size() << " k-monotonicity violations\n";
  for (const auto& w : rep.wf_s) {
    if (w.verdict != Verdict::Singular) continue;
    std::cout << "  in WF_s: x0 =";
    for (Eigen::Index i = 0; i < rep.points[w.point].size(); ++i) std::cout << ' ' << rep.points[w.point][i];
    std::cout << ", cone " << cone_id(cfg.params.cover.cones()[w.cone]) << '\n';
  }
  if (strict && !cc.pass) {
    for (const auto& d : cc.disagreements) std::cerr << "disagreement: " << d << '\n';
    for (const auto& d : cc.micro_violations) std::cerr << "micro-locality: " << d << '\n';
    for (const auto& d : cc.k_violations) std::cerr << "k-monotonicity: " << d << '\n';
    return kExitFail;
  }
  return decided == 0 ? kExitIndeterminate : kExitOk;
}

int cmd_frames(const std::string& path) {
  AnalysisParams p = default_params(1);
  Atom probe = Atom::gevrey_bump(1.8, 1.5, Point::Zero(1));
  if (!path.empty()) {
    const AnalysisConfig cfg = load_config(path);
    p = cfg.params;
    probe = cfg.atom;
  }
  SampleGrid grid = p.grid;
  const ComplexVec f = probe.sample(grid);
  bool ok = true;
  std::cout.precision(3);
  for (double e : p.eps_list) {
    const GaborSystem sys = make_gabor_system(p.gabor_window, p.pair(), e);
    const double res = partition_residual(sys);
    const double rec = reconstruction_error(f, grid, sys);
    ok &= res <= 1e-10 && rec <= 1e-10;
    std::cout << "window " << p.gabor_window.id() << " a=" << p.space_step << " b=" << p.frequency_step
              << " eps=" << e << ": partition residual " << std::scientific << res << ", reconstruction error " << rec
              << std::defaultfloat << '\n';
  }
  return ok ? kExitOk : kExitFail;
}

struct Check {
  std::string name;
  std::function<bool()> run;
};

int cmd_selftest(bool corrupt) {
  // The corrupted build perturbs the synthesis constant; frame exactness
  // must then fail.
  const double damage = corrupt ? 1.0 + 1e-6 : 1.0;
  const SampleGrid g1 = default_grid(1);
  std::vector<Check> checks = {
      {"fft round trip",
       [&] {
         const ComplexVec f = Atom::gaussian(0.4, point1(0.3)).sample(g1);
         return (idft(dft(f, g1)) - f).norm() <= 1e-12 * f.norm();
       }},
      {"parseval",
       [&] {
         const ComplexVec f = Atom::gevrey_bump(2.0, 1.0, point1(0.1)).sample(g1);
         const double e = sample_energy(f, g1);
         return std::abs(dft(f, g1).energy() - e) <= 1e-9 * e;
       }},
      {"gaussian oracle",
       [&] {
         const Atom a = Atom::gaussian(0.5, point1(0.2));
         const SampledFourier sf(a.sample(g1), g1);
         const Complex exact = fourier_oracle(a, point1(3.0), false).value;
         return std::abs(sf(point1(3.0)) - exact) <= 1e-9;
       }},
      {"gabor frame exactness",
       [&] {
         const ComplexVec f = Atom::gevrey_bump(1.8, 1.5, Point::Zero(1)).sample(g1);
         GaborSystem sys = make_gabor_system(Window::gevrey_bump(1.5, 0.75), make_pair(1.0, kPi / 2, 1), 0.5);
         sys.constant *= damage;
         return reconstruction_error(f, g1, sys) <= 1e-10 && partition_residual(sys) <= 1e-10;
       }},
      {"delta is singular, smooth bump is regular",
       [&] {
         AnalysisParams p = default_params(1);
         const auto d = estimate_wf_s(Atom::delta(point1(0.25)), point1(0.25), p.cover, 2.0, p.k_grid, 2.0, p.cutoff,
                                      p.seminorm, p.grid);
         const auto r = estimate_wf_s(Atom::delta(point1(0.25)), point1(-0.75), p.cover, 2.0, p.k_grid, 2.0,
                                      p.cutoff, p.seminorm, p.grid);
         bool ok = true;
         for (const auto& c : d) ok &= c.verdict == Verdict::Singular;
         for (const auto& c : r) ok &= c.verdict == Verdict::Regular;
         return ok;
       }},
      {"binary round trip",
       [&] {
         const Spectrum s = dft(Atom::gaussian(0.4, point1(0.0)), g1);
         const BinaryArray b = decode_binary(encode_binary(to_binary(s)));
         return b.values.size() == static_cast<std::size_t>(s.values.size()) && b.values[7] == s.values[7];
       }},
  };
  if (checks.empty()) return kExitFail;
  int failed = 0;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::cerr << c.name << ": " << e.what() << '\n';
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    failed += !ok;
  }
  std::cout << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed ? kExitFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical wave-front set analysis"};
  app.require_subcommand(1);

  std::string config;
  bool strict = false;
  std::string out;
  unsigned threads = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run all detectors on a configured atom");
  analyze_cmd->add_option("config", config, "JSON configuration")->required();
  analyze_cmd->add_flag("--strict", strict, "Exit 1 when the crosscheck finds violations");
  analyze_cmd->add_option("--out", out, "Output directory");
  analyze_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string frames_config;
  auto* frames_cmd = app.add_subcommand("frames", "Check the Gabor system of a configuration");
  frames_cmd->add_option("config", frames_config, "JSON configuration (optional)");

  bool corrupt = false;
  auto* self_cmd = app.add_subcommand("selftest", "Run the built-in invariant checks");
  self_cmd->add_flag("--corrupt", corrupt, "Perturb the synthesis constant; the suite must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(config, strict, out, threads);
    if (*frames_cmd) return cmd_frames(frames_config);
    if (*self_cmd) return cmd_selftest(corrupt);
  } catch (const Error& e) {
    std::cerr << "wfset: " << e.what() << '\n';
    const bool config_error = e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidPair ||
                              e.kind() == ErrorKind::PainlessViolated || e.kind() == ErrorKind::IllConditioned;
    return config_error ? kExitConfig : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "wfset: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
