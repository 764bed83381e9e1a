#pragma once

// Command-line front end. `run` is the whole program; tools/hbarcheck.cpp
// only forwards argv and the standard streams.
//
// Exit codes: 0 state valid, 2 state invalid / classical only,
//             1 usage, parse or I/O error, 3 invalid input object.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "hbarcheck/gaussian.hpp"
#include "hbarcheck/io.hpp"
#include "hbarcheck/verifier.hpp"
#include "hbarcheck/wignergrid.hpp"

namespace hbarcheck::cli {

inline constexpr int kExitValid = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotAState = 2;
inline constexpr int kExitInvalidInput = 3;

using Json = nlohmann::ordered_json;

struct Options {
  std::string cov_path;
  std::string wigner_path;
  std::string psi_path;
  std::string out_path;
  double hbar = 0.0;
  double hbar_min = 0.0;
  double hbar_max = 0.0;
  int steps = 0;
  double tol = kDefaultVerifyTol;
  std::size_t grid_n = 256;
  double grid_l = 12.0;
  std::uint64_t seed = 0;
  int klm_points = 16;
  int hermite = 0;
  double sigma_x = 0.70710678118654752;
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
      return kExitUsage;
    default:
      return kExitInvalidInput;
  }
}

namespace detail {

struct Loaded {
  std::string path;
  std::string digest;
};

inline Json input_json(const Loaded& in) { return Json{{"path", in.path}, {"fnv1a64", in.digest}}; }

inline std::pair<io::CovarianceSpec, Loaded> load_cov(const std::string& path) {
  const auto text = io::read_file(path);
  return {io::parse_covariance_json(text), {path, io::fnv1a64(text)}};
}

inline std::pair<WignerGrid, Loaded> load_wigner(const std::string& path) {
  const auto text = io::read_file(path);
  return {io::parse_wigner_csv(text), {path, io::fnv1a64(text)}};
}

inline Json gaussian_verdict_json(const GaussianVerdict& v, double hbar_ref) {
  std::vector<double> lambdas;
  for (double l : v.symplectic_eigenvalues) lambdas.push_back(l * hbar_ref);
  std::vector<bool> rsi = v.rsi_satisfied;
  return Json{{"hbar_prime", v.hbar_prime * hbar_ref},
              {"label", std::string(to_string(v.label))},
              {"lambda_min", v.lambda_min * hbar_ref},
              {"hbar_critical", v.hbar_critical * hbar_ref},
              {"symplectic_eigenvalues", lambdas},
              {"rsi_satisfied", rsi},
              {"saturated", v.saturated}};
}

inline Json state_verdict_json(const StateVerdict& v, double hbar_ref, std::size_t leading) {
  std::vector<double> top(v.eigenvalues.begin(),
                          v.eigenvalues.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(leading, v.eigenvalues.size())));
  return Json{{"hbar_prime", v.hbar_prime * hbar_ref},
              {"label", std::string(to_string(v.label))},
              {"trace", v.trace},
              {"min_eigenvalue", v.min_eigenvalue},
              {"purity", v.purity},
              {"purity_phase_space", v.purity_phase_space},
              {"leading_eigenvalues", top}};
}

inline std::string fmt_row(const char* label, double h, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %12.6g %14.8g %14.8g\n", label, h, a, b);
  return buf;
}

inline std::vector<double> hbar_grid(const Options& o) {
  if (!(o.hbar_min > 0.0) || !(o.hbar_max > o.hbar_min)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < --hbar-min < --hbar-max");
  }
  if (o.steps < 2) throw Error(ErrorCode::InvalidArgument, "--steps must be at least 2");
  std::vector<double> h(static_cast<std::size_t>(o.steps));
  for (int i = 0; i < o.steps; ++i) {
    h[static_cast<std::size_t>(i)] =
        o.hbar_min + (o.hbar_max - o.hbar_min) * static_cast<double>(i) / (o.steps - 1);
  }
  return h;
}

/// The phase-space grid a command works on, in units where the input's ħ is 1.
struct GridInput {
  WignerGrid grid;
  double hbar_ref;
  Json source;
};

inline GridInput grid_input(const Options& o) {
  if (!o.wigner_path.empty() == !o.cov_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --wigner or --cov");
  }
  if (!o.wigner_path.empty()) {
    auto [w, in] = load_wigner(o.wigner_path);
    const double ref = w.hbar();
    return {io::nondimensionalize(w), ref, Json{{"wigner", input_json(in)}}};
  }
  auto [spec, in] = load_cov(o.cov_path);
  const auto state = io::to_gaussian_state(spec);
  return {sample_gaussian_wigner(state, PositionGrid(o.grid_l, o.grid_n)), spec.hbar_ref,
          Json{{"cov", input_json(in)}, {"grid_n", o.grid_n}, {"grid_l", o.grid_l}}};
}

inline void require_hbar_flag(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "--hbar must be positive");
}

inline void emit(const Json& report, const Options& o, std::ostream& out, bool to_file = true) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (to_file && !o.out_path.empty()) io::write_file(o.out_path, text);
}

}  // namespace detail

inline int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  detail::require_hbar_flag(o.hbar);
  auto [spec, in] = detail::load_cov(o.cov_path);
  Json report{{"command", "classify"},
              {"args", Json{{"hbar", o.hbar}}},
              {"inputs", Json{{"cov", detail::input_json(in)}}},
              {"hbar_ref", spec.hbar_ref}};
  std::optional<GaussianState> state;
  try {
    state = io::to_gaussian_state(spec);
  } catch (const Error& e) {
    report["verdict"] = Json{{"label", "Invalid"}, {"reason", e.what()}};
    detail::emit(report, o, out);
    err << "classify: Invalid (" << e.what() << ")\n";
    return kExitInvalidInput;
  }
  const double scaled = o.hbar / spec.hbar_ref;
  const auto v = classify_gaussian(*state, scaled);
  report["hbar_ratio"] = scaled;
  report["verdict"] = detail::gaussian_verdict_json(v, spec.hbar_ref);
  report["tolerances"] = Json{{"saturation_relative", kSaturationTol}, {"psd", kDefaultPsdTol}};
  detail::emit(report, o, out);

  err << "label          " << to_string(v.label) << "\n"
      << "lambda_min     " << v.lambda_min * spec.hbar_ref << "\n"
      << "hbar_critical  " << v.hbar_critical * spec.hbar_ref << "\n";
  return v.label == GaussianLabel::ClassicalOnly ? kExitNotAState : kExitValid;
}

inline int cmd_wavefunction(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out_path.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  if (o.hermite < 0) throw Error(ErrorCode::InvalidArgument, "--hermite must be >= 0");
  detail::require_hbar_flag(o.hbar);
  const auto psi = hermite_wavefunction(static_cast<std::size_t>(o.hermite), o.sigma_x,
                                        PositionGrid(o.grid_l, o.grid_n), o.hbar);
  const auto text = io::wavefunction_csv(psi);
  io::write_file(o.out_path, text);
  Json report{{"command", "wavefunction"},
              {"args", Json{{"hermite", o.hermite},
                            {"sigma_x", o.sigma_x},
                            {"hbar", o.hbar},
                            {"grid_n", o.grid_n},
                            {"grid_l", o.grid_l}}},
              {"output", Json{{"path", o.out_path}, {"fnv1a64", io::fnv1a64(text)}}}};
  detail::emit(report, o, out, false);
  err << "wrote " << o.out_path << "\n";
  return kExitValid;
}

inline int cmd_wigner(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out_path.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  const auto text = io::read_file(o.psi_path);
  const auto psi = io::parse_wavefunction_csv(text);
  const auto w = wigner_transform(psi);
  const auto csv = io::wigner_csv(w);
  io::write_file(o.out_path, csv);
  double wmin = 0.0;
  for (double v : w.values()) wmin = std::min(wmin, v);
  Json report{{"command", "wigner"},
              {"inputs", Json{{"psi", Json{{"path", o.psi_path}, {"fnv1a64", io::fnv1a64(text)}}}}},
              {"hbar", w.hbar()},
              {"grid_l", w.xgrid().half_width()},
              {"grid_n", w.size()},
              {"mass", w.mass()},
              {"min_value", wmin},
              {"output", Json{{"path", o.out_path}, {"fnv1a64", io::fnv1a64(csv)}}}};
  detail::emit(report, o, out, false);
  err << "mass " << w.mass() << ", min W " << wmin << ", wrote " << o.out_path << "\n";
  return kExitValid;
}

inline Json klm_sample_json(const WignerGrid& w, double hbar_scaled, const Options& o) {
  if (o.klm_points <= 0) return nullptr;
  const double r = std::min({3.0, 0.5 * w.xgrid().half_width(), 0.5 * w.p_max()});
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<PhasePoint> pts(static_cast<std::size_t>(
      std::min<int>(o.klm_points, static_cast<int>(kMaxKlmPoints))));
  for (auto& p : pts) {
    p.x = u(rng);
    p.p = u(rng);
  }
  const auto res = klm_sample_spectrum(w, hbar_scaled, pts);
  return Json{{"points", pts.size()},
              {"seed", o.seed},
              {"psd", res.psd},
              {"min_eigenvalue", res.min_eigenvalue}};
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  detail::require_hbar_flag(o.hbar);
  const auto in = detail::grid_input(o);
  const double scaled = o.hbar / in.hbar_ref;
  const auto v = verify_state(in.grid, scaled, o.tol);
  Json report{{"command", "verify"},
              {"args", Json{{"hbar", o.hbar}, {"tol", o.tol}, {"seed", o.seed},
                            {"klm_points", o.klm_points}}},
              {"inputs", in.source},
              {"hbar_ref", in.hbar_ref},
              {"hbar_ratio", scaled},
              {"verdict", detail::state_verdict_json(v, in.hbar_ref, 8)},
              {"klm_finite_sample", klm_sample_json(in.grid, scaled, o)},
              {"tolerances", Json{{"psd_relative", o.tol},
                                  {"pure", kPureThreshold},
                                  {"purity_cross_check", kPurityCrossCheckTol}}}};
  detail::emit(report, o, out);
  err << "label " << to_string(v.label) << "  purity " << v.purity << "  min eigenvalue "
      << v.min_eigenvalue << "  trace " << v.trace << "\n";
  return v.label == StateLabel::NotAState ? kExitNotAState : kExitValid;
}

inline int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const auto hs = detail::hbar_grid(o);
  Json report{{"command", "scan"},
              {"args", Json{{"hbar_min", o.hbar_min}, {"hbar_max", o.hbar_max},
                            {"steps", o.steps}, {"tol", o.tol}}}};
  char head[160];
  std::snprintf(head, sizeof head, "%-14s %12s %14s %14s\n", "label", "hbar'", "purity/lambda",
                "min eig/crit");
  err << head;

  if (!o.cov_path.empty() && o.wigner_path.empty()) {
    auto [spec, in] = detail::load_cov(o.cov_path);
    const auto state = io::to_gaussian_state(spec);
    report["inputs"] = Json{{"cov", detail::input_json(in)}};
    report["hbar_ref"] = spec.hbar_ref;
    report["hbar_critical"] = critical_hbar(state) * spec.hbar_ref;
    Json verdicts = Json::array();
    Json transitions = Json::array();
    std::optional<GaussianLabel> prev;
    for (double h : hs) {
      const auto v = classify_gaussian(state, h / spec.hbar_ref);
      verdicts.push_back(detail::gaussian_verdict_json(v, spec.hbar_ref));
      if (prev && *prev != v.label) {
        transitions.push_back(Json{{"hbar_prime", h},
                                   {"from", std::string(to_string(*prev))},
                                   {"to", std::string(to_string(v.label))}});
      }
      prev = v.label;
      err << detail::fmt_row(std::string(to_string(v.label)).c_str(), h,
                             v.lambda_min * spec.hbar_ref, v.hbar_critical * spec.hbar_ref);
    }
    report["verdicts"] = verdicts;
    report["transitions"] = transitions;
    detail::emit(report, o, out);
    return kExitValid;
  }

  const auto in = detail::grid_input(o);
  std::vector<double> scaled;
  for (double h : hs) scaled.push_back(h / in.hbar_ref);
  const auto scan = scan_hbar(in.grid, scaled, o.tol);
  report["inputs"] = in.source;
  report["hbar_ref"] = in.hbar_ref;
  Json verdicts = Json::array();
  for (const auto& v : scan.verdicts) {
    verdicts.push_back(detail::state_verdict_json(v, in.hbar_ref, 4));
    err << detail::fmt_row(std::string(to_string(v.label)).c_str(), v.hbar_prime * in.hbar_ref,
                           v.purity, v.min_eigenvalue);
  }
  Json transitions = Json::array();
  for (const auto& t : scan.transitions) {
    transitions.push_back(Json{{"hbar_prime", t.hbar_prime * in.hbar_ref},
                               {"from", std::string(to_string(t.from))},
                               {"to", std::string(to_string(t.to))}});
  }
  report["verdicts"] = verdicts;
  report["transitions"] = transitions;
  // Evidence on the behaviour below the reference ħ; carries no pass/fail meaning.
  report["below_reference_all_psd"] =
      scan.psd_below_reference ? Json(*scan.psd_below_reference) : Json(nullptr);
  detail::emit(report, o, out);
  return kExitValid;
}

inline int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
  detail::require_hbar_flag(o.hbar);
  const auto in = detail::grid_input(o);
  const double scaled = o.hbar / in.hbar_ref;
  const auto s = operator_spectrum(reconstruct_kernel(in.grid, scaled));
  Json report{{"command", "spectrum"},
              {"args", Json{{"hbar", o.hbar}}},
              {"inputs", in.source},
              {"hbar_ref", in.hbar_ref},
              {"hbar_ratio", scaled},
              {"trace", s.trace},
              {"eigenvalues", s.eigenvalues}};
  detail::emit(report, o, out);
  err << "dimension " << s.eigenvalues.size() << "  trace " << s.trace << "  largest "
      << s.eigenvalues.front() << "  smallest " << s.eigenvalues.back() << "\n";
  return kExitValid;
}

inline int cmd_purity(const Options& o, std::ostream& out, std::ostream& err) {
  detail::require_hbar_flag(o.hbar);
  if (!o.cov_path.empty() && o.wigner_path.empty()) {
    auto [spec, in] = detail::load_cov(o.cov_path);
    const auto state = io::to_gaussian_state(spec);
    const double scaled = o.hbar / spec.hbar_ref;
    Json report{{"command", "purity"},
                {"args", Json{{"hbar", o.hbar}}},
                {"inputs", Json{{"cov", detail::input_json(in)}}},
                {"hbar_ref", spec.hbar_ref},
                {"hbar_ratio", scaled}};
    if (!klm_check(state, scaled)) {
      report["purity"] = nullptr;
      report["label"] = "NotAQuantumState";
      detail::emit(report, o, out);
      err << "not a quantum state at hbar' = " << o.hbar << "\n";
      return kExitNotAState;
    }
    const double p = gaussian_purity(state, scaled);
    report["purity"] = p;
    report["label"] = "QuantumState";
    detail::emit(report, o, out);
    err << "purity " << p << "\n";
    return kExitValid;
  }
  const auto in = detail::grid_input(o);
  const double scaled = o.hbar / in.hbar_ref;
  const auto v = verify_state(in.grid, scaled, o.tol);
  Json report{{"command", "purity"},
              {"args", Json{{"hbar", o.hbar}, {"tol", o.tol}}},
              {"inputs", in.source},
              {"hbar_ref", in.hbar_ref},
              {"hbar_ratio", scaled},
              {"purity", v.purity},
              {"purity_phase_space", v.purity_phase_space},
              {"label", std::string(to_string(v.label))}};
  detail::emit(report, o, out);
  err << "purity " << v.purity << " (phase space " << v.purity_phase_space << ")\n";
  return v.label == StateLabel::NotAState ? kExitNotAState : kExitValid;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks whether phase-space functions are quantum states as hbar varies",
               "hbarcheck"};
  app.require_subcommand(1);
  Options o;

  auto add_hbar = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--hbar", o.hbar, "Value of hbar' (same units as the input's hbar)");
    if (required) opt->required();
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid-n", o.grid_n, "Grid points (power of two)")->capture_default_str();
    c->add_option("--grid-l", o.grid_l, "Grid half-width")->capture_default_str();
  };
  auto add_source = [&](CLI::App* c) {
    c->add_option("--wigner", o.wigner_path, "Wigner grid CSV");
    c->add_option("--cov", o.cov_path, "Covariance JSON file (sampled onto a grid)");
    add_grid(c);
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out_path, "Also write the report here"); };

  auto* classify = app.add_subcommand("classify", "Classify a Gaussian covariance at hbar'");
  classify->add_option("--cov", o.cov_path, "Covariance JSON file")->required();
  add_hbar(classify, true);
  add_out(classify);

  auto* wavefn = app.add_subcommand("wavefunction", "Write a Hermite-function wavefunction CSV");
  wavefn->add_option("--hermite", o.hermite, "Oscillator level k (0..8)")->capture_default_str();
  wavefn->add_option("--sigma-x", o.sigma_x, "Ground-state position spread")->capture_default_str();
  wavefn->add_option("--hbar", o.hbar, "hbar recorded in the file");
  add_grid(wavefn);
  wavefn->add_option("--out", o.out_path, "Output CSV")->required();

  auto* wigner = app.add_subcommand("wigner", "Wigner transform of a wavefunction CSV");
  wigner->add_option("--psi", o.psi_path, "Wavefunction CSV")->required();
  wigner->add_option("--out", o.out_path, "Output Wigner CSV")->required();

  auto* verify = app.add_subcommand("verify", "Decide whether a phase-space function is a state at hbar'");
  add_source(verify);
  add_hbar(verify, true);
  verify->add_option("--tol", o.tol, "Relative PSD tolerance")->capture_default_str();
  verify->add_option("--seed", o.seed, "Seed for the finite-sample positivity points")
      ->capture_default_str();
  verify->add_option("--klm-points", o.klm_points, "Random points for the finite-sample test (0 = off)")
      ->capture_default_str();
  add_out(verify);

  auto* scan = app.add_subcommand("scan", "Scan hbar' over a uniform range");
  add_source(scan);
  scan->add_option("--hbar-min", o.hbar_min, "Smallest hbar'")->required();
  scan->add_option("--hbar-max", o.hbar_max, "Largest hbar'")->required();
  scan->add_option("--steps", o.steps, "Number of values (>= 2)")->required();
  scan->add_option("--tol", o.tol, "Relative PSD tolerance")->capture_default_str();
  add_out(scan);

  auto* spectrum = app.add_subcommand("spectrum", "Dump the reconstructed operator eigenvalues");
  add_source(spectrum);
  add_hbar(spectrum, true);
  add_out(spectrum);

  auto* purity = app.add_subcommand("purity", "Purity at hbar'");
  add_source(purity);
  add_hbar(purity, true);
  purity->add_option("--tol", o.tol, "Relative PSD tolerance")->capture_default_str();
  add_out(purity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitValid;
    const auto subs = app.get_subcommands();
    Json report{{"command", subs.empty() ? std::string() : subs.front()->get_name()},
                {"error", Json{{"code", "UsageError"}, {"message", e.what()}}}};
    out << report.dump(2) << "\n";
    return kExitUsage;
  }
  if (wavefn->parsed() && o.hbar == 0.0) o.hbar = 1.0;

  const char* name = app.get_subcommands().front()->get_name().c_str();
  try {
    if (classify->parsed()) return cmd_classify(o, out, err);
    if (wavefn->parsed()) return cmd_wavefunction(o, out, err);
    if (wigner->parsed()) return cmd_wigner(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (scan->parsed()) return cmd_scan(o, out, err);
    if (spectrum->parsed()) return cmd_spectrum(o, out, err);
    if (purity->parsed()) return cmd_purity(o, out, err);
  } catch (const Error& e) {
    Json report{{"command", name},
                {"error", Json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    out << report.dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace hbarcheck::cli
