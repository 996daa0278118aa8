#include "quadsym/report.hpp"

#include "quadsym/bracket.hpp"
#include "quadsym/quantization.hpp"
#include "quadsym/sampling.hpp"
#include "quadsym/singular_space.hpp"
#include "quadsym/weight.hpp"
#include "quadsym/wick.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace quadsym {

namespace {

using ojson = nlohmann::ordered_json;

// Dense steps (expm, pencils, residual norms) are limited to this many basis functions.
constexpr long kDenseCap = 1500;

ojson to_json(const Mat& M) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

ojson to_json(const CMat& M) { return ojson{{"re", to_json(Mat(M.real()))}, {"im", to_json(Mat(M.imag()))}}; }

ojson to_json(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string status_of(bool pass) { return pass ? "pass" : "fail"; }

std::string sign_status(SignStatus s) {
  switch (s) {
    case SignStatus::ok: return "ok";
    case SignStatus::borderline: return "borderline";
    case SignStatus::negative: return "negative";
  }
  return "?";
}

// Truncation degrees after the --n-max cap and the dense size cap.
std::vector<int> effective_truncations(const std::vector<int>& requested, int n, int n_max) {
  std::vector<int> out;
  for (int N : requested) {
    if (n_max >= 0 && N > n_max) continue;
    if (binomial_size(n, N) > kDenseCap) continue;
    out.push_back(N);
  }
  return out;
}

int effective_degree(int requested, int n, int n_max) {
  int N = requested;
  if (n_max >= 0) N = std::min(N, n_max);
  while (N > 1 && binomial_size(n, N) > kDenseCap) --N;
  return N;
}

struct Context {
  const SymbolDocument& doc;
  const RunOptions& opts;
  SingularSpaceReport ss;
  std::optional<SymplecticSplit> split;
  std::optional<QuadraticSymbol> block;  // block presentation when S != {0} is symplectic
};

Context make_context(const SymbolDocument& doc, const RunOptions& opts) {
  Context ctx{doc, opts, singular_space(doc.symbol, opts.tol), std::nullopt, std::nullopt};
  if (ctx.ss.S_symplectic == SymplecticFlag::yes) {
    try {
      ctx.split = symplectic_split(doc.symbol, ctx.ss);
      if (ctx.ss.dim_S > 0) ctx.block = block_presentation(doc.symbol, *ctx.split);
    } catch (const NumericError&) {
      ctx.split.reset();
    }
  }
  return ctx;
}

ojson k0_json(const std::optional<int>& k) { return k ? ojson(*k) : ojson("undefined"); }

// --- blocks ------------------------------------------------------------------

ojson analyze_block(const Context& ctx, RunResult&) {
  const QuadraticSymbol& q = ctx.doc.symbol;
  const auto& ss = ctx.ss;
  ojson b;
  const HamiltonMap F = hamilton_map(q);
  b["hamilton_map"] = to_json(F.F);

  ojson s;
  s["dim_S"] = ss.dim_S;
  s["kernel_dims"] = ss.kernel_dims;
  s["k0"] = k0_json(ss.k0);
  s["S_symplectic"] = to_string(ss.S_symplectic);
  s["gram_condition"] = std::isfinite(ss.gram_condition) ? ojson(ss.gram_condition) : ojson("inf");
  s["gram_condition_cutoff"] = 1e8;
  s["exponent"] = ss.exponent ? ss.exponent->str() : "n/a";
  s["basis_S"] = to_json(ss.basis_S);
  s["tol_rel"] = ss.tol_rel;
  b["singular_space"] = s;

  const auto kdyn = k0_dynamic(q, ctx.opts.k0_samples, ctx.opts.seed);
  const bool agree = ss.dim_S == 0 ? (kdyn && ss.k0 && *kdyn == *ss.k0) : !kdyn;
  b["k0_dynamic"] = ojson{{"value", kdyn ? ojson(*kdyn) : ojson("none")},
                          {"samples", ctx.opts.k0_samples},
                          {"seed", ctx.opts.seed},
                          {"agrees_with_algebraic", agree},
                          {"status", status_of(agree)}};

  const double min_mod = min_modulus_on_sphere(q, ss.basis_S);
  const double pe_tol = 1e-9 * std::max(q.norm(), 1e-300);
  b["partial_ellipticity"] = ojson{{"value", check_partial_ellipticity(q, ss)},
                                   {"min_modulus_on_S", std::isfinite(min_mod) ? ojson(min_mod) : ojson("inf")},
                                   {"tolerance", pe_tol}};

  bool split_ok = true;
  if (ctx.split) {
    const auto& sp = *ctx.split;
    SphereSampler sampler(ctx.opts.seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec X = sampler.unit(q.dim()) * (1.0 + 9.0 * std::abs(sampler.gaussian()));
      worst = std::max(worst, split_residual(q, sp, X) / (X.squaredNorm() * q.norm()));
    }
    split_ok = worst <= 1e-9;
    b["split"] = ojson{{"n_primed", sp.n_primed()},
                       {"n_singular", sp.n_singular()},
                       {"Q1", to_json(sp.Q1)},
                       {"Q2", to_json(sp.Q2)},
                       {"q2_real_residual", sp.q2_real_residual},
                       {"max_relative_residual", worst},
                       {"tolerance", 1e-9},
                       {"samples", 1000},
                       {"status", status_of(split_ok)}};
  } else {
    b["split"] = ojson{{"status", "not-applicable"}, {"reason", "singular space is not certifiably symplectic"}};
  }
  b["pass"] = agree && split_ok;
  b["status"] = status_of(agree && split_ok);
  return b;
}

ojson trend(const std::vector<int>& Ns, const std::function<double(int)>& f, const std::string& key,
            RunResult& res, const std::string& stem) {
  ojson t;
  ojson values = ojson::array();
  std::vector<double> v;
  for (int N : Ns) {
    v.push_back(f(N));
    values.push_back(ojson{{"N", N}, {"C_prime", v.back()}});
    res.series[stem].push_back({key, static_cast<double>(N), v.back()});
  }
  t["values"] = values;
  t["ratio_last_first"] = v.size() >= 2 ? v.back() / v.front() : 1.0;
  return t;
}

ojson subelliptic_block(const Context& ctx, RunResult& res) {
  const QuadraticSymbol& q = ctx.doc.symbol;
  const auto& ss = ctx.ss;
  ojson b;
  const std::vector<int> Ns = effective_truncations(ctx.opts.trunc, q.n(), ctx.opts.n_max);
  b["truncations"] = Ns;
  if (Ns.size() < 2) throw InputError("subelliptic-verify: need at least two truncation degrees within --n-max");
  b["form"] = "|W u|^2 <= C'(|q^w u|^2 + |u|^2), W = (1 + 2|alpha| + n)^s";
  if (!ss.k0) {
    b["status"] = "not-applicable";
    b["reason"] = "k0 undefined";
    return b;
  }
  const int k0 = *ss.k0;
  const double s = 1.0 / (2 * k0 + 1);
  const double plateau_max = 1.5, growth_min = 2.0;
  b["s"] = s;
  b["exponent"] = predicted_exponent(k0).str();

  bool pass = true;
  if (ss.dim_S == 0) {
    ojson plateau = trend(Ns, [&](int N) { return subelliptic_constant(q, s, N); }, "C_prime_s=" + std::to_string(s), res, "subelliptic");
    const bool ok = plateau["ratio_last_first"].get<double>() <= plateau_max;
    plateau["threshold_max_ratio"] = plateau_max;
    plateau["status"] = status_of(ok);
    b["plateau"] = plateau;
    pass = ok;
    if (k0 >= 1) {
      ojson control = trend(Ns, [&](int N) { return subelliptic_constant(q, 1.0, N); }, "C_prime_s=1", res, "subelliptic");
      const bool grows = control["ratio_last_first"].get<double>() >= growth_min;
      control["s"] = 1.0;
      control["threshold_min_ratio"] = growth_min;
      control["status"] = status_of(grows);
      b["negative_control"] = control;
      pass = pass && grows;
    }
  } else if (ctx.block && ctx.split->n_primed() == 0) {
    b["status"] = "not-applicable";
    b["reason"] = "S is the whole phase space";
    return b;
  } else if (ctx.block) {
    const int np = ctx.split->n_primed();
    b["presentation"] = "symplectic block form, primed variables first";
    b["n_primed"] = np;
    ojson plateau = trend(Ns, [&](int N) { return directional_subelliptic_constant(*ctx.block, np, s, N, WeightSide::primed); },
                          "C_prime_primed", res, "subelliptic");
    const bool ok = plateau["ratio_last_first"].get<double>() <= plateau_max;
    plateau["threshold_max_ratio"] = plateau_max;
    plateau["status"] = status_of(ok);
    b["primed_plateau"] = plateau;
    ojson control = trend(Ns, [&](int N) { return directional_subelliptic_constant(*ctx.block, np, s, N, WeightSide::unprimed); },
                          "C_prime_unprimed", res, "subelliptic");
    const bool grows = control["ratio_last_first"].get<double>() >= growth_min;
    control["threshold_min_ratio"] = growth_min;
    control["status"] = status_of(grows);
    b["unprimed_control"] = control;
    pass = ok && grows;
  } else {
    b["status"] = "not-applicable";
    b["reason"] = "S != {0} is not certifiably symplectic";
    return b;
  }
  b["pass"] = pass;
  b["status"] = status_of(pass);
  return b;
}

ojson heat_block(const Context& ctx, RunResult& res) {
  const QuadraticSymbol& q = ctx.doc.symbol;
  const auto& ss = ctx.ss;
  const int N = effective_degree(ctx.opts.heat_N, q.n(), ctx.opts.n_max);
  const bool imaginary = q.re().norm() == 0.0;
  const QuadraticSymbol& evolved = ctx.block ? *ctx.block : q;
  const int np = ctx.block ? ctx.split->n_primed() : q.n();

  const HeatDecayReport r = heat_decay(evolved, ctx.opts.heat_t, N, ctx.opts.seed, np);
  ojson b;
  b["t"] = r.t;
  b["N"] = r.N;
  b["seed"] = r.seed;
  b["cut_degree"] = r.cut_degree;
  b["total_mass"] = r.total_mass;
  b["high_degree_mass"] = r.high_degree_mass;
  b["high_degree_fraction"] = r.high_degree_fraction;
  b["by_degree"] = r.by_degree;
  b["by_primed_degree"] = r.by_primed;
  b["by_unprimed_degree"] = r.by_unprimed;
  if (ctx.block) b["presentation"] = "symplectic block form, primed variables first";

  for (double t : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    const HeatDecayReport rt = heat_decay(evolved, t, N, ctx.opts.seed, np);
    res.series["heat"].push_back({"high_degree_mass", t, rt.high_degree_mass});
    res.series["heat"].push_back({"total_mass", t, rt.total_mass});
  }

  if (imaginary) {
    const double dev = std::abs(r.total_mass - 1.0);
    b["check"] = "mass conservation (skew-adjoint generator)";
    b["deviation"] = dev;
    b["tolerance"] = 1e-10;
    b["pass"] = dev <= 1e-10;
  } else if (ss.dim_S == 0) {
    b["check"] = "high-degree mass after smoothing";
    b["tolerance"] = 1e-6;
    b["pass"] = r.high_degree_mass <= 1e-6;
  } else {
    b["check"] = "informational";
    b["pass"] = true;
    b["status"] = "informational";
    return b;
  }
  b["status"] = status_of(b["pass"].get<bool>());
  return b;
}

ojson witness_json(const Vec& X) { return to_json(X); }

ojson weight_block(const Context& ctx, RunResult& res) {
  const QuadraticSymbol& q = ctx.doc.symbol;
  const auto& ss = ctx.ss;
  ShellSpec shells = ShellSpec::geometric(ctx.opts.shell_lo, ctx.opts.shell_hi);
  shells.seed = ctx.opts.seed;
  ojson b;
  b["shells"] = shells.radii;
  b["sphere_samples"] = shells.sphere_samples;
  b["kernel_samples"] = shells.kernel_samples;
  b["seed"] = shells.seed;
  b["note"] = "certified on samples";

  if (ss.dim_S == 0 && ss.k0 && *ss.k0 >= 2) {
    const MultiplierCheck r = check_multiplier_inequality(q, WeightParams::unit(*ss.k0), shells);
    b["check"] = "multiplier inequality, m = k0";
    b["m"] = *ss.k0;
    b["c"] = r.c;
    b["eps"] = r.eps;
    b["Lambda"] = r.params.Lambda;
    b["alpha"] = r.params.alpha;
    b["evaluations"] = r.evaluations;
    b["margin"] = r.margin;
    b["tolerance"] = 0.0;
    b["worst_point"] = witness_json(r.worst_point);
    for (const auto& [R, m] : r.margin_by_shell) res.series["weight"].push_back({"margin", R, m});
    b["pass"] = r.pass;
    b["status"] = status_of(r.pass);
    return b;
  }

  const M1Certificate cert = certify_m1(q, shells, default_c1_grid());
  b["check"] = "m = 1 weight certification";
  b["trivial_weight"] = cert.trivial_weight;
  b["c1"] = cert.c1;
  b["c2"] = cert.c2;
  b["gain"] = cert.gain;
  b["gain_floor"] = cert.gain_floor;
  b["gain_from_radius"] = cert.outer_radius;
  b["samples"] = cert.sample_count;
  ojson w = ojson::array();
  for (const auto& wt : cert.witnesses) {
    w.push_back(ojson{{"X", witness_json(wt.X)}, {"radius", wt.radius}, {"ratio", wt.ratio}, {"gain", wt.gain}});
  }
  b["witnesses"] = w;
  for (const auto& [R, m] : cert.ratio_by_shell) res.series["weight"].push_back({"min_ratio", R, m});
  b["pass"] = cert.pass;
  b["status"] = status_of(cert.pass);
  return b;
}

ojson wick_block(const Context& ctx, RunResult& res) {
  const QuadraticSymbol& q = ctx.doc.symbol;
  const int n = q.n();
  const Polynomial a = Polynomial::from_quadratic(q.real_part());
  const Polynomial p = Polynomial::from_quadratic(q);
  ojson b;
  bool pass = true;

  const int N = effective_degree(ctx.opts.wick_N, n, ctx.opts.n_max);
  {
    const CMat S = CMat(wick_matrix(a, N).square());
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const bool ok = lmin >= -1e-10;
    b["positivity"] = ojson{{"symbol", "Re q"}, {"N", N}, {"lambda_min", lmin}, {"tolerance", -1e-10}, {"status", status_of(ok)}};
    pass = pass && ok;
  }
  {
    const Polynomial diff = gaussian_convolve_poly(p) - p;
    const cplx expected = q.matrix().trace() / (4.0 * std::numbers::pi);
    double err = std::abs(diff.coefficient(Polynomial::Exponent(2 * n, 0)) - expected);
    for (const auto& [e, c] : diff.terms()) {
      if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; })) err = std::max(err, std::abs(c));
    }
    const bool ok = err <= 1e-12;
    b["gaussian_convolution"] = ojson{{"identity", "q~ = q + tr(Q)/(4 pi)"}, {"max_error", err}, {"tolerance", 1e-12}, {"status", status_of(ok)}};
    pass = pass && ok;
  }
  {
    const CMat S = CMat(wick_matrix(Polynomial::constant(n, 1.0), N).square());
    const double err = (S - CMat::Identity(S.rows(), S.cols())).cwiseAbs().maxCoeff();
    const bool ok = err <= 1e-12;
    b["reconstruction"] = ojson{{"identity", "1^Wick = Id"}, {"max_error", err}, {"tolerance", 1e-12}, {"status", status_of(ok)}};
    pass = pass && ok;
  }
  {
    const Polynomial bb = Polynomial::from_quadratic(q.imag_part());
    const std::vector<int> Ns = effective_truncations(ctx.opts.wick_trunc, n, ctx.opts.n_max);
    ojson vals = ojson::array();
    std::vector<double> r;
    for (int Nk : Ns) {
      r.push_back(wick_composition_residual(a, bb, Nk));
      vals.push_back(ojson{{"N", Nk}, {"residual", r.back()}});
      res.series["wick"].push_back({"composition_residual", static_cast<double>(Nk), r.back()});
    }
    const double floor = 1e-9 * std::max(1.0, q.norm() * q.norm());
    const double ratio = r.size() >= 2 ? std::max(r.back(), floor) / std::max(r.front(), floor) : 1.0;
    const bool ok = ratio <= 1.3;
    b["composition"] = ojson{{"pair", "(Re q, Im q)"}, {"values", vals}, {"growth_ratio", ratio},
                             {"absolute_floor", floor}, {"threshold_max_ratio", 1.3}, {"status", status_of(ok)}};
    pass = pass && ok;
  }
  b["pass"] = pass;
  b["status"] = status_of(pass);
  return b;
}

bool block_failed(const ojson& b) {
  if (!b.contains("status")) return false;
  const std::string s = b["status"].get<std::string>();
  return s == "fail" || s == "error";
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"analyze", "subelliptic-verify", "heat-check", "weight-check", "wick-check", "all"};
  return s;
}

std::pair<double, double> parse_shells(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 || parts[2] != "geometric") {
    throw InputError("--shells: expected lo:hi:geometric, got '" + text + "'");
  }
  try {
    const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
    if (!(lo > 0.0) || !(hi >= lo)) throw InputError("--shells: need 0 < lo <= hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("--shells: bad number in '" + text + "'");
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw InputError("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError("--trunc: bad entry '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("--trunc: empty list");
  return out;
}

RunResult run(const SymbolDocument& doc, const RunOptions& opts) {
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), opts.subcommand) == subs.end()) {
    throw InputError("unknown subcommand '" + opts.subcommand + "'");
  }
  if (!(opts.tol > 0.0) || opts.tol > 1e-2) throw InputError("--tol must lie in (0, 1e-2]");
  if (opts.k0_samples < 1) throw InputError("sample count must be >= 1");

  RunResult res;
  ojson& rep = res.report;
  rep["subcommand"] = opts.subcommand;
  rep["input"] = ojson{{"label", doc.label},
                       {"n", doc.n},
                       {"Q_re", to_json(doc.symbol.re())},
                       {"Q_im", to_json(doc.symbol.im())},
                       {"polynomial", doc.polynomial ? ojson(*doc.polynomial) : ojson(nullptr)}};
  rep["accretivity"] = ojson{{"min_eigenvalue_Re_Q", doc.sign.min_eigenvalue},
                             {"tolerance", doc.sign.tolerance},
                             {"status", sign_status(doc.sign.status)}};
  rep["warnings"] = doc.warnings;
  rep["options"] = ojson{{"tol", opts.tol},
                         {"seed", opts.seed},
                         {"n_max", opts.n_max},
                         {"trunc", opts.trunc},
                         {"shells", ojson{{"lo", opts.shell_lo}, {"hi", opts.shell_hi}, {"spacing", "geometric"}}},
                         {"k0_samples", opts.k0_samples},
                         {"heat_t", opts.heat_t},
                         {"heat_N", opts.heat_N},
                         {"wick_N", opts.wick_N},
                         {"wick_trunc", opts.wick_trunc}};

  const Context ctx = make_context(doc, opts);
  using Block = std::function<ojson(const Context&, RunResult&)>;
  const std::vector<std::pair<std::string, Block>> all{{"analyze", analyze_block},
                                                       {"subelliptic-verify", subelliptic_block},
                                                       {"heat-check", heat_block},
                                                       {"weight-check", weight_block},
                                                       {"wick-check", wick_block}};
  bool failed = false;
  for (const auto& [name, fn] : all) {
    if (opts.subcommand != "all" && opts.subcommand != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    ojson b;
    try {
      b = fn(ctx, res);
    } catch (const PreconditionError& e) {
      b = ojson{{"status", "not-applicable"}, {"reason", e.what()}};
    } catch (const NumericError& e) {
      b = ojson{{"status", "error"}, {"reason", e.what()}};
    }
    if (opts.timings) {
      b["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    failed = failed || block_failed(b);
    rep["checks"][name] = b;
  }
  rep["all_pass"] = !failed;
  res.exit_code = failed ? 2 : 0;
  return res;
}

void write_series(const std::string& dir, const std::map<std::string, std::vector<CsvRow>>& series) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("--csv: cannot create directory '" + dir + "'");
  for (const auto& [stem, rows] : series) {
    const std::string path = (std::filesystem::path(dir) / (stem + ".csv")).string();
    std::ofstream out(path);
    if (!out) throw InputError("--csv: cannot write '" + path + "'");
    out.precision(17);
    out << "key,x,value\n";
    for (const auto& r : rows) out << r.key << "," << r.x << "," << r.value << "\n";
  }
}

}  // namespace quadsym
