#include "quadsym/weight.hpp"

#include "quadsym/sampling.hpp"
#include "quadsym/singular_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadsym {

namespace {

Mat matrix_power(const Mat& A, int k) {
  Mat P = Mat::Identity(A.rows(), A.cols());
  for (int i = 0; i < k; ++i) P = A * P;
  return P;
}

// Re q((ImF)^a X; (ImF)^b X) as the symmetric matrix of a quadratic form in X.
Mat form_matrix(const Mat& re_q, const Mat& im_f, int a, int b) {
  const Mat M = matrix_power(im_f, a).transpose() * re_q * matrix_power(im_f, b);
  return 0.5 * (M + M.transpose());
}

// Orbit of X and of a tangent direction v under ImF.
struct DualOrbit {
  std::vector<Vec> y, dy;
};

DualOrbit dual_orbit(const Mat& im_f, const Vec& X, const Vec& v, int L) {
  DualOrbit o;
  o.y.push_back(X);
  o.dy.push_back(v);
  for (int l = 1; l <= L; ++l) {
    o.y.push_back(im_f * o.y.back());
    o.dy.push_back(im_f * o.dy.back());
  }
  return o;
}

Dual dual_form(const Mat& re_q, const DualOrbit& o, int a, int b) {
  return {o.y[a].dot(re_q * o.y[b]), o.dy[a].dot(re_q * o.y[b]) + o.y[a].dot(re_q * o.dy[b])};
}

struct DualComponents {
  Dual W0;
  std::vector<Dual> Psi, W, p_j;
  Dual p;
};

// Literal evaluation of the component formulas along X + t v, gated so that a
// factor is only formed where the preceding gate is non-zero.
DualComponents evaluate_components(const Mat& re_q, const Mat& im_f, const WeightParams& params,
                                   const Vec& X, const Vec& v) {
  const int m = params.m;
  const DualOrbit o = dual_orbit(im_f, X, v, m);
  std::vector<Dual> D(m);
  for (int k = 0; k < m; ++k) D[k] = dual_form(re_q, o, k, k);
  auto r = [&](int k) { return dual_form(re_q, o, k - 1, k); };

  const Dual bracket = sqrt(Dual(1.0 + X.squaredNorm(), 2.0 * X.dot(v)));
  const double beta = 2.0 * (2 * m - 1) / (2.0 * m + 1);

  DualComponents c;
  c.Psi.assign(m - 1, Dual());
  c.W.assign(m - 1, Dual());
  c.p_j.assign(m - 1, Dual());
  c.W0 = cutoff(CutoffKind::w, params.cutoffs, D[m - 1] / pow(bracket, beta));
  if (c.W0.v == 0.0) return c;

  Dual gate = c.W0;
  for (int j = 0; j <= m - 2; ++j) {
    const Dual& den = D[m - j - 1];
    if (!(den.v > params.denominator_tol)) {
      throw NumericError("multiplier_components: Re q((ImF)^" + std::to_string(m - j - 1) +
                         " X) = " + std::to_string(den.v) + " vanishes inside the support of the gate");
    }
    const double e = (2.0 * m - 2 * j - 3) / (2.0 * m - 2 * j - 1);
    const Dual arg = params.Lambda[j] * D[m - j - 2] / pow(den, e);
    c.Psi[j] = cutoff(CutoffKind::psi, params.cutoffs, arg);
    const double e_p = (2.0 * m - 2 * j - 2) / (2.0 * m - 2 * j - 1);
    c.p_j[j] = gate * c.Psi[j] * r(m - j - 1) / pow(den, e_p);
    c.W[j] = cutoff(CutoffKind::w2, params.cutoffs, arg);
    gate = gate * c.W[j];
    if (gate.v == 0.0) break;
  }
  for (int j = 0; j <= m - 2; ++j) {
    const double weight = j == 0 ? 1.0 : params.alpha[j - 1];
    c.p = c.p + weight * c.p_j[j];
  }
  return c;
}

}  // namespace

double japanese_bracket(const Vec& X) { return std::sqrt(1.0 + X.squaredNorm()); }

double r_k(const QuadraticSymbol& q, int k, const Vec& X) {
  if (k < 1) throw InputError("r_k: k must be >= 1");
  if (X.size() != q.dim()) throw InputError("r_k: dimension mismatch");
  const Mat im_f = hamilton_map(q).im();
  const Vec a = matrix_power(im_f, k - 1) * X;
  return a.dot(q.re() * (im_f * a));
}

ValueGrad g_m(const QuadraticSymbol& q, int m, const Vec& X, const CutoffSpec& spec) {
  if (m < 1) throw InputError("g_m: m must be >= 1");
  if (X.size() != q.dim()) throw InputError("g_m: dimension mismatch");
  const Mat re_q = q.re();
  const Mat im_f = hamilton_map(q).im();
  const Mat P = form_matrix(re_q, im_f, m - 1, m - 1);
  const Mat G = form_matrix(re_q, im_f, m - 1, m);

  const double beta = 2.0 * (2 * m - 1) / (2.0 * m + 1);
  const double gamma = 4.0 * m / (2.0 * m + 1);
  const double jb = japanese_bracket(X);
  const Vec PX = P * X, GX = G * X;
  const double u = X.dot(PX);
  const double r = X.dot(GX);

  const double arg = u * std::pow(jb, -beta);
  const Vec grad_arg = 2.0 * PX * std::pow(jb, -beta) - beta * u * std::pow(jb, -beta - 2.0) * X;
  const auto psi = cutoff(CutoffKind::psi, spec, arg);
  const double wg = std::pow(jb, -gamma);

  ValueGrad out;
  out.value = psi.value * wg * r;
  out.grad = psi.derivative * wg * r * grad_arg - psi.value * gamma * std::pow(jb, -gamma - 2.0) * r * X +
             psi.value * wg * 2.0 * GX;
  return out;
}

ScalarField g_field(const QuadraticSymbol& q, int m, const CutoffSpec& spec) {
  return [q, m, spec](const Vec& X) { return g_m(q, m, X, spec); };
}

double H_applied(const QuadraticSymbol& q, const ScalarField& f, const Vec& X) {
  if (X.size() != q.dim()) throw InputError("H_applied: dimension mismatch");
  const ValueGrad fx = f(X);
  return fx.grad.dot(2.0 * (hamilton_map(q).im() * X));
}

WeightParams WeightParams::unit(int m) {
  WeightParams p;
  p.m = m;
  p.Lambda.assign(std::max(m - 1, 0), 1.0);
  p.alpha.assign(std::max(m - 2, 0), 1.0);
  return p;
}

void WeightParams::validate() const {
  if (m < 1) throw InputError("weight params: m must be >= 1");
  if (static_cast<int>(Lambda.size()) != std::max(m - 1, 0) ||
      static_cast<int>(alpha.size()) != std::max(m - 2, 0)) {
    throw InputError("weight params: expected m-1 Lambda and m-2 alpha values");
  }
  for (double l : Lambda) {
    if (!(l >= 1.0)) throw InputError("weight params: Lambda_j must be >= 1");
  }
  for (double a : alpha) {
    if (!(a >= 1.0)) throw InputError("weight params: alpha_j must be >= 1");
  }
  cutoffs.validate();
}

MultiplierComponents multiplier_components(const QuadraticSymbol& q, const WeightParams& params,
                                           const Vec& X) {
  params.validate();
  if (X.size() != q.dim()) throw InputError("multiplier_components: dimension mismatch");
  const Mat im_f = hamilton_map(q).im();
  const DualComponents d = evaluate_components(q.re(), im_f, params, X, 2.0 * (im_f * X));
  MultiplierComponents out;
  out.W0 = d.W0.v;
  out.H_W0 = d.W0.d;
  for (const auto& x : d.Psi) out.Psi.push_back(x.v);
  for (const auto& x : d.W) out.W.push_back(x.v);
  for (const auto& x : d.p_j) out.p_j.push_back(x.v);
  out.p = d.p.v;
  out.H_p = d.p.d;
  return out;
}

ScalarField multiplier_field(const QuadraticSymbol& q, const WeightParams& params) {
  params.validate();
  const Mat re_q = q.re();
  const Mat im_f = hamilton_map(q).im();
  return [re_q, im_f, params](const Vec& X) {
    ValueGrad out;
    out.grad = Vec::Zero(X.size());
    for (Eigen::Index i = 0; i < X.size(); ++i) {
      const DualComponents d = evaluate_components(re_q, im_f, params, X, Vec::Unit(X.size(), i));
      out.value = d.p.v;
      out.grad(i) = d.p.d;
    }
    if (X.size() == 0) out.value = 0.0;
    return out;
  };
}

ShellSpec ShellSpec::geometric(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw InputError("shells: need 0 < lo <= hi");
  ShellSpec s;
  for (double r = lo; r <= hi * (1.0 + 1e-12); r *= 2.0) s.radii.push_back(r);
  return s;
}

std::vector<ShellPoint> shell_points(const QuadraticSymbol& q, const ShellSpec& shells) {
  if (shells.radii.empty()) throw InputError("shell_points: no radii");
  const int dim = q.dim();
  const Mat ker = kernel(q.re(), 1e-10);
  const bool has_kernel = ker.cols() > 0 && ker.cols() < dim;
  Mat complement;
  if (has_kernel) {
    Eigen::JacobiSVD<Mat> svd(ker, Eigen::ComputeFullU);
    complement = svd.matrixU().rightCols(dim - ker.cols());
  }
  const double eps_list[] = {0.5, 1.0, 2.0, 4.0};

  SphereSampler sampler(shells.seed);
  std::vector<ShellPoint> out;
  for (double R : shells.radii) {
    if (!(R > 0.0)) throw InputError("shell_points: radii must be positive");
    for (int i = 0; i < dim; ++i) {
      out.push_back({R * Vec::Unit(dim, i), R});
      out.push_back({-R * Vec::Unit(dim, i), R});
    }
    for (int s = 0; s < shells.sphere_samples; ++s) out.push_back({R * sampler.unit(dim), R});
    if (ker.cols() > 0) {
      for (int s = 0; s < shells.kernel_samples; ++s) out.push_back({R * sampler.unit_in(ker), R});
    }
    if (has_kernel) {
      for (double eps : eps_list) {
        const double theta = eps * std::pow(R, -shells.near_exponent);
        for (int s = 0; s < shells.kernel_samples; ++s) {
          const Vec k = sampler.unit_in(ker);
          const Vec u = sampler.unit_in(complement);
          out.push_back({R * (std::cos(theta) * k + std::sin(theta) * u), R});
        }
      }
    }
  }
  return out;
}

std::vector<double> default_c1_grid() {
  std::vector<double> g;
  for (int e = -16; e <= 8; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

M1Certificate certify_m1(const QuadraticSymbol& q, const ShellSpec& shells,
                         const std::vector<double>& c1_grid) {
  if (c1_grid.empty()) throw InputError("certify_m1: empty c1 grid");
  const SingularSpaceReport ss = singular_space(q);
  if (ss.dim_S == 0 && ss.k0 && *ss.k0 >= 2) {
    throw PreconditionError("certify_m1: k0 = " + std::to_string(*ss.k0) + " (the m = 1 construction needs k0 <= 1)");
  }
  M1Certificate cert;
  cert.trivial_weight = ss.k0 && *ss.k0 == 0;

  ShellSpec spec = shells;
  spec.near_exponent = 2.0 / 3.0;
  const std::vector<ShellPoint> pts = shell_points(q, spec);
  cert.sample_count = static_cast<int>(pts.size());

  const ScalarField g1 = g_field(q, 1);
  const Mat re_q = q.re();
  const auto [r_min, r_max] = std::minmax_element(spec.radii.begin(), spec.radii.end());
  cert.outer_radius = std::sqrt(*r_min * *r_max);
  cert.gain_floor = 1e-12 * q.norm() * std::pow(*r_max, 4.0 / 3.0);
  std::vector<double> req(pts.size()), hg(pts.size()), w(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec& X = pts[i].X;
    req[i] = X.dot(re_q * X);
    hg[i] = cert.trivial_weight ? 0.0 : H_applied(q, g1, X);
    w[i] = std::pow(japanese_bracket(X), 2.0 / 3.0);
  }
  auto outer = [&](std::size_t i) { return pts[i].radius >= cert.outer_radius * (1.0 - 1e-12); };
  auto ratio = [&](double c1, std::size_t i) { return (req[i] + c1 * hg[i] + 1.0) / w[i]; };
  auto gain = [&](double c1, std::size_t i) { return (req[i] + c1 * hg[i]) / w[i]; };
  auto constants = [&](double c1) {
    double c2 = std::numeric_limits<double>::infinity(), g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      c2 = std::min(c2, ratio(c1, i));
      if (outer(i)) g = std::min(g, gain(c1, i));
    }
    return std::pair{c2, g};
  };

  bool have = false;
  for (double c1 : (cert.trivial_weight ? std::vector<double>{0.0} : c1_grid)) {
    const auto [c2, g] = constants(c1);
    const bool feasible = c2 > 0.0;
    const bool best_feasible = have && cert.c2 > 0.0;
    // Prefer feasible c1; among those the largest gain, otherwise the largest c2.
    const bool better = !have || (feasible && !best_feasible) ||
                        (feasible && best_feasible && g > cert.gain) ||
                        (!feasible && !best_feasible && c2 > cert.c2);
    if (better) {
      cert.c1 = c1;
      cert.c2 = c2;
      cert.gain = g;
      have = true;
    }
  }
  cert.pass = cert.c2 > 0.0 && cert.gain > cert.gain_floor;

  for (double R : spec.radii) {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].radius == R) mn = std::min(mn, ratio(cert.c1, i));
    }
    cert.ratio_by_shell.emplace_back(R, mn);
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (ratio(cert.c1, i) <= 0.0 || (outer(i) && gain(cert.c1, i) <= cert.gain_floor)) bad.push_back(i);
  }
  std::stable_sort(bad.begin(), bad.end(), [&](std::size_t a, std::size_t b) { return gain(cert.c1, a) < gain(cert.c1, b); });
  for (std::size_t k = 0; k < bad.size() && cert.witnesses.size() < 16; ++k) {
    const Vec& X = pts[bad[k]].X;
    const bool seen = std::any_of(cert.witnesses.begin(), cert.witnesses.end(), [&](const Witness& wt) {
      return (wt.X - X).norm() <= 1e-9 * X.norm();
    });
    if (!seen) cert.witnesses.push_back({X, pts[bad[k]].radius, ratio(cert.c1, bad[k]), gain(cert.c1, bad[k])});
  }
  return cert;
}

MultiplierCheck check_multiplier_inequality(const QuadraticSymbol& q, const WeightParams& start, const ShellSpec& shells,
                          double c, double eps, bool auto_double, double cap) {
  const SingularSpaceReport ss = singular_space(q);
  if (ss.dim_S != 0 || !ss.k0 || *ss.k0 < 2) {
    throw PreconditionError("check_multiplier_inequality: needs S = {0} and k0 >= 2");
  }
  const int m = *ss.k0;
  WeightParams params = start;
  if (params.m != m) params = WeightParams::unit(m);
  params.cutoffs = start.cutoffs;
  params.denominator_tol = start.denominator_tol;
  params.validate();
  if (!(c > 0.0) || !(eps > 0.0)) throw InputError("check_multiplier_inequality: c and eps must be positive");

  ShellSpec spec = shells;
  spec.near_exponent = 2.0 * m / (2.0 * m + 1);
  const std::vector<ShellPoint> pts = shell_points(q, spec);
  const double kappa = 2.0 / (2.0 * m + 1);
  const Mat re_q = q.re();

  MultiplierCheck res;
  res.c = c;
  res.eps = eps;

  auto evaluate_margin = [&](const WeightParams& p, MultiplierCheck& out) {
    out.margin = std::numeric_limits<double>::infinity();
    out.margin_by_shell.clear();
    for (double R : spec.radii) out.margin_by_shell.emplace_back(R, std::numeric_limits<double>::infinity());
    for (const auto& pt : pts) {
      const MultiplierComponents mc = multiplier_components(q, p, pt.X);
      const double wk = std::pow(japanese_bracket(pt.X), kappa);
      const double val = (c * pt.X.dot(re_q * pt.X) + mc.H_p + eps * wk - mc.W0 * wk) / wk;
      for (auto& [R, mn] : out.margin_by_shell) {
        if (R == pt.radius) mn = std::min(mn, val);
      }
      if (val < out.margin) {
        out.margin = val;
        out.worst_point = pt.X;
      }
    }
    ++out.evaluations;
    out.params = p;
    out.pass = out.margin > 0.0;
  };

  evaluate_margin(params, res);
  if (res.pass || !auto_double) return res;

  // Lambda_0, alpha_1, Lambda_1, alpha_2, ..., alpha_{m-2}, Lambda_{m-2}.
  std::vector<double*> order;
  for (int j = 0; j <= m - 2; ++j) {
    if (j >= 1) order.push_back(&params.alpha[j - 1]);
    order.push_back(&params.Lambda[j]);
  }
  for (double* value : order) {
    while (!res.pass && *value * 2.0 <= cap) {
      *value *= 2.0;
      evaluate_margin(params, res);
    }
    if (res.pass) break;
  }
  return res;
}

}  // namespace quadsym
