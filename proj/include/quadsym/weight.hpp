#pragma once

// Weight-function ingredients g_m, Psi_j, W_j, W0~, p_j and sampled
// certification of the resulting multiplier inequalities.

#include "quadsym/cutoff.hpp"
#include "quadsym/symplectic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace quadsym {

struct ValueGrad {
  double value = 0.0;
  Vec grad;
};

using ScalarField = std::function<ValueGrad(const Vec&)>;

/// <X> = sqrt(1 + |X|^2).
double japanese_bracket(const Vec& X);

/// Re q((ImF)^{k-1} X; (ImF)^k X), k >= 1.
double r_k(const QuadraticSymbol& q, int k, const Vec& X);

/// psi(Re q((ImF)^{m-1}X) <X>^{-2(2m-1)/(2m+1)}) <X>^{-4m/(2m+1)} r_m(X) with its gradient.
ValueGrad g_m(const QuadraticSymbol& q, int m, const Vec& X, const CutoffSpec& spec = {});

/// g_m as a field, for use with H_applied.
ScalarField g_field(const QuadraticSymbol& q, int m, const CutoffSpec& spec = {});

/// <grad f(X), 2 ImF X>.
double H_applied(const QuadraticSymbol& q, const ScalarField& f, const Vec& X);

struct WeightParams {
  int m = 2;
  std::vector<double> Lambda;  // Lambda_0 .. Lambda_{m-2}
  std::vector<double> alpha;   // alpha_1 .. alpha_{m-2}, stored from index 0
  CutoffSpec cutoffs;
  double denominator_tol = 1e-12;

  /// All Lambda_j = alpha_j = 1.
  static WeightParams unit(int m);
  void validate() const;
};

/// Components at one point, plus their Hamilton derivatives along H_{Im q}.
/// Entries off the support of the gate W0~ (W0~ prod W_l) are exactly 0.
struct MultiplierComponents {
  double W0 = 0.0;          // W0~
  std::vector<double> Psi;  // Psi_0 .. Psi_{m-2}
  std::vector<double> W;    // W_1 .. W_{m-1}, stored from index 0
  std::vector<double> p_j;  // p_0 .. p_{m-2}
  double p = 0.0;
  double H_p = 0.0;         // H_{Im q} p(X)
  double H_W0 = 0.0;
};

/// Throws NumericError when a denominator is below denominator_tol inside its gate.
MultiplierComponents multiplier_components(const QuadraticSymbol& q, const WeightParams& params,
                                           const Vec& X);

/// p with its gradient (2n directional evaluations).
ScalarField multiplier_field(const QuadraticSymbol& q, const WeightParams& params);

/// Sample points for the certification checks: for each radius, the signed
/// coordinate axes, seeded sphere samples, seeded samples on the unit sphere of
/// Ker Re Q, and points leaving that kernel at angle eps * R^{-near_exponent}.
struct ShellSpec {
  std::vector<double> radii;
  int sphere_samples = 64;
  int kernel_samples = 16;
  std::uint64_t seed = 1;
  double near_exponent = 2.0 / 3.0;

  /// 1, 2, 4, ..., hi (geometric doubling from lo).
  static ShellSpec geometric(double lo = 1.0, double hi = 1024.0);
};

struct ShellPoint {
  Vec X;
  double radius = 0.0;
};

std::vector<ShellPoint> shell_points(const QuadraticSymbol& q, const ShellSpec& shells);

/// 2^-8, 2^-7, ..., 2^8.
std::vector<double> default_c1_grid();

struct Witness {
  Vec X;
  double radius = 0.0;
  double ratio = 0.0;  // (Re q + c1 H g1 + 1) / <X>^{2/3}
  double gain = 0.0;   // (Re q + c1 H g1) / <X>^{2/3}
};

struct M1Certificate {
  bool pass = false;
  bool trivial_weight = false;  // k0 = 0: g1 = 0
  double c1 = 0.0;
  double c2 = 0.0;              // min ratio at the chosen c1, over all shells
  double gain = 0.0;            // min gain at the chosen c1, over the outer shells
  double gain_floor = 0.0;      // rounding scale below which the gain counts as zero
  double outer_radius = 0.0;    // shells with R >= this enter the gain
  int sample_count = 0;
  std::vector<std::pair<double, double>> ratio_by_shell;  // (radius, min ratio)
  std::vector<Witness> witnesses;                          // at most 16, worst gain first
};

/// Searches c1 on the grid so that Re q + c1 H_{Im q} g1 + 1 >= c2 <X>^{2/3} on all
/// samples with c2 > 0, and reports the largest such c2. The additive 1 alone gives
/// a positive c2 for any symbol, so the certificate also requires the gain
/// (Re q + c1 H g1) / <X>^{2/3} to stay above a rounding floor, 1e-12 ||Q|| R_max^{4/3},
/// on the outer shells (R >= sqrt(R_min R_max)). Among feasible c1 the one with the
/// largest gain is kept. Symbols with S = {0} and k0 >= 2 are rejected; symbols with
/// S != {0} are run (and are expected to fail).
M1Certificate certify_m1(const QuadraticSymbol& q, const ShellSpec& shells,
                         const std::vector<double>& c1_grid);

struct MultiplierCheck {
  bool pass = false;
  double margin = 0.0;  // min over samples of [c Re q + H p + eps <X>^k - W0~ <X>^k] / <X>^k
  WeightParams params;
  double c = 0.0;
  double eps = 0.0;
  int evaluations = 0;
  Vec worst_point;
  std::vector<std::pair<double, double>> margin_by_shell;
};

/// Sampled check of c Re q + H p + eps <X>^{2/(2m+1)} >= W0~ <X>^{2/(2m+1)} with m = k0.
/// With auto_double the parameters are doubled in the order Lambda_0, alpha_1,
/// Lambda_1, ..., Lambda_{m-2} until the margin is positive or each hits cap.
MultiplierCheck check_multiplier_inequality(const QuadraticSymbol& q, const WeightParams& start, const ShellSpec& shells,
                          double c = 1024.0, double eps = 0.5, bool auto_double = true,
                          double cap = 1048576.0);

}  // namespace quadsym
