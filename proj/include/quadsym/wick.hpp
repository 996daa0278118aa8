#pragma once

// Wick (anti-Wick) quantization through its Weyl symbol, the Lerner/standard
// normalization change, the composition remainder and wave-packet overlaps.

#include "quadsym/quantization.hpp"

namespace quadsym {

/// a~(X) = int a(X+Y) e^{-2 pi |Y|^2} 2^n dY, exact through Gaussian moments
/// (variance 1/(4 pi) in each of the 2n coordinates).
Polynomial gaussian_convolve_poly(const Polynomial& a);

/// Weyl symbol in the standard normalization of the operator whose Lerner-normalized
/// Weyl symbol is a: a(x, xi / 2 pi).
Polynomial lerner_to_standard(const Polynomial& a);
/// Inverse of lerner_to_standard: a(x, 2 pi xi).
Polynomial standard_to_lerner(const Polynomial& a);

/// a^Wick = (a~)^w in the Lerner normalization, returned as a lerner-tagged operator.
TruncatedOperator wick_matrix(const Polynomial& a, int N);

/// Norm of a^Wick b^Wick - [ab - a'.b'/(4 pi) + {a,b}/(4 i pi)]^Wick restricted to
/// degree-<= N inputs. The products are assembled on rectangular blocks, so no
/// truncation edge enters the value.
double wick_composition_residual(const Polynomial& a, const Polynomial& b, int N);

/// The bracketed symbol of the composition formula.
Polynomial wick_composition_symbol(const Polynomial& a, const Polynomial& b);

/// (h_alpha, phi_Y) with phi_{y,eta}(x) = 2^{n/4} e^{-pi (x-y)^2} e^{2 i pi (x-y).eta},
/// Y = (y, eta), h_alpha the normalized Hermite functions of -d^2 + x^2.
cplx wavepacket_overlap(const MultiIndex& alpha, const Vec& Y);

/// Wu(Y) = (u, phi_Y) for u = sum_alpha c_alpha h_alpha.
cplx wave_packet_transform(const CVec& coefficients, const HermiteTruncation& t, const Vec& Y);

}  // namespace quadsym
