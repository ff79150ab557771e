#pragma once

#include "gheat/exec.hpp"

#include <span>

namespace gheat {

/// G(a) = (a^+ - sigma^2 a^-) / 2.
inline double g_operator(double a, double sigma2) { return a > 0.0 ? 0.5 * a : 0.5 * sigma2 * a; }

/// One explicit step of u_t = G(u_xx) on the interior nodes:
///   out[i] = u[i] + r G(u[i+1] - 2 u[i] + u[i-1]),   r = dt / dx^2.
/// The end nodes are copied unchanged. Monotone for r <= 1; the serial and
/// parallel paths produce bitwise identical output.
void gheat_step(std::span<const double> u, std::span<double> out, double sigma2, double r, Exec exec);

}  // namespace gheat
