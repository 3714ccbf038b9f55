#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcmf/common.hpp"

namespace pcmf {

/// Penalty norm for the fusion term.
enum class Norm { L1, L2, Linf };

Norm norm_from_string(const std::string& s);  // "1" | "2" | "inf"
std::string to_string(Norm q);

/// Euclidean projection onto the l1 ball of the given radius (exact
/// sort-based algorithm).
Vector project_l1_ball(const Vector& v, double radius);

/// argmin_z 1/2 ||z - v||^2 + tau ||z||_q for q in {1, 2, inf}.
/// tau = 0 returns v unchanged.
Vector prox_group(const Vector& v, Norm q, double tau);

/// In-place row-wise prox over a stacked difference matrix; tau varies per
/// row (lambda * w_l / rho for edge l).
void prox_rows(Matrix& g, Norm q, const std::vector<double>& tau);

/// Threshold below which a direction is considered degenerate.
inline constexpr double kSphereTol = 1e-12;

/// v / ||v||; nullopt when ||v|| < kSphereTol (caller keeps its previous
/// iterate).
std::optional<Vector> project_sphere(const Vector& v);

}  // namespace pcmf
