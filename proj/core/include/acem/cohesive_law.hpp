/**
 * @file cohesive_law.hpp
 * @brief Exponential mixed-mode traction-separation law with secant unloading.
 *
 *   T_eq = (f_t / zeta_0) zeta_eq                                  loading, zeta_eq <= zeta_0
 *   T_eq = f_t exp[-f_t (zeta_eq - zeta_0) / (G_f - G_f0)]         loading, zeta_eq >  zeta_0
 *   T_eq = (T_mx / zeta_mx) zeta_eq                                unloading / reloading
 *
 * with G_f0 = 0.01 G_f and zeta_0 = 2 G_f0 / f_t. Components follow the
 * opening direction: T_n = T_eq zeta_n / zeta_eq, T_t = T_eq zeta_t / zeta_eq.
 */
#pragma once

#include <Eigen/Core>

namespace acem {

struct Material {
  double E = 0.0;
  double nu = 0.0;
  double ft = 0.0;  ///< uniaxial tensile strength; +inf disables cracking
  double Gf = 0.0;  ///< fracture energy per unit crack area

  double Gf0() const { return 0.01 * Gf; }
  double zeta0() const { return 2.0 * Gf0() / ft; }
  bool can_crack() const;
  /// Throws ConfigError when a material invariant is violated.
  void validate() const;
};

/// Largest equivalent opening reached at the end of a load step. Empty
/// (zeta_mx == 0) until an opening beyond zeta_0 has been recorded.
struct CrackHistory {
  double zeta_mx = 0.0;
  double T_mx = 0.0;

  bool recorded() const { return zeta_mx > 0.0; }
};

enum class CohesiveBranch { L1, L2, U };

struct Traction {
  double Tn = 0.0;
  double Tt = 0.0;
  CohesiveBranch branch = CohesiveBranch::L1;
};

double zeta_eq(double zeta_n, double zeta_t);

/// Exponential softening envelope L2(zeta_eq).
double softening_traction(double zeta_eq, const Material& mat);

/// Branch selection: unloading iff history is recorded and zeta_eq < zeta_mx.
CohesiveBranch cohesive_branch(double zeta_eq, const CrackHistory& hist, const Material& mat);

Traction traction(double zeta_n, double zeta_t, const CrackHistory& hist, const Material& mat);

/// d(T_n, T_t) / d(zeta_n, zeta_t), branch-wise exact.
Eigen::Matrix2d tangent(double zeta_n, double zeta_t, const CrackHistory& hist, const Material& mat);

/// End-of-step update: zeta_mx <- max(zeta_mx, zeta_eq) when that exceeds zeta_0.
CrackHistory update_history(const CrackHistory& hist, double zeta_eq, const Material& mat);

}  // namespace acem
