#include "acem/cohesive_law.hpp"

#include <cmath>

#include "acem/error.hpp"

namespace acem {

bool Material::can_crack() const { return std::isfinite(ft); }

void Material::validate() const {
  if (!(E > 0.0)) throw ConfigError("material: E must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("material: nu must lie in [0, 0.5)");
  if (!(ft > 0.0)) throw ConfigError("material: ft must be positive");
  if (can_crack()) {
    if (!(Gf > 0.0) || !std::isfinite(Gf)) throw ConfigError("material: Gf must be positive and finite");
  }
}

double zeta_eq(double zeta_n, double zeta_t) { return std::hypot(zeta_n, zeta_t); }

double softening_traction(double zeta_eq, const Material& mat) {
  return mat.ft * std::exp(-mat.ft * (zeta_eq - mat.zeta0()) / (mat.Gf - mat.Gf0()));
}

CohesiveBranch cohesive_branch(double zeq, const CrackHistory& hist, const Material& mat) {
  if (hist.recorded() && zeq < hist.zeta_mx) return CohesiveBranch::U;
  return zeq <= mat.zeta0() ? CohesiveBranch::L1 : CohesiveBranch::L2;
}

Traction traction(double zeta_n, double zeta_t, const CrackHistory& hist, const Material& mat) {
  const double zeq = zeta_eq(zeta_n, zeta_t);
  Traction out;
  out.branch = cohesive_branch(zeq, hist, mat);
  double secant = 0.0;  // T_eq / zeta_eq
  switch (out.branch) {
    case CohesiveBranch::L1:
      secant = mat.ft / mat.zeta0();
      break;
    case CohesiveBranch::L2:
      secant = softening_traction(zeq, mat) / zeq;
      break;
    case CohesiveBranch::U:
      secant = hist.T_mx / hist.zeta_mx;
      break;
  }
  out.Tn = secant * zeta_n;
  out.Tt = secant * zeta_t;
  return out;
}

Eigen::Matrix2d tangent(double zeta_n, double zeta_t, const CrackHistory& hist, const Material& mat) {
  const double zeq = zeta_eq(zeta_n, zeta_t);
  switch (cohesive_branch(zeq, hist, mat)) {
    case CohesiveBranch::L1:
      return (mat.ft / mat.zeta0()) * Eigen::Matrix2d::Identity();
    case CohesiveBranch::U:
      return (hist.T_mx / hist.zeta_mx) * Eigen::Matrix2d::Identity();
    case CohesiveBranch::L2:
      break;
  }
  const double teq = softening_traction(zeq, mat);
  const double k = mat.ft / (mat.Gf - mat.Gf0());
  const double nn = zeta_n * zeta_n / zeq + k * zeta_n * zeta_n - zeq;
  const double nt = zeta_n * zeta_t / zeq + k * zeta_n * zeta_t;
  const double tt = zeta_t * zeta_t / zeq + k * zeta_t * zeta_t - zeq;
  Eigen::Matrix2d d;
  d << nn, nt, nt, tt;
  return (-teq / (zeq * zeq)) * d;
}

CrackHistory update_history(const CrackHistory& hist, double zeq, const Material& mat) {
  const double candidate = std::max(hist.zeta_mx, zeq);
  if (!(candidate > mat.zeta0())) return hist;
  if (candidate == hist.zeta_mx) return hist;
  return {candidate, softening_traction(candidate, mat)};
}

}  // namespace acem
