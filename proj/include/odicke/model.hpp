#ifndef ODICKE_MODEL_HPP
#define ODICKE_MODEL_HPP

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "odicke/types.hpp"

namespace odicke {

/// Physical parameters of the two-cavity open Dicke model in intensive units.
///
/// Cavity 1 decays at kappa - delta_kappa, cavity 2 at kappa + delta_kappa.
/// Construct through validate_params() to get the invariants checked.
template <typename Scalar>
struct ModelParams {
  Scalar omega{};
  Scalar kappa{};
  Scalar delta_kappa{};
  Scalar delta{};
  Scalar g{};

  Scalar kappa_minus() const { return kappa - delta_kappa; }
  Scalar kappa_plus() const { return kappa + delta_kappa; }

  ModelParams with_coupling(Scalar coupling) const {
    ModelParams p = *this;
    p.g = coupling;
    return p;
  }
};

using ModelParamsd = ModelParams<double>;

enum class Phase { Normal, Superradiant };

inline const char* to_string(Phase p) {
  return p == Phase::Normal ? "normal" : "superradiant";
}

/// Sign of S^x in the superradiant phase.
enum class Branch : int { Plus = 1, Minus = -1 };

/// Mean-field steady state with condensates alpha_j / sqrt(N) and spin S / N.
template <typename Scalar>
struct MeanFieldState {
  Phase phase = Phase::Normal;
  Scalar theta{};  // signed: sin(theta) carries the branch
  std::complex<Scalar> alpha1{};
  std::complex<Scalar> alpha2{};
  Scalar sx{};
  Scalar sy{};
  Scalar sz{-Scalar(1) / 2};
  Branch branch = Branch::Plus;
};

/// Linearized fluctuation dynamics around a mean-field state.
template <typename Scalar>
struct DriftDiffusion {
  Mat6<Scalar> a;
  Mat6<Scalar> d;
  Scalar omega_eff{};
  Scalar g_eff{};
};

namespace detail {

template <typename T>
std::string fmt_value(T v) {
  std::ostringstream os;
  os.precision(17);
  os << static_cast<long double>(v);
  return os.str();
}

} // namespace detail

template <typename Scalar>
ModelParams<Scalar> validate_params(Scalar omega, Scalar kappa, Scalar delta_kappa,
                                    Scalar delta, Scalar g) {
  using detail::fmt_value;
  for (auto [name, v] : {std::pair{"omega", omega}, std::pair{"kappa", kappa},
                         std::pair{"delta_kappa", delta_kappa},
                         std::pair{"delta", delta}, std::pair{"g", g}}) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be finite");
    }
  }
  if (!(omega > 0)) {
    throw DomainError("omega must be > 0 (got " + fmt_value(omega) + ")");
  }
  if (!(kappa > 0)) {
    throw DomainError("kappa must be > 0 (got " + fmt_value(kappa) + ")");
  }
  if (!(delta_kappa > 0)) {
    throw DomainError("delta_kappa must be > 0; delta_kappa = " + fmt_value(delta_kappa) +
                      " makes the critical coupling divergent");
  }
  if (!(delta_kappa < kappa)) {
    throw DomainError("delta_kappa must be < kappa; kappa - delta_kappa = " +
                      fmt_value(kappa - delta_kappa) +
                      " leaves cavity 1 without dissipation");
  }
  if (!(delta > 0)) {
    throw DomainError("delta must be > 0 (got " + fmt_value(delta) + ")");
  }
  if (!(g >= 0)) {
    throw DomainError("g must be >= 0 (got " + fmt_value(g) + ")");
  }
  return ModelParams<Scalar>{omega, kappa, delta_kappa, delta, g};
}

/// 4 delta^2 delta_kappa^2 + (delta^2 + kappa^2 - delta_kappa^2)^2
template <typename Scalar>
Scalar detuning_discriminant(const ModelParams<Scalar>& p) {
  const Scalar d2 = p.delta * p.delta;
  const Scalar s = d2 + p.kappa * p.kappa - p.delta_kappa * p.delta_kappa;
  return 4 * d2 * p.delta_kappa * p.delta_kappa + s * s;
}

/// Coupling at which the normal-phase drift matrix becomes singular.
/// The g field of params is ignored.
template <typename Scalar>
Scalar critical_coupling(const ModelParams<Scalar>& p) {
  using std::sqrt;
  const Scalar disc = detuning_discriminant(p);
  return sqrt(p.omega * disc / (p.delta * p.kappa * p.delta_kappa)) / 4;
}

/// Cavity detuning that makes the critical point coincide with an
/// exceptional point of the drift matrix.
template <typename Scalar>
Scalar ep_detuning(Scalar kappa, Scalar delta_kappa) {
  using std::sqrt;
  if (!(delta_kappa > 0) || !(kappa > delta_kappa) || !std::isfinite(kappa)) {
    throw DomainError("ep_detuning requires kappa > delta_kappa > 0 (got kappa = " +
                      detail::fmt_value(kappa) +
                      ", delta_kappa = " + detail::fmt_value(delta_kappa) + ")");
  }
  const Scalar r = kappa * kappa - delta_kappa * delta_kappa;
  return sqrt(r + 2 * kappa * sqrt(r));
}

/// Steady state of the first-moment equations.
///
/// For g <= g_c this is the normal state. Above g_c the spin tilts with
/// cos(theta) = (g_c/g)^2 and the cavities condense; the branch picks the
/// sign of S^x.
template <typename Scalar>
MeanFieldState<Scalar> mean_field_steady_state(const ModelParams<Scalar>& p,
                                               Branch branch = Branch::Plus) {
  using std::sqrt;
  using Complex = std::complex<Scalar>;

  MeanFieldState<Scalar> s;
  s.branch = branch;
  const Scalar gc = critical_coupling(p);
  if (p.g <= gc) {
    return s;
  }

  const Scalar ratio = gc / p.g;
  const Scalar cos_t = ratio * ratio;
  const Scalar sign = branch == Branch::Plus ? Scalar(1) : Scalar(-1);
  const Scalar sin_t = sign * sqrt(1 - cos_t * cos_t);

  s.phase = Phase::Superradiant;
  s.theta = sign * std::acos(cos_t);
  s.sx = sin_t / 2;
  s.sy = 0;
  s.sz = -cos_t / 2;

  const Scalar km = p.kappa_minus();
  const Scalar kp = p.kappa_plus();
  const Complex denom(p.delta * p.delta + p.kappa * p.kappa - p.delta_kappa * p.delta_kappa,
                      2 * p.delta * p.delta_kappa);
  const Scalar drive = 2 * p.g * s.sx;
  s.alpha1 = drive * Complex(-p.delta, -kp) / denom;
  s.alpha2 = drive * Complex(km, p.delta) / denom;
  return s;
}

/// Right-hand sides of the first-moment equations in intensive variables:
/// (Re, Im) of d alpha1/dt, (Re, Im) of d alpha2/dt, d sx/dt, d sy/dt, d sz/dt.
template <typename Scalar>
Eigen::Matrix<Scalar, 7, 1> mean_field_residual(const ModelParams<Scalar>& p,
                                                const MeanFieldState<Scalar>& s) {
  using Complex = std::complex<Scalar>;
  const Complex i(0, 1);
  const Complex d_alpha1 =
      -(Complex(p.kappa_minus(), p.delta)) * s.alpha1 - i * (2 * p.g * s.sx);
  const Complex d_alpha2 =
      -(Complex(p.kappa_plus(), -p.delta)) * s.alpha2 + Complex(2 * p.g * s.sx);
  const Scalar field = s.alpha1.real() + s.alpha2.imag();

  Eigen::Matrix<Scalar, 7, 1> r;
  r << d_alpha1.real(), d_alpha1.imag(), d_alpha2.real(), d_alpha2.imag(),
      -p.omega * s.sy, p.omega * s.sx - 4 * p.g * s.sz * field,
      4 * p.g * s.sy * field;
  return r;
}

/// Effective magnon frequency omega cos(theta) - 4 g sin(theta) (Re a1 + Im a2).
template <typename Scalar>
Scalar effective_magnon_frequency(const ModelParams<Scalar>& p,
                                  const MeanFieldState<Scalar>& s) {
  return p.omega * std::cos(s.theta) -
         4 * p.g * std::sin(s.theta) * (s.alpha1.real() + s.alpha2.imag());
}

template <typename Scalar>
Scalar effective_coupling(const ModelParams<Scalar>& p, const MeanFieldState<Scalar>& s) {
  return p.g * std::cos(s.theta);
}

/// Drift matrix of the quadrature Langevin equations.
template <typename Scalar>
Mat6<Scalar> drift_matrix(const ModelParams<Scalar>& p, const MeanFieldState<Scalar>& s) {
  const Scalar big_omega = effective_magnon_frequency(p, s);
  if (!(big_omega > 0)) {
    throw DegenerateModel("effective magnon frequency is non-positive (Omega = " +
                          detail::fmt_value(big_omega) + ")");
  }
  const Scalar gt = effective_coupling(p, s);
  const Scalar km = p.kappa_minus();
  const Scalar kp = p.kappa_plus();
  const Scalar dt = p.delta;

  Mat6<Scalar> a = Mat6<Scalar>::Zero();
  a(0, 0) = -km;
  a(0, 1) = dt;
  a(1, 0) = -dt;
  a(1, 1) = -km;
  a(1, 4) = -2 * gt;
  a(2, 2) = -kp;
  a(2, 3) = -dt;
  a(2, 4) = 2 * gt;
  a(3, 2) = dt;
  a(3, 3) = -kp;
  a(4, 5) = big_omega;
  a(5, 0) = -2 * gt;
  a(5, 3) = -2 * gt;
  a(5, 4) = -big_omega;
  return a;
}

/// diag(kappa_-, kappa_-, kappa_+, kappa_+, 0, 0)
template <typename Scalar>
Mat6<Scalar> diffusion_matrix(const ModelParams<Scalar>& p) {
  Vec6<Scalar> diag;
  diag << p.kappa_minus(), p.kappa_minus(), p.kappa_plus(), p.kappa_plus(), 0, 0;
  return diag.asDiagonal();
}

template <typename Scalar>
DriftDiffusion<Scalar> linearize(const ModelParams<Scalar>& p,
                                 const MeanFieldState<Scalar>& s) {
  return {drift_matrix(p, s), diffusion_matrix(p), effective_magnon_frequency(p, s),
          effective_coupling(p, s)};
}

} // namespace odicke

#endif // ODICKE_MODEL_HPP
