#ifndef ODICKE_STEADY_HPP
#define ODICKE_STEADY_HPP

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "odicke/spectral.hpp"
#include "odicke/types.hpp"

namespace odicke {

/// Symmetrized steady-state second moments over (dx1, dp1, dx2, dp2, xb, pb).
template <typename Scalar>
struct CovarianceMatrix {
  Mat6<Scalar> v = Mat6<Scalar>::Zero();
};

template <typename Scalar>
struct NumberFluctuations {
  Scalar dn1{};
  Scalar dn2{};
  Scalar dnb{};
};

/// The nine entries of the quadrature-exponent table, in table order.
template <typename Scalar>
struct QuadratureMoments {
  static constexpr std::array<std::string_view, 9> labels = {
      "xx1", "pp1", "xp1", "xx2", "pp2", "xp2", "xxb", "ppb", "xpb"};
  std::array<Scalar, 9> values{};

  Scalar xx1() const { return values[0]; }
  Scalar pp1() const { return values[1]; }
  Scalar xp1() const { return values[2]; }
  Scalar xx2() const { return values[3]; }
  Scalar pp2() const { return values[4]; }
  Scalar xp2() const { return values[5]; }
  Scalar xxb() const { return values[6]; }
  Scalar ppb() const { return values[7]; }
  Scalar xpb() const { return values[8]; }
};

template <typename Scalar>
struct IntegralCovariance {
  CovarianceMatrix<Scalar> cov;
  bool truncated = false;  // tail beyond the horizon exceeds tail_tol
  Scalar tail_estimate{};
};

template <typename Scalar>
struct NoiseSpectrum {
  std::vector<Scalar> omegas;
  std::vector<CMat6<Scalar>> matrices;
};

inline constexpr double kStabilityTol = 1e-12;

namespace detail {

template <typename Scalar>
void require_hurwitz(const Mat6<Scalar>& a, Scalar stability_tol) {
  const auto spectrum = eigen_spectrum(a);
  const Scalar max_re = -spectrum.adr;
  if (!(max_re < -stability_tol)) {
    throw NotHurwitz("drift matrix is not Hurwitz (max Re lambda = " + fmt_value(max_re) +
                         ")",
                     static_cast<double>(max_re));
  }
}

template <typename Scalar>
Eigen::Matrix<Scalar, kDim * kDim, kDim * kDim> lyapunov_operator(const Mat6<Scalar>& a) {
  // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec.
  Eigen::Matrix<Scalar, kDim * kDim, kDim * kDim> k;
  k.setZero();
  for (int j = 0; j < kDim; ++j) {
    for (int i = 0; i < kDim; ++i) {
      const int row = i + kDim * j;
      for (int m = 0; m < kDim; ++m) {
        k(row, m + kDim * j) += a(i, m);
        k(row, i + kDim * m) += a(j, m);
      }
    }
  }
  return k;
}

} // namespace detail

template <typename Scalar>
Scalar lyapunov_residual(const Mat6<Scalar>& a, const Mat6<Scalar>& v,
                         const Mat6<Scalar>& d) {
  return (a * v + v * a.transpose() + d).norm();
}

/// Solves A V + V A^T + D = 0 for a Hurwitz A.
template <typename Scalar>
CovarianceMatrix<Scalar> solve_lyapunov(const Mat6<Scalar>& a, const Mat6<Scalar>& d,
                                        Scalar stability_tol = Scalar(kStabilityTol)) {
  using Vec36 = Eigen::Matrix<Scalar, kDim * kDim, 1>;
  detail::require_hurwitz(a, stability_tol);

  const Eigen::FullPivLU<Eigen::Matrix<Scalar, kDim * kDim, kDim * kDim>> lu(
      detail::lyapunov_operator(a));
  if (!lu.isInvertible()) {
    throw NumericalFailure("Lyapunov operator is numerically singular");
  }

  Mat6<Scalar> v;
  Eigen::Map<Vec36>(v.data()) = lu.solve(-Eigen::Map<const Vec36>(d.data()));
  // One step of refinement.
  const Mat6<Scalar> r = a * v + v * a.transpose() + d;
  Mat6<Scalar> dv;
  Eigen::Map<Vec36>(dv.data()) = lu.solve(-Eigen::Map<const Vec36>(r.data()));
  v += dv;

  CovarianceMatrix<Scalar> out;
  out.v = (v + v.transpose()) / 2;
  return out;
}

/// Evaluates V = int_0^horizon e^{A u} D e^{A^T u} du panel by panel.
///
/// Each panel of width h = horizon / steps uses 8-point Gauss-Legendre nodes;
/// panels are chained with the propagator e^{A h}. Independent of the
/// Kronecker route in solve_lyapunov.
template <typename Scalar>
IntegralCovariance<Scalar> covariance_integral_oracle(const Mat6<Scalar>& a,
                                                      const Mat6<Scalar>& d,
                                                      Scalar horizon, long steps,
                                                      Scalar tail_tol = Scalar(1e-8)) {
  detail::require_hurwitz(a, Scalar(kStabilityTol));
  const Scalar gap = eigen_spectrum(a).adr;

  IntegralCovariance<Scalar> out;
  if (!(horizon > 0) || steps <= 0) {
    out.truncated = true;
    out.tail_estimate = std::numeric_limits<Scalar>::infinity();
    return out;
  }

  static constexpr std::array<long double, 8> nodes = {
      -0.960289856497536231683560868569473L, -0.796666477413626739591553936475831L,
      -0.525532409916328985817739049189240L, -0.183434642495649804939476142360184L,
      0.183434642495649804939476142360184L,  0.525532409916328985817739049189240L,
      0.796666477413626739591553936475831L,  0.960289856497536231683560868569473L};
  static constexpr std::array<long double, 8> weights = {
      0.101228536290376259152531354309962L, 0.222381034453374470544355994426241L,
      0.313706645877887287337962201986601L, 0.362683783378361982965150449277196L,
      0.362683783378361982965150449277196L, 0.313706645877887287337962201986601L,
      0.222381034453374470544355994426241L, 0.101228536290376259152531354309962L};

  const Scalar h = horizon / static_cast<Scalar>(steps);
  Mat6<Scalar> panel = Mat6<Scalar>::Zero();
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const Scalar u = h * (1 + static_cast<Scalar>(nodes[q])) / 2;
    const Mat6<Scalar> e = (a * u).exp();
    panel += static_cast<Scalar>(weights[q]) * (e * d * e.transpose());
  }
  panel *= h / 2;

  const Mat6<Scalar> step = (a * h).exp();
  Mat6<Scalar> prop = Mat6<Scalar>::Identity();
  Mat6<Scalar> v = Mat6<Scalar>::Zero();
  for (long k = 0; k < steps; ++k) {
    v.noalias() += prop * panel * prop.transpose();
    prop = (prop * step).eval();
  }

  out.cov.v = (v + v.transpose()) / 2;
  const Scalar decay = std::exp(-2 * gap * horizon);
  out.tail_estimate = decay * out.cov.v.norm();
  out.truncated = decay > tail_tol;
  return out;
}

template <typename Scalar>
NumberFluctuations<Scalar> number_fluctuations(const CovarianceMatrix<Scalar>& c) {
  const auto& v = c.v;
  return {(v(0, 0) + v(1, 1) - 1) / 2, (v(2, 2) + v(3, 3) - 1) / 2,
          (v(4, 4) + v(5, 5) - 1) / 2};
}

/// Gaussian purity 1 / (2^3 sqrt(det V)) with vacuum variance 1/2.
template <typename Scalar>
Scalar purity(const CovarianceMatrix<Scalar>& c) {
  const Scalar det = c.v.determinant();
  if (!(det > 0)) {
    throw DomainError("purity requires det V > 0 (got " + detail::fmt_value(det) + ")");
  }
  return 1 / (8 * std::sqrt(det));
}

template <typename Scalar>
QuadratureMoments<Scalar> quadrature_moments(const CovarianceMatrix<Scalar>& c) {
  const auto& v = c.v;
  QuadratureMoments<Scalar> q;
  q.values = {v(0, 0), v(1, 1), v(0, 1), v(2, 2), v(3, 3), v(2, 3), v(4, 4), v(5, 5), v(4, 5)};
  return q;
}

/// S(w) = R(w) D R(w)^dagger with R(w) = (i w I - A)^{-1}.
template <typename Scalar>
CMat6<Scalar> noise_matrix(const Mat6<Scalar>& a, const Mat6<Scalar>& d, Scalar omega) {
  using Complex = std::complex<Scalar>;
  const CMat6<Scalar> m =
      Complex(0, omega) * CMat6<Scalar>::Identity() - a.template cast<Complex>();
  const Eigen::FullPivLU<CMat6<Scalar>> lu(m);
  if (lu.rank() < kDim) {
    throw SingularResolvent("resolvent is singular at omega = " + detail::fmt_value(omega),
                            static_cast<double>(omega));
  }
  const CMat6<Scalar> r = lu.solve(CMat6<Scalar>::Identity());
  const CMat6<Scalar> s = r * d.template cast<Complex>() * r.adjoint();
  return (s + s.adjoint()) / Scalar(2);
}

template <typename Scalar>
NoiseSpectrum<Scalar> noise_spectrum(const Mat6<Scalar>& a, const Mat6<Scalar>& d,
                                     const std::vector<Scalar>& omegas) {
  NoiseSpectrum<Scalar> out;
  out.omegas = omegas;
  out.matrices.reserve(omegas.size());
  for (Scalar w : omegas) {
    out.matrices.push_back(noise_matrix(a, d, w));
  }
  return out;
}

} // namespace odicke

#endif // ODICKE_STEADY_HPP
