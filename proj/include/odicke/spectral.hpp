#ifndef ODICKE_SPECTRAL_HPP
#define ODICKE_SPECTRAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "odicke/model.hpp"
#include "odicke/types.hpp"

namespace odicke {

template <typename Scalar>
struct SpectrumResult {
  // Sorted by descending real part, ties by descending imaginary part.
  std::array<std::complex<Scalar>, kDim> eigenvalues{};
  Scalar adr{};

  const std::complex<Scalar>& slowest() const { return eigenvalues.front(); }
};

struct DefectReport {
  int n_slow = 0;
  int numerical_rank = 0;
  int geometric_multiplicity = 0;
  bool defective = false;
};

template <typename Scalar>
Scalar asymptotic_decay_rate(const SpectrumResult<Scalar>& spectrum) {
  Scalar max_re = spectrum.eigenvalues.front().real();
  for (const auto& l : spectrum.eigenvalues) {
    max_re = std::max(max_re, l.real());
  }
  return -max_re;
}

template <typename Scalar>
SpectrumResult<Scalar> eigen_spectrum(const Mat6<Scalar>& a) {
  if (!a.allFinite()) {
    throw NumericalFailure("drift matrix has non-finite entries");
  }
  Eigen::EigenSolver<Mat6<Scalar>> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalue iteration did not converge");
  }
  SpectrumResult<Scalar> out;
  const auto& ev = solver.eigenvalues();
  for (int i = 0; i < kDim; ++i) {
    out.eigenvalues[i] = ev(i);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const std::complex<Scalar>& x, const std::complex<Scalar>& y) {
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
  out.adr = asymptotic_decay_rate(out);
  return out;
}

/// Closed-form slow-mode eigenvalues near g_c for EP-tuned detuning.
///
/// Reduces det(lambda I - A) to coeff_a (kappa + lambda) + coeff_b lambda^2 = 0
/// and keeps the leading small-coeff_a roots. Only valid on the normal side.
template <typename Scalar>
struct SlowModeApprox {
  Scalar coeff_a{};
  Scalar coeff_b{};
  std::complex<Scalar> lambda_plus{};
  std::complex<Scalar> lambda_minus{};
};

template <typename Scalar>
SlowModeApprox<Scalar> slow_mode_approx(const ModelParams<Scalar>& p) {
  using std::sqrt;
  const Scalar gc = critical_coupling(p);
  if (p.g > gc) {
    throw DomainError("slow_mode_approx is only defined for g <= g_c (g = " +
                      detail::fmt_value(p.g) + ", g_c = " + detail::fmt_value(gc) + ")");
  }
  const Scalar k2 = p.kappa * p.kappa;
  const Scalar dk2 = p.delta_kappa * p.delta_kappa;
  const Scalar w2 = p.omega * p.omega;
  // sqrt(k^2 (k^2 - dk^2)) kept unsimplified.
  const Scalar root = sqrt(k2 * (k2 - dk2));

  SlowModeApprox<Scalar> out;
  out.coeff_a = 32 * gc * p.omega * p.delta_kappa * sqrt(k2 - dk2 + 2 * root) * (gc - p.g);
  out.coeff_b = 4 * ((2 * k2 + w2) * (k2 - dk2 + root) + k2 * w2);

  const Scalar re = -out.coeff_a / (2 * out.coeff_b);
  const Scalar im = sqrt(p.kappa * out.coeff_b) * sqrt(out.coeff_a) / out.coeff_b;
  out.lambda_plus = {re, im};
  out.lambda_minus = {re, -im};
  return out;
}

template <typename Scalar>
Scalar default_slow_tol(const Mat6<Scalar>& a) {
  Eigen::JacobiSVD<Mat6<Scalar>> svd(a);
  return Scalar(1e-6) * svd.singularValues()(0);
}

inline constexpr double kDefaultRankTol = 1e-8;

/// Counts near-zero eigenvalues and compares with the kernel dimension from
/// a thresholded SVD. defective means algebraic > geometric multiplicity.
template <typename Scalar>
DefectReport ep_defect(const Mat6<Scalar>& a, Scalar slow_tol, Scalar rank_tol) {
  if (!(slow_tol > 0) || !(rank_tol > 0)) {
    throw DomainError("ep_defect tolerances must be positive");
  }
  const auto spectrum = eigen_spectrum(a);
  DefectReport r;
  for (const auto& l : spectrum.eigenvalues) {
    if (std::abs(l) < slow_tol) ++r.n_slow;
  }
  Eigen::JacobiSVD<Mat6<Scalar>> svd(a);
  const auto& sv = svd.singularValues();
  const Scalar cutoff = rank_tol * sv(0);
  for (int i = 0; i < kDim; ++i) {
    if (sv(i) > cutoff) ++r.numerical_rank;
  }
  r.geometric_multiplicity = kDim - r.numerical_rank;
  r.defective = r.n_slow > r.geometric_multiplicity;
  return r;
}

template <typename Scalar>
DefectReport ep_defect(const Mat6<Scalar>& a) {
  return ep_defect(a, default_slow_tol(a), Scalar(kDefaultRankTol));
}

} // namespace odicke

#endif // ODICKE_SPECTRAL_HPP
