#ifndef ODICKE_TYPES_HPP
#define ODICKE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace odicke {

// Fluctuation vector ordering used throughout: (dx1, dp1, dx2, dp2, xb, pb).
inline constexpr int kDim = 6;

template <typename Scalar>
using Mat6 = Eigen::Matrix<Scalar, kDim, kDim>;

template <typename Scalar>
using Vec6 = Eigen::Matrix<Scalar, kDim, 1>;

template <typename Scalar>
using CMat6 = Eigen::Matrix<std::complex<Scalar>, kDim, kDim>;

template <typename Scalar>
using CVec6 = Eigen::Matrix<std::complex<Scalar>, kDim, 1>;

using Mat6d = Mat6<double>;
using CMat6d = CMat6<double>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parameter or input outside the model's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

// Effective magnon frequency is non-positive; the Gaussian expansion is invalid.
class DegenerateModel : public Error {
public:
  using Error::Error;
};

class NumericalFailure : public Error {
public:
  using Error::Error;
};

class NotHurwitz : public Error {
public:
  NotHurwitz(const std::string& what, double max_re)
      : Error(what), max_real_part_(max_re) {}
  double max_real_part() const noexcept { return max_real_part_; }

private:
  double max_real_part_;
};

class SingularResolvent : public Error {
public:
  SingularResolvent(const std::string& what, double freq)
      : Error(what), frequency_(freq) {}
  double frequency() const noexcept { return frequency_; }

private:
  double frequency_;
};

} // namespace odicke

#endif // ODICKE_TYPES_HPP
