#ifndef ODICKE_SCALING_HPP
#define ODICKE_SCALING_HPP

#include <array>
#include <complex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "odicke/model.hpp"
#include "odicke/types.hpp"

namespace odicke {

enum class Side { Normal, Superradiant, Both };

enum class Observable { Adr, ImLambda, Dn1, Dn2, Dnb, Purity, Quadratures };

/// Value columns of a sweep row, in CSV order.
enum Column : int {
  kAdr = 0,
  kImLambda,
  kDn1,
  kDn2,
  kDnb,
  kPurity,
  kXx1,
  kPp1,
  kXp1,
  kXx2,
  kPp2,
  kXp2,
  kXxb,
  kPpb,
  kXpb,
  kNumColumns
};

inline constexpr std::array<std::string_view, kNumColumns> kColumnNames = {
    "adr", "im_lambda_plus", "dn1", "dn2", "dnb", "purity", "xx1", "pp1",
    "xp1", "xx2",            "pp2", "xp2", "xxb", "ppb",    "xpb"};

std::optional<int> column_index(std::string_view name);

enum class RowStatus { Ok, NotHurwitz, DegenerateModel, NumericalFailure, DomainError };

const char* to_string(RowStatus s);
const char* to_string(Side s);
std::optional<Side> parse_side(std::string_view s);
std::optional<Observable> parse_observable(std::string_view s);
const char* to_string(Observable o);

struct SweepSpec {
  Side side = Side::Both;
  double rel_eps_min = 1e-4;
  double rel_eps_max = 1e-2;
  int points_per_decade = 20;
  std::set<Observable> observables = {Observable::Adr,    Observable::ImLambda,
                                      Observable::Dn1,    Observable::Dn2,
                                      Observable::Dnb,    Observable::Purity,
                                      Observable::Quadratures};
};

/// Throws DomainError when the spec cannot describe a grid.
void validate_spec(const SweepSpec& spec);

/// Log-spaced relative distances from g_c, ascending, endpoints included.
std::vector<double> eps_grid(const SweepSpec& spec);

struct SweepRow {
  double g = 0;
  double eps = 0;
  Phase phase = Phase::Normal;
  RowStatus status = RowStatus::Ok;
  std::string message;
  std::array<std::optional<double>, kNumColumns> values{};
  std::array<std::complex<double>, kDim> eigenvalues{};
  double cov_norm = 0;  // Frobenius norm of V, 0 when not computed
};

struct SweepDataset {
  ModelParamsd params;  // g field is the critical coupling
  double g_c = 0;
  std::vector<SweepRow> rows;  // sorted by eps ascending, normal before superradiant
};

/// Evaluates every grid point. threads = 0 picks the hardware concurrency.
SweepDataset sweep(const ModelParamsd& params_base, const SweepSpec& spec,
                   unsigned threads = 0);

/// One grid point; exposed for the CLI and tests.
SweepRow evaluate_point(const ModelParamsd& params, double g_c, double eps, Phase side,
                        bool with_covariance);

class InsufficientData : public Error {
public:
  using Error::Error;
};

class NonPositiveValue : public Error {
public:
  NonPositiveValue(const std::string& what, std::vector<std::size_t> rows)
      : Error(what), rows_(std::move(rows)) {}
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

private:
  std::vector<std::size_t> rows_;
};

struct PowerLawFit {
  double exponent = 0;
  double log_amplitude = 0;
  double r_squared = 0;
  std::size_t n_points = 0;
  std::pair<double, double> window{0, 0};
};

/// Least squares of log(value) against log(eps).
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

enum class CellKind { Fitted, Flat, Zero, Failed };

const char* to_string(CellKind k);

struct ReportCell {
  std::string observable;
  Phase side = Phase::Normal;
  CellKind kind = CellKind::Failed;
  std::optional<PowerLawFit> fit;
  std::string note;
};

struct ExponentReport {
  SweepDataset data;
  std::vector<ReportCell> cells;

  const ReportCell* find(std::string_view observable, Phase side) const;
};

inline constexpr double kFlatDecades = 0.1;
inline constexpr double kZeroRelTol = 1e-8;

/// Classifies and fits one column of a dataset on one side of g_c.
ReportCell fit_column(const SweepDataset& data, int column, Phase side);

ExponentReport exponent_report(const ModelParamsd& params, const SweepSpec& spec,
                               unsigned threads = 0);

/// Column indices requested by an observable set, in CSV order.
std::vector<int> columns_for(const std::set<Observable>& observables);

} // namespace odicke

#endif // ODICKE_SCALING_HPP
