#include "odicke/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "odicke/spectral.hpp"
#include "odicke/steady.hpp"

namespace odicke {

std::optional<int> column_index(std::string_view name) {
  for (int i = 0; i < kNumColumns; ++i) {
    if (kColumnNames[i] == name) return i;
  }
  if (name == "im_lambda") return kImLambda;
  return std::nullopt;
}

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::NotHurwitz: return "not_hurwitz";
    case RowStatus::DegenerateModel: return "degenerate_model";
    case RowStatus::NumericalFailure: return "numerical_failure";
    case RowStatus::DomainError: return "domain_error";
  }
  return "unknown";
}

const char* to_string(Side s) {
  switch (s) {
    case Side::Normal: return "normal";
    case Side::Superradiant: return "superradiant";
    case Side::Both: return "both";
  }
  return "unknown";
}

std::optional<Side> parse_side(std::string_view s) {
  if (s == "normal") return Side::Normal;
  if (s == "superradiant") return Side::Superradiant;
  if (s == "both") return Side::Both;
  return std::nullopt;
}

const char* to_string(Observable o) {
  switch (o) {
    case Observable::Adr: return "adr";
    case Observable::ImLambda: return "im_lambda";
    case Observable::Dn1: return "dn1";
    case Observable::Dn2: return "dn2";
    case Observable::Dnb: return "dnb";
    case Observable::Purity: return "purity";
    case Observable::Quadratures: return "quadratures";
  }
  return "unknown";
}

std::optional<Observable> parse_observable(std::string_view s) {
  for (auto o : {Observable::Adr, Observable::ImLambda, Observable::Dn1, Observable::Dn2,
                 Observable::Dnb, Observable::Purity, Observable::Quadratures}) {
    if (s == to_string(o)) return o;
  }
  return std::nullopt;
}

const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::Fitted: return "fitted";
    case CellKind::Flat: return "flat";
    case CellKind::Zero: return "zero";
    case CellKind::Failed: return "failed";
  }
  return "unknown";
}

void validate_spec(const SweepSpec& spec) {
  if (!(spec.rel_eps_min > 0) || !(spec.rel_eps_max > spec.rel_eps_min) ||
      !std::isfinite(spec.rel_eps_max)) {
    throw DomainError("sweep window requires 0 < rel_eps_min < rel_eps_max");
  }
  if (spec.side != Side::Superradiant && spec.rel_eps_max >= 1) {
    throw DomainError("rel_eps_max must be < 1 on the normal side");
  }
  if (spec.points_per_decade < 5) {
    throw DomainError("points_per_decade must be >= 5");
  }
}

std::vector<double> eps_grid(const SweepSpec& spec) {
  validate_spec(spec);
  const double lo = std::log10(spec.rel_eps_min);
  const double hi = std::log10(spec.rel_eps_max);
  const auto n = static_cast<std::size_t>(std::lround((hi - lo) * spec.points_per_decade)) + 1;
  std::vector<double> out(std::max<std::size_t>(n, 2));
  const std::size_t last = out.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(last);
    out[i] = std::pow(10.0, lo + t * (hi - lo));
  }
  out.front() = spec.rel_eps_min;
  out.back() = spec.rel_eps_max;
  return out;
}

namespace {

bool needs_covariance(const std::set<Observable>& obs) {
  return std::any_of(obs.begin(), obs.end(), [](Observable o) {
    return o != Observable::Adr && o != Observable::ImLambda;
  });
}

} // namespace

SweepRow evaluate_point(const ModelParamsd& params, double g_c, double eps, Phase side,
                        bool with_covariance) {
  SweepRow row;
  row.eps = eps;
  row.g = side == Phase::Normal ? g_c * (1 - eps) : g_c * (1 + eps);
  const auto p = params.with_coupling(row.g);
  try {
    const auto state = mean_field_steady_state(p);
    row.phase = state.phase;
    const auto lin = linearize(p, state);
    const auto spectrum = eigen_spectrum(lin.a);
    row.eigenvalues = spectrum.eigenvalues;
    row.values[kAdr] = spectrum.adr;
    row.values[kImLambda] = std::abs(spectrum.slowest().imag());

    if (with_covariance) {
      const auto cov = solve_lyapunov(lin.a, lin.d);
      const auto dn = number_fluctuations(cov);
      row.values[kDn1] = dn.dn1;
      row.values[kDn2] = dn.dn2;
      row.values[kDnb] = dn.dnb;
      row.values[kPurity] = purity(cov);
      const auto q = quadrature_moments(cov);
      for (std::size_t i = 0; i < q.values.size(); ++i) {
        row.values[kXx1 + static_cast<int>(i)] = q.values[i];
      }
      row.cov_norm = cov.v.norm();
    }
  } catch (const NotHurwitz& e) {
    row.status = RowStatus::NotHurwitz;
    row.message = e.what();
  } catch (const DegenerateModel& e) {
    row.status = RowStatus::DegenerateModel;
    row.message = e.what();
  } catch (const NumericalFailure& e) {
    row.status = RowStatus::NumericalFailure;
    row.message = e.what();
  } catch (const DomainError& e) {
    row.status = RowStatus::DomainError;
    row.message = e.what();
  }
  if (row.status != RowStatus::Ok) {
    row.values.fill(std::nullopt);
    row.cov_norm = 0;
  }
  return row;
}

SweepDataset sweep(const ModelParamsd& params_base, const SweepSpec& spec, unsigned threads) {
  const auto grid = eps_grid(spec);
  // Rows come out eps-ascending, normal before superradiant at equal eps.
  SweepDataset out;
  out.g_c = critical_coupling(params_base);
  out.params = params_base.with_coupling(out.g_c);

  std::vector<std::pair<double, Phase>> points;
  for (double eps : grid) {
    if (spec.side != Side::Superradiant) points.emplace_back(eps, Phase::Normal);
    if (spec.side != Side::Normal) points.emplace_back(eps, Phase::Superradiant);
  }

  const bool with_cov = needs_covariance(spec.observables);
  out.rows.resize(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      out.rows[i] = evaluate_point(params_base, out.g_c, points[i].first, points[i].second,
                                   with_cov);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 5) {
    throw InsufficientData("power-law fit needs at least 5 points (got " +
                           std::to_string(points.size()) + ")");
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [eps, value] = points[i];
    if (!(eps > 0) || !(value > 0) || !std::isfinite(eps) || !std::isfinite(value)) {
      bad.push_back(i);
    }
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "power-law fit requires positive values; offending rows:";
    for (auto i : bad) os << ' ' << i;
    throw NonPositiveValue(os.str(), std::move(bad));
  }

  const auto n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& [eps, value] : points) {
    mx += std::log(eps);
    my += std::log(value);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [eps, value] : points) {
    const double dx = std::log(eps) - mx;
    const double dy = std::log(value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) {
    throw InsufficientData("power-law fit needs at least two distinct eps values");
  }

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_amplitude = my - fit.exponent * mx;
  double ss_res = 0;
  for (const auto& [eps, value] : points) {
    const double r = std::log(value) - (fit.log_amplitude + fit.exponent * std::log(eps));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0 ? std::clamp(1 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.n_points = points.size();
  auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                      [](auto& x, auto& y) { return x.first < y.first; });
  fit.window = {lo->first, hi->first};
  return fit;
}

ReportCell fit_column(const SweepDataset& data, int column, Phase side) {
  ReportCell cell;
  cell.observable = std::string(kColumnNames[column]);
  cell.side = side;

  std::vector<std::pair<double, double>> pts;
  double max_abs = 0;
  double scale = 0;
  for (const auto& row : data.rows) {
    if (row.phase != side || row.status != RowStatus::Ok || !row.values[column]) continue;
    const double v = *row.values[column];
    pts.emplace_back(row.eps, v);
    max_abs = std::max(max_abs, std::abs(v));
    scale = std::max(scale, row.cov_norm);
  }
  if (pts.size() < 5) {
    cell.note = "insufficient data (" + std::to_string(pts.size()) + " usable rows)";
    return cell;
  }
  // Covariance entries are judged against |V|; spectral ones and purity in absolute terms.
  const double zero_scale = column >= kDn1 && column != kPurity ? scale : 1.0;
  if (max_abs <= kZeroRelTol * zero_scale) {
    cell.kind = CellKind::Zero;
    cell.note = "identically zero within tolerance";
    return cell;
  }
  try {
    cell.fit = fit_power_law(pts);
  } catch (const Error& e) {
    cell.note = e.what();
    return cell;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& [eps, v] : pts) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (std::log10(hi / lo) < kFlatDecades) {
    cell.kind = CellKind::Flat;
    cell.note = "dynamic range below " + std::to_string(kFlatDecades) + " decades";
  } else {
    cell.kind = CellKind::Fitted;
  }
  return cell;
}

std::vector<int> columns_for(const std::set<Observable>& observables) {
  std::vector<int> cols;
  for (auto o : observables) {
    switch (o) {
      case Observable::Adr: cols.push_back(kAdr); break;
      case Observable::ImLambda: cols.push_back(kImLambda); break;
      case Observable::Dn1: cols.push_back(kDn1); break;
      case Observable::Dn2: cols.push_back(kDn2); break;
      case Observable::Dnb: cols.push_back(kDnb); break;
      case Observable::Purity: cols.push_back(kPurity); break;
      case Observable::Quadratures:
        for (int c = kXx1; c <= kXpb; ++c) cols.push_back(c);
        break;
    }
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

const ReportCell* ExponentReport::find(std::string_view observable, Phase side) const {
  for (const auto& c : cells) {
    if (c.observable == observable && c.side == side) return &c;
  }
  return nullptr;
}

ExponentReport exponent_report(const ModelParamsd& params, const SweepSpec& spec,
                               unsigned threads) {
  ExponentReport report;
  report.data = sweep(params, spec, threads);
  std::vector<Phase> sides;
  if (spec.side != Side::Superradiant) sides.push_back(Phase::Normal);
  if (spec.side != Side::Normal) sides.push_back(Phase::Superradiant);
  for (int col : columns_for(spec.observables)) {
    for (Phase side : sides) {
      report.cells.push_back(fit_column(report.data, col, side));
    }
  }
  return report;
}

} // namespace odicke
