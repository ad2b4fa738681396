// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "odicke/cli.hpp"
#include "odicke/model.hpp"
#include "odicke/scaling.hpp"
#include "odicke/spectral.hpp"
#include "odicke/steady.hpp"

using namespace odicke;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

ModelParamsd exc() { return validate_params(1.0, 1.0, 0.5, ep_detuning(1.0, 0.5), 0.0); }
ModelParamsd nonexc() { return validate_params(1.0, 1.0, 0.5, 1.0, 0.0); }

const char* side_tag(Phase p) { return p == Phase::Normal ? "N" : "SR"; }

constexpr std::array<Phase, 2> kSides = {Phase::Normal, Phase::Superradiant};

// Checks one fitted column against target +- tol on both sides.
void expect_exponent(Outcome& o, const ExponentReport& r, const char* label,
                     const char* column, double target, double tol) {
  for (Phase side : kSides) {
    const auto* cell = r.find(column, side);
    const std::string tag = std::string(label) + ":" + column + ":" + side_tag(side);
    if (!cell || !cell->fit || cell->kind != CellKind::Fitted) {
      o.require(false, tag + " not fitted");
      continue;
    }
    o.detail << ' ' << tag << '=' << cell->fit->exponent;
    o.require(std::abs(cell->fit->exponent - target) <= tol, tag);
  }
}

double s11_slope(const ModelParamsd& base) {
  const auto p = base.with_coupling(critical_coupling(base));
  const auto lin = linearize(p, mean_field_steady_state(p));
  std::vector<double> omegas;
  for (int i = 0; i <= 40; ++i) omegas.push_back(std::pow(10.0, -4.0 + 2.0 * i / 40));
  const auto s = noise_spectrum(lin.a, lin.d, omegas);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    pts.emplace_back(omegas[i], s.matrices[i](0, 0).real());
  }
  return fit_power_law(pts).exponent;
}

struct HurwitzGen {
  std::mt19937_64 rng{31337};
  std::pair<Mat6d, Mat6d> operator()() {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> margin(0.1, 1.0);
    Mat6d a = Mat6d::NullaryExpr([&](Eigen::Index, Eigen::Index) { return n(rng); });
    a -= (-eigen_spectrum(a).adr + margin(rng)) * Mat6d::Identity();
    const Mat6d b = Mat6d::NullaryExpr([&](Eigen::Index, Eigen::Index) { return n(rng); });
    return {a, b * b.transpose()};
  }
};

double oracle_mismatch(const Mat6d& a, const Mat6d& d) {
  const double gap = eigen_spectrum(a).adr;
  const double horizon = 30.0 / gap;
  const long steps = static_cast<long>(std::ceil(horizon * a.norm() / 0.25));
  const auto integ = covariance_integral_oracle(a, d, horizon, steps);
  const auto direct = solve_lyapunov(a, d);
  if (integ.truncated) return INFINITY;
  return (integ.cov.v - direct.v).norm() / direct.v.norm();
}

double parseval_mismatch(const ModelParamsd& p) {
  const auto l = linearize(p, mean_field_steady_state(p));
  const Mat6d v = solve_lyapunov(l.a, l.d).v;
  const double cutoff = 1e3 * std::max(p.kappa, p.omega);
  static constexpr std::array<double, 4> x = {-0.8611363115940526, -0.3399810435848563,
                                              0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> w = {0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};
  Mat6d acc = Mat6d::Zero();
  auto panel = [&](double lo, double hi) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double f = (lo + hi) / 2 + (hi - lo) / 2 * x[q];
      acc += (w[q] * (hi - lo) / 2) * noise_matrix(l.a, l.d, f).real();
    }
  };
  for (double lo = 0; lo < 20.0 - 1e-12; lo += 0.005) panel(lo, lo + 0.005);
  for (double lo = 20.0; lo < cutoff;) {
    const double hi = std::min(cutoff, lo * 1.02);
    panel(lo, hi);
    lo = hi;
  }
  acc /= M_PI;
  double worst = 0;
  for (int i = 0; i < kDim; ++i) worst = std::max(worst, std::abs(acc(i, i) / v(i, i) - 1));
  return worst;
}

std::string run_report_once() {
  const char* argv[] = {"odicke", "report", "--omega", "1", "--kappa", "1",
                        "--delta-kappa", "0.5", "--delta", "ep"};
  std::ostringstream out, err;
  const int code = run_cli(10, argv, out, err);
  return std::to_string(code) + "\n" + out.str();
}

} // namespace

int main() {
  const SweepSpec spec;  // eps in [1e-4, 1e-2], 20 points per decade, both sides
  const auto rep_exc = exponent_report(exc(), spec);
  const auto rep_non = exponent_report(nonexc(), spec);

  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria;

  criteria.emplace_back("1 ADR exponent = 1 +- 0.05 (EXC, NONEXC, both sides)", [&](Outcome& o) {
    expect_exponent(o, rep_exc, "EXC", "adr", 1.0, 0.05);
    expect_exponent(o, rep_non, "NONEXC", "adr", 1.0, 0.05);
  });

  criteria.emplace_back("2 EXC number fluctuations in [-2.15, -1.85]", [&](Outcome& o) {
    for (const char* c : {"dn1", "dn2", "dnb"}) expect_exponent(o, rep_exc, "EXC", c, -2.0, 0.15);
  });

  criteria.emplace_back("3 NONEXC number fluctuations in [-1.1, -0.9]", [&](Outcome& o) {
    for (const char* c : {"dn1", "dn2", "dnb"}) expect_exponent(o, rep_non, "NONEXC", c, -1.0, 0.1);
  });

  criteria.emplace_back("4 purity exponent 1.5 +- 0.15 (EXC), 0.5 +- 0.1 (NONEXC)", [&](Outcome& o) {
    expect_exponent(o, rep_exc, "EXC", "purity", 1.5, 0.15);
    expect_exponent(o, rep_non, "NONEXC", "purity", 0.5, 0.1);
  });

  criteria.emplace_back("5 slow-mode Im: EXC exponent 0.5 +- 0.05, NONEXC |Im| <= 1e-8", [&](Outcome& o) {
    const auto* cell = rep_exc.find("im_lambda_plus", Phase::Normal);
    if (!cell || !cell->fit || cell->kind != CellKind::Fitted) {
      o.require(false, "EXC im_lambda not fitted");
    } else {
      o.detail << " EXC:im=" << cell->fit->exponent;
      o.require(std::abs(cell->fit->exponent - 0.5) <= 0.05, "EXC im exponent");
    }
    double worst = 0;
    for (const auto& row : rep_non.data.rows) {
      if (row.status != RowStatus::Ok) {
        o.require(false, "NONEXC row failed");
        continue;
      }
      worst = std::max(worst, *row.values[kImLambda]);
    }
    o.detail << " NONEXC:max|Im|=" << worst;
    o.require(worst <= 1e-8, "NONEXC slow mode real");
  });

  criteria.emplace_back("6 S11(omega) slope at g_c: -4 +- 0.2 (EXC), -2 +- 0.2 (NONEXC)", [&](Outcome& o) {
    const double se = s11_slope(exc());
    const double sn = s11_slope(nonexc());
    o.detail << " EXC=" << se << " NONEXC=" << sn;
    o.require(std::abs(se + 4) <= 0.2, "EXC slope");
    o.require(std::abs(sn + 2) <= 0.2, "NONEXC slope");
  });

  criteria.emplace_back("7 quadrature exponent table", [&](Outcome& o) {
    for (const char* c : {"xx1", "pp1", "xp1", "xx2", "pp2", "xp2", "xxb"}) {
      expect_exponent(o, rep_exc, "EXC", c, -2.0, 0.2);
      expect_exponent(o, rep_non, "NONEXC", c, -1.0, 0.1);
    }
    expect_exponent(o, rep_exc, "EXC", "ppb", -1.0, 0.1);
    for (Phase side : kSides) {
      const auto* ppb = rep_non.find("ppb", side);
      o.require(ppb && ppb->kind == CellKind::Flat, std::string("NONEXC:ppb flat:") + side_tag(side));
      for (const auto* rep : {&rep_exc, &rep_non}) {
        const auto* xpb = rep->find("xpb", side);
        o.require(xpb && (xpb->kind == CellKind::Zero || xpb->kind == CellKind::Flat),
                  std::string("xpb flat/zero:") + side_tag(side));
      }
    }
  });

  criteria.emplace_back("8 EP defect at g_c", [&](Outcome& o) {
    auto at_gc = [](const ModelParamsd& base) {
      const auto p = base.with_coupling(critical_coupling(base));
      return ep_defect(drift_matrix(p, mean_field_steady_state(p)));
    };
    const auto e = at_gc(exc());
    const auto n = at_gc(nonexc());
    o.detail << " EXC(n_slow=" << e.n_slow << ",rank=" << e.numerical_rank
             << ",defective=" << e.defective << ") NONEXC(defective=" << n.defective << ")";
    o.require(e.n_slow == 2 && e.numerical_rank == 5 && e.defective, "EXC defect");
    o.require(!n.defective, "NONEXC not defective");
  });

  criteria.emplace_back("9 property suite", [&](Outcome& o) {
    HurwitzGen gen;
    double worst_res = 0;
    for (int i = 0; i < 50; ++i) {
      const auto [a, d] = gen();
      const auto c = solve_lyapunov(a, d);
      worst_res = std::max(worst_res, lyapunov_residual(a, c.v, d) / std::max(1.0, d.norm()));
    }
    o.detail << " lyap_res=" << worst_res;
    o.require(worst_res <= 1e-10, "Lyapunov residual");

    double worst_oracle = 0;
    for (int i = 0; i < 20; ++i) {
      const auto [a, d] = gen();
      worst_oracle = std::max(worst_oracle, oracle_mismatch(a, d));
    }
    for (double rel : {0.5, 0.8, 0.95, 1.05, 1.2}) {
      for (const auto& base : {exc(), nonexc()}) {
        const auto p = base.with_coupling(rel * critical_coupling(base));
        const auto l = linearize(p, mean_field_steady_state(p));
        worst_oracle = std::max(worst_oracle, oracle_mismatch(l.a, l.d));
      }
    }
    o.detail << " oracle=" << worst_oracle;
    o.require(worst_oracle <= 1e-6, "oracle equivalence");

    // Symmetric PSD covariance at every sweep point; branch symmetry of spectrum and observables.
    double worst_asym = 0, worst_neg = 0, worst_branch = 0;
    for (const auto& base : {exc(), nonexc()}) {
      const double gc = critical_coupling(base);
      for (double e : eps_grid(spec)) {
        for (double g : {gc * (1 - e), gc * (1 + e)}) {
          const auto p = base.with_coupling(g);
          const auto lp = linearize(p, mean_field_steady_state(p, Branch::Plus));
          const auto cp = solve_lyapunov(lp.a, lp.d);
          const double scale = std::max(1.0, cp.v.norm());
          worst_asym = std::max(worst_asym, (cp.v - cp.v.transpose()).cwiseAbs().maxCoeff());
          const double lmin =
              Eigen::SelfAdjointEigenSolver<Mat6d>(cp.v, Eigen::EigenvaluesOnly).eigenvalues()(0);
          worst_neg = std::max(worst_neg, -lmin / scale);
          if (g > gc) {
            const auto lm = linearize(p, mean_field_steady_state(p, Branch::Minus));
            const auto cm = solve_lyapunov(lm.a, lm.d);
            const auto sp = eigen_spectrum(lp.a), sm = eigen_spectrum(lm.a);
            for (int k = 0; k < kDim; ++k) {
              worst_branch = std::max(worst_branch, std::abs(sp.eigenvalues[k] - sm.eigenvalues[k]));
            }
            const auto np = number_fluctuations(cp), nm = number_fluctuations(cm);
            worst_branch = std::max({worst_branch, std::abs(np.dn1 / nm.dn1 - 1),
                                     std::abs(np.dnb / nm.dnb - 1),
                                     std::abs(purity(cp) / purity(cm) - 1)});
          }
        }
      }
    }
    o.detail << " asym=" << worst_asym << " neg=" << worst_neg << " branch=" << worst_branch;
    o.require(worst_asym <= 1e-12, "V symmetric");
    o.require(worst_neg <= 1e-10, "V PSD");
    o.require(worst_branch <= 1e-8, "branch symmetry");

    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.2, 3.0), frac(0.05, 0.95), over(1.0 + 1e-6, 3.0);
    double worst_mf = 0, worst_conj = 0, worst_trace = 0;
    for (int i = 0; i < 50; ++i) {
      const double kappa = u(rng);
      const auto base = validate_params(u(rng), kappa, frac(rng) * kappa, u(rng), 0.0);
      const auto p = base.with_coupling(over(rng) * critical_coupling(base));
      const auto s = mean_field_steady_state(p);
      worst_mf = std::max(worst_mf, mean_field_residual(p, s).cwiseAbs().maxCoeff());
      const auto pn = base.with_coupling(0.5 * over(rng) * critical_coupling(base));
      for (const auto& q : {p, pn}) {
        const auto sp = eigen_spectrum(drift_matrix(q, mean_field_steady_state(q)));
        std::complex<double> sum = 0;
        for (const auto& l : sp.eigenvalues) {
          sum += l;
          double nearest = INFINITY;
          for (const auto& m : sp.eigenvalues) nearest = std::min(nearest, std::abs(std::conj(l) - m));
          worst_conj = std::max(worst_conj, nearest);
        }
        worst_trace = std::max(worst_trace, std::abs(sum - std::complex<double>(-4 * q.kappa)) /
                                                (4 * q.kappa));
      }
    }
    o.detail << " mf=" << worst_mf << " conj=" << worst_conj << " trace=" << worst_trace;
    o.require(worst_mf <= 1e-12, "mean-field residual");
    o.require(worst_conj <= 1e-10, "conjugation closure");
    o.require(worst_trace <= 1e-10, "trace identity");

    const auto pa = exc().with_coupling((1 - 1e-4) * critical_coupling(exc()));
    const auto approx = slow_mode_approx(pa);
    const auto exact = eigen_spectrum(drift_matrix(pa, mean_field_steady_state(pa))).eigenvalues[0];
    const double rel_err = std::abs(approx.lambda_plus - exact) / std::abs(exact);
    o.detail << " slow_approx=" << rel_err;
    o.require(rel_err <= 0.05, "slow_mode_approx");

    double worst_parseval = 0;
    for (const auto& base : {exc(), nonexc()}) {
      worst_parseval = std::max(worst_parseval,
                                parseval_mismatch(base.with_coupling(0.5 * critical_coupling(base))));
    }
    o.detail << " parseval=" << worst_parseval;
    o.require(worst_parseval <= 1e-2, "Parseval");
  });

  criteria.emplace_back("10 determinism of report output", [&](Outcome& o) {
    const auto a = run_report_once();
    const auto b = run_report_once();
    o.detail << " bytes=" << a.size();
    o.require(a.rfind("0\n", 0) == 0, "report exit code");
    o.require(a == b, "byte-identical");
  });

  int failures = 0;
  for (auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.str().c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
