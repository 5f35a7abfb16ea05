#include "qds/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qds/canonical.hpp"
#include "qds/report.hpp"
#include "qds/rng.hpp"

namespace qds {
namespace oracle {

double primal_value(const QuarticProblem& p, const Eigen::VectorXd& x) {
  if (x.size() != p.n) throw DimensionError("x must have length n");
  double value = 0.0;
  for (int k = 0; k < p.m; ++k) {
    double q = 0.0;
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) q += x(i) * p.B[k](i, j) * x(j);
    const double r = 0.5 * q - p.d(k);
    value += 0.5 * p.beta(k) * r * r;
  }
  double quad = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) quad += x(i) * p.A(i, j) * x(j);
  value += 0.5 * quad;
  for (int i = 0; i < p.n; ++i) value -= x(i) * p.f(i);
  return value;
}

Eigen::VectorXd primal_grad(const QuarticProblem& p,
                            const Eigen::VectorXd& x) {
  if (x.size() != p.n) throw DimensionError("x must have length n");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(p.n);
  for (int k = 0; k < p.m; ++k) {
    double q = 0.0;
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) q += x(i) * p.B[k](i, j) * x(j);
    const double r = 0.5 * q - p.d(k);
    for (int i = 0; i < p.n; ++i) {
      double bx = 0.0;
      for (int j = 0; j < p.n; ++j) bx += p.B[k](i, j) * x(j);
      g(i) += p.beta(k) * r * bx;
    }
  }
  for (int i = 0; i < p.n; ++i) {
    double ax = 0.0;
    for (int j = 0; j < p.n; ++j) ax += p.A(i, j) * x(j);
    g(i) += ax - p.f(i);
  }
  return g;
}

Eigen::MatrixXd primal_hess_fd(const QuarticProblem& p,
                               const Eigen::VectorXd& x, double h) {
  Eigen::MatrixXd H(p.n, p.n);
  for (int j = 0; j < p.n; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    H.col(j) = (primal_grad(p, xp) - primal_grad(p, xm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose()).eval();
}

double fd_check(const QuarticProblem& p, const Eigen::VectorXd& point,
                Side side, double h) {
  if (!(h > 0)) throw DomainError("fd step h must be positive");
  double worst = 0.0;

  if (side == Side::Primal) {
    const PrimalEval pe = primal_eval(p, point);
    Eigen::VectorXd fd_grad(p.n);
    for (int i = 0; i < p.n; ++i) {
      Eigen::VectorXd xp = point, xm = point;
      xp(i) += h;
      xm(i) -= h;
      fd_grad(i) =
          (primal_eval(p, xp).value - primal_eval(p, xm).value) / (2.0 * h);
    }
    const double gscale = 1.0 + pe.grad.cwiseAbs().maxCoeff();
    worst = (fd_grad - pe.grad).cwiseAbs().maxCoeff() / gscale;

    Eigen::MatrixXd fd_hess(p.n, p.n);
    for (int j = 0; j < p.n; ++j) {
      Eigen::VectorXd xp = point, xm = point;
      xp(j) += h;
      xm(j) -= h;
      fd_hess.col(j) =
          (primal_eval(p, xp).grad - primal_eval(p, xm).grad) / (2.0 * h);
    }
    const double hscale = 1.0 + pe.hess.cwiseAbs().maxCoeff();
    worst = std::max(worst,
                     (fd_hess - pe.hess).cwiseAbs().maxCoeff() / hscale);
    return worst;
  }

  const DualEval de = dual_eval(p, point);
  Eigen::VectorXd fd_grad(p.m);
  for (int i = 0; i < p.m; ++i) {
    Eigen::VectorXd sp = point, sm = point;
    sp(i) += h;
    sm(i) -= h;
    fd_grad(i) =
        (dual_eval(p, sp).value - dual_eval(p, sm).value) / (2.0 * h);
  }
  const double gscale = 1.0 + de.grad.cwiseAbs().maxCoeff();
  worst = (fd_grad - de.grad).cwiseAbs().maxCoeff() / gscale;

  Eigen::MatrixXd fd_hess(p.m, p.m);
  for (int j = 0; j < p.m; ++j) {
    Eigen::VectorXd sp = point, sm = point;
    sp(j) += h;
    sm(j) -= h;
    fd_hess.col(j) =
        (dual_eval(p, sp).grad - dual_eval(p, sm).grad) / (2.0 * h);
  }
  const double hscale = 1.0 + de.hess.cwiseAbs().maxCoeff();
  worst =
      std::max(worst, (fd_hess - de.hess).cwiseAbs().maxCoeff() / hscale);
  return worst;
}

namespace {

/// Armijo gradient descent on the oracle evaluators.
Eigen::VectorXd descend(const QuarticProblem& p, Eigen::VectorXd x,
                        int max_iter, double grad_tol) {
  double fx = primal_value(p, x);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd g = primal_grad(p, x);
    if (g.cwiseAbs().maxCoeff() <= grad_tol) break;
    const double g2 = g.squaredNorm();
    double alpha = 1.0 / (1.0 + g.norm());
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      const Eigen::VectorXd xt = x - alpha * g;
      const double ft = primal_value(p, xt);
      if (std::isfinite(ft) && ft <= fx - 1e-4 * alpha * g2) {
        x = xt;
        fx = ft;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return x;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

GridResult grid_scan(const QuarticProblem& p,
                     const std::vector<std::pair<double, double>>& box,
                     int resolution) {
  if (p.n > 3) throw DimensionTooLarge("grid_scan supports n <= 3");
  if (static_cast<int>(box.size()) != p.n)
    throw DimensionError("box must have one interval per axis");
  if (resolution < 1) throw DomainError("resolution must be >= 1");

  std::vector<int> counts(p.n, resolution);
  for (int i = 0; i < p.n; ++i)
    if (box[i].first == box[i].second) counts[i] = 1;

  GridResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> idx(p.n, 0);
  Eigen::VectorXd x(p.n);
  while (true) {
    for (int i = 0; i < p.n; ++i) {
      const auto [lo, hi] = box[i];
      x(i) = counts[i] == 1
                 ? lo
                 : lo + (hi - lo) * idx[i] / double(counts[i] - 1);
    }
    const double v = primal_value(p, x);
    if (v < best.value) {
      best.value = v;
      best.point = x;
    }
    int i = 0;
    while (i < p.n) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
      ++i;
    }
    if (i == p.n) break;
  }

  best.point = descend(p, best.point, 50, 0.0);
  best.value = primal_value(p, best.point);
  return best;
}

std::vector<Eigen::VectorXd> multistart_descent(const QuarticProblem& p,
                                                const SolverConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed ^ 0xda7a5eedull);
  const double h = cfg.sample_box_halfwidth;
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(p.n));
  for (int i = 0; i < cfg.multistart_count; ++i)
    starts.push_back(rng.uniform_vector(p.n, -h, h));

  std::vector<Eigen::VectorXd> minima;
  for (const auto& s : starts) {
    const Eigen::VectorXd x = descend(p, s, 20000, 1e-8);
    if (primal_grad(p, x).cwiseAbs().maxCoeff() > 1e-8) continue;
    const Eigen::MatrixXd H = primal_hess_fd(p, x);
    const double hscale = 1.0 + H.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-6 * hscale) continue;  // not a minimizer
    bool dup = false;
    for (const auto& q : minima) {
      if ((q - x).cwiseAbs().maxCoeff() <=
          1e-5 * (1.0 + q.cwiseAbs().maxCoeff())) {
        dup = true;
        break;
      }
    }
    if (!dup) minima.push_back(x);
  }
  std::sort(minima.begin(), minima.end(),
            [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              const double fa = primal_value(p, a), fb = primal_value(p, b);
              if (fa != fb) return fa < fb;
              return lex_less(a, b);
            });
  return minima;
}

ValidationSummary cross_validate(const Report& report, const QuarticProblem& p,
                                 const SolverConfig& cfg) {
  ValidationSummary out;
  const auto push = [&](ValidationCheck c) {
    if (!c.ok && !c.skipped) ++out.mismatches;
    out.checks.push_back(std::move(c));
  };

  // (a) Every oracle local minimizer is a recovered critical point. Not
  // applicable to degenerate symmetric instances: their minimizers have no
  // dual critical point at all (that is what the degeneracy flag reports).
  const std::vector<Eigen::VectorXd> minima = multistart_descent(p, cfg);
  if (report.degenerate) {
    push({"descent_minimizers_matched", true, true, 0.0,
          "skipped: degenerate instance (no critical point with G >= 0); " +
              std::to_string(minima.size()) +
              " oracle minimizers have no dual counterpart"});
  } else {
    int unmatched = 0;
    double worst = 0.0;
    std::string names;
    for (const auto& x : minima) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& rp : report.pairs)
        best = std::min(best, (rp.pair.x - x).cwiseAbs().maxCoeff());
      if (best > 1e-5 * (1.0 + x.cwiseAbs().maxCoeff())) {
        ++unmatched;
        worst = std::max(worst, best);
      }
    }
    push({"descent_minimizers_matched", unmatched == 0, false, worst,
          std::to_string(minima.size()) + " oracle minimizers, " +
              std::to_string(unmatched) + " unmatched"});
  }

  // (b) The certified global minimum is not beaten by an exhaustive scan.
  const ReportPair* global = nullptr;
  for (const auto& rp : report.pairs)
    if (rp.verdict.kind == VerdictKind::GlobalMin && !global) global = &rp;
  if (global && p.n <= 3) {
    double extent = 1.0;
    for (const auto& rp : report.pairs)
      extent = std::max(extent, rp.pair.x.cwiseAbs().maxCoeff());
    const double half = 1.0 + 2.0 * extent;
    std::vector<std::pair<double, double>> box(p.n, {-half, half});
    const GridResult g = grid_scan(p, box, p.n <= 2 ? 200 : 60);
    const double slack = g.value - global->pair.primal.value;
    push({"grid_scan_not_below_global", slack >= -1e-6, false, slack,
          "grid best " + format_double(g.value) + " vs GlobalMin " +
              format_double(global->pair.primal.value)});
  } else {
    push({"grid_scan_not_below_global", true, true, 0.0,
          global ? "skipped: n > 3" : "skipped: no GlobalMin verdict"});
  }

  // (c) Verdict kinds agree with oracle Hessian inertia at the point.
  int kind_mismatches = 0;
  std::string detail;
  for (const auto& rp : report.pairs) {
    const Eigen::MatrixXd H = primal_hess_fd(p, rp.pair.x);
    const double hscale = 1.0 + H.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H,
                                                      Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(p.n - 1);
    const double thr = 1e-6 * hscale;
    bool ok = true;
    switch (rp.verdict.kind) {
      case VerdictKind::GlobalMin:
      case VerdictKind::LocalMin:
      case VerdictKind::WeakDoubleMinDualRestricted:
        ok = lo >= -thr;
        break;
      case VerdictKind::LocalMax:
        ok = hi <= thr;
        break;
      case VerdictKind::WeakDoubleMinPrimalRestricted:
      case VerdictKind::SaddlePrimal:
        ok = lo < -thr && hi > thr;
        break;
      case VerdictKind::SaddleDual:
      case VerdictKind::Unclassified:
        break;  // no primal-side claim to test
    }
    if (!ok) {
      ++kind_mismatches;
      detail += std::string(detail.empty() ? "" : "; ") +
                to_string(rp.verdict.kind) + " vs eig range [" +
                format_double(lo) + ", " + format_double(hi) + "]";
    }
  }
  push({"verdicts_match_oracle_inertia", kind_mismatches == 0, false,
        double(kind_mismatches),
        kind_mismatches == 0 ? "all verdict kinds consistent" : detail});

  return out;
}

}  // namespace oracle
}  // namespace qds
