#include "qds/dual_solver.hpp"

#include <algorithm>
#include <cmath>

#include "qds/rng.hpp"

namespace qds {

const char* to_string(DualClass c) {
  switch (c) {
    case DualClass::LocalMin: return "LocalMin";
    case DualClass::LocalMax: return "LocalMax";
    case DualClass::Saddle: return "Saddle";
    case DualClass::Degenerate: return "Degenerate";
  }
  return "?";
}

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

bool is_diagonal(const Eigen::MatrixXd& M, double tol) {
  const double scale = M.cwiseAbs().maxCoeff();
  Eigen::MatrixXd off = M;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol * (1.0 + scale);
}

DualClass classify_hessian(const linalg::Inertia& in) {
  if (in.zero > 0) return DualClass::Degenerate;
  if (in.negative == 0) return DualClass::LocalMin;
  if (in.positive == 0) return DualClass::LocalMax;
  return DualClass::Saddle;
}

DualCriticalPoint make_point(const QuarticProblem& p,
                             const Eigen::VectorXd& sigma,
                             const SolverConfig& cfg) {
  const DualEval de = dual_eval(p, sigma, cfg.definiteness_tol);
  DualCriticalPoint out;
  out.sigma = sigma;
  out.region = de.region;
  out.grad_norm = de.grad.cwiseAbs().maxCoeff();
  out.hess_inertia = linalg::inertia(de.hess, cfg.definiteness_tol);
  out.dual_class = classify_hessian(out.hess_inertia);
  out.dual_value = de.value;
  return out;
}

// ---- polynomial helpers (coefficients ascending in degree) ----

Eigen::VectorXd poly_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) c(i + j) += a(i) * b(j);
  return c;
}

Eigen::VectorXd poly_add(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(std::max(a.size(), b.size()));
  c.head(a.size()) += a;
  c.head(b.size()) += b;
  return c;
}

}  // namespace

std::vector<double> real_polynomial_roots(const Eigen::VectorXd& coeffs) {
  // Trim negligible leading coefficients.
  const double scale = coeffs.cwiseAbs().maxCoeff();
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs(deg)) <= 1e-13 * (1.0 + scale)) --deg;
  std::vector<double> roots;
  if (deg < 1) return roots;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    companion(i, deg - 1) = -coeffs(i) / coeffs(deg);

  const Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real())))
      roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::optional<SeparableStructure> detect_separable(const QuarticProblem& p) {
  std::vector<const Eigen::MatrixXd*> mats;
  mats.push_back(&p.A);
  for (const auto& B : p.B) mats.push_back(&B);

  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(p.n, p.n);
  bool all_diag = true;
  for (const auto* M : mats)
    if (!is_diagonal(*M, 1e-13)) all_diag = false;

  if (!all_diag) {
    // A generic combination of a commuting family separates the joint
    // eigenspaces; retry a few weight draws before giving up.
    Rng rng(0x5eedu);
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(p.n, p.n);
      for (const auto* M : mats) S += rng.normal() * (*M);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      Q = es.eigenvectors();
      ok = true;
      for (const auto* M : mats) {
        if (!is_diagonal(Q.transpose() * (*M) * Q, 1e-10)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) return std::nullopt;
  }

  SeparableStructure s;
  s.Q = Q;
  s.a = (Q.transpose() * p.A * Q).diagonal();
  s.b.resize(p.m, p.n);
  for (int k = 0; k < p.m; ++k)
    s.b.row(k) = (Q.transpose() * p.B[k] * Q).diagonal().transpose();
  s.f = Q.transpose() * p.f;

  // Each coordinate may couple to at most one measure.
  const double bscale = s.b.cwiseAbs().maxCoeff();
  const double bthr = 1e-12 * (1.0 + bscale);
  for (int i = 0; i < p.n; ++i) {
    int owners = 0;
    for (int k = 0; k < p.m; ++k)
      if (std::abs(s.b(k, i)) > bthr) ++owners;
    if (owners > 1) return std::nullopt;
  }

  s.axis_poles.assign(p.m, {});
  for (int k = 0; k < p.m; ++k) {
    for (int i = 0; i < p.n; ++i) {
      if (std::abs(s.b(k, i)) > bthr)
        s.axis_poles[k].push_back(-s.a(i) / s.b(k, i));
    }
    std::sort(s.axis_poles[k].begin(), s.axis_poles[k].end());
    s.axis_poles[k].erase(
        std::unique(s.axis_poles[k].begin(), s.axis_poles[k].end(),
                    [](double x, double y) {
                      return std::abs(x - y) <=
                             1e-9 * (1.0 + std::abs(x) + std::abs(y));
                    }),
        s.axis_poles[k].end());
  }
  return s;
}

namespace {

// Stationarity along one separable axis: the rational equation
//   1/2 sum_i f_i^2 b_i / (a_i + s b_i)^2 = s + d_k
// cleared to a polynomial over the active coordinates (those with b_i and
// f_i both nonzero).
struct AxisProblem {
  std::vector<double> a, b, f2;  // active coordinates
  double d = 0.0;

  double grad(double s) const {
    double g = -s - d;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double den = a[i] + s * b[i];
      g += 0.5 * f2[i] * b[i] / (den * den);
    }
    return g;
  }

  double dgrad(double s) const {
    double g = -1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double den = a[i] + s * b[i];
      g -= f2[i] * b[i] * b[i] / (den * den * den);
    }
    return g;
  }

  Eigen::VectorXd polynomial() const {
    // (s + d) prod_i (a_i + b_i s)^2 - 1/2 sum_i f2_i b_i prod_{j!=i} (...)^2
    Eigen::VectorXd linear(2);
    linear << d, 1.0;
    Eigen::VectorXd lhs = linear;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Eigen::VectorXd fac(2);
      fac << a[i], b[i];
      lhs = poly_mul(lhs, poly_mul(fac, fac));
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      Eigen::VectorXd term(1);
      term << 0.5 * f2[i] * b[i];
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (j == i) continue;
        Eigen::VectorXd fac(2);
        fac << a[j], b[j];
        term = poly_mul(term, poly_mul(fac, fac));
      }
      rhs = poly_add(rhs, term);
    }
    return poly_add(lhs, -rhs);
  }
};

std::vector<double> axis_roots(const AxisProblem& ax,
                               const std::vector<double>& poles,
                               double newton_tol) {
  std::vector<double> roots = real_polynomial_roots(ax.polynomial());
  std::vector<double> out;
  for (double r : roots) {
    // Polish on the rational equation.
    double s = r;
    for (int it = 0; it < 40; ++it) {
      const double g = ax.grad(s);
      if (std::abs(g) <= newton_tol) break;
      const double dg = ax.dgrad(s);
      if (dg == 0.0 || !std::isfinite(dg)) break;
      s -= g / dg;
    }
    if (!std::isfinite(s) || std::abs(ax.grad(s)) > 1e-8) continue;
    bool at_pole = false;
    for (double pole : poles)
      if (std::abs(s - pole) <= 1e-9 * (1.0 + std::abs(pole))) at_pole = true;
    if (at_pole) continue;
    bool dup = false;
    for (double q : out)
      if (std::abs(q - s) <= 1e-9 * (1.0 + std::abs(q))) dup = true;
    if (!dup) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> enumerate_separable(const QuarticProblem& p,
                                                 const SeparableStructure& s,
                                                 double newton_tol) {
  const double bscale = s.b.cwiseAbs().maxCoeff();
  const double bthr = 1e-12 * (1.0 + bscale);

  // A coordinate owned by no measure contributes a fixed a_i; if a_i = 0
  // while f_i != 0 the dual is infeasible everywhere.
  for (int i = 0; i < p.n; ++i) {
    bool owned = false;
    for (int k = 0; k < p.m; ++k)
      if (std::abs(s.b(k, i)) > bthr) owned = true;
    if (!owned && std::abs(s.a(i)) <= 1e-14 && std::abs(s.f(i)) > 1e-14)
      return {};
  }

  std::vector<std::vector<double>> roots(p.m);
  for (int k = 0; k < p.m; ++k) {
    AxisProblem ax;
    ax.d = p.d(k);
    for (int i = 0; i < p.n; ++i) {
      if (std::abs(s.b(k, i)) > bthr && std::abs(s.f(i)) > 0.0) {
        ax.a.push_back(s.a(i));
        ax.b.push_back(s.b(k, i));
        ax.f2.push_back(s.f(i) * s.f(i));
      }
    }
    roots[k] = axis_roots(ax, s.axis_poles[k], newton_tol);
    if (roots[k].empty()) return {};
  }

  std::vector<Eigen::VectorXd> points;
  std::vector<int> idx(p.m, 0);
  while (true) {
    Eigen::VectorXd sigma(p.m);
    for (int k = 0; k < p.m; ++k) sigma(k) = roots[k][idx[k]];
    points.push_back(sigma);
    int k = 0;
    while (k < p.m) {
      if (++idx[k] < static_cast<int>(roots[k].size())) break;
      idx[k] = 0;
      ++k;
    }
    if (k == p.m) break;
  }
  return points;
}

std::vector<Eigen::VectorXd> seed_candidates(const QuarticProblem& p,
                                             const SolverConfig& cfg) {
  cfg.validate();
  std::vector<Eigen::VectorXd> seeds;

  // Structured seeds sigma = Lambda(x0) - d for x0 in {0, A^+ f}.
  seeds.push_back(-p.d);
  {
    const Eigen::VectorXd x0 = linalg::pseudo_inverse(p.A) * p.f;
    seeds.push_back(lambda_map(p, x0) - p.d);
  }

  // Orthant probes at two scales; covers tiny-corner cells that random
  // box samples rarely hit.
  const double dscale = 1.0 + p.d.cwiseAbs().maxCoeff();
  if (p.m <= 4) {
    for (int mask = 0; mask < (1 << p.m); ++mask) {
      for (double scale : {0.05, 0.5}) {
        Eigen::VectorXd sv(p.m);
        for (int k = 0; k < p.m; ++k)
          sv(k) = ((mask >> k) & 1 ? 1.0 : -1.0) * scale * dscale;
        seeds.push_back(sv);
      }
    }
  }

  // Pole-cell seeds where the pole structure is computable. Two per-axis
  // resolutions: a fine ladder, and a core fallback when the Cartesian
  // product would explode.
  if (const auto s = detect_separable(p)) {
    const std::size_t cap = 4096;
    std::vector<std::vector<double>> fine(p.m), core(p.m);
    for (int k = 0; k < p.m; ++k) {
      const auto& poles = s->axis_poles[k];
      if (poles.empty()) {
        fine[k] = core[k] = {-p.d(k)};
        continue;
      }
      double span = poles.back() - poles.front();
      if (span < 1.0) span = 1.0;
      for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
        const double lo = poles[i], hi = poles[i + 1];
        fine[k].push_back(0.5 * (lo + hi));
        fine[k].push_back(lo + 0.25 * (hi - lo));
        fine[k].push_back(lo + 0.75 * (hi - lo));
        core[k].push_back(0.5 * (lo + hi));
      }
      // Unbounded cells: geometric ladder away from the extreme poles.
      // Small offsets matter: near-symmetric instances put critical points
      // within 1e-3 of a pole.
      for (double step : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        fine[k].push_back(poles.front() - step * span);
        fine[k].push_back(poles.back() + step * span);
      }
      for (double step : {1e-3, 0.5, 5.0}) {
        core[k].push_back(poles.front() - step * span);
        core[k].push_back(poles.back() + step * span);
      }
      // Ladder around interior poles, clipped to the neighboring cells.
      for (std::size_t i = 0; i < poles.size(); ++i) {
        for (double step : {1e-4, 1e-3, 1e-2}) {
          const double lo = poles[i] - step * span;
          const double hi = poles[i] + step * span;
          if (i == 0 || lo > poles[i - 1]) fine[k].push_back(lo);
          if (i + 1 == poles.size() || hi < poles[i + 1])
            fine[k].push_back(hi);
        }
      }
    }
    const auto product_size = [&](const std::vector<std::vector<double>>& v) {
      std::size_t combos = 1;
      for (const auto& axis : v) {
        combos *= axis.size();
        if (combos > 16 * cap) return combos;  // avoid overflow
      }
      return combos;
    };
    const auto& grid = product_size(fine) <= cap ? fine : core;
    const std::size_t combos = product_size(grid);
    const std::size_t stride = combos <= cap ? 1 : (combos + cap - 1) / cap;
    std::vector<int> idx(p.m, 0);
    std::size_t count = 0;
    while (true) {
      if (count % stride == 0) {
        Eigen::VectorXd sv(p.m);
        for (int k = 0; k < p.m; ++k) sv(k) = grid[k][idx[k]];
        seeds.push_back(sv);
      }
      ++count;
      int k = 0;
      while (k < p.m) {
        if (++idx[k] < static_cast<int>(grid[k].size())) break;
        idx[k] = 0;
        ++k;
      }
      if (k == p.m) break;
    }
  }

  // Seeded box samples fill up to multistart_count.
  Rng rng(cfg.rng_seed);
  const double h = cfg.sample_box_halfwidth;
  const int want = cfg.multistart_count;
  for (int i = 0; i < want; ++i)
    seeds.push_back(rng.uniform_vector(p.m, -h, h));

  return seeds;
}

NewtonResult newton_refine(const QuarticProblem& p,
                           const Eigen::VectorXd& sigma0,
                           const SolverConfig& cfg) {
  NewtonResult res;
  if (sigma0.size() != p.m) throw DimensionError("sigma0 must have length m");

  Eigen::VectorXd sigma = sigma0;
  DualEval de = dual_eval(p, sigma, cfg.definiteness_tol);
  if (!de.grad.allFinite()) {
    res.status = NewtonStatus::Infeasible;
    return res;
  }
  double gnorm = de.grad.cwiseAbs().maxCoeff();
  if (gnorm <= cfg.newton_tol) {
    res.status = NewtonStatus::Converged;
    res.point = make_point(p, sigma, cfg);
    res.iterations = 0;
    return res;
  }

  const auto near_pole = [&](const Eigen::MatrixXd& G) {
    const double scale = 1.0 + G.cwiseAbs().maxCoeff();
    const double det = G.determinant();
    return std::abs(det) < 1e-12 * std::pow(scale, p.n);
  };
  linalg::Inertia cell = linalg::inertia(de.G, cfg.definiteness_tol);

  for (int iter = 1; iter <= cfg.newton_max_iter; ++iter) {
    // Newton direction, regularized if the Hessian is near-singular.
    Eigen::VectorXd step;
    const double hscale = 1.0 + de.hess.cwiseAbs().maxCoeff();
    bool have_step = false;
    for (double mu : {0.0, 1e-12, 1e-8, 1e-4}) {
      const Eigen::MatrixXd H =
          de.hess + mu * hscale * Eigen::MatrixXd::Identity(p.m, p.m);
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
      if (!lu.isInvertible()) continue;
      step = lu.solve(-de.grad);
      if (step.allFinite()) {
        have_step = true;
        break;
      }
    }
    if (!have_step) step = -de.grad;  // gradient fallback

    // Backtrack: stay in the current pole cell and decrease ||grad||.
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 45; ++bt, alpha *= 0.5) {
      const Eigen::VectorXd trial = sigma + alpha * step;
      const DualEval td = dual_eval(p, trial, cfg.definiteness_tol);
      if (!td.grad.allFinite()) continue;
      if (near_pole(td.G)) continue;
      if (linalg::inertia(td.G, cfg.definiteness_tol) != cell) continue;
      const double tnorm = td.grad.cwiseAbs().maxCoeff();
      if (tnorm >= gnorm * (1.0 - 1e-4 * alpha)) continue;
      sigma = trial;
      de = td;
      gnorm = tnorm;
      accepted = true;
      break;
    }
    if (!accepted) {
      res.status = NewtonStatus::NoConvergence;
      res.iterations = iter;
      return res;
    }
    if (gnorm <= cfg.newton_tol) {
      res.status = NewtonStatus::Converged;
      res.point = make_point(p, sigma, cfg);
      res.iterations = iter;
      return res;
    }
  }
  res.status = NewtonStatus::NoConvergence;
  res.iterations = cfg.newton_max_iter;
  return res;
}

std::vector<DualCriticalPoint> find_critical_points(const QuarticProblem& p,
                                                    const SolverConfig& cfg,
                                                    SolverStats* stats) {
  const std::vector<Eigen::VectorXd> seeds = seed_candidates(p, cfg);
  SolverStats st;
  st.seeds_total = static_cast<int>(seeds.size());

  std::vector<DualCriticalPoint> found;
  for (const auto& seed : seeds) {
    const NewtonResult r = newton_refine(p, seed, cfg);
    if (r.status == NewtonStatus::Converged && r.point) {
      ++st.newton_converged;
      found.push_back(*r.point);
    } else {
      ++st.newton_failed;
    }
  }

  // Deterministic order before deduplication: best convergence first so the
  // surviving representative of each cluster is the sharpest one.
  std::sort(found.begin(), found.end(),
            [](const DualCriticalPoint& a, const DualCriticalPoint& b) {
              if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
              return lex_less(a.sigma, b.sigma);
            });
  std::vector<DualCriticalPoint> unique;
  for (const auto& cp : found) {
    bool dup = false;
    for (const auto& kept : unique) {
      const double thr =
          cfg.dedup_tol * (1.0 + kept.sigma.cwiseAbs().maxCoeff());
      if ((cp.sigma - kept.sigma).cwiseAbs().maxCoeff() <= thr) {
        dup = true;
        break;
      }
    }
    if (dup) {
      ++st.dedup_merged;
    } else {
      unique.push_back(cp);
    }
  }

  std::sort(unique.begin(), unique.end(),
            [](const DualCriticalPoint& a, const DualCriticalPoint& b) {
              const bool af = std::isfinite(a.dual_value);
              const bool bf = std::isfinite(b.dual_value);
              if (af != bf) return af;  // finite values first
              if (af && a.dual_value != b.dual_value)
                return a.dual_value > b.dual_value;
              return lex_less(a.sigma, b.sigma);
            });
  if (stats) *stats = st;
  return unique;
}

}  // namespace qds
