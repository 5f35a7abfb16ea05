#include "qds/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qds {

namespace {

int kind_rank(VerdictKind k) { return static_cast<int>(k); }

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

Report solve_problem(const QuarticProblem& p, const SolverConfig& cfg,
                     const SolveOptions& opts) {
  cfg.validate();
  Report rep;
  rep.problem_digest = problem_digest(p);
  rep.config_echo = cfg;
  rep.f_pert = Eigen::VectorXd();

  SolverStats stats;
  const std::vector<DualCriticalPoint> points =
      find_critical_points(p, cfg, &stats);
  rep.diagnostics.seeds_total = stats.seeds_total;
  rep.diagnostics.newton_converged = stats.newton_converged;
  rep.diagnostics.newton_failed = stats.newton_failed;
  rep.diagnostics.dedup_merged = stats.dedup_merged;

  for (const auto& dcp : points) {
    if (dcp.region == Region::Outside) ++rep.diagnostics.outside_count;
    try {
      ReportPair rp;
      rp.pair = make_pair(p, dcp, cfg);
      rp.verdict = classify_pair(rp.pair, cfg);
      if (rp.verdict.certificate) {
        const ProbeReport probe =
            restricted_probe(p, rp.pair, *rp.verdict.certificate, cfg);
        rp.verdict.notes += std::string("; probe ") +
                            (probe.interior_minimum_at_zero ? "confirms"
                                                            : "REJECTS") +
                            " restricted minimum, min delta " +
                            format_double(probe.min_delta);
      }
      rep.pairs.push_back(std::move(rp));
    } catch (const InfeasibleDual&) {
      ++rep.diagnostics.infeasible_pairs;
    }
  }

  std::sort(rep.pairs.begin(), rep.pairs.end(),
            [](const ReportPair& a, const ReportPair& b) {
              if (a.pair.primal.value != b.pair.primal.value)
                return a.pair.primal.value < b.pair.primal.value;
              if (kind_rank(a.verdict.kind) != kind_rank(b.verdict.kind))
                return kind_rank(a.verdict.kind) < kind_rank(b.verdict.kind);
              return lex_less(a.pair.sigma, b.pair.sigma);
            });

  rep.degenerate = true;
  for (const auto& rp : rep.pairs)
    if (rp.verdict.branch == TheoremBranch::MinMax) rep.degenerate = false;

  // Rank same-kind local extrema: the triality theory singles out the
  // largest local minimum and the largest local maximum.
  const auto annotate_largest = [&](VerdictKind kind, const char* label) {
    ReportPair* best = nullptr;
    for (auto& rp : rep.pairs)
      if (rp.verdict.kind == kind &&
          (!best || rp.pair.primal.value > best->pair.primal.value))
        best = &rp;
    if (best) {
      if (!best->verdict.notes.empty()) best->verdict.notes += "; ";
      best->verdict.notes += label;
    }
  };
  annotate_largest(VerdictKind::LocalMin,
                   "largest local minimum in the computed critical set");
  annotate_largest(VerdictKind::LocalMax,
                   "largest local maximum in the computed critical set");

  if (opts.verify)
    rep.oracle_summary = oracle::cross_validate(rep, p, cfg);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization. Same lexical family as the problem files: '#' comments,
// whitespace-separated tokens. Free-text fields are percent-encoded.

namespace {

std::string encode_text(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  if (s.empty()) return "%";
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ',' ||
        c == ':' || c == ';' || c == '(' || c == ')') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

std::string decode_text(const std::string& s) {
  if (s == "%") return "";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() + 1) {
      if (i + 2 >= s.size()) throw ParseError("bad text escape");
      out.push_back(static_cast<char>(
          std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

class Writer {
 public:
  void kv(const std::string& key, const std::string& value) {
    out_ << key << " " << value << "\n";
  }
  void kv(const std::string& key, int value) {
    out_ << key << " " << value << "\n";
  }
  void kv(const std::string& key, std::uint64_t value) {
    out_ << key << " " << value << "\n";
  }
  void kv(const std::string& key, double value) {
    out_ << key << " " << format_double(value) << "\n";
  }
  void vec(const std::string& key, const Eigen::VectorXd& v) {
    out_ << key << " " << v.size();
    for (int i = 0; i < v.size(); ++i) out_ << " " << format_double(v(i));
    out_ << "\n";
  }
  void mat(const std::string& key, const Eigen::MatrixXd& m) {
    out_ << key << " " << m.rows() << " " << m.cols();
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        out_ << " " << format_double(m(i, j));
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::istringstream in(text);
    std::string w;
    while (in >> w) words_.push_back(w);
  }
  bool done() const { return pos_ >= words_.size(); }
  std::string next() {
    if (done()) throw ParseError("unexpected end of report");
    return words_[pos_++];
  }
  void expect(const std::string& key) {
    const std::string got = next();
    if (got != key)
      throw ParseError("expected '" + key + "', got '" + got + "'");
  }
  std::string field(const std::string& key) {
    expect(key);
    return next();
  }
  int field_int(const std::string& key) { return std::stoi(field(key)); }
  std::uint64_t field_u64(const std::string& key) {
    return std::stoull(field(key));
  }
  double field_double(const std::string& key) {
    return std::strtod(field(key).c_str(), nullptr);
  }
  Eigen::VectorXd field_vec(const std::string& key) {
    expect(key);
    const int size = std::stoi(next());
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v(i) = std::strtod(next().c_str(), nullptr);
    return v;
  }
  Eigen::MatrixXd field_mat(const std::string& key) {
    expect(key);
    const int rows = std::stoi(next());
    const int cols = std::stoi(next());
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        m(i, j) = std::strtod(next().c_str(), nullptr);
    return m;
  }

 private:
  std::vector<std::string> words_;
  std::size_t pos_ = 0;
};

Region region_from(const std::string& s) {
  if (s == "SaPlus") return Region::SaPlus;
  if (s == "SaMinus") return Region::SaMinus;
  if (s == "Boundary") return Region::Boundary;
  if (s == "Outside") return Region::Outside;
  throw ParseError("unknown region '" + s + "'");
}

DualClass dual_class_from(const std::string& s) {
  if (s == "LocalMin") return DualClass::LocalMin;
  if (s == "LocalMax") return DualClass::LocalMax;
  if (s == "Saddle") return DualClass::Saddle;
  if (s == "Degenerate") return DualClass::Degenerate;
  throw ParseError("unknown dual class '" + s + "'");
}

VerdictKind kind_from(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(VerdictKind::Unclassified); ++k)
    if (s == to_string(static_cast<VerdictKind>(k)))
      return static_cast<VerdictKind>(k);
  throw ParseError("unknown verdict kind '" + s + "'");
}

TheoremBranch branch_from(const std::string& s) {
  for (int b = 0; b <= static_cast<int>(TheoremBranch::Excluded); ++b)
    if (s == to_string(static_cast<TheoremBranch>(b)))
      return static_cast<TheoremBranch>(b);
  throw ParseError("unknown theorem branch '" + s + "'");
}

}  // namespace

std::string serialize_report(const Report& r) {
  Writer w;
  w.kv("report_format", 1);
  w.kv("problem_digest", r.problem_digest);
  w.kv("perturbed", r.perturbed ? 1 : 0);
  w.vec("f_pert", r.f_pert);
  w.kv("f_pert_norm", r.f_pert_norm);
  w.kv("degenerate", r.degenerate ? 1 : 0);

  w.kv("multistart_count", r.config_echo.multistart_count);
  w.kv("newton_max_iter", r.config_echo.newton_max_iter);
  w.kv("newton_tol", r.config_echo.newton_tol);
  w.kv("definiteness_tol", r.config_echo.definiteness_tol);
  w.kv("dedup_tol", r.config_echo.dedup_tol);
  w.kv("sample_box_halfwidth", r.config_echo.sample_box_halfwidth);
  w.kv("rng_seed", r.config_echo.rng_seed);
  w.kv("probe_radius", r.config_echo.probe_radius);
  w.kv("probe_samples", r.config_echo.probe_samples);

  w.kv("seeds_total", r.diagnostics.seeds_total);
  w.kv("newton_converged", r.diagnostics.newton_converged);
  w.kv("newton_failed", r.diagnostics.newton_failed);
  w.kv("dedup_merged", r.diagnostics.dedup_merged);
  w.kv("outside_count", r.diagnostics.outside_count);
  w.kv("infeasible_pairs", r.diagnostics.infeasible_pairs);

  w.kv("pairs", static_cast<int>(r.pairs.size()));
  for (const auto& rp : r.pairs) {
    w.kv("pair", "begin");
    w.vec("sigma", rp.pair.sigma);
    w.vec("x", rp.pair.x);
    w.kv("primal_value", rp.pair.primal.value);
    w.vec("primal_grad", rp.pair.primal.grad);
    w.mat("primal_hess", rp.pair.primal.hess);
    w.vec("lambda", rp.pair.primal.lambda);
    w.kv("dual_value", rp.pair.dual.value);
    w.vec("dual_grad", rp.pair.dual.grad);
    w.mat("dual_hess", rp.pair.dual.hess);
    w.kv("region", to_string(rp.pair.dual.region));
    w.vec("g_eigenvalues", rp.pair.dual.g_eigenvalues);
    w.mat("G", rp.pair.dual.G);
    w.mat("F", rp.pair.F);
    w.kv("gap_residual", rp.pair.gap_residual);
    w.kv("dual_class", to_string(rp.pair.dual_class));
    w.kv("checks", static_cast<int>(rp.pair.checks.size()));
    for (const auto& c : rp.pair.checks) {
      w.kv("check", encode_text(c.name));
      w.kv("magnitude", c.magnitude);
      w.kv("tolerance", c.tolerance);
      w.kv("ok", c.ok ? 1 : 0);
    }
    w.kv("verdict", to_string(rp.verdict.kind));
    w.kv("branch", to_string(rp.verdict.branch));
    w.kv("notes", encode_text(rp.verdict.notes));
    w.kv("has_certificate", rp.verdict.certificate ? 1 : 0);
    if (rp.verdict.certificate) {
      const auto& c = *rp.verdict.certificate;
      w.kv("certificate_side",
           c.side == SubspaceCertificate::Side::PrimalP ? "P" : "Q");
      w.mat("certificate_basis", c.basis);
      w.kv("certificate_rank", c.rank);
      w.vec("restricted_hessian_eigs", c.restricted_hessian_eigs);
    }
  }

  w.kv("has_oracle_summary", r.oracle_summary ? 1 : 0);
  if (r.oracle_summary) {
    w.kv("oracle_checks", static_cast<int>(r.oracle_summary->checks.size()));
    for (const auto& c : r.oracle_summary->checks) {
      w.kv("oracle_check", encode_text(c.name));
      w.kv("ok", c.ok ? 1 : 0);
      w.kv("skipped", c.skipped ? 1 : 0);
      w.kv("magnitude", c.magnitude);
      w.kv("detail", encode_text(c.detail));
    }
    w.kv("oracle_mismatches", r.oracle_summary->mismatches);
  }
  return w.str();
}

Report parse_report(const std::string& text) {
  Reader rd(text);
  Report r;
  if (rd.field_int("report_format") != 1)
    throw ParseError("unsupported report format");
  r.problem_digest = rd.field("problem_digest");
  r.perturbed = rd.field_int("perturbed") != 0;
  r.f_pert = rd.field_vec("f_pert");
  r.f_pert_norm = rd.field_double("f_pert_norm");
  r.degenerate = rd.field_int("degenerate") != 0;

  r.config_echo.multistart_count = rd.field_int("multistart_count");
  r.config_echo.newton_max_iter = rd.field_int("newton_max_iter");
  r.config_echo.newton_tol = rd.field_double("newton_tol");
  r.config_echo.definiteness_tol = rd.field_double("definiteness_tol");
  r.config_echo.dedup_tol = rd.field_double("dedup_tol");
  r.config_echo.sample_box_halfwidth = rd.field_double("sample_box_halfwidth");
  r.config_echo.rng_seed = rd.field_u64("rng_seed");
  r.config_echo.probe_radius = rd.field_double("probe_radius");
  r.config_echo.probe_samples = rd.field_int("probe_samples");

  r.diagnostics.seeds_total = rd.field_int("seeds_total");
  r.diagnostics.newton_converged = rd.field_int("newton_converged");
  r.diagnostics.newton_failed = rd.field_int("newton_failed");
  r.diagnostics.dedup_merged = rd.field_int("dedup_merged");
  r.diagnostics.outside_count = rd.field_int("outside_count");
  r.diagnostics.infeasible_pairs = rd.field_int("infeasible_pairs");

  const int npairs = rd.field_int("pairs");
  for (int i = 0; i < npairs; ++i) {
    rd.expect("pair");
    rd.expect("begin");
    ReportPair rp;
    rp.pair.sigma = rd.field_vec("sigma");
    rp.pair.x = rd.field_vec("x");
    rp.pair.primal.value = rd.field_double("primal_value");
    rp.pair.primal.grad = rd.field_vec("primal_grad");
    rp.pair.primal.hess = rd.field_mat("primal_hess");
    rp.pair.primal.lambda = rd.field_vec("lambda");
    rp.pair.dual.value = rd.field_double("dual_value");
    rp.pair.dual.grad = rd.field_vec("dual_grad");
    rp.pair.dual.hess = rd.field_mat("dual_hess");
    rp.pair.dual.region = region_from(rd.field("region"));
    rp.pair.dual.g_eigenvalues = rd.field_vec("g_eigenvalues");
    rp.pair.dual.G = rd.field_mat("G");
    rp.pair.dual.x = rp.pair.x;
    rp.pair.dual.feasible = true;
    rp.pair.F = rd.field_mat("F");
    rp.pair.gap_residual = rd.field_double("gap_residual");
    rp.pair.dual_class = dual_class_from(rd.field("dual_class"));
    const int nchecks = rd.field_int("checks");
    for (int c = 0; c < nchecks; ++c) {
      InvariantCheck chk;
      chk.name = decode_text(rd.field("check"));
      chk.magnitude = rd.field_double("magnitude");
      chk.tolerance = rd.field_double("tolerance");
      chk.ok = rd.field_int("ok") != 0;
      rp.pair.checks.push_back(std::move(chk));
    }
    rp.verdict.kind = kind_from(rd.field("verdict"));
    rp.verdict.branch = branch_from(rd.field("branch"));
    rp.verdict.notes = decode_text(rd.field("notes"));
    if (rd.field_int("has_certificate")) {
      SubspaceCertificate cert;
      cert.side = rd.field("certificate_side") == "P"
                      ? SubspaceCertificate::Side::PrimalP
                      : SubspaceCertificate::Side::DualQ;
      cert.basis = rd.field_mat("certificate_basis");
      cert.rank = rd.field_int("certificate_rank");
      cert.restricted_hessian_eigs = rd.field_vec("restricted_hessian_eigs");
      rp.verdict.certificate = std::move(cert);
    }
    r.pairs.push_back(std::move(rp));
  }

  if (rd.field_int("has_oracle_summary")) {
    oracle::ValidationSummary vs;
    const int nchecks = rd.field_int("oracle_checks");
    for (int c = 0; c < nchecks; ++c) {
      oracle::ValidationCheck chk;
      chk.name = decode_text(rd.field("oracle_check"));
      chk.ok = rd.field_int("ok") != 0;
      chk.skipped = rd.field_int("skipped") != 0;
      chk.magnitude = rd.field_double("magnitude");
      chk.detail = decode_text(rd.field("detail"));
      vs.checks.push_back(std::move(chk));
    }
    vs.mismatches = rd.field_int("oracle_mismatches");
    r.oracle_summary = std::move(vs);
  }
  return r;
}

bool reports_equal(const Report& a, const Report& b) {
  return serialize_report(a) == serialize_report(b);
}

std::string render_report_text(const Report& r, const QuarticProblem& p) {
  std::ostringstream out;
  char line[256];
  out << "problem digest " << r.problem_digest << " (n=" << p.n
      << ", m=" << p.m << ")\n";
  if (r.perturbed) {
    out << "perturbed: f += [";
    for (int i = 0; i < r.f_pert.size(); ++i)
      out << (i ? ", " : "") << format_double(r.f_pert(i));
    out << "], |f_pert| = " << format_double(r.f_pert_norm) << "\n";
  }
  out << r.pairs.size() << " critical pair(s)\n\n";

  int idx = 0;
  for (const auto& rp : r.pairs) {
    ++idx;
    std::snprintf(line, sizeof(line), "[%d] %-30s region %-8s dual %-9s\n",
                  idx, to_string(rp.verdict.kind),
                  to_string(rp.pair.dual.region),
                  to_string(rp.pair.dual_class));
    out << line;
    out << "    sigma = [";
    for (int i = 0; i < rp.pair.sigma.size(); ++i)
      out << (i ? ", " : "") << format_double(rp.pair.sigma(i));
    out << "]\n    x     = [";
    for (int i = 0; i < rp.pair.x.size(); ++i)
      out << (i ? ", " : "") << format_double(rp.pair.x(i));
    out << "]\n";
    std::snprintf(line, sizeof(line),
                  "    Pi = %.10g   Pi^d = %.10g   |gap| = %.3g\n",
                  rp.pair.primal.value, rp.pair.dual.value,
                  rp.pair.gap_residual);
    out << line;
    if (!rp.verdict.notes.empty())
      out << "    notes: " << rp.verdict.notes << "\n";
    for (const auto& c : rp.pair.checks)
      if (!c.ok) {
        std::snprintf(line, sizeof(line),
                      "    CHECK FAILED %s: %.3g > %.3g\n", c.name.c_str(),
                      c.magnitude, c.tolerance);
        out << line;
      }
  }

  out << "\ndiagnostics: seeds " << r.diagnostics.seeds_total << ", converged "
      << r.diagnostics.newton_converged << ", failed "
      << r.diagnostics.newton_failed << ", merged "
      << r.diagnostics.dedup_merged << ", outside "
      << r.diagnostics.outside_count << ", infeasible "
      << r.diagnostics.infeasible_pairs << "\n";

  if (r.degenerate) {
    out << "\nWARNING: no critical point with G(sigma) >= 0 was found; the\n"
           "dual certificate for a global minimum is unavailable. This is\n"
           "typical of symmetric instances (multiple tied minimizers).\n"
           "Consider a small linear perturbation (--perturb or "
           "--auto-perturb).\n";
  }

  if (r.oracle_summary) {
    out << "\noracle cross-validation: "
        << (r.oracle_summary->all_ok() ? "PASS" : "MISMATCH") << "\n";
    for (const auto& c : r.oracle_summary->checks) {
      out << "  " << (c.skipped ? "skip" : (c.ok ? " ok " : "FAIL")) << " "
          << c.name << ": " << c.detail << "\n";
    }
  }
  return out.str();
}

}  // namespace qds
