#include "qds/problem.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qds {

namespace {

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_symmetric(Eigen::MatrixXd& m, const std::string& name) {
  const double thr = 1e-12 * (1.0 + max_abs(m));
  const double asym = max_abs(m - m.transpose());
  if (asym > thr) {
    throw DomainError(name + " is asymmetric by " + format_double(asym) +
                      " (tolerance " + format_double(thr) + ")");
  }
  m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace

SolverConfig SolverConfig::defaults_for(const QuarticProblem& p) {
  SolverConfig cfg;
  cfg.multistart_count = 64 * std::max(1, p.m);
  cfg.sample_box_halfwidth =
      10.0 * (1.0 + (p.d.size() > 0 ? p.d.cwiseAbs().maxCoeff() : 0.0));
  return cfg;
}

void SolverConfig::validate() const {
  if (multistart_count < 1) throw DomainError("multistart_count must be >= 1");
  if (newton_max_iter < 1) throw DomainError("newton_max_iter must be >= 1");
  if (!(newton_tol > 0) || !(definiteness_tol > 0) || !(dedup_tol > 0)) {
    throw DomainError("solver tolerances must be strictly positive");
  }
  if (sample_box_halfwidth < 0 || probe_radius < 0)
    throw DomainError("box halfwidth and probe radius must be nonnegative");
  if (probe_samples < 1) throw DomainError("probe_samples must be >= 1");
}

QuarticProblem validate_problem(QuarticProblem p) {
  if (p.n < 1 || p.m < 1) throw DimensionError("n and m must be positive");
  if (p.A.rows() != p.n || p.A.cols() != p.n)
    throw DimensionError("A must be n x n");
  if (static_cast<int>(p.B.size()) != p.m)
    throw DimensionError("expected m matrices B^k");
  for (int k = 0; k < p.m; ++k) {
    if (p.B[k].rows() != p.n || p.B[k].cols() != p.n)
      throw DimensionError("B^" + std::to_string(k + 1) + " must be n x n");
  }
  if (p.beta.size() != p.m) throw DimensionError("|beta| must equal m");
  if (p.d.size() != p.m) throw DimensionError("|d| must equal m");
  if (p.f.size() != p.n) throw DimensionError("|f| must equal n");
  for (int k = 0; k < p.m; ++k) {
    if (!(p.beta(k) > 0.0))
      throw DomainError("beta_" + std::to_string(k + 1) +
                        " must be strictly positive");
  }
  check_symmetric(p.A, "A");
  for (int k = 0; k < p.m; ++k)
    check_symmetric(p.B[k], "B^" + std::to_string(k + 1));
  return p;
}

QuarticProblem normalize_beta(const QuarticProblem& p) {
  // beta (1/2 x'Bx - d)^2 = (1/2 x'(sqrt(beta) B)x - sqrt(beta) d)^2,
  // so both B^k and d^k pick up the factor sqrt(beta_k).
  QuarticProblem q = p;
  for (int k = 0; k < p.m; ++k) {
    const double s = std::sqrt(p.beta(k));
    q.B[k] = s * p.B[k];
    q.d(k) = s * p.d(k);
    q.beta(k) = 1.0;
  }
  return q;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // collapse negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// Token stream over the problem/report text family: '#' starts a comment
// running to end of line; tokens are whitespace-separated words.
class Tokens {
 public:
  explicit Tokens(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    bool comment = false;
    for (char c : text) {
      if (c == '#') comment = true;
      if (c == '\n') comment = false;
      cleaned.push_back(comment ? ' ' : c);
    }
    std::istringstream in(cleaned);
    std::string w;
    while (in >> w) words_.push_back(w);
  }

  bool done() const { return pos_ >= words_.size(); }

  const std::string& peek() const {
    if (done()) throw ParseError("unexpected end of document");
    return words_[pos_];
  }

  std::string next() {
    if (done()) throw ParseError("unexpected end of document");
    return words_[pos_++];
  }

  double next_number() {
    const std::string w = next();
    const char* s = w.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw ParseError("expected a number, got '" + w + "'");
    return v;
  }

  long next_integer() {
    const std::string w = next();
    const char* s = w.c_str();
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
      throw ParseError("expected an integer, got '" + w + "'");
    return v;
  }

 private:
  std::vector<std::string> words_;
  std::size_t pos_ = 0;
};

Eigen::MatrixXd read_matrix(Tokens& t, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = t.next_number();
  return m;
}

Eigen::VectorXd read_vector(Tokens& t, int size) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = t.next_number();
  return v;
}

}  // namespace

QuarticProblem parse_problem(const std::string& text) {
  Tokens t(text);
  QuarticProblem p;
  bool have_n = false, have_m = false;
  bool have_A = false, have_beta = false, have_d = false, have_f = false;
  std::vector<bool> have_B;

  while (!t.done()) {
    const std::string key = t.next();
    if (key == "n") {
      p.n = static_cast<int>(t.next_integer());
      if (p.n < 1) throw DomainError("n must be positive");
      have_n = true;
    } else if (key == "m") {
      p.m = static_cast<int>(t.next_integer());
      if (p.m < 1) throw DomainError("m must be positive");
      p.B.assign(p.m, Eigen::MatrixXd());
      have_B.assign(p.m, false);
      have_m = true;
    } else if (key == "A") {
      if (!have_n) throw ParseError("n must precede A");
      p.A = read_matrix(t, p.n, p.n);
      have_A = true;
    } else if (key == "B") {
      if (!have_n || !have_m) throw ParseError("n and m must precede B");
      const long k = t.next_integer();
      if (k < 1 || k > p.m)
        throw ParseError("B index " + std::to_string(k) + " out of range");
      p.B[k - 1] = read_matrix(t, p.n, p.n);
      have_B[k - 1] = true;
    } else if (key == "beta") {
      if (!have_m) throw ParseError("m must precede beta");
      p.beta = read_vector(t, p.m);
      have_beta = true;
    } else if (key == "d") {
      if (!have_m) throw ParseError("m must precede d");
      p.d = read_vector(t, p.m);
      have_d = true;
    } else if (key == "f") {
      if (!have_n) throw ParseError("n must precede f");
      p.f = read_vector(t, p.n);
      have_f = true;
    } else {
      throw ParseError("unknown field '" + key + "'");
    }
  }

  if (!have_n || !have_m) throw ParseError("missing n or m");
  if (!have_A) throw ParseError("missing A");
  for (int k = 0; k < p.m; ++k)
    if (!have_B[k]) throw ParseError("missing B " + std::to_string(k + 1));
  if (!have_beta) p.beta = Eigen::VectorXd::Ones(p.m);
  if (!have_d) throw ParseError("missing d");
  if (!have_f) throw ParseError("missing f");
  return validate_problem(std::move(p));
}

QuarticProblem load_problem(const std::string& text) {
  return normalize_beta(parse_problem(text));
}

QuarticProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str());
}

namespace {

void write_matrix(std::ostringstream& out, const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << format_double(m(i, j));
    }
    out << "\n";
  }
}

void write_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i)
    out << " " << format_double(v(i));
  out << "\n";
}

}  // namespace

std::string serialize_problem(const QuarticProblem& p) {
  std::ostringstream out;
  out << "n " << p.n << "\n";
  out << "m " << p.m << "\n";
  out << "A\n";
  write_matrix(out, p.A);
  for (int k = 0; k < p.m; ++k) {
    out << "B " << (k + 1) << "\n";
    write_matrix(out, p.B[k]);
  }
  out << "beta";
  write_vector(out, p.beta);
  out << "d";
  write_vector(out, p.d);
  out << "f";
  write_vector(out, p.f);
  return out.str();
}

std::string problem_digest(const QuarticProblem& p) {
  const std::string text = serialize_problem(p);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

bool problems_equal(const QuarticProblem& a, const QuarticProblem& b) {
  if (a.n != b.n || a.m != b.m) return false;
  if (a.A != b.A || a.beta != b.beta || a.d != b.d || a.f != b.f) return false;
  for (int k = 0; k < a.m; ++k)
    if (a.B[k] != b.B[k]) return false;
  return true;
}

}  // namespace qds
