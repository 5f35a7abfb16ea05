// Command-line front end: solve problem files, verify against the oracle,
// apply linear perturbations and export contour data.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qds/perturbation.hpp"
#include "qds/report.hpp"

namespace {

std::vector<double> parse_csv_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::strtod(item.c_str(), nullptr));
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qds::Error("cannot write '" + path + "'");
  out << content;
}

void export_contour(const qds::QuarticProblem& p, const std::string& path,
                    int grid, double xmin, double xmax, double ymin,
                    double ymax) {
  if (p.n != 2)
    throw qds::DimensionError("contour export requires n = 2");
  if (grid < 1) throw qds::DomainError("grid must be >= 1");
  std::ostringstream out;
  out << "x1,x2,value\n";
  Eigen::VectorXd x(2);
  for (int i = 0; i < grid; ++i) {
    x(0) = grid == 1 ? xmin : xmin + (xmax - xmin) * i / double(grid - 1);
    for (int j = 0; j < grid; ++j) {
      x(1) = grid == 1 ? ymin : ymin + (ymax - ymin) * j / double(grid - 1);
      out << qds::format_double(x(0)) << "," << qds::format_double(x(1))
          << "," << qds::format_double(qds::primal_eval(p, x).value) << "\n";
    }
  }
  write_file(path, out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qds - canonical-duality solver for quartic double-well sums"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve a problem file");
  std::string problem_path;
  solve->add_option("problem", problem_path, "problem file")->required();

  bool verify = false;
  solve->add_flag("--verify", verify, "run the brute-force oracle checks");
  std::string perturb_arg;
  solve->add_option("--perturb", perturb_arg,
                    "comma-separated perturbation added to f");
  bool auto_perturb = false;
  solve->add_flag("--auto-perturb", auto_perturb,
                  "perturb f by 1e-3 in a seeded random direction");
  std::uint64_t seed = 42;
  solve->add_option("--seed", seed, "rng seed (default 42)");
  double tol = 1e-10;
  solve->add_option("--tol", tol, "Newton tolerance on ||grad Pi^d||_inf");
  int starts = 0;
  solve->add_option("--starts", starts,
                    "multistart count (default 64*m)");
  double box = 0.0;
  solve->add_option("--box", box,
                    "seed box half-width (default 10*(1+max|d|))");
  std::string report_path;
  solve->add_option("--report", report_path, "write the structured report");
  std::string contour_path;
  solve->add_option("--contour", contour_path, "write contour CSV (n=2)");
  int grid = 101;
  solve->add_option("--grid", grid, "contour points per axis");
  double xmin = -4, xmax = 4, ymin = -4, ymax = 4;
  solve->add_option("--xmin", xmin);
  solve->add_option("--xmax", xmax);
  solve->add_option("--ymin", ymin);
  solve->add_option("--ymax", ymax);

  CLI11_PARSE(app, argc, argv);

  try {
    const qds::QuarticProblem p = qds::load_problem_file(problem_path);
    qds::SolverConfig cfg = qds::SolverConfig::defaults_for(p);
    cfg.rng_seed = seed;
    cfg.newton_tol = tol;
    if (starts > 0) cfg.multistart_count = starts;
    if (box > 0) cfg.sample_box_halfwidth = box;

    qds::SolveOptions opts;
    opts.verify = verify;

    qds::Report rep;
    if (!perturb_arg.empty() || auto_perturb) {
      Eigen::VectorXd f_pert;
      if (!perturb_arg.empty()) {
        const std::vector<double> vals = parse_csv_numbers(perturb_arg);
        if (static_cast<int>(vals.size()) != p.n)
          throw qds::DimensionError("--perturb needs n components");
        f_pert = Eigen::Map<const Eigen::VectorXd>(vals.data(), p.n);
      } else {
        f_pert = qds::default_perturbation(p, seed);
      }
      rep = qds::perturb_and_solve(p, f_pert, cfg, opts);
    } else {
      rep = qds::solve_problem(p, cfg, opts);
    }

    std::cout << qds::render_report_text(rep, p);
    if (!report_path.empty())
      write_file(report_path, qds::serialize_report(rep));
    if (!contour_path.empty())
      export_contour(p, contour_path, grid, xmin, xmax, ymin, ymax);

    if (verify && rep.oracle_summary && !rep.oracle_summary->all_ok())
      return 3;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
