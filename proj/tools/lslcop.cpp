#include "lslcop/lslcop.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace lslcop;

enum Exit { kOk = 0, kMalformed = 2, kInvalid = 3, kNoConvergence = 4 };

struct RunConfig {
  std::size_t grid = 1025;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string out;
  bool oracle = false;
};

Diagonal load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedKnots("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedKnots(path + ": " + e.what());
  }
  return diagonal_from_json(j);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw MalformedKnots("cannot write " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower semilinear copulas from their diagonal sections"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--grid", cfg.grid, "grid size")->capture_default_str();
  app.add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_flag("--oracle", cfg.oracle, "add brute-force reference values");

  std::string file, file2, trace_path;
  double x = 0.5, y = 0.5, alpha = 0.0, beta = 0.0;
  std::size_t n = 1000, max_iter = 200;
  std::string families = "random";
  bool tol_given = false;

  auto* validate = app.add_subcommand("validate", "check membership; exit 3 if not a member");
  validate->add_option("diagonal", file)->required();

  auto* eval = app.add_subcommand("eval", "copula surface S(x,y)");
  eval->add_option("diagonal", file)->required();
  eval->add_option("--x", x)->required();
  eval->add_option("--y", y)->required();

  auto* kernel = app.add_subcommand("kernel", "CSV of y -> K(x,[0,y])");
  kernel->add_option("diagonal", file)->required();
  kernel->add_option("--x", x)->required();

  auto* measures = app.add_subcommand("measures", "concordance report JSON");
  measures->add_option("diagonal", file)->required();

  auto* star_cmd = app.add_subcommand("star", "star product of two diagonals");
  star_cmd->add_option("left", file)->required();
  star_cmd->add_option("right", file2)->required();

  auto* iterate = app.add_subcommand("iterate", "iterate the star product to its idempotent limit");
  iterate->add_option("diagonal", file)->required();
  iterate->add_option("--max-iter", max_iter)->capture_default_str();
  iterate->add_option("--trace", trace_path, "CSV path for n,sup_delta");

  auto* sample_cmd = app.add_subcommand("sample", "CSV sample u,v");
  sample_cmd->add_option("diagonal", file)->required();
  sample_cmd->add_option("--n", n)->capture_default_str();

  auto* region = app.add_subcommand("region", "CSV of (tau, rho) points");
  region->add_option("--n", n)->capture_default_str();
  region->add_option("--families", families, "comma list of random,l,u,mix")->capture_default_str();

  auto* mo = app.add_subcommand("mo", "Marshall-Olkin star diagonal JSON");
  mo->add_option("--alpha", alpha)->required();
  mo->add_option("--beta", beta)->required();

  auto* si = app.add_subcommand("si", "CSV of x -> K(x,[0,y])");
  si->add_option("diagonal", file)->required();
  si->add_option("--y", y)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kMalformed;
  }
  tol_given = app.count("--tol") > 0;

  try {
    std::ostringstream os;
    os << std::setprecision(17);

    if (*validate) {
      const auto rep = validate_dlsl(load(file), tol_given ? cfg.tol : 0.0);
      emit(cfg, dump(to_json(rep)));
      return rep.is_member ? kOk : kInvalid;
    }
    if (*eval) {
      os << surface(load(file), x, y) << '\n';
      emit(cfg, os.str());
      return kOk;
    }
    if (*kernel) {
      const auto d = load(file);
      const auto g = uniform_grid(cfg.grid);
      std::vector<double> ks;
      for (double v : g) ks.push_back(kernel_cdf(d, x, v));
      write_xy_csv(os, "y,K", g, ks);
      emit(cfg, os.str());
      return kOk;
    }
    if (*measures) {
      const auto d = load(file);
      if (!validate_dlsl(d, 1e-12).is_member) throw InvalidInput("measures: not an LSL diagonal");
      json j = to_json(report(d));
      if (cfg.oracle)
        j["oracle"] = {{"tau_quadrature", oracle::tau_quadrature(d, 2000)},
                       {"rho_quadrature", oracle::rho_quadrature(d, 2000)}};
      emit(cfg, dump(j));
      return kOk;
    }
    if (*star_cmd) {
      const auto d1 = load(file), d2 = load(file2);
      const auto res = star(d1, d2, cfg.grid);
      json j = to_json(res);
      if (cfg.oracle) {
        json pts = json::array();
        for (double px : {0.25, 0.5, 0.75})
          pts.push_back({{"x", px},
                         {"y", 0.5},
                         {"star_surface", star_surface(*res.exact, px, 0.5)},
                         {"kernel_quadrature", oracle::star_kernel_quadrature(d1, d2, px, 0.5, 10000)}});
        j["oracle"] = pts;
      }
      emit(cfg, dump(j));
      return kOk;
    }
    if (*iterate) {
      const auto tr = iterate_star(load(file), cfg.tol, max_iter, cfg.grid);
      json j = {{"converged", tr.converged},
                {"iterations", tr.sup_deltas.size()},
                {"fitted_a", tr.fitted_a ? json(*tr.fitted_a) : json(nullptr)},
                {"limit", to_json(tr.limit)}};
      if (!trace_path.empty()) {
        std::ofstream t(trace_path, std::ios::binary);
        if (!t) throw MalformedKnots("cannot write " + trace_path);
        write_trace_csv(t, tr);
      }
      emit(cfg, dump(j));
      if (!tr.converged) {
        std::cerr << "no convergence after " << tr.sup_deltas.size() << " iterations\n";
        return kNoConvergence;
      }
      return kOk;
    }
    if (*sample_cmd) {
      write_sample_csv(os, sample(load(file), n, cfg.seed));
      emit(cfg, os.str());
      return kOk;
    }
    if (*region) {
      unsigned fam = 0;
      std::stringstream ss(families);
      for (std::string f; std::getline(ss, f, ',');) {
        if (f == "random") fam |= kRandom;
        else if (f == "l") fam |= kLower;
        else if (f == "u") fam |= kUpper;
        else if (f == "mix") fam |= kMix;
        else throw MalformedKnots("unknown family '" + f + "'");
      }
      const auto pts = region_scan(n, cfg.seed, fam);
      write_region_csv(os, pts);
      emit(cfg, os.str());
      const auto s = summarize(pts);
      std::cerr << "points " << s.points << " tau>rho " << s.lower_violations << " above conjectured bound "
                << s.upper_violations << '\n';
      return kOk;
    }
    if (*mo) {
      const auto d = mo_star_diagonal(alpha, beta);
      emit(cfg, dump(to_json(d)));
      return validate_dlsl(d, 1e-12).is_member ? kOk : kInvalid;
    }
    if (*si) {
      write_si_csv(os, si_profile(load(file), y, cfg.grid));
      emit(cfg, os.str());
      return kOk;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformed;
  }
  return kOk;
}
