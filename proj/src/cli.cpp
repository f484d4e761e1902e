#include "ccv/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ccv/json_io.hpp"

namespace ccv {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  json raw;  // parsed config file, defaults filled lazily
  Manifold manifold = Manifold::sphere(1.0);
  std::uint64_t seed = 42;
  std::size_t grid_n = 4096;
  double tol = 1e-7;
  bool quick = false;
  std::string out_dir = ".";

  std::size_t scaled(std::size_t n) const {
    return quick ? std::max<std::size_t>(64, n / 16) : n;
  }
  json section(const std::string& name) const {
    return raw.contains(name) ? raw[name] : json::object();
  }
};

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_report(const RunConfig& cfg, const std::string& name, json report) {
  report["timestamp"] = timestamp();
  report["seed"] = cfg.seed;
  report["quick"] = cfg.quick;
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / (name + "_report.json"));
  os << report.dump(2) << "\n";
}

void write_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / name);
  os << text;
}

ScalarField default_field(const Manifold& M, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eedf1e1dull);
  Point p = random_point(M, rng);
  return ScalarField::sum(
      M, {{0.05, ScalarField::dist_sq_potential(M, p, RampProfile(0.15, 0.3))}});
}

ScalarField field_from_config(const RunConfig& cfg) {
  if (cfg.raw.contains("field")) return field_from_json(cfg.manifold, cfg.raw["field"]);
  return default_field(cfg.manifold, cfg.seed);
}

int cmd_compare(const RunConfig& cfg) {
  json sec = cfg.section("compare");
  std::size_t n = cfg.scaled(cfg.grid_n);
  SampleGrid grid = make_grid(cfg.manifold, n, cfg.seed);

  json checks = json::array();
  bool ok = true;
  auto push = [&](const ComparisonReport& r) {
    checks.push_back(to_json(r));
    ok = ok && r.pass;
  };

  push(check_hessian_comparison(cfg.manifold, grid));
  push(check_half_square_bound(cfg.manifold, grid));
  push(check_alpha_inequality(alpha_default_grid(cfg.scaled(4096))));

  double budget = cfg.manifold.injectivity_radius() / 2.0;
  double K = cfg.manifold.curvature_bound();
  if (K > 0) budget = std::min(budget, M_PI / (2.0 * std::sqrt(K)));
  double delta = sec.value("delta", std::isfinite(budget) ? 0.9 * budget
                                                          : 0.9 * cfg.manifold.diameter());
  bool enforce = sec.value("enforce_radius_bound", std::isfinite(budget));
  push(check_convexity_radius(cfg.manifold, grid.points.front(), delta,
                              cfg.scaled(2048), cfg.seed + 1, 1e-8, enforce));

  if (cfg.manifold.kind == ManifoldKind::Sphere) {
    double h = sec.value("fd_step", 1e-3);
    push(check_sphere_identity(cfg.manifold.radius, cfg.scaled(4096), h, cfg.seed + 2));
  }

  json rep;
  rep["checks"] = std::move(checks);
  rep["pass"] = ok;
  rep["manifold"] = to_json(cfg.manifold);
  rep["grid_n"] = n;
  write_report(cfg, "compare", rep);
  return ok ? 0 : 1;
}

int cmd_certify(const RunConfig& cfg) {
  json sec = cfg.section("certify");
  double eps = sec.value("epsilon", 0.5);
  if (!(eps > 0.0 && eps < 1.0)) {
    std::cerr << "certify: epsilon must lie in (0, 1), got " << eps << "\n";
    return 2;
  }
  ScalarField f = field_from_config(cfg);
  SampleGrid grid = make_grid(cfg.manifold, cfg.scaled(cfg.grid_n), cfg.seed);
  Certificate main = certify_main(f, eps, grid);
  Certificate tech = certify_technical(f, grid);

  json rep;
  rep["main"] = to_json(main);
  rep["technical"] = to_json(tech);
  rep["field"] = to_json(f);
  rep["manifold"] = to_json(cfg.manifold);
  bool ok = main.certified() && tech.certified();
  rep["pass"] = ok;
  write_report(cfg, "certify", rep);
  return ok ? 0 : 1;
}

int cmd_check_cconcavity(const RunConfig& cfg) {
  json sec = cfg.section("cconcavity");
  ScalarField f = field_from_config(cfg);
  std::size_t xn = cfg.scaled(sec.value("x_grid_n", cfg.grid_n));
  std::size_t yn = cfg.scaled(sec.value("y_grid_n", cfg.grid_n));
  SampleGrid xg = make_grid(cfg.manifold, xn, cfg.seed);
  SampleGrid yg = make_grid(cfg.manifold, yn, cfg.seed + 1);
  CconcavityResult res =
      empirical_cconcavity(f, xg, yg, cfg.tol, sec.value("refine", true));

  json rep = to_json(res);
  rep["field"] = to_json(f);
  rep["manifold"] = to_json(cfg.manifold);
  rep["x_grid_n"] = xn;
  rep["y_grid_n"] = yn;
  rep["tol"] = cfg.tol;
  write_report(cfg, "check_cconcavity", rep);
  return res.pass ? 0 : 1;
}

CounterexampleConfig counterexample_config(const RunConfig& cfg) {
  json sec = cfg.section("counterexample");
  CounterexampleConfig c;
  c.radius = sec.value("radius", 1.0);
  c.eps_mix = sec.value("eps_mix", c.eps_mix);
  c.t0 = sec.value("t0", c.t0);
  c.t1 = sec.value("t1", c.t1);
  c.a = sec.value("a", c.a);
  c.c = sec.value("c", c.c);
  c.cut_in = sec.value("cut_in", c.cut_in);
  c.cut_out = sec.value("cut_out", c.cut_out);
  c.scan_n = cfg.scaled(sec.value("scan_n", c.scan_n));
  c.grid_n = cfg.scaled(sec.value("grid_n", c.grid_n));
  c.seed = cfg.seed;
  c.tol = sec.value("tol", cfg.tol);
  c.scan_tol = sec.value("scan_tol", c.scan_tol);
  return c;
}

int cmd_counterexample(const RunConfig& cfg) {
  CounterexampleConfig c = counterexample_config(cfg);
  ScalarField f = build_counterexample(c);
  CounterexampleReport rep = verify_counterexample(f, c);

  // Per-point slack eigenvalue and argmin margin, for plotting.
  SampleGrid grid = make_grid(c.manifold(), c.grid_n, c.seed + 2);
  grid.points.push_back(c.north());
  SampleGrid yg = make_grid(c.manifold(), c.grid_n, c.seed + 3);
  CconcavityResult cc = empirical_cconcavity(f, grid, yg, c.tol);
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,y,z,slack_min_eig,argmin_margin\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Vec3& p = grid.points[i].x;
    Eigen::MatrixXd slack = Eigen::MatrixXd::Identity(2, 2) - f.hess(grid.points[i]).m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack, Eigen::EigenvaluesOnly);
    csv << p[0] << "," << p[1] << "," << p[2] << "," << es.eigenvalues().minCoeff()
        << "," << cc.x_margins[i] << "\n";
  }
  write_text(cfg, "counterexample_scan.csv", csv.str());

  json out = to_json(rep);
  out["field"] = to_json(f);
  out["config"] = {{"radius", c.radius},   {"eps_mix", c.eps_mix}, {"t0", c.t0},
                   {"t1", c.t1},           {"a", c.a},             {"c", c.c},
                   {"cut_in", c.cut_in},   {"cut_out", c.cut_out}, {"scan_n", c.scan_n},
                   {"grid_n", c.grid_n},   {"tol", c.tol},         {"scan_tol", c.scan_tol}};
  write_report(cfg, "counterexample", out);
  return rep.pass() ? 0 : 1;
}

int cmd_transport_verify(const RunConfig& cfg) {
  json sec = cfg.section("transport");
  ScalarField f = field_from_config(cfg);
  PointCloud cloud;
  if (sec.contains("cloud_csv")) {
    std::ifstream is(sec["cloud_csv"].get<std::string>());
    if (!is) {
      std::cerr << "transport-verify: cannot open cloud CSV\n";
      return 2;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    cloud = cloud_from_csv(buf.str());
  } else {
    std::size_t n = sec.value("n", 64);
    if (n > kMaxAssignmentSize) {
      std::cerr << "transport-verify: n exceeds the 512 cap\n";
      return 2;
    }
    std::mt19937_64 rng(cfg.seed + 7);
    cloud.manifold = cfg.manifold;
    cloud.points = random_points(cfg.manifold, n, rng);
  }

  SampleGrid grid = make_grid(cfg.manifold, cfg.scaled(cfg.grid_n), cfg.seed);
  OptimalityReport opt = verify_optimality(f, cloud, grid, sec.value("tol", 1e-9),
                                           sec.value("require_certificate", true));
  PointCloud images = mccann_map(f, cloud);
  MonotonicityReport mono = check_cyclical_monotonicity(
      cloud, images, cfg.scaled(sec.value("trials", 1024)), cfg.seed + 8,
      sec.value("tol", 1e-9));

  write_text(cfg, "transport_cloud.csv", cloud_to_csv(cloud));
  write_text(cfg, "transport_images.csv", cloud_to_csv(images));
  json rep;
  rep["optimality"] = to_json(opt);
  rep["cyclical_monotonicity"] = to_json(mono);
  rep["field"] = to_json(f);
  rep["manifold"] = to_json(cfg.manifold);
  bool ok = opt.pass && mono.pass;
  rep["pass"] = ok;
  write_report(cfg, "transport_verify", rep);
  return ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
  json sec = cfg.section("sweep");
  std::string parameter = sec.value("parameter", "lambda");
  std::vector<double> values;
  if (sec.contains("values"))
    for (const json& v : sec["values"]) values.push_back(v.get<double>());

  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);

  if (parameter == "lambda") {
    if (values.empty()) values = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
    SampleGrid grid = make_grid(cfg.manifold, cfg.scaled(cfg.grid_n), cfg.seed);
    SampleGrid yg = make_grid(cfg.manifold, cfg.scaled(cfg.grid_n), cfg.seed + 1);
    ScalarField base = field_from_config(cfg);
    csv << "lambda,grad_bound,delta,delta_budget,hess_margin,verdict,worst_violation\n";
    for (double lam : values) {
      ScalarField f = ScalarField::sum(cfg.manifold, {{lam, base}});
      Certificate cert = certify_technical(f, grid);
      CconcavityResult cc = empirical_cconcavity(f, grid, yg, cfg.tol);
      rows.push_back({{"lambda", lam},
                      {"certificate", to_json(cert)},
                      {"worst_violation", encode_number(cc.worst_violation)}});
      csv << lam << "," << cert.grad_bound << "," << cert.delta << ","
          << encode_number(cert.delta_budget).dump() << "," << cert.hess_margin << ","
          << cert.verdict_name() << "," << cc.worst_violation << "\n";
    }
  } else if (parameter == "eps_mix") {
    if (values.empty()) values = {0.04, 0.02, 0.01};
    csv << "eps_mix,hessian_scan_min,violation,r_star\n";
    for (double eps : values) {
      CounterexampleConfig c = counterexample_config(cfg);
      c.eps_mix = eps;
      c.tol = 1e-13;  // surface even vanishing violations in the table
      ScalarField f = build_counterexample(c);
      CounterexampleReport rep = verify_counterexample(f, c);
      rows.push_back({{"eps_mix", eps},
                      {"hessian_scan_min", rep.hessian_scan_min},
                      {"violation", encode_number(rep.violation)},
                      {"r_star", rep.r_star}});
      csv << eps << "," << rep.hessian_scan_min << "," << rep.violation << ","
          << rep.r_star << "\n";
    }
  } else {
    std::cerr << "sweep: unknown parameter '" << parameter << "'\n";
    return 2;
  }

  write_text(cfg, "sweep.csv", csv.str());
  json rep;
  rep["parameter"] = parameter;
  rep["rows"] = std::move(rows);
  rep["pass"] = true;  // a sweep tabulates, it does not assert
  write_report(cfg, "sweep", rep);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"numerical checks for c-concavity and optimal transport maps "
               "on model manifolds"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool have_seed = false, quick = false;
  app.add_option("--config", config_path, "JSON config file")->envname("CCV_CONFIG");
  auto* seed_opt =
      app.add_option("--seed", seed, "RNG seed (overrides config)")->envname("CCV_SEED");
  app.add_flag("--quick", quick, "scale all grids down 16x")->envname("CCV_QUICK");
  app.add_option("--out", out_dir, "report output directory")->envname("CCV_OUT");

  std::vector<std::string> names = {"compare",        "certify",
                                    "check-cconcavity", "counterexample",
                                    "transport-verify", "sweep"};
  for (const std::string& n : names) app.add_subcommand(n);

  std::vector<const char*> argv;
  argv.push_back("ccv");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  have_seed = seed_opt->count() > 0;

  RunConfig cfg;
  cfg.quick = quick;
  cfg.out_dir = out_dir;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) {
        std::cerr << "cannot open config file: " << config_path << "\n";
        return 2;
      }
      cfg.raw = json::parse(is);
    }
    if (cfg.raw.contains("manifold"))
      cfg.manifold = manifold_from_json(cfg.raw["manifold"]);
    cfg.seed = have_seed ? seed : cfg.raw.value("seed", 42);
    cfg.grid_n = cfg.raw.value("grid_n", 4096);
    cfg.tol = cfg.raw.value("tol", 1e-7);

    std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "compare") return cmd_compare(cfg);
    if (cmd == "certify") return cmd_certify(cfg);
    if (cmd == "check-cconcavity") return cmd_check_cconcavity(cfg);
    if (cmd == "counterexample") return cmd_counterexample(cfg);
    if (cmd == "transport-verify") return cmd_transport_verify(cfg);
    if (cmd == "sweep") return cmd_sweep(cfg);
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const construction_error& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ccv
