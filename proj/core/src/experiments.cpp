#include "catlab/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "catlab/comparison.hpp"
#include "catlab/conformal.hpp"
#include "catlab/error.hpp"
#include "catlab/flows.hpp"
#include "catlab/format.hpp"
#include "catlab/harmonic/harmonic.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/spaces/expression.hpp"
#include "catlab/spaces/grid_disc.hpp"

namespace catlab::cli {

namespace {

using comparison::CheckOptions;
using comparison::ComparisonReport;
using spaces::GridDisc;
using spaces::ModelPoint;
using spaces::ModelSurface;

// Reads parameters with defaults and remembers which keys are legal.
class Params {
 public:
  explicit Params(const Config& cfg) : cfg_(cfg) {}

  double num(const std::string& key, double fallback) {
    known_.push_back(key);
    return cfg_.get_double(key, fallback);
  }
  double positive(const std::string& key, double fallback) {
    const double v = num(key, fallback);
    if (!(v > 0.0)) cfg_.fail(key, "must be positive");
    return v;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    known_.push_back(key);
    const auto v = cfg_.get_uint(key, fallback);
    if (v == 0) cfg_.fail(key, "must be positive");
    return static_cast<std::size_t>(v);
  }
  std::string str(const std::string& key, const std::string& fallback) {
    known_.push_back(key);
    return cfg_.get_string(key, fallback);
  }
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
    known_.push_back(key);
    return cfg_.get_list(key, fallback);
  }
  spaces::Expression expression(const std::string& key, const std::string& fallback) {
    const std::string text = str(key, fallback);
    try {
      return spaces::Expression::parse(text);
    } catch (const Error& e) {
      cfg_.fail(key, e.what());
    }
  }
  /// "auto" yields nullopt.
  std::optional<double> num_or_auto(const std::string& key) {
    const std::string text = str(key, "auto");
    if (text == "auto") return std::nullopt;
    return cfg_.get_double(key, 0.0);
  }
  void expect(const std::string& key, const std::string& value) {
    const std::string got = str(key, value);
    if (got != value) cfg_.fail(key, "this experiment supports only '" + value + "'");
  }
  [[noreturn]] void fail(const std::string& key, const std::string& message) const { cfg_.fail(key, message); }

  void finish() const {
    std::vector<std::string> known = known_;
    known.push_back("experiment");
    known.push_back("seed");
    cfg_.require_known(known);
  }

 private:
  const Config& cfg_;
  std::vector<std::string> known_;
};

struct Context {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

CheckResult make_check(std::string name, double value, std::string relation, double budget, std::string formula) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.relation = relation;
  c.budget = budget;
  c.budget_formula = std::move(formula);
  if (relation == "<=") {
    c.passed = value <= budget;
  } else if (relation == "<") {
    c.passed = value < budget;
  } else if (relation == ">=") {
    c.passed = value >= budget;
  } else {
    c.passed = value > budget;
  }
  return c;
}

CheckResult comparison_check(std::string name, const ComparisonReport& r) {
  CheckResult c = make_check(std::move(name), r.max_defect, "<=", r.budget, r.budget_formula);
  c.comparison = r;
  return c;
}

std::string fmt(double v) { return format_double(v); }

struct GridSpec {
  double h, r;
  spaces::Expression factor;
};

GridSpec grid_spec(Params& p, double h, double r, const std::string& factor) {
  const double hh = p.positive("space.h", h);
  const double rr = p.positive("space.r", r);
  if (rr > 1.0) p.fail("space.r", "domain radius must be at most 1");
  return {hh, rr, p.expression("space.factor", factor)};
}

GridDisc build_grid(const GridSpec& g) {
  return GridDisc::sample(g.h, g.r, [&](double x, double y) { return g.factor(x, y); });
}

CheckOptions check_options(Params& p, double kappa, std::size_t n, double perimeter, const Context& ctx) {
  CheckOptions o;
  o.kappa = p.num("check.kappa", kappa);
  o.n_triangles = p.count("check.n_triangles", n);
  o.n_probes = static_cast<std::size_t>(p.num("check.n_probes", 3));
  o.max_perimeter = p.positive("check.max_perimeter", perimeter);
  o.seed = ctx.seed;
  o.jobs = ctx.jobs;
  return o;
}

// ---- experiments ----

RunReport model_selfcomparison(Params& p, const Context& ctx) {
  const auto kappas = p.list("check.kappas", {-1.0, 0.0, 1.0});
  const std::size_t n = p.count("check.n_triangles", 2000);
  const auto probes = static_cast<std::size_t>(p.num("check.n_probes", 3));
  const double perimeter = p.positive("check.max_perimeter", 3.0);
  const double fraction = p.positive("check.positive_fraction", 0.9);
  p.finish();
  RunReport rep;
  for (double kappa : kappas) {
    const ModelSurface surface(kappa);
    CheckOptions o;
    o.kappa = kappa;
    o.n_triangles = n;
    o.n_probes = probes;
    o.max_perimeter = kappa > 0.0 ? fraction * 2.0 * std::numbers::pi / std::sqrt(kappa) : perimeter;
    o.seed = ctx.seed;
    o.jobs = ctx.jobs;
    rep.checks.push_back(comparison_check("self_comparison[kappa=" + fmt(kappa) + "]", check_cat(surface, o)));
  }
  return rep;
}

RunReport reshetnyak(Params& p, const Context& ctx) {
  const GridSpec gs = grid_spec(p, 0.02, 0.8, "2/(1-r2)");
  const std::string transform = p.str("transform.transform", "none");
  std::optional<spaces::Expression> f;
  double c = 0.0, C = 0.0;
  if (transform == "custom") {
    f = p.expression("transform.f", "0");
    c = p.num("transform.c", 0.0);
    C = p.num("transform.C", 0.0);
  } else if (transform != "none") {
    p.fail("transform.transform", "expected none or custom");
  }
  const double tol = p.positive("check.curvature_tolerance", 1e-2);
  const double target = p.num("check.curvature_target", -1.0);
  const CheckOptions opt = check_options(p, -1.0, 1000, 0.6, ctx);
  p.finish();

  GridDisc grid = build_grid(gs);
  if (f) {
    std::vector<double> values(grid.node_count());
    for (std::size_t k = 0; k < values.size(); ++k) {
      const Vec2 z = grid.position(k);
      values[k] = (*f)(z.x, z.y);
    }
    grid = conformal::conformal_change(grid, values, c, C);
  }
  const auto est = conformal::log_subharmonic_residual(grid, opt.kappa);
  double worst = 0.0, min_residual = std::numeric_limits<double>::infinity();
  std::string table = "x,y,K,residual\n";
  for (std::size_t k = 0; k < est.nodes.size(); ++k) {
    worst = std::max(worst, std::abs(est.curvature[k] - target));
    min_residual = std::min(min_residual, est.residual[k]);
    const Vec2 z = grid.position(est.nodes[k]);
    table += fmt(z.x) + "," + fmt(z.y) + "," + fmt(est.curvature[k]) + "," + fmt(est.residual[k]) + "\n";
  }
  RunReport rep;
  rep.checks.push_back(make_check("curvature_deviation", worst, "<=", tol,
                                  "max |K - " + fmt(target) + "| over interior nodes, K = -phi^-2 Delta_h log phi"));
  rep.checks.push_back(comparison_check("comparison", check_cat(grid, opt)));
  rep.metrics.push_back({"interior_nodes", static_cast<double>(est.nodes.size())});
  rep.metrics.push_back({"min_predicate_residual", min_residual});
  rep.files.push_back({"thm4.5-reshetnyak.curvature.csv", table});
  return rep;
}

RunReport kappa_bar_experiment(Params& p, const Context&) {
  const double c = p.num("input.c", 0.0);
  const double C = p.num("input.C", 0.0);
  const double kappa = p.num("input.kappa", 0.0);
  const double lambda = p.num("input.lambda", 1.0);
  const double mu = p.num("input.mu", 1.0);
  p.finish();
  if (!(c <= C)) raise(ErrorCode::ConfigError, "input.c must not exceed input.C");

  RunReport rep;
  auto kb = [](double c_, double C_, double k_, double l_) {
    try {
      return conformal::kappa_bar(c_, C_, k_, l_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OnlyLocalBound) throw;
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  rep.metrics.push_back({"kappa_bar", kb(c, C, kappa, lambda)});
  rep.metrics.push_back({"kappa_bar_product", conformal::kappa_bar_product(c, C, kappa, mu)});
  rep.checks.push_back(make_check("known_value", std::abs(kb(0, 0, 0, 1) + 4.0), "<=", 0.0, "exact: (0,0,0,1) -> -4"));
  rep.checks.push_back(make_check("boundary_value", std::abs(kb(0, 0, 4, 1)), "<=", 0.0, "exact: kappa - 4 lambda = 0 -> 0"));
  rep.checks.push_back(make_check("only_local_branch", std::isnan(kb(0, 1, 2, 0)) ? 1.0 : 0.0, ">=", 1.0,
                                  "(0,1,2,0) must raise OnlyLocalBound"));
  rep.checks.push_back(make_check("product_value", std::abs(conformal::kappa_bar_product(0, 0.25, 0, 1) + 2.0 * std::exp(-0.5)),
                                  "<=", 1e-15, "(0,0.25,0,1) -> -2 e^-0.5"));
  // Monotonicity over a grid of lambda and kappa values for the given bounds.
  double worst_lambda = -std::numeric_limits<double>::infinity();
  double worst_kappa = -std::numeric_limits<double>::infinity();
  Series series{"kappa_bar_vs_lambda", {"lambda", "kappa_bar"}, {}};
  for (int i = -8; i <= 16; ++i) {
    const double l = 0.25 * i;
    series.rows.push_back({l, kb(c, C, kappa, l)});
    for (int j = -8; j <= 16; ++j) {
      const double k = 0.5 * j;
      const double here = kb(c, C, k, l);
      const double next_l = kb(c, C, k, l + 0.25);
      const double next_k = kb(c, C, k + 0.5, l);
      if (!std::isnan(here) && !std::isnan(next_l)) worst_lambda = std::max(worst_lambda, next_l - here);
      if (!std::isnan(here) && !std::isnan(next_k)) worst_kappa = std::max(worst_kappa, here - next_k);
    }
  }
  rep.checks.push_back(make_check("nonincreasing_in_lambda", worst_lambda, "<=", 0.0,
                                  "max of kappa_bar(lambda + 0.25) - kappa_bar(lambda) on the sample grid"));
  rep.checks.push_back(make_check("nondecreasing_in_kappa", worst_kappa, "<=", 0.0,
                                  "max of kappa_bar(kappa) - kappa_bar(kappa + 0.5) on the sample grid"));
  rep.series.push_back(std::move(series));
  return rep;
}

RunReport nonpos(Params& p, const Context& ctx) {
  const GridSpec gs = grid_spec(p, 0.04, 1.0, "1");
  p.expect("transform.transform", "nonpos");
  const double R = p.positive("transform.R", 1.0);
  const double cx = p.num("transform.center_x", 0.0), cy = p.num("transform.center_y", 0.0);
  const std::size_t cert_n = p.count("certificate.n_triangles", 300);
  const double cert_P = p.positive("certificate.max_perimeter", 1.0);
  const CheckOptions opt = check_options(p, 0.0, 500, 2.0 * R, ctx);
  p.finish();

  const GridDisc grid = build_grid(gs);
  const std::size_t center = grid.nearest(cx, cy);
  CheckOptions cert_opt = opt;
  cert_opt.kappa = 0.0;
  cert_opt.n_triangles = cert_n;
  cert_opt.max_perimeter = cert_P;
  const ComparisonReport certificate = comparison::check_cat(grid, cert_opt);
  RunReport rep;
  rep.checks.push_back(comparison_check("base_certificate", certificate));
  if (!certificate.passed()) return rep;

  const auto out = conformal::nonpos_transform(grid, &certificate, center, R);
  const double residual =
      std::abs(integrate([](double t) { return std::exp(0.5 * t * t); }, 0.0, out.r) - R);
  rep.metrics.push_back({"r", out.r});
  rep.metrics.push_back({"kappa_R", out.kappa});
  rep.checks.push_back(make_check("radius_residual", residual, "<=", 1e-10, "|int_0^r e^{t^2/2} dt - R|"));
  const double limit = conformal::nonpos_kappa(1e-8);
  rep.checks.push_back(make_check("small_R_limit", std::abs(limit + 4.0), "<=", 1e-6, "|kappa(1e-8) + 4|"));
  CheckOptions o = opt;
  o.kappa = out.kappa;
  rep.checks.push_back(comparison_check("transformed_ball", comparison::check_cat(out.disc, o, center, R)));
  return rep;
}

RunReport pipeline(Params& p, const Context& ctx) {
  const GridSpec gs = grid_spec(p, 0.04, 1.0, "1");
  p.expect("transform.transform", "main");
  const double kappa = p.num("transform.kappa", 0.0);
  const double r = p.positive("transform.r", 1.0);
  const std::optional<double> A = p.num_or_auto("transform.A");
  const std::optional<double> collar = p.num_or_auto("transform.collar");
  const double cx = p.num("transform.center_x", 0.0), cy = p.num("transform.center_y", 0.0);
  const double ball = p.positive("check.ball_radius", 0.2);
  const auto centers = p.list("check.centers", {0.0, 0.0, 0.3, 0.0, 0.6, 0.0, 0.0, -0.5});
  if (centers.size() % 2 != 0) p.fail("check.centers", "expected x y pairs");
  const CheckOptions opt = check_options(p, -1.0, 200, 6.0 * ball, ctx);
  p.finish();

  const GridDisc grid = build_grid(gs);
  const std::size_t center = grid.nearest(cx, cy);
  conformal::MainTransformOptions mo;
  mo.A = A;
  mo.collar = collar ? *collar : gs.h;
  const auto out = conformal::main_transform(grid, kappa, center, r, mo);
  RunReport rep;
  rep.metrics.push_back({"A", out.A});
  rep.metrics.push_back({"step_radius", out.step_radius});
  rep.metrics.push_back({"kept_nodes", static_cast<double>(out.kept.size())});
  rep.metrics.push_back({"excluded_nodes", static_cast<double>(out.excluded)});

  const double rr = out.step_radius;
  const double half = 0.5 * rr;
  const double quad = conformal::main_radial_distance(rr, half);
  const double exact = conformal::main_radial_distance_exact(rr, half);
  rep.metrics.push_back({"R_half", quad});
  rep.metrics.push_back({"R_half_variant", conformal::main_radial_distance_variant(rr, half)});
  rep.checks.push_back(make_check("R_half_closed_form", std::abs(quad - exact), "<=", 1e-6,
                                  "|quadrature - (1/r) log((r + s)/(r - s))| at s = r/2"));
  const double near = conformal::main_radial_distance(rr, 0.99 * rr);
  rep.checks.push_back(make_check("R_divergence_proxy", near, ">=", 5.0, "R(0.99 r) >= 5"));
  Series series{"radial", {"s", "R", "R_closed_form", "R_variant"}, {}};
  for (int k = 0; k < 100; ++k) {
    const double s = rr * k / 100.0;
    series.rows.push_back({s, conformal::main_radial_distance(rr, s), conformal::main_radial_distance_exact(rr, s),
                           conformal::main_radial_distance_variant(rr, s)});
  }
  rep.series.push_back(std::move(series));

  std::vector<std::size_t> ball_centers;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < centers.size(); k += 2) {
    const std::size_t node = grid.nearest(centers[k], centers[k + 1]);
    const auto it = std::find(out.kept.begin(), out.kept.end(), node);
    if (it == out.kept.end()) p.fail("check.centers", "center " + fmt(centers[k]) + " " + fmt(centers[k + 1]) + " lies outside the transformed ball");
    ball_centers.push_back(static_cast<std::size_t>(it - out.kept.begin()));
    labels.push_back(fmt(centers[k]) + " " + fmt(centers[k + 1]));
  }
  const auto scans = comparison::local_cat_scan(out.space, opt, ball_centers, ball);
  for (std::size_t k = 0; k < scans.size(); ++k) rep.checks.push_back(comparison_check("ball[" + labels[k] + "]", scans[k]));
  rep.files.push_back({"thm1.1-pipeline.scan.csv", comparison_csv(scans, labels)});
  return rep;
}

RunReport contraction(Params& p, const Context& ctx) {
  const double tau = p.positive("flow.tau", 1e-3);
  const auto Ts = p.list("flow.T", {1.0, 2.0});
  const auto series_T = p.list("flow.series_T", {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0});
  const auto legs = p.list("flow.tripod_legs", {1.0, 1.0, 1.0});
  if (legs.size() != 3) p.fail("flow.tripod_legs", "expected three leg lengths");
  const double delta = p.positive("variation.delta", 1e-3);
  const double probe = p.positive("variation.probe_radius", 1e-3);
  const double K = p.positive("variation.budget_constant", 4.0);
  p.finish();
  (void)ctx;

  RunReport rep;
  const ModelSurface plane(0.0);
  const auto f = flows::half_squared_distance(plane);
  const ModelPoint x0 = plane.from_plane(1.0, 0.0), y0 = plane.from_plane(0.0, 0.5);
  for (double T : Ts) {
    const auto c = flows::contraction_check(f, x0, y0, T, tau);
    rep.checks.push_back(make_check("plane_ratio[T=" + fmt(T) + "]", std::abs(c.ratio - c.expected), "<=", 1e-3,
                                    "|ratio - e^{-T}|"));
    rep.checks.push_back(make_check("plane_contraction[T=" + fmt(T) + "]", c.ratio, "<=", c.expected + c.tolerance,
                                    "e^{-lambda T} + C tau, C = 1"));
  }
  Series series{"contraction", {"T", "ratio", "exp_minus_T"}, {}};
  for (double T : series_T) {
    const auto c = flows::contraction_check(f, x0, y0, T, tau);
    series.rows.push_back({T, c.ratio, c.expected});
  }
  rep.series.push_back(std::move(series));

  const auto tripod = spaces::TreeSpace::tripod(legs[0], legs[1], legs[2]);
  const auto g = flows::distance_function(tripod, tripod.node_point(1));
  const spaces::TreePoint tx{1, std::min(0.7, legs[1])}, ty{2, std::min(0.4, legs[2])};
  const auto tc = flows::contraction_check(g, tx, ty, 1.0, tau);
  rep.checks.push_back(make_check("tripod_ratio", tc.ratio, "<=", 1.0 + 1e-6, "1 + 1e-6"));

  flows::VariationOptions vo{tau, delta, probe, K};
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
  const auto gamma = [&plane](double s) { return plane.from_plane(s, 0.0); };
  const auto var = flows::variation_velocity_check<ModelSurface>(f, gamma, [](double s) { return s; }, grid, vo);
  rep.checks.push_back(make_check("variation_residual", var.max_excess, "<=", 0.0, var.budget_formula));
  rep.metrics.push_back({"variation_max_residual", var.max_residual});
  const auto still = flows::variation_velocity_check<ModelSurface>(f, gamma, [](double) { return 0.0; }, grid, vo);
  double worst = 0.0;
  for (double r : still.residual) worst = std::max(worst, std::abs(r));
  rep.checks.push_back(make_check("variation_rho_zero", worst, "<=", 0.0, "exact: rho = 0 gives eta = gamma"));
  return rep;
}

std::vector<ModelPoint> identity_images(const harmonic::DiscMesh& mesh, const ModelSurface& plane) {
  std::vector<ModelPoint> images;
  for (Vec2 z : mesh.vertices()) images.push_back(plane.from_plane(z.x, z.y));
  return images;
}

harmonic::MeshMap<ModelSurface> solved_identity(const harmonic::DiscMesh& mesh, const ModelSurface& plane,
                                                double tol) {
  const auto images = identity_images(mesh, plane);
  std::vector<ModelPoint> trace;
  for (auto v : mesh.boundary()) trace.push_back(images[v]);
  harmonic::SolveOptions so;
  so.tol = tol;
  return harmonic::solve_harmonic<ModelSurface>(mesh, plane, trace, so, images);
}

RunReport fuglede(Params& p, const Context& ctx) {
  const auto rings = static_cast<int>(p.count("mesh.rings", 10));
  const double tol = p.positive("check.tol", 1e-12);
  const double ratio_min = p.positive("check.ratio_min", 1.8);
  const auto tripod_rings = static_cast<int>(p.count("tripod.rings", 6));
  const double reach = p.positive("tripod.reach", 0.8);
  p.finish();

  RunReport rep;
  const ModelSurface plane(0.0);
  const auto f = flows::half_squared_distance(plane);
  const auto coarse = harmonic::DiscMesh::ring_disc(rings);
  const auto fine = harmonic::DiscMesh::ring_disc(2 * rings);
  const auto m1 = harmonic::fuglede_check(solved_identity(coarse, plane, tol), f, 0.0);
  const auto m2 = harmonic::fuglede_check(solved_identity(fine, plane, tol), f, 0.0);
  const double h1 = coarse.max_edge_length(), h2 = fine.max_edge_length();
  const double c = std::max(m1.max_abs_margin / h1, m2.max_abs_margin / h2);
  const double ratio = m2.max_abs_margin > 0.0 ? m1.max_abs_margin / m2.max_abs_margin
                                               : std::numeric_limits<double>::infinity();
  rep.metrics.push_back({"epsilon_constant", c});
  rep.metrics.push_back({"identity_margin_h", m1.max_abs_margin});
  rep.metrics.push_back({"identity_margin_h_half", m2.max_abs_margin});
  rep.checks.push_back(make_check("identity_margin", m1.max_abs_margin, "<=", c * h1,
                                  "epsilon(h) = c h, c = max(margin(h)/h, margin(h/2)/(h/2))"));
  rep.checks.push_back(make_check("richardson_ratio", ratio, ">=", ratio_min, "margin(h) / margin(h/2)"));
  rep.series.push_back({"margin_vs_h", {"h", "max_abs_margin"}, {{h1, m1.max_abs_margin}, {h2, m2.max_abs_margin}}});

  // Harmonic map into a tripod: the trace runs out along leg 0 and back, then
  // along leg 1 and back.
  const auto tripod = spaces::TreeSpace::tripod(1.0, 1.0, 1.0);
  const auto mesh = harmonic::DiscMesh::ring_disc(tripod_rings);
  std::vector<spaces::TreePoint> trace;
  const auto cycle = mesh.boundary();
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cycle.size());
    const double s = reach * std::abs(std::sin(th));
    trace.push_back({th < std::numbers::pi ? std::size_t{0} : std::size_t{1}, s});
  }
  harmonic::SolveOptions so;
  so.tol = tol;
  const auto map = harmonic::solve_harmonic<spaces::TreeSpace>(mesh, tripod, trace, so);
  const auto g = flows::squared_distance(tripod, tripod.node_point(0));
  const auto cert = flows::certify_lambda_convex(g, 2000, ctx.seed);
  rep.checks.push_back(make_check("tripod_lambda_certified", cert.passed() ? 1.0 : 0.0, ">=", 1.0,
                                  "midpoint test, tolerance 1e-9 (1 + |f|)"));
  double spread = 0.0;
  for (auto v : mesh.interior_vertices()) {
    double wsum = 0.0;
    for (const auto& nb : mesh.neighbors(v)) wsum += nb.weight;
    spread = std::max(spread, wsum / mesh.area(v));
  }
  const double eps_solve = 10.0 * tol * spread * (1.0 + 4.0 * tripod.total_length());
  const double eps = c * mesh.max_edge_length() + eps_solve;
  const auto tm = harmonic::fuglede_check(map, g, eps);
  rep.metrics.push_back({"tripod_sweeps", static_cast<double>(map.sweeps)});
  rep.checks.push_back(make_check("tripod_margin", tm.min_margin, ">=", -eps,
                                  "-(c h + 10 tol max_v(sum w / A) (1 + 4 L)), L = total tripod length"));

  std::vector<spaces::TreePoint> flat(cycle.size(), spaces::TreePoint{2, 0.5});
  const auto constant = harmonic::solve_harmonic<spaces::TreeSpace>(mesh, tripod, flat, so);
  const auto cc = harmonic::constancy_check(constant, g);
  rep.checks.push_back(make_check("constant_trace", cc.applicable && cc.passed ? 1.0 : 0.0, ">=", 1.0,
                                  "f o u constant implies image spread < 1e-8"));
  return rep;
}

RunReport plateau(Params& p, const Context&) {
  const auto rings = static_cast<int>(p.count("mesh.rings", 16));
  const double tol = p.positive("check.tol", 1e-10);
  const auto samples = p.count("curve.samples", 384);
  const double a = p.positive("curve.ellipse_a", 2.0), b = p.positive("curve.ellipse_b", 1.0);
  const double side = p.positive("curve.square_side", 1.0);
  p.finish();

  RunReport rep;
  const ModelSurface plane(0.0);
  const auto mesh = harmonic::DiscMesh::ring_disc(rings);
  harmonic::SolveOptions so;
  so.tol = tol;
  auto ellipse = [&](double ax, double bx) {
    harmonic::JordanBoundary g;
    for (std::size_t k = 0; k < samples; ++k) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
      g.points.push_back(plane.from_plane(ax * std::cos(th), bx * std::sin(th)));
    }
    return g;
  };
  harmonic::JordanBoundary square;
  const double hs = 0.5 * side;
  square.points = {plane.from_plane(hs, 0.0), plane.from_plane(hs, hs), plane.from_plane(-hs, hs),
                   plane.from_plane(-hs, -hs), plane.from_plane(hs, -hs)};
  const std::vector<std::pair<std::string, harmonic::JordanBoundary>> curves = {
      {"circle", ellipse(1.0, 1.0)}, {"ellipse", ellipse(a, b)}, {"square", square}};
  for (const auto& [name, curve] : curves) {
    const auto res = harmonic::plateau_energy_bound(mesh, plane, curve, so);
    rep.metrics.push_back({name + "_length", res.length});
    rep.metrics.push_back({name + "_energy", res.energy});
    rep.checks.push_back(make_check(name + "_energy_bound", res.energy, "<", res.bound, "l^2 / pi"));
    if (name == "circle") {
      rep.checks.push_back(make_check("circle_energy", std::abs(res.energy / (2.0 * std::numbers::pi) - 1.0), "<=",
                                      0.02, "|E^2 / (2 pi) - 1|"));
    }
    if (name == "ellipse") {
      rep.metrics.push_back({"ellipse_isotropy_defect", harmonic::conformal_factor_extract(res.map).isotropy_defect});
    }
  }
  const auto identity = harmonic::make_map(mesh, plane, identity_images(mesh, plane));
  const auto fx = harmonic::conformal_factor_extract(identity);
  rep.checks.push_back(make_check("area_energy_identity", fx.relative_error, "<=", 0.01,
                                  "|sum phi^2 area - E^2 / 2| / (E^2 / 2)"));
  return rep;
}

RunReport radial(Params& p, const Context&) {
  const double r = p.positive("profile.r", 1.0);
  const GridSpec gs = grid_spec(p, 0.02, 1.0, "1");
  const double s = p.positive("check.s", 0.9);
  p.finish();
  if (!(s < gs.r)) raise(ErrorCode::ConfigError, "check.s must lie inside the grid disc");

  RunReport rep;
  const double ident = conformal::radial_distance({[](double) { return 1.0; }, 1.0}, 0.7);
  rep.checks.push_back(make_check("identity_profile", std::abs(ident - 0.7), "<=", 1e-10, "|R - 0.7|"));
  const double expo = conformal::radial_distance({[](double t) { return std::exp(t); }, 2.0}, 1.0);
  rep.checks.push_back(make_check("exponential_profile", std::abs(expo - (std::numbers::e - 1.0)), "<=", 1e-10, "|R - (e - 1)|"));
  const double hyper = conformal::main_radial_distance(r, 0.5 * r);
  rep.checks.push_back(make_check("main_profile", std::abs(hyper - conformal::main_radial_distance_exact(r, 0.5 * r)),
                                  "<=", 1e-10, "|R(r/2) - (1/r) log 3|"));

  // Graph distance on a flat grid changed by f = |z|^2 / 2 against the profile e^{t^2/2}.
  const GridDisc grid = build_grid(gs);
  const auto base = spaces::grid_to_graph(grid);
  std::vector<double> f(grid.node_count());
  double fmax = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec2 z = grid.position(k);
    f[k] = 0.5 * (z.x * z.x + z.y * z.y);
    fmax = std::max(fmax, f[k]);
  }
  const auto changed = conformal::conformal_change(base, f, 0.0, fmax);
  const std::size_t o = grid.nearest(0.0, 0.0), q = grid.nearest(s, 0.0);
  const double d = changed.distance(static_cast<spaces::VertexId>(o), static_cast<spaces::VertexId>(q));
  const double sq = grid.position(q).x;
  const double oracle = conformal::radial_distance({[](double t) { return std::exp(0.5 * t * t); }, 1.0 + sq}, sq);
  const double budget = spaces::kOctileAnisotropy * oracle + 2.0 * gs.h * std::exp(0.5 * sq * sq);
  rep.metrics.push_back({"grid_distance", d});
  rep.metrics.push_back({"profile_distance", oracle});
  rep.checks.push_back(make_check("grid_radial", std::abs(d - oracle), "<=", budget, "0.083 d + 2 h phi_max"));

  Series series{"radial", {"s", "R"}, {}};
  for (int k = 0; k < 100; ++k) {
    const double t = r * k / 100.0;
    series.rows.push_back({t, conformal::main_radial_distance(r, t)});
  }
  rep.series.push_back(std::move(series));
  return rep;
}

using Runner = RunReport (*)(Params&, const Context&);

struct Entry {
  ExperimentInfo info;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {{"model-selfcomparison", "model surfaces compared against themselves (defect at rounding level)"},
       model_selfcomparison},
      {{"thm4.5-reshetnyak", "curvature of a grid factor and comparison sampling of its graph metric"}, reshetnyak},
      {{"thm1.3-kappa-bar", "curvature bound arithmetic for conformal changes"}, kappa_bar_experiment},
      {{"thm5.4-nonpos", "CAT(0) grid changed by d^2/2 and checked against kappa(R)"}, nonpos},
      {{"thm1.1-pipeline", "two-step construction on a ball, radial divergence and local comparison"}, pipeline},
      {{"cor2.2-contraction", "gradient-flow contraction and velocity estimates"}, contraction},
      {{"thm1.4-fuglede", "Laplacian of f o u against lambda e^2 on discrete harmonic maps"}, fuglede},
      {{"lemma4.8-plateau", "harmonic fillings of Jordan curves and the l^2/pi energy bound"}, plateau},
      {{"lemma4.1-radial", "radial distances of conformal profiles and their grid realization"}, radial},
  };
  return list;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

RunReport run_experiment(const Config& config, const RunOptions& options) {
  if (!config.has("experiment")) raise(ErrorCode::ConfigError, "missing key 'experiment'");
  const std::string name = config.get_string("experiment", "");
  const auto it = std::find_if(entries().begin(), entries().end(), [&](const Entry& e) { return e.info.name == name; });
  if (it == entries().end()) config.fail("experiment", "unknown experiment '" + name + "'");

  Config effective = config;
  Context ctx;
  ctx.seed = options.seed ? *options.seed : config.get_uint("seed", 1);
  ctx.jobs = std::max(1u, options.jobs);
  effective.set("seed", std::to_string(ctx.seed));

  Params params(config);
  RunReport report = it->run(params, ctx);
  report.experiment = name;
  report.seed = ctx.seed;
  report.config = effective.normalized();
  return report;
}

}  // namespace catlab::cli
