#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "revcurv/errors.hpp"
#include "revcurv/export.hpp"
#include "revcurv/geodesic.hpp"
#include "revcurv/metric.hpp"
#include "revcurv/run.hpp"
#include "revcurv/sphere.hpp"

using namespace revcurv;
namespace fs = std::filesystem;

namespace {

void print(const std::string& key, double value) { std::cout << key << '=' << format_number(value) << '\n'; }

ProfileCurve profile_for(const RunConfig& cfg) {
  cfg.validate();
  return build_profile(cfg.params(), cfg.baseline);
}

int cmd_build(const RunConfig& cfg) {
  const auto p = profile_for(cfg);
  fs::create_directories(cfg.out_dir);
  export_profile(p, cfg.out_dir / "profile.txt");
  std::cout << "kind=" << (p.kind() == ProfileKind::barbell ? "barbell" : "round") << '\n';
  print("start", p.start());
  print("end", p.end());
  print("samples", static_cast<double>(p.samples().size()));
  if (p.perturbation()) {
    print("alpha0", p.perturbation()->kernel().alpha0());
    print("c", waist_constant(cfg.delta));
    print("waist", p.f(kHalfPi));
  }
  for (const auto& w : p.warnings()) std::cout << "warning=" << w << '\n';
  const auto claims = verify_claim_properties(p);
  for (const auto& r : claims.records())
    std::cout << r.id << '=' << (r.passed ? "pass" : "fail") << " (" << format_number(r.measured) << ")\n";
  return claims.passed() ? 0 : 1;
}

int cmd_curvature(const RunConfig& cfg) {
  const auto p = profile_for(cfg);
  const auto field = curvature_field(p);
  fs::create_directories(cfg.out_dir);
  export_curvature(field, cfg.out_dir / "curvature.txt");
  const auto ext = curvature_extrema(p, cfg.grid_n);
  print("k_max", ext.k_max);
  print("t_at_max", ext.t_at_max);
  print("k_min", ext.k_min);
  print("t_at_min", ext.t_at_min);
  print("area", surface_area(p));
  const auto tc = total_curvature(p);
  print("total_curvature", tc.quadrature);
  print("total_curvature_telescoped", tc.telescoped);
  const auto sb = minimal_sphere_bound_check(p);
  print("sphere_bound_margin", sb.margin);
  return sb.holds ? 0 : 1;
}

int cmd_geodesic(const RunConfig& cfg, double t0, double angle, double length) {
  const auto p = profile_for(cfg);
  const auto tr = geodesic_flow(p, unit_state(p, t0, 0, angle), length, cfg.step_tol);
  fs::create_directories(cfg.out_dir);
  export_trajectory(p, tr, cfg.out_dir / "trajectory.txt");
  std::cout << "meridian=" << (tr.meridian ? "true" : "false") << '\n';
  print("steps", static_cast<double>(tr.stats.accepted));
  print("rejected", static_cast<double>(tr.stats.rejected));
  print("speed_drift", speed_drift(tr));
  print("clairaut_drift", clairaut_drift(tr));
  const auto par = geodesic_parallels(p);
  for (const auto& q : par.parallels) std::cout << "parallel t=" << format_number(q.t) << " length=" << format_number(q.length) << '\n';
  const auto sc = shortest_closed_geodesic(p);
  print("shortest_closed_geodesic", sc.length);
  std::cout << "shortest_kind=" << to_string(sc.kind) << '\n';
  return 0;
}

int cmd_conjugate(const RunConfig& cfg, double t0, double angle, double length) {
  const auto p = profile_for(cfg);
  const auto tr = geodesic_flow(p, unit_state(p, t0, 0, angle), length, cfg.step_tol);
  const auto j = first_conjugate_time(p, tr);
  fs::create_directories(cfg.out_dir);
  export_jacobi(j, cfg.out_dir / "jacobi.txt");
  if (j.first_zero)
    print("first_conjugate_time", *j.first_zero);
  else
    std::cout << "first_conjugate_time=none\ninconclusive_beyond=" << format_number(j.searched) << '\n';
  return 0;
}

int cmd_convexity(const RunConfig& cfg, int pairs, int arcs, int resolution) {
  cfg.validate();
  const auto specs = cfg.regions.empty() ? RunConfig::default_regions() : cfg.regions;
  fs::create_directories(cfg.out_dir);
  std::ofstream os(cfg.out_dir / "convexity.txt", std::ios::binary);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto region = parse_region(specs[i]);
    const auto fp = farthest_distance(region, resolution);
    const auto cert = hemisphere_certificate(region, resolution, 2000, cfg.seed + i);
    for (auto mode : {ConvexityMode::w, ConvexityMode::s, ConvexityMode::l}) {
      const auto v = convexity_check(region, mode, pairs, arcs, cfg.seed + i);
      os << "[verdict]\nregion=" << region.describe() << "\nmode=" << to_string(mode)
         << "\nverdict=" << (v.passed ? "pass" : "fail") << "\npairs=" << v.pairs
         << "\nantipodal_pairs=" << v.antipodal_pairs << "\narc_samples=" << v.arc_samples
         << "\nsamples_used=" << v.samples_used << '\n';
      if (v.witness) {
        const auto& w = *v.witness;
        os << "witness.p=" << format_number(w.p[0]) << ',' << format_number(w.p[1]) << ',' << format_number(w.p[2])
           << "\nwitness.q=" << format_number(w.q[0]) << ',' << format_number(w.q[1]) << ',' << format_number(w.q[2])
           << "\nwitness.s=" << format_number(w.s) << "\nwitness.margin=" << format_number(w.margin)
           << "\nwitness.revalidated=" << (revalidate(region, w) ? "true" : "false") << '\n';
      }
      os << "farthest_distance=" << format_number(fp.R) << "\nhemisphere=" << (cert.open ? "open" : cert.closed ? "closed" : "none")
         << "\n\n";
      std::cout << "region" << i << '.' << to_string(mode) << '=' << (v.passed ? "pass" : "fail") << '\n';
    }
    std::cout << "region" << i << ".R=" << format_number(fp.R) << '\n'
              << "region" << i << ".hemisphere=" << (cert.open ? "open" : cert.closed ? "closed" : "none") << '\n';
  }
  if (!os) throw IoError("cannot write convexity.txt");
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const auto res = run_report(cfg);
  std::cout << "checks=" << res.report.records().size() << " passed=" << res.report.passed_count()
            << " failed=" << res.report.failed_count() << '\n';
  for (const auto& r : res.report.records())
    if (!r.passed) std::cout << "failed: " << r.id << " measured=" << format_number(r.measured) << '\n';
  std::cout << "report=" << (cfg.out_dir / "report.txt").string() << '\n';
  return res.exit_status;
}

int cmd_figures(const RunConfig& cfg) {
  const auto p = profile_for(cfg);
  const auto fig = export_figures(p, cfg.out_dir);
  for (const auto& f : fig.files) std::cout << "wrote " << f.string() << '\n';
  print("eps0_minus_comparison_min", fig.eps0_minus_comparison);
  if (p.kind() == ProfileKind::barbell) {
    print("waist", fig.waist_value);
    std::cout << "waist_local_min=" << (fig.waist_is_local_min ? "true" : "false") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barbell metrics on the 2-sphere: construction, curvature, geodesics and spherical convexity"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string out = cfg.out_dir.string();
  app.add_option("--delta", cfg.delta, "kernel half-width, 0 < delta < pi/4")->capture_default_str();
  app.add_option("--a", cfg.a, "start of the perturbation support")->capture_default_str();
  app.add_option("--grid", cfg.grid_n, "grid intervals (multiple of 4, >= 512)")->capture_default_str();
  app.add_option("--quad-order", cfg.quad_order, "Gauss-Legendre nodes per panel")->capture_default_str();
  app.add_option("--step-tol", cfg.step_tol, "integrator tolerance")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for sampled suites")->capture_default_str();
  app.add_option("--out", out, "output directory (REVCURV_OUT overrides)")->capture_default_str();
  app.add_flag("--baseline", cfg.baseline, "use the round sphere instead of the barbell");
  app.add_option("--region", cfg.regions, "region spec, repeatable");

  double t0 = 0.3, angle = 0.7, length = 10;
  int pairs = 256, arcs = 64, resolution = 4096;
  auto* build = app.add_subcommand("build", "build the profile and check the perturbation");
  auto* curvature = app.add_subcommand("curvature", "curvature extrema, area and Gauss-Bonnet");
  auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic and list closed ones");
  auto* conjugate = app.add_subcommand("conjugate", "first conjugate point along a geodesic");
  for (auto* sub : {geodesic, conjugate}) {
    sub->add_option("--t0", t0, "initial profile parameter")->capture_default_str();
    sub->add_option("--angle", angle, "initial angle from the meridian")->capture_default_str();
    sub->add_option("--length", length, "arclength")->capture_default_str();
  }
  auto* convexity = app.add_subcommand("convexity", "convexity verdicts and hemisphere certificates");
  convexity->add_option("--pairs", pairs, "point pairs per check")->capture_default_str();
  convexity->add_option("--arcs", arcs, "samples per arc")->capture_default_str();
  convexity->add_option("--resolution", resolution, "lattice points for the farthest distance")->capture_default_str();
  auto* report = app.add_subcommand("report", "run every suite and write report.txt");
  auto* figures = app.add_subcommand("figures", "write plots and tables of f, eps0 and K");

  CLI11_PARSE(app, argc, argv);
  if (const char* env = std::getenv("REVCURV_OUT"); env && *env) out = env;
  cfg.out_dir = out;

  try {
    if (*build) return cmd_build(cfg);
    if (*curvature) return cmd_curvature(cfg);
    if (*geodesic) return cmd_geodesic(cfg, t0, angle, length);
    if (*conjugate) return cmd_conjugate(cfg, t0, angle, length);
    if (*convexity) return cmd_convexity(cfg, pairs, arcs, resolution);
    if (*report) return cmd_report(cfg);
    if (*figures) return cmd_figures(cfg);
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ConstructionError& e) {
    std::cerr << "construction error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
