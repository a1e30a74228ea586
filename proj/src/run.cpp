#include "revcurv/run.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>

#include "revcurv/errors.hpp"
#include "revcurv/export.hpp"
#include "revcurv/metric.hpp"
#include "revcurv/sphere.hpp"

namespace revcurv {
namespace fs = std::filesystem;

namespace {

using R = Relation;

constexpr int kFarthestResolution = 4096;
constexpr int kPairSamples = 256;
constexpr int kArcSamples = 64;
constexpr int kRandomRegions = 20;

double b(bool x) { return x ? 1.0 : 0.0; }

void curvature_suite(VerificationReport& rep, const ProfileCurve& p, const CurvatureField& field) {
  double kmax = -INFINITY;
  int unity = 0, unity_bad = 0;
  for (std::size_t i = 0; i < field.k.size(); ++i) {
    kmax = std::max(kmax, field.k[i]);
    if (field.exact_unity[i]) {
      ++unity;
      if (field.k[i] != 1.0) ++unity_bad;
    }
  }
  rep.check("curvature.k_max", "largest sampled Gauss curvature", "K <= 1 everywhere", kmax, R::less_equal,
            1 + 1e-9);
  rep.check("curvature.exact_unity", "samples in the unperturbed region with K != 1", "K == 1 where eps == 0",
            unity_bad, R::less_equal, 0, std::to_string(unity) + " unperturbed samples");

  const auto ext = curvature_extrema(p, p.params().grid_n);
  if (p.kind() == ProfileKind::barbell) {
    rep.check("curvature.k_min", "refined minimum of K", "negative curvature somewhere on the neck", ext.k_min,
              R::less, -1e-3, "t_at_min=" + format_number(ext.t_at_min));
    rep.check("curvature.k_min_in_band", "minimum lies where eps is nonzero", "negative curvature on the neck",
              b(!p.unperturbed(ext.t_at_min)), R::greater_equal, 1);
    rep.check("curvature.waist", "|K(pi/2)|", "K vanishes on the waist", std::abs(gauss_curvature(p, kHalfPi)),
              R::less_equal, 1e-6);
  } else {
    rep.check("curvature.k_min", "|K_min - 1| on the round sphere", "constant curvature 1",
              std::abs(ext.k_min - 1), R::less_equal, 1e-12);
  }
}

void gauss_bonnet_suite(VerificationReport& rep, const ProfileCurve& p) {
  const std::string prop = "total curvature of a sphere is 4 pi";
  try {
    const auto tc = total_curvature(p);
    rep.check("gauss_bonnet.total", "|2 pi int K f dt - 4 pi|", prop, std::abs(tc.quadrature - 4 * kPi),
              R::less_equal, 1e-6);
    rep.check("gauss_bonnet.telescoped", "|quadrature - 2 pi (f'(start) - f'(end))|", prop,
              std::abs(tc.quadrature - tc.telescoped), R::less_equal, 1e-6);
  } catch (const NumericError& e) {
    rep.check("gauss_bonnet.telescoped", "|quadrature - 2 pi (f'(start) - f'(end))|", prop, e.residual(),
              R::less_equal, 1e-6, e.what());
  }
}

void sphere_bound_suite(VerificationReport& rep, const ProfileCurve& p) {
  const auto sb = minimal_sphere_bound_check(p);
  const std::string prop = "K_max * Area >= 4 pi";
  const std::string note = "area=" + format_number(sb.area) + " k_max=" + format_number(sb.k_max);
  if (p.kind() == ProfileKind::barbell)
    rep.check("sphere_bound.margin", "K_max * Area - 4 pi", prop, sb.margin, R::greater, 0, note);
  else
    rep.check("sphere_bound.margin", "|K_max * Area - 4 pi| (equality on the round sphere)", prop,
              std::abs(sb.margin), R::less_equal, 1e-8, note);
}

void closed_geodesic_suite(VerificationReport& rep, const ProfileCurve& p, double step_tol) {
  const auto par = geodesic_parallels(p);
  rep.check("parallels.count", "parallel geodesics found", "f'(t) = 0 gives a closed geodesic",
            static_cast<double>(par.parallels.size()), R::greater_equal, 1);
  double worst = 0;
  for (const auto& q : par.parallels) worst = std::max(worst, std::abs(parallel_closure_length(p, q.t, step_tol) - q.length));
  rep.check("parallels.closure", "max |ODE closure length - 2 pi f(t*)|", "parallels close up", worst, R::less_equal,
            1e-6);

  const auto sc = shortest_closed_geodesic(p);
  const std::string note = "kind=" + to_string(sc.kind);
  if (p.kind() == ProfileKind::barbell)
    rep.check("closed_geodesic.shortest", "length of the shortest closed geodesic",
              "shortest closed geodesic shorter than 2 pi", sc.length, R::less, 2 * kPi - 0.5, note);
  else
    rep.check("closed_geodesic.shortest", "|shortest closed geodesic - 2 pi|", "great circles have length 2 pi",
              std::abs(sc.length - 2 * kPi), R::less_equal, 1e-9, note);
}

void waist_suite(VerificationReport& rep, const ProfileCurve& p, double step_tol) {
  const double quad = p.perturbation()->jet(kHalfPi)[0];
  const double ode = parallel_closure_length(p, kHalfPi, step_tol) / (2 * kPi);
  rep.check("waist.ode_closure", "|ODE closure / 2 pi - eps(pi/2)|", "waist circle is a closed geodesic",
            std::abs(ode - quad), R::less_equal, 1e-6, "eps(pi/2)=" + format_number(quad));
}

void conjugate_suite(VerificationReport& rep, const ConstructionParams& params, double step_tol, std::uint64_t seed,
                     const fs::path& dir, std::vector<fs::path>& files) {
  const auto round = round_profile(params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(-1.2, 1.2), ua(0, 2 * kPi);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const auto tr = geodesic_flow(round, unit_state(round, ut(rng), 0, ua(rng)), kPi + 1, step_tol);
    const auto j = first_conjugate_time(round, tr);
    worst = std::max(worst, j.first_zero ? std::abs(*j.first_zero - kPi) : INFINITY);
    if (i == 0) {
      export_jacobi(j, dir / "jacobi_round.txt");
      files.push_back(dir / "jacobi_round.txt");
    }
  }
  rep.check("conjugate.round", "max |first conjugate time - pi| over 20 round geodesics",
            "first conjugate point at exactly pi", worst, R::less_equal, 1e-6);
}

void drift_suite(VerificationReport& rep, const ProfileCurve& p, double step_tol, const fs::path& dir,
                 std::vector<fs::path>& files) {
  const auto tr = geodesic_flow(p, unit_state(p, 0.3, 0, 0.7), 10, step_tol);
  export_trajectory(p, tr, dir / "trajectory.txt");
  files.push_back(dir / "trajectory.txt");
  const std::string note = "steps=" + std::to_string(tr.stats.accepted);
  rep.check("drift.speed", "max unit-speed defect over arclength 10", "geodesics have unit speed", speed_drift(tr),
            R::less_equal, 1e-8, note);
  rep.check("drift.clairaut", "max Clairaut drift over arclength 10", "f^2 theta' is conserved", clairaut_drift(tr),
            R::less_equal, 1e-8, note);
}

void convexity_suite(VerificationReport& rep, const std::vector<std::string>& specs, std::uint64_t seed) {
  const std::string lemma = "closed w-convex proper sets lie in a closed hemisphere";
  const std::string corollary = "closed s-convex sets lie in an open hemisphere";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto region = parse_region(specs[i]);
    const std::string id = "convexity.region" + std::to_string(i);
    const auto fp = farthest_distance(region, kFarthestResolution);
    const auto w = convexity_check(region, ConvexityMode::w, kPairSamples, kArcSamples, seed + i);
    const auto s = convexity_check(region, ConvexityMode::s, kPairSamples, kArcSamples, seed + i);
    const bool witnesses = (!w.witness || revalidate(region, *w.witness)) && (!s.witness || revalidate(region, *s.witness));
    const std::string note = specs[i] + " w=" + (w.passed ? "pass" : "fail") + " s=" + (s.passed ? "pass" : "fail") +
                             " R=" + format_number(fp.R);
    rep.check(id + ".witness", "failing verdicts carry witnesses outside the region", "convexity definitions",
              b(witnesses), R::greater_equal, 1, note);
    const bool proper = fp.R > 0;
    const double tol = 2 * fp.spacing;
    rep.check(id + ".lemma", "R - pi/2 for a w-convex proper region (0 when not applicable)", lemma,
              w.passed && proper ? fp.R - kHalfPi : 0.0, R::greater_equal, -tol, note);
    rep.check(id + ".corollary", "R - pi/2 for an s-convex region (1 when not applicable)", corollary,
              s.passed && proper ? fp.R - kHalfPi : 1.0, R::greater, 0, note);
  }

  double cap_err = 0, spacing = 0;
  for (double r : {0.3, 0.6, 1.0, 1.4}) {
    const auto fp = farthest_distance(SphericalRegion::cap(SphericalPoint::UnitZ(), r), kFarthestResolution);
    cap_err = std::max(cap_err, std::abs(fp.R - (kPi - r)));
    spacing = fp.spacing;
  }
  rep.check("convexity.caps", "max |R - (pi - r)| over caps r = 0.3, 0.6, 1.0, 1.4", "farthest distance from a cap",
            cap_err, R::less_equal, 2 * spacing);

  std::mt19937_64 rng(seed);
  const RegionFamily families[] = {RegionFamily::cap, RegionFamily::hemisphere, RegionFamily::cap_intersection,
                                   RegionFamily::hemisphere_intersection, RegionFamily::polygon};
  double w_min = INFINITY, s_min = INFINITY;
  int s_count = 0;
  for (int i = 0; i < kRandomRegions; ++i) {
    const auto g = random_region(families[i % 5], rng);
    const double R = farthest_distance(g.region, kFarthestResolution).R;
    w_min = std::min(w_min, R - kHalfPi);
    if (g.s_convex) s_min = std::min(s_min, R - kHalfPi), ++s_count;
  }
  rep.check("convexity.random_lemma", "min R - pi/2 over 20 random closed convex regions", lemma, w_min,
            R::greater_equal, -2 * spacing);
  rep.check("convexity.random_corollary", "min R - pi/2 over the s-convex ones", corollary, s_min, R::greater, 0,
            std::to_string(s_count) + " regions");

  const auto hemi = SphericalRegion::cap(SphericalPoint::UnitZ(), kHalfPi);
  const auto hw = convexity_check(hemi, ConvexityMode::w, kPairSamples, kArcSamples, seed);
  const auto hs = convexity_check(hemi, ConvexityMode::s, kPairSamples, kArcSamples, seed);
  rep.check("convexity.hemisphere", "closed hemisphere: w passes, s fails with a valid witness",
            "closed hemispheres are w-convex but not s-convex",
            b(hw.passed && !hs.passed && hs.witness && revalidate(hemi, *hs.witness)), R::greater_equal, 1);
}

}  // namespace

ConstructionParams RunConfig::params() const {
  ConstructionParams p;
  p.delta = delta;
  p.a = a;
  p.grid_n = grid_n;
  p.quad_order = quad_order;
  return p;
}

void RunConfig::validate() const {
  params().validate();
  if (!(step_tol > 0 && step_tol <= 1e-4)) throw PreconditionError("step_tol must lie in (0, 1e-4]");
  if (out_dir.empty()) throw PreconditionError("output directory is empty");
  for (const auto& spec : regions) (void)parse_region(spec);
}

std::vector<std::string> RunConfig::default_regions() {
  return {"cap:0,0,1,0.6", "cap:0,0,1,1.5707963267948966", "inter:cap:0,0,1,1.2;cap:1,0,1,1",
          "poly:1,0,1;0,1,1;-1,0,1;0,-1,1"};
}

RunResult run_report(const RunConfig& config) {
  config.validate();
  RunResult out;
  auto& rep = out.report;
  rep.set_config("delta", format_number(config.delta));
  rep.set_config("a", format_number(config.a));
  rep.set_config("grid_n", std::to_string(config.grid_n));
  rep.set_config("quad_order", std::to_string(config.quad_order));
  rep.set_config("step_tol", format_number(config.step_tol));
  rep.set_config("seed", std::to_string(config.seed));
  rep.set_config("baseline", config.baseline ? "true" : "false");
  const auto regions = config.regions.empty() ? RunConfig::default_regions() : config.regions;
  std::string joined;
  for (const auto& r : regions) joined += (joined.empty() ? "" : " | ") + r;
  rep.set_config("regions", joined);

  const fs::path& dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  auto write_report = [&] {
    std::ofstream os(dir / "report.txt", std::ios::binary);
    rep.write(os);
    if (!os) throw IoError("cannot write " + (dir / "report.txt").string());
    out.files.insert(out.files.begin(), dir / "report.txt");
    out.exit_status = rep.passed() ? 0 : 1;
  };

  std::optional<ProfileCurve> built;
  try {
    built = build_profile(config.params(), config.baseline);
  } catch (const ConstructionError& e) {
    rep.check("construction", "profile built with |f'| <= 1", "arclength profile", 0, R::greater_equal, 1,
              std::string(e.what()) + " at t=" + format_number(e.t()));
    write_report();
    return out;
  }
  const ProfileCurve& p = *built;
  const bool barbell = p.kind() == ProfileKind::barbell;

  rep.append(verify_claim_properties(p));
  const auto field = curvature_field(p);
  curvature_suite(rep, p, field);
  gauss_bonnet_suite(rep, p);
  sphere_bound_suite(rep, p);
  closed_geodesic_suite(rep, p, config.step_tol);
  if (barbell) waist_suite(rep, p, config.step_tol);
  conjugate_suite(rep, config.params(), config.step_tol, config.seed, dir, out.files);
  drift_suite(rep, p, config.step_tol, dir, out.files);
  convexity_suite(rep, regions, config.seed);

  export_profile(p, dir / "profile.txt");
  export_curvature(field, dir / "curvature.txt");
  out.files.push_back(dir / "profile.txt");
  out.files.push_back(dir / "curvature.txt");
  write_report();
  return out;
}

}  // namespace revcurv
