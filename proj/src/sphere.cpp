#include "revcurv/sphere.hpp"

#include <algorithm>
#include <sstream>

#include "revcurv/errors.hpp"

namespace revcurv {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kBoundaryTol = 1e-12;

SphericalPoint normalized(const SphericalPoint& x) {
  const double n = x.norm();
  if (!(n > 0) || !std::isfinite(n)) throw PreconditionError("zero or non-finite direction vector");
  return x / n;
}

SphericalPoint along(const SphericalPoint& p, const SphericalPoint& tangent, double angle) {
  return std::cos(angle) * p + std::sin(angle) * tangent;
}

SphericalPoint random_unit(std::mt19937_64& rng) {
  return sample_cap({SphericalPoint::UnitZ(), kPi}, rng);
}

SphericalPoint random_at_distance(const SphericalPoint& a, double d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  const SphericalPoint e1 = orthogonal(a), e2 = a.cross(e1);
  const double phi = u(rng);
  return along(a, std::cos(phi) * e1 + std::sin(phi) * e2, d);
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw PreconditionError("bad number '" + item + "' in region spec");
    }
  }
  if (out.size() != expected)
    throw PreconditionError("expected " + std::to_string(expected) + " numbers in '" + text + "'");
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

Cap parse_cap(const std::string& text) {
  if (text.rfind("cap:", 0) != 0) throw PreconditionError("expected cap:cx,cy,cz,r, got '" + text + "'");
  const auto v = parse_numbers(text.substr(4), 4);
  return {normalized({v[0], v[1], v[2]}), v[3]};
}

std::string vec_str(const SphericalPoint& x) {
  return format_number(x[0]) + "," + format_number(x[1]) + "," + format_number(x[2]);
}

std::string cap_str(const Cap& c) { return "cap:" + vec_str(c.center) + "," + format_number(c.radius); }

void check_radius(double r) {
  if (!(r > 0 && r <= kPi)) throw PreconditionError("cap radius must lie in (0, pi], got " + format_number(r));
}

}  // namespace

// --- geodesics and the angle bound -------------------------------------------

SphericalPoint geodesic_point(const SphericalPoint& p, const SphericalPoint& q, double s) {
  const double d = sph_distance(p, q);
  if (kPi - d <= kAntipodalTol)
    throw NonUniqueGeodesicError("antipodal endpoints: use minimizing_geodesics for the family");
  if (d == 0) return p;
  return (std::sin((1 - s) * d) * p + std::sin(s * d) * q) / std::sin(d);
}

GeodesicFamily minimizing_geodesics(const SphericalPoint& p, const SphericalPoint& q, int directions) {
  GeodesicFamily fam{p, sph_distance(p, q), {}};
  if (kPi - fam.length <= kAntipodalTol) {
    if (directions < 1) throw PreconditionError("need at least one family direction");
    fam.length = kPi;
    const SphericalPoint e1 = orthogonal(p), e2 = p.cross(e1);
    for (int k = 0; k < directions; ++k) {
      const double a = 2 * kPi * k / directions;
      fam.tangents.push_back(std::cos(a) * e1 + std::sin(a) * e2);
    }
  } else if (fam.length == 0) {
    fam.tangents.push_back(orthogonal(p));
  } else {
    fam.tangents.push_back((q - p.dot(q) * p).normalized());
  }
  return fam;
}

double lemma_angle_bound(double R, double eps) {
  if (!(R > 0 && R < kHalfPi)) throw DomainError("R must lie in (0, pi/2), got " + format_number(R));
  if (!(eps > 0 && eps < kHalfPi - R))
    throw DomainError("eps must lie in (0, pi/2 - R), got " + format_number(eps));
  return (std::cos(R) - std::cos(eps) * std::cos(R)) / (std::sin(eps) * std::sin(R));
}

// --- regions -----------------------------------------------------------------

SphericalRegion SphericalRegion::cap(const SphericalPoint& center, double radius, bool open) {
  check_radius(radius);
  SphericalRegion r;
  r.kind_ = RegionKind::cap;
  r.open_ = open;
  r.caps_ = {{normalized(center), radius}};
  r.build_boundary();
  return r;
}

SphericalRegion SphericalRegion::intersection(std::vector<Cap> caps, bool open) {
  if (caps.empty()) throw PreconditionError("intersection of no caps");
  for (auto& c : caps) {
    check_radius(c.radius);
    c.center = normalized(c.center);
  }
  SphericalRegion r;
  r.kind_ = RegionKind::intersection;
  r.open_ = open;
  r.caps_ = std::move(caps);
  r.build_boundary();
  return r;
}

SphericalRegion SphericalRegion::polygon(std::vector<SphericalPoint> vertices, bool open) {
  if (vertices.size() < 3) throw PreconditionError("a polygon needs at least 3 vertices");
  for (auto& v : vertices) v = normalized(v);
  SphericalRegion r;
  r.kind_ = RegionKind::polygon;
  r.open_ = open;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const SphericalPoint& a = vertices[i];
    const SphericalPoint& b = vertices[(i + 1) % n];
    const SphericalPoint normal = a.cross(b);
    if (!(normal.norm() > 1e-12)) throw PreconditionError("polygon edge with coincident or antipodal ends");
    r.caps_.push_back({normal.normalized(), kHalfPi});
  }
  r.vertices_ = std::move(vertices);
  for (const auto& v : r.vertices_)
    if (r.margin(v) < -kBoundaryTol)
      throw PreconditionError("polygon is not convex or not counter-clockwise");
  r.build_boundary();
  return r;
}

SphericalRegion SphericalRegion::union_of(std::vector<Cap> caps, bool open) {
  if (caps.empty()) throw PreconditionError("union of no caps");
  for (auto& c : caps) {
    check_radius(c.radius);
    c.center = normalized(c.center);
  }
  SphericalRegion r;
  r.kind_ = RegionKind::union_of_caps;
  r.open_ = open;
  r.caps_ = std::move(caps);
  r.build_boundary();
  return r;
}

double SphericalRegion::margin(const SphericalPoint& x) const {
  if (kind_ == RegionKind::union_of_caps) {
    double m = -kPi;
    for (const auto& c : caps_) m = std::max(m, c.radius - sph_distance(x, c.center));
    return m;
  }
  double m = kPi;
  for (const auto& c : caps_) m = std::min(m, c.radius - sph_distance(x, c.center));
  return m;
}

bool SphericalRegion::contains(const SphericalPoint& x) const {
  const double m = margin(x);
  return open_ ? m > 0 : m >= 0;
}

bool SphericalRegion::on_boundary(const SphericalPoint& x, std::size_t) const {
  const double m = margin(x);
  return kind_ == RegionKind::union_of_caps ? m <= kBoundaryTol : m >= -kBoundaryTol;
}

void SphericalRegion::build_boundary() {
  pieces_.clear();
  if (kind_ == RegionKind::polygon) {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const SphericalPoint& a = vertices_[i];
      const SphericalPoint& b = vertices_[(i + 1) % n];
      const SphericalPoint axis = caps_[i].center;
      pieces_.push_back({axis, a, axis.cross(a), kHalfPi, 0.0, sph_distance(a, b), false});
    }
  } else {
    for (const auto& c : caps_) {
      if (c.radius >= kPi) continue;
      const SphericalPoint e1 = orthogonal(c.center);
      pieces_.push_back({c.center, e1, c.center.cross(e1), c.radius, 0.0, 2 * kPi, true});
    }
  }

  std::vector<SphericalPoint> pts;
  boundary_param_.clear();
  piece_step_.clear();
  const int n = boundary_resolution;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const Piece& pc = pieces_[k];
    const double step = (pc.phi1 - pc.phi0) / n;
    piece_step_.push_back(step);
    for (int i = 0; i < (pc.periodic ? n : n + 1); ++i) {
      const double phi = pc.phi0 + i * step;
      const SphericalPoint x = pc.at(phi);
      if (!on_boundary(x, k)) continue;
      pts.push_back(x);
      boundary_param_.emplace_back(k, phi);
    }
  }
  boundary_.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) boundary_.col(static_cast<Eigen::Index>(i)) = pts[i];
}

double SphericalRegion::distance(const SphericalPoint& z) const {
  if (margin(z) >= 0 || boundary_.cols() == 0) return 0;
  Eigen::Index best;
  (boundary_.transpose() * z).maxCoeff(&best);
  double d = sph_distance(z, SphericalPoint(boundary_.col(best)));

  const auto [k, phi] = boundary_param_[static_cast<std::size_t>(best)];
  const Piece& pc = pieces_[k];
  double lo = phi - piece_step_[k], hi = phi + piece_step_[k];
  if (!pc.periodic) {
    lo = std::max(lo, pc.phi0);
    hi = std::min(hi, pc.phi1);
  }
  auto cost = [&](double a) {
    const SphericalPoint x = pc.at(a);
    return on_boundary(x, k) ? -z.dot(x) : 2.0;
  };
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = cost(x1), f2 = cost(x2);
  while (hi - lo > 1e-13) {
    if (f1 <= f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = cost(x2);
    }
  }
  const SphericalPoint refined = pc.at(f1 <= f2 ? x1 : x2);
  if (on_boundary(refined, k)) d = std::min(d, sph_distance(z, refined));
  return d;
}

Cap SphericalRegion::bounding_cap() const {
  switch (kind_) {
    case RegionKind::cap:
      return caps_[0];
    case RegionKind::intersection:
      return *std::min_element(caps_.begin(), caps_.end(),
                               [](const Cap& a, const Cap& b) { return a.radius < b.radius; });
    case RegionKind::polygon: {
      SphericalPoint sum = SphericalPoint::Zero();
      for (const auto& v : vertices_) sum += v;
      if (sum.norm() < 1e-9) break;
      const SphericalPoint c = sum.normalized();
      double r = 0;
      for (const auto& v : vertices_) r = std::max(r, sph_distance(c, v));
      if (r < kHalfPi) return {c, std::min(kPi, r + 1e-12)};
      break;
    }
    case RegionKind::union_of_caps:
      break;
  }
  return {SphericalPoint::UnitZ(), kPi};
}

std::string SphericalRegion::describe() const {
  std::string out = open_ ? "open:" : "";
  auto join_caps = [&] {
    std::string s;
    for (std::size_t i = 0; i < caps_.size(); ++i) s += (i ? ";" : "") + cap_str(caps_[i]);
    return s;
  };
  switch (kind_) {
    case RegionKind::cap:
      return out + cap_str(caps_[0]);
    case RegionKind::intersection:
      return out + "inter:" + join_caps();
    case RegionKind::union_of_caps:
      return out + "union:" + join_caps();
    case RegionKind::polygon: {
      out += "poly:";
      for (std::size_t i = 0; i < vertices_.size(); ++i) out += (i ? ";" : "") + vec_str(vertices_[i]);
      return out;
    }
  }
  return out;
}

SphericalRegion parse_region(const std::string& spec) {
  std::string s = spec;
  bool open = false;
  if (s.rfind("open:", 0) == 0) {
    open = true;
    s = s.substr(5);
  }
  if (s.rfind("cap:", 0) == 0) {
    const Cap c = parse_cap(s);
    return SphericalRegion::cap(c.center, c.radius, open);
  }
  if (s.rfind("inter:", 0) == 0 || s.rfind("union:", 0) == 0) {
    std::vector<Cap> caps;
    for (const auto& part : split(s.substr(6), ';')) caps.push_back(parse_cap(part));
    return s[0] == 'i' ? SphericalRegion::intersection(std::move(caps), open)
                       : SphericalRegion::union_of(std::move(caps), open);
  }
  if (s.rfind("poly:", 0) == 0) {
    std::vector<SphericalPoint> vs;
    for (const auto& part : split(s.substr(5), ';')) {
      const auto v = parse_numbers(part, 3);
      vs.push_back(normalized({v[0], v[1], v[2]}));
    }
    return SphericalRegion::polygon(std::move(vs), open);
  }
  throw PreconditionError("unknown region spec '" + spec + "'");
}

// --- sampling ----------------------------------------------------------------

SphericalPoint sample_cap(const Cap& cap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double z = 1 - u(rng) * (1 - std::cos(cap.radius));
  const double phi = 2 * kPi * u(rng);
  const SphericalPoint e1 = orthogonal(cap.center), e2 = cap.center.cross(e1);
  const double r = std::sqrt(std::max(0.0, 1 - z * z));
  return (z * cap.center + r * (std::cos(phi) * e1 + std::sin(phi) * e2)).normalized();
}

std::vector<SphericalPoint> sample_region(const SphericalRegion& region, int n, std::mt19937_64& rng) {
  const Cap box = region.bounding_cap();
  std::vector<SphericalPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  const long limit = 2000L * n + 100000;
  for (long attempt = 0; static_cast<int>(out.size()) < n; ++attempt) {
    if (attempt > limit) throw PreconditionError("region appears to be empty");
    const SphericalPoint x = sample_cap(box, rng);
    if (region.contains(x)) out.push_back(x);
  }
  return out;
}

Eigen::Matrix3Xd fibonacci_lattice(int n) {
  Eigen::Matrix3Xd pts(3, n);
  const double golden_angle = kPi * (3 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1 - (2.0 * i + 1) / n;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double phi = golden_angle * i;
    pts.col(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return pts;
}

FarthestPoint farthest_distance(const SphericalRegion& region, int resolution) {
  if (resolution < 16) throw PreconditionError("farthest_distance needs resolution >= 16");
  const Eigen::Matrix3Xd lattice = fibonacci_lattice(resolution);
  FarthestPoint out{-1, SphericalPoint::UnitZ(), std::sqrt(4 * kPi / resolution)};
  for (int i = 0; i < resolution; ++i) {
    const SphericalPoint z = lattice.col(i);
    const double d = region.distance(z);
    if (d > out.R) out = {d, z, out.spacing};
  }

  double h = out.spacing;
  SphericalPoint x = out.argmax;
  double fx = out.R;
  for (int iter = 0; h > 1e-12 && iter < 100000; ++iter) {
    const SphericalPoint e1 = orthogonal(x), e2 = x.cross(e1);
    SphericalPoint best = x;
    double fbest = fx;
    for (int k = 0; k < 8; ++k) {
      const double a = k * kPi / 4;
      const SphericalPoint y = along(x, std::cos(a) * e1 + std::sin(a) * e2, h).normalized();
      const double fy = region.distance(y);
      if (fy > fbest) best = y, fbest = fy;
    }
    if (fbest > fx)
      x = best, fx = fbest;
    else
      h /= 2;
  }
  if (fx > out.R) out.R = fx, out.argmax = x;
  return out;
}

// --- convexity ---------------------------------------------------------------

std::string to_string(ConvexityMode mode) {
  switch (mode) {
    case ConvexityMode::w: return "w";
    case ConvexityMode::s: return "s";
    case ConvexityMode::l: return "l";
  }
  return "?";
}

ConvexityVerdict convexity_check(const SphericalRegion& region, ConvexityMode mode, int pair_samples,
                                 int arc_samples, std::uint64_t seed) {
  if (pair_samples < 64 || arc_samples < 64) throw PreconditionError("convexity sample counts must be >= 64");
  std::mt19937_64 rng(seed);
  ConvexityVerdict v{mode, true, std::nullopt, 0, 0, arc_samples, 0};

  // worst point of arc k, if it leaves the region
  auto check_arc = [&](const GeodesicFamily& fam, std::size_t k) -> std::optional<ConvexityWitness> {
    v.samples_used += arc_samples;
    double worst = kPi, s_worst = 0;
    for (int j = 0; j < arc_samples; ++j) {
      const double s = static_cast<double>(j) / (arc_samples - 1);
      const double m = region.margin(fam.point(k, s));
      if (m < worst) worst = m, s_worst = s;
    }
    if (worst >= -kMembershipTol) return std::nullopt;
    return ConvexityWitness{fam.p, SphericalPoint::Zero(), fam.tangents[k], fam.length, s_worst,
                            fam.point(k, s_worst), worst};
  };

  auto test_pair = [&](const SphericalPoint& p, const SphericalPoint& q) -> bool {
    ++v.pairs;
    const GeodesicFamily fam = minimizing_geodesics(p, q);
    if (fam.antipodal()) ++v.antipodal_pairs;
    std::optional<ConvexityWitness> first;
    for (std::size_t k = 0; k < fam.tangents.size(); ++k) {
      auto w = check_arc(fam, k);
      if (!w && mode == ConvexityMode::w) return true;
      if (w && !first) first = w;
      if (w && mode != ConvexityMode::w) break;
    }
    if (!first) return true;
    first->q = q;
    v.passed = false;
    v.witness = first;
    return false;
  };

  std::uniform_real_distribution<double> u(0, 1);
  const Eigen::Matrix3Xd& bd = region.boundary();
  auto boundary_point = [&] {
    const auto i = static_cast<Eigen::Index>(u(rng) * static_cast<double>(bd.cols()));
    return SphericalPoint(bd.col(std::min(i, bd.cols() - 1)));
  };

  if (mode == ConvexityMode::l) {
    const double rho = convexity_radius(SphericalPoint::UnitZ()) / 2;
    int centres = 0;
    while (v.pairs < pair_samples && centres < pair_samples) {
      ++centres;
      const SphericalPoint c = bd.cols() ? boundary_point() : sample_region(region, 1, rng)[0];
      std::vector<SphericalPoint> local;
      for (int attempt = 0; attempt < 4000 && local.size() < 16; ++attempt) {
        const SphericalPoint x = sample_cap({c, rho}, rng);
        if (region.contains(x)) local.push_back(x);
      }
      for (std::size_t i = 0; i + 1 < local.size() && v.pairs < pair_samples; i += 2)
        if (!test_pair(local[i], local[i + 1])) return v;
    }
    return v;
  }

  std::vector<std::pair<SphericalPoint, SphericalPoint>> antipodal;
  for (Eigen::Index i = 0; i < bd.cols(); ++i) {
    const SphericalPoint b = bd.col(i);
    if (region.margin(-b) >= -kMembershipTol) antipodal.emplace_back(b, -b);
  }
  const std::size_t n_anti = std::min<std::size_t>(antipodal.size(), static_cast<std::size_t>(pair_samples / 4));
  for (std::size_t j = 0; j < n_anti; ++j)
    if (!test_pair(antipodal[j * antipodal.size() / n_anti].first, antipodal[j * antipodal.size() / n_anti].second))
      return v;

  const int remaining = pair_samples - v.pairs;
  const auto pool = sample_region(region, 2 * remaining, rng);
  for (int j = 0; j < remaining; ++j) {
    SphericalPoint p = pool[static_cast<std::size_t>(2 * j)], q = pool[static_cast<std::size_t>(2 * j + 1)];
    if (bd.cols() && u(rng) < 0.25) p = boundary_point();
    if (bd.cols() && u(rng) < 0.25) q = boundary_point();
    if (!test_pair(p, q)) return v;
  }
  return v;
}

bool revalidate(const SphericalRegion& region, const ConvexityWitness& w) {
  const SphericalPoint x = along(w.p, w.tangent, w.s * w.length);
  return region.margin(x) < -kMembershipTol;
}

HemisphereCertificate hemisphere_certificate(const SphericalRegion& region, int resolution,
                                             int validation_samples, std::uint64_t seed) {
  HemisphereCertificate cert;
  const FarthestPoint fp = farthest_distance(region, resolution);
  cert.R = fp.R;
  if (fp.R < kHalfPi - kMembershipTol) return cert;

  std::mt19937_64 rng(seed);
  auto pts = sample_region(region, validation_samples, rng);
  for (Eigen::Index i = 0; i < region.boundary().cols(); ++i) pts.emplace_back(region.boundary().col(i));
  for (const auto& x : pts) {
    if (sph_distance(x, fp.argmax) < std::min(fp.R, kHalfPi) - kMembershipTol) return cert;
    ++cert.validated;
  }
  cert.pole = fp.argmax;
  cert.closed = true;
  cert.open = fp.R > kHalfPi + kMembershipTol;
  return cert;
}

GeneratedRegion random_region(RegionFamily family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const SphericalPoint anchor = random_unit(rng);
  switch (family) {
    case RegionFamily::cap:
      return {SphericalRegion::cap(anchor, 0.1 + 1.35 * u(rng)), family, true};
    case RegionFamily::hemisphere:
      return {SphericalRegion::cap(anchor, kHalfPi), family, false};
    case RegionFamily::cap_intersection: {
      std::vector<Cap> caps;
      const int m = 2 + static_cast<int>(u(rng) * 2);
      for (int i = 0; i < m; ++i) {
        const double d = 0.8 * u(rng);
        const double r = d + 0.15 + (1.5 - d - 0.15) * u(rng);
        caps.push_back({random_at_distance(anchor, d, rng), r});
      }
      return {SphericalRegion::intersection(std::move(caps)), family, true};
    }
    case RegionFamily::hemisphere_intersection: {
      std::vector<Cap> caps;
      const int m = 2 + static_cast<int>(u(rng) * 2);
      for (int i = 0; i < m; ++i) caps.push_back({random_at_distance(anchor, 1.2 * u(rng), rng), kHalfPi});
      return {SphericalRegion::intersection(std::move(caps)), family, false};
    }
    case RegionFamily::polygon: {
      const int k = 3 + static_cast<int>(u(rng) * 5);
      const double rho = 0.2 + u(rng);
      const SphericalPoint e1 = orthogonal(anchor), e2 = anchor.cross(e1);
      std::vector<SphericalPoint> vs;
      for (int i = 0; i < k; ++i) {
        const double phi = 2 * kPi * (i + 0.4 * (u(rng) - 0.5)) / k;
        vs.push_back(along(anchor, std::cos(phi) * e1 + std::sin(phi) * e2, rho));
      }
      return {SphericalRegion::polygon(std::move(vs)), family, true};
    }
  }
  throw PreconditionError("unknown region family");
}

}  // namespace revcurv
