#include "revcurv/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "revcurv/errors.hpp"

namespace revcurv {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

}  // namespace

void write_table(const fs::path& path, const std::vector<std::string>& columns, const Eigen::MatrixXd& rows) {
  if (static_cast<Eigen::Index>(columns.size()) != rows.cols())
    throw PreconditionError("column names do not match the table width");
  auto os = open_out(path);
  os << '#';
  for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : " ") << columns[j];
  os << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) os << (j ? "," : "") << format_number(rows(i, j));
    os << '\n';
  }
  finish(os, path);
}

void export_profile(const ProfileCurve& profile, const fs::path& path) {
  const auto smp = profile.samples();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(smp.size()), 5);
  for (std::size_t i = 0; i < smp.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) << smp[i].t, smp[i].f, smp[i].fp, smp[i].fpp, smp[i].g;
  write_table(path, {"t", "f", "fp", "fpp", "g"}, rows);
}

void export_curvature(const CurvatureField& field, const fs::path& path) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(field.t.size()), 2);
  for (std::size_t i = 0; i < field.t.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) << field.t[i], field.k[i];
  write_table(path, {"t", "K"}, rows);
}

void export_trajectory(const ProfileCurve& profile, const Trajectory& traj, const fs::path& path) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(traj.samples.size()), 6);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& smp = traj.samples[i];
    rows.row(static_cast<Eigen::Index>(i)) << smp.s, smp.state.t, smp.state.theta, smp.state.dt_ds,
        smp.state.dtheta_ds, clairaut_constant(profile, smp.state);
  }
  write_table(path, {"s", "t", "theta", "dt_ds", "dtheta_ds", "clairaut"}, rows);
}

void export_jacobi(const JacobiSolution& jacobi, const fs::path& path) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(jacobi.samples.size()), 3);
  for (std::size_t i = 0; i < jacobi.samples.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) << jacobi.samples[i].s, jacobi.samples[i].y, jacobi.samples[i].yp;
  write_table(path, {"s", "y", "yp"}, rows);
}

void write_svg_plot(const fs::path& path, const std::string& title, const std::string& xlabel,
                    const std::vector<PlotSeries>& series) {
  constexpr double W = 720, H = 440, L = 70, R = 160, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  auto os = open_out(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor << "\" font-size=\"11\">" << text
       << "</text>\n";
  };
  label(L, H - B + 16, format_number(x0), "start");
  label(W - R, H - B + 16, format_number(x1), "end");
  label(L - 4, H - B, format_number(y0), "end");
  label(L - 4, T + 10, format_number(y1), "end");
  label((L + W - R) / 2, H - 12, xlabel, "middle");
  if (y0 < 0 && y1 > 0)
    os << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0)
       << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const Eigen::Index n = s.x.size();
    const Eigen::Index stride = std::max<Eigen::Index>(1, n / 800);
    os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < n; i += stride) {
      if (!std::isfinite(s.y[i])) continue;
      os << format_number(px(s.x[i])) << ',' << format_number(py(s.y[i])) << ' ';
    }
    if (n > 0 && std::isfinite(s.y[n - 1])) os << format_number(px(s.x[n - 1])) << ',' << format_number(py(s.y[n - 1]));
    os << "\"/>\n";
    const double ly = T + 16 + 18 * static_cast<double>(k);
    os << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 32 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << kColors[k % 4] << "\" stroke-width=\"2\"/>\n";
    label(W - R + 36, ly, s.name, "start");
  }
  os << "</svg>\n";
  finish(os, path);
}

FigureSummary export_figures(const ProfileCurve& profile, const fs::path& dir) {
  FigureSummary out;
  const auto smp = profile.samples();
  const Eigen::Index n = static_cast<Eigen::Index>(smp.size());

  Eigen::VectorXd t(n), f(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = smp[static_cast<std::size_t>(i)].t, f[i] = smp[static_cast<std::size_t>(i)].f;
  export_profile(profile, dir / "profile.txt");
  write_svg_plot(dir / "profile.svg", "profile f(t)", "t", {{"f", t, f}});
  out.files.insert(out.files.end(), {dir / "profile.txt", dir / "profile.svg"});

  const double d = profile.params().delta;
  const double c = waist_constant(d);
  const int m = 2048;
  Eigen::VectorXd te(m + 1), e0(m + 1), cmp(m + 1);
  const double lo = -kHalfPi, hi = kHalfPi + d;
  for (int i = 0; i <= m; ++i) {
    te[i] = i == m ? hi : lo + (hi - lo) * i / m;
    e0[i] = eps0_value(te[i], d);
    cmp[i] = c - std::cos(te[i]);
  }
  Eigen::MatrixXd rows(m + 1, 3);
  rows << te, e0, cmp;
  write_table(dir / "eps0.txt", {"t", "eps0", "c_minus_cos"}, rows);
  write_svg_plot(dir / "eps0.svg", "eps0(t) and c - cos(t)", "t", {{"eps0", te, e0}, {"c - cos t", te, cmp}});
  out.files.insert(out.files.end(), {dir / "eps0.txt", dir / "eps0.svg"});

  out.eps0_minus_comparison = INFINITY;
  for (int i = 0; i <= m; ++i)
    if (te[i] >= d && te[i] <= kHalfPi - d) out.eps0_minus_comparison = std::min(out.eps0_minus_comparison, e0[i] - cmp[i]);
  out.touch_gap = std::abs(eps0_value(kHalfPi - d, d) - (c - std::cos(kHalfPi - d)));

  const auto field = curvature_field(profile);
  Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(field.k.data(), n);
  export_curvature(field, dir / "curvature.txt");
  write_svg_plot(dir / "curvature.svg", "Gauss curvature K(t)", "t", {{"K", t, k}});
  out.files.insert(out.files.end(), {dir / "curvature.txt", dir / "curvature.svg"});

  if (profile.kind() == ProfileKind::barbell) {
    const double h = profile.spacing();
    out.waist_value = profile.f(kHalfPi);
    out.waist_is_local_min = true;
    for (int j = 1; j <= 3; ++j)
      out.waist_is_local_min = out.waist_is_local_min && profile.f(kHalfPi - j * h) > out.waist_value &&
                               profile.f(kHalfPi + j * h) > out.waist_value;
  } else {
    out.waist_value = std::nan("");
  }
  return out;
}

}  // namespace revcurv
