#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "revcurv/geodesic.hpp"
#include "revcurv/metric.hpp"
#include "revcurv/profile.hpp"

namespace revcurv {

/// Comma-separated rows under a "# col,col,..." header, 17 significant digits.
/// Throws IoError when the file cannot be written.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                 const Eigen::MatrixXd& rows);

void export_profile(const ProfileCurve& profile, const std::filesystem::path& path);
void export_curvature(const CurvatureField& field, const std::filesystem::path& path);
void export_trajectory(const ProfileCurve& profile, const Trajectory& traj, const std::filesystem::path& path);
void export_jacobi(const JacobiSolution& jacobi, const std::filesystem::path& path);

struct PlotSeries {
  std::string name;
  Eigen::VectorXd x, y;
};

/// Minimal SVG line plot with a frame, axis ranges and a legend.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::vector<PlotSeries>& series);

struct FigureSummary {
  std::vector<std::filesystem::path> files;
  /// f(pi/2) is below its sampled neighbours (barbell only).
  bool waist_is_local_min = false;
  double waist_value = 0;
  /// min of eps0 - (c - cos) on [delta, pi/2 - delta]; eps0 never drops below
  /// the comparison curve.
  double eps0_minus_comparison = 0;
  /// |eps0 - (c - cos)| at pi/2 - delta, where the two meet.
  double touch_gap = 0;
};

/// f(t), eps0 against c - cos(t), and K(t) as tables and SVG plots in `dir`.
FigureSummary export_figures(const ProfileCurve& profile, const std::filesystem::path& dir);

}  // namespace revcurv
