#pragma once

#include <array>
#include <vector>

#include "qcirc/core.hpp"

namespace qcirc {

/// Equally spaced density samples over [0, 2*pi); the trapezoid sum of the
/// values times 2*pi/N equals 1 to rounding for N >= 16 (the density is a
/// trigonometric polynomial of degree 2).
struct DensityGrid {
  std::vector<double> thetas;
  std::vector<double> values;
  QCParams params;
};

inline DensityGrid make_density_grid(const QCParams& p, std::size_t n) {
  if (n < 16) {
    throw DomainError(ErrorCode::InvalidCount, "density grid needs at least 16 samples");
  }
  DensityGrid grid;
  grid.params = p;
  grid.thetas.reserve(n);
  grid.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = kTwoPi * double(k) / double(n);
    grid.thetas.push_back(t);
    grid.values.push_back(pdf(p, Angle(t)));
  }
  return grid;
}

/// One cell of the density panel grid.
struct GridPanel {
  QCParams params;
  std::size_t row = 0;
  std::size_t column = 0;
};

/// The default 3x3 panel layout: columns fix (r1, mu1), rows fix (r2, mu2).
inline std::vector<GridPanel> default_panel_grid() {
  const std::array<std::pair<double, double>, 3> columns = {{{0.5, 1.0}, {1.0, 1.5}, {1.5, 2.0}}};
  const std::array<std::pair<double, double>, 3> rows = {{{0.5, 0.5}, {1.0, 1.0}, {1.5, 1.5}}};
  std::vector<GridPanel> panels;
  panels.reserve(9);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      GridPanel panel;
      panel.params = QCParams(Angle(columns[j].second), Angle(rows[i].second),
                              columns[j].first, rows[i].first);
      panel.row = i;
      panel.column = j;
      panels.push_back(panel);
    }
  }
  return panels;
}

}  // namespace qcirc
