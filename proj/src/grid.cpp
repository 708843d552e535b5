#include "nsf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsf {

std::string face_name(Face f) {
  switch (f) {
    case Face::x_lo: return "x_lo";
    case Face::x_hi: return "x_hi";
    case Face::y_lo: return "y_lo";
    case Face::y_hi: return "y_hi";
  }
  return "?";
}

Grid Grid::build(const GridSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2) {
    throw GridError("grid dimension must be 1 or 2, got " + std::to_string(spec.dim));
  }
  Grid g;
  g.spec_ = spec;
  g.dim_ = spec.dim;
  for (int a = 0; a < spec.dim; ++a) {
    if (!(spec.extents[a] > 0.0) || !std::isfinite(spec.extents[a])) {
      throw GridError("extent along axis " + std::to_string(a) + " must be positive");
    }
    if (spec.counts[a] < 8) {
      throw GridError("cell count along axis " + std::to_string(a) + " must be >= 8, got " +
                      std::to_string(spec.counts[a]));
    }
    g.counts_[a] = spec.counts[a];
    g.extents_[a] = spec.extents[a];
    g.spacing_[a] = spec.extents[a] / spec.counts[a];
    g.topology_[a] = spec.topology[a];
    g.nodes_[a] = spec.topology[a] == Topology::periodic ? spec.counts[a] : spec.counts[a] + 1;
  }
  for (Face f : all_faces) {
    const int k = static_cast<int>(f);
    if (!g.has_face(f)) {
      g.temperature_[k] = TempBc::neumann;
      continue;
    }
    if (!spec.temperature[k]) {
      throw GridError("walled face " + face_name(f) + " lacks a temperature tag (deco)");
    }
    g.temperature_[k] = *spec.temperature[k];
  }
  g.heat_flux_vanishes_ = spec.heat_flux_vanishes;
  if (!g.has_dirichlet_face() && !spec.heat_flux_vanishes) {
    throw GridError("Gamma_D is empty but q_B is not declared zero: either Gamma_D != empty or q_B = 0");
  }
  return g;
}

double Grid::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim_; ++a) h = std::min(h, spacing_[a]);
  return h;
}

bool Grid::has_dirichlet_face() const {
  return std::any_of(all_faces.begin(), all_faces.end(), [&](Face f) {
    return has_face(f) && temperature_bc(f) == TempBc::dirichlet;
  });
}

bool Grid::on_dirichlet(std::size_t n) const {
  return std::any_of(all_faces.begin(), all_faces.end(), [&](Face f) {
    return has_face(f) && temperature_bc(f) == TempBc::dirichlet && on_face(f, ix(n), iy(n));
  });
}

bool Grid::has_neumann_face() const {
  return std::any_of(all_faces.begin(), all_faces.end(), [&](Face f) {
    return has_face(f) && temperature_bc(f) == TempBc::neumann;
  });
}

double Grid::axis_weight(int axis, int idx) const {
  if (!walled(axis)) return 1.0;
  return (idx == 0 || idx == nodes_[axis] - 1) ? 0.5 : 1.0;
}

double Grid::cell_measure() const {
  double m = 1.0;
  for (int a = 0; a < dim_; ++a) m *= spacing_[a];
  return m;
}

double Grid::domain_measure() const {
  double m = 1.0;
  for (int a = 0; a < dim_; ++a) m *= extents_[a];
  return m;
}

bool Grid::on_face(Face f, int i, int j) const {
  if (!has_face(f)) return false;
  const int a = axis_of(f);
  const int idx = a == 0 ? i : j;
  return is_high_side(f) ? idx == nodes_[a] - 1 : idx == 0;
}

bool Grid::on_boundary(std::size_t n) const {
  const int i = ix(n);
  const int j = iy(n);
  return std::any_of(all_faces.begin(), all_faces.end(),
                     [&](Face f) { return on_face(f, i, j); });
}

int Grid::face_size(Face f) const {
  if (!has_face(f)) return 0;
  return axis_of(f) == 0 ? nodes_[1] : nodes_[0];
}

std::vector<std::size_t> Grid::face_nodes(Face f) const {
  std::vector<std::size_t> out;
  if (!has_face(f)) return out;
  const int a = axis_of(f);
  const int fixed = is_high_side(f) ? nodes_[a] - 1 : 0;
  const int m = face_size(f);
  out.reserve(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) out.push_back(a == 0 ? index(fixed, t) : index(t, fixed));
  return out;
}

int Grid::tangential_index(Face f, std::size_t n) const {
  return axis_of(f) == 0 ? iy(n) : ix(n);
}

bool Grid::operator==(const Grid& o) const {
  return dim_ == o.dim_ && counts_ == o.counts_ && nodes_ == o.nodes_ && extents_ == o.extents_ &&
         topology_ == o.topology_ && temperature_ == o.temperature_;
}

}  // namespace nsf
