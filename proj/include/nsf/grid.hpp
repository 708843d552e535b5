#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsf {

/// Thrown when a grid or boundary decomposition is inconsistent.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Topology { walled, periodic };

/// Temperature condition carried by a walled face: Dirichlet faces form
/// Gamma_D, Neumann faces form Gamma_N.
enum class TempBc { dirichlet, neumann };

enum class Face : int { x_lo = 0, x_hi = 1, y_lo = 2, y_hi = 3 };

inline constexpr std::array<Face, 4> all_faces{Face::x_lo, Face::x_hi, Face::y_lo, Face::y_hi};

constexpr int axis_of(Face f) { return static_cast<int>(f) / 2; }
constexpr bool is_high_side(Face f) { return static_cast<int>(f) % 2 == 1; }
/// Sign of the outward normal along axis_of(f).
constexpr double outward_sign(Face f) { return is_high_side(f) ? 1.0 : -1.0; }

std::string face_name(Face f);

struct GridSpec {
  int dim = 2;
  std::array<double, 2> extents{1.0, 1.0};
  std::array<int, 2> counts{32, 32};
  /// Tag per face; every walled face needs one, periodic faces ignore it.
  std::array<std::optional<TempBc>, 4> temperature{TempBc::dirichlet, TempBc::dirichlet,
                                                   TempBc::dirichlet, TempBc::dirichlet};
  std::array<Topology, 2> topology{Topology::walled, Topology::walled};
  /// The configuration declares q_B == 0 on every Neumann face.
  bool heat_flux_vanishes = true;
};

/// Uniform node-centred rectangular grid in one or two dimensions.
///
/// A walled axis with n cells carries n + 1 nodes, the first and last lying on
/// the boundary. A periodic axis carries n nodes; node n is identified with
/// node 0. Unused axes (axis >= dim) have a single node and zero spacing.
class Grid {
 public:
  Grid() = default;

  static Grid build(const GridSpec& spec);

  int dim() const { return dim_; }
  int cells(int axis) const { return axis < dim_ ? counts_[axis] : 0; }
  int nodes(int axis) const { return nodes_[axis]; }
  std::size_t size() const { return static_cast<std::size_t>(nodes_[0]) * nodes_[1]; }
  double extent(int axis) const { return axis < dim_ ? extents_[axis] : 0.0; }
  double spacing(int axis) const { return axis < dim_ ? spacing_[axis] : 0.0; }
  double min_spacing() const;
  bool periodic(int axis) const { return axis < dim_ && topology_[axis] == Topology::periodic; }
  bool walled(int axis) const { return axis < dim_ && topology_[axis] == Topology::walled; }
  Topology topology(int axis) const { return topology_[axis]; }

  /// True when `f` is a physical (walled) face of this grid.
  bool has_face(Face f) const { return walled(axis_of(f)); }
  TempBc temperature_bc(Face f) const { return temperature_[static_cast<int>(f)]; }
  bool has_dirichlet_face() const;
  bool has_neumann_face() const;
  bool heat_flux_vanishes() const { return heat_flux_vanishes_; }
  const GridSpec& spec() const { return spec_; }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_[0]) +
           static_cast<std::size_t>(i);
  }
  int ix(std::size_t n) const { return static_cast<int>(n % static_cast<std::size_t>(nodes_[0])); }
  int iy(std::size_t n) const { return static_cast<int>(n / static_cast<std::size_t>(nodes_[0])); }
  double coord(int axis, int idx) const { return idx * spacing(axis); }
  double x(std::size_t n) const { return coord(0, ix(n)); }
  double y(std::size_t n) const { return coord(1, iy(n)); }

  /// Trapezoid weight along one axis: 1/2 on boundary nodes of walled axes.
  double axis_weight(int axis, int idx) const;
  /// Product trapezoid weight at a node; together with cell_measure() this
  /// gives the measure of the node's dual cell.
  double weight(std::size_t n) const { return axis_weight(0, ix(n)) * axis_weight(1, iy(n)); }
  double cell_measure() const;
  double domain_measure() const;

  bool on_face(Face f, int i, int j) const;
  bool on_boundary(std::size_t n) const;
  /// True when node n lies on some Dirichlet temperature face.
  bool on_dirichlet(std::size_t n) const;
  /// Node indices on a face, ordered by the tangential coordinate.
  std::vector<std::size_t> face_nodes(Face f) const;
  /// Number of nodes on a face (0 when the face does not exist).
  int face_size(Face f) const;
  /// Index along a face's tangential direction for node n.
  int tangential_index(Face f, std::size_t n) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  GridSpec spec_{};
  int dim_ = 1;
  std::array<int, 2> counts_{0, 0};
  std::array<int, 2> nodes_{1, 1};
  std::array<double, 2> extents_{0.0, 0.0};
  std::array<double, 2> spacing_{0.0, 0.0};
  std::array<Topology, 2> topology_{Topology::walled, Topology::walled};
  std::array<TempBc, 4> temperature_{};
  bool heat_flux_vanishes_ = true;
};

/// Per-face boundary values indexed by Grid::tangential_index.
using FaceTrace = std::array<std::vector<double>, 4>;

}  // namespace nsf
