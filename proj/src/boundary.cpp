#include "nsf/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsf {

BoundaryData BoundaryData::sample(const Grid& g, const VectorFn& u_b, const ScalarFn& theta_b,
                                  const ScalarFn& q_b) {
  BoundaryData bd;
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    for (std::size_t n : g.face_nodes(f)) {
      const double x = g.x(n);
      const double y = g.y(n);
      const auto u = u_b(x, y);
      bd.u_B[0][k].push_back(u[0]);
      bd.u_B[1][k].push_back(g.dim() > 1 ? u[1] : 0.0);
      if (g.temperature_bc(f) == TempBc::dirichlet) {
        bd.theta_B[k].push_back(theta_b(x, y));
      } else {
        bd.q_B[k].push_back(q_b(x, y));
      }
    }
  }
  return bd;
}

std::vector<std::string> BoundaryData::violations(const Grid& g) const {
  std::vector<std::string> out;
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    const int a = axis_of(f);
    for (std::size_t t = 0; t < u_B[a][k].size(); ++t) {
      if (std::abs(u_B[a][k][t]) > 1e-12) {
        std::ostringstream os;
        os << "u_B . n = 0 violated on face " << face_name(f) << " at tangential node " << t
           << " (normal component " << u_B[a][k][t] << "; p8/PP8)";
        out.push_back(os.str());
        break;
      }
    }
    for (double v : theta_B[k]) {
      if (!(v > 0.0)) {
        out.push_back("theta_B must be positive on Gamma_D face " + face_name(f) + " (PP7)");
        break;
      }
    }
    for (double v : q_B[k]) {
      if (v < 0.0) {
        out.push_back("q_B < 0 violates PP9 on face " + face_name(f));
        break;
      }
    }
  }
  if (!g.has_dirichlet_face() && !q_vanishes(g)) {
    out.push_back("Gamma_D is empty and q_B != 0: either Gamma_D != empty or q_B = 0 must hold");
  }
  return out;
}

bool BoundaryData::q_nonnegative(const Grid& g) const {
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    for (double v : q_B[static_cast<int>(f)])
      if (v < 0.0) return false;
  }
  return true;
}

bool BoundaryData::q_vanishes(const Grid& g) const {
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    for (double v : q_B[static_cast<int>(f)])
      if (v != 0.0) return false;
  }
  return true;
}

double BoundaryData::min_theta_B(const Grid& g) const {
  double m = std::numeric_limits<double>::infinity();
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    for (double v : theta_B[static_cast<int>(f)]) m = std::min(m, v);
  }
  return m;
}

VectorField BoundaryData::wall_velocity(const Grid& g) const {
  VectorField out(g);
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const int k = static_cast<int>(f);
    for (std::size_t n : g.face_nodes(f)) {
      const auto t = static_cast<std::size_t>(g.tangential_index(f, n));
      for (int a = 0; a < g.dim(); ++a) out[a][n] = u_B[a][k][t];
    }
  }
  return out;
}

BoundaryClosure BoundaryData::temperature_closure(const Grid& g) const {
  return BoundaryClosure::mixed(g, theta_B, q_B);
}

}  // namespace nsf
