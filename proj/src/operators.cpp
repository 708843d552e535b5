#include "nsf/operators.hpp"

#include <algorithm>
#include <cmath>

namespace nsf {

namespace {

// Neighbour index along an axis with periodic wrap. Callers guarantee the
// result stays in range on walled axes.
int wrap(int idx, int n, bool periodic) {
  if (!periodic) return idx;
  idx %= n;
  return idx < 0 ? idx + n : idx;
}

double value_at(const ScalarField& f, int axis, int i, int j, int shift) {
  const Grid& g = f.grid();
  const bool per = g.periodic(axis);
  if (axis == 0) return f.at(wrap(i + shift, g.nodes(0), per), j);
  return f.at(i, wrap(j + shift, g.nodes(1), per));
}

Face face_for(int axis, bool high) {
  return static_cast<Face>(2 * axis + (high ? 1 : 0));
}

}  // namespace

BoundaryClosure BoundaryClosure::self_dirichlet(const ScalarField& f) {
  BoundaryClosure c;
  for (Face face : all_faces) {
    if (!f.grid().has_face(face)) continue;
    c.faces[static_cast<int>(face)] = FaceCondition{TempBc::dirichlet, restrict_to_face(f, face)};
  }
  return c;
}

BoundaryClosure BoundaryClosure::mixed(const Grid& g, const FaceTrace& dirichlet,
                                       const FaceTrace& neumann) {
  BoundaryClosure c;
  for (Face face : all_faces) {
    if (!g.has_face(face)) continue;
    const int k = static_cast<int>(face);
    if (g.temperature_bc(face) == TempBc::dirichlet) {
      c.faces[k] = FaceCondition{TempBc::dirichlet, dirichlet[k]};
    } else {
      c.faces[k] = FaceCondition{TempBc::neumann, neumann[k]};
    }
  }
  return c;
}

ScalarField partial(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  ScalarField out(g);
  if (axis >= g.dim()) return out;
  const double h = g.spacing(axis);
  const int n = g.nodes(axis);
  const bool per = g.periodic(axis);
  for (int j = 0; j < g.nodes(1); ++j) {
    for (int i = 0; i < g.nodes(0); ++i) {
      const int idx = axis == 0 ? i : j;
      double d;
      if (per || (idx > 0 && idx < n - 1)) {
        d = (value_at(f, axis, i, j, 1) - value_at(f, axis, i, j, -1)) / (2.0 * h);
      } else if (idx == 0) {
        d = (-3.0 * value_at(f, axis, i, j, 0) + 4.0 * value_at(f, axis, i, j, 1) -
             value_at(f, axis, i, j, 2)) /
            (2.0 * h);
      } else {
        d = (3.0 * value_at(f, axis, i, j, 0) - 4.0 * value_at(f, axis, i, j, -1) +
             value_at(f, axis, i, j, -2)) /
            (2.0 * h);
      }
      out[g.index(i, j)] = d;
    }
  }
  return out;
}

ScalarField second_partial(const ScalarField& f, int a, int b) {
  const Grid& g = f.grid();
  if (a != b) return partial(partial(f, a), b);
  ScalarField out(g);
  if (a >= g.dim()) return out;
  const double h2 = g.spacing(a) * g.spacing(a);
  const int n = g.nodes(a);
  const bool per = g.periodic(a);
  for (int j = 0; j < g.nodes(1); ++j) {
    for (int i = 0; i < g.nodes(0); ++i) {
      const int idx = a == 0 ? i : j;
      double d;
      if (per || (idx > 0 && idx < n - 1)) {
        d = value_at(f, a, i, j, 1) - 2.0 * value_at(f, a, i, j, 0) + value_at(f, a, i, j, -1);
      } else {
        const int s = idx == 0 ? 1 : -1;
        d = 2.0 * value_at(f, a, i, j, 0) - 5.0 * value_at(f, a, i, j, s) +
            4.0 * value_at(f, a, i, j, 2 * s) - value_at(f, a, i, j, 3 * s);
      }
      out[g.index(i, j)] = d / h2;
    }
  }
  return out;
}

VectorField grad(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<ScalarField> c;
  for (int a = 0; a < g.dim(); ++a) c.push_back(partial(f, a));
  return VectorField(g, std::move(c));
}

ScalarField div(const VectorField& v) {
  ScalarField out(v.grid());
  for (int a = 0; a < v.dim(); ++a) out += partial(v[a], a);
  return out;
}

TensorField grad_tensor(const VectorField& v) {
  TensorField t(v.grid());
  for (int a = 0; a < v.dim(); ++a)
    for (int b = 0; b < v.dim(); ++b) t(a, b) = partial(v[a], b);
  return t;
}

TensorField sym_grad(const VectorField& v) {
  const TensorField gt = grad_tensor(v);
  TensorField d(v.grid(), true);
  for (int a = 0; a < v.dim(); ++a) {
    for (int b = a; b < v.dim(); ++b) {
      ScalarField s = 0.5 * (gt(a, b) + gt(b, a));
      d(b, a) = s;
      d(a, b) = std::move(s);
    }
  }
  return d;
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
  ScalarField out(f.grid());
  for (int a = 0; a < u.dim(); ++a) out += hadamard(u[a], partial(f, a));
  return out;
}

ScalarField laplacian(const ScalarField& f, const BoundaryClosure& closure) {
  const Grid& g = f.grid();
  for (Face face : all_faces) {
    if (g.has_face(face) && !closure.faces[static_cast<int>(face)]) {
      throw FieldError("laplacian: no boundary closure for walled face " + face_name(face));
    }
  }
  ScalarField out(g);
  for (int a = 0; a < g.dim(); ++a) {
    const double h = g.spacing(a);
    const int n = g.nodes(a);
    const bool per = g.periodic(a);
    for (int j = 0; j < g.nodes(1); ++j) {
      for (int i = 0; i < g.nodes(0); ++i) {
        const int idx = a == 0 ? i : j;
        const int t = a == 0 ? j : i;
        double d;
        if (per || (idx > 0 && idx < n - 1)) {
          d = value_at(f, a, i, j, 1) - 2.0 * value_at(f, a, i, j, 0) + value_at(f, a, i, j, -1);
        } else {
          const bool high = idx == n - 1;
          const int s = high ? -1 : 1;
          const FaceCondition& c = *closure.faces[static_cast<int>(face_for(a, high))];
          const double inner = value_at(f, a, i, j, s);
          if (c.kind == TempBc::dirichlet) {
            const double b = c.values.empty() ? value_at(f, a, i, j, 0) : c.values[t];
            const double ghost = 3.0 * b - 3.0 * inner + value_at(f, a, i, j, 2 * s);
            d = inner - 2.0 * b + ghost;
          } else {
            const double ghost = inner + 2.0 * h * c.values[t];
            d = inner - 2.0 * value_at(f, a, i, j, 0) + ghost;
          }
        }
        out[g.index(i, j)] += d / (h * h);
      }
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) s += g.weight(n) * f[n];
  return s * g.cell_measure();
}

double integrate_product(const ScalarField& f, const ScalarField& h) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) s += g.weight(n) * f[n] * h[n];
  return s * g.cell_measure();
}

double interpolate(const ScalarField& f, double x, double y) {
  const Grid& g = f.grid();
  const double pos[2] = {x, y};
  int lo[2] = {0, 0};
  int hi[2] = {0, 0};
  double w[2] = {0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    if (a >= g.dim()) continue;
    const double h = g.spacing(a);
    const int n = g.nodes(a);
    double s = pos[a] / h;
    if (g.periodic(a)) {
      s = std::fmod(s, static_cast<double>(n));
      if (s < 0.0) s += n;
      lo[a] = static_cast<int>(std::floor(s));
      if (lo[a] >= n) lo[a] = n - 1;
      w[a] = s - lo[a];
      hi[a] = (lo[a] + 1) % n;
    } else {
      s = std::clamp(s, 0.0, static_cast<double>(n - 1));
      lo[a] = std::min(static_cast<int>(std::floor(s)), n - 2);
      w[a] = s - lo[a];
      hi[a] = lo[a] + 1;
    }
  }
  const double f00 = f.at(lo[0], lo[1]);
  const double f10 = f.at(hi[0], lo[1]);
  const double f01 = f.at(lo[0], hi[1]);
  const double f11 = f.at(hi[0], hi[1]);
  return (1 - w[0]) * (1 - w[1]) * f00 + w[0] * (1 - w[1]) * f10 + (1 - w[0]) * w[1] * f01 +
         w[0] * w[1] * f11;
}

std::vector<double> normal_derivative(const ScalarField& f, Face face) {
  const Grid& g = f.grid();
  const ScalarField d = partial(f, axis_of(face));
  std::vector<double> out;
  for (std::size_t n : g.face_nodes(face)) out.push_back(outward_sign(face) * d[n]);
  return out;
}

std::vector<double> restrict_to_face(const ScalarField& f, Face face) {
  std::vector<double> out;
  for (std::size_t n : f.grid().face_nodes(face)) out.push_back(f[n]);
  return out;
}

}  // namespace nsf
