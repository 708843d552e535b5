#include "nsf/elliptic.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace nsf {

namespace {

double norm_free(std::span<const double> v, const std::vector<char>& free) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (free[i]) s += v[i] * v[i];
  return std::sqrt(s);
}

double dot_free(std::span<const double> a, std::span<const double> b,
                const std::vector<char>& free) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (free[i]) s += a[i] * b[i];
  return s;
}

void remove_mean(std::span<double> v, const std::vector<char>& free) {
  double s = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (free[i]) {
      s += v[i];
      ++m;
    }
  }
  if (m == 0) return;
  const double mean = s / static_cast<double>(m);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (free[i]) v[i] -= mean;
}

int wrap(int idx, int n, bool periodic) {
  if (!periodic) return idx;
  idx %= n;
  return idx < 0 ? idx + n : idx;
}

// Neighbour of node (i, j) shifted by (di, dj), wrapping periodic axes.
std::size_t shifted(const Grid& g, int i, int j, int di, int dj) {
  return g.index(wrap(i + di, g.nodes(0), g.periodic(0)), wrap(j + dj, g.nodes(1), g.periodic(1)));
}

bool on_walled_boundary(const Grid& g, int i, int j) {
  for (Face f : all_faces)
    if (g.on_face(f, i, j)) return true;
  return false;
}

struct FaceLink {
  std::size_t p;
  std::size_t q;
  double k;
};

}  // namespace

SolveReport pcg(const LinearOperator& apply, std::span<const double> diag,
                std::span<const double> b, std::span<double> x, const std::vector<char>& free,
                bool singular, const SolverOptions& opts) {
  const std::size_t n = b.size();
  SolveReport rep;
  std::vector<double> r(n, 0.0), z(n, 0.0), p(n, 0.0), ap(n, 0.0), work(n, 0.0);

  // Reference residual of a cold start: right-hand side with the fixed
  // entries' coupling moved over.
  std::vector<double> x0(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i)
    if (free[i]) x0[i] = 0.0;
  apply(x0, work);
  std::vector<double> beff(n, 0.0);
  double abs_sum = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!free[i]) continue;
    beff[i] = b[i] - work[i];
    sum += beff[i];
    abs_sum += std::abs(beff[i]);
  }
  if (singular) {
    if (std::abs(sum) > opts.tolerance * std::max(abs_sum, 1e-300) && std::abs(sum) > 1e-14) {
      throw SolverError("incompatible data for the pure-Neumann problem: net source " +
                            std::to_string(sum) + " does not vanish",
                        rep);
    }
    remove_mean(beff, free);
  }
  const double ref = norm_free(beff, free);
  if (ref == 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      if (free[i]) x[i] = 0.0;
    return rep;
  }

  apply(std::span<const double>(x.data(), n), work);
  for (std::size_t i = 0; i < n; ++i) r[i] = free[i] ? b[i] - work[i] : 0.0;
  if (singular) remove_mean(r, free);

  auto precondition = [&] {
    for (std::size_t i = 0; i < n; ++i) z[i] = free[i] ? r[i] / diag[i] : 0.0;
  };
  precondition();
  p = z;
  double rz = dot_free(r, z, free);
  double rel = norm_free(r, free) / ref;
  rep.history.push_back(rel);
  while (rel > opts.tolerance) {
    if (rep.iterations >= opts.max_iterations) {
      rep.relative_residual = rel;
      throw SolverError("conjugate gradients did not converge in " +
                            std::to_string(opts.max_iterations) + " iterations (residual " +
                            std::to_string(rel) + ")",
                        rep);
    }
    apply(p, ap);
    const double pap = dot_free(p, ap, free);
    if (!(pap > 0.0)) {
      rep.relative_residual = rel;
      throw SolverError("conjugate gradients broke down (non-positive curvature)", rep);
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      if (!free[i]) continue;
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    if (singular) remove_mean(r, free);
    precondition();
    const double rz_new = dot_free(r, z, free);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = free[i] ? z[i] + beta * p[i] : 0.0;
    ++rep.iterations;
    rel = norm_free(r, free) / ref;
    rep.history.push_back(rel);
  }
  if (singular) remove_mean(x, free);
  rep.relative_residual = rel;
  return rep;
}

ScalarField solve_scalar_elliptic(const ScalarEllipticProblem& pb, const ScalarField* initial_guess,
                                  const SolverOptions& opts, SolveReport* report) {
  const Grid& g = pb.rhs.grid();
  const std::size_t n = g.size();
  for (Face f : all_faces) {
    if (g.has_face(f) && !pb.closure.faces[static_cast<int>(f)]) {
      throw FieldError("elliptic solve: no boundary closure for walled face " + face_name(f));
    }
  }
  pb.coeff.require_positive("elliptic coefficient");

  std::vector<char> free(n, 1);
  std::vector<double> x(n, 0.0);
  if (initial_guess) {
    const auto v = initial_guess->values();
    x.assign(v.begin(), v.end());
  }
  std::vector<double> b(n, 0.0);
  std::vector<double> mass_w(n, 0.0);
  bool has_mass = false;
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = g.weight(i) * pb.rhs[i];
    if (pb.mass) {
      mass_w[i] = g.weight(i) * (*pb.mass)[i];
      if (mass_w[i] != 0.0) has_mass = true;
    }
  }

  // Neumann contributions first, then Dirichlet nodes override.
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const FaceCondition& c = *pb.closure.faces[static_cast<int>(f)];
    if (c.kind != TempBc::neumann) continue;
    const int a = axis_of(f);
    const int t_axis = 1 - a;
    for (std::size_t node : g.face_nodes(f)) {
      const int t = g.tangential_index(f, node);
      const double wperp = g.axis_weight(t_axis, t_axis == 0 ? g.ix(node) : g.iy(node));
      b[node] += wperp * pb.coeff[node] * c.values[static_cast<std::size_t>(t)] / g.spacing(a);
    }
  }
  bool any_fixed = false;
  for (Face f : all_faces) {
    if (!g.has_face(f)) continue;
    const FaceCondition& c = *pb.closure.faces[static_cast<int>(f)];
    if (c.kind != TempBc::dirichlet) continue;
    for (std::size_t node : g.face_nodes(f)) {
      free[node] = 0;
      x[node] = c.values.empty() ? x[node] : c.values[static_cast<std::size_t>(g.tangential_index(f, node))];
      any_fixed = true;
    }
  }

  std::vector<FaceLink> links;
  for (int a = 0; a < g.dim(); ++a) {
    const double h2 = g.spacing(a) * g.spacing(a);
    for (int j = 0; j < g.nodes(1); ++j) {
      for (int i = 0; i < g.nodes(0); ++i) {
        const int idx = a == 0 ? i : j;
        if (!g.periodic(a) && idx == g.nodes(a) - 1) continue;
        const std::size_t p = g.index(i, j);
        const std::size_t q = a == 0 ? shifted(g, i, j, 1, 0) : shifted(g, i, j, 0, 1);
        const double wperp = a == 0 ? g.axis_weight(1, j) : g.axis_weight(0, i);
        links.push_back({p, q, 0.5 * (pb.coeff[p] + pb.coeff[q]) * wperp / h2});
      }
    }
  }
  std::vector<double> diag = mass_w;
  for (const auto& l : links) {
    diag[l.p] += l.k;
    diag[l.q] += l.k;
  }
  const LinearOperator apply = [&](std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mass_w[i] * v[i];
    for (const auto& l : links) {
      const double d = l.k * (v[l.p] - v[l.q]);
      out[l.p] += d;
      out[l.q] -= d;
    }
  };
  const bool singular = !any_fixed && !has_mass;
  SolveReport rep = pcg(apply, diag, b, x, free, singular, opts);
  if (report) *report = rep;
  return ScalarField(g, std::move(x));
}

ScalarField solve_mixed_poisson(const ScalarField& rhs, const FaceTrace& dirichlet,
                                const FaceTrace& neumann, const ScalarField& coeff,
                                const SolverOptions& opts, SolveReport* report) {
  ScalarEllipticProblem pb{std::nullopt, coeff, rhs,
                           BoundaryClosure::mixed(rhs.grid(), dirichlet, neumann)};
  return solve_scalar_elliptic(pb, nullptr, opts, report);
}

namespace {

// Row of (mass - div S(grad .)) for component a at node (i, j).
double lame_row(const Grid& g, std::span<const double> u, const std::vector<double>& mass, double mu,
                double lambda, int a, int i, int j) {
  const std::size_t n = g.size();
  const std::size_t c = g.index(i, j);
  auto comp = [&](int k, std::size_t node) { return u[static_cast<std::size_t>(k) * n + node]; };
  const double gd = mu / 3.0 + lambda;
  double out = mass.empty() ? 0.0 : mass[c] * comp(a, c);
  for (int b = 0; b < g.dim(); ++b) {
    const double h2 = g.spacing(b) * g.spacing(b);
    const std::size_t pl = b == 0 ? shifted(g, i, j, 1, 0) : shifted(g, i, j, 0, 1);
    const std::size_t mi = b == 0 ? shifted(g, i, j, -1, 0) : shifted(g, i, j, 0, -1);
    const double d2 = (comp(a, pl) - 2.0 * comp(a, c) + comp(a, mi)) / h2;
    out -= mu * d2;
    if (b == a) {
      out -= gd * d2;
    } else {
      const double cross = (comp(b, shifted(g, i, j, 1, 1)) - comp(b, shifted(g, i, j, 1, -1)) -
                            comp(b, shifted(g, i, j, -1, 1)) + comp(b, shifted(g, i, j, -1, -1))) /
                           (4.0 * g.spacing(0) * g.spacing(1));
      out -= gd * cross;
    }
  }
  return out;
}

}  // namespace

VectorField lame_operator(const VectorField& u, double mu, double lambda) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  const int d = g.dim();
  std::vector<double> flat(static_cast<std::size_t>(d) * n);
  for (int a = 0; a < d; ++a)
    for (std::size_t k = 0; k < n; ++k) flat[static_cast<std::size_t>(a) * n + k] = u[a][k];
  VectorField out(g);
  const std::vector<double> no_mass;
  for (int j = 0; j < g.nodes(1); ++j) {
    for (int i = 0; i < g.nodes(0); ++i) {
      if (on_walled_boundary(g, i, j)) continue;
      for (int a = 0; a < d; ++a) out[a][g.index(i, j)] = -lame_row(g, flat, no_mass, mu, lambda, a, i, j);
    }
  }
  return out;
}

VectorField solve_lame(const LameProblem& pb, const VectorField* initial_guess,
                       const SolverOptions& opts, SolveReport* report) {
  const Grid& g = pb.rhs.grid();
  const std::size_t n = g.size();
  const int d = g.dim();
  const std::size_t total = static_cast<std::size_t>(d) * n;
  std::vector<double> mass;
  bool has_mass = false;
  if (pb.mass) {
    const auto v = pb.mass->values();
    mass.assign(v.begin(), v.end());
    for (double m : mass) has_mass = has_mass || m != 0.0;
  }
  std::vector<char> free(total, 1);
  std::vector<double> x(total, 0.0), b(total, 0.0), diag(total, 0.0);
  bool any_fixed = false;
  for (int a = 0; a < d; ++a) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = static_cast<std::size_t>(a) * n + k;
      x[idx] = initial_guess ? (*initial_guess)[a][k] : 0.0;
      b[idx] = pb.rhs[a][k];
      if (g.on_boundary(k)) {
        free[idx] = 0;
        x[idx] = pb.boundary[a][k];
        any_fixed = true;
      }
    }
  }
  if (!any_fixed && !has_mass) {
    throw SolverError("Lame system without walls or mass term is singular", SolveReport{});
  }
  const double gd = pb.mu / 3.0 + pb.lambda;
  for (int a = 0; a < d; ++a) {
    for (std::size_t k = 0; k < n; ++k) {
      double dg = mass.empty() ? 0.0 : mass[k];
      for (int bb = 0; bb < d; ++bb) dg += 2.0 * pb.mu / (g.spacing(bb) * g.spacing(bb));
      dg += 2.0 * gd / (g.spacing(a) * g.spacing(a));
      diag[static_cast<std::size_t>(a) * n + k] = dg;
    }
  }
  const LinearOperator apply = [&](std::span<const double> v, std::span<double> out) {
    for (int j = 0; j < g.nodes(1); ++j) {
      for (int i = 0; i < g.nodes(0); ++i) {
        const std::size_t k = g.index(i, j);
        if (on_walled_boundary(g, i, j)) {
          for (int a = 0; a < d; ++a) out[static_cast<std::size_t>(a) * n + k] = 0.0;
          continue;
        }
        for (int a = 0; a < d; ++a)
          out[static_cast<std::size_t>(a) * n + k] = lame_row(g, v, mass, pb.mu, pb.lambda, a, i, j);
      }
    }
  };
  SolveReport rep = pcg(apply, diag, b, x, free, false, opts);
  if (report) *report = rep;
  VectorField out(g);
  for (int a = 0; a < d; ++a)
    for (std::size_t k = 0; k < n; ++k) out[a][k] = x[static_cast<std::size_t>(a) * n + k];
  return out;
}

}  // namespace nsf
