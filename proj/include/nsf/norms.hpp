#pragma once

#include <stdexcept>
#include <vector>

#include "nsf/field.hpp"
#include "nsf/state.hpp"

namespace nsf {

class NormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A list of scalar components treated as one tuple-valued field.
using FieldTuple = std::vector<const ScalarField*>;

FieldTuple components(const VectorField& u);
/// (theta, u_1, ..., u_d)
FieldTuple components(const ScalarField& theta, const VectorField& u);
/// (rho, theta, u_1, ..., u_d)
FieldTuple components(const State& s);

enum class NormKind { lq, wkq, sup, w1inf, besov, composite_spq, composite_dpqi, composite_chk };

struct NormSpec {
  NormKind kind = NormKind::lq;
  double q = 2.0;
  int k = 0;
  double p = 2.0;

  /// Besov smoothness 2(1 - 1/p).
  double s() const { return 2.0 * (1.0 - 1.0 / p); }
  /// Throws NormError for k outside {0, 1, 2}, q < 1, s outside (0, 2) for
  /// Besov and composite kinds, q outside (3, inf) for composite kinds.
  void validate() const;
};

/// (sum_n |f_n|^q |dual cell n|)^(1/q). Dual cells carry the trapezoid
/// weights, so the norm of f = 1 is |Omega|^(1/q).
double lq_norm(const ScalarField& f, double q);
/// L^q norm of the pointwise Euclidean magnitude.
double lq_norm(const VectorField& u, double q);

/// Sum of lq_norm over the derivatives d^alpha f with |alpha| <= k (each
/// mixed derivative counted once). Vector fields sum over components.
double sobolev_norm(const ScalarField& f, int k, double q);
double sobolev_norm(const VectorField& u, int k, double q);
double sobolev_norm(const FieldTuple& fs, int k, double q);

/// Largest nodal absolute value over all components.
double sup_norm(const FieldTuple& fs);
/// sup_norm(fs) plus the largest absolute first derivative over all components.
double w1inf_norm(const FieldTuple& fs);

/// Second-order modulus of smoothness over axis-aligned grid offsets of
/// length at most t: max over axes a and k h_a <= t of the L^q norm of
/// f(x + 2 k h e_a) - 2 f(x + k h e_a) + f(x) over the admissible nodes.
double modulus_of_smoothness(const ScalarField& f, double t, double q);

/// ||f||_q + (sum_{j=0..J} [2^{j s} w2(f, L 2^{-j})_q]^r)^(1/r) with
/// J = floor(log2(L / h)) and L the largest extent. Requires s in (0, 2).
double besov_modulus_norm(const ScalarField& f, double s, double q, double r);

/// Discrete B^{2(1-1/p)}_{q,p} norm, besov_modulus_norm with s = 2(1 - 1/p), r = p.
double besov_norm(const ScalarField& f, double p, double q);
/// Sum over components.
double besov_norm(const FieldTuple& fs, double p, double q);

/// (g_now - g_prev) / dt + u . grad g_now.
ScalarField material_derivative(const ScalarField& g_prev, const ScalarField& g_now,
                                const VectorField& u, double dt);

/// States on one grid at strictly increasing times.
struct Trajectory {
  std::vector<State> states;

  void push(State s);
  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return states[k].t; }
  /// Throws NormError when times do not increase or grids differ.
  void validate() const;
};

/// (int_0^T g^p dt)^(1/p), trapezoid rule on the sample times.
double time_lp(const std::vector<double>& times, const std::vector<double>& g, double p);

/// sup_t ||rho||_{W^{1,q}} + ||(theta, u)||_{L^p(W^{2,q})}
///   + ||d_t(rho, theta, u)||_{L^p(L^q)} + ||(theta, u)(0)||_{B}.
/// d_t by backward differences; the first sample reuses the first difference.
double solution_norm_Spq(const Trajectory& traj, double p, double q);

/// ||rho0||_{W^{1,q}} + ||(theta0, u0)||_{B^{2(1-1/p)}_{q,p}}.
double data_norm_DpqI(const ScalarField& rho0, const ScalarField& theta0, const VectorField& u0,
                      double p, double q);

/// Mixed-class norm with derivative orders up to two:
/// sup ||rho||_{W^{1,q}} + sup ||d_t rho||_q + sup ||(theta, u)||_{W^{2,2}}
///   + ||(theta, u)||_{L^2(W^{2,q})} + sup ||d_t (theta, u)||_2
///   + ||d_t (theta, u)||_{L^2(W^{1,2})}. Requires 3 < q <= 6.
double chk_norm(const Trajectory& traj, double q);

/// ||rho0||_{W^{1,q}} + ||u0||_{W^{2,2}} + ||theta0||_{W^{2,2}}.
double data_norm_ChK(const ScalarField& rho0, const ScalarField& theta0, const VectorField& u0,
                     double q);

}  // namespace nsf
