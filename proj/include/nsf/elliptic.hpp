#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nsf/field.hpp"
#include "nsf/operators.hpp"

namespace nsf {

struct SolverOptions {
  double tolerance = 1e-10;  ///< relative residual
  int max_iterations = 100000;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Jacobi-preconditioned conjugate gradients on the entries flagged in `free`.
/// Entries outside `free` keep their value in `x` and act as Dirichlet data.
/// With `singular` set the system is treated as having the constants on the
/// free set as its kernel: the right-hand side must be compatible and the
/// result is returned with zero mean over the free set.
SolveReport pcg(const LinearOperator& apply, std::span<const double> diag,
                std::span<const double> b, std::span<double> x, const std::vector<char>& free,
                bool singular, const SolverOptions& opts);

/// mass * phi - div(coeff grad phi) = rhs with the closure on walled faces.
/// Neumann closure values are outward derivatives grad phi . n.
struct ScalarEllipticProblem {
  std::optional<ScalarField> mass;  ///< absent means zero
  ScalarField coeff;
  ScalarField rhs;
  BoundaryClosure closure;
};

/// Node-centred finite-volume discretisation (dual cells are half cells on
/// walls), which keeps the system symmetric for mixed conditions. Nodes shared
/// by a Dirichlet and a Neumann face take the Dirichlet value.
ScalarField solve_scalar_elliptic(const ScalarEllipticProblem& problem,
                                  const ScalarField* initial_guess = nullptr,
                                  const SolverOptions& opts = {}, SolveReport* report = nullptr);

/// -div(coeff grad phi) = rhs, Dirichlet data on Gamma_D faces and Neumann
/// data on Gamma_N faces per the grid's temperature tags.
ScalarField solve_mixed_poisson(const ScalarField& rhs, const FaceTrace& dirichlet,
                                const FaceTrace& neumann, const ScalarField& coeff,
                                const SolverOptions& opts = {}, SolveReport* report = nullptr);

/// Discrete div S(grad u) = mu lap u + (mu / 3 + lambda) grad div u using
/// compact pure second differences and centred mixed differences. Rows on
/// walled faces are left zero.
VectorField lame_operator(const VectorField& u, double mu, double lambda);

/// mass * u - div S(grad u) = rhs, u = boundary on every walled face.
struct LameProblem {
  std::optional<ScalarField> mass;
  double mu = 1.0;
  double lambda = 0.0;
  VectorField rhs;
  VectorField boundary;  ///< only values on walled faces are read
};

VectorField solve_lame(const LameProblem& problem, const VectorField* initial_guess = nullptr,
                       const SolverOptions& opts = {}, SolveReport* report = nullptr);

}  // namespace nsf
