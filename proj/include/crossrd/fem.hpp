#pragma once

// P1 finite elements for the cross-diffusive system
//
//   u_t = lap(u) + d_v lap(v) + gamma f(u, v)
//   v_t = d_u lap(u) + d lap(v) + gamma g(u, v)
//
// with homogeneous Neumann conditions. Unknowns are stacked as w = [u; v].

#include <memory>
#include <utility>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "crossrd/kinetics.hpp"
#include "crossrd/mesh.hpp"
#include "crossrd/stability.hpp"

namespace crossrd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Element matrices of one triangle: mass (integral of phi_i phi_j) and
/// stiffness (integral of grad phi_i . grad phi_j).
struct LocalMatrices {
    Eigen::Matrix3d mass;
    Eigen::Matrix3d stiffness;
};

/// Throws TopologyError for a triangle with non-positive area.
LocalMatrices local_matrices(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2);

struct Operators {
    SparseMatrix mass;       // consistent
    SparseMatrix stiffness;
};

/// Global consistent mass and stiffness. Both share one sparsity pattern.
Operators assemble(const Mesh& mesh);

/// Diagonal matrix of the row sums of `mass`.
SparseMatrix lumped(const SparseMatrix& mass);

struct FieldState {
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    double time = 0;
};

/// (sqrt(du' M du), sqrt(dv' M dv)) with d = (next - prev) / dt per species.
std::pair<double, double> l2_dt_norm(const SparseMatrix& mass, const FieldState& prev, const FieldState& next,
                                     double dt);

enum class SolverKind { Auto, Direct, Krylov };

struct SolverOptions {
    SolverKind kind = SolverKind::Auto;
    double tolerance = 1e-10;      // relative residual for the Krylov path
    int max_iterations = 2000;
    Eigen::Index direct_max_dim = 60000;  // Auto: direct at or below; Krylov failure falls back to direct here too
};

/// Solves the nonsymmetric 2N x 2N block systems. Keeps the symbolic
/// factorisation between calls when the pattern does not change.
class BlockSolver {
public:
    explicit BlockSolver(SolverOptions options = {});
    ~BlockSolver();
    BlockSolver(BlockSolver&&) noexcept;
    BlockSolver& operator=(BlockSolver&&) noexcept;

    void factorize(const SparseMatrix& a);
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// [[M + dt K, dt d_v K], [dt d_u K, M + dt d K]].
SparseMatrix diffusion_block(const SparseMatrix& mass, const SparseMatrix& stiffness,
                             const DiffusionTensor<double>& dt, double step);

/// One step of the IMEX scheme: implicit Euler on the full diffusion block,
/// explicit kinetics,
///   diffusion_block * w_next = M w + step * gamma * M F(w).
FieldState step_imex(const FieldState& s, const SparseMatrix& mass, const SparseMatrix& stiffness,
                     const DiffusionTensor<double>& dt, const KineticParams<double>& p, double step,
                     const SolverOptions& options = {});

enum class TimeScheme {
    Imex,              // explicit kinetics, as step_imex
    LinearlyImplicit,  // kinetics linearised about w^n and taken implicitly
};

enum class MassKind { Consistent, Lumped };

/// Repeated stepping with operators and factorisations cached.
///
/// LinearlyImplicit solves
///   (B - step gamma M J(w)) w_next = M w + step gamma M (F(w) - J(w) w)
/// where B is the diffusion block and J(w) the nodal reaction Jacobian acting
/// columnwise; it is one Newton step of implicit Euler. Both schemes share the
/// fixed points and the conservation identity of step_imex.
class Stepper {
public:
    Stepper(const Operators& ops, const DiffusionTensor<double>& dt, const KineticParams<double>& p, double step,
            TimeScheme scheme = TimeScheme::Imex, MassKind mass = MassKind::Consistent, SolverOptions options = {});

    FieldState step(const FieldState& s);

    const SparseMatrix& mass() const { return mass_; }
    double step_size() const { return step_; }

private:
    SparseMatrix mass_;
    SparseMatrix stiffness_;
    SparseMatrix block_;
    DiffusionTensor<double> dt_;
    KineticParams<double> p_;
    double step_;
    TimeScheme scheme_;
    BlockSolver solver_;
};

}  // namespace crossrd
