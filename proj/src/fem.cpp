#include "crossrd/fem.hpp"

#include <cmath>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

namespace crossrd {

LocalMatrices local_matrices(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2) {
    const double twice_area = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (!(twice_area > 0)) throw TopologyError("element with non-positive area");
    const double area = 0.5 * twice_area;

    // Rows are grad(phi_i) * 2A.
    Eigen::Matrix<double, 3, 2> g;
    g << p1.y() - p2.y(), p2.x() - p1.x(),
        p2.y() - p0.y(), p0.x() - p2.x(),
        p0.y() - p1.y(), p1.x() - p0.x();

    LocalMatrices lm;
    lm.stiffness = g * g.transpose() / (4.0 * area);
    lm.mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    lm.mass *= area / 12.0;
    return lm;
}

Operators assemble(const Mesh& mesh) {
    const Eigen::Index n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> mt, kt;
    mt.reserve(9 * mesh.triangle_count());
    kt.reserve(9 * mesh.triangle_count());
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        const auto tri = mesh.triangles.row(t);
        const LocalMatrices lm = local_matrices(mesh.nodes.row(tri(0)).transpose(), mesh.nodes.row(tri(1)).transpose(),
                                                mesh.nodes.row(tri(2)).transpose());
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                mt.emplace_back(tri(i), tri(j), lm.mass(i, j));
                kt.emplace_back(tri(i), tri(j), lm.stiffness(i, j));
            }
        }
    }
    Operators ops;
    ops.mass.resize(n, n);
    ops.stiffness.resize(n, n);
    ops.mass.setFromTriplets(mt.begin(), mt.end());
    ops.stiffness.setFromTriplets(kt.begin(), kt.end());
    return ops;
}

SparseMatrix lumped(const SparseMatrix& mass) {
    const Eigen::VectorXd rows = mass * Eigen::VectorXd::Ones(mass.cols());
    SparseMatrix out(mass.rows(), mass.cols());
    out.reserve(Eigen::VectorXi::Ones(mass.rows()));
    for (Eigen::Index i = 0; i < mass.rows(); ++i) out.insert(i, i) = rows(i);
    out.makeCompressed();
    return out;
}

std::pair<double, double> l2_dt_norm(const SparseMatrix& mass, const FieldState& prev, const FieldState& next,
                                     double dt) {
    if (!(dt > 0)) throw DomainError("l2_dt_norm requires dt > 0");
    if (prev.u.size() != mass.rows() || next.u.size() != mass.rows() || prev.v.size() != mass.rows() ||
        next.v.size() != mass.rows())
        throw DomainError("l2_dt_norm: state length does not match the mass matrix");
    const Eigen::VectorXd du = (next.u - prev.u) / dt;
    const Eigen::VectorXd dv = (next.v - prev.v) / dt;
    return {std::sqrt(std::max(0.0, du.dot(mass * du))), std::sqrt(std::max(0.0, dv.dot(mass * dv)))};
}

// ---------------------------------------------------------------------------

struct BlockSolver::Impl {
    SolverOptions options;
    bool direct = true;

    Eigen::SparseMatrix<double> col_major;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    std::vector<int> outer, inner;  // pattern of the last analysed matrix
    bool analysed = false;

    SparseMatrix row_major;
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> krylov;

    void factorize_direct(const SparseMatrix& a) {
        col_major = a;
        col_major.makeCompressed();
        const std::vector<int> o(col_major.outerIndexPtr(), col_major.outerIndexPtr() + col_major.outerSize() + 1);
        const std::vector<int> in(col_major.innerIndexPtr(), col_major.innerIndexPtr() + col_major.nonZeros());
        if (!analysed || o != outer || in != inner) {
            lu.analyzePattern(col_major);
            outer = o;
            inner = in;
            analysed = true;
        }
        lu.factorize(col_major);
        if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed: " + lu.lastErrorMessage(), 0, NAN);
        direct = true;
    }
};

BlockSolver::BlockSolver(SolverOptions options) : impl_(std::make_unique<Impl>()) {
    if (!(options.tolerance > 0)) throw DomainError("solver tolerance must be positive");
    if (options.max_iterations < 1) throw DomainError("solver max_iterations must be positive");
    impl_->options = options;
}

BlockSolver::~BlockSolver() = default;
BlockSolver::BlockSolver(BlockSolver&&) noexcept = default;
BlockSolver& BlockSolver::operator=(BlockSolver&&) noexcept = default;

void BlockSolver::factorize(const SparseMatrix& a) {
    Impl& s = *impl_;
    const bool small = a.rows() <= s.options.direct_max_dim;
    const bool use_direct = s.options.kind == SolverKind::Direct || (s.options.kind == SolverKind::Auto && small);
    if (use_direct) {
        s.factorize_direct(a);
        return;
    }
    s.row_major = a;
    s.krylov.setTolerance(s.options.tolerance);
    s.krylov.setMaxIterations(s.options.max_iterations);
    s.krylov.compute(s.row_major);
    if (s.krylov.info() != Eigen::Success) {
        if (small) {
            s.factorize_direct(a);
            return;
        }
        throw SolverError("incomplete LU preconditioner failed", 0, NAN);
    }
    s.direct = false;
}

Eigen::VectorXd BlockSolver::solve(const Eigen::VectorXd& rhs) {
    Impl& s = *impl_;
    if (s.direct) {
        Eigen::VectorXd x = s.lu.solve(rhs);
        if (s.lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed", 0, NAN);
        return x;
    }
    Eigen::VectorXd x = s.krylov.solve(rhs);
    if (s.krylov.info() != Eigen::Success || !x.allFinite()) {
        if (s.row_major.rows() <= s.options.direct_max_dim) {
            s.factorize_direct(s.row_major);
            return solve(rhs);
        }
        throw SolverError("BiCGSTAB did not converge", s.krylov.iterations(), s.krylov.error());
    }
    return x;
}

// ---------------------------------------------------------------------------

namespace {

void append_scaled(std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& a, Eigen::Index row_off,
                   Eigen::Index col_off, double scale) {
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it)
            out.emplace_back(row_off + it.row(), col_off + it.col(), scale * it.value());
}

// M * diag(c), appended at a block offset.
void append_column_scaled(std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& a, Eigen::Index row_off,
                          Eigen::Index col_off, double scale, const Eigen::VectorXd& c) {
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it)
            out.emplace_back(row_off + it.row(), col_off + it.col(), scale * it.value() * c(it.col()));
}

std::vector<Eigen::Triplet<double>> diffusion_triplets(const SparseMatrix& mass, const SparseMatrix& stiffness,
                                                       const DiffusionTensor<double>& dt, double step) {
    const Eigen::Index n = mass.rows();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * mass.nonZeros() + 4 * stiffness.nonZeros());
    append_scaled(t, mass, 0, 0, 1.0);
    append_scaled(t, mass, n, n, 1.0);
    append_scaled(t, stiffness, 0, 0, step);
    append_scaled(t, stiffness, 0, n, step * dt.d_v());
    append_scaled(t, stiffness, n, 0, step * dt.d_u());
    append_scaled(t, stiffness, n, n, step * dt.d());
    return t;
}

void check_operators(const SparseMatrix& mass, const SparseMatrix& stiffness) {
    if (mass.rows() != mass.cols() || stiffness.rows() != mass.rows() || stiffness.cols() != mass.cols())
        throw DomainError("mass and stiffness must be square and of equal size");
}

void check_state(const FieldState& s, Eigen::Index n) {
    if (s.u.size() != n || s.v.size() != n) throw DomainError("state length does not match the operators");
}

// Nodal kinetics F(w) = (f, g) without gamma.
void nodal_reaction(const KineticParams<double>& p, const FieldState& s, Eigen::VectorXd& f, Eigen::VectorXd& g) {
    const Eigen::ArrayXd u2v = s.u.array().square() * s.v.array();
    f = (p.alpha() - s.u.array() + u2v).matrix();
    g = (p.beta() - u2v).matrix();
}

}  // namespace

SparseMatrix diffusion_block(const SparseMatrix& mass, const SparseMatrix& stiffness,
                             const DiffusionTensor<double>& dt, double step) {
    check_operators(mass, stiffness);
    if (!(step > 0)) throw DomainError("time step must be positive");
    const auto t = diffusion_triplets(mass, stiffness, dt, step);
    SparseMatrix a(2 * mass.rows(), 2 * mass.rows());
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

FieldState step_imex(const FieldState& s, const SparseMatrix& mass, const SparseMatrix& stiffness,
                     const DiffusionTensor<double>& dt, const KineticParams<double>& p, double step,
                     const SolverOptions& options) {
    BlockSolver solver(options);
    solver.factorize(diffusion_block(mass, stiffness, dt, step));
    check_state(s, mass.rows());

    const Eigen::Index n = mass.rows();
    Eigen::VectorXd f, g;
    nodal_reaction(p, s, f, g);
    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = mass * (s.u + step * p.gamma() * f);
    rhs.tail(n) = mass * (s.v + step * p.gamma() * g);
    const Eigen::VectorXd w = solver.solve(rhs);
    return {w.head(n), w.tail(n), s.time + step};
}

Stepper::Stepper(const Operators& ops, const DiffusionTensor<double>& dt, const KineticParams<double>& p, double step,
                 TimeScheme scheme, MassKind mass, SolverOptions options)
    : mass_(mass == MassKind::Lumped ? lumped(ops.mass) : ops.mass),
      stiffness_(ops.stiffness),
      dt_(dt),
      p_(p),
      step_(step),
      scheme_(scheme),
      solver_(options) {
    check_operators(mass_, stiffness_);
    if (!(step > 0)) throw DomainError("time step must be positive");
    block_ = diffusion_block(mass_, stiffness_, dt_, step_);
    if (scheme_ == TimeScheme::Imex) solver_.factorize(block_);
}

FieldState Stepper::step(const FieldState& s) {
    const Eigen::Index n = mass_.rows();
    check_state(s, n);
    const double c = step_ * p_.gamma();
    Eigen::VectorXd f, g;
    nodal_reaction(p_, s, f, g);

    Eigen::VectorXd rhs(2 * n);
    if (scheme_ == TimeScheme::Imex) {
        rhs.head(n) = mass_ * (s.u + c * f);
        rhs.tail(n) = mass_ * (s.v + c * g);
    } else {
        // Nodal Jacobian entries.
        const Eigen::ArrayXd uv = s.u.array() * s.v.array();
        const Eigen::VectorXd fu = (2.0 * uv - 1.0).matrix();
        const Eigen::VectorXd fv = s.u.array().square().matrix();
        const Eigen::VectorXd gu = (-2.0 * uv).matrix();
        const Eigen::VectorXd gv = -fv;

        auto t = diffusion_triplets(mass_, stiffness_, dt_, step_);
        append_column_scaled(t, mass_, 0, 0, -c, fu);
        append_column_scaled(t, mass_, 0, n, -c, fv);
        append_column_scaled(t, mass_, n, 0, -c, gu);
        append_column_scaled(t, mass_, n, n, -c, gv);
        SparseMatrix a(2 * n, 2 * n);
        a.setFromTriplets(t.begin(), t.end());
        solver_.factorize(a);

        const Eigen::VectorXd ru = f - fu.cwiseProduct(s.u) - fv.cwiseProduct(s.v);
        const Eigen::VectorXd rv = g - gu.cwiseProduct(s.u) - gv.cwiseProduct(s.v);
        rhs.head(n) = mass_ * (s.u + c * ru);
        rhs.tail(n) = mass_ * (s.v + c * rv);
    }
    const Eigen::VectorXd w = solver_.solve(rhs);
    return {w.head(n), w.tail(n), s.time + step_};
}

}  // namespace crossrd
