#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crossrd/fem.hpp"
#include "crossrd/simulation.hpp"
#include "oracles.hpp"

using namespace crossrd;

namespace {

double total(const SparseMatrix& m) {
    double s = 0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) s += it.value();
    return s;
}

double integral(const SparseMatrix& mass, const Eigen::VectorXd& f) {
    return Eigen::VectorXd::Ones(f.size()).dot(mass * f);
}

FieldState random_state(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 2.0);
    FieldState s;
    s.u.resize(n);
    s.v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.u(i) = U(rng);
        s.v(i) = U(rng);
    }
    return s;
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("reference triangle element matrices") {
    const auto lm = local_matrices({0, 0}, {1, 0}, {0, 1});
    Eigen::Matrix3d mass;
    mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    mass /= 24.0;
    Eigen::Matrix3d stiff;
    stiff << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
    CHECK((lm.mass - mass).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((lm.stiffness - stiff).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(local_matrices({0, 0}, {0, 1}, {1, 0}), TopologyError);
    CHECK_THROWS_AS(local_matrices({0, 0}, {1, 1}, {2, 2}), TopologyError);
}

TEST_CASE("element matrices are invariant under rigid motion") {
    const Eigen::Vector2d p0(0.3, -0.2), p1(1.4, 0.1), p2(0.7, 0.9);
    const auto ref = local_matrices(p0, p1, p2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    const Eigen::Vector2d shift(5.0, -3.0);
    const auto moved = local_matrices(r * p0 + shift, r * p1 + shift, r * p2 + shift);
    CHECK((moved.mass - ref.mass).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((moved.stiffness - ref.stiffness).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("assembled operators") {
    const Mesh mesh = annulus_mesh(1.0, 2.0, 8, 32);
    const Operators ops = assemble(mesh);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(mesh.node_count());
    CHECK((ops.stiffness * one).cwiseAbs().maxCoeff() < 1e-12);
    double area = 0;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) area += mesh.signed_area(t);
    CHECK(total(ops.mass) == doctest::Approx(area).epsilon(1e-13));
    CHECK((SparseMatrix(ops.mass.transpose()) - ops.mass).norm() < 1e-15);
    CHECK((SparseMatrix(ops.stiffness.transpose()) - ops.stiffness).norm() < 1e-13);
    CHECK(ops.mass.nonZeros() == ops.stiffness.nonZeros());

    const SparseMatrix ml = lumped(ops.mass);
    CHECK(ml.nonZeros() == mesh.node_count());
    CHECK(total(ml) == doctest::Approx(area).epsilon(1e-13));

    // The P1 stiffness reproduces the Dirichlet energy of linear functions exactly.
    Eigen::VectorXd x = mesh.nodes.col(0);
    CHECK(x.dot(ops.stiffness * x) == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("discrete L2 norm of time differences") {
    const Mesh mesh = rectangle_mesh(2.0, 1.5, 6, 5);
    const Operators ops = assemble(mesh);
    FieldState a = random_state(mesh.node_count(), 3);
    auto [z0, z1] = l2_dt_norm(ops.mass, a, a, 0.1);
    CHECK(z0 == 0.0);
    CHECK(z1 == 0.0);

    FieldState b = a;
    b.u.array() += 0.5;
    b.v.array() -= 0.25;
    auto [c0, c1] = l2_dt_norm(ops.mass, a, b, 0.5);
    CHECK(c0 == doctest::Approx(1.0 * std::sqrt(3.0)).epsilon(1e-13));
    CHECK(c1 == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-13));

    const FieldState c = random_state(mesh.node_count(), 4);
    auto [r0, r1] = l2_dt_norm(ops.mass, a, c, 0.2);
    const Eigen::MatrixX2d nodes = mesh.nodes;
    const Eigen::MatrixX3i tris = mesh.triangles;
    CHECK(r0 == doctest::Approx(oracle::l2_norm_p1(nodes, tris, (c.u - a.u) / 0.2)).epsilon(1e-12));
    CHECK(r1 == doctest::Approx(oracle::l2_norm_p1(nodes, tris, (c.v - a.v) / 0.2)).epsilon(1e-12));
    CHECK_THROWS_AS(l2_dt_norm(ops.mass, a, c, 0.0), DomainError);
}

TEST_CASE("initial conditions") {
    const Mesh mesh = rectangle_mesh(1.0, 1.0, 4, 4);
    const KineticParams<double> p(0.09, 0.2, 730.0);
    InitialSpec cos_spec;
    cos_spec.kind = InitialKind::Cosine;
    const FieldState s = initial_condition(mesh, p, cos_spec);
    REQUIRE(mesh.nodes(0, 0) == 0.0);
    REQUIRE(mesh.nodes(0, 1) == 0.0);
    CHECK(s.u(0) == doctest::Approx(0.3006).epsilon(1e-12));
    CHECK(s.v(0) - steady_state(p).v == doctest::Approx(0.0106).epsilon(1e-12));

    InitialSpec flat = cos_spec;
    flat.eps1 = flat.eps2 = 0;
    const FieldState f = initial_condition(mesh, p, flat);
    CHECK((f.u.array() == steady_state(p).u).all());
    CHECK((f.v.array() == steady_state(p).v).all());

    InitialSpec r1;
    const FieldState a = initial_condition(mesh, p, r1);
    const FieldState b = initial_condition(mesh, p, r1);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK((a.u.array() >= steady_state(p).u).all());
    CHECK((a.u.array() < steady_state(p).u + r1.eps).all());
    InitialSpec r2 = r1;
    r2.seed = 2;
    CHECK(initial_condition(mesh, p, r2).u != a.u);
}

TEST_CASE("steady state is a fixed point of both schemes") {
    const Mesh mesh = annulus_mesh(1.0, 2.0, 4, 24);
    const Operators ops = assemble(mesh);
    const KineticParams<double> p(0.09, 0.2, 730.0);
    const DiffusionTensor<double> dt(1.0, 0.001, 0.46);
    const auto ss = steady_state(p);
    FieldState s;
    s.u = Eigen::VectorXd::Constant(mesh.node_count(), ss.u);
    s.v = Eigen::VectorXd::Constant(mesh.node_count(), ss.v);
    // One step per configuration: the steady state of this set is unstable,
    // so repeated steps would amplify round-off.
    for (TimeScheme scheme : {TimeScheme::Imex, TimeScheme::LinearlyImplicit})
        for (MassKind mk : {MassKind::Consistent, MassKind::Lumped})
            for (double h : {1e-4, 0.01, 1.0}) {
                Stepper st(ops, dt, p, h, scheme, mk);
                const FieldState w = st.step(s);
                // round-off in the reaction residual is scaled by h * gamma, and by
                // 1/(1 - h lambda) in the linearised scheme
                const double tol = 1e-11 * (1.0 + h * p.gamma());
                CHECK((w.u.array() - ss.u).abs().maxCoeff() < tol);
                CHECK((w.v.array() - ss.v).abs().maxCoeff() < tol);
            }
    const FieldState one = step_imex(s, ops.mass, ops.stiffness, dt, p, 0.05);
    CHECK((one.u.array() - ss.u).abs().maxCoeff() < 1e-10);
}

TEST_CASE("pure diffusion conserves integrals") {
    const Mesh mesh = annulus_mesh(1.0, 2.0, 6, 30);
    const Operators ops = assemble(mesh);
    const auto p = KineticParams<double>::unchecked(0.1, 0.9, 0.0);
    const DiffusionTensor<double> dt(1.0, -0.5, 0.8);
    for (MassKind mk : {MassKind::Consistent, MassKind::Lumped}) {
        Stepper st(ops, dt, p, 0.01, TimeScheme::Imex, mk);
        FieldState s = random_state(mesh.node_count(), 8);
        const double iu = integral(st.mass(), s.u), iv = integral(st.mass(), s.v);
        for (int k = 0; k < 30; ++k) {
            const FieldState n = st.step(s);
            CHECK(std::abs(integral(st.mass(), n.u) - integral(st.mass(), s.u)) < 1e-10 * std::abs(iu));
            CHECK(std::abs(integral(st.mass(), n.v) - integral(st.mass(), s.v)) < 1e-10 * std::abs(iv));
            s = n;
        }
    }
}

TEST_CASE("single-cell square reduces to explicit kinetics") {
    // On a 1x1 mesh with a constant state the stiffness term vanishes, so one
    // IMEX step is exactly forward Euler on the reaction terms.
    const Mesh mesh = rectangle_mesh(1.0, 1.0, 1, 1);
    const Operators ops = assemble(mesh);
    const KineticParams<double> p(0.1, 0.9, 2.0);
    const DiffusionTensor<double> dt(3.0, 0.2, 0.1);
    FieldState s;
    s.u = Eigen::VectorXd::Constant(4, 0.7);
    s.v = Eigen::VectorXd::Constant(4, 1.3);
    const double h = 0.01;
    const FieldState n = step_imex(s, ops.mass, ops.stiffness, dt, p, h);
    const Vector2<double> fg = reaction(p, 0.7, 1.3);
    CHECK((n.u.array() - (0.7 + h * 2.0 * fg(0))).abs().maxCoeff() < 1e-13);
    CHECK((n.v.array() - (1.3 + h * 2.0 * fg(1))).abs().maxCoeff() < 1e-13);
}

TEST_CASE("stepper matches the one-shot IMEX step") {
    const Mesh mesh = annulus_mesh(1.0, 2.0, 3, 16);
    const Operators ops = assemble(mesh);
    const KineticParams<double> p(0.085, 0.1, 250.0);
    const DiffusionTensor<double> dt(1.0, -0.9, 0.55);
    const FieldState s = random_state(mesh.node_count(), 12);
    Stepper st(ops, dt, p, 0.002);
    const FieldState a = st.step(s);
    const FieldState b = step_imex(s, ops.mass, ops.stiffness, dt, p, 0.002);
    CHECK((a.u - b.u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("direct and Krylov solvers agree") {
    const Mesh mesh = annulus_mesh(1.0, 2.0, 6, 24);
    const Operators ops = assemble(mesh);
    const DiffusionTensor<double> dt(2.6, 1.6, 0.5);
    const SparseMatrix block = diffusion_block(ops.mass, ops.stiffness, dt, 0.01);
    Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(block.rows(), -1.0, 1.0);

    BlockSolver direct(SolverOptions{SolverKind::Direct});
    direct.factorize(block);
    const Eigen::VectorXd x = direct.solve(rhs);
    CHECK((block * x - rhs).norm() < 1e-10 * rhs.norm());

    BlockSolver krylov(SolverOptions{SolverKind::Krylov, 1e-12, 500, 0});
    krylov.factorize(block);
    const Eigen::VectorXd y = krylov.solve(rhs);
    CHECK((x - y).norm() < 1e-8 * x.norm());

    CHECK_THROWS_AS(BlockSolver(SolverOptions{SolverKind::Auto, 0.0}), DomainError);
}

TEST_CASE("operator and state size checks") {
    const Mesh mesh = rectangle_mesh(1.0, 1.0, 2, 2);
    const Operators ops = assemble(mesh);
    const KineticParams<double> p(0.1, 0.9, 1.0);
    const DiffusionTensor<double> dt(1.0, 0.0, 0.0);
    FieldState s = random_state(3, 1);
    CHECK_THROWS_AS(step_imex(s, ops.mass, ops.stiffness, dt, p, 0.1), DomainError);
    CHECK_THROWS_AS(Stepper(ops, dt, p, 0.0), DomainError);
}

}
