#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "crossrd/paramspace.hpp"
#include "crossrd/spectral.hpp"
#include "oracles.hpp"

using namespace crossrd;

namespace {

GridSpec grid(int na, int nb, double hi = 3.0) { return GridSpec{{0.01, hi, na}, {0.01, hi, nb}}; }

// Corner values of the grid cell containing (x, y).
double cell_corner_max(const GridSpec& gs, const std::vector<double>& field, double x, double y) {
    const double ha = (gs.alpha.hi - gs.alpha.lo) / (gs.alpha.count - 1);
    const double hb = (gs.beta.hi - gs.beta.lo) / (gs.beta.count - 1);
    const int ia = std::clamp(int((x - gs.alpha.lo) / ha), 0, gs.alpha.count - 2);
    const int ib = std::clamp(int((y - gs.beta.lo) / hb), 0, gs.beta.count - 2);
    double m = 0;
    for (int da = 0; da < 2; ++da)
        for (int db = 0; db < 2; ++db) m = std::max(m, std::abs(field[gs.index(ia + da, ib + db)]));
    return m;
}

}  // namespace

TEST_SUITE("paramspace") {

TEST_CASE("grid validation and indexing") {
    CHECK_THROWS_AS(GridSpec({0.0, 1.0, 3}, {0.1, 1.0, 3}).validate(), DomainError);
    CHECK_THROWS_AS(GridSpec({0.5, 0.1, 3}, {0.1, 1.0, 3}).validate(), DomainError);
    CHECK_THROWS_AS(GridSpec({0.1, 1.0, 1}, {0.1, 1.0, 3}).validate(), DomainError);
    const GridSpec gs = grid(4, 3);
    CHECK(gs.size() == 12);
    CHECK(gs.index(1, 2) == 9);
    CHECK(gs.alpha.value(0) == 0.01);
    CHECK(gs.alpha.value(3) == 3.0);
}

TEST_CASE("pure diffusion sweep is uniformly real stable") {
    const auto cg = sweep(grid(20, 30), DiffusionTensor<double>(2.0, 0.0, 0.0), 0.0, 1.0);
    REQUIRE(cg.points.size() == 600);
    for (const auto& p : cg.points) {
        CHECK(p.label == RegionLabel::RealStable);
        CHECK(p.lambda1 == std::complex<double>(-2.0, 0.0));
        CHECK(p.lambda2 == std::complex<double>(-1.0, 0.0));
    }
    CHECK(partition_curve(cg).empty());
    CHECK_THROWS_AS(sweep(grid(3, 3), DiffusionTensor<double>(1.0, 0.0, 0.0), -1.0, 1.0), DomainError);
}

TEST_CASE("unit-mode sweep labels") {
    // With gamma = 1 the reaction part cannot beat the unit diffusion shift,
    // so only the two stable labels occur; gamma = 5 shows all four.
    auto labels = [](double gamma) {
        const auto cg = sweep(grid(120, 120), DiffusionTensor<double>(1.0, 0.0, 0.0), gamma, 1.0);
        CHECK(cg.modes == std::vector<double>{1.0});
        std::set<RegionLabel> seen;
        for (const auto& p : cg.points) seen.insert(p.label);
        return seen;
    };
    CHECK(labels(1.0) == std::set<RegionLabel>{RegionLabel::RealStable, RegionLabel::ComplexStable});
    CHECK(labels(5.0).size() == 4);
}

TEST_CASE("eigenvalue data agrees with labels and the oracle") {
    const DiffusionTensor<double> dt(1.0, 0.001, 0.46);
    const auto cg = sweep(grid(25, 25), dt, 30.0, 5.0);
    for (int ib = 0; ib < 25; ++ib) {
        for (int ia = 0; ia < 25; ++ia) {
            const auto& p = cg.at(ia, ib);
            const auto o = oracle::stability(cg.grid.alpha.value(ia), cg.grid.beta.value(ib), 30.0, 1.0, 0.001, 0.46, 5.0);
            CHECK(p.trace == doctest::Approx(o.trace()).epsilon(1e-12));
            CHECK(p.det == doctest::Approx(oracle::det2(o)).epsilon(1e-10));
            CHECK(is_real(p.label) == (p.lambda1.imag() == 0.0));
            CHECK(is_stable(p.label) == (std::max(p.lambda1.real(), p.lambda2.real()) < 0));
        }
    }
}

TEST_CASE("real/complex transitions along rows match discriminant sign changes") {
    const auto cg = sweep(grid(60, 40), DiffusionTensor<double>(1.0, 0.0, 0.0), 1.0, 1.0);
    for (int ib = 0; ib < 40; ++ib) {
        for (int ia = 0; ia + 1 < 60; ++ia) {
            const auto& p = cg.at(ia, ib);
            const auto& q = cg.at(ia + 1, ib);
            const bool label_change = is_real(p.label) != is_real(q.label);
            const bool sign_change = (p.discriminant() >= 0) != (q.discriminant() >= 0);
            CHECK(label_change == sign_change);
        }
    }
}

TEST_CASE("aggregated sweep precedence") {
    const DiffusionTensor<double> fig7(1.0, 0.001, 0.46);
    std::vector<double> modes;
    for (int m = 0; m <= 3; ++m) modes.push_back(eigenvalue_annulus(1.0, 14.8, Mode{m, 0.1}));
    const GridSpec one{{0.09, 0.1, 2}, {0.2, 0.3, 2}};
    const auto cg = sweep_aggregated(one, fig7, 730.0, modes);
    REQUIRE(cg.aggregated);
    CHECK(cg.aggregate[one.index(0, 0)] == AggregateClass::Hopf);
    CHECK_FALSE(is_stable(cg.at(0, 0).label));

    bool some_unstable = false;
    for (double k2 : modes)
        if (!is_stable(classify_point(0.09, 0.2, fig7, 730.0, k2).label)) some_unstable = true;
    CHECK(some_unstable);

    // k^2 = 0 alone reduces to the reaction-only classification.
    const auto ode = sweep_aggregated(grid(15, 15), fig7, 730.0, {0.0});
    const auto ref = sweep(grid(15, 15), fig7, 730.0, 0.0);
    for (std::size_t i = 0; i < ode.points.size(); ++i) {
        CHECK(ode.points[i].label == ref.points[i].label);
        CHECK(ode.aggregate[i] != AggregateClass::Turing);
    }
    CHECK_THROWS_AS(sweep_aggregated(grid(3, 3), fig7, 1.0, {}), DomainError);
    CHECK_THROWS_AS(sweep_aggregated(grid(3, 3), fig7, 1.0, {-1.0}), DomainError);
}

TEST_CASE("aggregated Turing picks the strongest mode") {
    // Strong self-diffusion contrast opens a Turing band.
    const DiffusionTensor<double> dt(40.0, 0.0, 0.0);
    const std::vector<double> modes{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    const GridSpec gs{{0.1, 0.2, 2}, {0.9, 1.0, 2}};
    const auto cg = sweep_aggregated(gs, dt, 30.0, modes);
    bool found = false;
    for (std::size_t i = 0; i < cg.points.size(); ++i) {
        if (cg.aggregate[i] != AggregateClass::Turing) continue;
        found = true;
        const int ia = int(i % 2), ib = int(i / 2);
        double best = -1e300;
        for (double k2 : modes) {
            const auto r = classify_point(gs.alpha.value(ia), gs.beta.value(ib), dt, 30.0, k2);
            if (r.label == RegionLabel::RealUnstable) best = std::max(best, r.lambda2.real());
        }
        CHECK(cg.points[i].lambda2.real() == best);
        CHECK(cg.points[i].label == RegionLabel::RealUnstable);
    }
    CHECK(found);
}

TEST_CASE("equal diffusion gives an empty aggregated Turing set") {
    std::vector<double> modes;
    for (int i = 1; i <= 20; ++i) modes.push_back(5.0 * i);
    const auto cg = sweep_aggregated(grid(40, 40), DiffusionTensor<double>(1.0, 0.0, 0.0), 1.0, modes);
    CHECK(std::count(cg.aggregate.begin(), cg.aggregate.end(), AggregateClass::Turing) == 0);
}

TEST_CASE("planted level set is recovered") {
    const GridSpec gs = grid(37, 23);
    std::vector<double> field(gs.size());
    for (int ib = 0; ib < gs.beta.count; ++ib)
        for (int ia = 0; ia < gs.alpha.count; ++ia) field[gs.index(ia, ib)] = gs.alpha.value(ia) - 1.0;
    const auto curves = zero_level_set(gs, field);
    REQUIRE(curves.size() == 1);
    const double cell = (gs.alpha.hi - gs.alpha.lo) / (gs.alpha.count - 1);
    double ymin = 1e9, ymax = -1e9;
    for (const auto& v : curves[0]) {
        CHECK(std::abs(v.x() - 1.0) < cell);
        ymin = std::min(ymin, v.y());
        ymax = std::max(ymax, v.y());
    }
    CHECK(ymin == doctest::Approx(gs.beta.lo));
    CHECK(ymax == doctest::Approx(gs.beta.hi));
    CHECK_THROWS_AS(zero_level_set(gs, std::vector<double>(3)), DomainError);
}

TEST_CASE("closed contour of a planted circle") {
    const GridSpec gs = grid(41, 41);
    std::vector<double> field(gs.size());
    for (int ib = 0; ib < gs.beta.count; ++ib)
        for (int ia = 0; ia < gs.alpha.count; ++ia) {
            const double x = gs.alpha.value(ia) - 1.5, y = gs.beta.value(ib) - 1.5;
            field[gs.index(ia, ib)] = x * x + y * y - 1.0;
        }
    const auto curves = zero_level_set(gs, field);
    REQUIRE(curves.size() == 1);
    CHECK((curves[0].front() - curves[0].back()).norm() < 1e-12);
    for (const auto& v : curves[0]) CHECK(std::abs((v - Eigen::Vector2d(1.5, 1.5)).norm() - 1.0) < 0.01);
}

TEST_CASE("discriminant curve vertices have small residuals") {
    const DiffusionTensor<double> dt(1.0, 0.0, 0.0);
    const auto cg = sweep(grid(80, 80), dt, 1.0, 1.0);
    std::vector<double> field(cg.points.size());
    for (std::size_t i = 0; i < field.size(); ++i) field[i] = cg.points[i].discriminant();
    const auto curves = partition_curve(cg);
    REQUIRE_FALSE(curves.empty());
    for (const auto& c : curves)
        for (const auto& v : c) {
            const double res = std::abs(classify_point(v.x(), v.y(), dt, 1.0, 1.0).discriminant());
            CHECK(res <= cell_corner_max(cg.grid, field, v.x(), v.y()));
        }
    CHECK(partition_curve(cg, LevelField::Trace).empty());  // trace < 0 everywhere at gamma = 1
    CHECK_FALSE(partition_curve(sweep(grid(80, 80), dt, 5.0, 1.0), LevelField::Trace).empty());
}

TEST_CASE("sweep is independent of evaluation order") {
    const DiffusionTensor<double> dt(1.0, -0.9, 0.55);
    const auto cg = sweep(grid(30, 30), dt, 250.0, 3.0);
    std::vector<std::size_t> order(cg.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), std::mt19937_64(29));
    for (std::size_t i : order) {
        const int ia = int(i % 30), ib = int(i / 30);
        const auto p = classify_point(cg.grid.alpha.value(ia), cg.grid.beta.value(ib), dt, 250.0, 3.0);
        CHECK(p.label == cg.points[i].label);
        CHECK(p.lambda2 == cg.points[i].lambda2);
    }
    CHECK(region_csv_text(cg) == region_csv_text(sweep(grid(30, 30), dt, 250.0, 3.0)));
}

TEST_CASE("region CSV layout and round trip") {
    const DiffusionTensor<double> dt(1.0, 0.001, 0.46);
    const auto small = sweep(grid(2, 2), dt, 730.0, 0.0);
    const std::string text = region_csv_text(small);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(text.rfind("alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);

    const auto cg = sweep(GridSpec{{0.05, 2.7, 17}, {0.2, 1.9, 11}}, dt, 100.0, 4.0);
    const auto back = parse_region_csv(region_csv_text(cg));
    CHECK(back.grid.alpha.lo == cg.grid.alpha.lo);
    CHECK(back.grid.alpha.hi == cg.grid.alpha.hi);
    CHECK(back.grid.alpha.count == 17);
    CHECK(back.grid.beta.count == 11);
    REQUIRE(back.points.size() == cg.points.size());
    for (std::size_t i = 0; i < cg.points.size(); ++i) {
        CHECK(back.points[i].label == cg.points[i].label);
        CHECK(back.points[i].lambda1 == cg.points[i].lambda1);
        CHECK(back.points[i].lambda2 == cg.points[i].lambda2);
        CHECK(back.points[i].k2 == 4.0);
    }
    CHECK(region_csv_text(back) == region_csv_text(cg));

    CHECK_THROWS_AS(parse_region_csv("a,b\n"), ParseError);
    CHECK_THROWS_AS(parse_region_csv("alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2\n1,1,purple,0,0,0,0,0\n"),
                    ParseError);
    try {
        parse_region_csv("alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2\n1,1,hopf,0,0,0,0\n", "x.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("curves CSV") {
    std::vector<Polyline> curves{{Eigen::Vector2d(0.5, 1.0), Eigen::Vector2d(1.0, 2.0)}, {Eigen::Vector2d(3, 4)}};
    CHECK(curves_csv_text(curves) == "curve,alpha,beta\n0,0.5,1\n0,1,2\n1,3,4\n");
}

}
