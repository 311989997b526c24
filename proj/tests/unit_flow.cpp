#include <doctest.h>

#include <random>

#include "heis/flow.hpp"
#include "heis/norms.hpp"
#include "heis/poly.hpp"

using namespace heis;

namespace {

std::vector<HPoint> seed_points(int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.8, 0.8);
    std::vector<HPoint> pts;
    for (int i = 0; i < count; ++i) pts.emplace_back(dist(rng), dist(rng), dist(rng));
    return pts;
}

}  // namespace

TEST_SUITE("flows and transport") {
    TEST_CASE("constant generator translates vertically, exactly") {
        const double kappa = 0.7;
        const HVectorField b = contact_from_psi(ScalarField::constant(kappa), 1);
        const auto pts = seed_points(10, 3);
        const FlowMap flow = integrate_flow(b, pts, 1.0, 0.05);
        for (size_t i = 0; i < pts.size(); ++i) {
            const HPoint& end = flow.states.back()[i];
            CHECK(end[0] == doctest::Approx(pts[i][0]).epsilon(1e-12));
            CHECK(end[1] == doctest::Approx(pts[i][1]).epsilon(1e-12));
            CHECK(end[2] == doctest::Approx(pts[i][2] - 4.0 * kappa).epsilon(1e-10));
        }
    }

    TEST_CASE("linear generator psi = x integrates exactly") {
        const HVectorField b = contact_from_psi(ScalarField::coordinate(0), 1);
        const auto pts = seed_points(10, 5);
        const double tau = 1.0;
        const FlowMap flow = integrate_flow(b, pts, tau, 0.02);
        for (size_t i = 0; i < pts.size(); ++i) {
            const HPoint& end = flow.states.back()[i];
            CHECK(end[0] == doctest::Approx(pts[i][0]).epsilon(1e-11));
            CHECK(end[1] == doctest::Approx(pts[i][1] - tau).epsilon(1e-11));
            CHECK(end[2] == doctest::Approx(pts[i][2] - 2.0 * pts[i][0] * tau).epsilon(1e-10));
            // hand-checked Jacobian: only dt/dx0 = -2 tau off the diagonal
            const auto& J = flow.jac.back()[i];
            CHECK(J[0] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(J[4] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(J[8] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(J[6] == doctest::Approx(-2.0 * tau).epsilon(1e-10));
        }
        CHECK(horizontality_defect(flow) <= 1e-10);
        // volume preservation: psi = x has div b = 0
        const auto [cm, ct] = pushforward_bound(flow, b, Box::cube(1, -1.5, 1.5), 8);
        CHECK(cm == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ct == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("zero field fixes everything") {
        const HVectorField b(1, {ScalarField::constant(0.0), ScalarField::constant(0.0), ScalarField::constant(0.0)});
        const auto pts = seed_points(5, 7);
        const FlowMap flow = integrate_flow(b, pts, 0.5, 0.1);
        for (size_t i = 0; i < pts.size(); ++i) {
            CHECK(flow.states.back()[i][0] == pts[i][0]);
            CHECK(flow.states.back()[i][2] == pts[i][2]);
            CHECK(jacobian_determinant(flow, flow.times.size() - 1, i) == doctest::Approx(1.0));
        }
        CHECK(horizontality_defect(flow) == 0.0);
        const auto [cm, ct] = pushforward_bound(flow, b, Box::cube(1, -1.0, 1.0), 4);
        CHECK(cm == doctest::Approx(1.0));
        CHECK(ct == doctest::Approx(1.0));
    }

    TEST_CASE("smooth bump generator: horizontality, determinant and the density bound") {
        double r[3] = {1.5, 1.5, 1.5};
        const ScalarField psi = bump_field(HPoint(0.2, 0.0, -0.1), r);
        const HVectorField b = contact_from_psi(psi, 1);
        const auto pts = seed_points(12, 11);
        const FlowMap flow = integrate_flow(b, pts, 1.0, 1e-3, 50);
        CHECK(horizontality_defect(flow) <= 1e-6);
        for (size_t k = 0; k < flow.times.size(); ++k)
            for (size_t i = 0; i < pts.size(); ++i) {
                const double det = jacobian_determinant(flow, k, i);
                CHECK(det > 0.0);
                CHECK(det == doctest::Approx(std::exp(flow.logdet[k][i])).epsilon(1e-7));
            }
        const auto [cm, ct] = pushforward_bound(flow, b, Box::cube(1, -1.8, 1.8), 12);
        CHECK(cm <= ct * 1.05);
    }

    TEST_CASE("semigroup property for an autonomous field") {
        double r[3] = {1.5, 1.5, 1.5};
        const HVectorField b = contact_from_psi(bump_field(HPoint(0.1, 0.1, 0.0), r), 1);
        const auto pts = seed_points(6, 13);
        const FlowMap whole = integrate_flow(b, pts, 0.8, 1e-3, 800);
        const FlowMap first = integrate_flow(b, pts, 0.5, 1e-3, 500);
        std::vector<HPoint> mid = first.states.back();
        const FlowMap second = integrate_flow(b, mid, 0.3, 1e-3, 300);
        for (size_t i = 0; i < pts.size(); ++i)
            for (int k = 0; k < 3; ++k)
                CHECK(whole.states.back()[i][k] == doctest::Approx(second.states.back()[i][k]).epsilon(1e-9));
    }

    TEST_CASE("the non-contact control tilts the frame") {
        // b = X + x T: the pushed X-frame picks up a T-component equal to tau
        // pushing X picks up a T-component tau, pushing Y picks up 4 tau
        const HVectorField b(1, {ScalarField::constant(1.0), ScalarField::constant(0.0), ScalarField::coordinate(0)});
        const auto pts = seed_points(8, 17);
        const FlowMap flow = integrate_flow(b, pts, 1.0, 1e-3, 1000);
        CHECK(horizontality_defect(flow) == doctest::Approx(4.0).epsilon(1e-8));
        CHECK(horizontality_defect(flow) > 0.1);
    }

    TEST_CASE("transport along psi = x reproduces the hand solution") {
        const HVectorField b = contact_from_psi(ScalarField::coordinate(0), 1);
        const ScalarField u0 = ScalarField::coordinate(1);  // y
        const std::vector<double> taus = {0.0, 0.25, 0.5, 1.0};
        const Box out = Box::cube(1, -1.0, 1.0);
        const TimeField u = solve_transport(b, ReactionFn(), u0, TransportForm::plus, ReactionMode::exponential,
                                            taus, out, 10, 0.05);
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> dist(-0.9, 0.9);
        for (int it = 0; it < 80; ++it) {
            const HPoint p(dist(rng), dist(rng), dist(rng));
            for (double tau : {0.25, 0.5, 1.0})
                CHECK(u(tau, p) == doctest::Approx(p.y(0) + tau).epsilon(1e-10));
        }
    }

    TEST_CASE("pure reaction reduces to an ordinary equation in time") {
        const HVectorField b(1, {ScalarField::constant(0.0), ScalarField::constant(0.0), ScalarField::constant(0.0)});
        double r[3] = {1.5, 1.5, 1.5};
        const ScalarField u0 = bump_field(HPoint::zero(1), r);
        const std::vector<double> taus = {0.0, 0.5, 1.0};
        const Box out = Box::cube(1, -1.0, 1.0);
        const ReactionFn c = [](double tau, const HPoint&) { return tau; };  // int = tau^2/2, trapezoid-exact
        const TimeField ue = solve_transport(b, c, u0, TransportForm::minus, ReactionMode::exponential, taus, out,
                                             8, 0.025);
        const TimeField ua = solve_transport(b, c, u0, TransportForm::minus, ReactionMode::additive, taus, out,
                                             8, 0.025);
        // compare at stored lattice vertices, where no interpolation happens
        const double h = 2.0 / 8;
        const HPoint p(-1.0 + 3 * h, -1.0 + 5 * h, -1.0 + 2 * h);
        for (size_t ti = 1; ti < taus.size(); ++ti) {
            const double tau = taus[ti];
            CHECK(ue.snaps[ti](p) == doctest::Approx(u0(p) * std::exp(-tau * tau / 2.0)).epsilon(1e-10));
            CHECK(ua.snaps[ti](p) == doctest::Approx(u0(p) - tau * tau / 2.0).epsilon(1e-10));
        }
    }

    TEST_CASE("constant state stays constant and the maximum principle holds") {
        double r[3] = {1.5, 1.5, 1.5};
        const HVectorField b = contact_from_psi(bump_field(HPoint(0.2, -0.1, 0.0), r), 1);
        const std::vector<double> taus = {0.0, 0.5};
        const Box out = Box::cube(1, -0.8, 0.8);
        const TimeField uc = solve_transport(b, ReactionFn(), ScalarField::constant(1.0), TransportForm::plus,
                                             ReactionMode::exponential, taus, out, 8, 0.01);
        Lattice lat(out, 6);
        for (size_t i = 0; i < lat.size(); ++i) CHECK(uc(0.5, lat.node(i)) == doctest::Approx(1.0).epsilon(1e-12));
        double rb[3] = {0.8, 0.8, 0.8};
        const ScalarField u0 = bump_field(HPoint::zero(1), rb);
        const TimeField ub = solve_transport(b, ReactionFn(), u0, TransportForm::plus, ReactionMode::exponential,
                                             taus, out, 10, 0.01);
        for (size_t i = 0; i < lat.size(); ++i) {
            const double v = ub(0.5, lat.node(i));
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    }

    TEST_CASE("continuity equation: volume-preserving field conserves mass exactly") {
        const HVectorField b = contact_from_psi(ScalarField::coordinate(0), 1);
        double r[3] = {0.7, 0.7, 0.7};
        const ScalarField u0 = bump_field(HPoint(0.0, 0.3, 0.0), r);
        const std::vector<double> taus = {0.0, 0.5};
        const Box out = Box::cube(1, -1.6, 1.6);
        const TimeField u = solve_continuity(b, u0, taus, out, 32, 0.05);
        const NormSpec spec(1.0, Box::cube(1, -1.5, 1.5));
        const double m0 = lp_norm(u.snaps[0], spec);
        const double m1 = lp_norm(u.snaps[1], spec);
        CHECK(std::fabs(m1 - m0) <= 1e-6 * std::max(1.0, m0));
        // composition with the backward flow (at stored vertices) and positivity
        const double h = 3.2 / 32;
        for (int i = 4; i < 28; i += 3)
            for (int j = 5; j < 28; j += 4) {
                const HPoint q(-1.6 + i * h, -1.6 + j * h, -1.6 + (i + j) % 30 * h);
                const HPoint back(q[0], q[1] + 0.5, q[2] + 2.0 * q[0] * 0.5);
                CHECK(u.snaps[1](q) == doctest::Approx(u0(back)).epsilon(1e-9));
                CHECK(u.snaps[1](q) >= -1e-13);
            }
    }

    TEST_CASE("continuity equation: vertical translation") {
        const double kappa = 0.4;
        const HVectorField b = contact_from_psi(ScalarField::constant(kappa), 1);
        double r[3] = {0.8, 0.8, 0.8};
        const ScalarField u0 = bump_field(HPoint::zero(1), r);
        const std::vector<double> taus = {0.0, 0.5};
        const TimeField u = solve_continuity(b, u0, taus, Box::cube(1, -1.2, 1.2), 12, 0.05);
        const double h = 2.4 / 12;
        const HPoint q(-1.2 + 7 * h, -1.2 + 4 * h, -1.2 + 6 * h);  // a stored vertex
        const HPoint shifted(q[0], q[1], q[2] + 4.0 * kappa * 0.5);
        CHECK(u.snaps[1](q) == doctest::Approx(u0(shifted)).epsilon(1e-10));
    }

    TEST_CASE("weak-form residuals refine at second order and expose wrong solutions") {
        const HVectorField b = contact_from_psi(ScalarField::coordinate(0), 1);
        // u0 = y plus a mild bump, so the spatial grid error participates
        double rb[3] = {1.2, 1.2, 1.2};
        const ScalarField u0 = ScalarField::coordinate(1) + bump_field(HPoint(0.1, 0.0, 0.0), rb);
        const Box out = Box::cube(1, -1.4, 1.4);
        // polynomial-bump test function: no boundary layer in the quadrature
        double rphi[3] = {0.9, 0.9, 0.9};
        SpaceTimeTest phi;
        phi.time = Profile1D{[](double tau, int k) {
            const double s = tau / 0.8;
            if (s >= 1.0) return 0.0;
            const double u = 1.0 - s * s;
            switch (k) {
                case 0: return u * u * u;
                case 1: return -6.0 * s * u * u / 0.8;
                default: return 0.0;
            }
        }};
        phi.tau_end = 0.8;
        std::vector<AxisFactor> chifac(3);
        for (int k = 0; k < 3; ++k) chifac[k] = AxisFactor{poly_bump_profile(), 0.0, rphi[k]};
        phi.space = separable_field(1, std::move(chifac));
        phi.space_box = Box::cube(1, -0.9, 0.9);

        // halve the solver grid, the step, the snapshot spacing and the
        // pairing quadrature together; every error source is second order
        auto solve_at = [&](int level) {
            const int cells = 8 << level;
            const double dt = 0.05 / (1 << level);
            std::vector<double> taus;
            const int snaps = 8 << level;
            for (int i = 0; i <= snaps; ++i) taus.push_back(0.8 * i / snaps);
            return solve_transport(b, ReactionFn(), u0, TransportForm::plus, ReactionMode::exponential, taus,
                                   out, cells, dt);
        };
        auto dist_at = [&](int level, const TimeField& u) {
            return std::fabs(distributional_residual(u, u0, b, ReactionFn(), phi, TransportForm::plus,
                                                     24 << level, 12 << level));
        };
        auto renorm_at = [&](int level, const TimeField& u) {
            return std::fabs(renormalization_residual(u, square_profile(), u0, b, ReactionFn(), phi,
                                                      TransportForm::plus, 24 << level, 12 << level));
        };
        const TimeField u1 = solve_at(0);
        const TimeField u2 = solve_at(1);
        const double d1 = dist_at(0, u1), d2 = dist_at(1, u2);
        const double n1 = renorm_at(0, u1), n2 = renorm_at(1, u2);
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.5));
        CHECK(n1 / n2 == doctest::Approx(4.0).epsilon(0.5));

        // identity renormalization recovers the plain pairing
        const double plain = distributional_residual(u1, u0, b, ReactionFn(), phi, TransportForm::plus, 24, 12);
        const double ident = renormalization_residual(u1, identity_profile(), u0, b, ReactionFn(), phi,
                                                      TransportForm::plus, 24, 12);
        CHECK(ident == doctest::Approx(plain).epsilon(1e-12));

        // frozen wrong solution: keeps u = u0 for all times
        std::vector<double> ft = {0.0, 0.4, 0.8};
        std::vector<GridField> frozen;
        std::array<int, 3> cells{16, 16, 16};
        for (size_t i = 0; i < ft.size(); ++i)
            frozen.push_back(GridField::sample(u0, out, std::span<const int>(cells.data(), 3)));
        TimeField uf;
        uf.taus = ft;
        uf.snaps = frozen;
        const double df = std::fabs(distributional_residual(uf, u0, b, ReactionFn(), phi, TransportForm::plus, 48, 24));
        const double nf = std::fabs(renormalization_residual(uf, square_profile(), u0, b, ReactionFn(), phi,
                                                             TransportForm::plus, 48, 24));
        CHECK(df >= 10.0 * d2);
        CHECK(nf >= 10.0 * n2);

        // trivial data: zero solution of the zero problem
        TimeField uz;
        uz.taus = ft;
        for (size_t i = 0; i < ft.size(); ++i)
            uz.snaps.push_back(GridField::sample(ScalarField::constant(0.0), out, std::span<const int>(cells.data(), 3)));
        CHECK(std::fabs(distributional_residual(uz, ScalarField::constant(0.0), b, ReactionFn(), phi,
                                                TransportForm::plus, 16, 8)) <= 1e-14);
    }

    TEST_CASE("solver guards") {
        const HVectorField b = contact_from_psi(ScalarField::coordinate(0), 1);
        const std::vector<double> bad = {0.0, 0.3};  // not on the step grid for dt = 0.04
        CHECK_THROWS_AS(solve_transport(b, ReactionFn(), ScalarField::constant(1.0), TransportForm::plus,
                                        ReactionMode::exponential, bad, Box::cube(1, -1.0, 1.0), 4, 0.04),
                        std::invalid_argument);
    }
}
