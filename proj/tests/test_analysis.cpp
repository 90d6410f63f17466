#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "opsplit/analysis.hpp"
#include "opsplit/problems.hpp"
#include "support.hpp"

using namespace opsplit;

namespace {

SolverConfig cfg_gb(double gamma, double beta) {
    SolverConfig c;
    c.gamma = gamma;
    c.beta = beta;
    return c;
}

}  // namespace

TEST_CASE("apply_T") {
    SUBCASE("identity for zero operators") {
        const auto Z = OperatorSpec::zero(3);
        const Point z{1, -2, 0.5};
        CHECK((apply_T(Z, Z, Z, 0.7, z) - z).norm() == 0.0);
    }

    SUBCASE("agrees with the FDRF z-update") {
        int samples = 0;
        for (int i = 0; i < 100 && samples < 1000; ++i) {
            const Eigen::Index d = 2 + i % 12;
            const auto p = build_random_general(d, 1.0 + 0.2 * (i % 4), 3000 + i);
            std::mt19937_64 gen(4000 + i);
            const double g = 0.1 + 0.07 * (i % 9);
            SolverConfig cfg;
            cfg.gamma = g;
            for (int k = 0; k < 10; ++k, ++samples) {
                const Point z = testsup::random_point(gen, d);
                const Point via_step =
                    std::get<FDRFState>(fdrf_step(p.A, p.B, p.C, cfg, FDRFState{z}).state_next).z;
                CHECK((apply_T(p.A, p.B, p.C, g, z) - via_step).norm() <= 1e-14);
            }
        }
        CHECK(samples == 1000);
    }

    SUBCASE("fixed at z = x* + gamma v for v in Bx*") {
        const auto p = build_random_general(8, 1.0, 71);
        const double g = 0.5;
        const Point xs = p.known_solution->x;
        const Point z = xs + g * forward(p.B, xs);
        CHECK((apply_T(p.A, p.B, p.C, g, z) - z).norm() <= 1e-10);
    }
}

TEST_CASE("counterexample T matrix") {
    SUBCASE("entries match the closed form") {
        for (const double gm : {0.25, 0.5, 1.0, 2.0}) {
            for (const double w : {0.01, 0.1, 0.5, 1.0}) {
                const double gamma = 1.0, mu = gm;
                const auto p = build_counterexample({gamma, mu, w});
                const AffineMap T = assemble_T(p.A, p.B, p.C, gamma);
                const double a = 0.5 * (1.0 + std::cos(w) + gamma * mu * std::sin(w));
                const double b = 0.5 * (gamma * mu - gamma * mu * std::cos(w) + std::sin(w));
                CHECK(T.t.norm() <= 1e-14);
                CHECK(std::abs(T.M(0, 0) - a) <= 1e-12);
                CHECK(std::abs(T.M(0, 1) - b) <= 1e-12);
                CHECK(std::abs(T.M(1, 0) + b) <= 1e-12);
                CHECK(std::abs(T.M(1, 1) - a) <= 1e-12);
            }
        }
    }

    SUBCASE("spectral radius squared matches counterexample_growth") {
        for (const double gm : {0.25, 0.5, 1.0, 2.0}) {
            for (const double w : {0.01, 0.1, 0.5, 1.0}) {
                const auto p = build_counterexample({1.0, gm, w});
                const AffineMap T = assemble_T(p.A, p.B, p.C, 1.0);
                const auto eig = Eigen::EigenSolver<Eigen::MatrixXd>(T.M).eigenvalues();
                const double rho_sq = std::max(std::norm(eig(0)), std::norm(eig(1)));
                CHECK(std::abs(rho_sq - counterexample_growth(1.0, gm, w)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("counterexample_growth closed form") {
    CHECK(counterexample_growth(1.0, 1.0, M_PI / 2) == doctest::Approx(2.0).epsilon(1e-14));
    // omega -> 0+ limit is 1.
    CHECK(std::abs(counterexample_growth(1.0, 1.0, 1e-8) - 1.0) <= 1e-6);
    // First-order expansion 1 + gamma mu omega + O(omega^2).
    for (const double gm : {0.25, 0.5, 1.0, 2.0}) {
        const double w = 1e-3;
        CHECK(std::abs(counterexample_growth(1.0, gm, w) - 1.0 - gm * w) <= 10.0 * w * w);
    }
    CHECK_THROWS_AS(counterexample_growth(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(counterexample_growth(1.0, 1.0, M_PI), DomainError);
    CHECK_THROWS_AS(counterexample_growth(1.0, 1.0, -0.3), DomainError);
}

TEST_CASE("measured growth matches the spectrum") {
    const auto p = build_counterexample({1.0, 1.0, 0.1});
    const double r = measure_growth_ratio(p, 1.0, Point{1, 0}, 200, 100);
    CHECK(std::abs(r - std::sqrt(counterexample_growth(1.0, 1.0, 0.1))) <= 1e-9);
}

TEST_CASE("fixed-point encoding") {
    SUBCASE("origin for the counterexample") {
        const auto p = build_counterexample({1.0, 1.0, 0.3});
        CHECK(check_fixed_point_encoding(p.A, p.B, p.C, 1.0, Point{0, 0}) <= 1e-12);
    }

    SUBCASE("lifted solution points are fixed and encode the zero") {
        for (int i = 0; i < 5; ++i) {
            const auto p = build_random_general(4 + i, 1.0, 5200 + i);
            const double g = 0.7 / p.lip.mu;
            const Point xs = p.known_solution->x;
            const Point z = xs + g * forward(p.B, xs);
            CHECK(check_fixed_point_encoding(p.A, p.B, p.C, g, z) <= 1e-10);
        }
    }

    SUBCASE("computed fixed points of affine instances") {
        for (int i = 0; i < 20; ++i) {
            const auto p = build_random_general(3 + i % 10, 1.0 + 0.1 * i, 5000 + i);
            const double g = 0.9 / p.lip.mu;
            const Point z = fixed_point_of_T(p.A, p.B, p.C, g);
            CHECK(check_fixed_point_encoding(p.A, p.B, p.C, g, z) <= 1e-8);
            // The backward image of the fixed point is the planted zero.
            CHECK((resolvent(p.B, g, z) - p.known_solution->x).norm() <= 1e-7);
        }
    }

    SUBCASE("rejects non-fixed points") {
        const auto p = build_random_general(4, 1.0, 5100);
        CHECK_THROWS_AS(check_fixed_point_encoding(p.A, p.B, p.C, 0.5, Point::ones(4)),
                        NotAFixedPoint);
    }
}

TEST_CASE("pd_norm_sq") {
    CHECK(pd_norm_sq({0.5, 2.0}, Point{0, 0}, Point{0, 0}) == 0.0);
    // (1/gamma)|x|^2 - 2<x,u> + beta|u|^2 = 2 - 2 + 2 = 2.
    CHECK(pd_norm_sq({0.5, 2.0}, Point{1, 0}, Point{1, 0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pd_norm_sq({2.0, 0.5}, Point{1, 0}, Point{1, 0}), InvalidMetric);
    CHECK_THROWS_AS(pd_norm_sq({1.0, 1.0}, Point{1, 0}, Point{1, 0}), InvalidMetric);

    SUBCASE("positive definite for gamma < beta") {
        std::mt19937_64 gen(17);
        const PDNorm n{0.4, 1.0};
        double lo = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 10000; ++i) {
            Eigen::VectorXd v = testsup::gaussian_vector(gen, 6);
            v /= v.norm();
            lo = std::min(lo, pd_norm_sq(n, Point(v.head(3)), Point(v.tail(3))));
        }
        CHECK(lo > 0.0);

        // 2x2 block eigenvalue test: [[1/g, -1], [-1, b]] is PD iff g < b.
        Eigen::Matrix2d blk;
        blk << 1.0 / n.gamma, -1.0, -1.0, n.beta;
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(blk).eigenvalues().minCoeff() > 0.0);
        blk << 1.0 / 2.0, -1.0, -1.0, 1.0;  // gamma = 2 > beta = 1
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(blk).eigenvalues().minCoeff() < 0.0);
    }
}

TEST_CASE("lyapunov decrease along FRDR runs") {
    SUBCASE("stationary trajectory gives V = S = slack = 0") {
        const auto p = build_random_general(5, 1.0, 6000);
        const auto& [xs, us] = *p.known_solution;
        const FRDRState s{xs, xs, us, forward(p.C, xs)};
        const auto rec = lyapunov(p, {0.2, 1.0}, s, s, s);
        CHECK(std::abs(rec.V) <= 1e-12);
        CHECK(std::abs(rec.S) <= 1e-12);
        CHECK(std::abs(rec.decrease_slack) <= 1e-12);
    }

    SUBCASE("slack stays nonnegative and V dominates the distance") {
        for (int i = 0; i < 5; ++i) {
            const auto p = build_random_general(4 + 3 * i, 1.0 + 0.3 * i, 6100 + i);
            const double beta = 1.0;
            const double g = 0.99 * beta / (1.0 + 2.0 * p.lip.mu * beta);
            const PDNorm pd{g, beta};
            const SolverConfig cfg = cfg_gb(g, beta);

            std::vector<FRDRState> states;
            states.push_back(std::get<FRDRState>(ones_state(Method::FRDR, p)));
            for (int n = 0; n < 100; ++n)
                states.push_back(std::get<FRDRState>(
                    frdr_step(p.A, p.B, p.C, cfg, states.back()).state_next));

            const auto& [xs, us] = *p.known_solution;
            for (std::size_t n = 1; n + 1 < states.size(); ++n) {
                const auto rec = lyapunov(p, pd, states[n - 1], states[n], states[n + 1]);
                CHECK(rec.decrease_slack >= -1e-9);
                const double dist =
                    pd_norm_sq(pd, states[n].x - xs, states[n].u - us);
                CHECK(rec.V >= 0.5 * dist - 1e-9);
            }
        }
    }

    SUBCASE("requires a certified solution") {
        const auto ok = build_random_general(3, 1.0, 6200);
        ProblemInstance p = ok;
        p.known_solution.reset();
        const FRDRState s{Point::zeros(3), Point::zeros(3), Point::zeros(3), Point::zeros(3)};
        CHECK_THROWS_AS(lyapunov(p, {0.2, 1.0}, s, s, s), NotASolution);

        // A stale pair that stopped being a solution is re-verified and rejected.
        ProblemInstance q = ok;
        q.known_solution = SolutionPair{Point::ones(3), Point::ones(3)};
        CHECK_THROWS_AS(lyapunov(q, {0.2, 1.0}, s, s, s), NotASolution);
    }
}
