#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "opsplit/core_ops.hpp"
#include "opsplit/problems.hpp"
#include "opsplit/solvers.hpp"
#include "support.hpp"

using namespace opsplit;

TEST_CASE("build_counterexample") {
    SUBCASE("cot scaling of B at omega = pi/2") {
        const auto p = build_counterexample({1.0, 1.0, M_PI / 2});
        CHECK(p.B.matrix()(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.B.matrix()(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(p.C.matrix()(0, 1) == doctest::Approx(1.0));
        CHECK(p.has_tag("theorem4.2"));
    }

    SUBCASE("origin is the certified zero") {
        for (const double w : {0.05, 0.5, 2.0}) {
            const auto p = build_counterexample({0.7, 1.3, w});
            REQUIRE(p.known_solution.has_value());
            CHECK(p.known_solution->x.norm() == 0.0);
            CHECK(dist_to_zero(p, p.known_solution->x) <= 1e-12);
        }
    }

    SUBCASE("omega -> pi boundary stays valid (cot -> 0)") {
        const auto p = build_counterexample({1.0, 1.0, M_PI - 1e-9});
        CHECK(std::abs(p.B.matrix()(0, 1)) <= 1e-9);
    }

    SUBCASE("domain errors") {
        CHECK_THROWS_AS(build_counterexample({1.0, 1.0, 0.0}), DomainError);
        CHECK_THROWS_AS(build_counterexample({1.0, 1.0, M_PI}), DomainError);
        CHECK_THROWS_AS(build_counterexample({-1.0, 1.0, 0.1}), DomainError);
    }
}

TEST_CASE("build_condition_i") {
    const auto p = build_condition_i(10, 0.8, 1.5, 42);
    REQUIRE(p.known_solution.has_value());
    REQUIRE(p.lip.kappa.has_value());
    CHECK(*p.lip.kappa == doctest::Approx(0.8));

    SUBCASE("planted solution has zero residual") {
        CHECK(dist_to_zero(p, p.known_solution->x) <= 1e-10);
    }

    SUBCASE("B is exactly kappa-cocoercive") {
        // lambda_max(Q) = 1/kappa.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.B.matrix());
        CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0 / 0.8).epsilon(1e-12));
        // Definition check on random pairs.
        std::mt19937_64 gen(1);
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 100; ++i) {
            const Point x = testsup::random_point(gen, 10);
            const Point y = testsup::random_point(gen, 10);
            const Point dB = forward(p.B, x) - forward(p.B, y);
            worst = std::min(worst, (x - y).dot(dB) - 0.8 * dB.squared_norm());
        }
        CHECK(worst >= -1e-10);
    }

    SUBCASE("default FDRF step is strictly inside the theorem range") {
        const auto cfg = resolve_config(Method::FDRF, p, {});
        CHECK(*cfg.gamma < std::min(0.8, std::sqrt(2.0 / 3.0) / 1.5));
        CHECK(*cfg.gamma > 0.0);
        CHECK(step_size_warnings(Method::FDRF, p, cfg).empty());
    }
}

TEST_CASE("build_condition_ii_consensus") {
    const int m = 3;
    const Eigen::Index bd = 4;
    const auto p = build_condition_ii_consensus(m, bd, 1.2, 7);
    REQUIRE(p.dim == m * bd);

    SUBCASE("projector averages the blocks") {
        std::mt19937_64 gen(2);
        const Eigen::VectorXd v = testsup::gaussian_vector(gen, p.dim);
        const Eigen::VectorXd pv = p.B.matrix() * v;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(bd);
        for (int i = 0; i < m; ++i) mean += v.segment(i * bd, bd);
        mean /= m;
        for (int i = 0; i < m; ++i) CHECK((pv.segment(i * bd, bd) - mean).norm() <= 1e-12);
    }

    SUBCASE("planted consensus solution") {
        const Point& xs = p.known_solution->x;
        CHECK((xs.vec() - p.B.matrix() * xs.vec()).norm() <= 1e-12);  // xs in V
        CHECK(dist_to_zero(p, xs) <= 1e-10);
    }

    SUBCASE("C = P C P exactly") {
        const auto& P = p.B.matrix();
        const auto& C = p.C.matrix();
        CHECK((P * C * P - C).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("C differences are orthogonal to V-perp") {
        std::mt19937_64 gen(3);
        for (int i = 0; i < 50; ++i) {
            const Point x = testsup::random_point(gen, p.dim);
            const Point y = testsup::random_point(gen, p.dim);
            Eigen::VectorXd w = testsup::gaussian_vector(gen, p.dim);
            w -= p.B.matrix() * w;  // w in V-perp
            const double ip = (forward(p.C, x) - forward(p.C, y)).vec().dot(w);
            CHECK(std::abs(ip) <= 1e-12 * std::max(1.0, w.norm()));
        }
    }

    SUBCASE("composite Lipschitz constant is exactly mu") {
        CHECK(p.C.matrix().jacobiSvd().singularValues()(0) == doctest::Approx(1.2).epsilon(1e-12));
    }
}

TEST_CASE("build_random_general") {
    const auto p = build_random_general(8, 1.7, 99);
    CHECK(dist_to_zero(p, p.known_solution->x) <= 1e-10);
    CHECK(p.C.matrix().jacobiSvd().singularValues()(0) == doctest::Approx(1.7).epsilon(1e-12));

    SUBCASE("A and B are monotone on random pairs") {
        std::mt19937_64 gen(4);
        for (int i = 0; i < 100; ++i) {
            const Point x = testsup::random_point(gen, 8);
            const Point y = testsup::random_point(gen, 8);
            CHECK((x - y).dot(forward(p.A, x) - forward(p.A, y)) >= -1e-10);
            CHECK((x - y).dot(forward(p.B, x) - forward(p.B, y)) >= -1e-10);
        }
    }
}

TEST_CASE("builders are deterministic in (params, seed)") {
    const auto a = build_random_general(6, 1.0, 123);
    const auto b = build_random_general(6, 1.0, 123);
    CHECK(a.A.matrix() == b.A.matrix());
    CHECK(a.B.matrix() == b.B.matrix());
    CHECK(a.C.matrix() == b.C.matrix());
    CHECK(a.known_solution->x.vec() == b.known_solution->x.vec());
    const auto c = build_random_general(6, 1.0, 124);
    CHECK(a.A.matrix() != c.A.matrix());

    const auto d1 = build_condition_ii_consensus(3, 3, 1.0, 5);
    const auto d2 = build_condition_ii_consensus(3, 3, 1.0, 5);
    CHECK(d1.A.matrix() == d2.A.matrix());
    CHECK(d1.C.matrix() == d2.C.matrix());
}

TEST_CASE("save/load round trip") {
    SUBCASE("bitwise on every coordinate") {
        for (int i = 0; i < 4; ++i) {
            const auto p = build_random_general(5, 1.3, 800 + i);
            const auto q = load(save(p));
            CHECK(q.dim == p.dim);
            CHECK(q.A.matrix() == p.A.matrix());
            CHECK(q.A.offset().vec() == p.A.offset().vec());
            CHECK(q.B.matrix() == p.B.matrix());
            CHECK(q.C.matrix() == p.C.matrix());
            CHECK(q.lip.mu == p.lip.mu);
            CHECK(q.known_solution->x.vec() == p.known_solution->x.vec());
            CHECK(q.known_solution->u.vec() == p.known_solution->u.vec());
            CHECK(q.tags == p.tags);
        }
    }

    SUBCASE("quadratic gradient and kappa survive") {
        const auto p = build_condition_i(7, 0.6, 1.1, 55);
        const auto q = load(save(p));
        CHECK(q.B.kind() == OperatorSpec::Kind::QuadraticGradient);
        CHECK(q.B.matrix() == p.B.matrix());
        REQUIRE(q.lip.kappa.has_value());
        CHECK(*q.lip.kappa == 0.6);
    }

    SUBCASE("counterexample reloads runnable") {
        const auto p = build_counterexample({1.0, 1.0, 0.2});
        const auto q = load(save(p));
        CHECK(q.has_tag("theorem4.2"));
        CHECK(q.A.kind() == OperatorSpec::Kind::ResolventOnly);
        SolverConfig cfg;
        cfg.gamma = 1.0;
        const auto r = fdrf_step(q.A, q.B, q.C, cfg, FDRFState{Point{1, 0}});
        const auto r0 = fdrf_step(p.A, p.B, p.C, cfg, FDRFState{Point{1, 0}});
        CHECK((std::get<FDRFState>(r.state_next).z - std::get<FDRFState>(r0.state_next).z).norm() ==
              0.0);
    }

    SUBCASE("missing lip.mu names the field") {
        auto j = nlohmann::json::parse(save(build_random_general(3, 1.0, 1)));
        j["lip"].erase("mu");
        try {
            load(j.dump());
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(e.field_path == "lip.mu");
            CHECK(std::string(e.what()).find("lip.mu") != std::string::npos);
        }
    }

    SUBCASE("non-skew C is rejected with the field path") {
        const std::string txt = R"({
          "version": 1, "dim": 2,
          "operators": {
            "A": {"type": "zero", "dim": 2},
            "B": {"type": "zero", "dim": 2},
            "C": {"type": "skew", "M": [[0.0, 1.0], [1.0, 0.0]]}
          },
          "lip": {"mu": 1.0, "kappa": null},
          "solution": null, "tags": []
        })";
        try {
            load(txt);
            FAIL("expected SchemaViolation");
        } catch (const SchemaViolation& e) {
            CHECK(std::string(e.what()).find("operators.C") != std::string::npos);
        }
    }

    SUBCASE("sum operators round trip") {
        const auto d = 3;
        std::mt19937_64 gen(9);
        const auto s = OperatorSpec::sum(
            OperatorSpec::skew(testsup::random_skew_matrix(gen, d)),
            OperatorSpec::affine(testsup::random_monotone_matrix(gen, d),
                                 testsup::random_point(gen, d)));
        const double mu = affine_forward_parts(s)->M.jacobiSvd().singularValues()(0);
        const auto p = make_problem(OperatorSpec::zero(d), OperatorSpec::zero(d), s,
                                    LipschitzData{mu, std::nullopt});
        const auto q = load(save(p));
        CHECK(q.C.kind() == OperatorSpec::Kind::Sum);
        CHECK(q.C.left().matrix() == s.left().matrix());
    }
}
