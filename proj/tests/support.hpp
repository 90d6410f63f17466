// Shared helpers for the test suites: deterministic random operators and
// instances beyond what the library builders provide.
#pragma once

#include <Eigen/Dense>
#include <random>

#include "opsplit/problem_instance.hpp"

namespace testsup {

using opsplit::OperatorSpec;
using opsplit::Point;

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = nd(gen);
    return M;
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& gen, Eigen::Index d) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = nd(gen);
    return v;
}

inline Point random_point(std::mt19937_64& gen, Eigen::Index d) {
    return Point(gaussian_vector(gen, d));
}

/// Monotone matrix: PSD symmetric part (smallest eigenvalue 1) plus skew part.
inline Eigen::MatrixXd random_monotone_matrix(std::mt19937_64& gen, Eigen::Index d) {
    Eigen::MatrixXd G = gaussian_matrix(gen, d, d);
    Eigen::MatrixXd S = 0.5 * (G + G.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    S += (1.0 - es.eigenvalues().minCoeff()) * Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd G2 = gaussian_matrix(gen, d, d);
    return S + 0.5 * (G2 - G2.transpose());
}

inline Eigen::MatrixXd random_skew_matrix(std::mt19937_64& gen, Eigen::Index d) {
    Eigen::MatrixXd G = gaussian_matrix(gen, d, d);
    return 0.5 * (G - G.transpose());
}

/// Orthogonal projector onto a random k-dimensional subspace.
inline Eigen::MatrixXd random_projector(std::mt19937_64& gen, Eigen::Index d, Eigen::Index k) {
    Eigen::MatrixXd G = gaussian_matrix(gen, d, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q1 = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    return Q1 * Q1.transpose();
}

/// Two-operator instance (C = 0) with a planted zero of A + B.
inline opsplit::ProblemInstance two_op_problem(std::uint64_t seed, Eigen::Index d) {
    std::mt19937_64 gen(seed);
    const Eigen::MatrixXd MA = random_monotone_matrix(gen, d);
    const Eigen::MatrixXd MB = random_monotone_matrix(gen, d);
    const Eigen::VectorXd bB = gaussian_vector(gen, d);
    const Eigen::VectorXd xs = gaussian_vector(gen, d);
    const Eigen::VectorXd bA = -(MB * xs + bB) - MA * xs;
    opsplit::SolutionPair star{Point(xs), Point(MA * xs + bA)};
    return opsplit::make_problem(OperatorSpec::affine(MA, Point(bA)),
                                 OperatorSpec::affine(MB, Point(bB)), OperatorSpec::zero(d),
                                 opsplit::LipschitzData{1.0, std::nullopt}, star, {"two-op"});
}

/// Subspace instance for the Briceno-Arias method: B = N_V with a random
/// projector, A monotone affine, C = P K P skew; solution planted on V.
inline opsplit::ProblemInstance subspace_problem(std::uint64_t seed, Eigen::Index d, Eigen::Index k,
                                                 bool zero_C) {
    std::mt19937_64 gen(seed);
    const Eigen::MatrixXd P = random_projector(gen, d, k);
    const Eigen::MatrixXd MA = random_monotone_matrix(gen, d);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    double mu = 1.0;
    if (!zero_C) {
        C = P * random_skew_matrix(gen, d) * P;
        const double s = C.jacobiSvd().singularValues()(0);
        C *= mu / s;
    }
    Eigen::VectorXd xs = P * gaussian_vector(gen, d);
    const Eigen::VectorXd q = MA * xs + C * xs;
    const Eigen::VectorXd bA = -(P * q);
    opsplit::SolutionPair star{Point(xs), Point(MA * xs + bA)};
    return opsplit::make_problem(OperatorSpec::affine(MA, Point(bA)),
                                 OperatorSpec::normal_cone_subspace(P), OperatorSpec::skew(C),
                                 opsplit::LipschitzData{mu, std::nullopt}, star, {"subspace"});
}

}  // namespace testsup
