#include "opsplit/problems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rng.hpp"

namespace opsplit {

using nlohmann::json;

namespace {

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& G) { return 0.5 * (G + G.transpose()); }
Eigen::MatrixXd skew_part(const Eigen::MatrixXd& G) { return 0.5 * (G - G.transpose()); }

double spectral_norm(const Eigen::MatrixXd& M) { return M.jacobiSvd().singularValues()(0); }

/// Symmetric-part projection of a Gaussian matrix shifted so the smallest
/// eigenvalue equals 1; keeps every instance strongly monotone and well
/// conditioned.
Eigen::MatrixXd random_spd(detail::Rng& rng, Eigen::Index d) {
    Eigen::MatrixXd S = symmetric_part(rng.gaussian_matrix(d, d));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    S += (1.0 - es.eigenvalues().minCoeff()) * Eigen::MatrixXd::Identity(d, d);
    return S;
}

Eigen::MatrixXd random_monotone(detail::Rng& rng, Eigen::Index d) {
    return random_spd(rng, d) + skew_part(rng.gaussian_matrix(d, d));
}

/// Random skew matrix rescaled to spectral norm `target` (exactly, up to
/// rounding), so the recorded Lipschitz constant is tight.
Eigen::MatrixXd random_skew_scaled(detail::Rng& rng, Eigen::Index d, double target) {
    Eigen::MatrixXd K = skew_part(rng.gaussian_matrix(d, d));
    const double s = spectral_norm(K);
    if (s <= 0.0) throw DomainError("degenerate random skew draw");
    return K * (target / s);
}

}  // namespace

ProblemInstance build_counterexample(const CounterexampleParams& p) {
    if (!(p.omega > 0.0) || !(p.omega < M_PI))
        throw DomainError("build_counterexample: omega must lie in (0, pi)");
    if (!(p.gamma > 0.0) || !(p.mu > 0.0))
        throw DomainError("build_counterexample: gamma and mu must be positive");

    const double c = std::cos(p.omega / 2.0) / std::sin(p.omega / 2.0) / p.gamma;
    Eigen::MatrixXd B(2, 2), C(2, 2);
    B << 0.0, c, -c, 0.0;
    C << 0.0, p.mu, -p.mu, 0.0;

    SolutionPair star{Point::zeros(2), Point::zeros(2)};
    return make_problem(OperatorSpec::resolvent_only(Eigen::MatrixXd::Zero(2, 2), p.gamma),
                        OperatorSpec::skew(B), OperatorSpec::skew(C), LipschitzData{p.mu, std::nullopt},
                        star, {"theorem4.2"});
}

ProblemInstance build_condition_i(Eigen::Index dim, double kappa, double mu, std::uint64_t seed) {
    if (dim < 1) throw DomainError("build_condition_i: dim must be >= 1");
    if (!(kappa > 0.0) || !(mu > 0.0))
        throw DomainError("build_condition_i: kappa and mu must be positive");
    detail::Rng rng(seed);

    // B: quadratic gradient with lambda_max(Q) = 1/kappa, hence exactly
    // kappa-cocoercive.
    Eigen::MatrixXd Q0 = symmetric_part(rng.gaussian_matrix(dim, dim));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q0);
    Q0 += (-es.eigenvalues().minCoeff()) * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(Q0);
    const double lmax = es2.eigenvalues().maxCoeff();
    if (lmax <= 0.0) throw DomainError("degenerate quadratic gradient draw");
    const Eigen::MatrixXd Q = Q0 * ((1.0 / kappa) / lmax);
    const Eigen::VectorXd b_B = rng.gaussian_vector(dim);

    const Eigen::MatrixXd C = random_skew_scaled(rng, dim, mu);
    const Eigen::MatrixXd M_A = random_monotone(rng, dim);

    const Eigen::VectorXd x_star = rng.gaussian_vector(dim);
    const Eigen::VectorXd b_A = -(Q * x_star + b_B) - C * x_star - M_A * x_star;
    const Eigen::VectorXd u_star = M_A * x_star + b_A;

    SolutionPair star{Point(x_star), Point(u_star)};
    return make_problem(OperatorSpec::affine(M_A, Point(b_A)),
                        OperatorSpec::quadratic_gradient(Q, Point(b_B)), OperatorSpec::skew(C),
                        LipschitzData{mu, kappa}, star, {"condition-i"});
}

ProblemInstance build_condition_ii_consensus(int m, Eigen::Index base_dim, double mu,
                                             std::uint64_t seed) {
    if (m < 2) throw DomainError("build_condition_ii_consensus: m must be >= 2");
    if (base_dim < 1 || !(mu > 0.0))
        throw DomainError("build_condition_ii_consensus: bad base_dim or mu");
    detail::Rng rng(seed);
    const Eigen::Index d = m * base_dim;

    // Consensus averaging projector: P (v_1,...,v_m) = m copies of the mean.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            P.block(i * base_dim, j * base_dim, base_dim, base_dim) =
                (1.0 / m) * Eigen::MatrixXd::Identity(base_dim, base_dim);

    // C = P C1 P (skew, range and domain inside V), scaled to ||C|| = mu.
    Eigen::MatrixXd C = P * skew_part(rng.gaussian_matrix(d, d)) * P;
    const double s = spectral_norm(C);
    if (s <= 0.0) throw DomainError("degenerate consensus C draw");
    C *= mu / s;

    // A: block-diagonal monotone affine.
    Eigen::MatrixXd M_A = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < m; ++i)
        M_A.block(i * base_dim, i * base_dim, base_dim, base_dim) = random_monotone(rng, base_dim);

    // Plant a consensus solution: x_star in V, P(A x_star + C x_star) = 0.
    Eigen::VectorXd x_star(d);
    const Eigen::VectorXd base = rng.gaussian_vector(base_dim);
    for (int i = 0; i < m; ++i) x_star.segment(i * base_dim, base_dim) = base;
    const Eigen::VectorXd q = M_A * x_star + C * x_star;
    const Eigen::VectorXd b_A = -(P * q);
    const Eigen::VectorXd u_star = M_A * x_star + b_A;

    SolutionPair star{Point(x_star), Point(u_star)};
    return make_problem(OperatorSpec::affine(M_A, Point(b_A)), OperatorSpec::normal_cone_subspace(P),
                        OperatorSpec::skew(C), LipschitzData{mu, std::nullopt}, star,
                        {"condition-ii", "consensus"});
}

ProblemInstance build_random_general(Eigen::Index dim, double mu, std::uint64_t seed) {
    if (dim < 1 || !(mu > 0.0)) throw DomainError("build_random_general: bad dim or mu");
    detail::Rng rng(seed);

    const Eigen::MatrixXd M_B = random_monotone(rng, dim);
    const Eigen::VectorXd b_B = rng.gaussian_vector(dim);
    const Eigen::MatrixXd C = random_skew_scaled(rng, dim, mu);
    const Eigen::MatrixXd M_A = random_monotone(rng, dim);

    const Eigen::VectorXd x_star = rng.gaussian_vector(dim);
    const Eigen::VectorXd b_A = -(M_B * x_star + b_B) - C * x_star - M_A * x_star;
    const Eigen::VectorXd u_star = M_A * x_star + b_A;

    SolutionPair star{Point(x_star), Point(u_star)};
    return make_problem(OperatorSpec::affine(M_A, Point(b_A)), OperatorSpec::affine(M_B, Point(b_B)),
                        OperatorSpec::skew(C), LipschitzData{mu, std::nullopt}, star, {"random"});
}

// --- serialization ---

namespace {

json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json operator_to_json(const OperatorSpec& op) {
    using Kind = OperatorSpec::Kind;
    json j;
    switch (op.kind()) {
        case Kind::Zero:
            j["type"] = "zero";
            j["dim"] = op.dim();
            break;
        case Kind::Affine:
            j["type"] = "affine";
            j["M"] = matrix_to_json(op.matrix());
            j["b"] = vector_to_json(op.offset().vec());
            j["monotone"] = op.monotone_checked();
            break;
        case Kind::Skew:
            j["type"] = "skew";
            j["M"] = matrix_to_json(op.matrix());
            break;
        case Kind::NormalConeSubspace:
            j["type"] = "normal_cone_subspace";
            j["P"] = matrix_to_json(op.matrix());
            break;
        case Kind::QuadraticGradient:
            j["type"] = "quadratic_gradient";
            j["Q"] = matrix_to_json(op.matrix());
            j["b"] = vector_to_json(op.offset().vec());
            break;
        case Kind::ResolventOnly:
            j["type"] = "resolvent_only";
            j["R"] = matrix_to_json(op.matrix());
            j["gamma"] = op.designated_gamma();
            break;
        case Kind::Sum:
            j["type"] = "sum";
            j["left"] = operator_to_json(op.left());
            j["right"] = operator_to_json(op.right());
            break;
    }
    return j;
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaViolation(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        throw SchemaViolation(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaViolation(path, "expected a number");
    return j.get<double>();
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaViolation(path, "expected an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number_at(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SchemaViolation(path, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Eigen::MatrixXd M;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array()) throw SchemaViolation(rp, "expected an array of numbers");
        if (i == 0) {
            cols = j[i].size();
            M.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (j[i].size() != cols) {
            throw SchemaViolation(rp, "ragged matrix rows");
        }
        for (std::size_t k = 0; k < cols; ++k)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                number_at(j[i][k], rp + "[" + std::to_string(k) + "]");
    }
    return M;
}

OperatorSpec operator_from_json(const json& j, const std::string& path) {
    const json& jt = require(j, "type", path);
    if (!jt.is_string()) throw SchemaViolation(path + ".type", "expected a string");
    const std::string type = jt.get<std::string>();
    try {
        if (type == "zero") {
            const json& jd = require(j, "dim", path);
            if (!jd.is_number_integer() || jd.get<long long>() < 1)
                throw SchemaViolation(path + ".dim", "expected a positive integer");
            return OperatorSpec::zero(jd.get<Eigen::Index>());
        }
        if (type == "affine") {
            Eigen::MatrixXd M = matrix_from_json(require(j, "M", path), path + ".M");
            Point b(vector_from_json(require(j, "b", path), path + ".b"));
            const bool monotone = j.value("monotone", true);
            return monotone ? OperatorSpec::affine(std::move(M), std::move(b))
                            : OperatorSpec::affine_unchecked(std::move(M), std::move(b));
        }
        if (type == "skew")
            return OperatorSpec::skew(matrix_from_json(require(j, "M", path), path + ".M"));
        if (type == "normal_cone_subspace")
            return OperatorSpec::normal_cone_subspace(
                matrix_from_json(require(j, "P", path), path + ".P"));
        if (type == "quadratic_gradient")
            return OperatorSpec::quadratic_gradient(
                matrix_from_json(require(j, "Q", path), path + ".Q"),
                Point(vector_from_json(require(j, "b", path), path + ".b")));
        if (type == "resolvent_only")
            return OperatorSpec::resolvent_only(matrix_from_json(require(j, "R", path), path + ".R"),
                                                number_at(require(j, "gamma", path), path + ".gamma"));
        if (type == "sum")
            return OperatorSpec::sum(operator_from_json(require(j, "left", path), path + ".left"),
                                     operator_from_json(require(j, "right", path), path + ".right"));
    } catch (const SchemaViolation&) {
        throw;
    } catch (const Error& e) {
        // Structural invariant failures surface with the field path attached.
        throw SchemaViolation(path, e.what());
    }
    throw SchemaViolation(path + ".type", "unknown operator type '" + type + "'");
}

}  // namespace

std::string save(const ProblemInstance& p) {
    json j;
    j["version"] = 1;
    j["dim"] = p.dim;
    j["operators"]["A"] = operator_to_json(p.A);
    j["operators"]["B"] = operator_to_json(p.B);
    j["operators"]["C"] = operator_to_json(p.C);
    j["lip"]["mu"] = p.lip.mu;
    j["lip"]["kappa"] = p.lip.kappa ? json(*p.lip.kappa) : json(nullptr);
    if (p.known_solution) {
        j["solution"]["x"] = vector_to_json(p.known_solution->x.vec());
        j["solution"]["u"] = vector_to_json(p.known_solution->u.vec());
    } else {
        j["solution"] = nullptr;
    }
    j["tags"] = p.tags;
    return j.dump(2) + "\n";
}

ProblemInstance load(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw SchemaViolation("", std::string("invalid JSON: ") + e.what());
    }

    const json& jver = require(j, "version", "");
    if (!jver.is_number_integer() || jver.get<int>() != 1)
        throw SchemaViolation("version", "unsupported schema version");
    const json& jdim = require(j, "dim", "");
    if (!jdim.is_number_integer() || jdim.get<long long>() < 1)
        throw SchemaViolation("dim", "expected a positive integer");
    const Eigen::Index dim = jdim.get<Eigen::Index>();

    const json& ops = require(j, "operators", "");
    OperatorSpec A = operator_from_json(require(ops, "A", "operators"), "operators.A");
    OperatorSpec B = operator_from_json(require(ops, "B", "operators"), "operators.B");
    OperatorSpec C = operator_from_json(require(ops, "C", "operators"), "operators.C");
    if (A.dim() != dim || B.dim() != dim || C.dim() != dim)
        throw SchemaViolation("dim", "operator dimensions disagree with 'dim'");

    const json& lip = require(j, "lip", "");
    LipschitzData ld;
    ld.mu = number_at(require(lip, "mu", "lip"), "lip.mu");
    if (lip.contains("kappa") && !lip["kappa"].is_null())
        ld.kappa = number_at(lip["kappa"], "lip.kappa");

    std::optional<SolutionPair> sol;
    if (j.contains("solution") && !j["solution"].is_null()) {
        const json& js = j["solution"];
        sol = SolutionPair{Point(vector_from_json(require(js, "x", "solution"), "solution.x")),
                           Point(vector_from_json(require(js, "u", "solution"), "solution.u"))};
    }

    std::vector<std::string> tags;
    if (j.contains("tags") && !j["tags"].is_null()) {
        if (!j["tags"].is_array()) throw SchemaViolation("tags", "expected an array of strings");
        for (std::size_t i = 0; i < j["tags"].size(); ++i) {
            if (!j["tags"][i].is_string())
                throw SchemaViolation("tags[" + std::to_string(i) + "]", "expected a string");
            tags.push_back(j["tags"][i].get<std::string>());
        }
    }

    try {
        return make_problem(std::move(A), std::move(B), std::move(C), ld, std::move(sol),
                            std::move(tags));
    } catch (const Error& e) {
        throw SchemaViolation("", e.what());
    }
}

void save_file(const std::filesystem::path& path, const ProblemInstance& p) {
    std::ofstream out(path);
    if (!out) throw ProblemLoadError("cannot open for writing: " + path.string());
    out << save(p);
}

ProblemInstance load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProblemLoadError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load(ss.str());
}

}  // namespace opsplit
