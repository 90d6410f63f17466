#include "opsplit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "opsplit/analysis.hpp"
#include "opsplit/trace_io.hpp"
#include "opsplit/validation.hpp"

namespace opsplit {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
}

std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) config_fail(key, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) config_fail(key, "expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    SweepConfig cfg;

    if (!j.contains("methods")) config_fail("methods", "missing");
    if (!j["methods"].is_array() || j["methods"].empty())
        config_fail("methods", "expected a nonempty array of method names");
    for (const auto& m : j["methods"]) {
        if (!m.is_string()) config_fail("methods", "expected strings");
        const auto parsed = method_from_name(m.get<std::string>());
        if (!parsed) config_fail("methods", "unknown method '" + m.get<std::string>() + "'");
        cfg.methods.push_back(*parsed);
    }

    if (!j.contains("problems")) config_fail("problems", "missing");
    if (!j["problems"].is_array() || j["problems"].empty())
        config_fail("problems", "expected a nonempty array of paths or builder specs");
    for (const auto& p : j["problems"]) {
        if (!p.is_string()) config_fail("problems", "expected strings");
        cfg.problems.push_back(p.get<std::string>());
    }

    if (j.contains("gammas")) cfg.gammas = number_list(j["gammas"], "gammas");
    if (j.contains("betas")) cfg.betas = number_list(j["betas"], "betas");

    if (j.contains("max_iter")) {
        if (!j["max_iter"].is_number_integer() || j["max_iter"].get<long long>() < 1)
            config_fail("max_iter", "expected a positive integer");
        cfg.max_iter = j["max_iter"].get<long long>();
    }
    if (j.contains("tol")) {
        if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0))
            config_fail("tol", "expected a positive number");
        cfg.tol = j["tol"].get<double>();
    }
    if (j.contains("blowup")) {
        if (!j["blowup"].is_number() || !(j["blowup"].get<double>() > 0.0))
            config_fail("blowup", "expected a positive number");
        cfg.blowup = j["blowup"].get<double>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) config_fail("seed", "expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("init")) {
        if (!j["init"].is_string()) config_fail("init", "expected \"zeros\" or \"ones\"");
        cfg.init = j["init"].get<std::string>();
        if (cfg.init != "zeros" && cfg.init != "ones")
            config_fail("init", "expected \"zeros\" or \"ones\"");
    }
    if (j.contains("je_alpha")) {
        if (!j["je_alpha"].is_number() || !(j["je_alpha"].get<double>() > 0.0))
            config_fail("je_alpha", "expected a positive number");
        cfg.je_alpha = j["je_alpha"].get<double>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) config_fail("output_dir", "expected a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& args, const std::string& spec) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ProblemLoadError("bad builder argument '" + item + "' in spec: " + spec);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& key,
              const std::string& spec) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ProblemLoadError("builder spec missing '" + key + "': " + spec);
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ProblemLoadError("builder argument '" + key + "' is not a number: " + spec);
    }
}

std::uint64_t kv_seed(const std::map<std::string, std::string>& kv, std::uint64_t fallback) {
    const auto it = kv.find("seed");
    return it == kv.end() ? fallback : std::stoull(it->second);
}

}  // namespace

ProblemInstance problem_from_spec(const std::string& spec, std::uint64_t fallback_seed) {
    if (spec.rfind("builder:", 0) != 0) return load_file(spec);
    const auto second = spec.find(':', 8);
    const std::string name = spec.substr(8, second == std::string::npos ? std::string::npos : second - 8);
    const auto kv = parse_kv(second == std::string::npos ? "" : spec.substr(second + 1), spec);
    if (name == "counterexample") {
        CounterexampleParams p;
        p.gamma = kv_num(kv, "gamma", spec);
        p.mu = kv_num(kv, "mu", spec);
        p.omega = kv_num(kv, "omega", spec);
        return build_counterexample(p);
    }
    if (name == "condition_i")
        return build_condition_i(static_cast<Eigen::Index>(kv_num(kv, "dim", spec)),
                                 kv_num(kv, "kappa", spec), kv_num(kv, "mu", spec),
                                 kv_seed(kv, fallback_seed));
    if (name == "condition_ii")
        return build_condition_ii_consensus(static_cast<int>(kv_num(kv, "m", spec)),
                                            static_cast<Eigen::Index>(kv_num(kv, "base_dim", spec)),
                                            kv_num(kv, "mu", spec), kv_seed(kv, fallback_seed));
    if (name == "random")
        return build_random_general(static_cast<Eigen::Index>(kv_num(kv, "dim", spec)),
                                    kv_num(kv, "mu", spec), kv_seed(kv, fallback_seed));
    throw ProblemLoadError("unknown builder '" + name + "' in spec: " + spec);
}

namespace {

std::string num_slug(double v) {
    std::string s = format_double(v);
    for (char& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
        if (c == '+') c = ' ';
    }
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    try {
        cfg = load_sweep_config(config_path);
        if (const char* env = std::getenv("OPSPLIT_SEED")) cfg.seed = std::stoull(env);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::filesystem::create_directories(cfg.output_dir);

        std::vector<ProblemInstance> problems;
        for (const auto& spec : cfg.problems) problems.push_back(problem_from_spec(spec, cfg.seed));

        json summary;
        summary["runs"] = json::array();
        long long total_iters = 0, total_c = 0, total_rows = 0;
        bool any_failed = false;

        for (std::size_t pi = 0; pi < problems.size(); ++pi) {
            const ProblemInstance& prob = problems[pi];
            for (const Method m : cfg.methods) {
                const std::vector<double> gammas =
                    cfg.gammas.empty() ? std::vector<double>{-1.0} : cfg.gammas;
                const std::vector<double> betas = method_uses_beta(m)
                                                      ? (cfg.betas.empty() ? std::vector<double>{-1.0}
                                                                           : cfg.betas)
                                                      : std::vector<double>{-1.0};
                for (const double g : gammas) {
                    for (const double b : betas) {
                        SolverConfig sc;
                        if (g > 0.0) sc.gamma = g;
                        if (b > 0.0 && method_uses_beta(m)) sc.beta = b;
                        sc.max_iter = cfg.max_iter;
                        sc.tol = cfg.tol;
                        sc.blowup = cfg.blowup;

                        RunHooks hooks;
                        const double alpha = cfg.je_alpha;
                        hooks.alpha = [alpha](const Point&, const JEAux&) { return alpha; };

                        const SolverState init = cfg.init == "ones" ? ones_state(m, prob)
                                                                    : default_state(m, prob);
                        const RunTrace trace = run(m, prob, sc, init, hooks);
                        for (const auto& w : trace.warnings) err << "warning: " << w << "\n";

                        std::string fname = "run" + std::to_string(pi) + "_" + prob.tag() + "_" +
                                            method_name(m) + "_g" + num_slug(trace.gamma);
                        if (method_uses_beta(m)) fname += "_b" + num_slug(trace.beta);
                        fname += ".csv";
                        write_trace_csv(trace, cfg.output_dir / fname);

                        json r;
                        r["method"] = trace.method;
                        r["problem_tag"] = trace.problem_tag;
                        r["problem_index"] = pi;
                        r["gamma"] = trace.gamma;
                        if (method_uses_beta(m)) r["beta"] = trace.beta;
                        r["status"] = status_name(trace.status);
                        r["iters"] = trace.iters;
                        r["rows"] = trace.rows.size();
                        r["final_residual"] = trace.rows.back().residual
                                                  ? json(*trace.rows.back().residual)
                                                  : json(nullptr);
                        r["total_c_evals"] = trace.rows.back().cum_c_evals;
                        r["warnings"] = trace.warnings;
                        if (trace.status == RunStatus::Failed) {
                            r["error"] = trace.error;
                            any_failed = true;
                        }
                        r["csv"] = fname;
                        summary["runs"].push_back(std::move(r));

                        total_iters += trace.iters;
                        total_c += trace.rows.back().cum_c_evals;
                        total_rows += static_cast<long long>(trace.rows.size());

                        out << prob.tag() << " " << method_name(m) << " gamma="
                            << format_double(trace.gamma);
                        if (method_uses_beta(m)) out << " beta=" << format_double(trace.beta);
                        out << " -> " << status_name(trace.status) << " in " << trace.iters
                            << " iters\n";
                    }
                }
            }
        }

        summary["totals"]["runs"] = summary["runs"].size();
        summary["totals"]["iters"] = total_iters;
        summary["totals"]["c_evals"] = total_c;
        summary["totals"]["rows"] = total_rows;
        summary["seed"] = cfg.seed;

        std::ofstream sf(cfg.output_dir / "summary.json");
        if (!sf) throw ProblemLoadError("cannot write summary.json");
        sf << summary.dump(2) << "\n";
        out << "summary: " << (cfg.output_dir / "summary.json").string() << "\n";
        return any_failed ? 1 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_counterexample(double gamma, double mu, const std::vector<double>& omegas,
                       std::ostream& out, std::ostream& err) {
    try {
        if (omegas.empty()) throw DomainError("need at least one omega");
        out << "omega,predicted_lambda_sq,measured_ratio_sq,abs_diff\n";
        for (const double w : omegas) {
            const double predicted = counterexample_growth(gamma, mu, w);
            CounterexampleParams params{gamma, mu, w};
            const ProblemInstance prob = build_counterexample(params);
            const double ratio = measure_growth_ratio(prob, gamma, Point{1.0, 0.0}, 200, 100);
            const double measured = ratio * ratio;
            out << format_double(w) << ',' << format_double(predicted) << ','
                << format_double(measured) << ',' << format_double(std::abs(predicted - measured))
                << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_validate(const std::string& spec, std::uint64_t seed, std::ostream& out,
                 std::ostream& err) {
    ProblemInstance prob;
    try {
        prob = problem_from_spec(spec, seed);
    } catch (const std::exception& e) {
        // Construction already enforces the structural invariants; a refusal
        // to load is itself a named check failure.
        out << "FAIL structural: instance rejected at load: " << e.what() << "\n";
        return 1;
    }
    try {
        const auto results = validate_instance(prob, seed);
        int failures = 0;
        for (const auto& r : results) {
            out << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
            if (!r.pass) ++failures;
        }
        out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << "\n";
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace opsplit
