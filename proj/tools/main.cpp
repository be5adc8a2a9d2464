#include "l0babai/detectors.hpp"
#include "l0babai/errors.hpp"
#include "l0babai/experiments.hpp"
#include "l0babai/io.hpp"
#include "l0babai/model.hpp"
#include "l0babai/permutation.hpp"
#include "l0babai/qr.hpp"
#include "l0babai/random_matrices.hpp"
#include "l0babai/rng.hpp"
#include "l0babai/sp_analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace l0babai;

std::vector<double> load_vector(const std::string& path) {
    Matrix m = read_matrix_csv(path);
    if (m.rows() != 1 && m.cols() != 1)
        throw std::invalid_argument("expected a single-row or single-column CSV: " + path);
    return m.data();
}

bool probe_upper_triangular(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (int i = 0; i < m.rows(); ++i) {
        if (!(m(i, i) > 0.0)) return false;
        for (int j = 0; j < i; ++j)
            if (m(i, j) != 0.0) return false;
    }
    return true;
}

/// R factor of the file's matrix: used directly when already triangular.
UpperTriangular load_r_matrix(const std::string& path) {
    Matrix m = read_matrix_csv(path);
    if (probe_upper_triangular(m)) return UpperTriangular::from_matrix(m);
    return qr_factorize(m).r;
}

void emit_vector(JsonWriter& w, const std::vector<double>& v) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
}

void emit_int_vector(JsonWriter& w, const std::vector<int>& v) {
    w.begin_array();
    for (int x : v) w.value(x);
    w.end_array();
}

void emit_matrix(JsonWriter& w, const Matrix& m) {
    w.begin_array();
    for (int i = 0; i < m.rows(); ++i) {
        w.begin_array();
        for (int j = 0; j < m.cols(); ++j) w.value(m(i, j));
        w.end_array();
    }
    w.end_array();
}

void emit_sp_report(JsonWriter& w, const SpReport& rep) {
    w.begin_object();
    w.key("detector").value(rep.detector == DetectorTag::rb ? "rb" : "bb");
    w.key("rho");
    emit_vector(w, rep.rho);
    w.key("total").value(rep.total);
    w.end_object();
}

bool looks_numeric(const std::string& s) {
    if (s.find_first_of(".eE") == std::string::npos) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty();
}

void print_table(const ResultTable& table) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.header);
    for (const auto& row : table.rows) {
        std::vector<std::string> out;
        out.reserve(row.size());
        for (const auto& cell : row)
            out.push_back(looks_numeric(cell) ? format_table(std::strtod(cell.c_str(), nullptr))
                                              : cell);
        cells.push_back(std::move(out));
    }
    std::vector<size_t> width(table.header.size(), 0);
    for (const auto& row : cells)
        for (size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    std::printf("[%s]\n", table.name.c_str());
    for (const auto& row : cells) {
        for (size_t j = 0; j < row.size(); ++j)
            std::printf("%-*s%s", static_cast<int>(width[j]), row[j].c_str(),
                        j + 1 == row.size() ? "\n" : "  ");
    }
}

std::optional<MatrixType> parse_matrix_type(const std::string& s) {
    if (s == "type1") return MatrixType::type1;
    if (s == "type2") return MatrixType::type2;
    if (s == "both") return std::nullopt;
    throw std::invalid_argument("matrix_type must be type1, type2, or both");
}

ExperimentConfig config_from_json(ExperimentConfig base, const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::vector<std::string> known = {
        "matrix_type", "n", "m", "M", "p_list", "sigma_list",
        "n_matrices", "n_x", "n_noise", "strategies", "seed", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("unknown config key: " + it.key());
    }
    if (j.contains("matrix_type")) base.matrix_type = parse_matrix_type(j["matrix_type"]);
    if (j.contains("n")) base.n = j["n"].get<int>();
    if (j.contains("m")) base.m = j["m"].get<int>();
    if (j.contains("M")) base.M = j["M"].get<int>();
    if (j.contains("p_list")) base.p_list = j["p_list"].get<std::vector<double>>();
    if (j.contains("sigma_list")) base.sigma_list = j["sigma_list"].get<std::vector<double>>();
    if (j.contains("n_matrices")) base.n_matrices = j["n_matrices"].get<int>();
    if (j.contains("n_x")) base.n_x = j["n_x"].get<int>();
    if (j.contains("n_noise")) base.n_noise = j["n_noise"].get<int>();
    if (j.contains("strategies")) base.strategies = j["strategies"].get<std::vector<std::string>>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) base.output_dir = j["output_dir"].get<std::string>();
    return base;
}

struct DetectArgs {
    std::string matrix_path, y_path, detector = "rb", out_dir = ".";
    int M = 4, n = 20;
    double p = 0.3, sigma = -1.0, lambda = -1.0;
    bool lambda_set = false, sigma_set = false;
    bool emit_instance = false;
    std::uint64_t seed = 1;
};

void run_detect(const DetectArgs& args) {
    if (args.emit_instance) {
        Alphabet alphabet(args.M, args.p);
        if (!args.sigma_set) throw std::invalid_argument("--emit-instance requires --sigma");
        Rng rng(args.seed);
        Matrix a = generate_type1(args.n, rng);
        std::vector<int> x_star = sample_x_star(args.n, alphabet, rng);
        Observation obs = simulate_observation(a, x_star, args.sigma, rng);
        namespace fs = std::filesystem;
        fs::create_directories(args.out_dir);
        write_matrix_csv((fs::path(args.out_dir) / "a.csv").string(), a);
        Matrix xm(args.n, 1);
        for (int i = 0; i < args.n; ++i) xm(i, 0) = x_star[i];
        write_matrix_csv((fs::path(args.out_dir) / "x_star.csv").string(), xm);
        Matrix ym(static_cast<int>(obs.y.size()), 1);
        for (size_t i = 0; i < obs.y.size(); ++i) ym(static_cast<int>(i), 0) = obs.y[i];
        write_matrix_csv((fs::path(args.out_dir) / "y.csv").string(), ym);
        JsonWriter w;
        w.begin_object();
        w.key("a").value((fs::path(args.out_dir) / "a.csv").string());
        w.key("x_star").value((fs::path(args.out_dir) / "x_star.csv").string());
        w.key("y").value((fs::path(args.out_dir) / "y.csv").string());
        w.key("lambda_star").value(lambda_star(args.sigma, alphabet));
        w.end_object();
        std::printf("%s\n", w.str().c_str());
        return;
    }

    if (args.matrix_path.empty() || args.y_path.empty())
        throw std::invalid_argument("detect requires --matrix and --y");
    Matrix a = read_matrix_csv(args.matrix_path);
    std::vector<double> y = load_vector(args.y_path);
    UpperTriangular r;
    std::vector<double> y_tilde;
    if (probe_upper_triangular(a)) {
        r = UpperTriangular::from_matrix(a);
        if (static_cast<int>(y.size()) != r.n())
            throw std::invalid_argument("observation length must match matrix order");
        y_tilde = y;
    } else {
        if (static_cast<int>(y.size()) != a.rows())
            throw std::invalid_argument("observation length must match matrix rows");
        QrResult qr = qr_factorize(a);
        r = qr.r;
        y_tilde = matT_vec(qr.q1, y);
    }

    JsonWriter w;
    w.begin_object();
    w.key("detector").value(args.detector);
    if (args.detector == "ob") {
        DetectionResult det = babai_ordinary(r, y_tilde);
        w.key("lambda").value_null();
        w.key("x_hat");
        emit_int_vector(w, det.x_hat);
        w.key("c");
        emit_vector(w, det.c);
        w.key("objective").value(rbils_objective(r, y_tilde, det.x_hat, 0.0));
    } else {
        Alphabet alphabet(args.M, args.p);
        if (args.detector == "bb") {
            DetectionResult det = babai_box(r, y_tilde, alphabet);
            w.key("lambda").value_null();
            w.key("x_hat");
            emit_int_vector(w, det.x_hat);
            w.key("c");
            emit_vector(w, det.c);
            w.key("objective").value(rbils_objective(r, y_tilde, det.x_hat, 0.0));
        } else {
            double lambda = args.lambda;
            if (!args.lambda_set) {
                if (!args.sigma_set)
                    throw std::invalid_argument("rb detection requires --lambda or --sigma");
                lambda = lambda_star(args.sigma, alphabet);
            }
            DetectionResult det = babai_regularized(r, y_tilde, lambda, alphabet);
            w.key("lambda").value(lambda);
            w.key("x_hat");
            emit_int_vector(w, det.x_hat);
            w.key("c");
            emit_vector(w, det.c);
            w.key("g");
            emit_vector(w, det.g);
            w.key("objective").value(rbils_objective(r, y_tilde, det.x_hat, lambda));
        }
    }
    w.end_object();
    std::printf("%s\n", w.str().c_str());
}

int run_cli(int argc, char** argv) {
    CLI::App app{"L0-regularized Babai detection: detectors, SP analysis, permutations, experiments"};
    app.require_subcommand(1);

    // detect
    DetectArgs det;
    auto* cmd_detect = app.add_subcommand("detect", "Run one Babai detection on a matrix and observation");
    cmd_detect->add_option("--matrix", det.matrix_path, "Model matrix or R factor CSV");
    cmd_detect->add_option("--y", det.y_path, "Observation vector CSV");
    cmd_detect->add_option("--detector", det.detector, "Detector: rb, bb, or ob")
        ->check(CLI::IsMember({"rb", "bb", "ob"}));
    cmd_detect->add_option("--M", det.M, "Alphabet half-size M");
    cmd_detect->add_option("--p", det.p, "Nonzero prior p");
    cmd_detect->add_option("--sigma", det.sigma, "Noise standard deviation")
        ->each([&det](const std::string&) { det.sigma_set = true; });
    cmd_detect->add_option("--lambda", det.lambda, "Regularization weight (default: MAP-matched)")
        ->each([&det](const std::string&) { det.lambda_set = true; });
    cmd_detect->add_flag("--emit-instance", det.emit_instance,
                         "Generate and write a random instance instead of detecting");
    cmd_detect->add_option("--n", det.n, "Instance dimension for --emit-instance");
    cmd_detect->add_option("--seed", det.seed, "RNG seed for --emit-instance");
    cmd_detect->add_option("--out", det.out_dir, "Output directory for --emit-instance");
    cmd_detect->callback([&det]() { run_detect(det); });

    // sp-theory
    std::string spt_matrix;
    int spt_M = 4;
    double spt_p = 0.3, spt_sigma = 0.0, spt_lambda = -1.0;
    bool spt_lambda_set = false, spt_json = false;
    auto* cmd_spt = app.add_subcommand("sp-theory", "Closed-form success probabilities for a matrix");
    cmd_spt->add_option("--matrix", spt_matrix, "Model matrix or R factor CSV")->required();
    cmd_spt->add_option("--M", spt_M, "Alphabet half-size M");
    cmd_spt->add_option("--p", spt_p, "Nonzero prior p");
    cmd_spt->add_option("--sigma", spt_sigma, "Noise standard deviation")->required();
    cmd_spt->add_option("--lambda", spt_lambda, "Regularization weight (default: MAP-matched)")
        ->each([&spt_lambda_set](const std::string&) { spt_lambda_set = true; });
    cmd_spt->add_flag("--json", spt_json, "Emit JSON at full precision");
    cmd_spt->callback([&]() {
        Alphabet alphabet(spt_M, spt_p);
        UpperTriangular r = load_r_matrix(spt_matrix);
        double lambda = spt_lambda_set ? spt_lambda : lambda_star(spt_sigma, alphabet);
        SpReport rb = sp_rb(r, spt_sigma, lambda, alphabet);
        SpReport bb = sp_bb(r, spt_sigma, alphabet);
        if (spt_json) {
            JsonWriter w;
            w.begin_object();
            w.key("lambda").value(lambda);
            w.key("sp_rb");
            emit_sp_report(w, rb);
            w.key("sp_bb");
            emit_sp_report(w, bb);
            w.end_object();
            std::printf("%s\n", w.str().c_str());
        } else {
            std::printf("lambda %s\n", format_table(lambda).c_str());
            std::printf("sp_rb  %s\n", format_table(rb.total).c_str());
            std::printf("sp_bb  %s\n", format_table(bb.total).c_str());
        }
    });

    // sp-mc
    std::string mc_matrix;
    int mc_M = 4;
    double mc_p = 0.3, mc_sigma = 0.0, mc_lambda = -1.0;
    bool mc_lambda_set = false, mc_json = false;
    std::int64_t mc_trials = 10000;
    std::uint64_t mc_seed = 1;
    auto* cmd_mc = app.add_subcommand("sp-mc", "Monte-Carlo success probability of the regularized Babai point");
    cmd_mc->add_option("--matrix", mc_matrix, "Model matrix or R factor CSV")->required();
    cmd_mc->add_option("--M", mc_M, "Alphabet half-size M");
    cmd_mc->add_option("--p", mc_p, "Nonzero prior p");
    cmd_mc->add_option("--sigma", mc_sigma, "Noise standard deviation")->required();
    cmd_mc->add_option("--lambda", mc_lambda, "Regularization weight (default: MAP-matched)")
        ->each([&mc_lambda_set](const std::string&) { mc_lambda_set = true; });
    cmd_mc->add_option("--trials", mc_trials, "Trial count");
    cmd_mc->add_option("--seed", mc_seed, "RNG seed");
    cmd_mc->add_flag("--json", mc_json, "Emit JSON at full precision");
    cmd_mc->callback([&]() {
        Alphabet alphabet(mc_M, mc_p);
        UpperTriangular r = load_r_matrix(mc_matrix);
        double lambda = mc_lambda_set ? mc_lambda : lambda_star(mc_sigma, alphabet);
        Rng rng(mc_seed);
        McEstimate est = monte_carlo_sp(r, mc_sigma, lambda, alphabet, mc_trials, rng);
        if (mc_json) {
            JsonWriter w;
            w.begin_object();
            w.key("lambda").value(lambda);
            w.key("successes").value(est.successes);
            w.key("trials").value(est.trials);
            w.key("estimate").value(est.estimate());
            w.key("ci95_halfwidth").value(est.ci95_halfwidth());
            w.end_object();
            std::printf("%s\n", w.str().c_str());
        } else {
            std::printf("estimate %s\n", format_table(est.estimate()).c_str());
            std::printf("ci95     %s\n", format_table(est.ci95_halfwidth()).c_str());
            std::printf("trials   %lld\n", static_cast<long long>(est.trials));
        }
    });

    // bounds
    std::string bd_matrix;
    int bd_M = 4;
    double bd_p = 0.3, bd_sigma = 0.0;
    bool bd_json = false;
    auto* cmd_bd = app.add_subcommand("bounds", "Geometric-mean SP bound and its direction thresholds");
    cmd_bd->add_option("--matrix", bd_matrix, "Model matrix or R factor CSV")->required();
    cmd_bd->add_option("--M", bd_M, "Alphabet half-size M");
    cmd_bd->add_option("--p", bd_p, "Nonzero prior p");
    cmd_bd->add_option("--sigma", bd_sigma, "Noise standard deviation")->required();
    cmd_bd->add_flag("--json", bd_json, "Emit JSON at full precision");
    cmd_bd->callback([&]() {
        Alphabet alphabet(bd_M, bd_p);
        UpperTriangular r = load_r_matrix(bd_matrix);
        BoundReport rep = sp_bound(r, bd_sigma, alphabet);
        const char* side = rep.side == BoundSide::lower ? "lower"
                           : rep.side == BoundSide::upper ? "upper"
                                                          : "inconclusive";
        if (bd_json) {
            JsonWriter w;
            w.begin_object();
            w.key("mu1").value(rep.mu1);
            w.key("mu2").value(rep.mu2);
            w.key("omega").value(rep.omega);
            w.key("omega_bar").value(rep.omega_bar);
            w.key("side").value(side);
            w.key("bound_value").value(rep.bound_value);
            w.end_object();
            std::printf("%s\n", w.str().c_str());
        } else {
            std::printf("mu1         %s\n", format_table(rep.mu1).c_str());
            std::printf("mu2         %s\n", format_table(rep.mu2).c_str());
            std::printf("omega       %s\n", format_table(rep.omega).c_str());
            std::printf("omega_bar   %s\n", format_table(rep.omega_bar).c_str());
            std::printf("side        %s\n", side);
            std::printf("bound_value %s\n", format_table(rep.bound_value).c_str());
        }
    });

    // permute
    std::string pm_matrix, pm_strategy;
    int pm_M = 4;
    double pm_p = 0.3, pm_sigma = -1.0, pm_lambda = -1.0, pm_delta = 1.0;
    bool pm_sigma_set = false, pm_lambda_set = false;
    auto* cmd_pm = app.add_subcommand("permute", "Apply a column-permutation strategy; emits JSON");
    cmd_pm->add_option("--matrix", pm_matrix, "Model matrix or R factor CSV")->required();
    cmd_pm->add_option("--strategy", pm_strategy, "Strategy: lllp, sqrd, lsp, gsp, msp")
        ->required()
        ->check(CLI::IsMember({"lllp", "sqrd", "lsp", "gsp", "msp"}));
    cmd_pm->add_option("--delta", pm_delta, "Lovasz parameter for lllp");
    cmd_pm->add_option("--M", pm_M, "Alphabet half-size M");
    cmd_pm->add_option("--p", pm_p, "Nonzero prior p");
    cmd_pm->add_option("--sigma", pm_sigma, "Noise standard deviation (enables SP reporting)")
        ->each([&pm_sigma_set](const std::string&) { pm_sigma_set = true; });
    cmd_pm->add_option("--lambda", pm_lambda, "Regularization weight (default: MAP-matched)")
        ->each([&pm_lambda_set](const std::string&) { pm_lambda_set = true; });
    cmd_pm->callback([&]() {
        Matrix a = read_matrix_csv(pm_matrix);
        std::optional<SpContext> ctx;
        if (pm_sigma_set) {
            Alphabet alphabet(pm_M, pm_p);
            double lambda = pm_lambda_set ? pm_lambda : lambda_star(pm_sigma, alphabet);
            ctx = SpContext{pm_sigma, lambda, alphabet};
        }
        PermutationOutcome out;
        if (pm_strategy == "sqrd") {
            out = sqrd(a, ctx ? &*ctx : nullptr);
        } else {
            UpperTriangular r =
                probe_upper_triangular(a) ? UpperTriangular::from_matrix(a) : qr_factorize(a).r;
            if (pm_strategy == "lllp") {
                out = lll_p(r, pm_delta, ctx ? &*ctx : nullptr);
            } else if (pm_strategy == "lsp") {
                out = lsp_vblast(r, ctx ? &*ctx : nullptr);
            } else {
                if (!ctx)
                    throw std::invalid_argument(pm_strategy + " requires --sigma (and --M, --p)");
                out = pm_strategy == "gsp" ? gsp(r, ctx->sigma, ctx->lambda, ctx->alphabet)
                                           : msp(r, ctx->sigma, ctx->lambda, ctx->alphabet);
            }
        }
        JsonWriter w;
        w.begin_object();
        w.key("strategy").value(strategy_name(out.strategy));
        w.key("p");
        w.begin_array();
        for (int v : out.p.p) w.value(v);
        w.end_array();
        w.key("r_hat");
        emit_matrix(w, out.r_hat.to_matrix());
        w.key("sp_before");
        if (out.sp_before) {
            emit_sp_report(w, *out.sp_before);
        } else {
            w.value_null();
        }
        w.key("sp_after");
        if (out.sp_after) {
            emit_sp_report(w, *out.sp_after);
        } else {
            w.value_null();
        }
        w.end_object();
        std::printf("%s\n", w.str().c_str());
    });

    // experiment
    std::string ex_name, ex_config, ex_scale = "desk", ex_out;
    std::uint64_t ex_seed = 0;
    bool ex_seed_set = false;
    auto* cmd_ex = app.add_subcommand("experiment", "Run a full experiment and persist CSV + manifest");
    cmd_ex->add_option("name", ex_name, "figure1, lll-direction, sp-tables, or sp-change")
        ->required()
        ->check(CLI::IsMember({"figure1", "lll-direction", "sp-tables", "sp-change"}));
    cmd_ex->add_option("--config", ex_config, "JSON config file");
    cmd_ex->add_option("--seed", ex_seed, "RNG seed override")
        ->each([&ex_seed_set](const std::string&) { ex_seed_set = true; });
    cmd_ex->add_option("--scale", ex_scale, "Preset scale: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd_ex->add_option("--out", ex_out, "Output directory override");
    cmd_ex->callback([&]() {
        ExperimentConfig cfg = ex_scale == "paper" ? ExperimentConfig::paper_scale()
                                                   : ExperimentConfig::desk_scale();
        if (!ex_config.empty()) cfg = config_from_json(cfg, ex_config);
        if (ex_seed_set) cfg.seed = ex_seed;
        if (!ex_out.empty()) cfg.output_dir = ex_out;
        cfg.validate();
        ExperimentResult result;
        if (ex_name == "figure1") {
            result = run_figure1(cfg);
        } else if (ex_name == "lll-direction") {
            result = run_lll_direction(cfg);
        } else if (ex_name == "sp-tables") {
            result = run_sp_permutation_tables(cfg);
        } else {
            result = run_sp_change_tables(cfg);
        }
        for (const ResultTable& t : result.tables) print_table(t);
        std::string manifest = persist_results(cfg, ex_name, result);
        std::printf("manifest %s\n", manifest.c_str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const l0babai::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
