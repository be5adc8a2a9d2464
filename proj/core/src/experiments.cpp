#include "l0babai/experiments.hpp"

#include "l0babai/detectors.hpp"
#include "l0babai/errors.hpp"
#include "l0babai/io.hpp"
#include "l0babai/model.hpp"
#include "l0babai/qr.hpp"
#include "l0babai/random_matrices.hpp"
#include "l0babai/sp_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <stdexcept>

namespace l0babai {

std::string matrix_type_name(MatrixType t) {
    return t == MatrixType::type1 ? "type1" : "type2";
}

ExperimentConfig ExperimentConfig::desk_scale() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::paper_scale() {
    ExperimentConfig c;
    c.n_matrices = 1000;
    c.n_x = 100;
    c.n_noise = 100;
    return c;
}

void ExperimentConfig::validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (m < n) throw std::invalid_argument("m must be >= n");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (n_matrices < 1 || n_x < 1 || n_noise < 1)
        throw std::invalid_argument("counts must be >= 1");
    double p_max = Alphabet::p_max(M);
    for (double p : p_list)
        if (!(p > 0.0) || p > p_max)
            throw std::invalid_argument("p must lie in (0, 2M/(2M+1)]");
    for (double s : sigma_list)
        if (!(s > 0.0)) throw std::invalid_argument("sigma values must be positive");
    for (const auto& s : strategies)
        if (s != "no" && !strategy_from_name(s))
            throw std::invalid_argument("unknown strategy: " + s);
}

double McEstimate::ci95_halfwidth() const {
    if (trials <= 0) return 0.0;
    double e = estimate();
    return 1.96 * std::sqrt(e * (1.0 - e) / static_cast<double>(trials));
}

namespace {

// Derives one independent substream per (role, type, p, sigma, matrix, chunk).
std::uint64_t block_id(std::uint64_t role, std::uint64_t type, std::uint64_t p_idx,
                       std::uint64_t sigma_idx, std::uint64_t mat, std::uint64_t chunk) {
    return (role << 56) | (type << 48) | (p_idx << 40) | (sigma_idx << 32) | (mat << 16) | chunk;
}

Matrix generate_by_type(MatrixType t, int n, Rng& rng) {
    return t == MatrixType::type1 ? generate_type1(n, rng) : generate_type2(n, rng);
}

std::vector<MatrixType> types_of(const ExperimentConfig& config) {
    if (config.matrix_type) return {*config.matrix_type};
    return {MatrixType::type1, MatrixType::type2};
}

std::vector<double> tri_times_int(const UpperTriangular& r, const std::vector<int>& x) {
    const int n = r.n();
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = i; j < n; ++j) s += r(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> triT_times(const UpperTriangular& r, const std::vector<double>& v) {
    const int n = r.n();
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i <= j; ++i) s += r(i, j) * v[i];
        w[j] = s;
    }
    return w;
}

PermutationOutcome apply_strategy(const std::string& s, const Matrix& a, const UpperTriangular& r,
                                  double sigma, double lambda, const Alphabet& alphabet) {
    if (s == "no") {
        PermutationOutcome o;
        o.p = PermutationVector::identity(r.n());
        o.r_hat = r;
        return o;
    }
    if (s == "lllp") return lll_p(r);
    if (s == "sqrd") return sqrd(a);
    if (s == "lsp") return lsp_vblast(r);
    if (s == "gsp") return gsp(r, sigma, lambda, alphabet);
    if (s == "msp") return msp(r, sigma, lambda, alphabet);
    throw std::invalid_argument("unknown strategy: " + s);
}

// Reduced observation of the permuted problem without forming Q:
// R P = Q' R_hat, so Q'^T ytilde = R_hat^{-T} P^T R^T ytilde.
std::vector<double> permuted_observation(const std::vector<double>& w,
                                         const PermutationOutcome& out) {
    const int n = out.r_hat.n();
    std::vector<double> w_perm(n);
    for (int t = 0; t < n; ++t) w_perm[t] = w[out.p.orig0(t)];
    return solve_transposed(out.r_hat, w_perm);
}

bool matches_permuted(const std::vector<int>& x_hat, const std::vector<int>& x_star,
                      const PermutationVector& p) {
    for (size_t t = 0; t < x_hat.size(); ++t)
        if (x_hat[t] != x_star[p.orig0(static_cast<int>(t))]) return false;
    return true;
}

std::string fmt(double v) { return format_full(v); }

} // namespace

McEstimate monte_carlo_sp(const UpperTriangular& r, double sigma, double lambda,
                          const Alphabet& alphabet, std::int64_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    const int n = r.n();
    McEstimate est;
    est.trials = trials;
    std::vector<double> y(n);
    for (std::int64_t t = 0; t < trials; ++t) {
        std::vector<int> x = sample_x_star(n, alphabet, rng);
        y = tri_times_int(r, x);
        for (int i = 0; i < n; ++i) y[i] += sigma * rng.gaussian();
        DetectionResult det = babai_regularized(r, y, lambda, alphabet);
        if (det.x_hat == x) ++est.successes;
    }
    return est;
}

std::vector<int> brute_force_map(const UpperTriangular& r, const std::vector<double>& y_tilde,
                                 double lambda, const Alphabet& alphabet) {
    const int n = r.n();
    if (static_cast<int>(y_tilde.size()) != n)
        throw std::invalid_argument("observation length must match matrix order");
    double total = 1.0;
    for (int i = 0; i < n; ++i) {
        total *= 2.0 * alphabet.M() + 1.0;
        if (total > 1e7) throw std::invalid_argument("search space exceeds the 1e7 guard");
    }

    const std::vector<int> members = alphabet.sorted_members();
    std::vector<int> cur(n, 0);
    std::vector<int> best;
    double best_obj = std::numeric_limits<double>::infinity();

    std::function<void(int, double)> descend = [&](int k, double cost) {
        if (cost > best_obj) return;  // equal cost stays alive for the lex tie-break
        if (k < 0) {
            if (cost < best_obj ||
                (cost == best_obj &&
                 (best.empty() || std::lexicographical_compare(cur.begin(), cur.end(),
                                                               best.begin(), best.end())))) {
                best_obj = cost;
                best = cur;
            }
            return;
        }
        double s = y_tilde[k];
        for (int j = k + 1; j < n; ++j) s -= r(k, j) * cur[j];
        for (int q : members) {
            double resid = s - r.diag(k) * q;
            cur[k] = q;
            descend(k - 1, cost + 0.5 * resid * resid + (q != 0 ? lambda : 0.0));
        }
        cur[k] = 0;
    };
    descend(n - 1, 0.0);
    return best;
}

ExperimentResult run_figure1(const ExperimentConfig& config) {
    config.validate();
    std::vector<double> p_list = config.p_list.empty() ? std::vector<double>{0.3, 0.7} : config.p_list;
    std::vector<double> sigmas = config.sigma_list;
    if (sigmas.empty())
        sigmas = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};

    ResultTable table;
    table.name = "figure1";
    table.header = {"matrix_type", "p", "sigma", "series", "value"};

    for (MatrixType type : types_of(config)) {
        std::uint64_t t_idx = type == MatrixType::type1 ? 0 : 1;
        for (size_t p_idx = 0; p_idx < p_list.size(); ++p_idx) {
            Alphabet alphabet(config.M, p_list[p_idx]);
            for (size_t s_idx = 0; s_idx < sigmas.size(); ++s_idx) {
                double sigma = sigmas[s_idx];
                double lambda = lambda_star(sigma, alphabet);
                double sum_rb = 0.0, sum_bb = 0.0;
                McEstimate mc_rb, mc_bb;
                for (int mat = 0; mat < config.n_matrices; ++mat) {
                    Rng mrng(config.seed, block_id(0, t_idx, p_idx, s_idx, mat, 0));
                    UpperTriangular r =
                        qr_factorize(generate_by_type(type, config.n, mrng)).r;
                    sum_rb += sp_rb(r, sigma, lambda, alphabet).total;
                    sum_bb += sp_bb(r, sigma, alphabet).total;
                    for (int xi = 0; xi < config.n_x; ++xi) {
                        Rng trng(config.seed, block_id(1, t_idx, p_idx, s_idx, mat, xi));
                        std::vector<int> x = sample_x_star(config.n, alphabet, trng);
                        std::vector<double> y0 = tri_times_int(r, x);
                        std::vector<double> y(config.n);
                        for (int ni = 0; ni < config.n_noise; ++ni) {
                            for (int i = 0; i < config.n; ++i)
                                y[i] = y0[i] + sigma * trng.gaussian();
                            if (babai_regularized(r, y, lambda, alphabet).x_hat == x)
                                ++mc_rb.successes;
                            if (babai_box(r, y, alphabet).x_hat == x) ++mc_bb.successes;
                            ++mc_rb.trials;
                            ++mc_bb.trials;
                        }
                    }
                }
                double denom = static_cast<double>(config.n_matrices);
                std::string tname = matrix_type_name(type);
                std::string ps = fmt(p_list[p_idx]);
                std::string ss = fmt(sigma);
                table.rows.push_back({tname, ps, ss, "sp_rb_theory", fmt(sum_rb / denom)});
                table.rows.push_back({tname, ps, ss, "sp_bb_theory", fmt(sum_bb / denom)});
                table.rows.push_back({tname, ps, ss, "mc_rb", fmt(mc_rb.estimate())});
                table.rows.push_back({tname, ps, ss, "mc_rb_ci95", fmt(mc_rb.ci95_halfwidth())});
                table.rows.push_back({tname, ps, ss, "mc_bb", fmt(mc_bb.estimate())});
                table.rows.push_back({tname, ps, ss, "mc_bb_ci95", fmt(mc_bb.ci95_halfwidth())});
            }
        }
    }
    return ExperimentResult{{table}};
}

ExperimentResult run_lll_direction(const ExperimentConfig& config) {
    config.validate();
    std::vector<double> p_list = config.p_list.empty() ? std::vector<double>{0.3, 0.7} : config.p_list;
    const double sqrt2 = std::sqrt(2.0);

    ResultTable table;
    table.name = "lll_direction";
    table.header = {"matrix_type", "p",
                    "sigma_branch", "strict_increase", "strict_decrease", "no_change", "matrices"};

    for (MatrixType type : types_of(config)) {
        std::uint64_t t_idx = type == MatrixType::type1 ? 0 : 1;
        for (size_t p_idx = 0; p_idx < p_list.size(); ++p_idx) {
            Alphabet alphabet(config.M, p_list[p_idx]);
            auto [mu1, mu2] = mu_roots_cached(alphabet);
            std::int64_t tally[2][3] = {{0, 0, 0}, {0, 0, 0}};
            for (int mat = 0; mat < config.n_matrices; ++mat) {
                Rng mrng(config.seed, block_id(2, t_idx, p_idx, 0, mat, 0));
                UpperTriangular r = qr_factorize(generate_by_type(type, config.n, mrng)).r;
                PermutationOutcome out = lll_p(r);
                double sigma_branch[2] = {r.min_diag() / (2.0 * sqrt2 * mu2),
                                          sqrt2 * r.max_diag() / mu1};
                for (int b = 0; b < 2; ++b) {
                    double sigma = sigma_branch[b];
                    double lambda = lambda_star(sigma, alphabet);
                    double before = sp_rb(r, sigma, lambda, alphabet).total;
                    double after = sp_rb(out.r_hat, sigma, lambda, alphabet).total;
                    if (after > before)
                        ++tally[b][0];
                    else if (after < before)
                        ++tally[b][1];
                    else
                        ++tally[b][2];
                }
            }
            for (int b = 0; b < 2; ++b) {
                table.rows.push_back({matrix_type_name(type), fmt(p_list[p_idx]),
                                      b == 0 ? "sigma1" : "sigma2", std::to_string(tally[b][0]),
                                      std::to_string(tally[b][1]), std::to_string(tally[b][2]),
                                      std::to_string(config.n_matrices)});
            }
        }
    }
    return ExperimentResult{{table}};
}

ExperimentResult run_sp_permutation_tables(const ExperimentConfig& config) {
    config.validate();
    std::vector<double> p_list = config.p_list.empty() ? std::vector<double>{0.3} : config.p_list;
    std::vector<std::string> strategies = config.strategies.empty()
        ? std::vector<std::string>{"no", "lllp", "sqrd", "lsp", "gsp", "msp"}
        : config.strategies;

    ResultTable table;
    table.name = "sp_permutation";
    table.header = {"matrix_type", "p", "sigma", "strategy", "detector", "estimate", "ci95", "trials"};

    for (MatrixType type : types_of(config)) {
        std::uint64_t t_idx = type == MatrixType::type1 ? 0 : 1;
        std::vector<double> sigmas = config.sigma_list;
        if (sigmas.empty())
            sigmas = type == MatrixType::type1
                ? std::vector<double>{0.05, 0.10, 0.50, 0.80, 1.00, 1.50, 2.00}
                : std::vector<double>{0.01, 0.03, 0.05, 0.10, 0.20, 0.30, 0.50};
        for (size_t p_idx = 0; p_idx < p_list.size(); ++p_idx) {
            Alphabet alphabet(config.M, p_list[p_idx]);
            for (size_t s_idx = 0; s_idx < sigmas.size(); ++s_idx) {
                double sigma = sigmas[s_idx];
                double lambda = lambda_star(sigma, alphabet);
                const size_t n_strat = strategies.size();
                std::vector<McEstimate> rb(n_strat), bb(n_strat);
                std::vector<bool> with_bb(n_strat);
                for (size_t si = 0; si < n_strat; ++si)
                    with_bb[si] = strategies[si] == "no" || strategies[si] == "lllp" ||
                                  strategies[si] == "sqrd" || strategies[si] == "lsp";

                for (int mat = 0; mat < config.n_matrices; ++mat) {
                    Rng mrng(config.seed, block_id(3, t_idx, p_idx, s_idx, mat, 0));
                    Matrix a = generate_by_type(type, config.n, mrng);
                    UpperTriangular r = qr_factorize(a).r;
                    std::vector<PermutationOutcome> outs;
                    outs.reserve(n_strat);
                    bool any_permuted = false;
                    for (const auto& s : strategies) {
                        outs.push_back(apply_strategy(s, a, r, sigma, lambda, alphabet));
                        any_permuted = any_permuted || !outs.back().p.is_identity();
                    }
                    std::vector<double> y(config.n);
                    for (int xi = 0; xi < config.n_x; ++xi) {
                        Rng trng(config.seed, block_id(4, t_idx, p_idx, s_idx, mat, xi));
                        std::vector<int> x = sample_x_star(config.n, alphabet, trng);
                        std::vector<double> y0 = tri_times_int(r, x);
                        for (int ni = 0; ni < config.n_noise; ++ni) {
                            for (int i = 0; i < config.n; ++i)
                                y[i] = y0[i] + sigma * trng.gaussian();
                            std::vector<double> w;
                            if (any_permuted) w = triT_times(r, y);
                            for (size_t si = 0; si < n_strat; ++si) {
                                const PermutationOutcome& out = outs[si];
                                const std::vector<double>& obs =
                                    out.p.is_identity() ? y : permuted_observation(w, out);
                                auto det_rb = babai_regularized(out.r_hat, obs, lambda, alphabet);
                                if (matches_permuted(det_rb.x_hat, x, out.p)) ++rb[si].successes;
                                ++rb[si].trials;
                                if (with_bb[si]) {
                                    auto det_bb = babai_box(out.r_hat, obs, alphabet);
                                    if (matches_permuted(det_bb.x_hat, x, out.p))
                                        ++bb[si].successes;
                                    ++bb[si].trials;
                                }
                            }
                        }
                    }
                }
                for (size_t si = 0; si < n_strat; ++si) {
                    table.rows.push_back({matrix_type_name(type), fmt(p_list[p_idx]), fmt(sigma),
                                          strategies[si], "rb", fmt(rb[si].estimate()),
                                          fmt(rb[si].ci95_halfwidth()),
                                          std::to_string(rb[si].trials)});
                    if (with_bb[si])
                        table.rows.push_back({matrix_type_name(type), fmt(p_list[p_idx]),
                                              fmt(sigma), strategies[si], "bb",
                                              fmt(bb[si].estimate()),
                                              fmt(bb[si].ci95_halfwidth()),
                                              std::to_string(bb[si].trials)});
                }
            }
        }
    }
    return ExperimentResult{{table}};
}

ExperimentResult run_sp_change_tables(const ExperimentConfig& config) {
    config.validate();
    std::vector<double> p_list = config.p_list.empty() ? std::vector<double>{0.3, 0.7} : config.p_list;
    std::vector<double> sigmas =
        config.sigma_list.empty() ? std::vector<double>{0.2, 0.5, 1.5} : config.sigma_list;
    std::vector<std::string> strategies = config.strategies.empty()
        ? std::vector<std::string>{"lllp", "sqrd", "lsp", "gsp", "msp"}
        : config.strategies;

    ResultTable table;
    table.name = "sp_change";
    table.header = {"matrix_type", "p", "sigma", "strategy",
                    "strict_increase", "strict_decrease", "no_change", "matrices"};

    for (MatrixType type : types_of(config)) {
        std::uint64_t t_idx = type == MatrixType::type1 ? 0 : 1;
        for (size_t p_idx = 0; p_idx < p_list.size(); ++p_idx) {
            Alphabet alphabet(config.M, p_list[p_idx]);
            for (size_t s_idx = 0; s_idx < sigmas.size(); ++s_idx) {
                double sigma = sigmas[s_idx];
                double lambda = lambda_star(sigma, alphabet);
                std::vector<std::array<std::int64_t, 3>> tally(strategies.size(), {0, 0, 0});
                for (int mat = 0; mat < config.n_matrices; ++mat) {
                    Rng mrng(config.seed, block_id(5, t_idx, p_idx, s_idx, mat, 0));
                    Matrix a = generate_by_type(type, config.n, mrng);
                    UpperTriangular r = qr_factorize(a).r;
                    double before = sp_rb(r, sigma, lambda, alphabet).total;
                    for (size_t si = 0; si < strategies.size(); ++si) {
                        PermutationOutcome out =
                            apply_strategy(strategies[si], a, r, sigma, lambda, alphabet);
                        double after = sp_rb(out.r_hat, sigma, lambda, alphabet).total;
                        if (after > before)
                            ++tally[si][0];
                        else if (after < before)
                            ++tally[si][1];
                        else
                            ++tally[si][2];
                    }
                }
                for (size_t si = 0; si < strategies.size(); ++si) {
                    table.rows.push_back({matrix_type_name(type), fmt(p_list[p_idx]), fmt(sigma),
                                          strategies[si], std::to_string(tally[si][0]),
                                          std::to_string(tally[si][1]),
                                          std::to_string(tally[si][2]),
                                          std::to_string(config.n_matrices)});
                }
            }
        }
    }
    return ExperimentResult{{table}};
}

std::string persist_results(const ExperimentConfig& config, const std::string& experiment_name,
                            const ExperimentResult& result) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(config.output_dir) / experiment_name;
    fs::create_directories(dir);

    JsonWriter w;
    w.begin_object();
    w.key("experiment").value(experiment_name);
    w.key("seed").value(static_cast<std::uint64_t>(config.seed));
    w.key("config").begin_object();
    w.key("matrix_type")
        .value(config.matrix_type ? matrix_type_name(*config.matrix_type) : "both");
    w.key("n").value(config.n);
    w.key("m").value(config.m);
    w.key("M").value(config.M);
    w.key("p_list").begin_array();
    for (double p : config.p_list) w.value(p);
    w.end_array();
    w.key("sigma_list").begin_array();
    for (double s : config.sigma_list) w.value(s);
    w.end_array();
    w.key("n_matrices").value(config.n_matrices);
    w.key("n_x").value(config.n_x);
    w.key("n_noise").value(config.n_noise);
    w.key("strategies").begin_array();
    for (const auto& s : config.strategies) w.value(s);
    w.end_array();
    w.end_object();

    w.key("files").begin_array();
    for (const ResultTable& table : result.tables) {
        std::string content = table_to_csv(table.header, table.rows);
        fs::path file = dir / (table.name + ".csv");
        write_text_file(file.string(), content);
        w.begin_object();
        w.key("name").value(table.name + ".csv");
        w.key("rows").value(static_cast<std::int64_t>(table.rows.size()));
        w.key("git_blob_hash").value(git_blob_hash(content));
        w.end_object();
    }
    w.end_array();
    w.end_object();

    fs::path manifest = dir / "manifest.json";
    write_text_file(manifest.string(), w.str() + "\n");
    return manifest.string();
}

} // namespace l0babai
