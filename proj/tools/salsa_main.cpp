// salsa: additive kernel ridge regression toolkit.
//
// Subcommands: synth, fit, predict, cv, diag, shrink, bench.
// Exit codes: 0 success, 2 validation failure, 3 numeric failure.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include <salsa/data.hpp>
#include <salsa/kernels.hpp>
#include <salsa/model_io.hpp>
#include <salsa/modelselect.hpp>
#include <salsa/parallel.hpp>
#include <salsa/salsa.hpp>
#include <salsa/shrink.hpp>
#include <salsa/synthetic.hpp>
#include <salsa/theory.hpp>

namespace {

constexpr const char* kToolVersion = "salsa 0.1.0";

using salsa::Matrix;
using salsa::Vector;

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        values.push_back(std::stod(cell));
    }
    if (values.empty()) throw salsa::ValidationError("empty numeric list: " + text);
    return values;
}

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> values;
    for (double v : parse_real_list(text)) values.push_back(static_cast<long>(v));
    return values;
}

salsa::KernelVariant parse_variant(const std::string& name) {
    if (name == "exact-order") return salsa::KernelVariant::ExactOrder;
    if (name == "all-orders-up-to") return salsa::KernelVariant::AllOrdersUpTo;
    throw salsa::ValidationError("unknown kernel variant: " + name);
}

salsa::TabularDataset dataset_from_matrix(const Matrix& x, const Vector& y) {
    salsa::TabularDataset ds;
    ds.x = x;
    ds.y = y;
    for (long c = 0; c < x.cols(); ++c) ds.feature_names.push_back("x" + std::to_string(c));
    ds.target_name = "y";
    return ds;
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    std::string generator;
    int dims = 15;
    int order = 3;
    long n = 0;
    std::uint64_t seed = 0;
    double noise_sd = 0.0;
    std::string out = "dataset";
};

int run_synth(const SynthArgs& args) {
    nlohmann::json meta;
    meta["tool"] = kToolVersion;
    meta["generator"] = args.generator;
    meta["seed"] = args.seed;
    meta["n"] = args.n;
    meta["rng"] = salsa::kRngAlgorithm;

    salsa::SyntheticDataset ds;
    nlohmann::json truth;
    if (args.generator == "bumps-additive" || args.generator == "bumps-full") {
        const int order = args.generator == "bumps-full" ? args.dims : args.order;
        const salsa::BumpFunctionSpec bump =
            salsa::BumpFunctionSpec::default_spec(order, args.seed);
        const salsa::AdditiveComposition f(bump, args.dims);
        ds = salsa::sample_dataset(f, args.dims, args.n, args.noise_sd, args.seed,
                                   args.generator);
        meta["D"] = args.dims;
        meta["d"] = order;
        meta["noise_sd"] = args.noise_sd;
        meta["terms"] = f.term_count();
        meta["bump"] = {{"weight1", bump.weight1},
                        {"weight2", bump.weight2},
                        {"bandwidth", bump.bump_bandwidth}};
        nlohmann::json centers = nlohmann::json::array();
        for (int k = 0; k < 3; ++k) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < bump.dim; ++j) row.push_back(bump.centers(k, j));
            centers.push_back(row);
        }
        meta["bump"]["centers"] = centers;
    } else if (args.generator == "spam-setting2") {
        const salsa::SpamSelectionData data = salsa::spam_selection_sample(args.n, args.seed);
        ds = data.data;
        meta["D"] = 50;
        meta["noise_sd"] = 1.0;
        truth["groups"] = data.true_groups;
    } else {
        throw salsa::ValidationError("--gen must be bumps-additive, bumps-full, or spam-setting2");
    }

    const std::string csv_path = args.out + ".csv";
    save_csv(csv_path, dataset_from_matrix(ds.x, ds.y));
    const std::string meta_path = args.out + ".meta.json";
    std::ofstream(meta_path) << meta.dump(2) << "\n";
    std::string truth_path;
    if (!truth.empty()) {
        truth_path = args.out + ".truth.json";
        std::ofstream(truth_path) << truth.dump(2) << "\n";
    }

    std::cout << "generator=" << args.generator << " n=" << ds.x.rows()
              << " D=" << ds.x.cols() << " seed=" << args.seed << "\n";
    std::cout << "wrote " << csv_path << " and " << meta_path;
    if (!truth_path.empty()) std::cout << " and " << truth_path;
    std::cout << "\n";
    return 0;
}

// ------------------------------------------------------------ fit/predict --

struct FitArgs {
    std::string data;
    std::string target = "y";
    char delimiter = ',';
    int order = 1;
    double lambda = 1e-3;
    double c = 20.0;
    std::string variant = "exact-order";
    int threads = 0;
    std::string out = "model.json";
};

int run_fit(const FitArgs& args) {
    salsa::CsvOptions csv;
    csv.delimiter = args.delimiter;
    const salsa::TabularDataset ds =
        salsa::load_csv(args.data, salsa::ColumnRef::parse(args.target), csv);

    salsa::SalsaConfig config;
    config.order = args.order;
    config.lambda = args.lambda;
    config.bandwidth_multiplier = args.c;
    config.variant = parse_variant(args.variant);
    config.threads = salsa::resolve_threads(args.threads);

    const salsa::FittedSalsa model = salsa::fit(ds.x, ds.y, config);
    salsa::save_model(args.out, model);
    std::cout << "training_mse=" << salsa::format_real(model.training_mse())
              << " jitter=" << salsa::format_real(model.jitter()) << "\n";
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct PredictArgs {
    std::string model;
    std::string data;
    std::string target;  // optional column to drop
    char delimiter = ',';
    int threads = 0;
    std::string out = "predictions.csv";
};

int run_predict(const PredictArgs& args) {
    const salsa::FittedSalsa model = salsa::load_model(args.model);

    Matrix x;
    salsa::CsvOptions csv;
    csv.delimiter = args.delimiter;
    if (!args.target.empty()) {
        const salsa::TabularDataset ds =
            salsa::load_csv(args.data, salsa::ColumnRef::parse(args.target), csv);
        x = ds.x;
    } else {
        // no target column: parse every column as a feature by borrowing the
        // loader with a sentinel target, then reattaching that column
        const salsa::TabularDataset ds =
            salsa::load_csv(args.data, salsa::ColumnRef::by_index(0), csv);
        x.resize(ds.rows(), ds.cols() + 1);
        x.col(0) = ds.y;
        x.rightCols(ds.cols()) = ds.x;
    }
    if (x.cols() != model.dims()) {
        throw salsa::DimensionMismatch(
            "predict: data has " + std::to_string(x.cols()) + " feature columns, model expects " +
            std::to_string(model.dims()));
    }

    const Vector pred = salsa::predict(model, x, salsa::resolve_threads(args.threads));
    salsa::save_matrix_csv(args.out, {"prediction"}, pred,
                           {}, {std::string(kToolVersion), "model=" + args.model});
    std::cout << "wrote " << args.out << " (" << pred.size() << " rows)\n";
    return 0;
}

// -------------------------------------------------------------------- cv ---

struct CvArgs {
    std::string data;
    std::string target = "y";
    char delimiter = ',';
    int folds = 5;
    std::uint64_t seed = 0;
    int max_order = 0;  // 0: up to D
    double grid_min = 1e-6;
    double grid_max = 1e1;
    int grid_size = 13;
    int patience = 1;
    double c = 20.0;
    std::string variant = "exact-order";
    int threads = 0;
    std::string report = "cv_report.csv";
    std::string refit;  // optional model output
};

int run_cv(const CvArgs& args) {
    if (args.folds < 2) throw salsa::ValidationError("--folds must be at least 2");
    salsa::CsvOptions csv;
    csv.delimiter = args.delimiter;
    const salsa::TabularDataset ds =
        salsa::load_csv(args.data, salsa::ColumnRef::parse(args.target), csv);

    salsa::SalsaConfig base;
    base.bandwidth_multiplier = args.c;
    base.variant = parse_variant(args.variant);
    base.threads = salsa::resolve_threads(args.threads);

    const salsa::LambdaGrid grid =
        salsa::LambdaGrid::log_spaced(args.grid_min, args.grid_max, args.grid_size);
    const int max_order = args.max_order > 0
                              ? args.max_order
                              : static_cast<int>(ds.cols());
    const salsa::DSearchResult result = salsa::search_order(
        ds.x, ds.y, grid, args.folds, max_order, args.seed, base, args.patience);

    Matrix table(static_cast<long>(result.report.cells.size()), 4);
    for (size_t i = 0; i < result.report.cells.size(); ++i) {
        const auto& cell = result.report.cells[i];
        table(static_cast<long>(i), 0) = cell.order;
        table(static_cast<long>(i), 1) = cell.lambda;
        table(static_cast<long>(i), 2) = cell.mean_mse;
        table(static_cast<long>(i), 3) = cell.std_error;
    }
    salsa::save_matrix_csv(
        args.report, {"d", "lambda", "mean_mse", "std_error"}, table, {},
        {std::string(kToolVersion), "seed=" + std::to_string(args.seed),
         "folds=" + std::to_string(args.folds),
         "chosen_d=" + std::to_string(result.chosen_order),
         "chosen_lambda=" + salsa::format_real(result.chosen_lambda)});

    std::cout << "chosen_d=" << result.chosen_order
              << " chosen_lambda=" << salsa::format_real(result.chosen_lambda) << "\n";
    std::cout << "wrote " << args.report << "\n";

    if (!args.refit.empty()) {
        salsa::SalsaConfig config = base;
        config.order = result.chosen_order;
        config.lambda = result.chosen_lambda;
        const salsa::FittedSalsa model = salsa::fit(ds.x, ds.y, config);
        salsa::save_model(args.refit, model);
        std::cout << "wrote " << args.refit << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------ diag ---

struct DiagArgs {
    std::string model = "polynomial";
    double smoothness = 2.0;
    int decay_order = 2;
    double scale = 1.0;
    double pi_tilde = 2.5066282746310002;  // sqrt(2 pi)
    double alpha_coef = 1.0;
    int ambient = 0;
    std::string n_grid = "100,1000,10000,100000,1000000";
    std::string lambda_grid;
    std::string out = "diag.csv";
};

int run_diag(const DiagArgs& args) {
    salsa::EigendecayModel model;
    if (args.model == "polynomial") {
        model = salsa::PolynomialDecay{args.smoothness, args.decay_order, args.scale};
    } else if (args.model == "gaussian") {
        model = salsa::GaussianTypeDecay{args.pi_tilde, args.alpha_coef, args.decay_order};
    } else {
        throw salsa::ValidationError("--model must be polynomial or gaussian");
    }
    std::visit([](const auto& m) { m.validate(); }, model);
    const std::optional<int> ambient =
        args.ambient > 0 ? std::optional<int>(args.ambient) : std::nullopt;

    std::vector<std::string> meta{std::string(kToolVersion), "model=" + args.model};

    if (!args.lambda_grid.empty()) {
        const std::vector<double> lambdas = parse_real_list(args.lambda_grid);
        Matrix table(static_cast<long>(lambdas.size()), 5);
        for (size_t i = 0; i < lambdas.size(); ++i) {
            const salsa::EffectiveDimReport report =
                salsa::gamma_single(model, lambdas[i], ambient);
            table(static_cast<long>(i), 0) = report.lambda;
            table(static_cast<long>(i), 1) = report.gamma_single;
            table(static_cast<long>(i), 2) = report.gamma_sum;
            table(static_cast<long>(i), 3) = static_cast<double>(report.truncation);
            table(static_cast<long>(i), 4) = report.tail_bound;
        }
        salsa::save_matrix_csv(args.out,
                               {"lambda", "gamma", "gamma_sum", "truncation", "tail_bound"},
                               table, {}, meta);
        std::cout << "wrote " << args.out << "\n";
        return 0;
    }

    const std::vector<long> grid = parse_long_list(args.n_grid);
    const std::vector<double> ratios = salsa::rate_band_check(model, grid);
    Matrix table(static_cast<long>(grid.size()), 4);
    for (size_t i = 0; i < grid.size(); ++i) {
        const double lambda = salsa::rate_lambda(model, grid[i]);
        table(static_cast<long>(i), 0) = static_cast<double>(grid[i]);
        table(static_cast<long>(i), 1) = lambda;
        table(static_cast<long>(i), 2) = salsa::gamma_single(model, lambda).gamma_single;
        table(static_cast<long>(i), 3) = ratios[i];
    }
    const double band = *std::max_element(ratios.begin(), ratios.end()) /
                        *std::min_element(ratios.begin(), ratios.end());
    meta.push_back("band_factor=" + salsa::format_real(band));
    salsa::save_matrix_csv(args.out, {"n", "lambda", "gamma", "ratio"}, table, {}, meta);
    std::cout << "band_factor=" << salsa::format_real(band) << "\n";
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- shrink ---

struct ShrinkArgs {
    std::string data;
    std::string target = "y";
    char delimiter = ',';
    std::string truth;
    std::string groups = "pairs-all";
    int head_dims = 12;
    int decoys = 54;
    std::uint64_t group_seed = 0;
    std::string solver = "accelproxgrad";
    bool accel = false;
    double lambda1 = 0.0;
    double lambda2 = -1.0;  // <0: run a path
    std::string path_grid;  // explicit list; default auto
    int path_points = 15;
    int max_iter = 2000;
    double tol = 1e-10;
    double c = 20.0;
    double tau = 1e-8;
    bool strict = false;
    std::string trace_out = "shrink_trace.csv";
    std::string path_out = "shrink_path.csv";
    std::string selection_out;
};

salsa::ShrinkSolver parse_solver(const std::string& name, bool accel) {
    if (name == "subgradient") return salsa::ShrinkSolver::Subgradient;
    if (name == "proxgrad") {
        return accel ? salsa::ShrinkSolver::AccelProxGrad : salsa::ShrinkSolver::ProxGrad;
    }
    if (name == "accelproxgrad") return salsa::ShrinkSolver::AccelProxGrad;
    if (name == "bcgd") return salsa::ShrinkSolver::Bcgd;
    if (name == "exactbcd") return salsa::ShrinkSolver::ExactBcd;
    throw salsa::ValidationError("unknown solver: " + name);
}

std::vector<int> truth_group_indices(const std::string& path,
                                     const std::vector<std::vector<int>>& groups) {
    std::ifstream in(path);
    if (!in) throw salsa::ValidationError("cannot open truth file: " + path);
    nlohmann::json doc;
    in >> doc;
    std::vector<int> indices;
    for (const auto& entry : doc.at("groups")) {
        std::vector<int> group = entry.get<std::vector<int>>();
        std::sort(group.begin(), group.end());
        bool found = false;
        for (size_t j = 0; j < groups.size(); ++j) {
            std::vector<int> candidate = groups[j];
            std::sort(candidate.begin(), candidate.end());
            if (candidate == group) {
                indices.push_back(static_cast<int>(j));
                found = true;
                break;
            }
        }
        if (!found) {
            std::cerr << "warning: truth group not in the candidate set\n";
        }
    }
    return indices;
}

int run_shrink(const ShrinkArgs& args) {
    salsa::CsvOptions csv;
    csv.delimiter = args.delimiter;
    const salsa::TabularDataset ds =
        salsa::load_csv(args.data, salsa::ColumnRef::parse(args.target), csv);

    std::vector<std::vector<int>> groups;
    if (args.groups == "singletons") {
        for (int i = 0; i < ds.cols(); ++i) groups.push_back({i});
    } else if (args.groups == "pairs-all") {
        groups = salsa::singleton_and_pair_groups(static_cast<int>(ds.cols()));
    } else if (args.groups == "pairs-restricted") {
        groups = salsa::restricted_pair_groups(static_cast<int>(ds.cols()), args.head_dims,
                                               args.decoys, args.group_seed);
    } else {
        throw salsa::ValidationError(
            "--groups must be singletons, pairs-all, or pairs-restricted");
    }

    const salsa::GroupKernelDesign design =
        salsa::build_gaussian_group_design(ds.x, ds.y, groups, args.c);

    salsa::ShrinkConfig config;
    config.solver = parse_solver(args.solver, args.accel);
    config.lambda1 = args.lambda1;
    config.max_iterations = args.max_iter;
    config.objective_tol = args.tol;

    std::vector<int> truth;
    if (!args.truth.empty()) truth = truth_group_indices(args.truth, groups);

    const std::vector<std::string> meta{
        std::string(kToolVersion), "solver=" + args.solver,
        "groups=" + args.groups + " (" + std::to_string(groups.size()) + ")",
        "lambda1=" + salsa::format_real(args.lambda1)};

    if (args.lambda2 >= 0.0) {
        config.lambda2 = args.lambda2;
        const salsa::SolverTrace trace = salsa::shrink_solve(design, config);

        Matrix table(static_cast<long>(trace.objectives.size()), 3);
        for (size_t i = 0; i < trace.objectives.size(); ++i) {
            table(static_cast<long>(i), 0) = static_cast<double>(i);
            table(static_cast<long>(i), 1) = trace.objectives[i];
            table(static_cast<long>(i), 2) = trace.elapsed_seconds[i];
        }
        salsa::save_matrix_csv(args.trace_out, {"iteration", "objective", "elapsed_seconds"},
                               table, {}, meta);
        std::cout << "final_objective=" << salsa::format_real(trace.final_objective)
                  << " iterations=" << trace.iterations << " termination=" << trace.termination
                  << "\n";
        const std::vector<int> selected = salsa::selected_groups(trace.alpha, args.tau);
        std::cout << "selected_groups=" << selected.size() << "\n";
        if (!truth.empty()) {
            const salsa::SelectionConfusion confusion = salsa::selection_confusion(
                selected, truth, design.group_count());
            std::cout << "tpr=" << confusion.tpr << " fpr=" << confusion.fpr << "\n";
        }
        std::cout << "wrote " << args.trace_out << "\n";
        if (trace.termination == "max-iterations") {
            std::cerr << "warning: iteration cap reached\n";
            if (args.strict) throw salsa::MaxIterations("shrink: iteration cap reached");
        }
        return 0;
    }

    // lambda2 path
    std::vector<double> grid;
    if (!args.path_grid.empty()) {
        grid = parse_real_list(args.path_grid);
    } else {
        const double top = 1.05 * salsa::zero_threshold(design);
        const double lo = top * 1e-3;
        const double step = std::pow(lo / top, 1.0 / (args.path_points - 1));
        double value = top;
        for (int i = 0; i < args.path_points; ++i) {
            grid.push_back(value);
            value *= step;
        }
    }
    const salsa::LambdaPathResult path = salsa::lambda_path(design, config, grid);

    Matrix table(path.group_norms.rows(), path.group_norms.cols() + 1);
    std::vector<std::string> names{"lambda2"};
    for (int j = 0; j < design.group_count(); ++j) {
        std::string name = "g";
        for (size_t k = 0; k < groups[static_cast<size_t>(j)].size(); ++k) {
            name += (k ? "_" : "") + std::to_string(groups[static_cast<size_t>(j)][k]);
        }
        names.push_back(name);
    }
    for (long i = 0; i < table.rows(); ++i) {
        table(i, 0) = path.lambda2_values[static_cast<size_t>(i)];
        table.row(i).tail(design.group_count()) = path.group_norms.row(i);
    }
    salsa::save_matrix_csv(args.path_out, names, table, {}, meta);
    std::cout << "wrote " << args.path_out << "\n";

    if (!truth.empty() || !args.selection_out.empty()) {
        Matrix sel(table.rows(), truth.empty() ? 2 : 5);
        for (long i = 0; i < table.rows(); ++i) {
            std::vector<int> selected;
            for (int j = 0; j < design.group_count(); ++j) {
                if (path.group_norms(i, j) > args.tau) selected.push_back(j);
            }
            sel(i, 0) = path.lambda2_values[static_cast<size_t>(i)];
            sel(i, 1) = static_cast<double>(selected.size());
            if (!truth.empty()) {
                const salsa::SelectionConfusion confusion =
                    salsa::selection_confusion(selected, truth, design.group_count());
                sel(i, 2) = confusion.tpr;
                sel(i, 3) = confusion.fpr;
                sel(i, 4) = static_cast<double>(confusion.false_positives);
                std::cout << "lambda2=" << salsa::format_real(sel(i, 0))
                          << " selected=" << selected.size() << " tpr=" << confusion.tpr
                          << " fpr=" << confusion.fpr << "\n";
            }
        }
        const std::string sel_path =
            args.selection_out.empty() ? args.path_out + ".selection.csv" : args.selection_out;
        const std::vector<std::string> sel_names =
            truth.empty() ? std::vector<std::string>{"lambda2", "selected"}
                          : std::vector<std::string>{"lambda2", "selected", "tpr", "fpr",
                                                     "false_positives"};
        salsa::save_matrix_csv(sel_path, sel_names, sel, {}, meta);
        std::cout << "wrote " << sel_path << "\n";
    }

    for (const auto& termination : path.termination) {
        if (termination == "max-iterations") {
            std::cerr << "warning: iteration cap reached on the path\n";
            if (args.strict) throw salsa::MaxIterations("shrink: iteration cap reached");
            break;
        }
    }
    return 0;
}

// ----------------------------------------------------------------- bench ---

struct BenchArgs {
    long n = 200;
    int order = 4;
    std::string dim_grid = "16,32,64";
    std::string girard_orders = "4,8,16";
    int girard_dims = 64;
    int reps = 3;
    std::uint64_t seed = 1;
    std::string out = "bench.csv";
};

double time_once(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double best_time(const std::function<void()>& fn, int reps) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) best = std::min(best, time_once(fn));
    return best;
}

int run_bench(const BenchArgs& args) {
    const std::vector<long> dims = parse_long_list(args.dim_grid);
    const std::vector<long> orders = parse_long_list(args.girard_orders);
    for (long d : dims) {
        if (args.order > d) throw salsa::ValidationError("--d exceeds a value in --D-grid");
    }
    for (long d : orders) {
        if (d > args.girard_dims) {
            throw salsa::ValidationError("--girard-d-grid exceeds --girard-D");
        }
    }

    std::vector<std::array<double, 6>> rows;  // kind, n, D, d, seconds, ratio

    // kernel-matrix assembly across the dimension grid
    double previous = 0.0;
    for (size_t i = 0; i < dims.size(); ++i) {
        const long dim = dims[i];
        Matrix x(args.n, dim);
        salsa::SplitMix64 rng(args.seed + i);
        for (long r = 0; r < args.n; ++r) {
            for (long c = 0; c < dim; ++c) x(r, c) = rng.uniform(-1.0, 1.0);
        }
        const salsa::EspKernelSpec spec(args.order, Vector::Ones(dim), 1.0);
        volatile double sink = 0.0;
        const double seconds = best_time(
            [&] {
                const Matrix k = salsa::kernel_matrix(x, spec, 1);
                sink = k(0, 0);
            },
            args.reps);
        const double ratio = i == 0 ? 1.0 : seconds / previous;
        rows.push_back({0.0, static_cast<double>(args.n), static_cast<double>(dim),
                        static_cast<double>(args.order), seconds, ratio});
        previous = seconds;
    }

    // per-call recurrence timings across the order grid
    previous = 0.0;
    salsa::SplitMix64 rng(args.seed);
    std::vector<double> s(static_cast<size_t>(args.girard_dims));
    for (auto& v : s) v = rng.uniform(0.0, 1.0);
    for (size_t i = 0; i < orders.size(); ++i) {
        const int order = static_cast<int>(orders[i]);
        salsa::EspWorkspace ws;
        volatile double sink = 0.0;
        const long calls = 20000;
        const double seconds = best_time(
            [&] {
                for (long c = 0; c < calls; ++c) {
                    salsa::girard_newton_esp(s, order, ws);
                    sink = ws.e[static_cast<size_t>(order)];
                }
            },
            args.reps) / static_cast<double>(calls);
        const double ratio = i == 0 ? 1.0 : seconds / previous;
        rows.push_back({1.0, 0.0, static_cast<double>(args.girard_dims),
                        static_cast<double>(order), seconds, ratio});
        previous = seconds;
    }

    Matrix table(static_cast<long>(rows.size()), 6);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < 6; ++c) table(static_cast<long>(i), c) = rows[i][static_cast<size_t>(c)];
    }
    salsa::save_matrix_csv(args.out, {"kind", "n", "D", "d", "seconds", "ratio_vs_prev"},
                           table, {},
                           {std::string(kToolVersion),
                            "kind: 0 = kernel-matrix assembly, 1 = per-call recurrence",
                            "seed=" + std::to_string(args.seed)});
    for (const auto& row : rows) {
        std::printf("%s n=%.0f D=%.0f d=%.0f seconds=%.6g ratio=%.3f\n",
                    row[0] == 0.0 ? "kernel-matrix" : "girard-newton", row[1], row[2], row[3],
                    row[4], row[5]);
    }
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SALSA: additive kernel ridge regression with ESP kernels"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
    synth_cmd->add_option("--gen", synth.generator,
                          "bumps-additive | bumps-full | spam-setting2")->required();
    synth_cmd->add_option("--n", synth.n, "sample count")->required();
    synth_cmd->add_option("--D", synth.dims, "ambient dimension");
    synth_cmd->add_option("--d", synth.order, "additive order of the target");
    synth_cmd->add_option("--seed", synth.seed, "rng seed");
    synth_cmd->add_option("--noise-sd", synth.noise_sd, "additive noise standard deviation");
    synth_cmd->add_option("--out", synth.out, "output path prefix");

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model to a CSV dataset");
    fit_cmd->add_option("--data", fit_args.data, "input CSV")->required();
    fit_cmd->add_option("--target", fit_args.target, "target column name or index");
    fit_cmd->add_option("--delimiter", fit_args.delimiter, "CSV delimiter");
    fit_cmd->add_option("--d", fit_args.order, "additive order")->required();
    fit_cmd->add_option("--lambda", fit_args.lambda, "ridge coefficient")->required();
    fit_cmd->add_option("--c", fit_args.c, "bandwidth multiplier");
    fit_cmd->add_option("--variant", fit_args.variant, "exact-order | all-orders-up-to");
    fit_cmd->add_option("--threads", fit_args.threads, "parallelism budget (default 1)");
    fit_cmd->add_option("--out", fit_args.out, "model output file");

    PredictArgs predict_args;
    CLI::App* predict_cmd = app.add_subcommand("predict", "predict with a saved model");
    predict_cmd->add_option("--model", predict_args.model, "model file")->required();
    predict_cmd->add_option("--data", predict_args.data, "input CSV")->required();
    predict_cmd->add_option("--target", predict_args.target,
                            "target column to drop (absent: all columns are features)");
    predict_cmd->add_option("--delimiter", predict_args.delimiter, "CSV delimiter");
    predict_cmd->add_option("--threads", predict_args.threads, "parallelism budget");
    predict_cmd->add_option("--out", predict_args.out, "predictions CSV");

    CvArgs cv_args;
    CLI::App* cv_cmd = app.add_subcommand("cv", "cross-validate over lambda and the order d");
    cv_cmd->add_option("--data", cv_args.data, "input CSV")->required();
    cv_cmd->add_option("--target", cv_args.target, "target column name or index");
    cv_cmd->add_option("--delimiter", cv_args.delimiter, "CSV delimiter");
    cv_cmd->add_option("--folds", cv_args.folds, "fold count (>= 2)");
    cv_cmd->add_option("--seed", cv_args.seed, "fold shuffle seed");
    cv_cmd->add_option("--dmax", cv_args.max_order, "largest order to consider");
    cv_cmd->add_option("--grid-min", cv_args.grid_min, "smallest lambda");
    cv_cmd->add_option("--grid-max", cv_args.grid_max, "largest lambda");
    cv_cmd->add_option("--grid-size", cv_args.grid_size, "lambda grid size");
    cv_cmd->add_option("--patience", cv_args.patience, "consecutive increases before stopping");
    cv_cmd->add_option("--c", cv_args.c, "bandwidth multiplier");
    cv_cmd->add_option("--variant", cv_args.variant, "kernel variant");
    cv_cmd->add_option("--threads", cv_args.threads, "parallelism budget");
    cv_cmd->add_option("--report", cv_args.report, "report CSV path");
    cv_cmd->add_option("--refit", cv_args.refit, "refit on all data and save the model here");

    DiagArgs diag_args;
    CLI::App* diag_cmd = app.add_subcommand("diag", "effective-dimension diagnostics");
    diag_cmd->add_option("--model", diag_args.model, "polynomial | gaussian");
    diag_cmd->add_option("--s", diag_args.smoothness, "smoothness (polynomial)");
    diag_cmd->add_option("--decay-d", diag_args.decay_order, "order d of the decay model");
    diag_cmd->add_option("--C", diag_args.scale, "eigenvalue scale (polynomial)");
    diag_cmd->add_option("--pi-tilde", diag_args.pi_tilde, "mass base (gaussian)");
    diag_cmd->add_option("--alpha-coef", diag_args.alpha_coef, "decay rate (gaussian)");
    diag_cmd->add_option("--ambient-D", diag_args.ambient, "ambient dimension for gamma_sum");
    diag_cmd->add_option("--n-grid", diag_args.n_grid, "comma list of sample sizes");
    diag_cmd->add_option("--lambda-grid", diag_args.lambda_grid,
                         "comma list of lambdas (overrides --n-grid mode)");
    diag_cmd->add_option("--out", diag_args.out, "output CSV");

    ShrinkArgs shrink_args;
    CLI::App* shrink_cmd =
        app.add_subcommand("shrink", "group-sparse additive solvers and paths");
    shrink_cmd->add_option("--data", shrink_args.data, "input CSV")->required();
    shrink_cmd->add_option("--target", shrink_args.target, "target column name or index");
    shrink_cmd->add_option("--delimiter", shrink_args.delimiter, "CSV delimiter");
    shrink_cmd->add_option("--truth", shrink_args.truth, "true-groups JSON for TPR/FPR");
    shrink_cmd->add_option("--groups", shrink_args.groups,
                           "singletons | pairs-all | pairs-restricted");
    shrink_cmd->add_option("--head-dims", shrink_args.head_dims,
                           "pairs-restricted: leading coordinates with all pairs");
    shrink_cmd->add_option("--decoys", shrink_args.decoys,
                           "pairs-restricted: random decoy pairs");
    shrink_cmd->add_option("--group-seed", shrink_args.group_seed, "decoy sampling seed");
    shrink_cmd->add_option("--solver", shrink_args.solver,
                           "subgradient | proxgrad | accelproxgrad | bcgd | exactbcd");
    shrink_cmd->add_flag("--accel", shrink_args.accel, "accelerate proxgrad");
    shrink_cmd->add_option("--lambda1", shrink_args.lambda1, "RKHS-norm weight");
    shrink_cmd->add_option("--lambda2", shrink_args.lambda2,
                           "group-lasso weight (absent: run a path)");
    shrink_cmd->add_option("--path-grid", shrink_args.path_grid,
                           "explicit decreasing lambda2 list");
    shrink_cmd->add_option("--path-points", shrink_args.path_points, "auto path length");
    shrink_cmd->add_option("--max-iter", shrink_args.max_iter, "iteration cap");
    shrink_cmd->add_option("--tol", shrink_args.tol, "objective tolerance");
    shrink_cmd->add_option("--c", shrink_args.c, "bandwidth multiplier");
    shrink_cmd->add_option("--tau", shrink_args.tau, "selection threshold on block norms");
    shrink_cmd->add_flag("--strict", shrink_args.strict, "exit 3 when the cap is reached");
    shrink_cmd->add_option("--trace", shrink_args.trace_out, "trace CSV (single solve)");
    shrink_cmd->add_option("--path-out", shrink_args.path_out, "path CSV");
    shrink_cmd->add_option("--selection-out", shrink_args.selection_out, "selection CSV");

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "timing tables for the kernel machinery");
    bench_cmd->add_option("--n", bench_args.n, "points for kernel-matrix assembly");
    bench_cmd->add_option("--d", bench_args.order, "kernel order");
    bench_cmd->add_option("--D-grid", bench_args.dim_grid, "comma list of dimensions");
    bench_cmd->add_option("--girard-d-grid", bench_args.girard_orders,
                          "comma list of recurrence orders");
    bench_cmd->add_option("--girard-D", bench_args.girard_dims, "recurrence dimension");
    bench_cmd->add_option("--reps", bench_args.reps, "repetitions (best-of)");
    bench_cmd->add_option("--seed", bench_args.seed, "rng seed");
    bench_cmd->add_option("--out", bench_args.out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (predict_cmd->parsed()) return run_predict(predict_args);
        if (cv_cmd->parsed()) return run_cv(cv_args);
        if (diag_cmd->parsed()) return run_diag(diag_args);
        if (shrink_cmd->parsed()) return run_shrink(shrink_args);
        if (bench_cmd->parsed()) return run_bench(bench_args);
    } catch (const salsa::NumericError& err) {
        std::cerr << "numeric failure: " << err.what() << "\n";
        return 3;
    } catch (const salsa::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
