// archpursuit command-line driver.
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "archpursuit/errors.hpp"
#include "archpursuit/experiments.hpp"
#include "archpursuit/generators.hpp"
#include "archpursuit/geometry.hpp"
#include "archpursuit/io.hpp"
#include "archpursuit/pursuit.hpp"

using namespace archpursuit;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputFlags {
    std::string path;
    bool skip_header = false;
    bool transpose = false;

    void add(CLI::App* cmd) {
        cmd->add_option("-i,--input", path, "matrix file (.csv, or .bin/.apmx binary)")->required();
        cmd->add_flag("--skip-header", skip_header, "ignore the first CSV line");
        cmd->add_flag("--transpose", transpose, "treat columns of the file as data points");
    }

    Matrix load() const {
        CsvOptions opt;
        opt.skip_header = skip_header;
        Matrix X = load_matrix(path, opt);
        return transpose ? archpursuit::transpose(X) : X;
    }
};

// First column of a CSV of row indices; a non-numeric first line is a header.
std::vector<std::size_t> read_indices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string first;
    std::getline(in, first);
    CsvOptions opt;
    opt.skip_header = first.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_") != std::string::npos;
    const Matrix m = load_csv(path, opt);
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double v = m(r, 0);
        if (v < 0 || v != std::floor(v)) throw FormatError("index file holds a non-index value", r + 1, 1);
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void write_indices(const std::vector<std::size_t>& idx, const std::string& path) {
    Matrix m(idx.size(), 1);
    for (std::size_t i = 0; i < idx.size(); ++i) m(i, 0) = static_cast<double>(idx[i]);
    save_csv(m, path, {"row"});
}

void print_table(const Matrix& t, const std::vector<std::string>& header) {
    write_csv(t, std::cout, header);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme points and separable factorizations by random linear functionals"};
    app.require_subcommand(1);

    // sweep
    SweepSpec sweep;
    std::string sweep_gen = "uniform", sweep_out, sweep_iso;
    auto* c_sweep = app.add_subcommand("sweep", "exact-recovery rate over (k, m) on separable instances");
    c_sweep->add_option("--k", sweep.k_values, "archetype counts")->check(CLI::PositiveNumber);
    c_sweep->add_option("--c", sweep.multipliers, "multipliers c, m = ceil(c k ln k)")->check(CLI::PositiveNumber);
    c_sweep->add_option("--trials", sweep.trials)->check(CLI::PositiveNumber);
    c_sweep->add_option("--n", sweep.n)->check(CLI::PositiveNumber);
    c_sweep->add_option("--p", sweep.p)->check(CLI::PositiveNumber);
    c_sweep->add_option("--generator", sweep_gen)->check(CLI::IsMember({"uniform", "hilbert"}));
    c_sweep->add_option("--seed", sweep.seed);
    c_sweep->add_option("-o,--out", sweep_out, "grid CSV (k, c, m, trials, fraction); stdout if absent");
    c_sweep->add_option("--isocline", sweep_iso, "CSV (k, reference_m, c95, m95)");

    // noise and glasso-noise
    NoiseSpec noise;
    std::string noise_out;
    auto add_noise_flags = [&](CLI::App* cmd) {
        cmd->add_option("--k", noise.k)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
        cmd->add_option("--p", noise.p)->check(CLI::PositiveNumber);
        cmd->add_option("--c", noise.m_multipliers, "multipliers c, m = ceil(c k ln k)")->check(CLI::PositiveNumber);
        cmd->add_option("--eps", noise.epsilons, "noise levels")->check(CLI::NonNegativeNumber);
        cmd->add_option("--trials", noise.trials)->check(CLI::PositiveNumber);
        cmd->add_option("--select", noise.select, "rows kept for the factorization")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", noise.seed);
        cmd->add_option("-o,--out", noise_out, "CSV (m, epsilon, mean_residual, log10_mean_residual)");
    };
    auto* c_noise = app.add_subcommand("noise", "residual grid over (m, epsilon) with vote selection");
    add_noise_flags(c_noise);
    auto* c_gnoise = app.add_subcommand("glasso-noise", "residual grid over (m, epsilon) with group-lasso selection");
    add_noise_flags(c_gnoise);
    c_gnoise->add_option("--tol", noise.glasso_tol, "relative objective tolerance per lambda")
        ->check(CLI::PositiveNumber);
    c_gnoise->add_option("--lambdas", noise.lambda_count)->check(CLI::Range(2, 100000));

    // scree
    InputFlags scree_in;
    std::size_t scree_m = 100, scree_repeats = 10;
    std::uint64_t scree_seed = 0;
    std::string scree_out;
    auto* c_scree = app.add_subcommand("scree", "sorted normalized vote fractions, one row per repeat");
    scree_in.add(c_scree);
    c_scree->add_option("--m", scree_m)->check(CLI::PositiveNumber);
    c_scree->add_option("--repeats", scree_repeats)->check(CLI::PositiveNumber);
    c_scree->add_option("--seed", scree_seed);
    c_scree->add_option("-o,--out", scree_out);

    // classify
    InputFlags cls_in;
    std::string cls_archetypes, cls_indices, cls_out;
    auto* c_cls = app.add_subcommand("classify", "label each row with its nearest archetype");
    cls_in.add(c_cls);
    auto* o_arch = c_cls->add_option("--archetypes", cls_archetypes, "matrix of archetype rows");
    auto* o_idx = c_cls->add_option("--indices", cls_indices, "CSV of archetype row indices into the input");
    o_arch->excludes(o_idx);
    c_cls->add_option("-o,--out", cls_out, "CSV (row, label)");

    // factorize
    InputFlags fac_in;
    FactorizeOptions fac;
    std::string fac_select = "vote", fac_dir = "factorization";
    auto* c_fac = app.add_subcommand("factorize", "pursuit, selection and NNLS weights in one run");
    fac_in.add(c_fac);
    auto* o_m = c_fac->add_option("--m", fac.m, "functionals (fixed) or batch size (adaptive)")
                    ->check(CLI::PositiveNumber);
    std::size_t fac_batch = 0;
    auto* o_batch = c_fac->add_option("--batch", fac_batch, "functionals per adaptive round")
                        ->check(CLI::PositiveNumber);
    auto* o_adaptive = c_fac->add_flag("--adaptive", fac.adaptive, "stop once a round finds nothing new");
    c_fac->add_option("--patience", fac.patience, "idle rounds before stopping")->check(CLI::PositiveNumber);
    auto* o_select = c_fac->add_option("--select", fac_select)->check(CLI::IsMember({"vote", "glasso"}));
    auto* o_k = c_fac->add_option("--k", fac.k, "rows to keep; default keeps every found row")
                    ->check(CLI::PositiveNumber);
    c_fac->add_option("--workers", fac.workers, "simulated workers")->check(CLI::PositiveNumber);
    c_fac->add_flag("--normalize", fac.normalize, "pursue on unit-norm rows");
    c_fac->add_option("--seed", fac.seed);
    c_fac->add_option("-o,--out-dir", fac_dir, "directory for indices.csv, W.csv, summary.csv, comm.csv");

    // diagnose
    InputFlags diag_in;
    std::string diag_indices, diag_json, diag_table;
    std::size_t diag_samples = 100000, diag_m = 1000;
    std::uint64_t diag_seed = 0;
    double diag_delta = 0.05;
    auto* c_diag = app.add_subcommand("diagnose", "solid angles, simplicial constants and the predicted m");
    diag_in.add(c_diag);
    c_diag->add_option("--indices", diag_indices, "extreme rows; found by pursuit with --m if absent");
    c_diag->add_option("--m", diag_m, "functionals for locating extreme rows")->check(CLI::PositiveNumber);
    c_diag->add_option("--samples", diag_samples)->check(CLI::PositiveNumber);
    c_diag->add_option("--seed", diag_seed);
    c_diag->add_option("--delta", diag_delta)->check(CLI::Range(0.0, 1.0));
    c_diag->add_option("--json", diag_json, "report file; stdout if absent");
    c_diag->add_option("--table", diag_table, "CSV (index, omega, std_error, alpha)");

    // generate
    std::string gen_kind = "uniform", gen_out, gen_truth, gen_w;
    std::size_t gen_n = 500, gen_p = 1000, gen_k = 20;
    double gen_eps = 0.0;
    std::uint64_t gen_seed = 0;
    auto* c_gen = app.add_subcommand("generate", "write a synthetic instance");
    c_gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"uniform", "hilbert", "pairs"}));
    c_gen->add_option("--n", gen_n, "rows (uniform, hilbert)")->check(CLI::PositiveNumber);
    c_gen->add_option("--p", gen_p)->check(CLI::PositiveNumber);
    c_gen->add_option("--k", gen_k)->check(CLI::PositiveNumber);
    c_gen->add_option("--eps", gen_eps, "noise level (pairs)")->check(CLI::NonNegativeNumber);
    c_gen->add_option("--seed", gen_seed);
    c_gen->add_option("-o,--out", gen_out)->required();
    c_gen->add_option("--truth", gen_truth, "CSV of the archetype rows");
    c_gen->add_option("--weights", gen_w, "CSV of W");

    try {
        app.parse(argc, argv);

        if (c_sweep->parsed()) {
            sweep.generator = parse_generator(sweep_gen);
            const auto grid = run_sweep(sweep);
            const std::vector<std::string> header{"k", "c", "m", "trials", "fraction"};
            if (sweep_out.empty())
                print_table(sweep_table(grid), header);
            else
                save_csv(sweep_table(grid), sweep_out, header);
            if (!sweep_iso.empty())
                save_csv(isocline_table(grid), sweep_iso, {"k", "reference_m", "c95", "m95"});
        } else if (c_noise->parsed() || c_gnoise->parsed()) {
            noise.selection = c_gnoise->parsed() ? Selection::glasso : Selection::vote;
            const auto grid = run_noise(noise);
            const std::vector<std::string> header{"m", "epsilon", "mean_residual", "log10_mean_residual"};
            if (noise_out.empty())
                print_table(noise_table(grid), header);
            else
                save_csv(noise_table(grid), noise_out, header);
        } else if (c_scree->parsed()) {
            const Matrix S = scree(scree_in.load(), scree_m, scree_repeats, scree_seed);
            if (scree_out.empty())
                print_table(S, {});
            else
                save_csv(S, scree_out);
        } else if (c_cls->parsed()) {
            if (cls_archetypes.empty() && cls_indices.empty())
                throw UsageError("classify needs --archetypes or --indices");
            const Matrix X = cls_in.load();
            Matrix H;
            if (!cls_archetypes.empty()) {
                H = load_matrix(cls_archetypes);
                if (cls_in.transpose) H = transpose(H);
            } else {
                const auto idx = read_indices(cls_indices);
                for (std::size_t i : idx)
                    if (i >= X.rows()) throw ArgumentError("archetype index " + std::to_string(i) + " out of range");
                H = select_rows(X, idx);
            }
            const auto labels = classify(X, H);
            Matrix out(labels.size(), 2);
            for (std::size_t i = 0; i < labels.size(); ++i) {
                out(i, 0) = static_cast<double>(i);
                out(i, 1) = static_cast<double>(labels[i]);
            }
            if (cls_out.empty())
                print_table(out, {"row", "label"});
            else
                save_csv(out, cls_out, {"row", "label"});
        } else if (c_fac->parsed()) {
            if (o_batch->count() > 0 && !fac.adaptive) throw UsageError("--batch applies only with --adaptive");
            if (fac.adaptive && o_batch->count() > 0 && o_m->count() > 0)
                throw UsageError("with --adaptive, --m is the batch size; give --m or --batch, not both");
            if (o_batch->count() > 0) fac.m = fac_batch;
            fac.selection = parse_selection(fac_select);
            if (fac.selection == Selection::glasso && o_k->count() == 0)
                throw UsageError("--select glasso needs --k");
            (void)o_adaptive;
            (void)o_select;
            const auto res = factorize(fac_in.load(), fac);
            write_factorization(res, fac_dir);
            std::cout << "found " << res.found.indices.size() << " rows, kept " << res.indices.size()
                      << ", relative residual " << res.relative_residual << ", passes " << res.passes << "\n";
        } else if (c_diag->parsed()) {
            const Matrix X = diag_in.load();
            std::vector<std::size_t> ext;
            if (!diag_indices.empty()) {
                ext = read_indices(diag_indices);
            } else {
                PursuitConfig cfg;
                cfg.m = diag_m;
                cfg.seed = diag_seed;
                ext = pursue(X, cfg).indices;
            }
            const auto rep = diagnose(X, ext, diag_samples, diag_seed, diag_delta);
            nlohmann::json j;
            j["indices"] = rep.ext;
            j["omega"] = rep.angles.omega;
            j["omega_std_error"] = rep.angles.std_error;
            j["omega_total"] = rep.angles.total;
            j["omega_total_std_error"] = rep.angles.total_std_error;
            j["samples"] = rep.angles.samples;
            j["alpha"] = rep.alpha;
            j["kappa"] = std::isfinite(rep.kappa) ? nlohmann::json(rep.kappa) : nlohmann::json(nullptr);
            j["kappa_bar"] = std::isfinite(rep.kappa_bar) ? nlohmann::json(rep.kappa_bar) : nlohmann::json(nullptr);
            j["delta"] = rep.delta;
            j["m_required"] = rep.m_required;
            j["note"] = rep.note;
            if (diag_json.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(diag_json);
                if (!out) throw IoError("cannot write " + diag_json);
                out << j.dump(2) << "\n";
            }
            if (!diag_table.empty())
                save_csv(geometry_table(rep), diag_table, {"index", "omega", "std_error", "alpha"});
        } else if (c_gen->parsed()) {
            if (gen_kind == "pairs") {
                const auto inst = make_noisy_pairs(gen_p, gen_k, gen_eps, gen_seed);
                save_csv(inst.X, gen_out);
                if (!gen_w.empty()) save_csv(inst.W, gen_w);
                if (!gen_truth.empty()) {
                    std::vector<std::size_t> truth(gen_k);
                    for (std::size_t i = 0; i < gen_k; ++i) truth[i] = i;
                    write_indices(truth, gen_truth);
                }
            } else {
                const auto inst = gen_kind == "uniform" ? gen_uniform_separable(gen_n, gen_p, gen_k, gen_seed)
                                                        : gen_hilbert_separable(gen_n, gen_p, gen_k, gen_seed);
                save_csv(inst.X, gen_out);
                if (!gen_w.empty()) save_csv(inst.W, gen_w);
                if (!gen_truth.empty()) write_indices(inst.true_extreme_indices, gen_truth);
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
