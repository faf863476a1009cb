// Command-line surface for the tensor-product-expander toolkit.
//
// Exit codes: 0 success, 2 argument/guard error, 3 convergence failure,
// 4 threshold violation.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "tpx/design.hpp"
#include "tpx/gap_analysis.hpp"
#include "tpx/io.hpp"
#include "tpx/verify.hpp"

namespace {

struct GlobalConfig {
    std::uint64_t seed = 12345;
    int threads = 0; // 0 = runtime default
    double power_tol = 1e-9;
};

void apply_env_defaults(GlobalConfig& cfg) {
    if (const char* s = std::getenv("TPX_SEED")) cfg.seed = std::strtoull(s, nullptr, 10);
    if (const char* t = std::getenv("TPX_THREADS")) cfg.threads = int(std::strtol(t, nullptr, 10));
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        tpx::io::atomic_write_file(out_path, content);
}

std::vector<std::int64_t> parse_grid(const std::string& grid) {
    std::vector<std::int64_t> points;
    auto colon1 = grid.find(':');
    if (colon1 == std::string::npos) {
        std::stringstream ss(grid);
        std::string item;
        while (std::getline(ss, item, ',')) points.push_back(std::stoll(item));
        return points;
    }
    auto colon2 = grid.find(':', colon1 + 1);
    if (colon2 == std::string::npos || grid.size() < colon2 + 2 || grid[colon2 + 1] != 'x')
        throw tpx::ArgumentError("grid must be start:stop:xFACTOR or a comma list");
    std::int64_t start = std::stoll(grid.substr(0, colon1));
    std::int64_t stop = std::stoll(grid.substr(colon1 + 1, colon2 - colon1 - 1));
    std::int64_t factor = std::stoll(grid.substr(colon2 + 2));
    if (start < 1 || factor < 2) throw tpx::ArgumentError("bad geometric grid");
    for (std::int64_t v = start; v <= stop; v *= factor) points.push_back(v);
    return points;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor product expander and unitary design toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    GlobalConfig cfg;
    apply_env_defaults(cfg);
    app.add_option("--seed", cfg.seed, "RNG seed (env TPX_SEED)");
    app.add_option("--threads", cfg.threads, "worker threads (env TPX_THREADS)");
    app.add_option("--tol-power", cfg.power_tol, "power iteration relative tolerance");

    // ---- partitions ----
    auto* cmd_partitions = app.add_subcommand("partitions", "enumerate set partitions");
    int part_n = 0;
    std::string part_format = "text", part_out;
    cmd_partitions->add_option("--n", part_n, "ground set size")->required();
    cmd_partitions->add_option("--format", part_format, "text | json");
    cmd_partitions->add_option("--out", part_out, "output path (default stdout)");

    // ---- gap ----
    auto* cmd_gap = app.add_subcommand("gap", "spectral gap measurements");
    cmd_gap->require_subcommand(1);
    auto* gap_classical = cmd_gap->add_subcommand("classical", "classical 2k-copy gap");
    std::string gc_ensemble, gc_out;
    int gc_copies = 2;
    gap_classical->add_option("--ensemble", gc_ensemble, "permutation ensemble JSON")->required();
    gap_classical->add_option("--copies", gc_copies, "number of tensor copies")->required();
    gap_classical->add_option("--out", gc_out, "report path");

    auto* gap_quantum = cmd_gap->add_subcommand("quantum", "quantum k-copy gap");
    std::string gq_ensemble, gq_out;
    gap_quantum->add_option("--ensemble", gq_ensemble, "quantum ensemble JSON")->required();
    gap_quantum->add_option("--out", gq_out, "report path");

    auto* gap_lemma = cmd_gap->add_subcommand("lemma", "Fourier-layer compression norm lambda_A");
    std::int64_t gl_n = 0;
    int gl_k = 0;
    std::string gl_method = "ibasis", gl_out;
    gap_lemma->add_option("--n", gl_n, "local dimension N")->required();
    gap_lemma->add_option("--k", gl_k, "copy parameter k")->required();
    gap_lemma->add_option("--method", gl_method, "ibasis | dense");
    gap_lemma->add_option("--out", gl_out, "report path");

    // ---- construct ----
    auto* cmd_construct = app.add_subcommand("construct", "mix a classical TPE with the Fourier transform");
    std::string cons_ensemble, cons_p = "auto", cons_out_ens, cons_out_rep;
    int cons_k = 1;
    bool cons_no_measure = false;
    cmd_construct->add_option("--ensemble", cons_ensemble, "permutation ensemble JSON")->required();
    cmd_construct->add_option("--k", cons_k, "copy parameter k")->required();
    cmd_construct->add_option("--p", cons_p, "classical mixing weight or 'auto'");
    cmd_construct->add_option("--out-ensemble", cons_out_ens, "quantum ensemble path")->required();
    cmd_construct->add_option("--out-report", cons_out_rep, "report path");
    cmd_construct->add_flag("--no-measure", cons_no_measure, "skip the quantum gap measurement");

    // ---- design ----
    auto* cmd_design = app.add_subcommand("design", "iterate an expander into an approximate design");
    std::string des_ensemble, des_out, des_word_out, des_base_label;
    double des_eps = 0.0;
    double des_lambda = -1.0;
    cmd_design->add_option("--ensemble", des_ensemble, "quantum ensemble JSON")->required();
    cmd_design->add_option("--epsilon", des_eps, "target 1-norm distance")->required();
    cmd_design->add_option("--lambda", des_lambda, "measured gap (measured here when omitted)");
    cmd_design->add_option("--out", des_out, "design spec path");
    cmd_design->add_option("--dump-word", des_word_out, "sample one design word to this path");

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "run identity/invariant suites");
    std::string ver_suite = "all";
    tpx::verify::VerifyOptions ver_opts;
    cmd_verify->add_option("--suite", ver_suite, "mobius|counting|states|elements|ranks|lemmas|gaps|design|all");
    cmd_verify->add_option("--n-max", ver_opts.n_max, "largest ground size / dimension knob");
    cmd_verify->add_option("--k-max", ver_opts.k_max, "largest copy parameter");
    cmd_verify->add_flag("--inject-failure", ver_opts.inject_failure,
                         "test mode: perturb one identity to prove failures are caught");

    // ---- sweep ----
    auto* cmd_sweep = app.add_subcommand("sweep", "grid sweeps writing CSV");
    cmd_sweep->require_subcommand(1);
    auto* sweep_lemma = cmd_sweep->add_subcommand("lemma", "lambda_A versus N");
    std::string sw_grid, sw_method = "ibasis", sw_out;
    int sw_k = 2;
    sweep_lemma->add_option("--k", sw_k, "copy parameter k")->required();
    sweep_lemma->add_option("--n", sw_grid, "grid start:stop:xFACTOR or comma list")->required();
    sweep_lemma->add_option("--method", sw_method, "ibasis | dense");
    sweep_lemma->add_option("--out", sw_out, "CSV path (default stdout)");

    // ---- perms (utility) ----
    auto* cmd_perms = app.add_subcommand("perms", "generate a uniform random permutation ensemble");
    std::int64_t pm_n = 0;
    int pm_count = 0;
    std::string pm_out;
    cmd_perms->add_option("--n", pm_n, "ground set size N")->required();
    cmd_perms->add_option("--count", pm_count, "number of permutations")->required();
    cmd_perms->add_option("--out", pm_out, "ensemble path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    tpx::GapOptions gopts;
    gopts.seed = cfg.seed;
    gopts.tol = cfg.power_tol;

    try {
        if (cmd_partitions->parsed()) {
            if (part_n < 1 || part_n > tpx::kMaxGroundSize)
                throw tpx::SizeLimitError("partitions: --n must lie in 1..12");
            tpx::PartitionIndex idx(part_n);
            if (part_format == "json") {
                emit(tpx::io::partition_index_json(idx), part_out);
            } else {
                std::ostringstream os;
                for (std::int64_t i = 0; i < idx.size(); ++i) os << idx.at(i).serialize() << "\n";
                emit(os.str(), part_out);
            }
            std::cerr << "bell(" << part_n << ") = " << idx.size() << "\n";
        } else if (gap_classical->parsed()) {
            tpx::PermDistribution nu = tpx::io::load_perm_distribution(gc_ensemble);
            tpx::GapReport r = tpx::classical_gap(nu, gc_copies, gopts);
            emit(tpx::io::gap_report_json(r), gc_out);
        } else if (gap_quantum->parsed()) {
            tpx::QuantumEnsemble ens = tpx::io::load_quantum_ensemble(gq_ensemble);
            tpx::GapReport r = tpx::quantum_gap(ens, gopts);
            emit(tpx::io::gap_report_json(r), gq_out);
        } else if (gap_lemma->parsed()) {
            tpx::LemmaMethod method;
            if (gl_method == "ibasis")
                method = tpx::LemmaMethod::ibasis;
            else if (gl_method == "dense")
                method = tpx::LemmaMethod::dense;
            else
                throw tpx::ArgumentError("gap lemma: --method must be ibasis or dense");
            tpx::GapReport r = tpx::lemma_gap_lambda_A(gl_n, gl_k, method, gopts);
            emit(tpx::io::gap_report_json(r), gl_out);
        } else if (cmd_construct->parsed()) {
            tpx::PermDistribution nu = tpx::io::load_perm_distribution(cons_ensemble);
            std::optional<double> p;
            if (cons_p != "auto") p = std::stod(cons_p);
            gopts.measure_quantum = !cons_no_measure;
            auto [ens, report] = tpx::theorem_construction(nu, cons_k, p, gopts);
            tpx::io::atomic_write_file(cons_out_ens, tpx::io::quantum_ensemble_json(ens));
            emit(tpx::io::gap_report_json(report), cons_out_rep);
        } else if (cmd_design->parsed()) {
            tpx::QuantumEnsemble ens = tpx::io::load_quantum_ensemble(des_ensemble);
            double lambda = des_lambda;
            if (lambda < 0.0) {
                tpx::GapReport r = tpx::quantum_gap(ens, gopts);
                lambda = *r.lambda;
            }
            tpx::DesignSpec spec = tpx::make_design_spec(ens, des_ensemble, lambda, des_eps);
            std::optional<double> distance;
            tpx::TupleSpace space(ens.n, 2 * ens.k);
            if (space.dim() <= tpx::kMaxDenseMatrixDim) {
                tpx::OpPtr iterated = tpx::iterate_moment(ens, spec.m);
                distance = tpx::design_distance_1norm(*iterated, space, ens.k);
            }
            emit(tpx::io::design_spec_json(spec, distance), des_out);
            if (!des_word_out.empty()) {
                std::vector<int> word = tpx::sample_word(ens, spec.m, cfg.seed);
                std::ostringstream os;
                os << "[";
                for (size_t i = 0; i < word.size(); ++i) os << (i ? "," : "") << word[i];
                os << "]\n";
                tpx::io::atomic_write_file(des_word_out, os.str());
            }
            if (distance && *distance > des_eps) {
                std::cerr << "design distance " << tpx::io::fmt_double(*distance)
                          << " exceeds target " << tpx::io::fmt_double(des_eps) << "\n";
                return 4;
            }
        } else if (cmd_verify->parsed()) {
            ver_opts.seed = cfg.seed;
            tpx::verify::Suite suite = tpx::verify::run_suite(ver_suite, ver_opts);
            int failures = 0;
            for (const auto& check : suite) {
                if (!check.pass && failures == 0)
                    std::cout << "[FAIL] " << check.name
                              << (check.detail.empty() ? "" : " (" + check.detail + ")") << "\n";
                else if (!check.pass)
                    std::cout << "[FAIL] " << check.name << "\n";
                else
                    std::cout << "[ok] " << check.name << "\n";
                failures += check.pass ? 0 : 1;
            }
            std::cout << (failures == 0 ? "all checks passed" : "failures: " + std::to_string(failures))
                      << " (" << suite.size() << " checks)\n";
            if (failures > 0) return 1;
        } else if (sweep_lemma->parsed()) {
            tpx::LemmaMethod method;
            if (sw_method == "ibasis")
                method = tpx::LemmaMethod::ibasis;
            else if (sw_method == "dense")
                method = tpx::LemmaMethod::dense;
            else
                throw tpx::ArgumentError("sweep lemma: --method must be ibasis or dense");
            std::vector<std::int64_t> grid = parse_grid(sw_grid);
            std::ostringstream csv;
            csv << "n,k,method,lambda,bound,runtime_ms\n";
            for (std::int64_t nn : grid) {
                auto t0 = std::chrono::steady_clock::now();
                std::string lambda_s = "nan", bound_s;
                try {
                    tpx::GapReport r = tpx::lemma_gap_lambda_A(nn, sw_k, method, gopts);
                    lambda_s = tpx::io::fmt_double(*r.lambda);
                    bound_s = r.bound ? tpx::io::fmt_double(*r.bound) : "vacuous";
                } catch (const tpx::Error& e) {
                    bound_s = tpx::lemma_bound(nn, sw_k) < 1.0
                                  ? tpx::io::fmt_double(tpx::lemma_bound(nn, sw_k))
                                  : "vacuous";
                    std::cerr << "sweep point n=" << nn << " failed: " << e.what() << "\n";
                }
                auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
                csv << nn << "," << sw_k << "," << sw_method << "," << lambda_s << "," << bound_s
                    << "," << ms << "\n";
            }
            emit(csv.str(), sw_out);
        } else if (cmd_perms->parsed()) {
            if (pm_n < 2 || pm_count < 1) throw tpx::ArgumentError("perms: need N >= 2, count >= 1");
            tpx::PermDistribution nu;
            nu.n = pm_n;
            tpx::CounterRng rng{cfg.seed};
            for (int i = 0; i < pm_count; ++i)
                nu.entries.push_back(
                    {tpx::random_permutation(pm_n, rng.derive(std::uint64_t(i))), 1.0 / pm_count});
            nu.validate();
            tpx::io::atomic_write_file(pm_out, tpx::io::perm_distribution_json(nu));
        }
    } catch (const tpx::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << " (sigma=" << e.last_sigma
                  << ", residual=" << e.residual << ", iterations=" << e.iterations << ")\n";
        return 3;
    } catch (const tpx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
