// cfgf: command-line laboratory for cut-off fractional Gaussian fields on the
// flat torus.  Every subcommand writes a CSV/JSON table whose header carries
// the manifest digest; with --out it also writes <out>.manifest.json, and
// `cfgf replay --manifest <file>` re-executes the recorded invocation to
// reproduce the artifact byte-identically.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cfgf/constants.hpp"
#include "cfgf/errors.hpp"
#include "cfgf/field_sampler.hpp"
#include "cfgf/gaussian_tools.hpp"
#include "cfgf/grid.hpp"
#include "cfgf/io.hpp"
#include "cfgf/kac_rice_2d.hpp"
#include "cfgf/kernel_verify.hpp"
#include "cfgf/nodal_topology.hpp"
#include "cfgf/scaling_experiments.hpp"
#include "cfgf/torus_spectrum.hpp"

namespace {

using namespace cfgf;

int run_cli(const std::vector<std::string>& args);  // re-entered by `replay`

// "a:b:steps" -> steps geometric points from a to b inclusive.
std::vector<double> parse_l_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = (c1 == std::string::npos) ? c1 : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ParamError("--L-grid expects a:b:geometric-steps, got '" + text + "'");
    double a = 0.0, b = 0.0;
    long steps = 0;
    try {
        a = std::stod(text.substr(0, c1));
        b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        steps = std::stol(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ParamError("--L-grid expects numeric a:b:steps, got '" + text + "'");
    }
    if (!(a > 0.0) || !(b >= a) || steps < 1)
        throw ParamError("--L-grid needs 0 < a <= b and steps >= 1");
    if (steps == 1) {
        if (b != a) throw ParamError("--L-grid with 1 step needs a == b");
        return {a};
    }
    std::vector<double> grid;
    const double ratio = std::pow(b / a, 1.0 / static_cast<double>(steps - 1));
    for (long i = 0; i < steps; ++i)
        grid.push_back(a * std::pow(ratio, static_cast<double>(i)));
    grid.back() = b;  // pin the endpoint against accumulated rounding
    return grid;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto piece = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(std::stod(piece));
        } catch (const std::exception&) {
            throw ParamError("expected a comma-separated number list, got '" +
                             text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ParamError("empty number list");
    return out;
}

void reject_supercritical(const FieldParams& p) {
    p.validate();
    if (p.regime() == Regime::supercritical)
        throw RegimeError("supercritical regime s > n/2 (s = " +
                          std::to_string(p.s) + ", n = " + std::to_string(p.n) +
                          ") is not supported");
}

// Common output plumbing: render the table, write it (or print to stdout),
// and with --out also drop <out>.manifest.json beside it.
struct Sink {
    std::string out;
    std::string format = "csv";

    void emit(const Table& table, RunManifest manifest, double wall_seconds) const {
        manifest.wall_time_seconds = wall_seconds;
        const std::uint64_t digest = manifest.digest();
        const std::string body = (format == "json") ? render_json(table, digest)
                                                    : render_csv(table, digest);
        if (out.empty()) {
            std::fwrite(body.data(), 1, body.size(), stdout);
            return;
        }
        write_text_file(out, body);
        manifest.output_digests[out] = hex64(fnv1a64(body));
        write_text_file(out + ".manifest.json", manifest.to_json());
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"cut-off fractional Gaussian field laboratory"};
    app.require_subcommand(1);

    // flags shared across subcommands (each subcommand registers the ones it
    // accepts; unknown flags fail parsing with exit code 2)
    int n = 2;
    double s = 1.0;
    double L = 100.0;
    std::string l_grid_text;
    std::int64_t seeds = 50;
    std::uint64_t master_seed = kDefaultSeed;
    double oversample = 8.0;
    double rho = -1.0;
    Sink sink;
    int threads = default_threads();
    std::uint64_t samples = 1000000;

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", sink.out, "output file (default: stdout)");
        cmd->add_option("--format", sink.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_threads = [&](CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker pool size")
            ->check(CLI::PositiveNumber);
    };

    // --- sample ---------------------------------------------------------
    auto* c_sample = app.add_subcommand("sample", "dump one field sample");
    c_sample->add_option("--n", n, "dimension (2 or 3)");
    c_sample->add_option("--s", s, "fractional exponent");
    c_sample->add_option("--L", L, "spectral cutoff");
    c_sample->add_option("--master-seed", master_seed, "seed");
    c_sample->add_option("--oversample", oversample, "grid oversampling");
    add_output(c_sample);

    // --- count ----------------------------------------------------------
    auto* c_count = app.add_subcommand("count", "nodal component count");
    c_count->add_option("--n", n, "dimension (2 or 3)");
    c_count->add_option("--s", s, "fractional exponent");
    c_count->add_option("--L", L, "spectral cutoff");
    c_count->add_option("--master-seed", master_seed, "seed");
    c_count->add_option("--oversample", oversample, "grid oversampling");
    c_count->add_option("--rho", rho, "small-diameter threshold factor");
    add_output(c_count);

    // --- scaling --------------------------------------------------------
    auto* c_scaling = app.add_subcommand("scaling", "count scaling study");
    std::string regime_name;
    c_scaling->add_option("--regime", regime_name, "subcritical|critical")
        ->required()
        ->check(CLI::IsMember({"subcritical", "critical"}));
    c_scaling->add_option("--n", n, "dimension");
    auto* scaling_s =
        c_scaling->add_option("--s", s, "exponent (subcritical only; default 0)");
    c_scaling->add_option("--L-grid", l_grid_text, "a:b:geometric-steps");
    c_scaling->add_option("--seeds", seeds, "seeds per cutoff");
    c_scaling->add_option("--master-seed", master_seed, "seed");
    c_scaling->add_option("--oversample", oversample, "grid oversampling");
    c_scaling->add_option("--rho", rho,
                          "small-diameter threshold factor (critical; default 20)");
    add_threads(c_scaling);
    add_output(c_scaling);

    // --- kernel ---------------------------------------------------------
    auto* c_kernel = app.add_subcommand("kernel", "critical covariance profile");
    std::string separations_text = "0,0.01,0.1,1,3.141592653589793";
    c_kernel->add_option("--n", n, "dimension");
    auto* kernel_s = c_kernel->add_option("--s", s, "exponent (must equal n/2)");
    c_kernel->add_option("--L-grid", l_grid_text, "a:b:geometric-steps");
    c_kernel->add_option("--separations", separations_text,
                         "comma-separated separations |x-y|");
    add_output(c_kernel);

    // --- constants ------------------------------------------------------
    auto* c_constants = app.add_subcommand("constants", "universal constants");
    c_constants->add_option("--n", n, "dimension (2..6)");
    c_constants->add_option("--samples", samples, "Monte Carlo samples");
    c_constants->add_option("--master-seed", master_seed, "seed");
    add_output(c_constants);

    // --- detcheck -------------------------------------------------------
    auto* c_detcheck =
        app.add_subcommand("detcheck", "structured Hessian determinant check");
    int det_m = 4;
    double det_a = 3.0;
    c_detcheck->add_option("--m", det_m, "matrix size");
    c_detcheck->add_option("--a", det_a, "diagonal variance");
    c_detcheck->add_option("--samples", samples, "Monte Carlo samples");
    c_detcheck->add_option("--master-seed", master_seed, "seed");
    add_output(c_detcheck);

    // --- kacrice --------------------------------------------------------
    auto* c_kacrice =
        app.add_subcommand("kacrice", "restricted Morse critical point study");
    double kr_L = 400.0;
    std::int64_t kr_seeds = 40;
    c_kacrice->add_option("--L", kr_L, "spectral cutoff");
    c_kacrice->add_option("--seeds", kr_seeds, "seeds");
    c_kacrice->add_option("--master-seed", master_seed, "seed");
    c_kacrice->add_option("--oversample", oversample, "grid oversampling");
    add_threads(c_kacrice);
    add_output(c_kacrice);

    // --- barrier --------------------------------------------------------
    auto* c_barrier =
        app.add_subcommand("barrier", "nodal component in a shrinking ball");
    std::int64_t audit = 0;
    double bar_rho = 12.0;
    c_barrier->add_option("--L-grid", l_grid_text, "a:b:geometric-steps");
    c_barrier->add_option("--rho", bar_rho, "ball radius factor");
    c_barrier->add_option("--seeds", seeds, "seeds per cutoff");
    c_barrier->add_option("--master-seed", master_seed, "seed");
    c_barrier->add_option("--oversample", oversample, "grid oversampling");
    c_barrier->add_option("--audit", audit,
                          "flood-fill audit count per cutoff");
    add_threads(c_barrier);
    add_output(c_barrier);

    // --- fkg ------------------------------------------------------------
    auto* c_fkg =
        app.add_subcommand("fkg", "positive association checks");
    int fkg_dim = 0;
    std::int64_t instances = 50;
    double fkg_rho = 0.5;
    std::uint64_t fkg_samples = 100000;
    c_fkg->add_option("--dim", fkg_dim,
                      "instance dimension (0 = cycle through 2..8)");
    c_fkg->add_option("--instances", instances, "random instances");
    c_fkg->add_option("--samples", fkg_samples, "Monte Carlo samples per check");
    c_fkg->add_option("--rho", fkg_rho, "orthant correlation");
    c_fkg->add_option("--master-seed", master_seed, "seed");
    add_output(c_fkg);

    // --- replay ---------------------------------------------------------
    auto* c_replay =
        app.add_subcommand("replay", "re-run a recorded manifest");
    std::string manifest_path;
    std::string replay_out;
    c_replay->add_option("--manifest", manifest_path, "manifest JSON")
        ->required();
    c_replay->add_option("--out", replay_out,
                         "override the recorded output path");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: usage: %s\n", e.what());
        return 2;
    }

    RunManifest manifest;
    manifest.argv = args;
    manifest.master_seed = master_seed;
    Timer timer;

    if (app.got_subcommand(c_sample)) {
        manifest.subcommand = "sample";
        const FieldParams p{n, s, L};
        reject_supercritical(p);
        if (n != 2 && n != 3) throw ParamError("sample: n in {2, 3} required");
        const GridSpec grid = make_grid(p, oversample);
        if (grid.cells() > 16'000'000)
            throw CapacityError("sample: dump of " +
                                std::to_string(grid.cells()) +
                                " points exceeds the 16M budget");
        manifest.parameters = {{"n", std::to_string(n)},
                               {"s", format_g17(s)},
                               {"L", format_g17(L)},
                               {"oversample", format_g17(oversample)}};
        const FieldSample sample = sample_field(p, grid, master_seed);
        Table t;
        const std::int64_t m = grid.m;
        if (n == 2) {
            t.columns = {"i0", "i1", "value"};
            for (std::int64_t i0 = 0; i0 < m; ++i0)
                for (std::int64_t i1 = 0; i1 < m; ++i1)
                    t.add_row({static_cast<double>(i0), static_cast<double>(i1),
                               sample.at(i0, i1)});
        } else {
            t.columns = {"i0", "i1", "i2", "value"};
            for (std::int64_t i0 = 0; i0 < m; ++i0)
                for (std::int64_t i1 = 0; i1 < m; ++i1)
                    for (std::int64_t i2 = 0; i2 < m; ++i2)
                        t.add_row({static_cast<double>(i0),
                                   static_cast<double>(i1),
                                   static_cast<double>(i2),
                                   sample.values[static_cast<std::size_t>(
                                       (i0 * m + i1) * m + i2)]});
        }
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_count)) {
        manifest.subcommand = "count";
        const FieldParams p{n, s, L};
        reject_supercritical(p);
        if (n != 2 && n != 3) throw ParamError("count: n in {2, 3} required");
        manifest.parameters = {{"n", std::to_string(n)},
                               {"s", format_g17(s)},
                               {"L", format_g17(L)},
                               {"oversample", format_g17(oversample)},
                               {"rho", format_g17(rho)}};
        const GridSpec grid = make_grid(p, oversample);
        const FieldSample sample = sample_field(p, grid, master_seed);
        NodalReport r =
            (n == 2) ? count_components_2d(sample) : count_components_nd(sample);
        if (rho >= 0.0) r = component_diameters(r, p, rho);
        Table t;
        t.columns = {"n", "s", "L", "resolution", "N", "rho", "N_rho"};
        t.add_row({static_cast<double>(n), s, L,
                   static_cast<double>(r.resolution), static_cast<double>(r.N),
                   r.rho, static_cast<double>(r.N_rho)});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_scaling)) {
        manifest.subcommand = "scaling";
        if (l_grid_text.empty())
            throw ParamError("scaling: --L-grid is required");
        const auto grid = parse_l_grid(l_grid_text);
        std::vector<ScalingRow> rows;
        if (regime_name == "subcritical") {
            if (scaling_s->count() == 0) s = 0.0;
            rows = subcritical_study(n, s, grid, seeds, master_seed, oversample,
                                     threads);
        } else {
            if (scaling_s->count() > 0 && s != 0.5 * n)
                throw RegimeError("scaling: critical regime pins s = n/2");
            s = 0.5 * n;
            if (rho < 0.0) rho = 20.0;
            rows = critical_study(n, grid, seeds, rho, master_seed, oversample,
                                  threads);
        }
        manifest.parameters = {{"regime", regime_name},
                               {"n", std::to_string(n)},
                               {"s", format_g17(s)},
                               {"L-grid", l_grid_text},
                               {"seeds", std::to_string(seeds)},
                               {"oversample", format_g17(oversample)},
                               {"rho", format_g17(rho)}};
        Table t;
        t.columns = {"L",          "seeds",      "mean_N",      "std_error",
                     "normalized", "mean_N_rho", "std_error_rho"};
        for (const auto& r : rows)
            t.add_row({r.L, static_cast<double>(r.seeds), r.mean_N, r.std_error,
                       r.normalized, r.mean_N_rho, r.std_error_rho});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_kernel)) {
        manifest.subcommand = "kernel";
        if (kernel_s->count() > 0 && s != 0.5 * n)
            throw RegimeError("kernel: the log profile requires s = n/2");
        if (l_grid_text.empty()) l_grid_text = "100:10000:3";
        const auto grid = parse_l_grid(l_grid_text);
        const auto seps = parse_double_list(separations_text);
        manifest.parameters = {{"n", std::to_string(n)},
                               {"L-grid", l_grid_text},
                               {"separations", separations_text}};
        const FieldParams p{n, 0.5 * n, grid.front()};
        const KernelProfile prof = critical_log_profile(p, grid, seps);
        Table t;
        t.columns = {"L", "separation", "kernel", "predicted", "residual"};
        for (std::size_t i = 0; i < prof.L_grid.size(); ++i)
            for (std::size_t j = 0; j < prof.separations.size(); ++j)
                t.add_row({prof.L_grid[i], prof.separations[j],
                           prof.kernel[i][j], prof.predicted[i][j],
                           prof.residuals[i][j]});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_constants)) {
        manifest.subcommand = "constants";
        if (n < 2) throw ParamError("constants: n >= 2 required");
        if (n > 6)
            throw CapacityError("constants: signature table limited to n <= 6");
        manifest.parameters = {{"n", std::to_string(n)},
                               {"samples", std::to_string(samples)}};
        const UniversalConstants u =
            compute_universal_constants(n, samples, master_seed);
        Table t;
        t.columns = {"n",   "index",       "c_n",      "C_n",
                     "J_n_plus_1", "A_i", "A_std_error", "discarded"};
        for (int i = 0; i < n; ++i)
            t.add_row({static_cast<double>(n), static_cast<double>(i), u.c_n,
                       u.C_n, u.J[static_cast<std::size_t>(n + 1)],
                       u.A[static_cast<std::size_t>(i)],
                       u.A_std_error[static_cast<std::size_t>(i)],
                       static_cast<double>(
                           u.A_discarded[static_cast<std::size_t>(i)])});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_detcheck)) {
        manifest.subcommand = "detcheck";
        const StructuredHessianLaw law{det_m, det_a};
        manifest.parameters = {{"m", std::to_string(det_m)},
                               {"a", format_g17(det_a)},
                               {"samples", std::to_string(samples)}};
        const double wick = wick_expected_det(law);
        const MomentEstimate mc = expected_det(law, samples, master_seed);
        Table t;
        t.columns = {"m",  "a",       "wick",   "mc_value",
                     "mc_std_error", "samples", "discarded"};
        t.add_row({static_cast<double>(det_m), det_a, wick, mc.value,
                   mc.std_error, static_cast<double>(mc.samples),
                   static_cast<double>(mc.discarded)});
        sink.emit(t, manifest, timer.seconds());
        if (wick != 0.0) {
            std::fprintf(stderr, "error: check: wick oracle nonzero (%.17g)\n",
                         wick);
            return 1;
        }
        if (!(std::abs(mc.value) <= 3.0 * mc.std_error)) {
            std::fprintf(stderr,
                         "error: check: |E[det M]| = %.6g exceeds 3 x stderr "
                         "= %.6g\n",
                         std::abs(mc.value), 3.0 * mc.std_error);
            return 1;
        }
        return 0;
    }

    if (app.got_subcommand(c_kacrice)) {
        manifest.subcommand = "kacrice";
        manifest.parameters = {{"L", format_g17(kr_L)},
                               {"seeds", std::to_string(kr_seeds)},
                               {"oversample", format_g17(oversample)}};
        const MorseRestrictionReport rep = morse_restriction_study(
            kr_L, kr_seeds, master_seed, oversample, threads);
        Table t;
        t.columns = {"L",     "seeds",   "m0_mean", "m1_mean",
                     "predicted_per_index", "ratio", "flagged"};
        t.add_row({rep.L, static_cast<double>(rep.seeds), rep.m0_mean,
                   rep.m1_mean, rep.predicted_per_index, rep.ratio,
                   static_cast<double>(rep.flagged)});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_barrier)) {
        manifest.subcommand = "barrier";
        if (l_grid_text.empty()) l_grid_text = "100:400:2";
        const auto grid = parse_l_grid(l_grid_text);
        manifest.parameters = {{"L-grid", l_grid_text},
                               {"rho", format_g17(bar_rho)},
                               {"seeds", std::to_string(seeds)},
                               {"oversample", format_g17(oversample)},
                               {"audit", std::to_string(audit)}};
        const FieldParams base{2, 1.0, grid.front()};
        const auto rows = barrier_probability(base, grid, bar_rho, seeds,
                                              master_seed, oversample, threads,
                                              audit);
        Table t;
        t.columns = {"L", "lambda", "rho", "seeds", "q", "stderr",
                     "q_normalized"};
        for (const auto& r : rows)
            t.add_row({r.L, r.lambda, r.rho, static_cast<double>(r.seeds), r.q,
                       r.std_error, r.q_normalized});
        sink.emit(t, manifest, timer.seconds());
        return 0;
    }

    if (app.got_subcommand(c_fkg)) {
        manifest.subcommand = "fkg";
        if (instances < 0) throw ParamError("fkg: instances >= 0 required");
        if (fkg_dim != 0 && (fkg_dim < 2 || fkg_dim > 8))
            throw ParamError("fkg: dim in {0, 2..8}");
        manifest.parameters = {{"dim", std::to_string(fkg_dim)},
                               {"instances", std::to_string(instances)},
                               {"samples", std::to_string(fkg_samples)},
                               {"rho", format_g17(fkg_rho)}};
        Table t;
        t.columns = {"instance", "dim",  "p_ab", "p_a",
                     "p_b",      "margin_std_error", "pass"};
        bool all_pass = true;
        std::string first_failure;

        // instance 0: closed-form bivariate orthant reference
        {
            const std::vector<double> cov{1.0, fkg_rho, fkg_rho, 1.0};
            const auto v = fkg_check(cov, 2, FkgEvent{{0}, {0.0}},
                                     FkgEvent{{1}, {0.0}},
                                     static_cast<std::int64_t>(fkg_samples),
                                     master_seed);
            const double closed = orthant_probability(fkg_rho);
            const double se_ab =
                std::sqrt(v.p_ab * (1.0 - v.p_ab) /
                          static_cast<double>(v.samples));
            const bool ok = v.pass && std::abs(v.p_ab - closed) <= 3.0 * se_ab;
            t.add_row({0.0, 2.0, v.p_ab, v.p_a, v.p_b, v.margin_std_error,
                       ok ? 1.0 : 0.0});
            if (!ok) {
                all_pass = false;
                first_failure = "orthant reference off the closed form";
            }
        }
        for (std::int64_t i = 1; i <= instances; ++i) {
            const int dim =
                (fkg_dim != 0) ? fkg_dim : 2 + static_cast<int>((i - 1) % 7);
            const auto inst = random_fkg_instance(
                dim, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
            const auto v = fkg_check(inst.covariance, inst.dim, inst.a, inst.b,
                                     static_cast<std::int64_t>(fkg_samples),
                                     derive_seed(master_seed,
                                                 static_cast<std::uint64_t>(i),
                                                 1));
            t.add_row({static_cast<double>(i), static_cast<double>(dim), v.p_ab,
                       v.p_a, v.p_b, v.margin_std_error, v.pass ? 1.0 : 0.0});
            if (!v.pass) {
                all_pass = false;
                if (first_failure.empty())
                    first_failure = "instance " + std::to_string(i) +
                                    " violates the inequality";
            }
        }
        sink.emit(t, manifest, timer.seconds());
        if (!all_pass) {
            std::fprintf(stderr, "error: check: %s\n", first_failure.c_str());
            return 1;
        }
        return 0;
    }

    if (app.got_subcommand(c_replay)) {
        RunManifest recorded =
            RunManifest::from_json_text(read_text_file(manifest_path));
        if (recorded.subcommand == "replay")
            throw ParamError("replay: refusing a nested replay manifest");
        if (recorded.argv.size() < 2)
            throw ParamError("replay: manifest has no usable argv");
        if (recorded.version_tag != kVersionTag)
            throw PreconditionError("replay: manifest version '" +
                                    recorded.version_tag +
                                    "' does not match this binary (" +
                                    kVersionTag + ")");
        std::vector<std::string> rerun = recorded.argv;
        if (!replay_out.empty()) {
            bool replaced = false;
            for (std::size_t i = 0; i + 1 < rerun.size(); ++i)
                if (rerun[i] == "--out") {
                    rerun[i + 1] = replay_out;
                    replaced = true;
                }
            if (!replaced) {
                rerun.push_back("--out");
                rerun.push_back(replay_out);
            }
        }
        return run_cli(rerun);
    }

    throw Error("internal: unhandled subcommand");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        return run_cli(args);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.kind(), e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
}
