#include "stabcert/cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "stabcert/bounds.hpp"
#include "stabcert/csv.hpp"
#include "stabcert/dynamics.hpp"
#include "stabcert/energy.hpp"
#include "stabcert/errors.hpp"
#include "stabcert/estimate.hpp"
#include "stabcert/repro.hpp"
#include "stabcert/sample.hpp"
#include "stabcert/verify.hpp"

namespace stabcert::cli {

namespace {

struct CommonOpts {
    std::string model = "sgn-cubic";
    std::string kind = "rk4";
    double dt = 0.01;
    double k = 1.0;
    double lambda = 1.0;
    double r0 = 1.0;
    std::uint64_t seed = 0;
    int threads = 0;
    double decay_rate = 1.0;
    std::vector<double> matrix_a;  // row-major, for linear-nd
    double domain_radius = 0.0;    // <= 0 keeps the model default
};

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

SystemModel build_model(const CommonOpts& common) {
    ModelOptions opts;
    opts.decay_rate = common.decay_rate;
    if (common.domain_radius > 0.0) opts.domain_radius = common.domain_radius;
    if (!common.matrix_a.empty()) {
        const auto n = static_cast<std::size_t>(std::lround(std::sqrt(
            static_cast<double>(common.matrix_a.size()))));
        if (n * n != common.matrix_a.size())
            throw std::invalid_argument("--A must hold an n x n row-major matrix");
        opts.matrix = Matrix(n, common.matrix_a);
    }
    return make_model(common.model, opts);
}

EnergyForm build_form(const SystemModel& model, const std::vector<double>& p_entries,
                      double ell) {
    const auto dim = static_cast<std::size_t>(model.dim);
    if (p_entries.empty()) return EnergyForm(Matrix::identity(dim), ell);
    if (p_entries.size() == dim * dim) return EnergyForm(Matrix(dim, p_entries), ell);
    throw std::invalid_argument("--P needs " + std::to_string(dim * dim) +
                                " row-major entries for a " + std::to_string(dim) + "-d model");
}

StabilityParams stability_params(const CommonOpts& c) { return {c.k, c.lambda, c.r0}; }

void attach_common(CLI::App* cmd, CommonOpts& c, std::string* p_text) {
    cmd->add_option("--model", c.model, "registered model name")->required();
    cmd->add_option("--dt", c.dt, "integration step (s)");
    cmd->add_option("--kind", c.kind, "integrator: rk4 or euler");
    cmd->add_option("--k", c.k, "exponential overshoot constant k");
    cmd->add_option("--lambda", c.lambda, "exponential decay rate");
    cmd->add_option("--r0", c.r0, "stability ball radius");
    cmd->add_option("--seed", c.seed, "RNG seed (echoed into outputs)");
    cmd->add_option("--threads", c.threads, "worker cap (0 = hardware)");
    cmd->add_option("--rate", c.decay_rate, "linear-1d decay rate");
    cmd->add_option("--A", *p_text, "row-major matrix for linear-nd")->group("model setup");
    double radius = 0.0;
    cmd->add_option("--radius", radius, "domain radius override")
        ->each([&c](const std::string& s) { c.domain_radius = std::stod(s); });
    for (auto* opt : cmd->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    return file;
}

// -------- subcommand runners --------

int run_bounds(const CommonOpts& common, double t_min, double t_max, double t_step,
               const std::string& out_path) {
    const SystemModel model = build_model(common);
    std::vector<double> grid;
    for (double t = t_min; t <= t_max + 1e-12; t += t_step) grid.push_back(t);
    const auto rows = bounds_table(model.lipschitz_L, model.jump_M, common.dt,
                                   integrator_from_string(common.kind),
                                   stability_params(common), grid);
    auto file = open_output(out_path);
    CsvWriter csv(file);
    csv.comment_seed(common.seed);
    csv.comment("model", model.name);
    csv.comment("dt", format_double(common.dt));
    csv.comment("L", format_double(model.lipschitz_L));
    csv.comment("M", format_double(model.jump_M));
    csv.header({"T", "a", "b", "exp_bound", "sqrt_a_term", "sqrt_b_term"});
    for (const auto& r : rows)
        csv.row({r.T, r.a, r.b, r.exp_bound, r.sqrt_a_term, r.sqrt_b_term});
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return kExitOk;
}

int run_montecarlo(const CommonOpts& common, std::size_t n_traj, double horizon,
                   const std::string& out_path) {
    const SystemModel model = build_model(common);
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / common.dt));
    const EnvelopeReport rep = monte_carlo_envelope(model, stability_params(common), n_traj,
                                                    common.dt, n_steps, common.seed,
                                                    common.threads);
    auto file = open_output(out_path);
    CsvWriter csv(file);
    csv.comment_seed(common.seed);
    csv.comment("model", model.name);
    csv.comment("n_traj", std::to_string(n_traj));
    csv.comment("k", format_double(common.k));
    csv.comment("lambda", format_double(common.lambda));
    csv.comment("r0", format_double(common.r0));
    csv.comment("chatter_floor", format_double(rep.chatter_floor));
    csv.header({"t", "max_abs_x", "envelope"});
    for (std::size_t s = 0; s < rep.max_norm_profile.size(); ++s)
        csv.row({static_cast<double>(s) * common.dt, rep.max_norm_profile[s],
                 rep.envelope_profile[s]});
    std::cout << "trajectories: " << rep.n_traj << "\n"
              << "violations:   " << rep.violations << "\n"
              << "worst margin: " << format_double(rep.worst_margin) << "\n"
              << "wrote " << out_path << "\n";
    return kExitOk;
}

int run_verify(const CommonOpts& common, const VerificationConfig& cfg_in, double ell,
               const std::vector<double>& p_entries, const std::string& out_path,
               const std::string& grid_out) {
    const SystemModel model = build_model(common);
    const EnergyForm form = build_form(model, p_entries, ell);
    VerificationConfig cfg = cfg_in;
    cfg.params = stability_params(common);
    cfg.kind = integrator_from_string(common.kind);
    cfg.dt = common.dt;
    cfg.threads = common.threads;

    if (!grid_out.empty()) {
        const SampleGrid grid = delta_grid(form, cfg.delta, cfg.grid_cap, cfg.strict_pitch);
        auto gfile = open_output(grid_out);
        CsvWriter gcsv(gfile);
        gcsv.comment_seed(common.seed);
        gcsv.comment("delta", format_double(grid.delta));
        gcsv.comment("spacing", format_double(grid.spacing));
        std::vector<std::string> names;
        for (int i = 1; i <= model.dim; ++i) names.push_back("x" + std::to_string(i));
        gcsv.header(names);
        for (const auto& p : grid.points) gcsv.row(p);
    }

    const VerificationReport rep = check_invariance(model, cfg, form);

    if (!out_path.empty()) {
        auto file = open_output(out_path);
        CsvWriter csv(file);
        csv.comment_seed(common.seed);
        csv.comment("model", model.name);
        csv.comment("kind", to_string(rep.used_config.kind));
        csv.comment("dt", format_double(rep.used_config.dt));
        csv.comment("n_steps", std::to_string(rep.used_config.n_steps));
        csv.comment("delta", format_double(rep.used_config.delta));
        csv.comment("k", format_double(rep.used_config.params.k));
        csv.comment("lambda", format_double(rep.used_config.params.lambda));
        csv.comment("r0", format_double(rep.used_config.params.r0));
        csv.comment("ell", format_double(rep.used_ell));
        csv.comment("k_E", format_double(form.k_E()));
        csv.comment("verdict", to_string(rep.verdict));
        csv.comment("gamma", format_double(rep.gamma));
        csv.comment("condition_lhs", format_double(rep.condition_lhs));
        csv.comment("max_energy", format_double(rep.max_energy));
        for (const auto& flag : rep.caveat_flags) csv.comment("caveat", flag);
        for (const auto& ev : rep.adaptation_trace)
            csv.comment("adaptation", ev.change + " (" + ev.reason + ")");
        std::vector<std::string> names;
        for (int i = 1; i <= model.dim; ++i) names.push_back("x" + std::to_string(i));
        names.push_back("terminal_energy");
        csv.header(names);
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
            std::vector<double> row = rep.samples[i];
            row.push_back(rep.sample_energies[i]);
            csv.row(row);
        }
    }

    std::cout << "verdict:       " << to_string(rep.verdict) << "\n"
              << "gamma:         " << format_double(rep.gamma) << "\n"
              << "condition_lhs: " << format_double(rep.condition_lhs) << "\n"
              << "max_energy:    " << format_double(rep.max_energy) << "\n"
              << "samples:       " << rep.samples.size() << "\n";
    for (const auto& ev : rep.adaptation_trace)
        std::cout << "adapted:       " << ev.change << " (" << ev.reason << ")\n";
    for (const auto& flag : rep.caveat_flags) std::cout << "caveat:        " << flag << "\n";
    if (rep.verdict == Verdict::Falsified)
        std::cout << "witness sample with terminal energy " << format_double(rep.max_energy)
                  << " > ell\n";

    switch (rep.verdict) {
        case Verdict::ForwardInvariant: return kExitOk;
        case Verdict::Inconclusive: return kExitInconclusive;
        case Verdict::Falsified: return kExitFalsified;
    }
    return kExitData;
}

int run_sweep(const CommonOpts& common, const VerificationConfig& cfg_in, double ell,
              const std::vector<double>& p_entries, const std::vector<std::size_t>& step_grid,
              const std::vector<std::size_t>& nsamp_grid, const std::string& out_path) {
    const SystemModel model = build_model(common);
    const EnergyForm form = build_form(model, p_entries, ell);
    VerificationConfig cfg = cfg_in;
    cfg.params = stability_params(common);
    cfg.kind = integrator_from_string(common.kind);
    cfg.dt = common.dt;
    cfg.threads = common.threads;

    const SweepResult sw = sweep(model, cfg, form, step_grid, nsamp_grid);

    auto file = open_output(out_path);
    CsvWriter csv(file);
    csv.comment_seed(common.seed);
    csv.comment("model", model.name);
    csv.comment("dt", format_double(cfg.dt));
    csv.comment("ell", format_double(ell));
    std::vector<std::string> head{"n_samp", "delta"};
    for (std::size_t n : sw.step_grid)
        head.push_back("T=" + format_double(static_cast<double>(n) * cfg.dt));
    csv.header(head);
    for (std::size_t i = 0; i < sw.sample_counts.size(); ++i) {
        std::vector<double> row{static_cast<double>(sw.sample_counts[i]), sw.deltas[i]};
        row.insert(row.end(), sw.margins[i].begin(), sw.margins[i].end());
        csv.row(row);
    }
    std::cout << "wrote " << sw.sample_counts.size() << " x " << sw.step_grid.size()
              << " margin matrix to " << out_path << "\n";
    return kExitOk;
}

int run_repro_cmd(const std::string& id, const std::string& out_dir, std::uint64_t seed,
                  int threads) {
    std::vector<std::string> ids;
    if (id == "all")
        ids = repro_ids();
    else
        ids.push_back(id);

    bool all_pass = true;
    for (const auto& one : ids) {
        const ReproOutcome out = run_repro(one, out_dir, seed, threads);
        for (const auto& c : out.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << out.id << ": " << c.label
                      << "  value=" << format_double(c.value);
            if (c.tolerance > 0.0)
                std::cout << " expected=" << format_double(c.expected) << " +/- "
                          << format_double(c.tolerance);
            if (!c.note.empty()) std::cout << "  (" << c.note << ")";
            std::cout << "\n";
        }
        for (const auto& n : out.notes) std::cout << "[note] " << out.id << ": " << n << "\n";
        for (const auto& f : out.emitted_files) std::cout << "[file] " << f << "\n";
        all_pass = all_pass && out.all_pass;
    }
    return all_pass ? kExitOk : kExitData;
}

// Expands `--config FILE` into the argument list: file entries are
// key=value lines (# comments) and are inserted before the explicit
// flags, so flags win. Unknown keys are rejected by the regular parser.
std::vector<std::string> splice_config(const std::vector<std::string>& argv) {
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    std::string config_path;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--config") {
            if (i + 1 >= argv.size()) throw CLI::ParseError("--config needs a file", kExitUsage);
            config_path = argv[++i];
            continue;
        }
        if (argv[i].rfind("--config=", 0) == 0) {
            config_path = argv[i].substr(9);
            continue;
        }
        out.push_back(argv[i]);
    }
    if (config_path.empty()) return out;

    std::ifstream file(config_path);
    if (!file) throw std::runtime_error("cannot read config file '" + config_path + "'");
    std::string line;
    while (std::getline(file, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        from_file.push_back("--" + key + "=" + value);
    }
    // program name, subcommand, file-derived options, explicit flags
    std::vector<std::string> spliced;
    std::size_t head = std::min<std::size_t>(2, out.size());
    spliced.insert(spliced.end(), out.begin(), out.begin() + head);
    spliced.insert(spliced.end(), from_file.begin(), from_file.end());
    spliced.insert(spliced.end(), out.begin() + head, out.end());
    return spliced;
}

}  // namespace

int run(const std::vector<std::string>& argv_in) {
    CLI::App app{"forward-invariance certification for fixed-step simulators"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "print help for every subcommand");
    std::string config_doc;
    app.add_option("--config", config_doc,
                   "key=value file; explicit flags override file values");

    CommonOpts common;
    std::string matrix_text;
    std::string out_path = "out.csv";
    std::string grid_out;
    std::string out_dir = ".";
    std::string repro_id;
    double t_min = 0.1, t_max = 10.0, t_step = 0.1;
    double horizon = 5.0;
    std::size_t n_traj = 1000;
    double ell = 1.0;
    std::string p_text;
    std::string t_grid_text, nsamp_text;
    VerificationConfig vcfg;

    auto* bounds_cmd = app.add_subcommand("bounds", "emit the propagation/energy bound table");
    attach_common(bounds_cmd, common, &matrix_text);
    bounds_cmd->add_option("--t-min", t_min, "first horizon (s)");
    bounds_cmd->add_option("--t-max", t_max, "last horizon (s)");
    bounds_cmd->add_option("--t-step", t_step, "horizon grid step (s)");
    bounds_cmd->add_option("--out", out_path, "output CSV")->required();

    auto* mc_cmd = app.add_subcommand("montecarlo", "stress the exponential envelope");
    attach_common(mc_cmd, common, &matrix_text);
    mc_cmd->add_option("--n", n_traj, "number of trajectories");
    mc_cmd->add_option("--T", horizon, "simulation horizon (s)");
    mc_cmd->add_option("--out", out_path, "output CSV")->required();

    auto* verify_cmd = app.add_subcommand("verify", "certify forward invariance of {E <= ell}");
    attach_common(verify_cmd, common, &matrix_text);
    verify_cmd->add_option("--steps", vcfg.n_steps, "number of integration steps N");
    verify_cmd->add_option("--delta", vcfg.delta, "covering radius of the sample set");
    verify_cmd->add_option("--ell", ell, "energy level of the candidate set")->required();
    verify_cmd->add_option("--P", p_text, "row-major energy matrix (default identity)");
    verify_cmd->add_option("--adapt-limit", vcfg.adapt_limit, "max adaptation rounds");
    verify_cmd->add_option("--cap", vcfg.grid_cap, "sample grid size cap");
    verify_cmd->add_flag("--strict-pitch", vcfg.strict_pitch,
                         "build the grid at spacing delta/2 (covering radius delta/4)");
    verify_cmd->add_option("--guard", vcfg.guard_factor, "divergence guard factor");
    verify_cmd->add_option("--out", out_path, "per-sample energy CSV");
    verify_cmd->add_option("--grid-out", grid_out, "sample grid CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "margin matrix over horizons x sample counts");
    attach_common(sweep_cmd, common, &matrix_text);
    sweep_cmd->add_option("--T-grid", t_grid_text, "comma list of step counts N")->required();
    sweep_cmd->add_option("--nsamp-grid", nsamp_text, "comma list of sample counts")->required();
    sweep_cmd->add_option("--ell", ell, "energy level")->required();
    sweep_cmd->add_option("--P", p_text, "row-major energy matrix");
    sweep_cmd->add_option("--cap", vcfg.grid_cap, "sample grid size cap");
    sweep_cmd->add_option("--out", out_path, "margin matrix CSV")->required();

    auto* repro_cmd = app.add_subcommand("repro", "reproduce a worked example or figure");
    repro_cmd->add_option("id", repro_id, "ex2 ex3 ex4 ex6 ex8 ex9 fig1 fig2 fig3 fig4 all")
        ->required();
    repro_cmd->add_option("--out-dir", out_dir, "directory for emitted CSV files");
    std::uint64_t repro_seed = 0;
    int repro_threads = 0;
    repro_cmd->add_option("--seed", repro_seed, "RNG seed");
    repro_cmd->add_option("--threads", repro_threads, "worker cap");

    try {
        std::vector<std::string> argv = splice_config(argv_in);
        // CLI11 parses argv in reverse order, program name removed.
        std::vector<std::string> rargs(argv.rbegin(), argv.rend());
        rargs.pop_back();
        app.parse(rargs);

        common.matrix_a = parse_real_list(matrix_text);
        const std::vector<double> p_entries = parse_real_list(p_text);

        if (bounds_cmd->parsed()) return run_bounds(common, t_min, t_max, t_step, out_path);
        if (mc_cmd->parsed()) return run_montecarlo(common, n_traj, horizon, out_path);
        if (verify_cmd->parsed())
            return run_verify(common, vcfg, ell, p_entries,
                              verify_cmd->count("--out") ? out_path : std::string(), grid_out);
        if (sweep_cmd->parsed()) {
            std::vector<std::size_t> steps, nsamps;
            for (double v : parse_real_list(t_grid_text))
                steps.push_back(static_cast<std::size_t>(std::llround(v)));
            for (double v : parse_real_list(nsamp_text))
                nsamps.push_back(static_cast<std::size_t>(std::llround(v)));
            return run_sweep(common, vcfg, ell, p_entries, steps, nsamps, out_path);
        }
        if (repro_cmd->parsed()) return run_repro_cmd(repro_id, out_dir, repro_seed, repro_threads);
        std::cerr << app.help() << "\n";
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args);
}

}  // namespace stabcert::cli
