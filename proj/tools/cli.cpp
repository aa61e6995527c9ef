#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "job_config.hpp"
#include "salz/errors.hpp"
#include "salz/io.hpp"
#include "salz/models.hpp"
#include "salz/sweeps.hpp"

namespace salz::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numbers go through parse_double so flag parsing ignores the C locale.
CLI::Option* add_real(CLI::App* app, const std::string& name, double& target, const std::string& desc) {
    return app->add_option_function<std::string>(
        name,
        [&target, name](const std::string& s) {
            const auto v = parse_double(s);
            if (!v) throw CLI::ValidationError(name, "not a number: " + s);
            target = *v;
        },
        desc);
}

CLI::Option* add_real(CLI::App* app, const std::string& name, std::optional<double>& target, const std::string& desc) {
    return app->add_option_function<std::string>(
        name,
        [&target, name](const std::string& s) {
            const auto v = parse_double(s);
            if (!v) throw CLI::ValidationError(name, "not a number: " + s);
            target = *v;
        },
        desc);
}

void add_propagation_flags(CLI::App* app, PropagationConfig& c, bool with_t0) {
    if (with_t0) add_real(app, "--t0", c.t0, "Half window [-t0, t0] (default: automatic)");
    add_real(app, "--rel-tol", c.rel_tol, "Relative integrator tolerance");
    add_real(app, "--abs-tol", c.abs_tol, "Absolute integrator tolerance");
    add_real(app, "--conv-tol", c.conv_tol, "Continuation stopping threshold on P");
    app->add_option("--max-steps", c.max_steps, "Step budget per integration");
    app->add_option("--max-doublings", c.max_doublings, "Continuation attempts");
    add_real(app, "--phase-step", c.phase_step_fraction, "Step cap as a fraction of 1/gap");
}

void add_synth_flags(CLI::App* app, SynthParams& s) {
    app->add_option("--seed", s.seed, "Random seed");
    app->add_option("--n-modes", s.n_modes, "Number of Fourier modes");
    add_real(app, "--corr-length", s.corr_length, "Correlation length (nm)");
    add_real(app, "--mean-coupling", s.mean_coupling, "RMS coupling |Delta| (ueV)");
    add_real(app, "--extent", s.extent, "Landscape length (nm)");
    app->add_option("--samples-per-corr", s.samples_per_corr, "Samples per correlation length");
}

std::string config_path_from(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    return path;
}

unsigned resolve_workers(const std::optional<unsigned>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SALZ_WORKERS"); env && *env) {
        unsigned v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [p, ec] = std::from_chars(env, end, v);
        if (ec != std::errc{} || p != end) throw UsageError(std::string("SALZ_WORKERS is not a count: ") + env);
        return v;
    }
    return 0;
}

void write_json(const std::string& path, const ordered_json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

ordered_json result_json(const TransitionResult& r) {
    auto seq = ordered_json::array();
    for (double p : r.p_sequence) seq.push_back(p);
    return {{"p_numeric", r.p},
            {"converged", r.converged},
            {"t0_used", r.t0_used},
            {"rel_tol_used", r.rel_tol_used},
            {"steps", r.steps},
            {"norm_drift", r.norm_drift},
            {"p_sequence", seq}};
}

int cmd_simulate(const JobConfig& job, std::ostream& out) {
    const SimulateJob& s = job.simulate;
    if (!s.delta0) throw UsageError("missing --delta0");
    if (!s.alpha) throw UsageError("missing --alpha");
    if (!s.beta) throw UsageError("missing --beta");
    const GenLZParams params{*s.delta0, *s.alpha, *s.beta};
    params.validate();
    const GenLZModel model(params);
    const TransitionResult res = propagate_autoconverge(model, s.prop);

    out << "p_numeric " << format_double(res.p) << "\n";
    std::optional<double> p_lz;
    if (params.alpha > 0.0) {
        p_lz = lz_probability(params.delta0, params.alpha);
        out << "p_lz " << format_double(*p_lz) << "\n";
    }
    out << "t0_used " << format_double(res.t0_used) << "\n";
    out << "steps " << res.steps << "\n";
    out << "norm_drift " << format_double(res.norm_drift) << "\n";

    if (!s.trajectory_path.empty()) {
        // Re-run the accepted window at the accepted tolerances, recording every step.
        PropagationConfig run = s.prop;
        run.t0 = res.t0_used;
        run.rel_tol = res.rel_tol_used;
        run.abs_tol = res.abs_tol_used;
        std::string csv = "t,re_a0,im_a0,re_a1,im_a1,p_adiabatic\n";
        propagate(model, run, [&csv](const TrajectoryPoint& pt) {
            csv += format_double(pt.t) + "," + format_double(pt.state.a0.real()) + "," +
                   format_double(pt.state.a0.imag()) + "," + format_double(pt.state.a1.real()) + "," +
                   format_double(pt.state.a1.imag()) + "," + format_double(pt.p_adiabatic) + "\n";
        });
        write_text_file(s.trajectory_path, csv);
    }
    if (!s.json_path.empty()) {
        ordered_json doc;
        doc["config"] = to_json(job);
        doc["result"] = result_json(res);
        doc["result"]["p_lz"] = p_lz ? ordered_json(*p_lz) : ordered_json(nullptr);
        write_json(s.json_path, doc);
    }
    return kOk;
}

int cmd_sweep(const JobConfig& job, std::ostream& out, std::ostream& err) {
    const SweepJob& s = job.sweep;
    if (!s.alpha_range) throw UsageError("missing --alpha-range");
    if (!s.beta_range) throw UsageError("missing --beta-range");
    if (s.out_dir.empty()) throw UsageError("missing --out");

    SweepGrid grid;
    grid.alpha_axis = linear_axis(s.alpha_range->lo, s.alpha_range->hi, s.alpha_range->n);
    grid.beta_axis = linear_axis(s.beta_range->lo, s.beta_range->hi, s.beta_range->n);
    grid.delta0 = s.delta0;
    grid.cfg = s.prop;
    grid.comparisons = s.compare;
    grid.validate();

    const auto records = run_sweep(grid, {resolve_workers(s.workers)});

    std::error_code ec;
    std::filesystem::create_directories(s.out_dir, ec);
    if (ec) throw IoError("cannot create directory " + s.out_dir + ": " + ec.message());
    std::ostringstream csv;
    write_sweep_csv(csv, records, {s.timing});
    write_text_file((std::filesystem::path(s.out_dir) / "sweep.csv").string(), csv.str());

    auto summary = ordered_json::parse(sweep_summary_json(grid, records));
    summary["config"] = to_json(job);
    write_json((std::filesystem::path(s.out_dir) / "summary.json").string(), summary);

    std::size_t failed = 0;
    for (const auto& r : records) failed += r.converged ? 0 : 1;
    out << "points " << records.size() << "\n";
    out << "failed " << failed << "\n";
    if (failed) err << "warning: " << failed << " point(s) did not converge; see summary.json\n";
    return kOk;
}

int cmd_landscape_gen(const JobConfig& job, std::ostream& out, std::ostream& err) {
    const Landscape land = synth_landscape(job.landscape.synth);
    if (land.phase_undersampled()) err << "warning: landscape phase is undersampled\n";
    const std::string csv = landscape_to_csv(land);
    if (job.landscape.out.empty()) out << csv;
    else write_text_file(job.landscape.out, csv);
    return kOk;
}

Landscape load_landscape(const ShuttleJob& h, std::ostream& err) {
    Landscape land = h.landscape_path.empty()
                         ? synth_landscape(h.synth).with_interpolation(h.interpolation)
                         : landscape_from_csv(read_text_file(h.landscape_path), h.interpolation);
    if (land.phase_undersampled()) err << "warning: landscape phase is undersampled\n";
    return land;
}

VelocitySchedule build_schedule(const ShuttleJob& h, const Landscape& land) {
    if (!h.schedule_in.empty()) {
        VelocitySchedule s = schedule_from_csv(read_text_file(h.schedule_in));
        s.kind = h.schedule;
        return s;
    }
    if (!h.velocity) throw UsageError("missing --velocity");
    const SpeedCaps caps{h.v_min.value_or(*h.velocity / 100.0), h.v_max.value_or(*h.velocity * 100.0)};
    return make_schedule(land, h.schedule, *h.velocity, caps, h.schedule_opts);
}

int cmd_shuttle_sim(const JobConfig& job, std::ostream& out, std::ostream& err) {
    const ShuttleJob& h = job.shuttle;
    const Landscape land = load_landscape(h, err);
    const VelocitySchedule sched = build_schedule(h, land);
    if (!h.schedule_out.empty()) write_text_file(h.schedule_out, schedule_to_csv(sched));

    ShuttleOptions opts;
    opts.prominence_rel = h.prominence_rel;
    const ShuttleResult res = shuttle_simulate(land, sched, h.prop, opts);
    out << "schedule " << to_string(res.schedule_kind) << "\n";
    out << "fidelity " << format_double(res.fidelity) << "\n";
    out << "p_excite " << format_double(res.p_excite) << "\n";
    out << "duration_ns " << format_double(res.duration) << "\n";
    out << "anticrossings " << res.anticrossings.size() << "\n";
    if (!h.json_path.empty()) {
        ordered_json doc;
        doc["config"] = to_json(job);
        doc["result"] = ordered_json::parse(shuttle_result_json(res));
        write_json(h.json_path, doc);
    }
    return kOk;
}

int cmd_shuttle_schedule(const JobConfig& job, std::ostream& out, std::ostream& err) {
    const ShuttleJob& h = job.shuttle;
    const Landscape land = load_landscape(h, err);
    const std::string csv = schedule_to_csv(build_schedule(h, land));
    if (h.schedule_out.empty()) out << csv;
    else write_text_file(h.schedule_out, csv);
    return kOk;
}

void add_shuttle_flags(CLI::App* app, ShuttleJob& h, std::string& interp, std::string& kind) {
    app->add_option("--landscape", h.landscape_path, "Landscape CSV (default: synthesize)");
    add_synth_flags(app, h.synth);
    app->add_option("--interpolation", interp, "monotone-cubic or piecewise-linear")
        ->check(CLI::IsMember({"monotone-cubic", "piecewise-linear"}));
    app->add_option("--schedule", kind, "constant, gap-adaptive or constant-angular")
        ->check(CLI::IsMember({"constant", "gap-adaptive", "constant-angular"}));
    add_real(app, "--velocity", h.velocity, "Average velocity (m/s)");
    add_real(app, "--v-min", h.v_min, "Lower speed cap (m/s, default velocity/100)");
    add_real(app, "--v-max", h.v_max, "Upper speed cap (m/s, default velocity*100)");
    add_real(app, "--gap-exponent", h.schedule_opts.gap_exponent, "Exponent p of v ~ |Delta|^p");
    add_real(app, "--eps-rel", h.schedule_opts.eps_rel, "Phase-rate floor relative to max |phi'|");
    app->add_option("--schedule-in", h.schedule_in, "Use this schedule CSV instead of building one");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    JobConfig job;
    try {
        if (const std::string path = config_path_from(args); !path.empty())
            job = job_from_json(nlohmann::json::parse(read_text_file(path)), job);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        err << "error: config: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App app{"Driven two-level system and valley shuttling simulations", "salz"};
    app.require_subcommand(1);
    std::string config_path;

    auto* sim = app.add_subcommand("simulate", "Transition probability of the generalized LZ model");
    sim->add_option("--config", config_path, "JSON config; flags override it");
    add_real(sim, "--delta0", job.simulate.delta0, "Minimum gap");
    add_real(sim, "--alpha", job.simulate.alpha, "Sweep rate alpha");
    add_real(sim, "--beta", job.simulate.beta, "Sweep rate beta");
    add_propagation_flags(sim, job.simulate.prop, true);
    sim->add_option("--json", job.simulate.json_path, "Write result and resolved config as JSON");
    sim->add_option("--trajectory", job.simulate.trajectory_path, "Write the trajectory CSV");

    auto* sweep = app.add_subcommand("sweep", "Grid of transition probabilities over (alpha, beta)");
    sweep->add_option("--config", config_path, "JSON config; flags override it");
    sweep->add_option_function<std::string>(
        "--alpha-range", [&](const std::string& s) { job.sweep.alpha_range = parse_range(s); }, "lo:hi:n");
    sweep->add_option_function<std::string>(
        "--beta-range", [&](const std::string& s) { job.sweep.beta_range = parse_range(s); }, "lo:hi:n");
    add_real(sweep, "--delta0", job.sweep.delta0, "Minimum gap");
    sweep->add_option("--out", job.sweep.out_dir, "Output directory (sweep.csv, summary.json)");
    sweep->add_option_function<unsigned>(
        "--workers", [&](unsigned w) { job.sweep.workers = w; }, "Worker threads (default: SALZ_WORKERS or all cores)");
    sweep->add_option_function<std::string>(
        "--compare", [&](const std::string& s) { job.sweep.compare = parse_formulas(s); },
        "Closed forms to tabulate: comma list of lz,dk,sl or none");
    sweep->add_flag("--timing", job.sweep.timing, "Fill the wall_time_s column (not reproducible)");
    add_propagation_flags(sweep, job.sweep.prop, false);

    auto* land = app.add_subcommand("landscape", "Coupling landscapes");
    land->require_subcommand(1);
    auto* gen = land->add_subcommand("gen", "Synthesize a seeded landscape CSV");
    gen->add_option("--config", config_path, "JSON config; flags override it");
    add_synth_flags(gen, job.landscape.synth);
    gen->add_option("--out", job.landscape.out, "Output CSV (default: stdout)");

    std::string interp = to_string(job.shuttle.interpolation);
    std::string kind = to_string(job.shuttle.schedule);
    auto* shuttle = app.add_subcommand("shuttle", "Valley dynamics of a shuttled electron");
    shuttle->require_subcommand(1);
    auto* ssim = shuttle->add_subcommand("sim", "Simulate one traversal and report the fidelity");
    ssim->add_option("--config", config_path, "JSON config; flags override it");
    add_shuttle_flags(ssim, job.shuttle, interp, kind);
    add_real(ssim, "--prominence", job.shuttle.prominence_rel, "Anticrossing report threshold relative to max |Delta|");
    add_propagation_flags(ssim, job.shuttle.prop, false);
    ssim->add_option("--schedule-out", job.shuttle.schedule_out, "Also write the schedule CSV");
    ssim->add_option("--json", job.shuttle.json_path, "Write result and resolved config as JSON");
    auto* ssched = shuttle->add_subcommand("schedule", "Build a velocity schedule CSV");
    ssched->add_option("--config", config_path, "JSON config; flags override it");
    add_shuttle_flags(ssched, job.shuttle, interp, kind);
    ssched->add_option("--out", job.shuttle.schedule_out, "Output CSV (default: stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*sim) {
            job.command = "simulate";
            return cmd_simulate(job, out);
        }
        if (*sweep) {
            job.command = "sweep";
            return cmd_sweep(job, out, err);
        }
        if (*gen) {
            job.command = "landscape gen";
            return cmd_landscape_gen(job, out, err);
        }
        job.shuttle.interpolation =
            interp == "piecewise-linear" ? Interpolation::piecewise_linear : Interpolation::monotone_cubic;
        job.shuttle.schedule = *parse_schedule_kind(kind);
        if (*ssim) {
            job.command = "shuttle sim";
            return cmd_shuttle_sim(job, out, err);
        }
        job.command = "shuttle schedule";
        return cmd_shuttle_schedule(job, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << " (last P " << format_double(e.partial_p()) << ")\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace salz::cli
