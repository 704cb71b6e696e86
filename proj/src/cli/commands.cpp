#include "kljn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace kljn {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> scenario;
    std::optional<unsigned> threads;
    // validate
    std::size_t samples = 1'000'000;
    double variance_error = 0.0;
    // sweep
    std::optional<std::string> parameter;
    std::vector<double> values;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load_config(const Options& opt)
{
    RunConfig cfg = opt.config_path.empty() ? parse_config("{}")
                                            : parse_config(read_file(opt.config_path));
    if (opt.seed)
        cfg.run.seed = *opt.seed;
    if (opt.trials)
        cfg.run.trials = *opt.trials;
    if (opt.threads)
        cfg.run.threads = *opt.threads;
    if (opt.scenario) {
        auto v = parse_variant(*opt.scenario);
        if (!v)
            throw ConfigError({"--scenario: unknown variant \"" + *opt.scenario +
                               "\" (allowed: " + variant_names() + ")"});
        cfg.experiment.scenario.variant = *v;
    }
    validate_config(cfg);
    return cfg;
}

/// Writes one output file; the writer must not be called twice.
void write_output(const fs::path& dir, const std::string& name,
                  const std::function<void(std::ostream&)>& writer)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    const fs::path path = dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot write '" + path.string() + "'");
    os.imbue(std::locale::classic());
    writer(os);
    os.flush();
    if (!os)
        throw IoError("write failed for '" + path.string() + "'");
}

std::string pct(const Interval& iv)
{
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::setprecision(4) << iv.estimate << " [" << iv.low << ", " << iv.high << "]";
    return ss.str();
}

void print_summary(std::ostream& out, const DetectionReport& r)
{
    out << "scenario            " << to_string(r.scenario.variant) << "\n";
    out << "trials              " << r.trials << " (" << r.tally.beps << " BEPs)\n";
    out << "detection rate      " << pct(r.detection_rate) << "\n";
    out << "  instantaneous     " << pct(r.instant_rate) << "\n";
    out << "  dc average        " << pct(r.dc_rate) << "\n";
    out << "  ac comparison     " << pct(r.ac_rate) << "\n";
    out << "secure fraction     " << pct(r.secure_fraction) << "\n";
    out << "honest BER          " << pct(r.honest_ber) << "\n";
    if (r.fit)
        out << "hidden decay        p=" << r.fit->p << " R2=" << r.fit->r2 << "\n";
    if (r.eve_accuracy)
        out << "eve accuracy        " << pct(*r.eve_accuracy) << "\n";
    if (r.mean_corr_toward_A)
        out << "mean corr A / B     " << *r.mean_corr_toward_A << " / " << *r.mean_corr_toward_B
            << "\n";
    if (r.abort_rate)
        out << "abort rate          " << pct(*r.abort_rate) << "\n";
    if (r.mean_secure_beps_to_detection)
        out << "secure BEPs to det. " << pct(*r.mean_secure_beps_to_detection) << "\n";
}

int cmd_run(const Options& opt, std::ostream& out)
{
    const auto cfg = load_config(opt);
    const auto rep = run_monte_carlo(cfg.experiment, cfg.run);
    const fs::path dir(opt.out_dir);
    write_output(dir, "report.csv", [&](std::ostream& os) { write_report_csv(os, rep); });
    write_output(dir, "summary.csv", [&](std::ostream& os) { write_summary_csv(os, rep); });
    write_output(dir, "hidden_curve.csv", [&](std::ostream& os) { write_hidden_curve_csv(os, rep); });
    print_summary(out, rep);
    return kExitOk;
}

int cmd_validate(const Options& opt, std::ostream& out)
{
    const auto cfg = load_config(opt);
    const auto audit =
        audit_physics(cfg.experiment, cfg.run.seed, opt.samples, 0.01, opt.variance_error);
    write_output(fs::path(opt.out_dir), "validation.csv",
                 [&](std::ostream& os) { write_validation_csv(os, audit); });
    for (const auto& r : audit.rows)
        out << to_string(r.state) << "  " << std::left << std::setw(6) << r.quantity
            << " analytic " << std::setw(13) << r.analytic << " simulated " << std::setw(13)
            << r.simulated << " rel.err " << std::setw(11) << r.relative_error
            << (r.pass ? "  ok" : "  FAIL") << "\n";
    out << (audit.pass() ? "physics audit passed" : "physics audit FAILED") << " ("
        << audit.wall_seconds << " s)\n";
    return audit.pass() ? kExitOk : kExitValidation;
}

int cmd_sweep(const Options& opt, std::ostream& out)
{
    const auto cfg = load_config(opt);
    SweepSpec spec = cfg.sweep.value_or(SweepSpec{});
    if (opt.parameter) {
        auto p = parse_sweep_parameter(*opt.parameter);
        if (!p)
            throw ConfigError({"--parameter: unknown parameter \"" + *opt.parameter +
                               "\" (allowed: dc_gap, injection_rms, samples_per_bep, epsilon, "
                               "kappa)"});
        spec.parameter = *p;
    }
    if (!opt.values.empty())
        spec.values = opt.values;
    if (spec.values.empty())
        throw ConfigError({"sweep.values: no sweep values given (config sweep section or --values)"});

    std::vector<DetectionReport> reports;
    try {
        reports = sweep(cfg.experiment, cfg.run, spec.parameter, spec.values);
    } catch (const std::invalid_argument& e) {
        throw ConfigError({std::string("sweep: ") + e.what()});
    }
    write_output(fs::path(opt.out_dir), "sweep.csv", [&](std::ostream& os) {
        write_sweep_csv(os, spec.parameter, spec.values, reports);
    });
    for (std::size_t i = 0; i < reports.size(); ++i)
        out << to_string(spec.parameter) << "=" << spec.values[i] << "  detection "
            << pct(reports[i].detection_rate) << "\n";
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--config", opt.config_path, "JSON configuration file");
    cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "root seed (overrides config)");
    cmd->add_option("--trials", opt.trials, "trial count (overrides config)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--scenario", opt.scenario, "attack variant (overrides config)");
    cmd->add_option("--threads", opt.threads, "worker threads, 0 = all cores");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    out.imbue(std::locale::classic());
    Options opt;
    CLI::App app{"KLJN key exchange Monte Carlo simulator", "kljn"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "simulate a scenario and write report.csv, summary.csv");
    add_common(run, opt);
    auto* validate = app.add_subcommand("validate", "audit simulated wire statistics");
    add_common(validate, opt);
    validate->add_option("--samples", opt.samples, "samples per state")->capture_default_str();
    validate->add_option("--inject-variance-error", opt.variance_error)->group("");
    auto* sw = app.add_subcommand("sweep", "repeat a run over parameter values");
    add_common(sw, opt);
    sw->add_option("--parameter", opt.parameter, "dc_gap, injection_rms, samples_per_bep, epsilon, kappa");
    sw->add_option("--values", opt.values, "values (overrides config)")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run)
            return cmd_run(opt, out);
        if (*validate)
            return cmd_validate(opt, out);
        return cmd_sweep(opt, out);
    } catch (const ConfigError& e) {
        err << "configuration error:\n";
        for (const auto& v : e.violations())
            err << "  " << v << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace kljn
