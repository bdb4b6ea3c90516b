// secrelay-cli: evaluate, sweep, decide and regenerate figure data.
//
//   secrelay-cli eval --quantity direct-colluding --lambda-e 1e-5 --d-sd 20
//   secrelay-cli sweep --sweep lambda-e=1e-5:1e-3:9:log --quantity direct-mc --out direct.csv
//   secrelay-cli decide --lambda-e 1e-5 --lambda-r 1e-3 --d-sd 100 --delta 0.7
//   secrelay-cli figure fig4 --out data/
//   secrelay-cli rerun data/fig4.manifest.json --out again/
//
// The default master seed is 1, or SECRELAY_SEED when set; --seed wins over both.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secrelay/decision.hpp"
#include "secrelay/experiment.hpp"

namespace ex = secrelay::experiment;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
    ex::EvalRequest request;
    std::string model = "colluding";
    std::optional<double> window_radius;
    std::optional<std::uint64_t> seed;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv(std::string(ex::kSeedEnv).c_str())) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string(ex::kSeedEnv) + " must be an unsigned integer");
    }
    return 1;
}

void add_param_flags(CLI::App* app, CommonFlags& f) {
    auto& p = f.request.params;
    app->add_option("--alpha", p.alpha, "path-loss exponent (> 2)")->capture_default_str();
    app->add_option("--lambda-e", p.lambda_e, "eavesdropper density [1/m^2]")->capture_default_str();
    app->add_option("--lambda-r", p.lambda_r, "relay density [1/m^2]")->capture_default_str();
    app->add_option("--d-sd", p.d_sd, "source-destination distance [m]")->capture_default_str();
    app->add_option("--delta", f.request.delta, "target secure connection probability")->capture_default_str();
    app->add_option("--model", f.model, "eavesdropper model for simulated quantities and decide")
        ->check(CLI::IsMember({"colluding", "noncolluding", "non-colluding"}))
        ->capture_default_str();
}

void add_relay_flags(CLI::App* app, double& relay_r, double& relay_theta) {
    app->add_option("--relay-r", relay_r, "fixed relay radius about the S-D midpoint [m]")->capture_default_str();
    app->add_option("--relay-theta", relay_theta, "fixed relay angle [rad]")->capture_default_str();
}

void add_mc_flags(CLI::App* app, CommonFlags& f) {
    app->add_option("--trials", f.request.trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--seed", f.seed, "master seed (default 1, or $SECRELAY_SEED)");
    app->add_option("--window-radius", f.window_radius, "simulation window radius [m] (default: automatic)")
        ->check(CLI::PositiveNumber);
}

void finish(CommonFlags& f, double relay_r, double relay_theta) {
    f.request.model = secrelay::parse_eavesdropper_model(f.model);
    f.request.relay = secrelay::PolarPoint(relay_r, relay_theta);
    f.request.window_radius = f.window_radius;
    f.request.seed = f.seed ? *f.seed : default_seed();
}

std::string quantity_help() {
    std::string text = "Quantities:\n";
    for (const auto& q : ex::quantities()) {
        std::string name(q.name);
        name.resize(std::max<std::size_t>(name.size(), 34), ' ');
        text += "  " + name + std::string(q.summary) + "\n";
    }
    return text;
}

json value_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json eval_record(const std::string& quantity, const ex::EvalRequest& r, const ex::EvalOutcome& out) {
    json rec;
    rec["quantity"] = quantity;
    rec["value"] = value_or_null(out.value);
    rec["unbounded"] = !out.value.has_value();
    rec["params"] = ex::params_json(r);
    if (out.estimate) {
        rec["ci_low"] = out.estimate->ci_low;
        rec["ci_high"] = out.estimate->ci_high;
        rec["ci_level"] = out.estimate->ci_level;
        rec["standard_error"] = out.estimate->standard_error();
        rec["successes"] = out.estimate->successes;
        rec["trials"] = out.estimate->trials;
        rec["seed"] = r.seed;
    }
    if (out.numeric) {
        rec["error_estimate"] = out.numeric->error;
        rec["evaluations"] = out.numeric->evaluations;
        rec["degenerate"] = out.numeric->degenerate;
        rec["cost_warning"] = out.numeric->cost_warning;
    }
    return rec;
}

// CSV, optional diagnostics sidecar and manifest; returns the manifest path.
fs::path emit(const ex::RunRecord& record, const ex::Plan& plan, const fs::path& csv_path) {
    const auto table = ex::run_plan(plan);
    const auto csv = ex::to_csv(table);
    std::vector<std::pair<std::string, std::string>> outputs;
    ex::write_atomic(csv_path, csv);
    outputs.emplace_back(csv_path.filename().string(), ex::checksum(csv));
    fs::path stem = csv_path;
    stem.replace_extension();
    if (!table.diagnostics.empty()) {
        const auto diag = ex::diagnostics_csv(table);
        fs::path diag_path = stem;
        diag_path += ".diagnostics.csv";
        ex::write_atomic(diag_path, diag);
        outputs.emplace_back(diag_path.filename().string(), ex::checksum(diag));
        std::cerr << table.diagnostics.size() << " cell diagnostic(s) written to " << diag_path.string() << "\n";
    }
    auto rec = record;
    rec.notes.insert(rec.notes.end(), plan.notes.begin(), plan.notes.end());
    const auto manifest = ex::make_manifest(rec, outputs, ex::utc_timestamp());
    fs::path manifest_path = stem;
    manifest_path += ".manifest.json";
    ex::write_atomic(manifest_path, manifest.dump(2) + "\n");
    std::cout << csv_path.string() << "\n" << manifest_path.string() << "\n";
    return manifest_path;
}

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void print_report(const secrelay::DecisionReport& r) {
    auto dist = [](const std::optional<double>& d) { return d ? ex::format_double(*d) + " m" : "unbounded"; };
    std::cout << "outcome:                 " << secrelay::to_string(r.outcome) << "\n"
              << "d_sd:                    " << ex::format_double(r.d_sd) << " m\n"
              << "d_max_direct:            " << dist(r.d_max_direct) << "\n"
              << "d_max_relay:             " << dist(r.d_max_relay) << "\n"
              << "secure_gain:             "
              << (r.secure_gain ? ex::format_double(*r.secure_gain) : std::string("n/a")) << "\n"
              << "lambda_r:                " << ex::format_double(r.lambda_r) << " /m^2\n"
              << "relay_density_threshold: " << ex::format_double(r.relay_density_threshold) << " /m^2\n"
              << "note:                    " << r.model_note << "\n";
}

json report_json(const secrelay::DecisionReport& r) {
    return {
        {"outcome", std::string(secrelay::to_string(r.outcome))},
        {"d_sd", r.d_sd},
        {"delta", r.delta},
        {"lambda_r", r.lambda_r},
        {"model", std::string(secrelay::to_string(r.model))},
        {"d_max_direct", value_or_null(r.d_max_direct)},
        {"d_max_relay", value_or_null(r.d_max_relay)},
        {"secure_gain", value_or_null(r.secure_gain)},
        {"relay_density_threshold", r.relay_density_threshold},
        {"model_note", r.model_note},
        {"consistent", r.consistent()},
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure connection probability of direct and relay transmission"};
    app.require_subcommand(1);
    app.footer(quantity_help());

    // eval
    CommonFlags eval_flags;
    double eval_relay_r = 0.0;
    double eval_relay_theta = 0.0;
    std::string eval_quantity;
    auto* eval = app.add_subcommand("eval", "evaluate one quantity and print a JSON record");
    std::vector<std::string> names;
    for (const auto& q : ex::quantities()) names.emplace_back(q.name);
    eval->add_option("--quantity", eval_quantity, "quantity to evaluate")->required()->check(CLI::IsMember(names));
    add_param_flags(eval, eval_flags);
    add_relay_flags(eval, eval_relay_r, eval_relay_theta);
    add_mc_flags(eval, eval_flags);
    eval->footer(quantity_help());

    // sweep
    CommonFlags sweep_flags;
    double sweep_relay_r = 0.0;
    double sweep_relay_theta = 0.0;
    std::vector<std::string> sweep_specs;
    std::vector<std::string> sweep_quantities;
    std::string sweep_out = "sweep.csv";
    auto* sweep = app.add_subcommand("sweep", "sweep one or two parameters and write CSV plus manifest");
    sweep->add_option("--sweep", sweep_specs, "param=start:stop:points[:log]; give once or twice")
        ->required()
        ->expected(1, 2);
    sweep->add_option("--quantity", sweep_quantities, "quantity column(s)")->required()->check(CLI::IsMember(names));
    sweep->add_option("--out", sweep_out, "CSV path")->capture_default_str();
    add_param_flags(sweep, sweep_flags);
    add_relay_flags(sweep, sweep_relay_r, sweep_relay_theta);
    add_mc_flags(sweep, sweep_flags);
    sweep->footer(quantity_help());

    // decide
    CommonFlags decide_flags;
    std::string decide_format = "text";
    auto* decide = app.add_subcommand("decide", "relay-or-not decision for a target delta");
    add_param_flags(decide, decide_flags);
    decide->add_option("--format", decide_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // figure
    CommonFlags fig_flags;
    std::string fig_name;
    std::string fig_out = ".";
    std::size_t fig_points = 9;
    auto* figure = app.add_subcommand("figure", "write figure data (fig2..fig6) as CSV plus manifest");
    figure->add_option("name", fig_name, "fig2, fig3, fig4, fig5 or fig6")->required();
    figure->add_option("--out", fig_out, "output directory")->capture_default_str();
    figure->add_option("--points", fig_points, "lambda_e grid points (fig2-fig4)")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    add_mc_flags(figure, fig_flags);

    // rerun
    std::string rerun_manifest;
    std::string rerun_out = ".";
    auto* rerun = app.add_subcommand("rerun", "regenerate outputs from a manifest and verify checksums");
    rerun->add_option("manifest", rerun_manifest, "manifest written by sweep or figure")->required();
    rerun->add_option("--out", rerun_out, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            finish(eval_flags, eval_relay_r, eval_relay_theta);
            const auto out = ex::evaluate(eval_quantity, eval_flags.request);
            std::cout << eval_record(eval_quantity, eval_flags.request, out).dump() << "\n";
        } else if (sweep->parsed()) {
            finish(sweep_flags, sweep_relay_r, sweep_relay_theta);
            ex::RunRecord record;
            record.command = "sweep";
            for (const auto& s : sweep_specs) record.axes.push_back(ex::parse_sweep_axis(s));
            record.quantity_names = sweep_quantities;
            record.base = sweep_flags.request;
            (void)emit(record, ex::plan_for(record), sweep_out);
        } else if (decide->parsed()) {
            finish(decide_flags, 0.0, 0.0);
            const auto report = secrelay::decide(decide_flags.request.params,
                                                 secrelay::SecrecyTarget(decide_flags.request.delta),
                                                 decide_flags.request.model);
            if (decide_format == "json") {
                std::cout << report_json(report).dump(2) << "\n";
            } else {
                print_report(report);
            }
        } else if (figure->parsed()) {
            finish(fig_flags, 0.0, 0.0);
            ex::RunRecord record;
            record.command = "figure";
            record.figure = fig_name;
            record.figure_points = fig_points;
            record.base = fig_flags.request;
            const auto plan = ex::plan_for(record);
            (void)emit(record, plan, fs::path(fig_out) / (fig_name + ".csv"));
        } else if (rerun->parsed()) {
            const auto manifest = json::parse(read_file(rerun_manifest));
            const auto record = ex::record_from_manifest(manifest);
            const auto table = ex::run_plan(ex::plan_for(record));
            std::vector<std::pair<std::string, std::string>> produced;
            const auto csv = ex::to_csv(table);
            const auto& outputs = manifest.at("outputs");
            std::string csv_name;
            for (const auto& [name, sum] : outputs.items()) {
                if (name.find(".diagnostics.") == std::string::npos) csv_name = name;
            }
            if (csv_name.empty()) throw std::invalid_argument("manifest lists no CSV output");
            ex::write_atomic(fs::path(rerun_out) / csv_name, csv);
            produced.emplace_back(csv_name, ex::checksum(csv));
            if (!table.diagnostics.empty()) {
                const auto diag = ex::diagnostics_csv(table);
                auto diag_name = fs::path(csv_name).replace_extension().string() + ".diagnostics.csv";
                ex::write_atomic(fs::path(rerun_out) / diag_name, diag);
                produced.emplace_back(diag_name, ex::checksum(diag));
            }
            bool identical = produced.size() == outputs.size();
            for (const auto& [name, sum] : produced) {
                const bool match = outputs.contains(name) && outputs.at(name).get<std::string>() == sum;
                identical = identical && match;
                std::cout << name << " " << sum << (match ? " matches" : " DIFFERS") << "\n";
            }
            if (!identical) {
                std::cerr << "rerun did not reproduce the recorded outputs\n";
                return 3;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
