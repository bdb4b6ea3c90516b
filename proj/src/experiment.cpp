#include "secrelay/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <boost/crc.hpp>

#include "secrelay/analytic.hpp"

namespace secrelay::experiment {

namespace {

using montecarlo::ProbabilityEstimate;
using QK = QuantityKind;

constexpr QuantityInfo kQuantities[] = {
    {"coefficient-a", QK::Analytic, false, false, "colluding exponent coefficient A"},
    {"direct-colluding", QK::Analytic, false, false, "direct link, colluding eavesdroppers"},
    {"direct-noncolluding", QK::Quadrature, false, false, "direct link, non-colluding eavesdroppers"},
    {"direct-noncolluding-lower", QK::Analytic, false, false, "Jensen bound on direct-noncolluding"},
    {"relay-colluding-lower", QK::Analytic, true, false, "fixed relay, colluding, closed-form lower bound"},
    {"relay-colluding-exact", QK::Quadrature, true, false, "fixed relay, colluding, exact"},
    {"relay-noncolluding-lower", QK::Quadrature, true, false,
     "fixed relay, non-colluding, product of single-hop probabilities"},
    {"relay-noncolluding-jensen", QK::Analytic, true, false, "fixed relay, non-colluding, Jensen bound"},
    {"relay-noncolluding-exact", QK::Quadrature, true, false, "fixed relay, non-colluding, exact (4-D)"},
    {"selected-relay-colluding-lower", QK::Analytic, false, false,
     "midpoint-nearest relay, colluding, lower bound"},
    {"selected-relay-noncolluding-lower", QK::Quadrature, false, false,
     "midpoint-nearest relay, non-colluding, lower bound"},
    {"d-max-direct", QK::Analytic, false, true, "largest d_sd meeting delta directly [m]"},
    {"d-max-relay", QK::Analytic, false, true, "largest d_sd meeting delta via the selected relay [m]"},
    {"secure-gain", QK::Analytic, false, true, "d-max-relay / d-max-direct"},
    {"relay-density-threshold", QK::Analytic, false, true, "lambda_r above which relaying extends range"},
    {"direct-mc", QK::MonteCarlo, false, false, "simulated direct link (--model)"},
    {"relay-mc", QK::MonteCarlo, true, false, "simulated fixed relay (--model)"},
    {"selected-relay-mc", QK::MonteCarlo, false, false, "simulated midpoint-nearest relay (--model)"},
};

std::string normalized(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

std::string snake(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

montecarlo::TrialConfig trial_config(const EvalRequest& r, montecarlo::Scenario scenario) {
    montecarlo::TrialConfig cfg;
    cfg.trials = r.trials;
    cfg.seed = r.seed;
    if (r.window_radius) cfg.window = SimulationWindow{{0.0, 0.0}, *r.window_radius};
    cfg.model = r.model;
    cfg.scenario = std::move(scenario);
    cfg.execution = r.quad.execution;
    return cfg;
}

EvalOutcome numeric(const quadrature::Evaluation& e) { return {e.value, std::nullopt, e}; }

EvalOutcome stochastic(const ProbabilityEstimate& e) { return {e.p_hat, e, std::nullopt}; }

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string exponent_label(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

constexpr double kPi = std::numbers::pi;

struct FigureRelay {
    const char* label;
    double r;
    double theta;
};

constexpr FigureRelay kFigureRelays[] = {{"loc1", 0.0, 0.0}, {"loc2", 5.0, kPi / 3.0}, {"loc3", 10.0, kPi / 2.0}};

EvalRequest figure_base(const FigureOptions& o) {
    EvalRequest r;
    r.params.alpha = 4.0;
    r.params.d_sd = 20.0;
    r.trials = o.trials;
    r.seed = o.seed;
    r.window_radius = o.window_radius;
    r.quad = o.quad;
    return r;
}

// Sparse-to-moderate eavesdropper densities. Above about 2e-4 both curves
// head to zero and the absolute bound gap shrinks again.
constexpr double kFigureLambdaLow = 1e-6;
constexpr double kFigureLambdaHigh = 1e-4;

std::vector<std::string> relay_notes(bool substituted) {
    std::vector<std::string> notes;
    for (const auto& loc : kFigureRelays) {
        notes.push_back(std::string(loc.label) + ": relay at r=" + format_double(loc.r) +
                        " m, theta=" + format_double(loc.theta) + " rad about the S-D midpoint");
    }
    if (substituted) notes.emplace_back("relay locations reuse the fig2 set");
    return notes;
}

Plan relay_figure(std::string_view name, const FigureOptions& o, EavesdropperModel model) {
    Plan plan;
    plan.name = std::string(name);
    plan.axes.push_back({"lambda-e", kFigureLambdaLow, kFigureLambdaHigh, o.lambda_e_points, true});
    const bool colluding = model == EavesdropperModel::Colluding;
    for (const auto& loc : kFigureRelays) {
        EvalRequest r = figure_base(o);
        r.relay = PolarPoint(loc.r, loc.theta);
        r.model = model;
        const std::string suffix = std::string("_") + loc.label;
        if (colluding) {
            plan.columns.push_back({"exact" + suffix, "relay-colluding-exact", r});
            plan.columns.push_back({"lower" + suffix, "relay-colluding-lower", r});
        } else {
            plan.columns.push_back({"exact" + suffix, "relay-noncolluding-exact", r});
            plan.columns.push_back({"lower" + suffix, "relay-noncolluding-lower", r});
            plan.columns.push_back({"jensen" + suffix, "relay-noncolluding-jensen", r});
        }
        plan.columns.push_back({"mc" + suffix, "relay-mc", r});
    }
    plan.notes = relay_notes(!colluding);
    return plan;
}

Plan fig4(const FigureOptions& o) {
    Plan plan;
    plan.name = "fig4";
    plan.axes.push_back({"lambda-e", kFigureLambdaLow, kFigureLambdaHigh, o.lambda_e_points, true});
    for (auto model : {EavesdropperModel::Colluding, EavesdropperModel::NonColluding}) {
        EvalRequest r = figure_base(o);
        r.model = model;
        const std::string m(to_string(model));
        plan.columns.push_back({"direct_" + m, "direct-" + m, r});
        plan.columns.push_back({"direct_mc_" + m, "direct-mc", r});
    }
    for (double lr : {1e-2, 1e-3}) {
        for (auto model : {EavesdropperModel::Colluding, EavesdropperModel::NonColluding}) {
            EvalRequest r = figure_base(o);
            r.params.lambda_r = lr;
            r.model = model;
            const std::string m(to_string(model));
            const std::string suffix = "_lr" + exponent_label(lr);
            plan.columns.push_back({"relay_" + m + suffix, "selected-relay-" + m + "-lower", r});
            plan.columns.push_back({"relay_mc_" + m + suffix, "selected-relay-mc", r});
        }
    }
    plan.notes.emplace_back("relay columns use the relay nearest the S-D midpoint");
    return plan;
}

Plan fig5(const FigureOptions& o) {
    Plan plan;
    plan.name = "fig5";
    plan.axes.push_back({"lambda-r", 1e-6, 10.0, 29, true});
    for (double le : {1e-3, 1e-5}) {
        EvalRequest r = figure_base(o);
        r.params.lambda_e = le;
        r.delta = 0.7;
        const std::string suffix = "_le" + exponent_label(le);
        plan.columns.push_back({"secure_gain" + suffix, "secure-gain", r});
        plan.columns.push_back({"relay_density_threshold" + suffix, "relay-density-threshold", r});
    }
    plan.notes.emplace_back("delta = 0.7; secure gain approaches sqrt(2) as lambda_r grows");
    return plan;
}

Plan fig6(const FigureOptions& o) {
    Plan plan;
    plan.name = "fig6";
    plan.axes.push_back({"d-sd", 5.0, 150.0, 30, false});
    EvalRequest base = figure_base(o);
    base.params.lambda_e = 1e-5;
    base.delta = 0.7;
    plan.columns.push_back({"direct_colluding", "direct-colluding", base});
    plan.columns.push_back({"d_max_direct", "d-max-direct", base});
    for (double lr : {1e-3, 1e-4}) {
        EvalRequest r = base;
        r.params.lambda_r = lr;
        const std::string suffix = "_lr" + exponent_label(lr);
        plan.columns.push_back({"relay_colluding" + suffix, "selected-relay-colluding-lower", r});
        plan.columns.push_back({"d_max_relay" + suffix, "d-max-relay", r});
    }
    plan.columns.push_back({"relay_density_threshold", "relay-density-threshold", base});
    plan.notes.emplace_back("delta = 0.7; d_max columns are the threshold verticals");
    return plan;
}

}  // namespace

std::span<const QuantityInfo> quantities() { return kQuantities; }

const QuantityInfo& quantity_info(std::string_view name) {
    for (const auto& q : kQuantities) {
        if (q.name == name) return q;
    }
    throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

EvalOutcome evaluate(std::string_view quantity, const EvalRequest& r) {
    namespace an = analytic;
    namespace qd = quadrature;
    namespace mc = montecarlo;
    const auto& info = quantity_info(quantity);
    r.params.validate();
    const auto& p = r.params;
    const auto& q = info.name;

    if (info.uses_delta) {
        const SecrecyTarget delta(r.delta);
        if (q == "d-max-direct") return {an::d_max_direct(delta, p), {}, {}};
        if (q == "d-max-relay") return {an::d_max_relay(delta, p), {}, {}};
        if (q == "secure-gain") return {an::secure_gain(delta, p), {}, {}};
        return {an::relay_density_threshold(delta, p), {}, {}};
    }
    if (q == "coefficient-a") return {an::coefficient_a(p.lambda_e, p.alpha), {}, {}};
    if (q == "direct-colluding") return {an::p_direct_colluding(p), {}, {}};
    if (q == "direct-noncolluding") return numeric(qd::p_direct_noncolluding(p, r.quad));
    if (q == "direct-noncolluding-lower") return {an::p_direct_noncolluding_lower(p), {}, {}};
    if (q == "relay-colluding-lower") return {an::p_relay_colluding_lower(r.relay, p), {}, {}};
    if (q == "relay-colluding-exact") return numeric(qd::p_relay_colluding_exact(r.relay, p, r.quad));
    if (q == "relay-noncolluding-lower") return numeric(qd::p_relay_noncolluding_lower(r.relay, p, r.quad));
    if (q == "relay-noncolluding-jensen") return {an::p_relay_noncolluding_lower_jensen(r.relay, p), {}, {}};
    if (q == "relay-noncolluding-exact") return numeric(qd::p_relay_noncolluding_exact(r.relay, p, r.quad));
    if (q == "selected-relay-colluding-lower") return {an::p_selected_relay_colluding_lower(p), {}, {}};
    if (q == "selected-relay-noncolluding-lower") {
        return numeric(qd::p_selected_relay_noncolluding_lower(p, r.quad));
    }
    if (q == "direct-mc") return stochastic(mc::estimate(p, trial_config(r, mc::Direct{})));
    if (q == "relay-mc") return stochastic(mc::estimate(p, trial_config(r, mc::FixedRelay{r.relay})));
    return stochastic(mc::estimate(p, trial_config(r, mc::SelectedRelay{})));
}

void set_parameter(EvalRequest& r, std::string_view name, double value) {
    const auto n = normalized(name);
    if (n == "alpha") r.params.alpha = value;
    else if (n == "lambda-e") r.params.lambda_e = value;
    else if (n == "lambda-r") r.params.lambda_r = value;
    else if (n == "d-sd") r.params.d_sd = value;
    else if (n == "delta") r.delta = value;
    else if (n == "relay-r") r.relay = PolarPoint(value, r.relay.theta());
    else if (n == "relay-theta") r.relay = PolarPoint(r.relay.r(), value);
    else throw std::invalid_argument("cannot sweep unknown parameter '" + std::string(name) + "'");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = start;
        return out;
    }
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / last;
        out[i] = log ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                     : start + t * (stop - start);
    }
    // Pin the endpoints exactly.
    out.front() = start;
    out.back() = stop;
    return out;
}

std::string SweepAxis::spec() const {
    return parameter + "=" + format_double(start) + ":" + format_double(stop) + ":" + std::to_string(points) +
           (log ? ":log" : "");
}

SweepAxis parse_sweep_axis(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw std::invalid_argument("sweep spec must look like param=start:stop:points[:log]");
    }
    SweepAxis axis;
    axis.parameter = normalized(text.substr(0, eq));
    EvalRequest probe;
    set_parameter(probe, axis.parameter, 1.0);  // rejects unknown names

    std::vector<std::string_view> parts;
    auto rest = text.substr(eq + 1);
    for (;;) {
        const auto colon = rest.find(':');
        parts.push_back(rest.substr(0, colon));
        if (colon == std::string_view::npos) break;
        rest = rest.substr(colon + 1);
    }
    if (parts.size() != 3 && parts.size() != 4) {
        throw std::invalid_argument("sweep spec must look like param=start:stop:points[:log]");
    }
    axis.start = parse_number(parts[0], "sweep start");
    axis.stop = parse_number(parts[1], "sweep stop");
    const double points = parse_number(parts[2], "sweep point count");
    if (!(points >= 1.0) || points != std::floor(points) || points > 1e6) {
        throw std::invalid_argument("sweep point count must be a positive integer");
    }
    axis.points = static_cast<std::size_t>(points);
    if (parts.size() == 4) {
        if (parts[3] != "log") throw std::invalid_argument("sweep spacing must be 'log' or omitted");
        axis.log = true;
        if (!(axis.start > 0.0 && axis.stop > 0.0)) {
            throw std::invalid_argument("log sweep bounds must be positive");
        }
    }
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop)) {
        throw std::invalid_argument("sweep bounds must be finite");
    }
    return axis;
}

std::size_t Table::column_index(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::optional<double>> Table::column(std::string_view name) const {
    const auto j = column_index(name);
    std::vector<std::optional<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[j]);
    return out;
}

Table run_plan(const Plan& plan) {
    if (plan.axes.empty() || plan.axes.size() > 2) throw std::invalid_argument("a plan needs one or two axes");
    if (plan.columns.empty()) throw std::invalid_argument("a plan needs at least one column");
    Table table;
    for (const auto& axis : plan.axes) table.header.push_back(snake(axis.parameter));
    for (const auto& col : plan.columns) {
        table.header.push_back(col.label);
        if (quantity_info(col.quantity).kind == QK::MonteCarlo) {
            table.header.push_back(col.label + "_ci_low");
            table.header.push_back(col.label + "_ci_high");
        }
    }

    const auto outer = plan.axes[0].values();
    const auto inner = plan.axes.size() == 2 ? plan.axes[1].values() : std::vector<double>{0.0};
    std::size_t k = 0;
    for (double x : outer) {
        for (double y : inner) {
            std::vector<std::optional<double>> row{x};
            if (plan.axes.size() == 2) row.emplace_back(y);
            for (const auto& col : plan.columns) {
                const bool stochastic_col = quantity_info(col.quantity).kind == QK::MonteCarlo;
                EvalRequest r = col.request;
                r.seed = montecarlo::sweep_point_seed(col.request.seed, k);
                std::optional<double> value;
                std::optional<double> lo;
                std::optional<double> hi;
                try {
                    set_parameter(r, plan.axes[0].parameter, x);
                    if (plan.axes.size() == 2) set_parameter(r, plan.axes[1].parameter, y);
                    const auto out = evaluate(col.quantity, r);
                    value = out.value;
                    if (out.estimate) {
                        lo = out.estimate->ci_low;
                        hi = out.estimate->ci_high;
                    }
                    if (!value) table.diagnostics.push_back({k, col.label, "unbounded"});
                    if (out.numeric && out.numeric->cost_warning) {
                        table.diagnostics.push_back({k, col.label, "quadrature node budget exceeded"});
                    }
                    if (out.numeric && out.numeric->degenerate) {
                        table.diagnostics.push_back({k, col.label, "zero-length hop treated as secure"});
                    }
                } catch (const std::exception& e) {
                    value.reset();
                    table.diagnostics.push_back({k, col.label, e.what()});
                }
                row.push_back(value);
                if (stochastic_col) {
                    row.push_back(lo);
                    row.push_back(hi);
                }
            }
            table.rows.push_back(std::move(row));
            ++k;
        }
    }
    return table;
}

Plan sweep_plan(const EvalRequest& base, std::vector<SweepAxis> axes, std::span<const std::string> names) {
    if (names.empty()) throw std::invalid_argument("a sweep needs at least one --quantity");
    Plan plan;
    plan.name = "sweep";
    plan.axes = std::move(axes);
    for (const auto& name : names) {
        (void)quantity_info(name);
        plan.columns.push_back({snake(name), name, base});
    }
    return plan;
}

Plan figure_plan(std::string_view name, const FigureOptions& o) {
    if (name == "fig2") return relay_figure(name, o, EavesdropperModel::Colluding);
    if (name == "fig3") return relay_figure(name, o, EavesdropperModel::NonColluding);
    if (name == "fig4") return fig4(o);
    if (name == "fig5") return fig5(o);
    if (name == "fig6") return fig6(o);
    throw std::invalid_argument("unknown figure '" + std::string(name) + "' (expected fig2..fig6)");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return {buf, ptr};
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j) out += ',';
        out += csv_field(table.header[j]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            if (row[j] && std::isfinite(*row[j])) out += format_double(*row[j]);
        }
        out += '\n';
    }
    return out;
}

std::string diagnostics_csv(const Table& table) {
    std::string out = "row,column,message\n";
    for (const auto& d : table.diagnostics) {
        out += std::to_string(d.row) + "," + csv_field(d.column) + "," + csv_field(d.message) + "\n";
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
}

std::string checksum(std::string_view content) {
    boost::crc_32_type crc;
    crc.process_bytes(content.data(), content.size());
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
    return "crc32:" + std::string(buf) + ":" + std::to_string(content.size());
}

nlohmann::json params_json(const EvalRequest& r) {
    return {
        {"alpha", r.params.alpha},       {"lambda_e", r.params.lambda_e},
        {"lambda_r", r.params.lambda_r}, {"d_sd", r.params.d_sd},
        {"epsilon", r.params.epsilon},   {"delta", r.delta},
        {"model", std::string(to_string(r.model))},
        {"relay_r", r.relay.r()},        {"relay_theta", r.relay.theta()},
    };
}

nlohmann::json quadrature_json(const quadrature::QuadratureConfig& c) {
    return {
        {"rel_tol", c.rel_tol},
        {"composite_rel_tol", c.composite_rel_tol},
        {"max_subdivisions", c.max_subdivisions},
        {"series_max_terms", c.series_max_terms},
        {"series_term_tol", c.series_term_tol},
        {"fading_order", c.fading_order},
        {"node_budget", c.node_budget},
    };
}

nlohmann::json make_manifest(const RunRecord& record, std::span<const std::pair<std::string, std::string>> outputs,
                             std::string_view timestamp) {
    nlohmann::json m;
    m["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    m["command"] = record.command;
    m["figure"] = record.figure ? nlohmann::json(*record.figure) : nlohmann::json(nullptr);
    m["figure_points"] = record.figure_points;
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : record.axes) axes.push_back(a.spec());
    m["sweep"] = axes;
    m["quantities"] = record.quantity_names;
    m["params"] = params_json(record.base);
    m["monte_carlo"] = {
        {"master_seed", record.base.seed},
        {"trials", record.base.trials},
        {"window_radius",
         record.base.window_radius ? nlohmann::json(*record.base.window_radius) : nlohmann::json(nullptr)},
        {"ci_level", 0.95},
        {"tail_compensation", true},
    };
    m["quadrature"] = quadrature_json(record.base.quad);
    m["timestamp"] = std::string(timestamp);
    nlohmann::json outs = nlohmann::json::object();
    for (const auto& [name, sum] : outputs) outs[name] = sum;
    m["outputs"] = outs;
    m["notes"] = record.notes;
    return m;
}

RunRecord record_from_manifest(const nlohmann::json& m) {
    try {
        if (m.at("tool").at("name").get<std::string>() != kToolName) {
            throw std::invalid_argument("manifest was not written by " + std::string(kToolName));
        }
        RunRecord r;
        r.command = m.at("command").get<std::string>();
        if (r.command != "sweep" && r.command != "figure") {
            throw std::invalid_argument("manifest command must be sweep or figure");
        }
        if (!m.at("figure").is_null()) r.figure = m.at("figure").get<std::string>();
        r.figure_points = m.at("figure_points").get<std::size_t>();
        for (const auto& spec : m.at("sweep")) r.axes.push_back(parse_sweep_axis(spec.get<std::string>()));
        r.quantity_names = m.at("quantities").get<std::vector<std::string>>();
        const auto& p = m.at("params");
        r.base.params.alpha = p.at("alpha").get<double>();
        r.base.params.lambda_e = p.at("lambda_e").get<double>();
        r.base.params.lambda_r = p.at("lambda_r").get<double>();
        r.base.params.d_sd = p.at("d_sd").get<double>();
        r.base.params.epsilon = p.at("epsilon").get<double>();
        r.base.delta = p.at("delta").get<double>();
        r.base.model = parse_eavesdropper_model(p.at("model").get<std::string>());
        r.base.relay = PolarPoint(p.at("relay_r").get<double>(), p.at("relay_theta").get<double>());
        const auto& mc = m.at("monte_carlo");
        r.base.seed = mc.at("master_seed").get<std::uint64_t>();
        r.base.trials = mc.at("trials").get<std::uint64_t>();
        if (!mc.at("window_radius").is_null()) r.base.window_radius = mc.at("window_radius").get<double>();
        const auto& q = m.at("quadrature");
        r.base.quad.rel_tol = q.at("rel_tol").get<double>();
        r.base.quad.composite_rel_tol = q.at("composite_rel_tol").get<double>();
        r.base.quad.max_subdivisions = q.at("max_subdivisions").get<std::size_t>();
        r.base.quad.series_max_terms = q.at("series_max_terms").get<std::size_t>();
        r.base.quad.series_term_tol = q.at("series_term_tol").get<double>();
        r.base.quad.fading_order = q.at("fading_order").get<std::size_t>();
        r.base.quad.node_budget = q.at("node_budget").get<std::size_t>();
        r.notes = m.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
    }
}

Plan plan_for(const RunRecord& record) {
    if (record.command == "figure") {
        if (!record.figure) throw std::invalid_argument("figure run without a figure name");
        FigureOptions o;
        o.trials = record.base.trials;
        o.seed = record.base.seed;
        o.window_radius = record.base.window_radius;
        o.quad = record.base.quad;
        o.lambda_e_points = record.figure_points;
        return figure_plan(*record.figure, o);
    }
    return sweep_plan(record.base, record.axes, record.quantity_names);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace secrelay::experiment
