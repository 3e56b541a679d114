#include "cli.hpp"

#include "warpcmc/cmc.hpp"
#include "warpcmc/conditions.hpp"
#include "warpcmc/conformal_flow.hpp"
#include "warpcmc/errors.hpp"
#include "warpcmc/identities.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace warpcmc::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// A table written either as comma-separated values with a '#' header line
// or as json-lines whose first record carries the header.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> row) { rows.push_back(std::move(row)); }
};

std::string cell(const json& v) {
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number()) return fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_table(const RunConfig& config, const std::string& header, const Table& table) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const bool jsonl = config.format == "json-lines";
    const fs::path path = fs::path(config.output_dir) / (table.name + (jsonl ? ".jsonl" : ".csv"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    if (jsonl) {
        out << json{{"header", header}}.dump() << '\n';
        for (const auto& row : table.rows) {
            json record = json::object();
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                const json& v = row[c];
                record[table.columns[c]] = v.is_number_float() ? finite_or_null(v.get<double>()) : v;
            }
            out << record.dump() << '\n';
        }
    } else {
        out << "# " << header << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell(row[c]);
            out << '\n';
        }
    }
    if (!out) throw Error("error writing " + path.string());
}

bool use_axisymmetric(const RunConfig& config) { return config.axisymmetric || config.model.n != 3; }

std::string resolution(const RunConfig& config) {
    if (use_axisymmetric(config)) return "grid=axisymmetric nodes=" + std::to_string(config.axis_nodes);
    return "grid=full nlat=" + std::to_string(config.nlat) + " nlon=" + std::to_string(2 * config.nlat);
}

std::string header_line(const RunConfig& config, const std::string& extra = {}) {
    std::string h = std::string("warpcmc ") + kVersion + " | " + describe(config.model) + " | " + resolution(config);
    if (!extra.empty()) h += " | " + extra;
    return h;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError("config: " + message);
}

void validate(const RunConfig& c) {
    require(c.model.n >= 3 && c.model.n <= 12, "model.n must lie in [3, 12]");
    require(c.nlat >= 4 && c.nlat <= 256, "grid.nlat must lie in [4, 256]");
    require(c.axis_nodes >= 8 && c.axis_nodes <= 2048, "grid.axis_nodes must lie in [8, 2048]");
    require(c.condition_grid >= 8 && c.condition_grid <= 8192, "grid.condition_grid must lie in [8, 8192]");
    require(c.model.table_size >= 64 && c.model.table_size <= 1 << 16, "model.table_size must lie in [64, 65536]");
    require(c.model.s_max_factor > 1.0, "model.s_max_factor must exceed 1");
    require(c.surface.radius >= 0.0 && c.surface.area_radius >= 0.0, "surface radii must be non-negative");
    require(c.dt >= 0.0, "flow.dt must be positive");
    require(c.t_end > 0.0, "flow.t_end must be positive");
    require(c.epsilon_cut > 0.0, "flow.epsilon_cut must be positive");
    require(c.stride >= 1, "flow.stride must be at least 1");
    require(c.cmc_tol > 0.0, "cmc.tol must be positive");
    require(c.max_iter >= 0, "cmc.max_iter must be non-negative");
    require(c.corpus >= 0 && c.corpus <= 10000, "cmc.corpus must lie in [0, 10000]");
    require(c.amplitude > 0.0 && c.amplitude <= 0.1, "cmc.amplitude must lie in (0, 0.1]");
    require(c.max_degree >= 1 && c.max_degree <= 16, "cmc.max_degree must lie in [1, 16]");
    require(c.variant.empty() || c.variant == "boundary" || c.variant == "ball",
            "check.variant must be boundary or ball");
    require(c.format == "table" || c.format == "json-lines", "output.format must be table or json-lines");
    for (const auto& mode : c.surface.modes) {
        require(mode.degree >= 0 && std::abs(mode.order) <= mode.degree, "surface.modes need |m| <= l");
        require(!use_axisymmetric(c) || mode.order == 0, "axisymmetric grids only carry m = 0 modes");
    }
}

HarmonicMode parse_mode(const std::string& text) {
    std::string s = text;
    for (char& ch : s)
        if (ch == ',' || ch == ':') ch = ' ';
    std::istringstream in(s);
    HarmonicMode m{};
    if (!(in >> m.degree >> m.order >> m.amplitude)) throw ParameterError("bad mode '" + text + "', expected l,m,a");
    std::string rest;
    if (in >> rest) throw ParameterError("bad mode '" + text + "', expected l,m,a");
    return m;
}

RadialCoordinate parse_coordinate(const std::string& s) {
    if (s == "arclength") return RadialCoordinate::arclength;
    if (s == "area_radius" || s == "area-radius") return RadialCoordinate::area_radius;
    throw ParameterError("config: surface.coordinate must be arclength or area_radius");
}

template <class T>
void take(const json& section, const char* key, T& target, const std::string& where) {
    if (!section.contains(key)) return;
    try {
        target = section.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParameterError("config: wrong type for " + where + "." + key);
    }
}

void reject_unknown(const json& section, const std::string& where, std::initializer_list<const char*> keys) {
    if (!section.is_object()) throw ParameterError("config: " + where + " must be an object");
    for (const auto& item : section.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) throw ParameterError("config: unknown key " + where + "." + item.key());
    }
}

std::optional<std::string> output_dir_from_env() {
    const char* env = std::getenv("WARPCMC_OUTPUT_DIR");
    if (env && *env) return std::string(env);
    return std::nullopt;
}

// Surfaces.

SphereGrid make_grid(const RunConfig& config) {
    if (use_axisymmetric(config)) return SphereGrid::axisymmetric(config.model.n, config.axis_nodes);
    return SphereGrid::full(config.nlat);
}

double base_radius(const RunConfig& config, const WarpingFunction& w) {
    if (config.surface.area_radius > 0.0) return w.radius_of(config.surface.area_radius);
    if (config.surface.radius > 0.0) return config.surface.radius;
    if (w.variant() == Variant::boundary) return w.radius_of(2.0 * w.eval(0.0).v);
    return std::min(1.0, 0.5 * w.r_bar());
}

GraphSurface configured_surface(const RunConfig& config, const WarpingFunction& w) {
    GraphSurface s = slice_surface(w, make_grid(config), base_radius(config, w));
    if (!config.surface.modes.empty()) s = perturb_slice(s, config.surface.modes, config.surface.coordinate);
    return s;
}

std::string surface_note(const RunConfig& config, const GraphSurface& s) {
    std::string note = "surface r0=" + short_fmt(s.rho.mean());
    for (const auto& m : config.surface.modes)
        note += " Y(" + std::to_string(m.degree) + "," + std::to_string(m.order) + ")*" + short_fmt(m.amplitude);
    return note;
}

std::string condition_set_name(ConditionSet set) { return set == ConditionSet::H ? "H" : "Hprime"; }

Table identity_table() { return {"identities", {"name", "lhs", "rhs", "residual", "relative_residual", "verdict", "tolerance"}, {}}; }

void add_identity(Table& t, const IdentityReport& r) {
    t.add({r.name, r.lhs, r.rhs, r.residual, r.relative_residual, to_string(r.verdict), r.tolerance_used});
}

std::vector<HarmonicMode> random_modes(std::mt19937_64& rng, const RunConfig& config, bool axisymmetric,
                                       double r0) {
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> degree(1, config.max_degree);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int k = count(rng);
    std::vector<HarmonicMode> modes;
    for (int i = 0; i < k; ++i) {
        const int l = degree(rng);
        int m = 0;
        if (!axisymmetric) m = std::uniform_int_distribution<int>(-l, l)(rng);
        modes.push_back({l, m, unit(rng) * config.amplitude * r0 / k});
    }
    return modes;
}

} // namespace

std::string describe(const ModelSpec& spec) {
    std::string s = "model=" + to_string(spec.family) + " n=" + std::to_string(spec.n);
    switch (spec.family) {
    case Family::sphere:
    case Family::hyperbolic:
        s += " curvature=" + short_fmt(spec.curvature);
        break;
    case Family::schwarzschild:
        s += " m=" + short_fmt(spec.m);
        break;
    case Family::desitter_schwarzschild:
        s += " m=" + short_fmt(spec.m) + " kappa=" + short_fmt(spec.kappa);
        break;
    case Family::reissner_nordstrom:
        s += " m=" + short_fmt(spec.m) + " q=" + short_fmt(spec.q);
        break;
    case Family::tabulated:
        s += " omega_file=" + spec.omega_file;
        break;
    case Family::euclidean:
        break;
    }
    return s;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    RunConfig c;
    reject_unknown(doc, "config", {"model", "grid", "surface", "flow", "cmc", "check", "output"});
    if (doc.contains("model")) {
        const json& m = doc["model"];
        reject_unknown(m, "model", {"family", "n", "m", "kappa", "q", "curvature", "s_max_factor", "r_max",
                                    "omega_file", "table_size"});
        std::string family;
        take(m, "family", family, "model");
        if (!family.empty()) c.model.family = parse_family(family);
        take(m, "n", c.model.n, "model");
        take(m, "m", c.model.m, "model");
        take(m, "kappa", c.model.kappa, "model");
        take(m, "q", c.model.q, "model");
        take(m, "curvature", c.model.curvature, "model");
        take(m, "s_max_factor", c.model.s_max_factor, "model");
        take(m, "r_max", c.model.r_max, "model");
        take(m, "omega_file", c.model.omega_file, "model");
        take(m, "table_size", c.model.table_size, "model");
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, "grid", {"nlat", "axisymmetric", "axis_nodes", "condition_grid"});
        take(g, "nlat", c.nlat, "grid");
        take(g, "axisymmetric", c.axisymmetric, "grid");
        take(g, "axis_nodes", c.axis_nodes, "grid");
        take(g, "condition_grid", c.condition_grid, "grid");
    }
    if (doc.contains("surface")) {
        const json& s = doc["surface"];
        reject_unknown(s, "surface", {"radius", "area_radius", "coordinate", "modes"});
        take(s, "radius", c.surface.radius, "surface");
        take(s, "area_radius", c.surface.area_radius, "surface");
        std::string coordinate;
        take(s, "coordinate", coordinate, "surface");
        if (!coordinate.empty()) c.surface.coordinate = parse_coordinate(coordinate);
        if (s.contains("modes")) {
            std::vector<std::vector<double>> modes;
            take(s, "modes", modes, "surface");
            for (const auto& m : modes) {
                if (m.size() != 3 || m[0] != std::floor(m[0]) || m[1] != std::floor(m[1]))
                    throw ParameterError("config: surface.modes entries must be [l, m, amplitude]");
                c.surface.modes.push_back({static_cast<int>(m[0]), static_cast<int>(m[1]), m[2]});
            }
        }
    }
    if (doc.contains("flow")) {
        const json& f = doc["flow"];
        reject_unknown(f, "flow", {"dt", "t_end", "epsilon_cut", "stride"});
        take(f, "dt", c.dt, "flow");
        take(f, "t_end", c.t_end, "flow");
        take(f, "epsilon_cut", c.epsilon_cut, "flow");
        take(f, "stride", c.stride, "flow");
    }
    if (doc.contains("cmc")) {
        const json& m = doc["cmc"];
        reject_unknown(m, "cmc", {"tol", "max_iter", "corpus", "amplitude", "max_degree", "seed"});
        take(m, "tol", c.cmc_tol, "cmc");
        take(m, "max_iter", c.max_iter, "cmc");
        take(m, "corpus", c.corpus, "cmc");
        take(m, "amplitude", c.amplitude, "cmc");
        take(m, "max_degree", c.max_degree, "cmc");
        take(m, "seed", c.seed, "cmc");
    }
    if (doc.contains("check")) {
        const json& k = doc["check"];
        reject_unknown(k, "check", {"variant"});
        take(k, "variant", c.variant, "check");
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        reject_unknown(o, "output", {"dir", "format"});
        take(o, "dir", c.output_dir, "output");
        take(o, "format", c.format, "output");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

int cmd_check(const RunConfig& config, std::ostream& log) {
    validate(config);
    const Admissibility adm = admissibility(config.model);
    if (!adm.ok) {
        log << "inadmissible parameters: " << describe(config.model) << " violates " << adm.violated << '\n';
        return exit_hypothesis;
    }
    const WarpingFunction w = make_model(config.model);
    ConditionSet set = w.variant() == Variant::ball ? ConditionSet::Hprime : ConditionSet::H;
    if (config.variant == "boundary") set = ConditionSet::H;
    if (config.variant == "ball") set = ConditionSet::Hprime;
    const int n = config.model.n;
    const ConditionReport report = check_conditions(w, n, set, config.condition_grid);
    const std::string header = header_line(config, "conditions=" + condition_set_name(set) + " radial_grid=" +
                                                       std::to_string(config.condition_grid));

    Table summary{"conditions", {"condition", "pass", "degenerate", "min_margin", "worst_radius", "required"}, {}};
    for (std::size_t i = 0; i < report.conditions.size(); ++i) {
        const auto& c = report.conditions[i];
        summary.add({c.name, c.pass, c.degenerate, c.min_margin, c.worst_radius, i < 3});
    }
    write_table(config, header, summary);

    Table margins{"condition_margins", {"radius"}, {}};
    std::vector<const ConditionResult*> columns;
    for (const auto& c : report.conditions)
        if (c.margins.size() == report.grid.size()) {
            margins.columns.push_back(c.name);
            columns.push_back(&c);
        }
    for (std::size_t k = 0; k < report.grid.size(); ++k) {
        std::vector<json> row{report.grid[k]};
        for (const auto* c : columns) row.push_back(c->margins[k]);
        margins.add(std::move(row));
    }
    write_table(config, header, margins);

    Table extrema{"h3_extrema", {"radius", "type", "ricci_distinct"}, {}};
    for (const auto& e : scan_h3_extrema(w, n))
        extrema.add({e.radius, e.type == ExtremumType::min ? "min" : "max", e.ricci_distinct});
    write_table(config, header, extrema);

    for (const auto& c : report.conditions)
        log << c.name << ": " << (c.pass ? "pass" : "FAIL") << (c.degenerate ? " (degenerate)" : "")
            << "  min margin " << short_fmt(c.min_margin) << '\n';
    if (report.degraded_accuracy) log << "warning: tabulated model, condition accuracy degraded\n";
    return report.umbilicity_hypotheses() ? exit_ok : exit_hypothesis;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
    validate(config);
    const WarpingFunction w = make_model(config.model);
    const GraphSurface surface = configured_surface(config, w);
    const GeometryReport report = geometry(surface);
    const std::string header = header_line(config, surface_note(config, surface));

    Table snapshot{"snapshot", {"colatitude", "longitude", "rho", "H", "deficit"}, {}};
    for (Eigen::Index k = 0; k < surface.grid.size(); ++k)
        snapshot.add({surface.grid.colatitude()[k], surface.grid.longitude()[k], surface.rho[k], report.H[k],
                      report.deficit[k]});
    write_table(config, header, snapshot);

    Table table = identity_table();
    std::vector<IdentityReport> results{minkowski_check(surface, report)};
    try {
        results.push_back(minkowski_weighted_check(surface));
    } catch (const NotApplicableError& e) {
        log << "weighted Minkowski check skipped: " << e.what() << '\n';
    }
    results.push_back(hk_check(surface, report));
    bool violated = false;
    for (const auto& r : results) {
        add_identity(table, r);
        violated = violated || r.verdict == Verdict::violated;
        log << r.name << ": " << to_string(r.verdict) << "  relative residual " << short_fmt(r.relative_residual)
            << '\n';
    }
    write_table(config, header, table);
    return violated ? exit_audit : exit_ok;
}

int cmd_flow(const RunConfig& config, std::ostream& log) {
    validate(config);
    const WarpingFunction w = make_model(config.model);
    const GraphSurface surface = configured_surface(config, w);
    FlowOptions options;
    options.epsilon_cut = config.epsilon_cut;
    FlowState state = init_flow(surface, options);
    const double dt = config.dt > 0.0 ? config.dt : 1e-3 * w.r_bar();
    const FlowTrace trace = run(state, config.t_end, dt, config.stride);
    const MonotonicityAudit audit = monotonicity_audit(trace);
    const std::string header = header_line(config, surface_note(config, surface) + " dt=" + short_fmt(dt) +
                                                       " t_end=" + short_fmt(config.t_end));

    Table t{"flow_trace",
            {"t", "Q", "area", "min_alignment", "swept_weighted_volume", "riccati_slack", "active_count"},
            {}};
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        t.add({trace.times[k], trace.q_values[k], trace.areas[k], trace.min_alignment[k],
               trace.swept_weighted_volume[k], trace.riccati_slack[k], static_cast<long long>(trace.active_count[k])});
    write_table(config, header, t);

    Table a{"flow_audit", {"item", "worst_slack", "tolerance", "pass"}, {}};
    bool pass = audit.all_pass();
    for (const auto& item : audit.items) {
        a.add({item.name, item.worst_slack, item.tolerance, item.pass});
        log << item.name << ": " << (item.pass ? "pass" : "VIOLATED") << "  worst slack "
            << short_fmt(item.worst_slack) << '\n';
    }
    if (w.variant() == Variant::boundary && state.active_count() > 0) {
        const AreaFloorReport floor = area_floor_check(state);
        for (const IdentityReport* r : {&floor.area_floor, &floor.weighted_minkowski, &floor.q_floor}) {
            const bool ok = r->verdict != Verdict::violated;
            a.add({r->name, r->rhs - r->lhs, r->tolerance_used, ok});
            log << r->name << ": " << (ok ? "pass" : "VIOLATED") << '\n';
            pass = pass && ok;
        }
    }
    write_table(config, header, a);
    log << "t = " << short_fmt(state.t) << ", active nodes " << state.active_count() << '/' << surface.grid.size()
        << '\n';
    return pass ? exit_ok : exit_audit;
}

int cmd_cmc(const RunConfig& config, std::ostream& log) {
    validate(config);
    const WarpingFunction w = make_model(config.model);
    const SphereGrid grid = make_grid(config);
    const double r0 = base_radius(config, w);
    const GraphSurface base = slice_surface(w, grid, r0);
    std::mt19937_64 rng(config.seed);
    const std::string header =
        header_line(config, "corpus=" + std::to_string(config.corpus) + " seed=" + std::to_string(config.seed) +
                                " r0=" + short_fmt(r0) + " amplitude=" + short_fmt(config.amplitude));

    Table t{"cmc_results",
            {"run", "modes", "converged", "iterations", "mean_H", "cmc_residual", "umbilicity_deficit", "is_slice",
             "slice_spread", "mean_radius", "h4_margin", "volume_drift", "alarm", "reason"},
            {}};
    int alarms = 0, unconverged = 0;
    for (int run_id = 0; run_id < config.corpus; ++run_id) {
        std::vector<HarmonicMode> modes =
            run_id == 0 && !config.surface.modes.empty()
                ? config.surface.modes
                : random_modes(rng, config, grid.mode() == GridMode::axisymmetric, r0);
        std::string label;
        for (const auto& m : modes)
            label += (label.empty() ? "" : " ") + std::to_string(m.degree) + ":" + std::to_string(m.order) + ":" +
                     short_fmt(m.amplitude);
        const GraphSurface start = perturb_slice(base, modes, config.surface.coordinate);
        const CmcResult result = find_cmc(start, config.cmc_tol, config.max_iter);
        const UmbilicityVerdict verdict = umbilicity_verdict(result, w, config.model.n);
        alarms += verdict.alarm;
        unconverged += !result.converged;
        const double drift = std::abs(result.final_volume - result.initial_volume) / std::abs(result.initial_volume);
        t.add({run_id, label, result.converged, result.iterations, result.mean_H, result.cmc_residual,
               result.umbilicity_deficit, result.is_slice, result.slice_spread, verdict.mean_radius, verdict.h4_margin,
               drift, verdict.alarm, result.reason});
    }
    write_table(config, header, t);
    log << config.corpus << " runs, " << unconverged << " not converged, " << alarms << " rigidity alarms\n";
    return alarms == 0 ? exit_ok : exit_audit;
}

int cmd_models(std::ostream& log) {
    log << "family                  variant   defaults\n";
    for (Family f : all_families()) {
        ModelSpec spec;
        spec.family = f;
        if (f == Family::reissner_nordstrom) spec.q = 0.25;
        std::string variant = "boundary";
        if (f == Family::euclidean || f == Family::sphere || f == Family::hyperbolic) variant = "ball";
        if (f == Family::tabulated) variant = "boundary";
        char line[160];
        std::snprintf(line, sizeof line, "%-23s %-9s %s\n", to_string(f).c_str(), variant.c_str(),
                      f == Family::tabulated ? "requires --omega-file" : describe(spec).c_str());
        log << line;
    }
    return exit_ok;
}

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> model, variant, omega_file, output_dir, format, coordinate;
    std::optional<int> n, nlat, axis_nodes, stride, corpus, max_iter, max_degree;
    std::optional<double> m, kappa, q, curvature, radius, area_radius, dt, t_end, epsilon_cut, cmc_tol, amplitude;
    std::optional<std::uint64_t> seed;
    bool axisymmetric = false;
    std::vector<std::string> modes;
};

void add_options(CLI::App& sub, Overrides& o) {
    sub.add_option("--config", o.config_path, "JSON run configuration");
    sub.add_option("--model", o.model, "model family");
    sub.add_option("--n", o.n, "ambient dimension");
    sub.add_option("--m", o.m, "mass parameter");
    sub.add_option("--kappa", o.kappa, "cosmological parameter (desitter-schwarzschild)");
    sub.add_option("--q", o.q, "charge parameter (reissner-nordstrom)");
    sub.add_option("--curvature", o.curvature, "curvature magnitude of space forms");
    sub.add_option("--omega-file", o.omega_file, "two-column (s, omega) profile for the tabulated family");
    sub.add_option("--nlat", o.nlat, "latitudes of the full sphere grid");
    sub.add_option("--axis-nodes", o.axis_nodes, "nodes of the axisymmetric grid");
    sub.add_flag("--axisymmetric", o.axisymmetric, "use the axisymmetric grid");
    sub.add_option("--radius", o.radius, "slice radius r");
    sub.add_option("--area-radius", o.area_radius, "slice at area radius h(r)");
    sub.add_option("--mode", o.modes, "harmonic perturbation l,m,amplitude (repeatable)");
    sub.add_option("--coordinate", o.coordinate, "perturbation coordinate: arclength or area_radius");
    sub.add_option("--output-dir", o.output_dir, "output directory");
    sub.add_option("--format", o.format, "table or json-lines");
}

void apply(const Overrides& o, RunConfig& c) {
    if (o.model) c.model.family = parse_family(*o.model);
    if (o.n) c.model.n = *o.n;
    if (o.m) c.model.m = *o.m;
    if (o.kappa) c.model.kappa = *o.kappa;
    if (o.q) c.model.q = *o.q;
    if (o.curvature) c.model.curvature = *o.curvature;
    if (o.omega_file) c.model.omega_file = *o.omega_file;
    if (o.variant) c.variant = *o.variant;
    if (o.nlat) c.nlat = *o.nlat;
    if (o.axis_nodes) c.axis_nodes = *o.axis_nodes;
    if (o.axisymmetric) c.axisymmetric = true;
    if (o.radius) c.surface.radius = *o.radius;
    if (o.area_radius) c.surface.area_radius = *o.area_radius;
    if (!o.modes.empty()) {
        c.surface.modes.clear();
        for (const auto& m : o.modes) c.surface.modes.push_back(parse_mode(m));
    }
    if (o.coordinate) c.surface.coordinate = parse_coordinate(*o.coordinate);
    if (o.dt) c.dt = *o.dt;
    if (o.t_end) c.t_end = *o.t_end;
    if (o.epsilon_cut) c.epsilon_cut = *o.epsilon_cut;
    if (o.stride) c.stride = *o.stride;
    if (o.cmc_tol) c.cmc_tol = *o.cmc_tol;
    if (o.max_iter) c.max_iter = *o.max_iter;
    if (o.corpus) c.corpus = *o.corpus;
    if (o.amplitude) c.amplitude = *o.amplitude;
    if (o.max_degree) c.max_degree = *o.max_degree;
    if (o.seed) c.seed = *o.seed;
    if (o.format) c.format = *o.format;
}

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (auto env = output_dir_from_env()) c.output_dir = *env;
    apply(o, c);
    if (o.output_dir) c.output_dir = *o.output_dir;
    return c;
}

} // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"Warped-product hypersurface geometry: conditions, identities, conformal flow and CMC experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("warpcmc ") + kVersion);
    Overrides o;

    auto* check = app.add_subcommand("check", "structure conditions and (H3) extrema of a model");
    add_options(*check, o);
    check->add_option("--variant", o.variant, "condition set: boundary (H) or ball (H')");

    auto* verify = app.add_subcommand("verify", "Minkowski and Heintze-Karcher checks on the configured surface");
    add_options(*verify, o);

    auto* flow = app.add_subcommand("flow", "conformal normal flow with monotonicity audit");
    add_options(*flow, o);
    flow->add_option("--dt", o.dt, "time step");
    flow->add_option("--t-end", o.t_end, "final time");
    flow->add_option("--epsilon-cut", o.epsilon_cut, "Jacobian cutoff for node deactivation");
    flow->add_option("--stride", o.stride, "record every stride-th step");

    auto* cmc = app.add_subcommand("cmc", "CMC corpus from seeded perturbed slices");
    add_options(*cmc, o);
    cmc->add_option("--cmc-tol", o.cmc_tol, "target max |H - mean H|");
    cmc->add_option("--max-iter", o.max_iter, "iteration cap per run");
    cmc->add_option("--corpus", o.corpus, "number of runs");
    cmc->add_option("--amplitude", o.amplitude, "perturbation size relative to the slice radius");
    cmc->add_option("--max-degree", o.max_degree, "highest perturbed harmonic degree");
    cmc->add_option("--seed", o.seed, "random seed");

    auto* models = app.add_subcommand("models", "list built-in model families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_hypothesis;
    }

    try {
        if (models->parsed()) return cmd_models(std::cout);
        const RunConfig config = resolve(o);
        if (check->parsed()) return cmd_check(config, std::cout);
        if (verify->parsed()) return cmd_verify(config, std::cout);
        if (flow->parsed()) return cmd_flow(config, std::cout);
        if (cmc->parsed()) return cmd_cmc(config, std::cout);
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const NotApplicableError& e) {
        std::cerr << "not applicable: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const SingularityError& e) {
        std::cerr << "singular parameters: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return exit_hypothesis;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_internal;
}

} // namespace warpcmc::cli
