// commands.cpp — CLI drivers: deterministic CSV/JSON writers around the solver and the oracle

#include "qpband/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace qpband::cli {

using json = nlohmann::ordered_json;

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw std::domain_error("unknown format '" + text + "' (expected csv or json)");
}

double FigurePreset::beta() const {
    switch (figure) {
        case 3: return 0.1;
        case 4: return 0.2;
        case 5: return 0.5;
        default: throw std::domain_error("figure must be fig3, fig4 or fig5");
    }
}

double FigurePreset::gamma() const {
    if (panel < 'a' || panel > 'd') throw std::domain_error("panel must be a, b, c or d");
    return preset_gammas[static_cast<std::size_t>(panel - 'a')];
}

std::string FigurePreset::id() const { return "fig" + std::to_string(figure) + panel; }

FigurePreset parse_figure(const std::string& id) {
    if (id.size() != 5 || id.rfind("fig", 0) != 0) {
        throw std::domain_error("figure id must look like fig3a .. fig5d, got '" + id + "'");
    }
    FigurePreset p{id[3] - '0', id[4]};
    if (p.figure < 3 || p.figure > 5 || p.panel < 'a' || p.panel > 'd') {
        throw std::domain_error("figure id must be one of fig3a .. fig5d, got '" + id + "'");
    }
    return p;
}

std::vector<FigurePreset> all_figure_presets() {
    std::vector<FigurePreset> out;
    for (int f = 3; f <= 5; ++f) {
        for (char p = 'a'; p <= 'd'; ++p) out.push_back({f, p});
    }
    return out;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("refusing to serialize a non-finite value");
    if (x == 0.0) return "0";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return {buf.data(), end};
}

void validate(const ScanConfig& cfg) {
    validate(DimensionlessParamsd{cfg.beta, cfg.gamma});
    if (cfg.k_points < 3 || cfg.k_points % 2 == 0) {
        throw std::domain_error("k-points must be odd and >= 3");
    }
    if (!(cfg.tol > 0)) throw std::domain_error("tol must be > 0");
    if (cfg.oracle_n && (*cfg.oracle_n % 2 != 0 || *cfg.oracle_n < 16)) {
        throw std::domain_error("oracle-n must be even and >= 16");
    }
}

const std::vector<std::string>& scan_columns() {
    static const std::vector<std::string> cols{"K",           "band1",       "band2",      "continuum_lo",
                                               "continuum_hi", "photon_line", "residual1",  "residual2",
                                               "a_prime1",    "a_prime2"};
    return cols;
}

const std::vector<std::string>& figure_columns() {
    static const std::vector<std::string> cols = [] {
        auto c = scan_columns();
        c.push_back("pure_attractive");
        return c;
    }();
    return cols;
}

const std::vector<std::string>& atlas_columns() {
    static const std::vector<std::string> cols{"beta",
                                               "gamma",
                                               "band1_bandwidth",
                                               "band1_relative_flatness",
                                               "band2_max_photon_offset",
                                               "gap_band1_to_continuum",
                                               "repulsive_exists"};
    return cols;
}

std::filesystem::path sidecar_path(const std::filesystem::path& table) {
    auto p = table;
    p += ".params.json";
    return p;
}

namespace {

using Cell = std::optional<double>;
using Row = std::vector<Cell>;

constexpr double serialization_residual_limit = 1e-10;

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.empty()) throw IoError("no output path given");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

json params_object(const NormalizedParamsd& np) {
    return json{{"a", np.a}, {"b", np.b}, {"delta", np.delta}, {"homega_over_2J", np.homega_over_2J}};
}

json cell_json(const Cell& c) { return c ? json(*c) : json(nullptr); }

void write_csv(std::ostream& out, const std::vector<std::string>& cols, const std::vector<Row>& rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (row[i]) out << format_double(*row[i]);
        }
        out << '\n';
    }
}

json rows_json(const std::vector<std::string>& cols, const std::vector<Row>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < cols.size(); ++i) obj[cols[i]] = cell_json(row[i]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

void recheck(const BandPoint<double>& p, const NormalizedParamsd& np) {
    const double g = residual(p.eps, p.k, np);
    if (!(std::abs(g) < serialization_residual_limit)) {
        throw std::runtime_error("internal: band point at K=" + format_double(p.k) +
                                 " fails the residual check");
    }
    if (!(p.eps < continuum_edges(p.k, np).lo)) {
        throw std::runtime_error("internal: band point at K=" + format_double(p.k) +
                                 " is not below the continuum");
    }
}

struct ScanTable {
    NormalizedParamsd params;
    BandScan<double> scan;
    std::vector<Row> rows;
};

ScanTable build_scan_table(const ScanConfig& cfg, bool with_reference) {
    validate(cfg);
    const auto np = normalized_from_dimensionless(DimensionlessParamsd{cfg.beta, cfg.gamma});
    const auto grid = make_k_grid<double>(cfg.k_points);
    ScanTable t{np, scan_bands(np, grid, cfg.tol), {}};
    t.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p1 = t.scan.band1.points[i];
        const auto& p2 = t.scan.band2.points[i];
        if (p1) recheck(*p1, np);
        if (p2) recheck(*p2, np);
        Row row{grid[i],
                p1 ? Cell(p1->eps) : Cell{},
                p2 ? Cell(p2->eps) : Cell{},
                t.scan.continuum[i].lo,
                t.scan.continuum[i].hi,
                t.scan.photon_line[i],
                p1 ? Cell(p1->residual) : Cell{},
                p2 ? Cell(p2->residual) : Cell{},
                p1 ? Cell(p1->a_prime) : Cell{},
                p2 ? Cell(p2->a_prime) : Cell{}};
        if (with_reference) row.push_back(pure_attractive_band(grid[i], np));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::size_t solved_count(const BandCurve<double>& c) {
    return static_cast<std::size_t>(std::count_if(c.points.begin(), c.points.end(),
                                                  [](const auto& p) { return p.has_value(); }));
}

json diagnostics_object(const ScanTable& t) {
    json d = json::object();
    d["band1_solved"] = solved_count(t.scan.band1);
    d["band2_solved"] = solved_count(t.scan.band2);
    for (const auto* curve : {&t.scan.band1, &t.scan.band2}) {
        const std::string name = to_string(curve->band);
        if (solved_count(*curve) > 0) {
            const auto f = flatness(*curve);
            d[name + "_bandwidth"] = f.bandwidth;
            d[name + "_relative_flatness"] = f.relative;
        } else {
            d[name + "_bandwidth"] = nullptr;
            d[name + "_relative_flatness"] = nullptr;
        }
        json errs = json::array();
        for (std::size_t i = 0; i < curve->errors.size(); ++i) {
            if (!curve->errors[i].empty()) {
                errs.push_back(json{{"K", curve->k[i]}, {"error", curve->errors[i]}});
            }
        }
        d[name + "_errors"] = std::move(errs);
    }
    const auto edges = band_edge_closed_form(t.params, Branch::attractive);
    d["edge_closed_form"] = json{{"eps_plus", edges.plus}, {"eps_minus", edges.minus}};
    const auto rep = repulsive_existence(t.params);
    d["repulsive_exists"] = rep.exists;
    d["repulsive_margin"] = rep.margin;
    return d;
}

json oracle_summary(const NormalizedParamsd& np, std::size_t n, double tol) {
    const auto r = compare_with_solver(np, n, tol, false);
    return json{{"n_cells", n},
                {"max_delta_band1", r.max_delta_band1},
                {"max_delta_band2", r.max_delta_band2},
                {"unresolvable_band1", r.unresolvable_band1},
                {"unresolvable_band2", r.unresolvable_band2},
                {"secular_max_residual", r.secular_max_residual}};
}

void write_table(const ScanConfig& cfg, const std::string& table_kind, const ScanTable& t,
                 const std::vector<std::string>& cols, const json& extra) {
    {
        auto out = open_output(cfg.output_path);
        if (cfg.format == OutputFormat::csv) {
            write_csv(out, cols, t.rows);
        } else {
            json doc = json::object();
            doc["version"] = tool_version;
            doc["table"] = table_kind;
            doc["params"] = params_object(t.params);
            doc["params"]["beta"] = cfg.beta;
            doc["params"]["gamma"] = cfg.gamma;
            doc["grid"] = json{{"count", t.scan.band1.grid.count},
                               {"lo", t.scan.band1.grid.lo},
                               {"hi", t.scan.band1.grid.hi}};
            doc["bands"] = rows_json(cols, t.rows);
            doc["diagnostics"] = diagnostics_object(t);
            for (const auto& [key, value] : extra.items()) doc["diagnostics"][key] = value;
            out << doc.dump(2) << '\n';
        }
        finish(out, cfg.output_path);
    }
    const auto side = sidecar_path(cfg.output_path);
    auto out = open_output(side);
    json meta = json::object();
    meta["version"] = tool_version;
    meta["table"] = table_kind;
    meta["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    meta["columns"] = cols;
    meta["beta"] = cfg.beta;
    meta["gamma"] = cfg.gamma;
    meta["k_points"] = cfg.k_points;
    meta["tol"] = cfg.tol;
    meta["params"] = params_object(t.params);
    for (const auto& [key, value] : extra.items()) meta[key] = value;
    out << meta.dump(2) << '\n';
    finish(out, side);
}

std::vector<double> log_axis(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        v[i] = lo * std::pow(hi / lo, t);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

}  // namespace

void run_scan(const ScanConfig& cfg) {
    const auto t = build_scan_table(cfg, false);
    json extra = json::object();
    if (cfg.oracle_n) extra["oracle"] = oracle_summary(t.params, *cfg.oracle_n, 1e-6);
    write_table(cfg, scan_table_version, t, scan_columns(), extra);
}

void reproduce_figures(const FigurePreset& preset, const ScanConfig& base) {
    ScanConfig cfg = base;
    cfg.beta = preset.beta();
    cfg.gamma = preset.gamma();
    if (cfg.output_path.empty()) {
        cfg.output_path = preset.id() + (cfg.format == OutputFormat::csv ? ".csv" : ".json");
    }
    const auto t = build_scan_table(cfg, true);
    json extra = json::object();
    extra["figure"] = preset.id();
    if (cfg.oracle_n) extra["oracle"] = oracle_summary(t.params, *cfg.oracle_n, 1e-6);
    write_table(cfg, scan_table_version, t, figure_columns(), extra);
}

std::vector<AtlasRow> compute_atlas(const AtlasConfig& cfg) {
    validate(DimensionlessParamsd{cfg.beta_min, cfg.gamma_min});
    validate(DimensionlessParamsd{cfg.beta_max, cfg.gamma_max});
    if (cfg.beta_min > cfg.beta_max || cfg.gamma_min > cfg.gamma_max) {
        throw std::domain_error("atlas ranges must satisfy min <= max");
    }
    if (cfg.resolution < 2) throw std::domain_error("atlas resolution must be >= 2");
    if (cfg.k_points < 3 || cfg.k_points % 2 == 0) throw std::domain_error("k-points must be odd and >= 3");
    if (!(cfg.tol > 0)) throw std::domain_error("tol must be > 0");

    const auto grid = make_k_grid<double>(cfg.k_points);
    std::vector<AtlasRow> rows;
    for (double beta : log_axis(cfg.beta_min, cfg.beta_max, cfg.resolution)) {
        for (double gamma : log_axis(cfg.gamma_min, cfg.gamma_max, cfg.resolution)) {
            const auto np = normalized_from_dimensionless(DimensionlessParamsd{beta, gamma});
            const auto scan = scan_bands(np, grid, cfg.tol);
            AtlasRow row{beta, gamma, {}, {}, {}, {}, repulsive_existence(np).exists};
            if (solved_count(scan.band1) > 0) {
                const auto f = flatness(scan.band1);
                row.band1_bandwidth = f.bandwidth;
                row.band1_relative_flatness = f.relative;
            }
            double offset = 0;
            bool any = false;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (const auto& p = scan.band2.points[i]) {
                    offset = std::max(offset, std::abs(p->eps - scan.photon_line[i]));
                    any = true;
                }
            }
            if (any) row.band2_max_photon_offset = offset;
            if (auto p = solve_band1(0.0, np, cfg.tol)) {
                row.gap_band1_to_continuum = continuum_edges(0.0, np).lo - p->eps;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void atlas(const AtlasConfig& cfg) {
    const auto rows = compute_atlas(cfg);
    std::vector<Row> table;
    for (const auto& r : rows) {
        table.push_back({r.beta, r.gamma, r.band1_bandwidth, r.band1_relative_flatness,
                         r.band2_max_photon_offset, r.gap_band1_to_continuum,
                         r.repulsive_exists ? 1.0 : 0.0});
    }
    auto out = open_output(cfg.output_path);
    if (cfg.format == OutputFormat::csv) {
        write_csv(out, atlas_columns(), table);
    } else {
        json doc = json::object();
        doc["version"] = tool_version;
        doc["table"] = atlas_table_version;
        doc["params"] = json{{"beta_min", cfg.beta_min}, {"beta_max", cfg.beta_max},
                             {"gamma_min", cfg.gamma_min}, {"gamma_max", cfg.gamma_max},
                             {"resolution", cfg.resolution}, {"spacing", "log"}};
        doc["grid"] = json{{"count", cfg.k_points}, {"lo", -std::numbers::pi}, {"hi", std::numbers::pi}};
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back(json{{"beta", r.beta},
                               {"gamma", r.gamma},
                               {"band1_bandwidth", cell_json(r.band1_bandwidth)},
                               {"band1_relative_flatness", cell_json(r.band1_relative_flatness)},
                               {"band2_max_photon_offset", cell_json(r.band2_max_photon_offset)},
                               {"gap_band1_to_continuum", cell_json(r.gap_band1_to_continuum)},
                               {"repulsive_exists", r.repulsive_exists}});
        }
        doc["bands"] = std::move(arr);
        doc["diagnostics"] = json{{"tol", cfg.tol}};
        out << doc.dump(2) << '\n';
    }
    finish(out, cfg.output_path);
}

ValidateOutcome validate_against_oracle(const ValidateConfig& cfg) {
    validate(DimensionlessParamsd{cfg.beta, cfg.gamma});
    if (cfg.n_cells % 2 != 0) throw std::domain_error("N must be even (odd N is unsupported)");
    if (cfg.n_cells < 16) throw std::domain_error("N must be >= 16");
    if (!(cfg.tol > 0) || !(cfg.solver_tol > 0)) throw std::domain_error("tol must be > 0");

    const auto np = normalized_from_dimensionless(DimensionlessParamsd{cfg.beta, cfg.gamma});
    const auto r = compare_with_solver(np, cfg.n_cells, cfg.solver_tol, true);

    ValidateOutcome outcome{true, {}, {}};
    json points = json::array();
    for (const auto& p : r.points) {
        const bool is_band1 = true;
        auto band = [&](const std::optional<double>& solver, const std::optional<BoundCandidate<double>>& oracle,
                        const std::optional<double>& delta, const char* name, bool first) {
            auto resolvable_solver_root = [&](double eps) {
                const double factor = resolvability_factor;
                if (first) {
                    return continuum_edges(p.k, np).lo - eps > factor * continuum_edge_spacing(cfg.n_cells, p.k);
                }
                return photon_line(p.k) - eps > factor * photon_line_spacing(cfg.n_cells, p.k);
            };
            json b = json::object();
            b["solver"] = cell_json(solver);
            b["oracle"] = oracle ? json(oracle->eps) : json(nullptr);
            b["delta"] = cell_json(delta);
            b["resolvable"] = oracle ? json(oracle->resolvable) : json(nullptr);
            b["separation"] = oracle ? json(oracle->separation) : json(nullptr);
            b["threshold"] = oracle ? json(oracle->threshold) : json(nullptr);
            if (delta && oracle->resolvable && !(*delta <= cfg.tol)) {
                outcome.failures.push_back(std::string(name) + " delta " + format_double(*delta) +
                                           " > tol at K index " + std::to_string(p.k_index));
            }
            if (oracle && oracle->resolvable && !solver) {
                outcome.failures.push_back(std::string(name) + " found by the oracle only at K index " +
                                           std::to_string(p.k_index));
            }
            if (solver && !oracle && resolvable_solver_root(*solver)) {
                outcome.failures.push_back(std::string(name) + " found by the solver only at K index " +
                                           std::to_string(p.k_index));
            }
            return b;
        };
        json pt = json::object();
        pt["k_index"] = p.k_index;
        pt["K"] = p.k;
        pt["band1"] = band(p.solver_band1, p.oracle_band1, p.delta_band1, "band1", is_band1);
        pt["band2"] = band(p.solver_band2, p.oracle_band2, p.delta_band2, "band2", !is_band1);
        pt["finite_size_estimate_band1"] = p.finite_size_estimate_band1;
        pt["finite_size_caveat"] = p.finite_size_caveat;
        pt["exchange_asymmetry"] = p.exchange_asymmetry;
        pt["secular_max_residual"] = p.secular_max_residual;
        points.push_back(std::move(pt));
    }
    if (!(r.multiset_max_diff <= multiset_tolerance)) {
        outcome.failures.push_back("full real-space spectrum differs from the K-block union by " +
                                   format_double(r.multiset_max_diff));
    }
    if (!(r.secular_max_residual <= secular_tolerance)) {
        outcome.failures.push_back("secular equation residual " + format_double(r.secular_max_residual));
    }
    outcome.passed = outcome.failures.empty();

    json doc = json::object();
    doc["version"] = tool_version;
    doc["params"] = params_object(np);
    doc["params"]["beta"] = cfg.beta;
    doc["params"]["gamma"] = cfg.gamma;
    doc["grid"] = json{{"n_cells", cfg.n_cells}, {"k_count", cfg.n_cells}};
    doc["bands"] = std::move(points);
    doc["diagnostics"] = json{{"tol", cfg.tol},
                              {"solver_tol", cfg.solver_tol},
                              {"max_delta_band1", r.max_delta_band1},
                              {"max_delta_band2", r.max_delta_band2},
                              {"unresolvable_band1", r.unresolvable_band1},
                              {"unresolvable_band2", r.unresolvable_band2},
                              {"multiset_max_diff", r.multiset_max_diff},
                              {"secular_max_residual", r.secular_max_residual},
                              {"max_exchange_asymmetry", r.max_exchange_asymmetry},
                              {"passed", outcome.passed},
                              {"failures", outcome.failures}};
    outcome.report_json = doc.dump(2) + "\n";
    if (cfg.output_path) {
        auto out = open_output(*cfg.output_path);
        out << outcome.report_json;
        finish(out, *cfg.output_path);
    }
    return outcome;
}

std::string params_json(const DimensionlessParamsd& p) {
    const auto np = normalized_from_dimensionless(p);
    const auto e = energies_from_dimensionless(p, 1.0);
    const auto d = derived_from_energies(e);
    const auto check = cross_check(p);
    const auto rep = repulsive_existence(np);
    const auto edges = band_edge_closed_form(np, Branch::attractive);
    const auto asym = band_edge_asymptotic(np, Branch::attractive);
    json doc = json::object();
    doc["version"] = tool_version;
    doc["dimensionless"] = json{{"beta", p.beta}, {"gamma", p.gamma}};
    doc["normalized"] = params_object(np);
    doc["energies_in_units_of_EJ"] = json{{"E_J", e.e_josephson}, {"E_C", e.e_charging}, {"E_em", e.e_em}};
    doc["derived_in_units_of_EJ"] = json{{"homega", d.photon_quantum}, {"J", d.hopping},
                                         {"A", d.attractive},          {"B", d.repulsive},
                                         {"Delta", d.splitting},       {"eps", d.qubit_eps},
                                         {"eta", d.mixing_angle}};
    doc["cross_check"] = json{{"a", check.residual_a},
                              {"b", check.residual_b},
                              {"delta", check.residual_delta},
                              {"homega_over_2J", check.residual_homega},
                              {"max", check.max_residual()}};
    doc["band_edges_at_pi"] = json{{"closed_form", {{"eps_plus", edges.plus}, {"eps_minus", edges.minus}}},
                                   {"asymptotic", {{"eps_plus", asym.plus}, {"eps_minus", asym.minus}}},
                                   {"expansion_parameter", edges.expansion}};
    doc["repulsive"] = json{{"exists", rep.exists}, {"margin", rep.margin}};
    return doc.dump(2) + "\n";
}

}  // namespace qpband::cli
