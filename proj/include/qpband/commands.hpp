// commands.hpp — Scan, figure, atlas, validate and params drivers behind the qpband CLI
//
// Every driver writes plain data files (CSV or JSON) and is deterministic: the same
// configuration produces byte-identical output. Floating-point values are written as the
// shortest decimal string that round-trips to the same double.

#pragma once

#include "qpband/params.hpp"
#include "qpband/ring_oracle.hpp"
#include "qpband/spectrum.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpband::cli {

inline constexpr const char* tool_version = "qpband 1.0.0";
inline constexpr const char* scan_table_version = "scan-table/1";
inline constexpr const char* atlas_table_version = "atlas-table/1";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& text);

struct ScanConfig {
    double beta = 0;
    double gamma = 0;
    std::size_t k_points = 401;
    double tol = 1e-12;
    std::optional<std::size_t> oracle_n;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::csv;
};

struct FigurePreset {
    int figure;  // 3, 4 or 5
    char panel;  // 'a' .. 'd'

    double beta() const;
    double gamma() const;
    std::string id() const;
};

FigurePreset parse_figure(const std::string& id);
std::vector<FigurePreset> all_figure_presets();

// Shortest round-trip decimal representation (at most 17 significant digits).
std::string format_double(double x);

void validate(const ScanConfig& cfg);

// Column names of the scan table, in order.
const std::vector<std::string>& scan_columns();
const std::vector<std::string>& figure_columns();
const std::vector<std::string>& atlas_columns();

// Writes the table to cfg.output_path and the parameter sidecar to sidecar_path(cfg.output_path).
void run_scan(const ScanConfig& cfg);

// Scan table plus the b = 0 reference band ("pure_attractive"); photon line is already a column.
void reproduce_figures(const FigurePreset& preset, const ScanConfig& base);

struct AtlasConfig {
    double beta_min = 0.1;
    double beta_max = 0.5;
    double gamma_min = 0.2;
    double gamma_max = 10.0;
    std::size_t resolution = 5;  // points per axis, log-spaced, endpoints included
    std::size_t k_points = 401;
    double tol = 1e-12;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::csv;
};

struct AtlasRow {
    double beta;
    double gamma;
    std::optional<double> band1_bandwidth;
    std::optional<double> band1_relative_flatness;
    std::optional<double> band2_max_photon_offset;
    std::optional<double> gap_band1_to_continuum;  // at K = 0
    bool repulsive_exists;
};

std::vector<AtlasRow> compute_atlas(const AtlasConfig& cfg);
void atlas(const AtlasConfig& cfg);

struct ValidateConfig {
    double beta = 0;
    double gamma = 0;
    std::size_t n_cells = 64;
    double tol = 1e-6;         // comparison tolerance for oracle vs solver
    double solver_tol = 1e-12;
    std::optional<std::filesystem::path> output_path;  // stdout when absent
};

struct ValidateOutcome {
    bool passed;
    std::vector<std::string> failures;
    std::string report_json;
};

ValidateOutcome validate_against_oracle(const ValidateConfig& cfg);

// Normalized, derived and cross-check values as a JSON document.
std::string params_json(const DimensionlessParamsd& p);

std::filesystem::path sidecar_path(const std::filesystem::path& table);

}  // namespace qpband::cli
