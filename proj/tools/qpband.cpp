// qpband.cpp — command-line front end: scan, figure, atlas, validate, params

#include "qpband/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <unistd.h>

namespace {

enum ExitCode : int { ok = 0, validation_failed = 1, domain_failure = 2, io_failure = 3, internal_failure = 4 };

void report_error(const std::string& message) {
    const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
    std::cerr << (color ? "\033[1;31merror:\033[0m " : "error: ") << message << '\n';
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qpband::cli::IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw qpband::cli::IoError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qpband::cli;

    CLI::App app{"Qubit-photon bound-state bands of a superconducting qubit chain"};
    app.set_version_flag("--version", std::string(tool_version));
    app.set_config("--config", "", "flat key=value file (# comments); flags override its values");
    app.require_subcommand(1);
    app.fallthrough();

    double beta = 0;
    double gamma = 0;
    std::size_t k_points = 401;
    double tol = 1e-12;
    std::size_t oracle_n = 64;
    std::string out;
    std::string format = "csv";
    std::string figure;
    AtlasConfig atlas_cfg;

    auto* beta_opt = app.add_option("--beta", beta, "dimensionless speed of light sqrt(E_em/E_J)");
    auto* gamma_opt = app.add_option("--gamma", gamma, "E_C / E_J");
    app.add_option("--k-points", k_points, "odd number of K samples over [-pi, pi]")->capture_default_str();
    auto* tol_opt = app.add_option("--tol", tol, "root-finding tolerance (validate: comparison tolerance, default 1e-6)")
                        ->capture_default_str();
    auto* oracle_opt = app.add_option("--oracle-n", oracle_n, "ring size for the exact-diagonalization oracle")
                           ->capture_default_str();
    app.add_option("--out", out, "output file");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--figure", figure, "figure preset fig3a .. fig5d, or 'all' (then --out is a directory)");
    app.add_option("--beta-min", atlas_cfg.beta_min)->capture_default_str();
    app.add_option("--beta-max", atlas_cfg.beta_max)->capture_default_str();
    app.add_option("--gamma-min", atlas_cfg.gamma_min)->capture_default_str();
    app.add_option("--gamma-max", atlas_cfg.gamma_max)->capture_default_str();
    app.add_option("--resolution", atlas_cfg.resolution, "atlas points per axis (log spaced)")->capture_default_str();

    auto* scan_cmd = app.add_subcommand("scan", "solve both bands on a K grid");
    auto* figure_cmd = app.add_subcommand("figure", "band diagram data for a figure preset");
    auto* atlas_cmd = app.add_subcommand("atlas", "flatness / gap / existence map over (beta, gamma)");
    auto* validate_cmd = app.add_subcommand("validate", "compare the solver with finite-ring exact diagonalization");
    auto* params_cmd = app.add_subcommand("params", "print normalized and derived parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        auto require = [](const CLI::Option* opt, const char* name) {
            if (opt->count() == 0) throw std::domain_error(std::string(name) + " is required");
        };
        if (scan_cmd->parsed()) {
            require(beta_opt, "--beta");
            require(gamma_opt, "--gamma");
            if (out.empty()) throw std::domain_error("--out is required");
            ScanConfig cfg{beta, gamma, k_points, tol, std::nullopt, out, parse_format(format)};
            if (oracle_opt->count() > 0) cfg.oracle_n = oracle_n;
            run_scan(cfg);
        } else if (figure_cmd->parsed()) {
            if (figure.empty()) throw std::domain_error("--figure is required");
            ScanConfig base{0, 0, k_points, tol, std::nullopt, {}, parse_format(format)};
            if (oracle_opt->count() > 0) base.oracle_n = oracle_n;
            const std::string ext = base.format == OutputFormat::csv ? ".csv" : ".json";
            if (figure == "all") {
                const std::filesystem::path dir = out.empty() ? "." : out;
                std::filesystem::create_directories(dir);
                for (const auto& preset : all_figure_presets()) {
                    base.output_path = dir / (preset.id() + ext);
                    reproduce_figures(preset, base);
                }
            } else {
                base.output_path = out;
                reproduce_figures(parse_figure(figure), base);
            }
        } else if (atlas_cmd->parsed()) {
            if (out.empty()) throw std::domain_error("--out is required");
            atlas_cfg.k_points = k_points;
            atlas_cfg.tol = tol;
            atlas_cfg.output_path = out;
            atlas_cfg.format = parse_format(format);
            atlas(atlas_cfg);
        } else if (validate_cmd->parsed()) {
            require(beta_opt, "--beta");
            require(gamma_opt, "--gamma");
            ValidateConfig cfg;
            cfg.beta = beta;
            cfg.gamma = gamma;
            cfg.n_cells = oracle_n;
            if (tol_opt->count() > 0) cfg.tol = tol;
            const auto outcome = validate_against_oracle(cfg);
            write_text(outcome.report_json, out);
            if (!outcome.passed) {
                for (const auto& f : outcome.failures) report_error(f);
                return validation_failed;
            }
        } else if (params_cmd->parsed()) {
            require(beta_opt, "--beta");
            require(gamma_opt, "--gamma");
            write_text(params_json({beta, gamma}), out);
        }
    } catch (const IoError& e) {
        report_error(e.what());
        return io_failure;
    } catch (const std::domain_error& e) {
        report_error(e.what());
        return domain_failure;
    } catch (const std::filesystem::filesystem_error& e) {
        report_error(e.what());
        return io_failure;
    } catch (const std::exception& e) {
        report_error(e.what());
        return internal_failure;
    }
    return ok;
}
