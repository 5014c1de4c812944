// Command-line front end: single runs, parameter sweeps, phase-jitter
// studies, master-equation conformance checks, and figure emission.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "chiral/config.hpp"
#include "chiral/errors.hpp"
#include "chiral/io.hpp"
#include "chiral/run.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumeric = 4;

struct CommonFlags {
    std::string config_path;
    std::string output_dir;
    int threads = -1;
    std::optional<int> n_sites;
    std::optional<int> n_excitations;
    std::optional<double> directionality;
    std::optional<double> xi;
    std::optional<double> t_max;
    std::optional<int> n_points;
    std::optional<std::string> initial;
    bool figures = false;
    bool renormalize = false;
    bool refine_tc = false;
    bool dump_kernel = false;
    bool dump_basis = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("-c,--config", flags.config_path, "configuration file (JSON)");
    cmd->add_option("-o,--output", flags.output_dir, "output directory");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
    cmd->add_option("-N,--n-sites", flags.n_sites, "number of sites");
    cmd->add_option("-M,--n-excitations", flags.n_excitations, "number of excitations");
    cmd->add_option("-D,--directionality", flags.directionality, "directionality in [-1, 1]");
    cmd->add_option("--xi", flags.xi, "lattice phase k_s d");
    cmd->add_option("--t-max", flags.t_max, "time horizon in units of 1/gamma");
    cmd->add_option("--n-points", flags.n_points, "output grid points");
    cmd->add_option("--initial", flags.initial,
                    "initial state, e.g. product:20,21 | theta_phi:19,0.785,0.785 | six_fold:19");
    cmd->add_flag("--figures", flags.figures, "emit SVG figures");
    cmd->add_flag("--renormalize", flags.renormalize, "divide out the decaying norm");
    cmd->add_flag("--refine-tc", flags.refine_tc, "parabolic refinement of t_c");
    cmd->add_flag("--dump-kernel", flags.dump_kernel, "write kernel.csv (row,col,re,im triplets)");
    cmd->add_flag("--dump-basis", flags.dump_basis, "write basis.json (states and sectors)");
}

void write_debug_dumps(const chiral::SimulationConfig& config, bool dump_kernel,
                       bool dump_basis) {
    const auto basis =
        chiral::enumerate_basis(config.params.n_sites, config.params.n_excitations);
    const std::filesystem::path dir = config.output_dir;
    if (dump_basis) {
        nlohmann::json j;
        j["n_sites"] = basis.n_sites;
        j["n_excitations"] = basis.n_excitations;
        j["states"] = basis.states;
        j["sector_offsets"] = basis.sector_offsets;
        chiral::write_text_atomic(dir / "basis.json", j.dump(2) + "\n");
    }
    if (dump_kernel) {
        const auto kernel = chiral::build_kernel(basis, config.params);
        std::ostringstream csv;
        csv << "row,col,re,im\n";
        for (Eigen::Index p = 0; p < kernel.entries.rows(); ++p)
            for (Eigen::Index q = 0; q < kernel.entries.cols(); ++q) {
                const auto v = kernel.entries(p, q);
                if (v == std::complex<double>(0.0, 0.0)) continue;
                csv << p << ',' << q << ',' << chiral::format_double(v.real()) << ','
                    << chiral::format_double(v.imag()) << '\n';
            }
        chiral::write_text_atomic(dir / "kernel.csv", csv.str());
    }
}

chiral::InitialStateSpec parse_initial(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream rest(text.substr(colon + 1));
        std::string token;
        while (std::getline(rest, token, ','))
            if (!token.empty()) args.push_back(std::stod(token));
    }
    if (kind == "product") {
        chiral::ExcitationTuple sites;
        for (double v : args) sites.push_back(static_cast<int>(v));
        return chiral::ProductState{sites};
    }
    if (kind == "theta_phi") {
        if (args.size() != 3)
            throw chiral::ValidationError("--initial theta_phi needs j,phi,theta");
        return chiral::ThetaPhiState{static_cast<int>(args[0]), args[1], args[2]};
    }
    if (kind == "six_fold") {
        if (args.size() != 1) throw chiral::ValidationError("--initial six_fold needs j");
        return chiral::SixFoldState{static_cast<int>(args[0])};
    }
    throw chiral::ValidationError("unknown initial state '" + kind +
                                  "' (use product/theta_phi/six_fold)");
}

chiral::SimulationConfig assemble_config(const CommonFlags& flags) {
    chiral::SimulationConfig config;
    if (!flags.config_path.empty()) config = chiral::load_config(flags.config_path);
    if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
    if (flags.threads >= 0) config.threads = flags.threads;
    if (flags.n_sites) config.params.n_sites = *flags.n_sites;
    if (flags.n_excitations) config.params.n_excitations = *flags.n_excitations;
    if (flags.directionality) config.params.directionality = *flags.directionality;
    if (flags.xi) config.params.xi = *flags.xi;
    if (flags.t_max) config.grid.t_max = *flags.t_max;
    if (flags.n_points) config.grid.n_points = *flags.n_points;
    if (flags.initial) config.initial = parse_initial(*flags.initial);
    if (flags.figures) config.figures = true;
    if (flags.renormalize) config.renormalize = true;
    if (flags.refine_tc) config.refine_tc = true;
    return config;
}

void print_bundle(const chiral::ResultBundle& bundle) {
    std::cout << "wrote " << bundle.manifest.size() << " files to " << bundle.directory.string()
              << "\n";
    for (const auto& warning : bundle.warnings) std::cout << "warning: " << warning << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chirally coupled atomic-array excitation transport simulator"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* cmd_run = app.add_subcommand("run", "single simulation with data files");
    add_common_flags(cmd_run, flags);

    auto* cmd_sweep = app.add_subcommand("sweep", "scan theta, directionality, or xi");
    add_common_flags(cmd_sweep, flags);
    std::string sweep_axis = "theta";
    std::vector<double> sweep_values;
    cmd_sweep->add_option("--axis", sweep_axis, "theta | directionality | xi");
    cmd_sweep->add_option("--values", sweep_values, "sweep values (overrides config)");

    auto* cmd_jitter = app.add_subcommand("jitter", "theta-noise robustness study");
    add_common_flags(cmd_jitter, flags);
    double sigma_theta = -1.0;
    int n_samples = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    cmd_jitter->add_option("--sigma", sigma_theta, "std deviation of the theta noise");
    cmd_jitter->add_option("--samples", n_samples, "ensemble size");
    cmd_jitter->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* cmd_oracle = app.add_subcommand("oracle-check",
                                          "compare against the exact master equation (small N)");
    add_common_flags(cmd_oracle, flags);
    double tolerance = 1e-8;
    cmd_oracle->add_option("--tolerance", tolerance, "pass threshold for all deviations");

    auto* cmd_figures = app.add_subcommand("figures", "emit figures for an existing bundle");
    std::string bundle_dir;
    cmd_figures->add_option("bundle", bundle_dir, "bundle directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const auto config = assemble_config(flags);
            chiral::validate_config(config);  // nothing is written on invalid input
            if (flags.dump_kernel || flags.dump_basis)
                write_debug_dumps(config, flags.dump_kernel, flags.dump_basis);
            print_bundle(chiral::run(config));
        } else if (cmd_sweep->parsed()) {
            auto config = assemble_config(flags);
            if (!sweep_values.empty() || !config.sweep) {
                chiral::SweepSpec spec;
                spec.axis = chiral::sweep_axis_from_string(sweep_axis);
                spec.values = sweep_values;
                config.sweep = std::move(spec);
            }
            print_bundle(chiral::run_sweep(config));
        } else if (cmd_jitter->parsed()) {
            auto config = assemble_config(flags);
            if (!config.jitter) config.jitter = chiral::JitterSpec{};
            if (sigma_theta >= 0.0) config.jitter->sigma_theta = sigma_theta;
            if (n_samples > 0) config.jitter->n_samples = n_samples;
            if (seed_set) config.jitter->seed = seed;
            print_bundle(chiral::run_jitter(config));
        } else if (cmd_oracle->parsed()) {
            const auto bundle = chiral::run_oracle_check(assemble_config(flags), tolerance);
            print_bundle(bundle);
            const auto report = nlohmann::json::parse(
                chiral::read_text(bundle.directory / "oracle_report.json"));
            std::cout << "oracle check " << (report.at("passed").get<bool>() ? "PASS" : "FAIL")
                      << ": max block deviation " << report.at("max_block_deviation").get<double>()
                      << "\n";
            if (!report.at("passed").get<bool>()) return kExitNumeric;
        } else if (cmd_figures->parsed()) {
            print_bundle(chiral::emit_figures(bundle_dir));
        }
    } catch (const chiral::ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const chiral::CapacityError& err) {
        std::cerr << "capacity error: " << err.what() << "\n";
        return kExitCapacity;
    } catch (const chiral::NumericError& err) {
        std::cerr << "numeric error: " << err.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
