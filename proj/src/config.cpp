#include "chiral/config.hpp"

#include <cmath>
#include <sstream>

#include "chiral/errors.hpp"
#include "chiral/io.hpp"

namespace chiral {

namespace {

using nlohmann::json;

json initial_to_json(const InitialStateSpec& spec) {
    json j;
    std::visit(
        [&](const auto& state) {
            using T = std::decay_t<decltype(state)>;
            if constexpr (std::is_same_v<T, ProductState>) {
                j["kind"] = "product";
                j["sites"] = state.sites;
            } else if constexpr (std::is_same_v<T, ThetaPhiState>) {
                j["kind"] = "theta_phi";
                j["j"] = state.j;
                j["phi"] = state.phi;
                j["theta"] = state.theta;
            } else if constexpr (std::is_same_v<T, SixFoldState>) {
                j["kind"] = "six_fold";
                j["j"] = state.j;
            } else {
                j["kind"] = "custom";
                json amps = json::array();
                for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
                    amps.push_back({state.amplitudes(i).real(), state.amplitudes(i).imag()});
                j["amplitudes"] = std::move(amps);
            }
        },
        spec);
    return j;
}

InitialStateSpec initial_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "product") {
        return ProductState{j.at("sites").get<ExcitationTuple>()};
    }
    if (kind == "theta_phi") {
        return ThetaPhiState{j.at("j").get<int>(), j.at("phi").get<double>(),
                             j.at("theta").get<double>()};
    }
    if (kind == "six_fold") {
        return SixFoldState{j.at("j").get<int>()};
    }
    if (kind == "custom") {
        const auto& amps = j.at("amplitudes");
        Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i)
            v(static_cast<Eigen::Index>(i)) =
                std::complex<double>(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
        return CustomState{std::move(v)};
    }
    throw ValidationError("unknown initial state kind '" + kind + "'");
}

std::string residual_to_string(ResidualPolicy policy) {
    switch (policy) {
        case ResidualPolicy::automatic: return "auto";
        case ResidualPolicy::on: return "on";
        case ResidualPolicy::off: return "off";
    }
    return "auto";
}

ResidualPolicy residual_from_string(const std::string& name) {
    if (name == "auto") return ResidualPolicy::automatic;
    if (name == "on") return ResidualPolicy::on;
    if (name == "off") return ResidualPolicy::off;
    throw ValidationError("residual policy must be one of auto/on/off, got '" + name + "'");
}

}  // namespace

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::theta: return "theta";
        case SweepAxis::directionality: return "directionality";
        case SweepAxis::xi: return "xi";
    }
    return "theta";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "theta") return SweepAxis::theta;
    if (name == "directionality" || name == "D") return SweepAxis::directionality;
    if (name == "xi") return SweepAxis::xi;
    throw ValidationError("sweep axis must be one of theta/directionality/xi, got '" + name + "'");
}

nlohmann::json config_to_json(const SimulationConfig& config) {
    json j;
    j["params"] = {{"n_sites", config.params.n_sites},
                   {"n_excitations", config.params.n_excitations},
                   {"xi", config.params.xi},
                   {"directionality", config.params.directionality},
                   {"gamma", config.params.gamma}};
    j["initial"] = initial_to_json(config.initial);
    j["grid"] = {{"t_max", config.grid.t_max}, {"n_points", config.grid.n_points}};
    j["observables"] = {{"populations", config.observables.populations},
                        {"correlations", config.observables.correlations},
                        {"third_order", config.observables.third_order},
                        {"trajectory", config.observables.trajectory},
                        {"routing", config.observables.routing}};
    j["renormalize"] = config.renormalize;
    j["refine_tc"] = config.refine_tc;
    j["figures"] = config.figures;
    j["residual"] = residual_to_string(config.residual);
    j["threads"] = config.threads;
    j["output_dir"] = config.output_dir;
    if (config.sweep)
        j["sweep"] = {{"axis", to_string(config.sweep->axis)}, {"values", config.sweep->values}};
    if (config.jitter)
        j["jitter"] = {{"sigma_theta", config.jitter->sigma_theta},
                       {"n_samples", config.jitter->n_samples},
                       {"seed", config.jitter->seed}};
    return j;
}

SimulationConfig config_from_json(const nlohmann::json& j) {
    SimulationConfig config;
    try {
        if (j.contains("params")) {
            const auto& p = j.at("params");
            if (p.contains("n_sites")) config.params.n_sites = p.at("n_sites").get<int>();
            if (p.contains("n_excitations"))
                config.params.n_excitations = p.at("n_excitations").get<int>();
            if (p.contains("xi")) config.params.xi = p.at("xi").get<double>();
            if (p.contains("directionality"))
                config.params.directionality = p.at("directionality").get<double>();
            if (p.contains("gamma")) config.params.gamma = p.at("gamma").get<double>();
        }
        if (j.contains("initial")) config.initial = initial_from_json(j.at("initial"));
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("t_max")) config.grid.t_max = g.at("t_max").get<double>();
            if (g.contains("n_points")) config.grid.n_points = g.at("n_points").get<int>();
        }
        if (j.contains("observables")) {
            const auto& o = j.at("observables");
            auto get = [&](const char* key, bool fallback) {
                return o.contains(key) ? o.at(key).get<bool>() : fallback;
            };
            config.observables.populations = get("populations", true);
            config.observables.correlations = get("correlations", true);
            config.observables.third_order = get("third_order", true);
            config.observables.trajectory = get("trajectory", false);
            config.observables.routing = get("routing", true);
        }
        if (j.contains("renormalize")) config.renormalize = j.at("renormalize").get<bool>();
        if (j.contains("refine_tc")) config.refine_tc = j.at("refine_tc").get<bool>();
        if (j.contains("figures")) config.figures = j.at("figures").get<bool>();
        if (j.contains("residual"))
            config.residual = residual_from_string(j.at("residual").get<std::string>());
        if (j.contains("threads")) config.threads = j.at("threads").get<int>();
        if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("sweep")) {
            SweepSpec sweep;
            sweep.axis = sweep_axis_from_string(j.at("sweep").at("axis").get<std::string>());
            sweep.values = j.at("sweep").at("values").get<std::vector<double>>();
            config.sweep = std::move(sweep);
        }
        if (j.contains("jitter")) {
            JitterSpec jitter;
            const auto& spec = j.at("jitter");
            jitter.sigma_theta = spec.at("sigma_theta").get<double>();
            if (spec.contains("n_samples")) jitter.n_samples = spec.at("n_samples").get<int>();
            if (spec.contains("seed")) jitter.seed = spec.at("seed").get<std::uint64_t>();
            config.jitter = jitter;
        }
    } catch (const json::exception& err) {
        throw ValidationError(std::string("malformed configuration: ") + err.what());
    }
    return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& err) {
        throw ValidationError("cannot parse " + path.string() + ": " + err.what());
    }
    return config_from_json(j);
}

void save_config(const SimulationConfig& config, const std::filesystem::path& path) {
    write_text_atomic(path, config_to_json(config).dump(2) + "\n");
}

void validate_config(const SimulationConfig& config) {
    std::vector<std::string> problems;

    try {
        config.params.validate();
    } catch (const ValidationError& err) {
        problems.push_back(err.what());
    }

    if (!(config.grid.t_max > 0.0) || !std::isfinite(config.grid.t_max))
        problems.push_back("grid.t_max must be positive and finite");
    if (config.grid.n_points < 2) problems.push_back("grid.n_points must be at least 2");

    if (config.threads < 0) problems.push_back("threads must be >= 0");
    if (config.output_dir.empty()) problems.push_back("output_dir must not be empty");

    // Initial-state shape checks that do not need the basis.
    std::visit(
        [&](const auto& state) {
            using T = std::decay_t<decltype(state)>;
            if constexpr (std::is_same_v<T, ProductState>) {
                if (!tuple_valid(state.sites, config.params.n_sites, config.params.n_excitations))
                    problems.push_back(
                        "initial.sites must be strictly increasing sites within the chain, one per "
                        "excitation");
            } else if constexpr (std::is_same_v<T, ThetaPhiState> ||
                                 std::is_same_v<T, SixFoldState>) {
                if (config.params.n_excitations != 2)
                    problems.push_back("initial state kind requires n_excitations = 2");
                if (state.j < 1 || state.j + 3 > config.params.n_sites)
                    problems.push_back("initial.j must keep sites j..j+3 inside the chain");
            } else {
                if (!state.amplitudes.allFinite() || state.amplitudes.norm() <= 0.0)
                    problems.push_back("initial.amplitudes must be a finite nonzero vector");
            }
        },
        config.initial);

    if (config.sweep) {
        if (config.sweep->values.empty()) problems.push_back("sweep.values must not be empty");
        for (double v : config.sweep->values)
            if (!std::isfinite(v)) {
                problems.push_back("sweep.values must all be finite");
                break;
            }
        if (config.sweep->axis == SweepAxis::directionality)
            for (double v : config.sweep->values)
                if (std::abs(v) > 1.0) {
                    problems.push_back("sweep over directionality needs values in [-1, 1]");
                    break;
                }
        if (config.sweep->axis == SweepAxis::theta &&
            !std::holds_alternative<ThetaPhiState>(config.initial))
            problems.push_back("sweep over theta requires a theta_phi initial state");
    }

    if (config.jitter) {
        if (!(config.jitter->sigma_theta >= 0.0) || !std::isfinite(config.jitter->sigma_theta))
            problems.push_back("jitter.sigma_theta must be >= 0");
        if (config.jitter->n_samples < 1) problems.push_back("jitter.n_samples must be >= 1");
        if (!std::holds_alternative<ThetaPhiState>(config.initial))
            problems.push_back("jitter study requires a theta_phi initial state");
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid configuration (" << problems.size() << " problem"
            << (problems.size() == 1 ? "" : "s") << "):";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw ValidationError(msg.str());
    }
}

}  // namespace chiral
