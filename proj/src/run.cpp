#include "chiral/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "chiral/errors.hpp"
#include "chiral/figures.hpp"
#include "chiral/io.hpp"

namespace chiral {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Rows of the basis whose tuple contains the end site; P_N is the weight sum.
std::vector<std::size_t> end_site_rows(const ExcitationBasis& basis) {
    std::vector<std::size_t> rows;
    for (std::size_t p = 0; p < basis.size(); ++p)
        if (basis.states[p].back() == basis.n_sites) rows.push_back(p);
    return rows;
}

double end_population(const Eigen::MatrixXcd& block, Eigen::Index col,
                      const std::vector<std::size_t>& rows) {
    double acc = 0.0;
    for (std::size_t p : rows) acc += std::norm(block(static_cast<Eigen::Index>(p), col));
    return acc;
}

bool should_check_residual(const SimulationConfig& config, std::size_t dim) {
    switch (config.residual) {
        case ResidualPolicy::on: return true;
        case ResidualPolicy::off: return false;
        case ResidualPolicy::automatic: return dim <= 1024;
    }
    return false;
}

std::string populations_csv(const PopulationField& field) {
    std::ostringstream out;
    out << "t,m,P\n";
    for (std::size_t k = 0; k < field.n_times(); ++k)
        for (Eigen::Index m = 0; m < field.values.cols(); ++m)
            out << format_double(field.times[k]) << ',' << m + 1 << ','
                << format_double(field.values(static_cast<Eigen::Index>(k), m)) << '\n';
    return out.str();
}

std::string trajectory_csv(const AmplitudeTrajectory& trajectory) {
    std::ostringstream out;
    out << "t,p,re,im\n";
    for (std::size_t k = 0; k < trajectory.n_times(); ++k) {
        const auto& a = trajectory.amplitudes[k];
        for (Eigen::Index p = 0; p < a.size(); ++p)
            if (std::abs(a(p)) > 1e-14)
                out << format_double(trajectory.times[k]) << ',' << p << ','
                    << format_double(a(p).real()) << ',' << format_double(a(p).imag()) << '\n';
    }
    return out.str();
}

std::string correlations_csv(const std::vector<double>& times,
                             const std::map<int, std::vector<double>>& g2) {
    std::ostringstream out;
    out << "t,r,g2\n";
    for (std::size_t k = 0; k < times.size(); ++k)
        for (const auto& [r, series] : g2)
            out << format_double(times[k]) << ',' << r << ',' << format_double(series[k]) << '\n';
    return out.str();
}

std::string third_order_csv(const std::vector<double>& times, const ThirdOrderSeries& g3) {
    std::ostringstream out;
    out << "t,g3,third_cumulant,cross_12,cross_13,cross_23\n";
    for (std::size_t k = 0; k < times.size(); ++k)
        out << format_double(times[k]) << ',' << format_double(g3.g3[k]) << ','
            << format_double(g3.third_cumulant[k]) << ',' << format_double(g3.cross_12[k]) << ','
            << format_double(g3.cross_13[k]) << ',' << format_double(g3.cross_23[k]) << '\n';
    return out.str();
}

json routing_to_json(const RoutingRecord& record, bool refined) {
    return json{{"defined", record.defined},
                {"t_c", record.t_c},
                {"p_max", record.p_max},
                {"entropy", record.entropy},
                {"refined", refined}};
}

// Every file under the bundle directory, except the manifest itself.
std::vector<ManifestEntry> collect_manifest(const std::filesystem::path& dir) {
    std::vector<ManifestEntry> entries;
    for (const auto& item : std::filesystem::recursive_directory_iterator(dir)) {
        if (!item.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(item.path(), dir).generic_string();
        if (rel == "manifest.json") continue;
        const std::string content = read_text(item.path());
        entries.push_back({rel, item.file_size(), fnv1a64_hex(content)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });
    return entries;
}

void write_manifest(ResultBundle& bundle) {
    bundle.manifest = collect_manifest(bundle.directory);
    json j;
    j["files"] = json::array();
    for (const auto& entry : bundle.manifest)
        j["files"].push_back(
            {{"name", entry.name}, {"bytes", entry.bytes}, {"fnv1a64", entry.checksum}});
    j["warnings"] = bundle.warnings;
    write_text_atomic(bundle.directory / "manifest.json", j.dump(2) + "\n");
}

void write_metadata(const ResultBundle& bundle, const SimulationConfig& config, json extra) {
    extra["config"] = config_to_json(config);
    extra["version"] = kVersion;
    write_text_atomic(bundle.directory / "metadata.json", extra.dump(2) + "\n");
}

struct FigureAttempt {
    bool populations = false;
    bool g2 = false;
    bool g3 = false;
    bool sweep = false;
};

struct FigureData {
    bool has_populations = false;
    PopulationField populations;
    bool has_g2 = false;
    std::vector<double> g2_times;
    std::map<int, std::vector<double>> g2;
    bool has_g3 = false;
    std::vector<double> g3_times;
    std::vector<double> g3;
    bool has_sweep = false;
    std::string sweep_axis;
    std::vector<double> sweep_values, sweep_tc;
};

void emit_figure_files(ResultBundle& bundle, const FigureData& data,
                       const FigureAttempt& attempt) {
    const auto dir = bundle.directory / "figures";

    if (data.has_populations && attempt.populations) {
        const auto& field = data.populations;
        write_text_atomic(dir / "populations_heatmap.svg",
                          svg_heatmap("site populations", "t (1/gamma)", "site m", field.times,
                                      field.values));
        LineSeries end;
        end.label = "P_N(t)";
        end.x = field.times;
        for (std::size_t k = 0; k < field.n_times(); ++k)
            end.y.push_back(field.values(static_cast<Eigen::Index>(k), field.values.cols() - 1));
        write_text_atomic(dir / "end_population.svg",
                          svg_line_plot("end-site population", "t (1/gamma)", "P_N", {end}));
    } else if (attempt.populations) {
        bundle.warnings.push_back("figure populations_heatmap.svg skipped: no population data");
        bundle.warnings.push_back("figure end_population.svg skipped: no population data");
    }

    if (data.has_g2 && attempt.g2) {
        std::vector<LineSeries> series;
        for (const auto& [r, values] : data.g2) {
            if (r > 5) continue;  // panels highlight short separations
            LineSeries s;
            s.label = "r = " + std::to_string(r);
            s.x = data.g2_times;
            for (double v : values) s.y.push_back(v * 1e3);
            series.push_back(std::move(s));
        }
        write_text_atomic(dir / "g2_scaled.svg",
                          svg_line_plot("density-density correlations", "t (1/gamma)",
                                        "G2 x 10^3", series));
    } else if (attempt.g2) {
        bundle.warnings.push_back("figure g2_scaled.svg skipped: no correlation data");
    }

    if (data.has_g3 && attempt.g3) {
        LineSeries s;
        s.label = "G3 x 10^2";
        s.x = data.g3_times;
        for (double v : data.g3) s.y.push_back(v * 1e2);
        write_text_atomic(dir / "g3_scaled.svg",
                          svg_line_plot("third-order correlation", "t (1/gamma)", "G3 x 10^2",
                                        {s}));
    } else if (attempt.g3) {
        bundle.warnings.push_back("figure g3_scaled.svg skipped: no third-order data");
    }

    if (data.has_sweep && attempt.sweep) {
        LineSeries s;
        s.label = "t_c";
        s.x = data.sweep_values;
        s.y = data.sweep_tc;
        write_text_atomic(dir / ("tc_vs_" + data.sweep_axis + ".svg"),
                          svg_line_plot("routing time across the sweep", data.sweep_axis,
                                        "t_c (1/gamma)", {s}));
    }
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

RunOutcome simulate(const SimulationConfig& config) {
    validate_config(config);
    const auto start = Clock::now();

    const auto basis = enumerate_basis(config.params.n_sites, config.params.n_excitations);
    const auto kernel = build_kernel(basis, config.params);
    const Propagator propagator(kernel);
    const auto a0 = make_initial_state(basis, config.initial);
    const auto times = uniform_grid(config.grid.t_max, config.grid.n_points);

    RunOutcome outcome;
    outcome.trajectory = propagator.evolve(a0, times);
    outcome.method = to_string(propagator.method());
    outcome.fell_back = propagator.fell_back();
    outcome.entropy = participation_entropy(a0);

    const bool need_populations = config.observables.populations || config.observables.routing ||
                                  config.figures;
    if (need_populations)
        outcome.populations =
            excitation_population(outcome.trajectory, basis, config.renormalize);

    outcome.correlations.times = times;
    if (config.observables.correlations && config.params.n_sites >= 2)
        for (int r = 1; r < config.params.n_sites; ++r)
            outcome.correlations.g2[r] =
                density_density(outcome.trajectory, basis, r, config.renormalize);

    if (config.observables.third_order && config.params.n_sites >= 3)
        outcome.correlations.g3 = third_order(outcome.trajectory, basis, config.renormalize);

    if (config.observables.routing) {
        std::vector<double> end_series(outcome.trajectory.n_times());
        for (std::size_t k = 0; k < end_series.size(); ++k)
            end_series[k] = outcome.populations.values(static_cast<Eigen::Index>(k),
                                                       config.params.n_sites - 1);
        outcome.routing = detect_tc(times, end_series, config.refine_tc);
        outcome.routing.entropy = outcome.entropy;
        outcome.front_speed = diffusion_speed(outcome.populations);
    }

    if (should_check_residual(config, basis.size()))
        outcome.residual = propagation_residual(kernel, outcome.trajectory);

    outcome.wall_seconds = seconds_since(start);
    return outcome;
}

SweepOutcome simulate_sweep(const SimulationConfig& config) {
    validate_config(config);
    if (!config.sweep) throw ValidationError("sweep requested without a sweep specification");
    const auto start = Clock::now();

    SweepOutcome outcome;
    outcome.axis = config.sweep->axis;
    const auto& values = config.sweep->values;
    outcome.points.resize(values.size());

    const auto times = uniform_grid(config.grid.t_max, config.grid.n_points);

    if (outcome.axis == SweepAxis::theta) {
        // The kernel does not depend on theta: build one propagator and push
        // every initial state through it as one block.
        const auto basis = enumerate_basis(config.params.n_sites, config.params.n_excitations);
        const auto kernel = build_kernel(basis, config.params);
        const Propagator propagator(kernel);
        const auto rows = end_site_rows(basis);
        const auto base = std::get<ThetaPhiState>(config.initial);

        Eigen::MatrixXcd block(static_cast<Eigen::Index>(basis.size()),
                               static_cast<Eigen::Index>(values.size()));
        for (std::size_t c = 0; c < values.size(); ++c) {
            ThetaPhiState state = base;
            state.theta = values[c];
            block.col(static_cast<Eigen::Index>(c)) = make_initial_state(basis, state);
            outcome.points[c].value = values[c];
            outcome.points[c].entropy =
                participation_entropy(block.col(static_cast<Eigen::Index>(c)));
        }

        std::vector<std::vector<double>> end_series(
            values.size(), std::vector<double>(times.size(), 0.0));
        propagator.evolve_block(block, times,
                                [&](std::size_t k, double, const Eigen::MatrixXcd& state) {
                                    for (std::size_t c = 0; c < values.size(); ++c)
                                        end_series[c][k] =
                                            end_population(state, static_cast<Eigen::Index>(c),
                                                           rows);
                                });
        for (std::size_t c = 0; c < values.size(); ++c) {
            outcome.points[c].routing = detect_tc(times, end_series[c], config.refine_tc);
            outcome.points[c].routing.entropy = outcome.points[c].entropy;
        }
        outcome.wall_seconds = seconds_since(start);
        return outcome;
    }

    // Directionality and xi sweeps rebuild the kernel per point; points are
    // independent jobs.
    parallel_for(values.size(), config.threads, [&](std::size_t c) {
        SimulationConfig point = config;
        point.sweep.reset();
        point.observables = ObservableToggles{false, false, false, false, true};
        point.figures = false;
        point.residual = ResidualPolicy::off;
        if (outcome.axis == SweepAxis::directionality)
            point.params.directionality = values[c];
        else
            point.params.xi = values[c];
        const auto run_outcome = simulate(point);
        outcome.points[c].value = values[c];
        outcome.points[c].routing = run_outcome.routing;
        outcome.points[c].entropy = run_outcome.entropy;
    });
    outcome.wall_seconds = seconds_since(start);
    return outcome;
}

JitterOutcome simulate_jitter(const SimulationConfig& config) {
    validate_config(config);
    if (!config.jitter) throw ValidationError("jitter requested without a jitter specification");
    const auto start = Clock::now();

    const auto spec = *config.jitter;
    const auto base = std::get<ThetaPhiState>(config.initial);

    // Draw the perturbed angles up front so the sample set is a pure function
    // of the seed.
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    JitterOutcome outcome;
    outcome.seed = spec.seed;
    outcome.thetas.resize(static_cast<std::size_t>(spec.n_samples));
    for (auto& theta : outcome.thetas) theta = base.theta + spec.sigma_theta * noise(rng);

    const auto basis = enumerate_basis(config.params.n_sites, config.params.n_excitations);
    const auto kernel = build_kernel(basis, config.params);
    const Propagator propagator(kernel);
    const auto rows = end_site_rows(basis);
    const auto times = uniform_grid(config.grid.t_max, config.grid.n_points);

    const std::size_t n_cols = outcome.thetas.size() + 1;  // unperturbed first
    Eigen::MatrixXcd block(static_cast<Eigen::Index>(basis.size()),
                           static_cast<Eigen::Index>(n_cols));
    block.col(0) = make_initial_state(basis, base);
    for (std::size_t c = 0; c < outcome.thetas.size(); ++c) {
        ThetaPhiState state = base;
        state.theta = outcome.thetas[c];
        block.col(static_cast<Eigen::Index>(c + 1)) = make_initial_state(basis, state);
    }

    std::vector<std::vector<double>> end_series(n_cols, std::vector<double>(times.size(), 0.0));
    propagator.evolve_block(block, times,
                            [&](std::size_t k, double, const Eigen::MatrixXcd& state) {
                                for (std::size_t c = 0; c < n_cols; ++c)
                                    end_series[c][k] = end_population(
                                        state, static_cast<Eigen::Index>(c), rows);
                            });

    outcome.unperturbed = detect_tc(times, end_series[0], config.refine_tc);
    outcome.records.resize(outcome.thetas.size());
    double sum = 0.0, sum_sq = 0.0, lo = 0.0, hi = 0.0;
    int defined = 0;
    for (std::size_t c = 0; c < outcome.thetas.size(); ++c) {
        outcome.records[c] = detect_tc(times, end_series[c + 1], config.refine_tc);
        if (!outcome.records[c].defined) continue;
        const double tc = outcome.records[c].t_c;
        if (defined == 0) lo = hi = tc;
        lo = std::min(lo, tc);
        hi = std::max(hi, tc);
        sum += tc;
        sum_sq += tc * tc;
        ++defined;
    }
    if (defined > 0) {
        outcome.mean_tc = sum / defined;
        const double var = std::max(0.0, sum_sq / defined - outcome.mean_tc * outcome.mean_tc);
        outcome.std_tc = std::sqrt(var);
        outcome.spread_tc = hi - lo;
    }
    outcome.wall_seconds = seconds_since(start);
    return outcome;
}

ResultBundle run(const SimulationConfig& config) {
    const auto outcome = simulate(config);

    ResultBundle bundle;
    bundle.directory = config.output_dir;
    std::filesystem::create_directories(bundle.directory);

    if (config.observables.populations)
        write_text_atomic(bundle.directory / "populations.csv",
                          populations_csv(outcome.populations));
    if (config.observables.trajectory)
        write_text_atomic(bundle.directory / "trajectory.csv",
                          trajectory_csv(outcome.trajectory));
    if (!outcome.correlations.g2.empty())
        write_text_atomic(bundle.directory / "correlations.csv",
                          correlations_csv(outcome.correlations.times, outcome.correlations.g2));
    if (!outcome.correlations.g3.g3.empty())
        write_text_atomic(bundle.directory / "third_order.csv",
                          third_order_csv(outcome.correlations.times, outcome.correlations.g3));
    if (config.observables.routing) {
        json r = routing_to_json(outcome.routing, config.refine_tc);
        r["front_speed"] = outcome.front_speed.defined
                               ? json(outcome.front_speed.sites_per_time)
                               : json(nullptr);
        write_text_atomic(bundle.directory / "routing.json", r.dump(2) + "\n");
    }

    if (config.figures) {
        FigureData data;
        data.has_populations = config.observables.populations || config.observables.routing;
        data.populations = outcome.populations;
        data.has_g2 = !outcome.correlations.g2.empty();
        data.g2_times = outcome.correlations.times;
        data.g2 = outcome.correlations.g2;
        data.has_g3 = !outcome.correlations.g3.g3.empty();
        data.g3_times = outcome.correlations.times;
        data.g3 = outcome.correlations.g3.g3;
        emit_figure_files(bundle, data, FigureAttempt{true, true, true, false});
    }

    json meta;
    meta["kind"] = "run";
    meta["method"] = outcome.method;
    meta["fell_back"] = outcome.fell_back;
    meta["residual"] = outcome.residual >= 0.0 ? json(outcome.residual) : json("skipped");
    meta["entropy"] = outcome.entropy;
    meta["wall_seconds"] = outcome.wall_seconds;
    write_metadata(bundle, config, std::move(meta));
    write_manifest(bundle);
    return bundle;
}

ResultBundle run_sweep(const SimulationConfig& config) {
    const auto outcome = simulate_sweep(config);

    ResultBundle bundle;
    bundle.directory = config.output_dir;
    std::filesystem::create_directories(bundle.directory);

    std::ostringstream csv;
    csv << "axis,value,t_c,p_max,entropy,defined\n";
    for (const auto& point : outcome.points)
        csv << to_string(outcome.axis) << ',' << format_double(point.value) << ','
            << format_double(point.routing.t_c) << ',' << format_double(point.routing.p_max)
            << ',' << format_double(point.entropy) << ',' << (point.routing.defined ? 1 : 0)
            << '\n';
    write_text_atomic(bundle.directory / "sweep.csv", csv.str());

    if (config.figures) {
        FigureData data;
        data.has_sweep = true;
        data.sweep_axis = to_string(outcome.axis);
        for (const auto& point : outcome.points) {
            data.sweep_values.push_back(point.value);
            data.sweep_tc.push_back(point.routing.t_c);
        }
        emit_figure_files(bundle, data, FigureAttempt{false, false, false, true});
    }

    json meta;
    meta["kind"] = "sweep";
    meta["axis"] = to_string(outcome.axis);
    meta["n_points"] = outcome.points.size();
    meta["wall_seconds"] = outcome.wall_seconds;
    write_metadata(bundle, config, std::move(meta));
    write_manifest(bundle);
    return bundle;
}

ResultBundle run_jitter(const SimulationConfig& config) {
    const auto outcome = simulate_jitter(config);

    ResultBundle bundle;
    bundle.directory = config.output_dir;
    std::filesystem::create_directories(bundle.directory);

    std::ostringstream csv;
    csv << "sample,theta,t_c,p_max,defined\n";
    for (std::size_t c = 0; c < outcome.thetas.size(); ++c)
        csv << c << ',' << format_double(outcome.thetas[c]) << ','
            << format_double(outcome.records[c].t_c) << ','
            << format_double(outcome.records[c].p_max) << ','
            << (outcome.records[c].defined ? 1 : 0) << '\n';
    write_text_atomic(bundle.directory / "jitter_samples.csv", csv.str());

    json stats;
    stats["seed"] = outcome.seed;
    stats["n_samples"] = outcome.thetas.size();
    stats["sigma_theta"] = config.jitter->sigma_theta;
    stats["mean_tc"] = outcome.mean_tc;
    stats["std_tc"] = outcome.std_tc;
    stats["spread_tc"] = outcome.spread_tc;
    stats["unperturbed_tc"] = outcome.unperturbed.t_c;
    write_text_atomic(bundle.directory / "jitter_stats.json", stats.dump(2) + "\n");

    json meta;
    meta["kind"] = "jitter";
    meta["wall_seconds"] = outcome.wall_seconds;
    write_metadata(bundle, config, std::move(meta));
    write_manifest(bundle);
    return bundle;
}

ResultBundle run_oracle_check(const SimulationConfig& config, double tolerance) {
    validate_config(config);
    const auto start = Clock::now();
    const auto times = uniform_grid(config.grid.t_max, config.grid.n_points);
    const auto report = oracle_compare(config.params, config.initial, times, tolerance);

    ResultBundle bundle;
    bundle.directory = config.output_dir;
    std::filesystem::create_directories(bundle.directory);
    write_text_atomic(bundle.directory / "oracle_report.json",
                      oracle_report_to_json(report).dump(2) + "\n");

    json meta;
    meta["kind"] = "oracle-check";
    meta["wall_seconds"] = seconds_since(start);
    write_metadata(bundle, config, std::move(meta));
    write_manifest(bundle);
    return bundle;
}

ResultBundle emit_figures(const std::filesystem::path& bundle_dir) {
    if (!std::filesystem::is_directory(bundle_dir))
        throw ValidationError("no bundle directory at " + bundle_dir.string());

    ResultBundle bundle;
    bundle.directory = bundle_dir;
    FigureData data;

    const auto populations_path = bundle_dir / "populations.csv";
    if (std::filesystem::exists(populations_path)) {
        const auto rows = read_csv(populations_path);
        std::vector<double> times;
        int n_sites = 0;
        for (std::size_t k = 1; k < rows.size(); ++k)
            n_sites = std::max(n_sites, std::stoi(rows[k][1]));
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (std::stoi(rows[k][1]) == 1) times.push_back(std::stod(rows[k][0]));
        PopulationField field;
        field.times = times;
        field.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), n_sites);
        std::size_t t_index = 0;
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const int m = std::stoi(rows[k][1]);
            if (m == 1 && k > 1) ++t_index;
            field.values(static_cast<Eigen::Index>(t_index), m - 1) = std::stod(rows[k][2]);
        }
        data.has_populations = true;
        data.populations = std::move(field);
    }

    const auto correlations_path = bundle_dir / "correlations.csv";
    if (std::filesystem::exists(correlations_path)) {
        const auto rows = read_csv(correlations_path);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const double t = std::stod(rows[k][0]);
            const int r = std::stoi(rows[k][1]);
            if (r == 1) data.g2_times.push_back(t);
            data.g2[r].push_back(std::stod(rows[k][2]));
        }
        data.has_g2 = !data.g2.empty() && !data.g2_times.empty();
    }

    const auto third_path = bundle_dir / "third_order.csv";
    if (std::filesystem::exists(third_path)) {
        const auto rows = read_csv(third_path);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            data.g3_times.push_back(std::stod(rows[k][0]));
            data.g3.push_back(std::stod(rows[k][1]));
        }
        data.has_g3 = !data.g3.empty();
    }

    const auto sweep_path = bundle_dir / "sweep.csv";
    if (std::filesystem::exists(sweep_path)) {
        const auto rows = read_csv(sweep_path);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            data.sweep_axis = rows[k][0];
            data.sweep_values.push_back(std::stod(rows[k][1]));
            data.sweep_tc.push_back(std::stod(rows[k][2]));
        }
        data.has_sweep = !data.sweep_values.empty();
    }

    emit_figure_files(bundle, data, FigureAttempt{true, true, true, data.has_sweep});
    write_manifest(bundle);
    return bundle;
}

nlohmann::json oracle_report_to_json(const OracleReport& report) {
    json j;
    j["params"] = {{"n_sites", report.params.n_sites},
                   {"n_excitations", report.params.n_excitations},
                   {"xi", report.params.xi},
                   {"directionality", report.params.directionality},
                   {"gamma", report.params.gamma}};
    j["tolerance"] = report.tolerance;
    j["max_block_deviation"] = report.max_block_deviation;
    j["max_population_deviation"] = report.max_population_deviation;
    j["max_g2_deviation"] = report.max_g2_deviation;
    j["max_g3_deviation"] = report.max_g3_deviation;
    j["max_trace_error"] = report.max_trace_error;
    j["max_hermiticity_error"] = report.max_hermiticity_error;
    j["passed"] = report.passed;
    return j;
}

}  // namespace chiral
