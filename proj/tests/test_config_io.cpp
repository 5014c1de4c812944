#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "chiral/config.hpp"
#include "chiral/errors.hpp"
#include "chiral/io.hpp"

using namespace chiral;
using std::numbers::pi;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("chiral_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("doubles round-trip through their printed form") {
    for (double v : {0.1, 1.0 / 3.0, pi, 1e-17, -2.5e300, 0.0}) {
        const auto text = format_double(v);
        CHECK(std::stod(text) == v);
    }
}

TEST_CASE("atomic writes land complete and checksums are stable") {
    const auto dir = temp_dir("io");
    const auto path = dir / "sample.txt";
    write_text_atomic(path, "alpha,beta\n1,2\n");
    CHECK(read_text(path) == "alpha,beta\n1,2\n");
    CHECK_FALSE(std::filesystem::exists(dir / "sample.txt.tmp"));

    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64("abc") != fnv1a64("acb"));

    const auto rows = read_csv(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"alpha", "beta"});
    CHECK(rows[1] == std::vector<std::string>{"1", "2"});
}

TEST_CASE("configuration round-trips losslessly") {
    SimulationConfig config;
    config.params = CouplingParams{21, 3, 7.5 * pi / 8.0, -0.25, 2.0};
    config.initial = ThetaPhiState{9, 0.3, 1.7};
    config.grid = TimeGrid{42.5, 171};
    config.observables.trajectory = true;
    config.observables.third_order = false;
    config.renormalize = true;
    config.refine_tc = true;
    config.figures = true;
    config.residual = ResidualPolicy::off;
    config.threads = 3;
    config.output_dir = "elsewhere";
    config.sweep = SweepSpec{SweepAxis::theta, {0.0, 0.1, 0.2}};
    config.jitter = JitterSpec{0.05, 16, 77};

    const auto j = config_to_json(config);
    const auto parsed = config_from_json(j);
    CHECK(config_to_json(parsed) == j);

    const auto dir = temp_dir("config");
    save_config(config, dir / "config.json");
    const auto loaded = load_config(dir / "config.json");
    CHECK(config_to_json(loaded) == j);
}

TEST_CASE("custom initial states survive serialization") {
    SimulationConfig config;
    config.params = CouplingParams{4, 2, pi, 0.0, 1.0};
    Eigen::VectorXcd v(6);
    v.setZero();
    v(0) = std::complex<double>(0.6, 0.0);
    v(3) = std::complex<double>(0.0, 0.8);
    config.initial = CustomState{v};
    const auto parsed = config_from_json(config_to_json(config));
    const auto& state = std::get<CustomState>(parsed.initial);
    CHECK((state.amplitudes - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validation aggregates every violated field") {
    SimulationConfig config;
    config.params = CouplingParams{0, 2, pi, 3.0, -1.0};  // three problems
    config.grid = TimeGrid{-5.0, 1};                      // two problems
    config.threads = -2;
    config.output_dir = "";
    try {
        validate_config(config);
        FAIL("expected a validation error");
    } catch (const ValidationError& err) {
        const std::string what = err.what();
        CHECK(what.find("n_sites") != std::string::npos);
        CHECK(what.find("directionality") != std::string::npos);
        CHECK(what.find("gamma") != std::string::npos);
        CHECK(what.find("t_max") != std::string::npos);
        CHECK(what.find("n_points") != std::string::npos);
        CHECK(what.find("threads") != std::string::npos);
        CHECK(what.find("output_dir") != std::string::npos);
    }
}

TEST_CASE("sweep and jitter specifications are validated") {
    SimulationConfig config;  // defaults: product pair on a 40-site chain
    config.sweep = SweepSpec{SweepAxis::theta, {0.1}};
    CHECK_THROWS_AS(validate_config(config), ValidationError);  // theta sweep needs theta_phi

    config.initial = ThetaPhiState{19, pi / 4, pi / 4};
    CHECK_NOTHROW(validate_config(config));

    config.sweep->values.clear();
    CHECK_THROWS_AS(validate_config(config), ValidationError);

    config.sweep = SweepSpec{SweepAxis::directionality, {0.5, 1.5}};
    CHECK_THROWS_AS(validate_config(config), ValidationError);

    config.sweep.reset();
    config.jitter = JitterSpec{-0.1, 4, 1};
    CHECK_THROWS_AS(validate_config(config), ValidationError);
    config.jitter = JitterSpec{0.1, 0, 1};
    CHECK_THROWS_AS(validate_config(config), ValidationError);
    config.jitter = JitterSpec{0.1, 4, 1};
    CHECK_NOTHROW(validate_config(config));
}

TEST_CASE("malformed configuration files raise validation errors") {
    const auto dir = temp_dir("badconfig");
    write_text_atomic(dir / "broken.json", "{ not json");
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ValidationError);

    write_text_atomic(dir / "badkind.json", R"({"initial": {"kind": "mystery"}})");
    CHECK_THROWS_AS(load_config(dir / "badkind.json"), ValidationError);

    write_text_atomic(dir / "badaxis.json", R"({"sweep": {"axis": "nope", "values": [1]}})");
    CHECK_THROWS_AS(load_config(dir / "badaxis.json"), ValidationError);
}
