#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chiral/errors.hpp"
#include "chiral/observables.hpp"
#include "oracle_helpers.hpp"

using namespace chiral;
using std::numbers::pi;

namespace {

AmplitudeTrajectory single_frame(const Eigen::VectorXcd& a) {
    AmplitudeTrajectory traj;
    traj.times = {0.0};
    traj.amplitudes = {a};
    traj.norms = {a.norm()};
    return traj;
}

AmplitudeTrajectory evolve_case(int n, int m, double xi, double d,
                                const InitialStateSpec& initial, double t_max, int n_points) {
    const auto basis = enumerate_basis(n, m);
    const auto kernel = build_kernel(basis, CouplingParams{n, m, xi, d, 1.0});
    return propagate(kernel, make_initial_state(basis, initial), uniform_grid(t_max, n_points));
}

}  // namespace

TEST_CASE("bare product state populations") {
    const auto basis = enumerate_basis(40, 2);
    const auto traj = single_frame(make_initial_state(basis, ProductState{{20, 21}}));
    const auto field = excitation_population(traj, basis);
    for (int m = 1; m <= 40; ++m) {
        const double expected = (m == 20 || m == 21) ? 1.0 : 0.0;
        CHECK(field.values(0, m - 1) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("six-fold state has half occupation on its four sites") {
    const auto basis = enumerate_basis(40, 2);
    const int j = 10;
    const auto traj = single_frame(make_initial_state(basis, SixFoldState{j}));
    const auto field = excitation_population(traj, basis);
    for (int m = 1; m <= 40; ++m) {
        const double expected = (m >= j && m <= j + 3) ? 0.5 : 0.0;
        CHECK(field.values(0, m - 1) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("populations sum to M times the squared norm along a trajectory") {
    const auto basis = enumerate_basis(7, 3);
    const auto kernel = build_kernel(basis, CouplingParams{7, 3, 0.8 * pi, 0.25, 1.0});
    const auto traj = propagate(kernel, make_initial_state(basis, ProductState{{2, 3, 4}}),
                                uniform_grid(20.0, 41));
    const auto field = excitation_population(traj, basis);
    for (std::size_t k = 0; k < traj.n_times(); ++k) {
        const double total = field.values.row(static_cast<Eigen::Index>(k)).sum();
        CHECK(std::abs(total - 3.0 * traj.norms[k] * traj.norms[k]) < 1e-9);
        CHECK(field.values.row(static_cast<Eigen::Index>(k)).minCoeff() >= -1e-9);
        CHECK(field.values.row(static_cast<Eigen::Index>(k)).maxCoeff() <= 1.0 + 1e-9);
    }

    const auto renorm = excitation_population(traj, basis, true);
    for (std::size_t k = 0; k < traj.n_times(); ++k)
        CHECK(std::abs(renorm.values.row(static_cast<Eigen::Index>(k)).sum() - 3.0) < 1e-9);
}

TEST_CASE("product states carry no connected correlations") {
    const auto basis = enumerate_basis(12, 2);
    const auto traj = single_frame(make_initial_state(basis, ProductState{{5, 8}}));
    for (int r = 1; r <= 11; ++r)
        CHECK(density_density(traj, basis, r)[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("six-fold correlations at t = 0 match hand values") {
    const auto basis = enumerate_basis(40, 2);
    const auto traj = single_frame(make_initial_state(basis, SixFoldState{15}));
    CHECK(density_density(traj, basis, 1)[0] == doctest::Approx(-1.0 / 156.0).epsilon(1e-12));
    CHECK(density_density(traj, basis, 3)[0] == doctest::Approx(-1.0 / 444.0).epsilon(1e-12));

    const auto g3 = third_order(traj, basis);
    CHECK(g3.g3[0] == doctest::Approx(-1.0 / 152.0).epsilon(1e-12));
}

TEST_CASE("correlations agree with the brute-force expectation sums") {
    std::mt19937 rng(61);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int m : {2, 3}) {
        const auto basis = enumerate_basis(8, m);
        Eigen::VectorXcd a(static_cast<Eigen::Index>(basis.size()));
        for (Eigen::Index i = 0; i < a.size(); ++i)
            a(i) = std::complex<double>(gauss(rng), gauss(rng));
        a.normalize();
        const auto traj = single_frame(a);

        for (int r = 1; r <= 7; ++r)
            CHECK(density_density(traj, basis, r)[0] ==
                  doctest::Approx(testref::brute_force_g2(a, basis, r)).epsilon(1e-12));
        CHECK(third_order(traj, basis).g3[0] ==
              doctest::Approx(testref::brute_force_g3(a, basis)).epsilon(1e-12));
    }
}

TEST_CASE("third-order parts add up to the correlator") {
    const auto traj = evolve_case(10, 3, 0.95 * pi, 0.3, ProductState{{4, 5, 6}}, 25.0, 51);
    const auto basis = enumerate_basis(10, 3);
    const auto series = third_order(traj, basis);
    for (std::size_t k = 0; k < series.g3.size(); ++k) {
        const double sum = series.third_cumulant[k] + series.cross_12[k] + series.cross_13[k] +
                           series.cross_23[k];
        CHECK(std::abs(series.g3[k] - sum) < 1e-12);
    }
}

TEST_CASE("two excitations cannot produce a triple moment") {
    const auto basis = enumerate_basis(40, 2);
    const auto traj = single_frame(make_initial_state(basis, SixFoldState{11}));
    const auto series = third_order(traj, basis);
    // <n n n> = 0, so g3 reduces to minus the product of means and the
    // third cumulant balances the cross terms.
    CHECK(series.g3[0] == doctest::Approx(-1.0 / 152.0).epsilon(1e-12));
    const double sum = series.third_cumulant[0] + series.cross_12[0] + series.cross_13[0] +
                       series.cross_23[0];
    CHECK(std::abs(series.g3[0] - sum) < 1e-14);
}

TEST_CASE("participation entropy reproduces the quoted initial values") {
    const auto basis = enumerate_basis(40, 2);
    CHECK(participation_entropy(make_initial_state(basis, ProductState{{20, 21}})) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(participation_entropy(make_initial_state(basis, ThetaPhiState{19, pi / 4, 0.0})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(participation_entropy(make_initial_state(basis, ThetaPhiState{19, pi / 4, pi / 4})) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(participation_entropy(make_initial_state(basis, SixFoldState{19})) ==
          doctest::Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("participation entropy ignores phases and ordering") {
    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd a(20);
    for (Eigen::Index i = 0; i < 20; ++i) a(i) = std::complex<double>(gauss(rng), gauss(rng));
    a.normalize();
    const double base = participation_entropy(a);

    const std::complex<double> phase = std::exp(std::complex<double>(0.0, 1.234));
    CHECK(participation_entropy(phase * a) == doctest::Approx(base).epsilon(1e-12));

    Eigen::VectorXcd shuffled = a;
    std::shuffle(shuffled.data(), shuffled.data() + shuffled.size(), rng);
    CHECK(participation_entropy(shuffled) == doctest::Approx(base).epsilon(1e-12));

    Eigen::VectorXcd unnormalized = 1.5 * a;
    CHECK_THROWS_AS(participation_entropy(unnormalized), ValidationError);
}

TEST_CASE("routing time detection") {
    const auto record = detect_tc({0.0, 1.0, 2.0, 3.0}, {0.0, 0.2, 0.5, 0.3});
    CHECK(record.defined);
    CHECK(record.t_c == 2.0);
    CHECK(record.p_max == 0.5);

    const auto constant = detect_tc({0.0, 1.0, 2.0}, {0.4, 0.4, 0.4});
    CHECK(constant.defined);
    CHECK(constant.t_c == 0.0);

    const auto empty = detect_tc({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
    CHECK_FALSE(empty.defined);

    // Positive rescaling never moves the argmax.
    std::vector<double> times, series;
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        times.push_back(k);
        series.push_back(uni(rng));
    }
    const auto base = detect_tc(times, series);
    auto scaled = series;
    for (auto& v : scaled) v *= 37.5;
    CHECK(detect_tc(times, scaled).t_c == base.t_c);

    CHECK_THROWS_AS(detect_tc({}, {}), ValidationError);
    CHECK_THROWS_AS(detect_tc({0.0}, {0.1, 0.2}), ValidationError);
}

TEST_CASE("parabolic refinement lands between grid points") {
    // Samples of a parabola peaking at t = 1.6 with unit grid spacing.
    std::vector<double> times{0.0, 1.0, 2.0, 3.0};
    std::vector<double> series;
    for (double t : times) series.push_back(1.0 - (t - 1.6) * (t - 1.6) * 0.1);
    const auto refined = detect_tc(times, series, true);
    CHECK(refined.t_c == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("front speed on synthetic population fields") {
    // A front marching one site per unit time.
    PopulationField moving;
    moving.times = {0.0, 1.0, 2.0, 3.0, 4.0};
    moving.values = Eigen::MatrixXd::Zero(5, 10);
    for (int k = 0; k < 5; ++k) moving.values(k, k) = 1.0;
    const auto speed = diffusion_speed(moving);
    CHECK(speed.defined);
    CHECK(speed.sites_per_time == doctest::Approx(1.0).epsilon(1e-12));

    PopulationField still;
    still.times = {0.0, 1.0, 2.0};
    still.values = Eigen::MatrixXd::Zero(3, 6);
    still.values.col(2).setConstant(0.8);
    const auto zero = diffusion_speed(still);
    CHECK(zero.defined);
    CHECK(zero.sites_per_time == doctest::Approx(0.0).epsilon(1e-12));

    PopulationField empty;
    empty.times = {0.0, 1.0};
    empty.values = Eigen::MatrixXd::Zero(2, 6);
    CHECK_FALSE(diffusion_speed(empty).defined);

    CHECK_THROWS_AS(diffusion_speed(still, 0.0), ValidationError);
    CHECK_THROWS_AS(diffusion_speed(still, 1.0), ValidationError);
}

TEST_CASE("unidirectional front advances and speed grows with directionality") {
    auto speed_at = [](double d) {
        const auto basis = enumerate_basis(12, 1);
        const auto kernel = build_kernel(basis, CouplingParams{12, 1, pi, d, 1.0});
        const auto traj =
            propagate(kernel, make_initial_state(basis, ProductState{{1}}), uniform_grid(8.0, 33));
        return diffusion_speed(excitation_population(traj, basis));
    };
    const auto fast = speed_at(1.0);
    REQUIRE(fast.defined);
    CHECK(fast.sites_per_time > 0.0);

    const auto mid = speed_at(0.8);
    const auto slow = speed_at(0.4);
    REQUIRE(mid.defined);
    REQUIRE(slow.defined);
    CHECK(mid.sites_per_time > slow.sites_per_time);
}

TEST_CASE("dark pair observables are time independent") {
    const auto basis = enumerate_basis(2, 1);
    const auto kernel = build_kernel(basis, CouplingParams{2, 1, pi, 0.0, 1.0});
    Eigen::VectorXcd a0(2);
    a0 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto traj = propagate(kernel, a0, uniform_grid(50.0, 26));
    const auto field = excitation_population(traj, basis);
    const auto g2 = density_density(traj, basis, 1);
    for (std::size_t k = 0; k < traj.n_times(); ++k) {
        CHECK(std::abs(field.values(static_cast<Eigen::Index>(k), 0) - 0.5) < 1e-9);
        CHECK(std::abs(field.values(static_cast<Eigen::Index>(k), 1) - 0.5) < 1e-9);
        CHECK(std::abs(g2[k] - g2[0]) < 1e-9);
    }
}

TEST_CASE("observable validation") {
    const auto basis = enumerate_basis(6, 2);
    const auto traj = single_frame(make_initial_state(basis, ProductState{{2, 3}}));
    CHECK_THROWS_AS(density_density(traj, basis, 0), ValidationError);
    CHECK_THROWS_AS(density_density(traj, basis, 6), ValidationError);
    CHECK_THROWS_AS(excitation_population(traj, enumerate_basis(7, 2)), ValidationError);

    const auto tiny = enumerate_basis(2, 1);
    const auto tiny_traj = single_frame(make_initial_state(tiny, ProductState{{1}}));
    CHECK_THROWS_AS(third_order(tiny_traj, tiny), ValidationError);
}
