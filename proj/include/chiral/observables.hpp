#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "chiral/dynamics.hpp"
#include "chiral/hilbert.hpp"

namespace chiral {

// Per-time squared-amplitude weight of every basis state. All correlation
// observables are functions of these weights, which also makes them directly
// comparable against the diagonal of a density-matrix sector block.
// With renormalized = true the decaying norm is divided out per time.
std::vector<Eigen::VectorXd> state_weights(const AmplitudeTrajectory& trajectory,
                                           bool renormalized = false);

struct PopulationField {
    std::vector<double> times;
    Eigen::MatrixXd values;  // n_times x n_sites, P_m(t)

    std::size_t n_times() const { return times.size(); }
};

PopulationField excitation_population(const AmplitudeTrajectory& trajectory,
                                      const ExcitationBasis& basis, bool renormalized = false);

// Site-averaged connected density-density correlation at separation r:
// sum_j [<n_j n_{j+r}> - <n_j><n_{j+r}>] / (N - r), one value per time.
std::vector<double> density_density(const AmplitudeTrajectory& trajectory,
                                    const ExcitationBasis& basis, int r,
                                    bool renormalized = false);

struct ThirdOrderSeries {
    std::vector<double> g3;              // <G3> per time
    std::vector<double> third_cumulant;  // genuine third cumulant
    std::vector<double> cross_12;        // (<n_j n_{j+1}> - <n_j><n_{j+1}>) <n_{j+2}>
    std::vector<double> cross_13;        // (<n_j n_{j+2}> - <n_j><n_{j+2}>) <n_{j+1}>
    std::vector<double> cross_23;        // (<n_{j+1} n_{j+2}> - <n_{j+1}><n_{j+2}>) <n_j>
};

ThirdOrderSeries third_order(const AmplitudeTrajectory& trajectory, const ExcitationBasis& basis,
                             bool renormalized = false);

struct CorrelationSeries {
    std::vector<double> times;
    std::map<int, std::vector<double>> g2;  // separation -> per-time values
    ThirdOrderSeries g3;
};

// Weight-level building blocks, shared with the density-matrix route.
Eigen::VectorXd populations_from_weights(const Eigen::VectorXd& weights,
                                         const ExcitationBasis& basis);
double g2_from_weights(const Eigen::VectorXd& weights, const ExcitationBasis& basis, int r);
struct ThirdOrderPoint {
    double g3, third_cumulant, cross_12, cross_13, cross_23;
};
ThirdOrderPoint g3_from_weights(const Eigen::VectorXd& weights, const ExcitationBasis& basis);

// Shannon entropy (nats) of the squared amplitudes of a normalized state.
double participation_entropy(const Eigen::VectorXcd& amplitudes);

struct RoutingRecord {
    bool defined = false;
    double t_c = 0.0;      // earliest time attaining the maximum
    double p_max = 0.0;    // end-site population at t_c
    double entropy = 0.0;  // participation entropy of the initial state (caller-set)
};

RoutingRecord detect_tc(const std::vector<double>& times, const std::vector<double>& end_population,
                        bool refine = false);

struct FrontSpeed {
    bool defined = false;
    double sites_per_time = 0.0;
};

// Least-squares slope of the rightmost site holding at least
// threshold * max_m P_m(t), fitted against time.
FrontSpeed diffusion_speed(const PopulationField& field, double threshold = 0.05);

}  // namespace chiral
