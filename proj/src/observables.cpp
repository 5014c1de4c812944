#include "chiral/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chiral/errors.hpp"

namespace chiral {

namespace {

// <n_a n_b> for all site pairs, plus <n_m>, from basis-state weights.
struct MomentTable {
    Eigen::VectorXd first;   // N
    Eigen::MatrixXd second;  // N x N, symmetric, zero diagonal unused
};

MomentTable moments_from_weights(const Eigen::VectorXd& weights, const ExcitationBasis& basis) {
    const int n = basis.n_sites;
    MomentTable table;
    table.first = Eigen::VectorXd::Zero(n);
    table.second = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const double w = weights(static_cast<Eigen::Index>(p));
        if (w == 0.0) continue;
        const auto& sites = basis.states[p];
        for (std::size_t i = 0; i < sites.size(); ++i) {
            table.first(sites[i] - 1) += w;
            for (std::size_t j = i + 1; j < sites.size(); ++j) {
                table.second(sites[i] - 1, sites[j] - 1) += w;
                table.second(sites[j] - 1, sites[i] - 1) += w;
            }
        }
    }
    return table;
}

void require_consistent(const AmplitudeTrajectory& trajectory, const ExcitationBasis& basis) {
    if (trajectory.amplitudes.empty())
        throw ValidationError("trajectory holds no amplitude vectors");
    if (static_cast<std::size_t>(trajectory.amplitudes.front().size()) != basis.size())
        throw ValidationError("trajectory and basis dimensions do not match");
}

}  // namespace

std::vector<Eigen::VectorXd> state_weights(const AmplitudeTrajectory& trajectory,
                                           bool renormalized) {
    std::vector<Eigen::VectorXd> weights;
    weights.reserve(trajectory.n_times());
    for (std::size_t k = 0; k < trajectory.amplitudes.size(); ++k) {
        Eigen::VectorXd w = trajectory.amplitudes[k].cwiseAbs2();
        if (renormalized) {
            const double total = w.sum();
            if (total > 0.0) w /= total;
        }
        weights.push_back(std::move(w));
    }
    return weights;
}

Eigen::VectorXd populations_from_weights(const Eigen::VectorXd& weights,
                                         const ExcitationBasis& basis) {
    Eigen::VectorXd populations = Eigen::VectorXd::Zero(basis.n_sites);
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const double w = weights(static_cast<Eigen::Index>(p));
        if (w == 0.0) continue;
        for (int site : basis.states[p]) populations(site - 1) += w;
    }
    return populations;
}

PopulationField excitation_population(const AmplitudeTrajectory& trajectory,
                                      const ExcitationBasis& basis, bool renormalized) {
    require_consistent(trajectory, basis);
    PopulationField field;
    field.times = trajectory.times;
    field.values.resize(static_cast<Eigen::Index>(trajectory.n_times()), basis.n_sites);
    const auto weights = state_weights(trajectory, renormalized);
    for (std::size_t k = 0; k < weights.size(); ++k)
        field.values.row(static_cast<Eigen::Index>(k)) =
            populations_from_weights(weights[k], basis).transpose();
    return field;
}

double g2_from_weights(const Eigen::VectorXd& weights, const ExcitationBasis& basis, int r) {
    const int n = basis.n_sites;
    if (r < 1 || r > n - 1) {
        std::ostringstream msg;
        msg << "correlation separation r = " << r << " outside [1, " << n - 1 << "]";
        throw ValidationError(msg.str());
    }
    const auto table = moments_from_weights(weights, basis);
    double acc = 0.0;
    for (int j = 1; j + r <= n; ++j)
        acc += table.second(j - 1, j + r - 1) - table.first(j - 1) * table.first(j + r - 1);
    return acc / (n - r);
}

std::vector<double> density_density(const AmplitudeTrajectory& trajectory,
                                    const ExcitationBasis& basis, int r, bool renormalized) {
    require_consistent(trajectory, basis);
    const auto weights = state_weights(trajectory, renormalized);
    std::vector<double> series;
    series.reserve(weights.size());
    for (const auto& w : weights) series.push_back(g2_from_weights(w, basis, r));
    return series;
}

ThirdOrderPoint g3_from_weights(const Eigen::VectorXd& weights, const ExcitationBasis& basis) {
    const int n = basis.n_sites;
    if (n < 3) throw ValidationError("third-order correlation needs at least 3 sites");
    const auto table = moments_from_weights(weights, basis);

    // <n_j n_{j+1} n_{j+2}> via membership of the full consecutive triple.
    Eigen::VectorXd triple = Eigen::VectorXd::Zero(n);
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const double w = weights(static_cast<Eigen::Index>(p));
        if (w == 0.0) continue;
        const auto& sites = basis.states[p];
        for (std::size_t i = 0; i + 2 < sites.size(); ++i)
            if (sites[i + 1] == sites[i] + 1 && sites[i + 2] == sites[i] + 2)
                triple(sites[i] - 1) += w;
    }

    ThirdOrderPoint point{0.0, 0.0, 0.0, 0.0, 0.0};
    for (int j = 1; j + 2 <= n; ++j) {
        const double p1 = table.first(j - 1);
        const double p2 = table.first(j);
        const double p3 = table.first(j + 1);
        const double m12 = table.second(j - 1, j);
        const double m13 = table.second(j - 1, j + 1);
        const double m23 = table.second(j, j + 1);
        const double m123 = triple(j - 1);

        point.g3 += m123 - p1 * p2 * p3;
        point.cross_12 += (m12 - p1 * p2) * p3;
        point.cross_13 += (m13 - p1 * p3) * p2;
        point.cross_23 += (m23 - p2 * p3) * p1;
        point.third_cumulant += m123 - m12 * p3 - m13 * p2 - m23 * p1 + 2.0 * p1 * p2 * p3;
    }
    const double denom = n - 2;
    point.g3 /= denom;
    point.cross_12 /= denom;
    point.cross_13 /= denom;
    point.cross_23 /= denom;
    point.third_cumulant /= denom;
    return point;
}

ThirdOrderSeries third_order(const AmplitudeTrajectory& trajectory, const ExcitationBasis& basis,
                             bool renormalized) {
    require_consistent(trajectory, basis);
    if (basis.n_sites < 3)
        throw ValidationError("third-order correlation needs at least 3 sites");
    const auto weights = state_weights(trajectory, renormalized);
    ThirdOrderSeries series;
    series.g3.reserve(weights.size());
    for (const auto& w : weights) {
        const auto point = g3_from_weights(w, basis);
        series.g3.push_back(point.g3);
        series.third_cumulant.push_back(point.third_cumulant);
        series.cross_12.push_back(point.cross_12);
        series.cross_13.push_back(point.cross_13);
        series.cross_23.push_back(point.cross_23);
    }
    return series;
}

double participation_entropy(const Eigen::VectorXcd& amplitudes) {
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
        throw ValidationError("participation entropy requires a normalized state");
    double entropy = 0.0;
    for (Eigen::Index p = 0; p < amplitudes.size(); ++p) {
        const double w = std::norm(amplitudes(p));
        if (w > 0.0) entropy -= w * std::log(w);
    }
    return entropy;
}

RoutingRecord detect_tc(const std::vector<double>& times, const std::vector<double>& end_population,
                        bool refine) {
    if (times.empty() || times.size() != end_population.size())
        throw ValidationError("routing detection needs matching nonempty series");

    RoutingRecord record;
    double best = 0.0;
    std::size_t best_idx = 0;
    bool any_nonzero = false;
    for (std::size_t k = 0; k < end_population.size(); ++k) {
        const double v = end_population[k];
        if (v != 0.0) any_nonzero = true;
        if (v > best + 1e-12) {
            best = v;
            best_idx = k;
        }
    }
    if (!any_nonzero) return record;  // flagged: t_c undefined for an all-zero series

    record.defined = true;
    record.t_c = times[best_idx];
    record.p_max = end_population[best_idx];

    if (refine && best_idx > 0 && best_idx + 1 < times.size()) {
        // Local parabola through the three grid points around the maximum.
        const double y0 = end_population[best_idx - 1];
        const double y1 = end_population[best_idx];
        const double y2 = end_population[best_idx + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double shift = 0.5 * (y0 - y2) / denom;
            const double h = times[best_idx + 1] - times[best_idx];
            record.t_c = times[best_idx] + shift * h;
            record.p_max = y1 - 0.25 * (y0 - y2) * shift;
        }
    }
    return record;
}

FrontSpeed diffusion_speed(const PopulationField& field, double threshold) {
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw ValidationError("front threshold must lie in (0, 1)");

    FrontSpeed result;
    std::vector<double> ts, fronts;
    for (std::size_t k = 0; k < field.n_times(); ++k) {
        const auto row = field.values.row(static_cast<Eigen::Index>(k));
        const double peak = row.maxCoeff();
        if (peak <= 0.0) continue;  // no front while the field is empty
        int front = 0;
        for (int m = field.values.cols(); m >= 1; --m) {
            if (row(m - 1) >= threshold * peak) {
                front = m;
                break;
            }
        }
        ts.push_back(field.times[k]);
        fronts.push_back(static_cast<double>(front));
    }
    if (ts.size() < 2) return result;  // flagged: nothing to fit

    const double n = static_cast<double>(ts.size());
    double st = 0.0, sf = 0.0, stt = 0.0, stf = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sf += fronts[k];
        stt += ts[k] * ts[k];
        stf += ts[k] * fronts[k];
    }
    const double denom = n * stt - st * st;
    if (denom <= 0.0) return result;  // degenerate time axis
    result.defined = true;
    result.sites_per_time = (n * stf - st * sf) / denom;
    return result;
}

}  // namespace chiral
