#include "chiral/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "chiral/errors.hpp"

namespace chiral {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest eigenvalue of the Hermitian part (V + V^dag) / 2. Exact solve for
// small kernels, shifted power iteration above that.
double hermitian_part_max_eigenvalue(const Eigen::MatrixXcd& kernel) {
    const Eigen::MatrixXcd sym = 0.5 * (kernel + kernel.adjoint());
    const Eigen::Index n = sym.rows();
    if (n <= 512) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    }
    const double shift = sym.cwiseAbs().colwise().sum().maxCoeff();  // >= spectral radius
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = std::complex<double>(1.0 + 0.3 * std::sin(3.7 * static_cast<double>(i) + 0.1), 0.0);
    v.normalize();
    double rayleigh = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXcd w = sym * v + shift * v;
        const double norm = w.norm();
        if (norm == 0.0) return -shift;
        v = w / norm;
        rayleigh = std::real(v.dot(sym * v + shift * v));
    }
    return rayleigh - shift;
}

}  // namespace

double wrap_angle(double angle) {
    double wrapped = std::fmod(angle, kTwoPi);
    if (wrapped < 0.0) wrapped += kTwoPi;
    return wrapped;
}

std::string to_string(PropagationMethod method) {
    switch (method) {
        case PropagationMethod::spectral: return "spectral";
        case PropagationMethod::taylor_steps: return "taylor_steps";
        case PropagationMethod::pade_steps: return "pade_steps";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Initial states
// ---------------------------------------------------------------------------

Eigen::VectorXcd make_initial_state(const ExcitationBasis& basis, const InitialStateSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);

    std::visit(
        Overloaded{
            [&](const ProductState& product) {
                a(static_cast<Eigen::Index>(index_of(basis, product.sites))) = 1.0;
            },
            [&](const ThetaPhiState& state) {
                if (basis.n_excitations != 2)
                    throw ValidationError("theta-phi initial state requires M = 2");
                if (state.j < 1 || state.j + 3 > basis.n_sites)
                    throw ValidationError("theta-phi initial state needs sites j..j+3 inside the chain");
                const double phi = wrap_angle(state.phi);
                const double theta = wrap_angle(state.theta);
                const int j = state.j;
                a(static_cast<Eigen::Index>(index_of(basis, {j, j + 2}))) =
                    std::cos(phi) * std::cos(theta);
                a(static_cast<Eigen::Index>(index_of(basis, {j, j + 3}))) =
                    std::cos(phi) * std::sin(theta);
                a(static_cast<Eigen::Index>(index_of(basis, {j + 1, j + 2}))) =
                    std::sin(phi) * std::cos(theta);
                a(static_cast<Eigen::Index>(index_of(basis, {j + 1, j + 3}))) =
                    std::sin(phi) * std::sin(theta);
            },
            [&](const SixFoldState& state) {
                if (basis.n_excitations != 2)
                    throw ValidationError("six-fold initial state requires M = 2");
                if (state.j < 1 || state.j + 3 > basis.n_sites)
                    throw ValidationError("six-fold initial state needs sites j..j+3 inside the chain");
                const double weight = 1.0 / std::sqrt(6.0);
                for (int u = state.j; u <= state.j + 3; ++u)
                    for (int v = u + 1; v <= state.j + 3; ++v)
                        a(static_cast<Eigen::Index>(index_of(basis, {u, v}))) = weight;
            },
            [&](const CustomState& state) {
                if (state.amplitudes.size() != dim) {
                    std::ostringstream msg;
                    msg << "custom state has length " << state.amplitudes.size()
                        << " but the basis has " << dim << " states";
                    throw ValidationError(msg.str());
                }
                if (!state.amplitudes.allFinite())
                    throw ValidationError("custom state has non-finite amplitudes");
                const double norm = state.amplitudes.norm();
                if (norm <= 0.0)
                    throw ValidationError("custom state must be a nonzero vector");
                a = state.amplitudes / norm;
            },
        },
        spec);
    return a;
}

// ---------------------------------------------------------------------------
// Propagator
// ---------------------------------------------------------------------------

Propagator::Propagator(const InteractionKernel& kernel, PropagatorOptions options) {
    if (kernel.dim == 0 || kernel.entries.rows() != kernel.entries.cols() ||
        static_cast<std::size_t>(kernel.entries.rows()) != kernel.dim)
        throw ValidationError("kernel dimension mismatch");
    if (!kernel.entries.allFinite())
        throw NumericError("kernel has non-finite entries");

    dim_ = kernel.dim;
    kernel_ = kernel.entries;

    max_growth_rate_ = hermitian_part_max_eigenvalue(kernel_);
    const double scale = std::max(1.0, kernel_.cwiseAbs().maxCoeff());
    if (max_growth_rate_ > 1e-8 * scale)
        throw NumericError("kernel is not dissipative: max Re eigenvalue of (V+V^dag)/2 = " +
                           std::to_string(max_growth_rate_));

    // The diagonal of V is the constant -M gamma / 2; removing it leaves the
    // pure hop matrix used by the Taylor stepper.
    diagonal_shift_ = -std::real(kernel_(0, 0));
    hops_ = kernel_;
    hops_.diagonal().array() += diagonal_shift_;
    hop_norm_ = hops_.cwiseAbs().colwise().sum().maxCoeff();

    const PropagationMethod fallback = dim_ <= options.spectral_dim_limit
                                           ? PropagationMethod::taylor_steps
                                           : PropagationMethod::pade_steps;
    PropagationMethod requested =
        options.method.value_or(dim_ <= options.spectral_dim_limit
                                    ? PropagationMethod::spectral
                                    : PropagationMethod::pade_steps);

    if (requested == PropagationMethod::spectral) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(kernel_, true);
        bool ok = solver.info() == Eigen::Success;
        if (ok) {
            eigenvalues_ = solver.eigenvalues();
            eigenvectors_ = solver.eigenvectors();
            eigenvector_lu_.compute(eigenvectors_);
            const double rcond = eigenvector_lu_.rcond();
            condition_estimate_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
            ok = std::isfinite(condition_estimate_) && condition_estimate_ <= options.condition_limit;
        }
        if (!ok) {
            // Defective or ill-conditioned eigenbasis (e.g. |D| = 1): step instead.
            requested = fallback;
            fell_back_ = true;
            eigenvalues_.resize(0);
            eigenvectors_.resize(0, 0);
        }
    }
    method_ = requested;
}

void Propagator::require_valid_times(const std::vector<double>& times) const {
    if (times.empty()) throw ValidationError("time grid is empty");
    double prev = -1.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0)
            throw ValidationError("times must be finite and nonnegative");
        if (t <= prev && !(prev < 0.0))
            throw ValidationError("times must be strictly increasing");
        prev = t;
    }
}

Eigen::MatrixXcd Propagator::step_matrix(double dt) const {
    return (kernel_ * dt).exp();
}

// One step of length dt via the scaled Taylor series of exp((V + c I) dt),
// substepped so each partial series stays well conditioned. The hop matrix
// has an exactly zero diagonal, and for |D| = 1 it is nilpotent, so states
// outside the reachable support stay exactly zero.
void Propagator::taylor_step(Eigen::MatrixXcd& block, double dt) const {
    const int n_sub = std::max(1, static_cast<int>(std::ceil(hop_norm_ * dt)));
    const double h = dt / n_sub;
    const double damp = std::exp(-diagonal_shift_ * h);
    for (int s = 0; s < n_sub; ++s) {
        Eigen::MatrixXcd term = block;
        Eigen::MatrixXcd acc = block;
        for (int k = 1; k <= 64; ++k) {
            term = (hops_ * term) * (h / k);
            acc += term;
            const double tail = term.cwiseAbs().maxCoeff();
            if (tail == 0.0 || tail <= 1e-18 * acc.cwiseAbs().maxCoeff()) break;
        }
        block = damp * acc;
    }
}

void Propagator::evolve_block(
    const Eigen::MatrixXcd& a0_block, const std::vector<double>& times,
    const std::function<void(std::size_t, double, const Eigen::MatrixXcd&)>& per_time) const {
    require_valid_times(times);
    if (static_cast<std::size_t>(a0_block.rows()) != dim_)
        throw ValidationError("initial state length does not match the kernel dimension");
    if (!a0_block.allFinite())
        throw ValidationError("initial state has non-finite amplitudes");

    if (method_ == PropagationMethod::spectral) {
        const Eigen::MatrixXcd coeffs = eigenvector_lu_.solve(a0_block);
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] == 0.0) {
                per_time(k, 0.0, a0_block);
                continue;
            }
            const Eigen::VectorXcd modes = (eigenvalues_ * times[k]).array().exp().matrix();
            per_time(k, times[k], eigenvectors_ * (modes.asDiagonal() * coeffs));
        }
        return;
    }

    // Stepped methods walk the grid; steps of (nearly) equal length reuse the
    // cached exponential. The 1e-12 relative slack absorbs grid rounding and
    // perturbs each step by far less than the integrator tolerances.
    std::vector<std::pair<double, Eigen::MatrixXcd>> exp_cache;
    Eigen::MatrixXcd current = a0_block;
    double t_now = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double dt = times[k] - t_now;
        if (dt > 0.0) {
            if (method_ == PropagationMethod::taylor_steps) {
                taylor_step(current, dt);
            } else {
                const Eigen::MatrixXcd* step = nullptr;
                for (const auto& [cached_dt, matrix] : exp_cache)
                    if (std::abs(cached_dt - dt) <= 1e-12 * cached_dt) {
                        step = &matrix;
                        break;
                    }
                if (step == nullptr)
                    step = &exp_cache.emplace_back(dt, step_matrix(dt)).second;
                current = *step * current;
            }
            t_now = times[k];
        }
        per_time(k, times[k], current);
    }
}

AmplitudeTrajectory Propagator::evolve(const Eigen::VectorXcd& a0,
                                       const std::vector<double>& times) const {
    AmplitudeTrajectory trajectory;
    trajectory.times = times;
    trajectory.amplitudes.resize(times.size());
    trajectory.norms.resize(times.size());
    evolve_block(a0, times, [&](std::size_t k, double, const Eigen::MatrixXcd& block) {
        trajectory.amplitudes[k] = block.col(0);
        trajectory.norms[k] = trajectory.amplitudes[k].norm();
    });
    return trajectory;
}

AmplitudeTrajectory propagate(const InteractionKernel& kernel, const Eigen::VectorXcd& a0,
                              const std::vector<double>& times, PropagatorOptions options) {
    if (std::abs(a0.norm() - 1.0) > 1e-12)
        throw ValidationError("initial state must be normalized to 1 within 1e-12");
    return Propagator(kernel, options).evolve(a0, times);
}

// ---------------------------------------------------------------------------
// Independent integrator and the self-check residual
// ---------------------------------------------------------------------------

std::vector<Eigen::VectorXcd> integrate_rk45(const Eigen::MatrixXcd& generator,
                                             const Eigen::VectorXcd& y0,
                                             const std::vector<double>& times,
                                             double rel_tol, double abs_tol) {
    if (times.empty()) throw ValidationError("time grid is empty");

    // Dormand-Prince 5(4) tableau.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());

    Eigen::VectorXcd y = y0;
    double t = times.front();
    out.push_back(y);

    Eigen::VectorXcd k1 = generator * y;
    double h = 0.1;

    for (std::size_t idx = 1; idx < times.size(); ++idx) {
        const double t_target = times[idx];
        long guard = 0;
        while (t < t_target) {
            if (++guard > 20'000'000)
                throw NumericError("adaptive integrator exceeded the step budget");
            h = std::min(h, t_target - t);
            const Eigen::VectorXcd k2 = generator * (y + h * (a21 * k1));
            const Eigen::VectorXcd k3 = generator * (y + h * (a31 * k1 + a32 * k2));
            const Eigen::VectorXcd k4 = generator * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Eigen::VectorXcd k5 =
                generator * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Eigen::VectorXcd k6 =
                generator * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Eigen::VectorXcd y_next =
                y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Eigen::VectorXcd k7 = generator * y_next;
            const Eigen::VectorXcd err_vec =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err = 0.0;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double tol = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(y_next(i)));
                err = std::max(err, std::abs(err_vec(i)) / tol);
            }

            if (err <= 1.0) {
                t += h;
                y = y_next;
                k1 = k7;  // first-same-as-last
            }
            const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (!(h > 0.0) || !std::isfinite(h))
                throw NumericError("adaptive integrator step size collapsed");
        }
        out.push_back(y);
    }
    return out;
}

double propagation_residual(const InteractionKernel& kernel,
                            const AmplitudeTrajectory& trajectory) {
    if (trajectory.n_times() == 0 || trajectory.amplitudes.empty()) return 0.0;
    const auto reference =
        integrate_rk45(kernel.entries, trajectory.amplitudes.front(), trajectory.times);
    double worst = 0.0;
    for (std::size_t k = 0; k < trajectory.n_times(); ++k)
        worst = std::max(worst, (trajectory.amplitudes[k] - reference[k]).norm());
    return worst;
}

std::vector<double> uniform_grid(double t_max, int n_points) {
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw ValidationError("t_max must be finite and nonnegative");
    if (n_points < 1) throw ValidationError("grid needs at least one point");
    if (n_points == 1) return {0.0};
    if (t_max == 0.0) throw ValidationError("t_max must be positive for multi-point grids");

    const double h = t_max / (n_points - 1);
    std::vector<double> times(static_cast<std::size_t>(n_points));
    for (std::size_t i = 0; i + 1 < times.size(); ++i) times[i] = static_cast<double>(i) * h;
    times.back() = t_max;
    return times;
}

}  // namespace chiral
