#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chiral/couplings.hpp"
#include "chiral/hilbert.hpp"

namespace chiral {

// ---------------------------------------------------------------------------
// Initial states
// ---------------------------------------------------------------------------

struct ProductState {
    ExcitationTuple sites;
};

// (cos phi s_j^+ + sin phi s_{j+1}^+)(cos theta s_{j+2}^+ + sin theta s_{j+3}^+)|0>
// Requires M = 2 and j + 3 <= N. Angles outside [0, 2pi) are wrapped.
struct ThetaPhiState {
    int j = 1;
    double phi = 0.0;
    double theta = 0.0;
};

// Equal-weight superposition of the six pairs drawn from sites {j, ..., j+3};
// requires M = 2 and j + 3 <= N.
struct SixFoldState {
    int j = 1;
};

struct CustomState {
    Eigen::VectorXcd amplitudes;  // length C(N, M); normalized on construction
};

using InitialStateSpec = std::variant<ProductState, ThetaPhiState, SixFoldState, CustomState>;

Eigen::VectorXcd make_initial_state(const ExcitationBasis& basis, const InitialStateSpec& spec);

double wrap_angle(double angle);  // into [0, 2pi)

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

struct AmplitudeTrajectory {
    std::vector<double> times;                 // units of 1/gamma
    std::vector<Eigen::VectorXcd> amplitudes;  // one vector per time
    std::vector<double> norms;                 // ||a(t)||

    std::size_t n_times() const { return times.size(); }
};

enum class PropagationMethod {
    spectral,       // eigendecomposition of V, per-time reconstruction
    taylor_steps,   // shifted Taylor series per step, exact zero propagation
    pade_steps,     // scaling-and-squaring exp(V dt) per step
};

std::string to_string(PropagationMethod method);

struct PropagatorOptions {
    std::optional<PropagationMethod> method;  // unset = automatic selection
    double condition_limit = 1e8;             // spectral -> stepped fallback
    std::size_t spectral_dim_limit = 256;     // automatic spectral only below this
};

// Fixed-kernel propagator a(t) = exp(V t) a(0). Construction factorizes or
// caches whatever the chosen method needs; evolve() is const and safe to call
// from several threads at once.
class Propagator {
  public:
    explicit Propagator(const InteractionKernel& kernel, PropagatorOptions options = {});

    AmplitudeTrajectory evolve(const Eigen::VectorXcd& a0,
                               const std::vector<double>& times) const;

    // Block variant: columns of a0_block are independent initial states; the
    // callback sees the propagated block at every requested time in order.
    void evolve_block(const Eigen::MatrixXcd& a0_block, const std::vector<double>& times,
                      const std::function<void(std::size_t, double, const Eigen::MatrixXcd&)>&
                          per_time) const;

    PropagationMethod method() const { return method_; }
    bool fell_back() const { return fell_back_; }
    double condition_estimate() const { return condition_estimate_; }
    double max_growth_rate() const { return max_growth_rate_; }
    std::size_t dim() const { return dim_; }

  private:
    void require_valid_times(const std::vector<double>& times) const;
    Eigen::MatrixXcd step_matrix(double dt) const;
    void taylor_step(Eigen::MatrixXcd& block, double dt) const;

    std::size_t dim_ = 0;
    PropagationMethod method_ = PropagationMethod::pade_steps;
    bool fell_back_ = false;
    double condition_estimate_ = 0.0;
    double max_growth_rate_ = 0.0;

    Eigen::MatrixXcd kernel_;       // retained for stepped methods
    Eigen::MatrixXcd hops_;         // V + (M gamma / 2) I, exactly zero diagonal
    double hop_norm_ = 0.0;         // ||hops||_1
    double diagonal_shift_ = 0.0;   // M gamma / 2
    Eigen::VectorXcd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> eigenvector_lu_;
};

// One-shot convenience wrapper around Propagator.
AmplitudeTrajectory propagate(const InteractionKernel& kernel, const Eigen::VectorXcd& a0,
                              const std::vector<double>& times,
                              PropagatorOptions options = {});

// Maximum distance between the stored trajectory and an independent adaptive
// Dormand-Prince re-integration through the same time grid.
double propagation_residual(const InteractionKernel& kernel,
                            const AmplitudeTrajectory& trajectory);

// Adaptive RK45 for dy/dt = V y, reported at the requested times.
std::vector<Eigen::VectorXcd> integrate_rk45(const Eigen::MatrixXcd& generator,
                                             const Eigen::VectorXcd& y0,
                                             const std::vector<double>& times,
                                             double rel_tol = 1e-11, double abs_tol = 1e-13);

std::vector<double> uniform_grid(double t_max, int n_points);

}  // namespace chiral
