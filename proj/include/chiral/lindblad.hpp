#pragma once

#include <Eigen/Dense>
#include <vector>

#include "chiral/couplings.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/hilbert.hpp"

namespace chiral {

// Sign of the exponent in the guided-mode coupling phases. The two choices
// are complex conjugates of each other; populations and density correlations
// agree for real initial amplitudes, but sector coherences do not. `minus`
// matches the interaction kernel convention (hop phase e^{-i xi |s1-s2|}) and
// is the default; `plus` is kept for cross-checking the conjugate form.
enum class PhaseSign { minus, plus };

inline constexpr int kDefaultOracleSiteCap = 6;

// Full-space density matrix of the N-site chain, 2^N x 2^N.
struct DensityState {
    int n_sites = 0;
    Eigen::MatrixXcd rho;

    // Hermiticity and unit trace to 1e-10, eigenvalues above -1e-8.
    void validate() const;
};

// Dense superoperator acting on column-vectorized density matrices.
struct Liouvillian {
    int n_sites = 0;
    PhaseSign phase = PhaseSign::minus;
    double gamma_left = 0.0;
    double gamma_right = 0.0;
    double xi = 0.0;
    Eigen::MatrixXcd generator;  // 4^N x 4^N
};

// One dipole lowering operator per site, 2^N x 2^N each.
std::vector<Eigen::MatrixXcd> lowering_operators(int n_sites);

// Coherent cascaded Hamiltonian H_L + H_R of the chain.
Eigen::MatrixXcd chain_hamiltonian(const CouplingParams& params, PhaseSign phase);

Liouvillian build_liouvillian(const CouplingParams& params, PhaseSign phase = PhaseSign::minus,
                              int site_cap = kDefaultOracleSiteCap);

std::vector<DensityState> evolve_density(const Liouvillian& liouvillian, const DensityState& rho0,
                                         const std::vector<double>& times);

// Evolves several density matrices in lockstep under one generator, sharing
// the cached step exponential. The callback receives the stacked vectorized
// states (4^N x n_states) at every requested time; column c reshapes to the
// 2^N x 2^N density matrix of state c.
void evolve_density_multi(
    const Liouvillian& liouvillian, const std::vector<DensityState>& initial,
    const std::vector<double>& times,
    const std::function<void(std::size_t, double, const Eigen::MatrixXcd&)>& per_time);

// Embeds sector amplitudes into the full 2^N space.
Eigen::VectorXcd embed_sector_state(const ExcitationBasis& basis, const Eigen::VectorXcd& amplitudes);

DensityState pure_density(int n_sites, const Eigen::VectorXcd& psi);

// <phi_p| rho |phi_q> over the ordered M-excitation basis.
Eigen::MatrixXcd sector_block(const DensityState& state, const ExcitationBasis& basis);
Eigen::MatrixXcd sector_block(const Eigen::Ref<const Eigen::MatrixXcd>& rho,
                              const ExcitationBasis& basis);

struct OracleReport {
    CouplingParams params;
    double tolerance = 0.0;
    double max_block_deviation = 0.0;     // || sector block - a a^dag ||_max over time
    double max_population_deviation = 0.0;
    double max_g2_deviation = 0.0;
    double max_g3_deviation = 0.0;
    double max_trace_error = 0.0;         // |Tr rho - 1|
    double max_hermiticity_error = 0.0;   // || rho - rho^dag ||_max
    bool passed = false;
};

// Runs the master-equation engine and the sector kernel side-by-side from the
// same initial state and reports the worst disagreement over the time grid.
OracleReport oracle_compare(const CouplingParams& params, const InitialStateSpec& initial,
                            const std::vector<double>& times, double tolerance = 1e-8,
                            PhaseSign phase = PhaseSign::minus);

}  // namespace chiral
