#include "chiral/lindblad.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "chiral/errors.hpp"
#include "chiral/observables.hpp"

namespace chiral {

namespace {

constexpr std::complex<double> kImag(0.0, 1.0);

double phase_sign(PhaseSign phase) { return phase == PhaseSign::minus ? -1.0 : 1.0; }

// target += scale * kron(A, B)
void add_kron(Eigen::MatrixXcd& target, const std::complex<double>& scale,
              const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const Eigen::Index rows = b.rows(), cols = b.cols();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const std::complex<double> w = scale * a(i, j);
            if (w == 0.0) continue;
            target.block(i * rows, j * cols, rows, cols) += w * b;
        }
}

void require_times(const std::vector<double>& times) {
    if (times.empty()) throw ValidationError("time grid is empty");
    double prev = -1.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0)
            throw ValidationError("times must be finite and nonnegative");
        if (t <= prev && !(prev < 0.0)) throw ValidationError("times must be strictly increasing");
        prev = t;
    }
}

void evolve_density_stream(
    const Liouvillian& liouvillian, const DensityState& rho0, const std::vector<double>& times,
    const std::function<void(std::size_t, double, const Eigen::MatrixXcd&)>& per_time) {
    const Eigen::Index dim = rho0.rho.rows();
    evolve_density_multi(liouvillian, {rho0}, times,
                         [&](std::size_t k, double t, const Eigen::MatrixXcd& stacked) {
                             per_time(k, t,
                                      Eigen::Map<const Eigen::MatrixXcd>(stacked.col(0).data(),
                                                                         dim, dim));
                         });
}

}  // namespace

void evolve_density_multi(
    const Liouvillian& liouvillian, const std::vector<DensityState>& initial,
    const std::vector<double>& times,
    const std::function<void(std::size_t, double, const Eigen::MatrixXcd&)>& per_time) {
    require_times(times);
    if (initial.empty()) throw ValidationError("no density matrices to evolve");
    const Eigen::Index dim = Eigen::Index(1) << liouvillian.n_sites;
    Eigen::MatrixXcd stacked(dim * dim, static_cast<Eigen::Index>(initial.size()));
    for (std::size_t c = 0; c < initial.size(); ++c) {
        if (initial[c].n_sites != liouvillian.n_sites)
            throw ValidationError("density matrix and generator site counts differ");
        initial[c].validate();
        stacked.col(static_cast<Eigen::Index>(c)) =
            Eigen::Map<const Eigen::VectorXcd>(initial[c].rho.data(), dim * dim);
    }

    std::vector<std::pair<double, Eigen::MatrixXcd>> exp_cache;
    double t_now = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double dt = times[k] - t_now;
        if (dt > 0.0) {
            const Eigen::MatrixXcd* step = nullptr;
            for (const auto& [cached_dt, matrix] : exp_cache)
                if (std::abs(cached_dt - dt) <= 1e-12 * cached_dt) {
                    step = &matrix;
                    break;
                }
            if (step == nullptr)
                step = &exp_cache.emplace_back(dt, (liouvillian.generator * dt).exp()).second;
            stacked = *step * stacked;
            t_now = times[k];
            if (!stacked.allFinite()) {
                std::ostringstream msg;
                msg << "density evolution became non-finite at t = " << times[k];
                throw NumericError(msg.str());
            }
        }
        per_time(k, times[k], stacked);
    }
}

void DensityState::validate() const {
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    if (rho.rows() != dim || rho.cols() != dim)
        throw ValidationError("density matrix has the wrong dimension for n_sites");
    if (!rho.allFinite()) throw ValidationError("density matrix has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("density matrix is not Hermitian within 1e-10");
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw ValidationError("density matrix trace differs from 1 by more than 1e-10");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw ValidationError("density matrix has an eigenvalue below -1e-8");
}

std::vector<Eigen::MatrixXcd> lowering_operators(int n_sites) {
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(static_cast<std::size_t>(n_sites));
    for (int m = 0; m < n_sites; ++m) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
        const Eigen::Index bit = Eigen::Index(1) << m;
        for (Eigen::Index b = 0; b < dim; ++b)
            if (b & bit) op(b & ~bit, b) = 1.0;
        ops.push_back(std::move(op));
    }
    return ops;
}

Eigen::MatrixXcd chain_hamiltonian(const CouplingParams& params, PhaseSign phase) {
    const int n = params.n_sites;
    const double s = phase_sign(phase);
    const auto [gamma_l, gamma_r] = rates_from_directionality(params.directionality, params.gamma);
    const auto sigma = lowering_operators(n);
    const Eigen::Index dim = Eigen::Index(1) << n;

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int mu = 1; mu <= n; ++mu)
        for (int nu = 1; nu <= n; ++nu) {
            if (mu == nu) continue;
            const double rate = mu < nu ? gamma_l : gamma_r;
            const double dist = std::abs(mu - nu) * params.xi;
            const Eigen::MatrixXcd transfer =
                sigma[static_cast<std::size_t>(mu - 1)].adjoint() *
                sigma[static_cast<std::size_t>(nu - 1)];
            h += (-kImag * rate / 2.0) *
                 (std::exp(s * kImag * dist) * transfer -
                  std::exp(-s * kImag * dist) * transfer.adjoint());
        }
    return h;
}

Liouvillian build_liouvillian(const CouplingParams& params, PhaseSign phase, int site_cap) {
    CouplingParams check = params;
    check.n_excitations = 1;  // the generator acts on the full space; M is irrelevant
    check.validate();
    if (params.n_sites > site_cap) {
        std::ostringstream msg;
        msg << "oracle limited to " << site_cap << " sites (4^N generator); got N = "
            << params.n_sites;
        throw CapacityError(msg.str());
    }

    const int n = params.n_sites;
    const double s = phase_sign(phase);
    const auto [gamma_l, gamma_r] = rates_from_directionality(params.directionality, params.gamma);
    const auto sigma = lowering_operators(n);
    const Eigen::Index dim = Eigen::Index(1) << n;
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);

    Liouvillian liou;
    liou.n_sites = n;
    liou.phase = phase;
    liou.gamma_left = gamma_l;
    liou.gamma_right = gamma_r;
    liou.xi = params.xi;
    liou.generator = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);

    const Eigen::MatrixXcd h = chain_hamiltonian(params, phase);
    add_kron(liou.generator, -kImag, identity, h);
    add_kron(liou.generator, kImag, h.transpose(), identity);

    // Dissipators run over all site pairs with signed-distance phases. The
    // left channel carries e^{-s i xi (mu - nu)}, the right channel the
    // opposite sign, tied to the same s as the Hamiltonian phases.
    for (int mu = 1; mu <= n; ++mu)
        for (int nu = 1; nu <= n; ++nu) {
            const double signed_dist = (mu - nu) * params.xi;
            const std::complex<double> weight =
                gamma_l * std::exp(-s * kImag * signed_dist) +
                gamma_r * std::exp(s * kImag * signed_dist);
            const Eigen::MatrixXcd& sig_mu = sigma[static_cast<std::size_t>(mu - 1)];
            const Eigen::MatrixXcd& sig_nu = sigma[static_cast<std::size_t>(nu - 1)];
            const Eigen::MatrixXcd transfer = sig_mu.adjoint() * sig_nu;

            add_kron(liou.generator, -0.5 * weight, identity, transfer);
            add_kron(liou.generator, -0.5 * weight, transfer.transpose(), identity);
            add_kron(liou.generator, weight, sig_mu.conjugate(), sig_nu);
        }
    return liou;
}

std::vector<DensityState> evolve_density(const Liouvillian& liouvillian, const DensityState& rho0,
                                         const std::vector<double>& times) {
    std::vector<DensityState> states(times.size());
    evolve_density_stream(liouvillian, rho0, times,
                          [&](std::size_t k, double, const Eigen::MatrixXcd& rho) {
                              states[k] = DensityState{liouvillian.n_sites, rho};
                          });
    return states;
}

Eigen::VectorXcd embed_sector_state(const ExcitationBasis& basis,
                                    const Eigen::VectorXcd& amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != basis.size())
        throw ValidationError("amplitude vector does not match the basis");
    const Eigen::Index dim = Eigen::Index(1) << basis.n_sites;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    for (std::size_t p = 0; p < basis.size(); ++p) {
        Eigen::Index mask = 0;
        for (int site : basis.states[p]) mask |= Eigen::Index(1) << (site - 1);
        psi(mask) = amplitudes(static_cast<Eigen::Index>(p));
    }
    return psi;
}

DensityState pure_density(int n_sites, const Eigen::VectorXcd& psi) {
    if (psi.size() != (Eigen::Index(1) << n_sites))
        throw ValidationError("state vector does not match n_sites");
    if (std::abs(psi.norm() - 1.0) > 1e-12)
        throw ValidationError("pure state must be normalized");
    return DensityState{n_sites, psi * psi.adjoint()};
}

Eigen::MatrixXcd sector_block(const Eigen::Ref<const Eigen::MatrixXcd>& rho,
                              const ExcitationBasis& basis) {
    if (rho.rows() != (Eigen::Index(1) << basis.n_sites) || rho.rows() != rho.cols())
        throw ValidationError("density matrix and basis site counts differ");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Index> masks(basis.size());
    for (std::size_t p = 0; p < basis.size(); ++p) {
        Eigen::Index mask = 0;
        for (int site : basis.states[p]) mask |= Eigen::Index(1) << (site - 1);
        masks[p] = mask;
    }
    Eigen::MatrixXcd block(dim, dim);
    for (Eigen::Index p = 0; p < dim; ++p)
        for (Eigen::Index q = 0; q < dim; ++q)
            block(p, q) = rho(masks[static_cast<std::size_t>(p)],
                              masks[static_cast<std::size_t>(q)]);
    return block;
}

Eigen::MatrixXcd sector_block(const DensityState& state, const ExcitationBasis& basis) {
    if (state.n_sites != basis.n_sites)
        throw ValidationError("density matrix and basis site counts differ");
    return sector_block(Eigen::Ref<const Eigen::MatrixXcd>(state.rho), basis);
}

OracleReport oracle_compare(const CouplingParams& params, const InitialStateSpec& initial,
                            const std::vector<double>& times, double tolerance, PhaseSign phase) {
    params.validate();
    const auto basis = enumerate_basis(params.n_sites, params.n_excitations);
    const auto kernel = build_kernel(basis, params);
    const Propagator propagator(kernel);
    const Eigen::VectorXcd a0 = make_initial_state(basis, initial);
    const auto trajectory = propagator.evolve(a0, times);

    const auto liouvillian = build_liouvillian(params, phase);
    const auto rho0 = pure_density(params.n_sites, embed_sector_state(basis, a0));

    OracleReport report;
    report.params = params;
    report.tolerance = tolerance;

    evolve_density_stream(
        liouvillian, rho0, times, [&](std::size_t k, double, const Eigen::MatrixXcd& rho) {
            report.max_trace_error = std::max(report.max_trace_error, std::abs(rho.trace() - 1.0));
            report.max_hermiticity_error = std::max(
                report.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());

            const DensityState state{liouvillian.n_sites, rho};
            const Eigen::MatrixXcd block = sector_block(state, basis);
            const Eigen::VectorXcd& a = trajectory.amplitudes[k];
            report.max_block_deviation = std::max(
                report.max_block_deviation, (block - a * a.adjoint()).cwiseAbs().maxCoeff());

            const Eigen::VectorXd oracle_weights = block.diagonal().real();
            const Eigen::VectorXd kernel_weights = a.cwiseAbs2();
            report.max_population_deviation =
                std::max(report.max_population_deviation,
                         (populations_from_weights(oracle_weights, basis) -
                          populations_from_weights(kernel_weights, basis))
                             .cwiseAbs()
                             .maxCoeff());
            for (int r = 1; r < params.n_sites; ++r)
                report.max_g2_deviation =
                    std::max(report.max_g2_deviation,
                             std::abs(g2_from_weights(oracle_weights, basis, r) -
                                      g2_from_weights(kernel_weights, basis, r)));
            if (params.n_sites >= 3)
                report.max_g3_deviation = std::max(
                    report.max_g3_deviation, std::abs(g3_from_weights(oracle_weights, basis).g3 -
                                                      g3_from_weights(kernel_weights, basis).g3));
        });

    report.passed = report.max_block_deviation < tolerance &&
                    report.max_population_deviation < tolerance &&
                    report.max_g2_deviation < tolerance && report.max_g3_deviation < tolerance;
    return report;
}

}  // namespace chiral
