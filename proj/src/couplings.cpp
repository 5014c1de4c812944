#include "chiral/couplings.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "chiral/errors.hpp"

namespace chiral {

void CouplingParams::validate() const {
    std::vector<std::string> problems;
    if (n_sites < 1) problems.push_back("n_sites must be >= 1");
    if (n_excitations < 1 || n_excitations > n_sites)
        problems.push_back("n_excitations must satisfy 1 <= M <= N");
    if (!std::isfinite(xi)) problems.push_back("xi must be finite");
    if (!(std::abs(directionality) <= 1.0))
        problems.push_back("directionality must lie in [-1, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) problems.push_back("gamma must be > 0");
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid coupling parameters:";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw ValidationError(msg.str());
    }
}

std::pair<double, double> rates_from_directionality(double directionality, double gamma) {
    if (!(std::abs(directionality) <= 1.0))
        throw ValidationError("directionality must lie in [-1, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma must be > 0");
    return {gamma * (1.0 - directionality) / 2.0, gamma * (1.0 + directionality) / 2.0};
}

InteractionKernel build_kernel(const ExcitationBasis& basis, const CouplingParams& params,
                               std::size_t dense_cap) {
    params.validate();
    if (basis.n_sites != params.n_sites || basis.n_excitations != params.n_excitations) {
        std::ostringstream msg;
        msg << "basis (N = " << basis.n_sites << ", M = " << basis.n_excitations
            << ") does not match parameters (N = " << params.n_sites
            << ", M = " << params.n_excitations << ")";
        throw ValidationError(msg.str());
    }
    const std::size_t dim = basis.size();
    if (dim > dense_cap) {
        std::ostringstream msg;
        msg << "kernel dimension C(" << basis.n_sites << "," << basis.n_excitations
            << ") = " << dim << " exceeds the dense cap of " << dense_cap;
        throw CapacityError(msg.str());
    }

    const auto [gamma_l, gamma_r] = rates_from_directionality(params.directionality, params.gamma);
    const double m_gamma_half = params.n_excitations * params.gamma / 2.0;
    const std::complex<double> i_unit(0.0, 1.0);

    InteractionKernel kernel;
    kernel.dim = dim;
    kernel.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));

    // Hop phases depend only on the site distance; precompute them.
    std::vector<std::complex<double>> phase(static_cast<std::size_t>(basis.n_sites));
    for (int d = 1; d < basis.n_sites; ++d)
        phase[static_cast<std::size_t>(d)] = std::exp(-i_unit * (params.xi * d));

    for (std::size_t p = 0; p < dim; ++p) {
        kernel.entries(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) =
            -m_gamma_half;
        for (std::size_t q = 0; q < dim; ++q) {
            if (p == q) continue;
            const auto hop = classify_pair(basis.states[p], basis.states[q]);
            if (!hop.is_single_hop()) continue;
            const int dist = std::abs(hop.raised - hop.lowered);
            const double rate = hop.raised < hop.lowered ? gamma_l : gamma_r;
            kernel.entries(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
                -rate * phase[static_cast<std::size_t>(dist)];
        }
    }
    return kernel;
}

}  // namespace chiral
