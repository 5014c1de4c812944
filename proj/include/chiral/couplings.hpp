#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "chiral/hilbert.hpp"

namespace chiral {

// Physical inputs of a run. xi is the dimensionless lattice phase
// k_s * |r_{m+1} - r_m|; directionality D in [-1, 1] splits the total decay
// rate gamma into gamma_R = gamma (1 + D) / 2 and gamma_L = gamma (1 - D) / 2.
// gamma sets the time unit; all times are reported in units of 1/gamma.
struct CouplingParams {
    int n_sites = 0;
    int n_excitations = 0;
    double xi = 0.0;
    double directionality = 0.0;
    double gamma = 1.0;

    double gamma_left() const { return gamma * (1.0 - directionality) / 2.0; }
    double gamma_right() const { return gamma * (1.0 + directionality) / 2.0; }

    void validate() const;  // throws ValidationError listing every violation
};

std::pair<double, double> rates_from_directionality(double directionality, double gamma);

// Dense non-Hermitian generator of the sector amplitude equations
// da/dt = V a. Row index is the destination basis state, column the source.
struct InteractionKernel {
    std::size_t dim = 0;
    Eigen::MatrixXcd entries;
};

inline constexpr std::size_t kDefaultKernelCap = 20000;

// Diagonal -M gamma / 2; a single hop from site s2 to s1 contributes
// -gamma_L e^{-i xi |s1-s2|} when s1 < s2 and -gamma_R e^{-i xi |s1-s2|}
// when s1 > s2; everything else vanishes.
InteractionKernel build_kernel(const ExcitationBasis& basis, const CouplingParams& params,
                               std::size_t dense_cap = kDefaultKernelCap);

}  // namespace chiral
