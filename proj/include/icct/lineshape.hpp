#pragma once

#include <complex>
#include <vector>

#include "icct/model.hpp"

namespace icct {

/// Uniform frequency grid in wavenumbers (cm^-1), endpoints inclusive.
struct FrequencyGrid {
    double min_wavenumber = -2000.0;
    double max_wavenumber = 2000.0;
    int points = 4096;

    double spacing() const { return (max_wavenumber - min_wavenumber) / (points - 1); }
    double at(int i) const { return min_wavenumber + spacing() * i; }
};

/// Second-order cumulant of the Drude bath correlation function per unit
/// coupling weight, g(t), dimensionless. `n_matsubara` terms are summed;
/// the default converges far below the tolerances used anywhere here.
std::complex<double> bath_cumulant(const DrudeBath& bath, double t, int n_matsubara = 1000);

/// Effective bath-coupling weight of each exciton:
/// kappa_mu = sum_jk c_jk U_j_mu^2 U_k_mu^2 (identity correlation: inverse
/// participation ratio).
Vector exciton_weights(const SiteHamiltonian& h, const DrudeBath& bath);

/// Site-basis lineshape matrix I^{k'k}(omega) of an aggregate, evaluated on
/// a shared grid. Each matrix is real symmetric; the diagonal integrates to
/// 2*pi*hbar over the wavenumber grid (unit area in angular frequency).
/// Values carry units of time (fs).
struct LineshapeSet {
    FrequencyGrid grid;
    std::vector<Matrix> value;    // one n x n matrix per grid point
    Vector exciton_energies;      // cm^-1
    Vector kappa;                 // per-exciton coupling weights
    std::vector<double> window_time;  // integration horizon per exciton, fs

    int n_sites() const { return value.empty() ? 0 : static_cast<int>(value.front().rows()); }
};

/// Builds the matrix lineshape from the secular cumulant approximation:
/// each exciton contributes a shifted, kappa-weighted copy of the scalar
/// lineshape, rotated back to the site basis. Throws GridError when the
/// grid cannot hold the spectrum (peaks too close to the edges, spacing
/// coarser than 2 cm^-1, or fewer than 4 points per exciton splitting) or
/// when a diagonal element loses more than 2% of its unit area.
LineshapeSet lineshape_matrix(const SiteHamiltonian& h, const DrudeBath& bath,
                              const FrequencyGrid& grid = FrequencyGrid{});

}  // namespace icct
