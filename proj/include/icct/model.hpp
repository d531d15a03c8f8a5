#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "icct/errors.hpp"

namespace icct {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

/// Real symmetric one-exciton Hamiltonian in the site basis, cm^-1.
struct SiteHamiltonian {
    Matrix h;
    std::vector<std::string> labels;

    SiteHamiltonian() = default;
    explicit SiteHamiltonian(Matrix m, std::vector<std::string> names = {});

    int size() const { return static_cast<int>(h.rows()); }
};

/// Disjoint donor/acceptor site index sets (0-based) within one aggregate.
struct ComplexPartition {
    std::vector<int> donor;
    std::vector<int> acceptor;

    /// Throws InvalidPartition unless both sets are nonempty, disjoint and
    /// within [0, n_sites).
    void validate(int n_sites) const;
};

/// Overdamped (Drude-Lorentz) bath: reorganization energy in cm^-1,
/// correlation time in fs, temperature in K. An empty correlation matrix
/// means statistically independent site baths; otherwise entry (j,k) is the
/// cross-correlation coefficient between the fluctuations on sites j and k.
struct DrudeBath {
    double reorganization = 0.0;
    double correlation_time = 0.0;
    double temperature = 0.0;
    Matrix site_correlation;  // empty => identity

    DrudeBath() = default;
    DrudeBath(double lambda, double tau_c, double temp, Matrix corr = {});

    /// Checks the scalar parameters; with n >= 0 also checks that the
    /// correlation matrix (if present) is n x n, symmetric, has unit
    /// diagonal and is positive semidefinite.
    void validate(int n_sites = -1) const;

    /// Drude cutoff rate gamma = 1/tau_c in fs^-1.
    double cutoff_rate() const { return 1.0 / correlation_time; }
};

/// Hermitian density matrix with trace in [0, 1] (subnormalized states are
/// legal: they appear as conditional states of partially transferred
/// populations).
struct DensityMatrix {
    ComplexMatrix rho;

    DensityMatrix() = default;
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix site_state(int n_sites, int site);

    int size() const { return static_cast<int>(rho.rows()); }
    double trace() const { return rho.trace().real(); }
};

/// Eigendecomposition of a site Hamiltonian: energies ascending, eigenvector
/// k in column k of `states`, each column's largest-magnitude component made
/// positive (ties broken toward the lowest site index).
struct ExcitonBasis {
    Vector energies;   // cm^-1, ascending
    Matrix states;     // orthogonal, columns are excitons
};

ExcitonBasis exciton_basis(const SiteHamiltonian& h);

/// Seven-pigment FMO Hamiltonian (energies relative to the lowest site
/// energy origin, cm^-1).
SiteHamiltonian fmo_hamiltonian();

/// Eight-pigment variant. The energy of the eighth pigment is not part of
/// the fitted set and must be supplied explicitly; couplings to it are
/// built in. Throws MissingParameter when absent.
SiteHamiltonian fmo_hamiltonian8(std::optional<double> site8_energy);

/// Two-site Hamiltonian parametrized by mixing angle and splitting:
/// H = delta_e * [[sin^2 t, sin t cos t], [sin t cos t, cos^2 t]].
/// Its eigenvalues are {0, delta_e}; for small |t| the upper exciton lives
/// mostly on site 2.
SiteHamiltonian dimer_hamiltonian(double theta, double delta_e);

struct DimerParams {
    double theta = 0.0;     // radians, in (-pi/2, pi/2]
    double delta_e = 0.0;   // cm^-1, >= 0
};

/// Inverse of dimer_hamiltonian up to the overall energy offset:
/// site energies (e1, e2) and coupling j map to the (theta, delta_e) of the
/// traceless-shifted dimer. theta is reduced to (-pi/2, pi/2].
DimerParams dimer_from_sites(double e1, double e2, double j);

}  // namespace icct
