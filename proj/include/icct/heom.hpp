#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "icct/model.hpp"

namespace icct {

struct HeomOptions {
    int depth = 6;           // hierarchy truncation depth L
    int matsubara = 1;       // number of Matsubara exponentials K
    double dt = 0.5;         // integrator step, fs
    int output_stride = 2;   // store every N-th step
    bool terminator = true;  // Markovian closure for the dropped exponentials
    bool adaptive = false;   // embedded RK45 between output points
    double rel_tol = 1e-8;   // adaptive mode only
};

/// Exponential expansion of the bath correlation function and the ADO
/// bookkeeping tables. All quantities are converted to angular units
/// (rad/fs) at build time.
struct Hierarchy {
    int n_sites = 0;
    int n_modes = 0;         // effective fluctuation modes M
    int n_exp = 0;           // exponentials per mode (K+1)
    size_t n_ados = 0;
    HeomOptions options;

    ComplexMatrix omega;               // H / hbar
    Matrix mode_couplings;             // n_sites x M, diagonal of V_alpha per column
    std::vector<std::complex<double>> c;  // K+1 expansion coefficients, rad^2/fs^2
    std::vector<double> nu;               // K+1 decay rates, fs^-1
    double terminator_delta = 0.0;        // residual friction strength, fs^-1

    // Per-ADO tables; slot s = alpha*(K+1) + k.
    int n_slots = 0;
    std::vector<uint8_t> index;        // n_ados x n_slots multi-indices
    std::vector<int64_t> plus;         // n_ados x n_slots, -1 past the truncation
    std::vector<int64_t> minus;        // n_ados x n_slots, -1 at level zero
    std::vector<double> decay;         // n_ados, sum of occupied rates

    Matrix friction;                   // n x n elementwise double-commutator drift
    double stiffness = 0.0;            // crude spectral-radius estimate, fs^-1
};

/// Builds the coupled-bath hierarchy. Site correlations are diagonalized
/// into independent effective modes; modes with weight below 1e-10 are
/// dropped. With zero reorganization energy the hierarchy degenerates to a
/// single unitary level.
Hierarchy build_hierarchy(const SiteHamiltonian& h, const DrudeBath& bath, const HeomOptions& options);

/// Reduced-state trajectory on a uniform output grid.
struct PropagationResult {
    std::vector<double> times;              // fs
    std::vector<ComplexMatrix> states;      // reduced density matrices
    std::vector<std::string> warnings;
    double dt_output = 0.0;

    std::vector<double> population(int site) const;
    std::vector<double> population_sum(const std::vector<int>& sites) const;
    std::vector<double> trace() const;
};

/// Integrates the hierarchy from `initial` (all auxiliary levels start at
/// zero) to t_final. Throws IntegrationFailure on non-finite state values.
PropagationResult propagate(const Hierarchy& hier, const DensityMatrix& initial, double t_final);

/// Exact unitary reference: sigma(t) = exp(-iHt/hbar) sigma0 exp(+iHt/hbar)
/// sampled on the same kind of uniform grid.
PropagationResult unitary_propagate(const SiteHamiltonian& h, const DensityMatrix& initial, double t_final,
                                    double dt_output);

/// Off-diagonal element (a,b) of the state in the exciton basis of `h`,
/// as a complex time series.
std::vector<std::complex<double>> exciton_coherence(const PropagationResult& result, const SiteHamiltonian& h,
                                                    int a = 0, int b = 1);

/// Number of auxiliary density operators for M modes, K Matsubara terms and
/// depth L: C(M(K+1) + L, L).
size_t hierarchy_size(int n_modes, int matsubara, int depth);

}  // namespace icct
