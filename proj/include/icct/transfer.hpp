#pragma once

#include <complex>
#include <vector>

#include "icct/heom.hpp"
#include "icct/lineshape.hpp"
#include "icct/model.hpp"

namespace icct {

/// Spectral overlap kernel K_jk = (1/4pi) sum_{j'k'} J_{j'k'} \int domega
/// E^{j'j}(omega) I^{k'k}(omega): donor index j, acceptor index k, units
/// cm^-1 * fs. Both lineshape sets must share one grid.
Matrix k_matrix(const LineshapeSet& donor, const LineshapeSet& acceptor, const Matrix& coupling);

/// Fourth-order response tensor on the combined donor+acceptor space,
/// d sigma_ab/dt = sum_cd R[a,b,c,d] sigma_cd, equal to the double
/// commutator -(1/hbar^2)[V, [K, sigma]] with V the coupling block matrix
/// and K the Hermitian extension of k_matrix. Units fs^-1.
struct TransferTensor {
    int n_donor = 0;
    int n_total = 0;
    std::vector<std::complex<double>> r;  // n_total^4, row-major over (a,b,c,d)

    std::complex<double>& at(int a, int b, int c, int d);
    const std::complex<double>& at(int a, int b, int c, int d) const;
    ComplexMatrix apply(const ComplexMatrix& sigma) const;
};

TransferTensor transfer_tensor(const Matrix& k, const Matrix& coupling);

/// Right-hand side of the perturbative master equation on the combined
/// space: builds the overlap kernel from the two lineshape sets and applies
/// the double commutator to sigma. Total trace is conserved exactly.
ComplexMatrix mcfret_rhs(const ComplexMatrix& sigma, const LineshapeSet& donor, const LineshapeSet& acceptor,
                         const Matrix& coupling);

/// Conditional-acceptor-state prediction: convolves the transfer-rate
/// samples with the relaxation trajectory of the arrival state,
/// rho_A(t) = int_0^t r(t') G(t - t') rho* dt'.
/// `greens` must hold G(t) rho* on a uniform grid matching `rate_times`.
/// Rate samples below -1e-12 throw InvalidRate (smaller negatives are
/// clipped to zero). A non-positive-semidefinite prediction is reported in
/// the result's warnings, never silently repaired.
PropagationResult predict_acceptor_state(const std::vector<double>& rate_times,
                                         const std::vector<double>& rate_values,
                                         const PropagationResult& greens);

struct Proportionality {
    double scale = 0.0;     // least-squares factor mapping reference onto signal
    double pearson = 0.0;   // correlation coefficient
    double rms_residual = 0.0;  // residual RMS relative to the signal RMS
};

/// Least-squares comparison of a rate signal against a reference series
/// (donor channel population): signal ~ scale * reference.
Proportionality predict_rate_proportionality(const std::vector<double>& signal,
                                             const std::vector<double>& reference);

}  // namespace icct
