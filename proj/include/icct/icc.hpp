#pragma once

#include "icct/model.hpp"

namespace icct {

/// Singular-value decomposition of the donor-acceptor coupling block
/// J = H[donor, acceptor].  Channel l couples the donor-side state in
/// column l of `donor_states` to the acceptor-side state in column l of
/// `acceptor_states` with strength `couplings[l]`; couplings are sorted
/// descending and are >= 0.  Vector signs follow the exciton convention
/// (largest-magnitude donor component positive, ties toward the lowest
/// index; the acceptor partner carries the compensating sign).
struct IccDecomposition {
    Vector couplings;        // cm^-1, descending
    Matrix donor_states;     // |D| x r, orthonormal columns
    Matrix acceptor_states;  // |A| x r, orthonormal columns
};

IccDecomposition icc_decompose(const SiteHamiltonian& h, const ComplexPartition& part);

/// The aggregate Hamiltonian reassembled in the basis
/// {donor channels, donor kernel completion, acceptor channels, acceptor
/// kernel completion}: both diagonal blocks are rotated intact and the
/// off-diagonal block is diagonal with the channel couplings in its top
/// rows. Site ordering is donor block first.
struct IccBlockHamiltonian {
    Matrix h;                 // full rotated Hamiltonian
    int n_donor = 0;          // donor block dimension
    int n_channels = 0;       // number of coupling channels (rank of J)
};

IccBlockHamiltonian icc_block_hamiltonian(const SiteHamiltonian& h, const ComplexPartition& part);

/// Squared components of one decomposition vector: how the channel state
/// distributes over the member sites. Sums to 1.
Vector site_weights(const Vector& state);

/// Number of channels with coupling above `tol` (absolute, cm^-1).
int coupling_rank(const IccDecomposition& d, double tol = 1e-10);

}  // namespace icct
