"""Excitonic coherence transport: ICC decomposition, hierarchy propagation,
transfer rates and the ratchet random walk, backed by the C++ core."""

from ._icct import (  # noqa: F401
    HBAR_CM1_FS,
    KB_CM1_PER_K,
    ChainSpec,
    DrudeBath,
    ExcitonBasis,
    ExtractionOptions,
    HeomOptions,
    IccDecomposition,
    IcctError,
    McWalk,
    PropagationResult,
    RatchetMoments,
    RateTable,
    SiteHamiltonian,
    analytic_moments,
    coherence_time,
    dimer_from_sites,
    dimer_hamiltonian,
    exciton_basis,
    exciton_coherence,
    extract_rates,
    fmo_hamiltonian,
    fmo_hamiltonian8,
    icc_decompose,
    load_rate_table,
    monte_carlo_walk,
    p_coherent,
    p_thermal,
    propagate,
    save_rate_table,
    site_weights,
    thermal_energy,
    unitary_propagate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
