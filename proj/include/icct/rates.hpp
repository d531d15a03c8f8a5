#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "icct/heom.hpp"
#include "icct/model.hpp"

namespace icct {

/// Every dimer of the chain has a low-energy site on its left and a
/// high-energy site on its right; neighboring dimers touch through a weak
/// coupling between the right site of one and the left site of the next.
/// A walker that hopped rightward therefore enters through the left (low)
/// site, one that hopped leftward through the right (high) site.
/// Entry side epsilon: +1 = left/low site, -1 = right/high site.
/// Hop direction delta: +1 = rightward, -1 = leftward.
struct ChainSpec {
    double site_gap = 120.0;        // intra-dimer site energy difference, cm^-1
    double intra_coupling = -87.7;  // intra-dimer coupling, cm^-1
    double probe_coupling = 1.0;    // inter-dimer coupling used in the simulation, cm^-1
    double coupling = 15.0;         // inter-dimer coupling the table is rescaled to, cm^-1

    SiteHamiltonian chain_hamiltonian(int n_dimers) const;  // left-to-right site ordering
    SiteHamiltonian dimer() const;                          // single dimer block
};

inline constexpr int kChannels = 4;  // (eps,delta) = (+,+), (+,-), (-,+), (-,-)
inline int channel_index(int eps, int delta) { return (eps > 0 ? 0 : 2) + (delta > 0 ? 0 : 1); }

/// First-jump waiting-time table of the dimer chain.
/// `hazard` holds the rescaled instantaneous transfer rates (quadratic in
/// the coupling ratio); `density` the survival-corrected first-jump
/// densities f_{eps,delta}(t) used by sampling and moments. Beyond the
/// stored grid both continue as an exponential tail with the per-entry-side
/// total rate `tail_rate`, so the four branch probabilities of each entry
/// side sum to one exactly.
struct RateTable {
    std::vector<double> times;                          // uniform, fs
    std::array<std::vector<double>, kChannels> hazard;  // fs^-1
    std::array<std::vector<double>, kChannels> density; // fs^-1
    std::array<double, kChannels> probability{};        // branch probabilities
    std::array<double, kChannels> mean_time{};          // E[t | channel], fs
    std::array<double, kChannels> mean_time_sq{};       // E[t^2 | channel], fs^2
    std::array<double, 2> tail_rate{};                  // total hazard past the grid, per eps
    std::array<double, 2> tail_survival{};              // survival mass at the grid end, per eps
    std::map<std::string, double> parameters;           // provenance header

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    void validate() const;  // monotonicity, nonnegativity, branch sums
};

struct ExtractionOptions {
    double t_sim = 1600.0;      // fs of dynamics per entry side
    int n_dimers = 3;           // chain length for the probe simulation
    HeomOptions heom{.depth = 5, .matsubara = 0, .dt = 0.5, .output_stride = 4};
    int smooth_window = 11;     // local-polynomial differentiation window (odd)
    double tail_cap = 1e8;      // fs; longest admissible exponential extension
    double stationarity_tol = 0.2;  // relative hazard drift over the last fifth
};

/// Runs the probe-coupling chain simulation from both entry sides,
/// differentiates the neighbor-dimer populations, rescales to the working
/// coupling and applies the first-jump survival correction. Throws
/// GridTooShort when the hazard has not stabilized within the window or
/// when 99.9% of the jump mass cannot be reached within the tail cap.
RateTable extract_rates(const ChainSpec& chain, const DrudeBath& bath,
                        const ExtractionOptions& options = ExtractionOptions{});

/// Local quadratic least-squares derivative (symmetric window inside,
/// shifted windows at the edges).
std::vector<double> smoothed_derivative(const std::vector<double>& y, double dt, int window);

/// Ratio of opposing hazards per entry side; NaN where both vanish.
struct AsymmetrySeries {
    std::vector<double> times;
    std::vector<double> from_left;   // entry side +1
    std::vector<double> from_right;  // entry side -1
};
AsymmetrySeries rate_asymmetry(const RateTable& table);

void save_rate_table(const RateTable& table, const std::string& path);
RateTable load_rate_table(const std::string& path);

}  // namespace icct
