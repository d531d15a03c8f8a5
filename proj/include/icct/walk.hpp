#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "icct/model.hpp"
#include "icct/rates.hpp"

namespace icct {

/// One jump type of a semi-Markov walk: from/to are direction-memory states
/// ("coins"), the displacement is carried by the jump, waiting-time moments
/// are conditional on the jump being this one.
struct Channel {
    int from = 0;
    int to = 0;
    double displacement = 0.0;  // dimer spacings
    double prob = 0.0;          // branch probability given `from`
    double mean_t = 0.0;        // fs
    double mean_t_sq = 0.0;     // fs^2
};

struct ChannelChain {
    int n_coins = 0;
    std::vector<Channel> channels;

    Matrix coin_matrix() const;  // embedded coin-to-coin transition matrix
};

/// Stationary distribution of a stochastic matrix. Throws DegenerateChain
/// when the unit eigenvalue is not simple (reducible or ill-defined chain).
Vector limiting_distribution(const Matrix& p);

/// How the divergent part of the jump-chain resolvent is regularized when
/// accumulating inter-step covariances; the stationary weight can be
/// subtracted along columns (destination-indexed) or rows. Only one of the
/// two reproduces Monte Carlo variances; see the sampling tests.
enum class ShiftConvention { Column, Row };

struct AnalyticMoments {
    double mean_n = 0.0;          // position at t_total
    double var_n = 0.0;
    double drift = 0.0;           // spacings / fs
    double diffusion = 0.0;       // spacings^2 / fs
    double mean_step_time = 0.0;  // fs
    double mean_step = 0.0;       // spacings per jump
    Vector pi;                    // stationary coin weights
};

/// Long-time position moments of the channel chain (renewal-reward
/// asymptotics; exact up to O(1) boundary terms).
AnalyticMoments channel_chain_moments(const ChannelChain& chain, double t_total,
                                      ShiftConvention convention = ShiftConvention::Column);

/// The four-channel chain encoded by a rate table.
ChannelChain to_channel_chain(const RateTable& table);

/// channel_chain_moments applied to a rate table; delta_pi additionally
/// reports pi(+1) - pi(-1).
struct RatchetMoments : AnalyticMoments {
    double delta_pi = 0.0;
};
RatchetMoments analytic_moments(const RateTable& table, double t_total,
                                ShiftConvention convention = ShiftConvention::Column);

struct WalkOptions {
    long long n_traj = 5000;
    double t_total = 1e6;  // fs
    uint64_t seed = 12345;
    int threads = 0;       // 0 = hardware default, overridable via ICCT_THREADS
    int initial_coin = 0;  // +1, -1, or 0 = draw from the stationary weights
};

struct McWalk {
    long long n_traj = 0;
    double t_total = 0.0;
    double mean_n = 0.0;
    double var_n = 0.0;
    double se_mean = 0.0;       // standard error of mean_n
    double se_var = 0.0;        // standard error of var_n (fourth-moment based)
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::map<long long, long long> histogram;
};

/// Kinetic Monte Carlo sampling of the semi-Markov walk defined by a rate
/// table: one uniform draw picks the branch, a second inverts the
/// conditional waiting-time distribution (linear interpolation on the grid,
/// exact exponential inversion in the tail). Trajectories are seeded
/// individually, so results do not depend on the thread count.
McWalk monte_carlo_walk(const RateTable& table, const WalkOptions& options);

/// Detailed-balance random walk on the same dimer-chain geometry without
/// any direction memory inside the waiting times: from a low site the
/// walker jumps uphill (intra-dimer with probability p_intra, otherwise to
/// the neighbor on its left), from a high site downhill (intra-dimer with
/// p_intra, otherwise rightward), with total escape rates related by the
/// Boltzmann factor of the site gap.
struct ClassicalBaseline {
    ChannelChain chain;
    AnalyticMoments analytic;
    McWalk mc;
};
ClassicalBaseline classical_baseline(double delta_e, double temperature, double p_intra,
                                     double uphill_rate, const WalkOptions& options);

}  // namespace icct
