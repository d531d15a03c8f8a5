#pragma once

#include <vector>

#include "icct/model.hpp"

namespace icct {

/// Boltzmann weight of site 2 for the dimer H(theta, delta_e) at the given
/// temperature: the destination probability of fully thermalized transfer.
double p_thermal(double theta, double delta_e, double temperature);

/// Infinite-time average of the site-2 population under purely unitary dimer
/// dynamics from a site-local initial state (1-based site index 1 or 2).
/// Depends only on the mixing angle.
double p_coherent(double theta, int initial_site);

/// Inverse participation ratio of the dimer excitons, in [1, 2].
double participation_ratio(double theta);

struct AdvantageRow {
    double theta;
    double delta_e;
    double p_coh;
    double p_th;
    double advantage;  // p_coh - p_th
};

/// Rectangular scan of the coherent-average vs thermal site-2 occupation
/// advantage. Ranges are inclusive; steps are the number of grid points per
/// axis (>= 1).
std::vector<AdvantageRow> advantage_scan(double theta_min, double theta_max, int theta_steps,
                                         double de_min, double de_max, int de_steps,
                                         double temperature, int initial_site);

}  // namespace icct
