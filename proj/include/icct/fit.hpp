#pragma once

#include <vector>

namespace icct {

struct CoherenceFit {
    double tau = 0.0;        // fs
    double amplitude = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;  // relative to the signal RMS
};

/// Fits |signal|(t) ~ A exp(-t/tau) + B on samples with t >= t_min.
/// The decay constant is located by golden-section search on log(tau) with
/// the linear parameters solved exactly at each trial. Throws FitFailure
/// for non-decaying signals (tau beyond 1e6 fs, vanishing or negative
/// amplitude).
CoherenceFit coherence_time(const std::vector<double>& times, const std::vector<double>& values,
                            double t_min = 100.0);

}  // namespace icct
