#pragma once

#include <string>
#include <vector>

#include "icct/model.hpp"
#include "icct/rates.hpp"
#include "icct/walk.hpp"

namespace icct {

inline constexpr double kDimerSpacingNm = 3.0;

struct ScanPoint {
    std::string parameter;       // "correlation_time" or "site_correlation"
    double value = 0.0;
    double coherence_time_fs = 0.0;
    double drift_nm_per_ps = 0.0;
    double diffusion_nm2_per_ps = 0.0;
    double delta_pi = 0.0;
    double sigma_1ns_nm = 0.0;   // sqrt(var) at 1 ns in nm
    bool applicable = true;
    std::string note;
};

struct ScanRequest {
    ChainSpec chain;
    DrudeBath base_bath{35.0, 50.0, 300.0};
    std::vector<double> correlation_times{25.0, 50.0, 100.0, 200.0};
    std::vector<double> correlations{0.3, 0.6, 0.9};  // intra-dimer cross correlation
    ExtractionOptions extraction;
    double coherence_horizon = 1500.0;  // fs of dimer dynamics for the decay fit
    double walk_time = 1e6;             // fs, for sigma_1ns
};

/// One row per bath variant: intra-dimer coherence lifetime against the
/// ratchet transport asymptotics of the same bath. Points whose chain
/// never completes a jump (no decay of the survival, e.g. a dissipation-
/// free bath) are flagged not applicable instead of failing the scan.
std::vector<ScanPoint> scan_coherence_vs_drift(const ScanRequest& request);

/// Spearman rank correlation between two equal-length series.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace icct
