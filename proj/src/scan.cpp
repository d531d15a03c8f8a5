#include "icct/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icct/fit.hpp"
#include "icct/heom.hpp"

namespace icct {

namespace {

ScanPoint scan_point(const ScanRequest& request, const DrudeBath& bath, const std::string& parameter,
                     double value) {
    ScanPoint point;
    point.parameter = parameter;
    point.value = value;

    try {
        const SiteHamiltonian dimer = request.chain.dimer();
        const Hierarchy hier = build_hierarchy(dimer, bath, request.extraction.heom);
        const PropagationResult res =
            propagate(hier, DensityMatrix::site_state(2, 0), request.coherence_horizon);
        std::vector<double> coh(res.times.size());
        const auto series = exciton_coherence(res, dimer);
        for (size_t i = 0; i < coh.size(); ++i) coh[i] = std::abs(series[i]);
        point.coherence_time_fs = coherence_time(res.times, coh).tau;
    } catch (const FitFailure& e) {
        point.applicable = false;
        point.note = e.what();
    }

    try {
        const RateTable table = extract_rates(request.chain, bath, request.extraction);
        const RatchetMoments moments = analytic_moments(table, request.walk_time);
        point.drift_nm_per_ps = moments.drift * kDimerSpacingNm * 1000.0;
        point.diffusion_nm2_per_ps = moments.diffusion * kDimerSpacingNm * kDimerSpacingNm * 1000.0;
        point.delta_pi = moments.delta_pi;
        point.sigma_1ns_nm = std::sqrt(std::max(0.0, moments.var_n)) * kDimerSpacingNm;
    } catch (const GridTooShort& e) {
        point.applicable = false;
        point.note = point.note.empty() ? e.what() : point.note + "; " + e.what();
    }
    return point;
}

}  // namespace

std::vector<ScanPoint> scan_coherence_vs_drift(const ScanRequest& request) {
    std::vector<ScanPoint> points;
    for (double tau_c : request.correlation_times) {
        DrudeBath bath = request.base_bath;
        bath.correlation_time = tau_c;
        bath.site_correlation = Matrix();
        points.push_back(scan_point(request, bath, "correlation_time", tau_c));
    }
    for (double c : request.correlations) {
        DrudeBath bath = request.base_bath;
        Matrix corr(2, 2);
        corr << 1.0, c, c, 1.0;
        bath.site_correlation = corr;
        points.push_back(scan_point(request, bath, "site_correlation", c));
    }
    return points;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw Error("need matched series of at least 3 points");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> order(v.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        size_t i = 0;
        while (i < order.size()) {  // average rank across ties
            size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
            for (size_t k = i; k <= j; ++k) r[order[k]] = rank;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0 || syy <= 0) throw Error("rank correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace icct
