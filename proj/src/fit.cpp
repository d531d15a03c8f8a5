#include "icct/fit.hpp"

#include <cmath>
#include <vector>

#include "icct/errors.hpp"
#include "icct/model.hpp"

namespace icct {

namespace {

struct Trial {
    double amplitude = 0.0;
    double offset = 0.0;
    double sse = 0.0;
};

// exact least squares of (A, B) for fixed tau
Trial linear_fit(const std::vector<double>& t, const std::vector<double>& y, double tau) {
    const double n = static_cast<double>(t.size());
    double se = 0, see = 0, sy = 0, sye = 0, syy = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-t[i] / tau);
        se += e;
        see += e * e;
        sy += y[i];
        sye += y[i] * e;
        syy += y[i] * y[i];
    }
    const double det = n * see - se * se;
    Trial out;
    if (std::abs(det) < 1e-14 * n * see + 1e-300) {  // basis degenerate (tau far off scale)
        out.amplitude = 0.0;
        out.offset = sy / n;
    } else {
        out.amplitude = (n * sye - se * sy) / det;
        out.offset = (sy - out.amplitude * se) / n;
    }
    out.sse = syy - 2.0 * (out.amplitude * sye + out.offset * sy) + out.amplitude * out.amplitude * see +
              2.0 * out.amplitude * out.offset * se + out.offset * out.offset * n;
    return out;
}

}  // namespace

CoherenceFit coherence_time(const std::vector<double>& times, const std::vector<double>& values,
                            double t_min) {
    if (times.size() != values.size()) throw Error("time and value arrays must match");
    std::vector<double> t, y;
    for (size_t i = 0; i < times.size(); ++i)
        if (times[i] >= t_min) {
            t.push_back(times[i]);
            y.push_back(std::abs(values[i]));
        }
    if (t.size() < 8) throw FitFailure("too few samples past the fit onset");

    // golden-section search on log10(tau) over [1 fs, 10^7 fs]
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 7.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = linear_fit(t, y, std::pow(10.0, x1)).sse;
    double f2 = linear_fit(t, y, std::pow(10.0, x2)).sse;
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = linear_fit(t, y, std::pow(10.0, x1)).sse;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = linear_fit(t, y, std::pow(10.0, x2)).sse;
        }
    }
    const double tau = std::pow(10.0, 0.5 * (lo + hi));
    const Trial best = linear_fit(t, y, tau);

    double rms = 0.0;
    for (double v : y) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(y.size()));
    if (tau > 1e6) throw FitFailure("signal does not decay within the fit horizon");
    if (!(best.amplitude > 1e-6 * (rms + 1e-300)))
        throw FitFailure("no decaying component with positive amplitude");

    CoherenceFit out;
    out.tau = tau;
    out.amplitude = best.amplitude;
    out.offset = best.offset;
    out.rms_residual = rms > 0.0 ? std::sqrt(std::max(0.0, best.sse / static_cast<double>(y.size()))) / rms : 0.0;
    return out;
}

}  // namespace icct
