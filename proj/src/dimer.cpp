#include "icct/dimer.hpp"

#include <cmath>

#include "icct/units.hpp"

namespace icct {

double p_thermal(double theta, double delta_e, double temperature) {
    if (delta_e < 0.0) throw Error("dimer splitting must be >= 0");
    if (!(temperature > 0.0)) throw InvalidBath("temperature must be > 0");
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = 1.0 - s2;
    // p = (c2 + e^x s2) / (1 + e^x) with x = delta_e / kT >= 0, evaluated
    // with e^{-x} to stay finite for large splittings.
    const double emx = std::exp(-delta_e / units::thermal_energy(temperature));
    return (c2 * emx + s2) / (emx + 1.0);
}

double p_coherent(double theta, int initial_site) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double cross = 2.0 * s * s * c * c;
    if (initial_site == 1) return cross;
    if (initial_site == 2) return 1.0 - cross;
    throw Error("initial site must be 1 or 2");
}

double participation_ratio(double theta) {
    const double c2t = std::cos(2.0 * theta);
    return 2.0 / (1.0 + c2t * c2t);
}

std::vector<AdvantageRow> advantage_scan(double theta_min, double theta_max, int theta_steps,
                                         double de_min, double de_max, int de_steps,
                                         double temperature, int initial_site) {
    if (theta_steps < 1 || de_steps < 1) throw Error("scan needs at least one grid point per axis");
    if (de_min < 0.0) throw Error("dimer splitting must be >= 0");
    std::vector<AdvantageRow> rows;
    rows.reserve(static_cast<size_t>(theta_steps) * de_steps);
    for (int i = 0; i < theta_steps; ++i) {
        const double th = theta_steps == 1 ? theta_min
                                           : theta_min + (theta_max - theta_min) * i / (theta_steps - 1);
        for (int k = 0; k < de_steps; ++k) {
            const double de = de_steps == 1 ? de_min : de_min + (de_max - de_min) * k / (de_steps - 1);
            AdvantageRow r;
            r.theta = th;
            r.delta_e = de;
            r.p_coh = p_coherent(th, initial_site);
            r.p_th = p_thermal(th, de, temperature);
            r.advantage = r.p_coh - r.p_th;
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace icct
