#include "icct/lineshape.hpp"

#include <cmath>

#include "icct/units.hpp"

namespace icct {

namespace {

constexpr std::complex<double> I{0.0, 1.0};
constexpr double kDecayTarget = 23.0;    // e^-23 ~ 1e-10 tail truncation
constexpr double kTimeCap = 16384.0;     // fs, weak-damping horizon
constexpr double kTimeStep = 0.5;        // fs, cumulant sampling

// exp(i*theta)-weighted overlap integrals of the two linear interpolation
// hat functions over one unit cell: W0 pairs with the left node, W1 with
// the right one.
void filon_weights(double theta, std::complex<double>& w0, std::complex<double>& w1) {
    const std::complex<double> z = I * theta;
    if (std::abs(theta) < 1e-3) {
        const std::complex<double> z2 = z * z, z3 = z2 * z;
        const std::complex<double> i0 = 1.0 + z / 2.0 + z2 / 6.0 + z3 / 24.0;
        const std::complex<double> i1 = 0.5 + z / 3.0 + z2 / 8.0 + z3 / 30.0;
        w0 = i0 - i1;
        w1 = i1;
        return;
    }
    const std::complex<double> e = std::exp(z);
    const std::complex<double> i0 = (e - 1.0) / z;
    const std::complex<double> i1 = (e - i0) / z;
    w0 = i0 - i1;
    w1 = i1;
}

}  // namespace

std::complex<double> bath_cumulant(const DrudeBath& bath, double t, int n_matsubara) {
    bath.validate();
    if (t < 0.0) throw Error("cumulant time must be >= 0");
    const double beta = units::thermal_time(bath.temperature);
    const double gamma = bath.cutoff_rate();
    const double lam = bath.reorganization / units::hbar;
    std::complex<double> g = 0.0;

    auto accumulate = [&](std::complex<double> c, double nu) {
        // (c/nu^2) (e^{-nu t} + nu t - 1)
        g += c / (nu * nu) * (std::exp(-nu * t) + nu * t - 1.0);
    };
    accumulate(lam * gamma * std::complex<double>(1.0 / std::tan(0.5 * beta * gamma), -1.0), gamma);
    for (int k = 1; k <= n_matsubara; ++k) {
        const double nuk = 2.0 * M_PI * k / beta;
        accumulate(4.0 * lam * gamma / beta * nuk / (nuk * nuk - gamma * gamma), nuk);
    }
    return g;
}

Vector exciton_weights(const SiteHamiltonian& h, const DrudeBath& bath) {
    bath.validate(h.size());
    const ExcitonBasis basis = exciton_basis(h);
    const int n = h.size();
    Matrix corr = bath.site_correlation.size() ? bath.site_correlation : Matrix::Identity(n, n);
    Vector kappa(n);
    for (int mu = 0; mu < n; ++mu) {
        const Vector w2 = basis.states.col(mu).cwiseAbs2();
        kappa(mu) = w2.dot(corr * w2);
    }
    return kappa;
}

LineshapeSet lineshape_matrix(const SiteHamiltonian& h, const DrudeBath& bath, const FrequencyGrid& grid) {
    bath.validate(h.size());
    if (grid.points < 2 || !(grid.max_wavenumber > grid.min_wavenumber))
        throw GridError("frequency grid must be increasing with at least two points");

    const int n = h.size();
    const ExcitonBasis basis = exciton_basis(h);
    const Vector kappa = exciton_weights(h, bath);
    const double d_omega = grid.spacing();

    // Sampling and coverage checks.
    if (d_omega > 2.0)
        throw GridError("frequency grid spacing exceeds 2 cm^-1, coarser than the narrowest feature");
    if (n >= 2) {
        const double splitting = basis.energies.maxCoeff() - basis.energies.minCoeff();
        if (splitting > 0.0 && d_omega > splitting / 4.0)
            throw GridError("fewer than 4 grid points per exciton splitting");
    }
    const double margin = 50.0;  // cm^-1 around each peak
    for (int mu = 0; mu < n; ++mu)
        if (basis.energies(mu) < grid.min_wavenumber + margin || basis.energies(mu) > grid.max_wavenumber - margin)
            throw GridError("an exciton peak lies within 50 cm^-1 of the grid edge");

    LineshapeSet out;
    out.grid = grid;
    out.exciton_energies = basis.energies;
    out.kappa = kappa;
    out.window_time.resize(n);
    out.value.assign(grid.points, Matrix::Zero(n, n));

    std::vector<std::complex<double>> g_base;  // shared cumulant samples
    std::vector<double> scalar(grid.points);

    for (int mu = 0; mu < n; ++mu) {
        // Integration horizon: where the kappa-weighted damping kills the
        // integrand, or the hard cap (then a Gaussian taper is applied).
        double horizon = kTimeCap;
        bool capped = true;
        for (double t = 256.0; t <= kTimeCap; t += 256.0) {
            if (kappa(mu) * bath_cumulant(bath, t).real() >= kDecayTarget) {
                horizon = t;
                capped = false;
                break;
            }
        }
        out.window_time[mu] = horizon;
        const size_t n_t = static_cast<size_t>(std::llround(horizon / kTimeStep)) + 1;
        if (g_base.size() < n_t) {
            const size_t old = g_base.size();
            g_base.resize(n_t);
            for (size_t i = old; i < n_t; ++i) g_base[i] = bath_cumulant(bath, i * kTimeStep);
        }

        // Node values h(t) = exp(-kappa g(t)) (tapered when capped).
        std::vector<std::complex<double>> node(n_t);
        for (size_t i = 0; i < n_t; ++i) {
            std::complex<double> v = std::exp(-kappa(mu) * g_base[i]);
            if (capped) {
                const double x = 4.0 * (i * kTimeStep) / horizon;
                v *= std::exp(-x * x);
            }
            node[i] = v;
        }

        const double omega_mu = units::to_angular_frequency(basis.energies(mu));
        for (int iw = 0; iw < grid.points; ++iw) {
            const double delta = units::to_angular_frequency(grid.at(iw)) - omega_mu;
            const double theta = delta * kTimeStep;
            const std::complex<double> rot = std::exp(I * theta);
            // S_all = sum_i node_i e^{i delta t_i}; head/tail variants give
            // the two interpolation-node sums of the Filon rule.
            std::complex<double> s_all = 0.0, phase = 1.0;
            for (size_t i = 0; i < n_t; ++i) {
                s_all += node[i] * phase;
                phase *= rot;
            }
            const std::complex<double> s_head = s_all - node[n_t - 1] * (phase / rot);
            const std::complex<double> s_tail = s_all - node[0];
            std::complex<double> w0, w1;
            filon_weights(theta, w0, w1);
            const std::complex<double> integral = kTimeStep * (w0 * s_head + w1 * s_tail / rot);
            scalar[iw] = 2.0 * integral.real();
        }

        const Matrix outer = basis.states.col(mu) * basis.states.col(mu).transpose();
        for (int iw = 0; iw < grid.points; ++iw) out.value[iw] += scalar[iw] * outer;

        // Unit-area check in angular frequency, trapezoid on the grid.
        double area = 0.0;
        for (int iw = 0; iw < grid.points; ++iw)
            area += scalar[iw] * ((iw == 0 || iw == grid.points - 1) ? 0.5 : 1.0);
        area *= units::to_angular_frequency(d_omega) / (2.0 * M_PI);
        if (std::abs(area - 1.0) > 0.02)
            throw GridError("lineshape normalization lost more than 2% on this grid");
    }
    return out;
}

}  // namespace icct
