#include "icct/demo.hpp"

#include <cmath>

#include "icct/dimer.hpp"
#include "icct/rates.hpp"

namespace icct {

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

std::vector<double> channel_population(const PropagationResult& res, const Vector& state, int offset) {
    const int m = static_cast<int>(state.size());
    std::vector<double> p(res.states.size());
    const Eigen::VectorXcd v = state.cast<std::complex<double>>();
    for (size_t i = 0; i < res.states.size(); ++i)
        p[i] = (v.adjoint() * res.states[i].block(offset, offset, m, m) * v).value().real();
    return p;
}

}  // namespace

FmoDemoResult fmo_demo(const FmoDemoOptions& options) {
    const SiteHamiltonian h = fmo_hamiltonian();
    const ComplexPartition part{{0, 1}, {2, 3, 4, 5, 6}};

    FmoDemoResult out;
    out.icc = icc_decompose(h, part);
    // label channels by the pigment carrying most of the donor weight
    const int ch2 = std::abs(out.icc.donor_states(1, 0)) >= std::abs(out.icc.donor_states(1, 1)) ? 0 : 1;
    const int ch1 = 1 - ch2;

    const Hierarchy hier = build_hierarchy(h, options.bath, options.heom);
    const PropagationResult from1 = propagate(hier, DensityMatrix::site_state(7, 0), options.t_final);
    const PropagationResult from2 = propagate(hier, DensityMatrix::site_state(7, 1), options.t_final);

    out.times = from1.times;
    out.p_donor_ch2 = channel_population(from1, out.icc.donor_states.col(ch2), 0);
    out.p_acceptor_ch1 = channel_population(from1, out.icc.acceptor_states.col(ch1), 2);
    out.p_acceptor_ch2 = channel_population(from1, out.icc.acceptor_states.col(ch2), 2);
    out.gain_ch1 = smoothed_derivative(out.p_acceptor_ch1, from1.dt_output, options.smooth_window);
    out.gain_ch2 = smoothed_derivative(out.p_acceptor_ch2, from1.dt_output, options.smooth_window);
    out.corr_ch1 = pearson(out.p_donor_ch2, out.gain_ch1);
    out.corr_ch2 = pearson(out.p_donor_ch2, out.gain_ch2);
    double gp = 0, pp = 0;
    for (size_t i = 0; i < out.times.size(); ++i) {
        gp += out.gain_ch2[i] * out.p_donor_ch2[i];
        pp += out.p_donor_ch2[i] * out.p_donor_ch2[i];
    }
    out.scale_ch2 = pp > 0 ? gp / pp : 0.0;

    auto ratio_series = [](const PropagationResult& res) {
        const std::vector<double> p1 = res.population(0), p2 = res.population(1);
        std::vector<double> r(p1.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = p2[i] / (p1[i] + p2[i]);
        return r;
    };
    out.ratio_init1 = ratio_series(from1);
    out.ratio_init2 = ratio_series(from2);
    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    out.ratio_avg_init1 = mean(out.ratio_init1);
    out.ratio_avg_init2 = mean(out.ratio_init2);

    const DimerParams dp = dimer_from_sites(h.h(0, 0), h.h(1, 1), h.h(0, 1));
    out.thermal_ratio = p_thermal(dp.theta, dp.delta_e, options.bath.temperature);
    return out;
}

}  // namespace icct
