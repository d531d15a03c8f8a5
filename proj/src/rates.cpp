#include "icct/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace icct {

SiteHamiltonian ChainSpec::chain_hamiltonian(int n_dimers) const {
    if (n_dimers < 1) throw Error("chain needs at least one dimer");
    const int n = 2 * n_dimers;
    Matrix h = Matrix::Zero(n, n);
    for (int d = 0; d < n_dimers; ++d) {
        h(2 * d + 1, 2 * d + 1) = site_gap;
        h(2 * d, 2 * d + 1) = intra_coupling;
        h(2 * d + 1, 2 * d) = intra_coupling;
        if (d + 1 < n_dimers) {
            h(2 * d + 1, 2 * d + 2) = probe_coupling;
            h(2 * d + 2, 2 * d + 1) = probe_coupling;
        }
    }
    return SiteHamiltonian(std::move(h));
}

SiteHamiltonian ChainSpec::dimer() const {
    Matrix h(2, 2);
    h << 0.0, intra_coupling, intra_coupling, site_gap;
    return SiteHamiltonian(std::move(h));
}

std::vector<double> smoothed_derivative(const std::vector<double>& y, double dt, int window) {
    const int n = static_cast<int>(y.size());
    if (window < 5 || window % 2 == 0) throw Error("differentiation window must be odd and >= 5");
    if (n < window) throw GridTooShort("fewer samples than the differentiation window");
    if (!(dt > 0.0)) throw Error("sample spacing must be > 0");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int start = std::clamp(i - window / 2, 0, n - window);
        // quadratic least squares in the window, slope evaluated at sample i
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
        for (int j = 0; j < window; ++j) {
            const double x = start + j - i;
            const double x2 = x * x;
            s0 += 1.0;
            s1 += x;
            s2 += x2;
            s3 += x2 * x;
            s4 += x2 * x2;
            b0 += y[start + j];
            b1 += y[start + j] * x;
            b2 += y[start + j] * x2;
        }
        Eigen::Matrix3d m;
        m << s0, s1, s2, s1, s2, s3, s2, s3, s4;
        const Eigen::Vector3d a = m.ldlt().solve(Eigen::Vector3d(b0, b1, b2));
        out[i] = a(1) / dt;
    }
    return out;
}

namespace {

Matrix chain_bath_correlation(const Matrix& given, int n_sites) {
    if (given.size() == 0) return {};
    if (given.rows() == n_sites) return given;
    if (given.rows() == 2) {
        // per-dimer correlation tiled along the chain
        Matrix full = Matrix::Identity(n_sites, n_sites);
        for (int d = 0; d < n_sites / 2; ++d) full.block(2 * d, 2 * d, 2, 2) = given;
        return full;
    }
    throw InvalidBath("site correlation must be per-dimer (2x2) or match the full chain");
}

double trapezoid(const std::vector<double>& y, double dt) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < y.size(); ++i) s += 0.5 * (y[i] + y[i + 1]);
    return s * dt;
}

// Fills probabilities, conditional moments and tail parameters from the
// densities + hazards already on the grid. Shared by extraction and the
// file loader so the two paths agree exactly.
void finalize_table(RateTable& t, double stationarity_tol, double tail_cap) {
    const double dt = t.dt();
    const size_t n = t.times.size();
    for (int eps : {+1, -1}) {
        const int cp = channel_index(eps, +1), cm = channel_index(eps, -1);

        // survival mass left at the end of the grid
        std::vector<double> total(n);
        for (size_t i = 0; i < n; ++i) total[i] = t.hazard[cp][i] + t.hazard[cm][i];
        double integral = 0.0;
        for (size_t i = 0; i + 1 < n; ++i) integral += 0.5 * dt * (total[i] + total[i + 1]);
        const double s_end = std::exp(-integral);

        // constant-hazard extension fitted on the last fifth of the window
        const size_t lo = n - std::max<size_t>(2, n / 5);
        auto window_mean = [&](const std::vector<double>& h, size_t a, size_t b) {
            double s = 0.0;
            for (size_t i = a; i < b; ++i) s += h[i];
            return s / static_cast<double>(b - a);
        };
        const size_t mid = lo + (n - lo) / 2;
        const double m_first = window_mean(total, lo, mid), m_second = window_mean(total, mid, n);
        const double k_plus = window_mean(t.hazard[cp], lo, n);
        const double k_minus = window_mean(t.hazard[cm], lo, n);
        const double k_tot = k_plus + k_minus;
        const double scale = std::max(m_first, m_second);
        if (scale > 0.0 && std::abs(m_second - m_first) > stationarity_tol * scale)
            throw GridTooShort("transfer hazard still drifting at the end of the window; extend the simulation");
        if (s_end > 1e-3) {
            if (k_tot <= 0.0)
                throw GridTooShort("no decay of the survival probability within the window (nothing to extend)");
            if (t.times.back() + std::log(s_end / 1e-3) / k_tot > tail_cap)
                throw GridTooShort("99.9% of the jump mass is beyond the admissible tail extension");
        }
        t.tail_rate[eps > 0 ? 0 : 1] = k_tot;
        t.tail_survival[eps > 0 ? 0 : 1] = s_end;

        const double t_end = t.times.back();
        for (int delta : {+1, -1}) {
            const int c = channel_index(eps, delta);
            const double k_branch = delta > 0 ? k_plus : k_minus;
            std::vector<double> tf(n), ttf(n);
            for (size_t i = 0; i < n; ++i) {
                tf[i] = t.times[i] * t.density[c][i];
                ttf[i] = t.times[i] * tf[i];
            }
            double m0 = trapezoid(t.density[c], dt);
            double m1 = trapezoid(tf, dt);
            double m2 = trapezoid(ttf, dt);
            if (k_tot > 0.0) {
                const double mass = k_branch / k_tot * s_end;
                m0 += mass;
                m1 += mass * (t_end + 1.0 / k_tot);
                m2 += mass * (t_end * t_end + 2.0 * t_end / k_tot + 2.0 / (k_tot * k_tot));
            }
            t.probability[c] = m0;
            t.mean_time[c] = m0 > 0.0 ? m1 / m0 : 0.0;
            t.mean_time_sq[c] = m0 > 0.0 ? m2 / m0 : 0.0;
        }
    }
    t.validate();
}

}  // namespace

void RateTable::validate() const {
    if (times.size() < 8) throw Error("rate table too small");
    const double step = dt();
    if (!(step > 0.0)) throw Error("rate table grid must be increasing");
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - step) > 1e-9 * step) throw Error("rate table grid must be uniform");
    for (int c = 0; c < kChannels; ++c) {
        if (hazard[c].size() != times.size() || density[c].size() != times.size())
            throw Error("rate table columns must match the grid");
        for (double v : hazard[c])
            if (v < -1e-9) throw InvalidRate("negative hazard beyond the noise floor");
        for (double v : density[c])
            if (v < -1e-9) throw InvalidRate("negative jump density beyond the noise floor");
    }
    for (int eps : {+1, -1}) {
        const double sum = probability[channel_index(eps, +1)] + probability[channel_index(eps, -1)];
        if (sum < 0.99 || sum > 1.0 + 1e-6) throw Error("branch probabilities of one entry side must sum to one");
    }
}

RateTable extract_rates(const ChainSpec& chain, const DrudeBath& bath, const ExtractionOptions& options) {
    if (options.n_dimers < 3 || options.n_dimers % 2 == 0)
        throw Error("rate extraction needs an odd chain of at least 3 dimers");
    if (chain.probe_coupling == 0.0) throw Error("probe coupling must be nonzero");
    const int n_sites = 2 * options.n_dimers;
    const int center = options.n_dimers / 2;

    DrudeBath chain_bath = bath;
    chain_bath.site_correlation = chain_bath_correlation(bath.site_correlation, n_sites);
    const SiteHamiltonian h = chain.chain_hamiltonian(options.n_dimers);
    const Hierarchy hier = build_hierarchy(h, chain_bath, options.heom);

    const double rescale = (chain.coupling / chain.probe_coupling) * (chain.coupling / chain.probe_coupling);
    const std::vector<int> right_dimer{2 * center + 2, 2 * center + 3};
    const std::vector<int> left_dimer{2 * center - 2, 2 * center - 1};

    RateTable table;
    double worst_excursion = 0.0;
    for (int eps : {+1, -1}) {
        const int entry_site = eps > 0 ? 2 * center : 2 * center + 1;
        const PropagationResult res =
            propagate(hier, DensityMatrix::site_state(n_sites, entry_site), options.t_sim);
        if (table.times.empty()) table.times = res.times;

        for (int delta : {+1, -1}) {
            const std::vector<double> pop = res.population_sum(delta > 0 ? right_dimer : left_dimer);
            std::vector<double> rate = smoothed_derivative(pop, res.dt_output, options.smooth_window);
            for (double& r : rate) {
                r *= rescale;
                if (r < 0.0) {
                    worst_excursion = std::min(worst_excursion, r);
                    r = 0.0;  // sub-noise-floor backflow, clipped
                }
            }
            table.hazard[channel_index(eps, delta)] = std::move(rate);
        }

        // first-jump correction: density = hazard * survival
        const int cp = channel_index(eps, +1), cm = channel_index(eps, -1);
        const size_t n = table.times.size();
        const double dt = table.dt();
        std::vector<double> survival(n, 1.0);
        for (size_t i = 1; i < n; ++i) {
            const double htot0 = table.hazard[cp][i - 1] + table.hazard[cm][i - 1];
            const double htot1 = table.hazard[cp][i] + table.hazard[cm][i];
            survival[i] = survival[i - 1] * std::exp(-0.5 * dt * (htot0 + htot1));
        }
        for (int c : {cp, cm}) {
            table.density[c].resize(n);
            for (size_t i = 0; i < n; ++i) table.density[c][i] = table.hazard[c][i] * survival[i];
        }
    }

    table.parameters = {
        {"site_gap", chain.site_gap},
        {"intra_coupling", chain.intra_coupling},
        {"probe_coupling", chain.probe_coupling},
        {"coupling", chain.coupling},
        {"reorganization", bath.reorganization},
        {"correlation_time", bath.correlation_time},
        {"temperature", bath.temperature},
        {"site_correlation",
         bath.site_correlation.size() ? bath.site_correlation(0, std::min<int>(1, bath.site_correlation.cols() - 1))
                                      : 0.0},
        {"n_dimers", static_cast<double>(options.n_dimers)},
        {"depth", static_cast<double>(options.heom.depth)},
        {"matsubara", static_cast<double>(options.heom.matsubara)},
        {"dt", options.heom.dt},
        {"output_stride", static_cast<double>(options.heom.output_stride)},
        {"t_sim", options.t_sim},
        {"smooth_window", static_cast<double>(options.smooth_window)},
        {"clipped_excursion", worst_excursion},
    };
    finalize_table(table, options.stationarity_tol, options.tail_cap);
    return table;
}

AsymmetrySeries rate_asymmetry(const RateTable& table) {
    AsymmetrySeries out;
    out.times = table.times;
    double peak = 0.0;
    for (int c = 0; c < kChannels; ++c)
        for (double v : table.hazard[c]) peak = std::max(peak, v);
    const double floor = 1e-12 * peak;
    auto build = [&](int eps) {
        std::vector<double> a(table.times.size());
        const auto& hp = table.hazard[channel_index(eps, +1)];
        const auto& hm = table.hazard[channel_index(eps, -1)];
        for (size_t i = 0; i < a.size(); ++i) {
            const double denom = hp[i] + hm[i];
            a[i] = denom > floor ? (hp[i] - hm[i]) / denom : std::numeric_limits<double>::quiet_NaN();
        }
        return a;
    };
    out.from_left = build(+1);
    out.from_right = build(-1);
    return out;
}

void save_rate_table(const RateTable& table, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << "# jump-time table v1\n";
    for (const auto& [key, value] : table.parameters) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", value);
        f << "# " << key << " = " << buf << "\n";
    }
    f << "time_fs,f_pp,f_pm,f_mp,f_mm\n";
    char buf[256];
    for (size_t i = 0; i < table.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g", table.times[i], table.density[0][i],
                      table.density[1][i], table.density[2][i], table.density[3][i]);
        f << buf << "\n";
    }
}

RateTable load_rate_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    RateTable table;
    std::string line;
    bool header_done = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                key.erase(key.find_last_not_of(' ') + 1);
                table.parameters[key] = std::stod(line.substr(eq + 1));
            }
            continue;
        }
        if (!header_done) {  // column header
            header_done = true;
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 5) throw Error("malformed rate table row: " + line);
        table.times.push_back(row[0]);
        for (int c = 0; c < kChannels; ++c) table.density[c].push_back(row[c + 1]);
    }
    if (table.times.size() < 8) throw Error("rate table too small");

    // Rebuild hazards from the first-jump identity f = h * S.
    const double dt = table.dt();
    for (int eps : {+1, -1}) {
        const int cp = channel_index(eps, +1), cm = channel_index(eps, -1);
        const size_t n = table.times.size();
        double mass = 0.0;
        for (int c : {cp, cm}) table.hazard[c].assign(n, 0.0);
        double survival = 1.0;
        for (size_t i = 0; i < n; ++i) {
            if (i > 0)
                mass += 0.5 * dt *
                        (table.density[cp][i - 1] + table.density[cm][i - 1] + table.density[cp][i] +
                         table.density[cm][i]);
            survival = std::max(1e-12, 1.0 - mass);
            table.hazard[cp][i] = table.density[cp][i] / survival;
            table.hazard[cm][i] = table.density[cm][i] / survival;
        }
    }
    finalize_table(table, 1.0, 1e30);  // stored tables are accepted as-is
    return table;
}

}  // namespace icct
