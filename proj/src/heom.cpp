#include "icct/heom.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "icct/units.hpp"

namespace icct {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

}  // namespace

size_t hierarchy_size(int n_modes, int matsubara, int depth) {
    const long long s = static_cast<long long>(n_modes) * (matsubara + 1);
    unsigned long long r = 1;
    for (long long i = 1; i <= depth; ++i) r = r * (s + i) / i;
    return static_cast<size_t>(r);
}

Hierarchy build_hierarchy(const SiteHamiltonian& h, const DrudeBath& bath, const HeomOptions& options) {
    const int n = h.size();
    bath.validate(n);
    if (options.depth < 0) throw Error("hierarchy depth must be >= 0");
    if (options.matsubara < 0) throw Error("Matsubara count must be >= 0");
    if (!(options.dt > 0.0)) throw Error("time step must be > 0");
    if (options.output_stride < 1) throw Error("output stride must be >= 1");

    Hierarchy hier;
    hier.n_sites = n;
    hier.options = options;
    hier.omega = (h.h / units::hbar).cast<std::complex<double>>();

    // Effective fluctuation modes from the site-correlation spectrum.
    if (bath.reorganization > 0.0) {
        if (bath.site_correlation.size() == 0) {
            hier.mode_couplings = Matrix::Identity(n, n);
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(bath.site_correlation);
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (es.eigenvalues()(i) > 1e-10) keep.push_back(i);
            hier.mode_couplings.resize(n, keep.size());
            for (size_t m = 0; m < keep.size(); ++m)
                hier.mode_couplings.col(m) = std::sqrt(es.eigenvalues()(keep[m])) * es.eigenvectors().col(keep[m]);
        }
    } else {
        hier.mode_couplings.resize(n, 0);
    }
    hier.n_modes = static_cast<int>(hier.mode_couplings.cols());
    hier.n_exp = options.matsubara + 1;

    // Correlation-function expansion, angular units.
    const double beta = units::thermal_time(bath.temperature);  // fs
    const double gamma = bath.cutoff_rate();                    // fs^-1
    const double lam = bath.reorganization / units::hbar;       // rad/fs
    hier.nu.resize(hier.n_exp);
    hier.c.resize(hier.n_exp);
    hier.nu[0] = gamma;
    hier.c[0] = lam * gamma * std::complex<double>(1.0 / std::tan(0.5 * beta * gamma), -1.0);
    for (int k = 1; k < hier.n_exp; ++k) {
        const double nuk = 2.0 * M_PI * k / beta;
        if (std::abs(nuk - gamma) < 1e-12 * gamma)
            throw InvalidBath("a Matsubara frequency coincides with the Drude cutoff; perturb the correlation time");
        hier.nu[k] = nuk;
        hier.c[k] = 4.0 * lam * gamma / beta * nuk / (nuk * nuk - gamma * gamma);
    }
    // Residual friction of the discarded exponentials.
    double delta = lam * 2.0 / (beta * gamma);
    for (int k = 0; k < hier.n_exp; ++k) delta -= hier.c[k].real() / hier.nu[k];
    hier.terminator_delta = options.terminator ? delta : 0.0;

    hier.friction = Matrix::Zero(n, n);
    for (int m = 0; m < hier.n_modes; ++m) {
        const Vector d = hier.mode_couplings.col(m);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double dd = d(a) - d(b);
                hier.friction(a, b) += hier.terminator_delta * dd * dd;
            }
    }

    // Enumerate the multi-indices (root first) and the ladder adjacency.
    hier.n_slots = hier.n_modes * hier.n_exp;
    const int n_slots = hier.n_slots;
    const int depth = options.depth;
    std::vector<uint8_t> current(n_slots, 0);
    std::map<std::vector<uint8_t>, int64_t> order;
    auto enumerate = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == n_slots) {
            const int64_t id = static_cast<int64_t>(order.size());
            order.emplace(current, id);
            hier.index.insert(hier.index.end(), current.begin(), current.end());
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[slot] = static_cast<uint8_t>(v);
            self(self, slot + 1, remaining - v);
        }
        current[slot] = 0;
    };
    enumerate(enumerate, 0, depth);
    hier.n_ados = order.size();

    hier.plus.assign(hier.n_ados * n_slots, -1);
    hier.minus.assign(hier.n_ados * n_slots, -1);
    hier.decay.assign(hier.n_ados, 0.0);
    // Root-first enumeration is required by the propagator's initial state.
    std::vector<uint8_t> probe(n_slots);
    for (size_t i = 0; i < hier.n_ados; ++i) {
        const uint8_t* idx = hier.index.data() + i * n_slots;
        int total = 0;
        for (int s = 0; s < n_slots; ++s) {
            total += idx[s];
            hier.decay[i] += idx[s] * hier.nu[s % hier.n_exp];
        }
        for (int s = 0; s < n_slots; ++s) {
            probe.assign(idx, idx + n_slots);
            if (total < depth) {
                probe[s] = idx[s] + 1;
                auto it = order.find(probe);
                if (it != order.end()) hier.plus[i * n_slots + s] = it->second;
                probe[s] = idx[s];
            }
            if (idx[s] > 0) {
                probe[s] = idx[s] - 1;
                auto it = order.find(probe);
                if (it != order.end()) hier.minus[i * n_slots + s] = it->second;
            }
        }
    }

    // Crude stiffness bound for the step-size warning.
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.h);
    const double omega_max =
        (es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff()) / units::hbar;
    double coupling_scale = 0.0;
    for (int k = 0; k < hier.n_exp; ++k) coupling_scale += std::sqrt((depth + 1.0) * std::abs(hier.c[k]));
    double max_decay = 0.0;
    for (double d : hier.decay) max_decay = std::max(max_decay, d);
    hier.stiffness = omega_max + max_decay + hier.friction.maxCoeff() + 2.0 * coupling_scale;
    return hier;
}

namespace {

using ArrayC = Eigen::ArrayXXcd;

// Structural coefficient tables for the scaled hierarchy.
struct Workspace {
    int n = 0, nn = 0, n_slots = 0, n_exp = 0;
    ComplexMatrix omega;
    ArrayC friction;
    std::vector<ArrayC> comm_diff;           // per mode: d_a - d_b
    std::vector<ArrayC> left_d, right_d;     // per mode: d_a resp. d_b broadcast
    std::vector<double> up;                  // n_ados x slots: sqrt((n_s+1)|c_k|)
    std::vector<std::complex<double>> down_l, down_r;  // sqrt(n_s)*c_k/sqrt|c_k|, conj coefficient

    explicit Workspace(const Hierarchy& h) {
        n = h.n_sites;
        nn = n * n;
        n_slots = h.n_slots;
        n_exp = h.n_exp;
        omega = h.omega;
        friction = h.friction.cast<std::complex<double>>().array();
        comm_diff.resize(h.n_modes);
        left_d.resize(h.n_modes);
        right_d.resize(h.n_modes);
        for (int m = 0; m < h.n_modes; ++m) {
            ArrayC cd(n, n), ld(n, n), rd(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double da = h.mode_couplings(a, m), db = h.mode_couplings(b, m);
                    cd(a, b) = da - db;
                    ld(a, b) = da;
                    rd(a, b) = db;
                }
            comm_diff[m] = cd;
            left_d[m] = ld;
            right_d[m] = rd;
        }
        up.resize(h.n_ados * n_slots);
        down_l.resize(h.n_ados * n_slots);
        down_r.resize(h.n_ados * n_slots);
        for (size_t i = 0; i < h.n_ados; ++i)
            for (int s = 0; s < n_slots; ++s) {
                const int k = s % n_exp;
                const double occ = h.index[i * n_slots + s];
                const double mag = std::abs(h.c[k]);
                up[i * n_slots + s] = std::sqrt((occ + 1.0) * mag);
                if (occ > 0.0 && mag > 0.0) {
                    const std::complex<double> unit = h.c[k] / mag;
                    down_l[i * n_slots + s] = std::sqrt(occ * mag) * unit;
                    down_r[i * n_slots + s] = std::sqrt(occ * mag) * std::conj(unit);
                }
            }
    }
};

void rhs(const Hierarchy& h, const Workspace& w, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const int n = w.n, nn = w.nn, n_slots = w.n_slots;
    ComplexMatrix prod(n, n);
    for (size_t i = 0; i < h.n_ados; ++i) {
        Eigen::Map<const ComplexMatrix> rho(y.data() + i * nn, n, n);
        Eigen::Map<ComplexMatrix> out(dy.data() + i * nn, n, n);
        prod.noalias() = w.omega * rho;
        prod.noalias() -= rho * w.omega;
        out = -I * prod;
        out.array() -= h.decay[i] * rho.array() + w.friction * rho.array();
        for (int s = 0; s < n_slots; ++s) {
            const int m = s / w.n_exp;
            const int64_t ip = h.plus[i * n_slots + s];
            if (ip >= 0) {
                Eigen::Map<const ComplexMatrix> rp(y.data() + ip * nn, n, n);
                out.array() -= (I * w.up[i * n_slots + s]) * w.comm_diff[m] * rp.array();
            }
            const int64_t im = h.minus[i * n_slots + s];
            if (im >= 0) {
                Eigen::Map<const ComplexMatrix> rm(y.data() + im * nn, n, n);
                out.array() -= I * (w.down_l[i * n_slots + s] * w.left_d[m] -
                                    w.down_r[i * n_slots + s] * w.right_d[m]) *
                               rm.array();
            }
        }
    }
}

void rk4_step(const Hierarchy& h, const Workspace& w, double dt, Eigen::VectorXcd& y, Eigen::VectorXcd& k1,
              Eigen::VectorXcd& k2, Eigen::VectorXcd& k3, Eigen::VectorXcd& k4, Eigen::VectorXcd& tmp) {
    rhs(h, w, y, k1);
    tmp = y + (0.5 * dt) * k1;
    rhs(h, w, tmp, k2);
    tmp = y + (0.5 * dt) * k2;
    rhs(h, w, tmp, k3);
    tmp = y + dt * k3;
    rhs(h, w, tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) with a standard step controller, used to cross one
// output interval when adaptive stepping is requested.
void dopri_interval(const Hierarchy& h, const Workspace& w, double t_len, double rel_tol, Eigen::VectorXcd& y) {
    static const double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static const double B5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
    static const double B4[7] = {5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    std::vector<Eigen::VectorXcd> k(7, Eigen::VectorXcd(y.size()));
    Eigen::VectorXcd tmp(y.size()), ynew(y.size());
    double t = 0.0;
    double hstep = std::min(h.options.dt, t_len);
    int iterations = 0;
    while (t < t_len - 1e-12) {
        if (++iterations > 200000) throw IntegrationFailure("adaptive stepper failed to cross an output interval");
        hstep = std::min(hstep, t_len - t);
        rhs(h, w, y, k[0]);
        for (int stage = 1; stage < 7; ++stage) {
            tmp = y;
            for (int j = 0; j < stage; ++j)
                if (A[stage][j] != 0.0) tmp += (hstep * A[stage][j]) * k[j];
            rhs(h, w, tmp, k[stage]);
        }
        ynew = y;
        for (int j = 0; j < 7; ++j)
            if (B5[j] != 0.0) ynew += (hstep * B5[j]) * k[j];
        double err = 0.0, scale = std::max(1e-12, std::max(y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff()));
        tmp.setZero();
        for (int j = 0; j < 7; ++j)
            if (B5[j] != B4[j]) tmp += (hstep * (B5[j] - B4[j])) * k[j];
        err = tmp.cwiseAbs().maxCoeff() / (rel_tol * scale);
        if (err <= 1.0 || hstep <= 1e-8) {
            t += hstep;
            y.swap(ynew);
        }
        const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        hstep *= factor;
    }
}

}  // namespace

PropagationResult propagate(const Hierarchy& hier, const DensityMatrix& initial, double t_final) {
    if (initial.size() != hier.n_sites) throw Error("initial state dimension does not match the Hamiltonian");
    if (!(t_final > 0.0)) throw Error("final time must be > 0");
    const HeomOptions& opt = hier.options;

    PropagationResult res;
    const long long n_steps = std::max<long long>(1, std::llround(t_final / opt.dt));
    const double dt = t_final / static_cast<double>(n_steps);
    if (std::abs(dt - opt.dt) > 1e-9 * opt.dt)
        res.warnings.push_back("time step adjusted to divide the propagation window evenly");
    if (dt * hier.stiffness > 2.5)
        res.warnings.push_back("time step exceeds the stability estimate for this hierarchy");

    const int n = hier.n_sites, nn = n * n;
    Workspace w(hier);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(hier.n_ados) * nn);
    Eigen::Map<ComplexMatrix>(y.data(), n, n) = initial.rho;

    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    if (!opt.adaptive) {
        k1.resize(y.size());
        k2.resize(y.size());
        k3.resize(y.size());
        k4.resize(y.size());
        tmp.resize(y.size());
    }

    res.dt_output = dt * opt.output_stride;
    res.times.reserve(n_steps / opt.output_stride + 2);
    res.states.reserve(n_steps / opt.output_stride + 2);
    auto record = [&](double t) {
        ComplexMatrix sigma = Eigen::Map<const ComplexMatrix>(y.data(), n, n);
        if (!sigma.allFinite()) throw IntegrationFailure("propagation diverged (non-finite state) at t = " + std::to_string(t) + " fs");
        res.times.push_back(t);
        res.states.push_back(std::move(sigma));
    };
    record(0.0);

    if (opt.adaptive) {
        const double interval = dt * opt.output_stride;
        const long long n_out = (n_steps + opt.output_stride - 1) / opt.output_stride;
        for (long long i = 0; i < n_out; ++i) {
            const double target = std::min(t_final, (i + 1) * interval);
            dopri_interval(hier, w, target - i * interval, opt.rel_tol, y);
            record(target);
        }
    } else {
        for (long long step = 1; step <= n_steps; ++step) {
            rk4_step(hier, w, dt, y, k1, k2, k3, k4, tmp);
            if (step % opt.output_stride == 0 || step == n_steps) record(step * dt);
        }
    }
    return res;
}

PropagationResult unitary_propagate(const SiteHamiltonian& h, const DensityMatrix& initial, double t_final,
                                    double dt_output) {
    if (initial.size() != h.size()) throw Error("initial state dimension does not match the Hamiltonian");
    if (!(t_final > 0.0) || !(dt_output > 0.0)) throw Error("times must be > 0");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.h);
    const Matrix u = es.eigenvectors();
    const Vector freq = es.eigenvalues() / units::hbar;
    const ComplexMatrix a = u.transpose() * initial.rho * u;

    PropagationResult res;
    res.dt_output = dt_output;
    const long long n_steps = std::max<long long>(1, std::llround(t_final / dt_output));
    const int n = h.size();
    for (long long i = 0; i <= n_steps; ++i) {
        const double t = std::min(t_final, i * dt_output);
        ComplexMatrix phased(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) phased(r, c) = a(r, c) * std::exp(-I * ((freq(r) - freq(c)) * t));
        res.times.push_back(t);
        res.states.push_back(u * phased * u.transpose());
    }
    return res;
}

std::vector<std::complex<double>> exciton_coherence(const PropagationResult& result, const SiteHamiltonian& h,
                                                    int a, int b) {
    const ExcitonBasis basis = exciton_basis(h);
    if (a < 0 || b < 0 || a >= h.size() || b >= h.size()) throw Error("exciton index out of range");
    const Eigen::VectorXcd va = basis.states.col(a).cast<std::complex<double>>();
    const Eigen::VectorXcd vb = basis.states.col(b).cast<std::complex<double>>();
    std::vector<std::complex<double>> series;
    series.reserve(result.states.size());
    for (const auto& sigma : result.states) series.push_back((va.adjoint() * sigma * vb).value());
    return series;
}

std::vector<double> PropagationResult::population(int site) const {
    std::vector<double> p;
    p.reserve(states.size());
    for (const auto& s : states) p.push_back(s(site, site).real());
    return p;
}

std::vector<double> PropagationResult::population_sum(const std::vector<int>& sites) const {
    std::vector<double> p(states.size(), 0.0);
    for (size_t i = 0; i < states.size(); ++i)
        for (int s : sites) p[i] += states[i](s, s).real();
    return p;
}

std::vector<double> PropagationResult::trace() const {
    std::vector<double> p;
    p.reserve(states.size());
    for (const auto& s : states) p.push_back(s.trace().real());
    return p;
}

}  // namespace icct
