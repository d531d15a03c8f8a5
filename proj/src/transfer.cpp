#include "icct/transfer.hpp"

#include <cmath>

#include "icct/units.hpp"

namespace icct {

namespace {

void check_shared_grid(const LineshapeSet& a, const LineshapeSet& b) {
    if (a.grid.min_wavenumber != b.grid.min_wavenumber || a.grid.max_wavenumber != b.grid.max_wavenumber ||
        a.grid.points != b.grid.points)
        throw GridError("donor and acceptor lineshapes must share one frequency grid");
}

// Hermitian extension [[0, K], [K^T, 0]] and coupling block [[0, J], [J^T, 0]].
Matrix embed_block(const Matrix& block) {
    const int n = static_cast<int>(block.rows()), m = static_cast<int>(block.cols());
    Matrix full = Matrix::Zero(n + m, n + m);
    full.topRightCorner(n, m) = block;
    full.bottomLeftCorner(m, n) = block.transpose();
    return full;
}

}  // namespace

Matrix k_matrix(const LineshapeSet& donor, const LineshapeSet& acceptor, const Matrix& coupling) {
    check_shared_grid(donor, acceptor);
    const int n = donor.n_sites(), m = acceptor.n_sites();
    if (coupling.rows() != n || coupling.cols() != m)
        throw Error("coupling block shape does not match the lineshape dimensions");
    Matrix k = Matrix::Zero(n, m);
    const int points = donor.grid.points;
    for (int i = 0; i < points; ++i) {
        const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        k.noalias() += w * (donor.value[i] * coupling * acceptor.value[i]);
    }
    k *= units::to_angular_frequency(donor.grid.spacing()) / (4.0 * M_PI);
    return k;
}

std::complex<double>& TransferTensor::at(int a, int b, int c, int d) {
    return r[((static_cast<size_t>(a) * n_total + b) * n_total + c) * n_total + d];
}

const std::complex<double>& TransferTensor::at(int a, int b, int c, int d) const {
    return r[((static_cast<size_t>(a) * n_total + b) * n_total + c) * n_total + d];
}

ComplexMatrix TransferTensor::apply(const ComplexMatrix& sigma) const {
    if (sigma.rows() != n_total || sigma.cols() != n_total)
        throw Error("state dimension does not match the transfer tensor");
    ComplexMatrix out = ComplexMatrix::Zero(n_total, n_total);
    for (int a = 0; a < n_total; ++a)
        for (int b = 0; b < n_total; ++b) {
            std::complex<double> acc = 0.0;
            for (int c = 0; c < n_total; ++c)
                for (int d = 0; d < n_total; ++d) acc += at(a, b, c, d) * sigma(c, d);
            out(a, b) = acc;
        }
    return out;
}

TransferTensor transfer_tensor(const Matrix& k, const Matrix& coupling) {
    if (k.rows() != coupling.rows() || k.cols() != coupling.cols())
        throw Error("overlap kernel and coupling block must have matching shapes");
    const int n = static_cast<int>(k.rows()), m = static_cast<int>(k.cols());
    const int nt = n + m;
    const Matrix v = embed_block(coupling);
    const Matrix kx = embed_block(k);
    const double inv_h2 = 1.0 / (units::hbar * units::hbar);
    const Matrix vk = v * kx, kv = kx * v;

    TransferTensor t;
    t.n_donor = n;
    t.n_total = nt;
    t.r.assign(static_cast<size_t>(nt) * nt * nt * nt, 0.0);
    for (int a = 0; a < nt; ++a)
        for (int b = 0; b < nt; ++b)
            for (int c = 0; c < nt; ++c)
                for (int d = 0; d < nt; ++d) {
                    double val = v(a, c) * kx(d, b) + kx(a, c) * v(d, b);
                    if (d == b) val -= vk(a, c);
                    if (a == c) val -= kv(d, b);
                    t.at(a, b, c, d) = inv_h2 * val;
                }
    return t;
}

ComplexMatrix mcfret_rhs(const ComplexMatrix& sigma, const LineshapeSet& donor, const LineshapeSet& acceptor,
                         const Matrix& coupling) {
    const int nt = donor.n_sites() + acceptor.n_sites();
    if (sigma.rows() != nt || sigma.cols() != nt)
        throw Error("state must live on the combined donor+acceptor space");
    const ComplexMatrix v = embed_block(coupling).cast<std::complex<double>>();
    const ComplexMatrix kx = embed_block(k_matrix(donor, acceptor, coupling)).cast<std::complex<double>>();
    const ComplexMatrix inner = kx * sigma - sigma * kx;
    return -(v * inner - inner * v) / (units::hbar * units::hbar);
}

PropagationResult predict_acceptor_state(const std::vector<double>& rate_times,
                                         const std::vector<double>& rate_values,
                                         const PropagationResult& greens) {
    if (rate_times.size() != rate_values.size() || rate_times.empty())
        throw Error("rate series must be nonempty and consistent");
    if (greens.times.size() != rate_times.size())
        throw GridError("rate samples and relaxation trajectory must share one time grid");
    const size_t n_t = rate_times.size();
    const double dt = n_t > 1 ? rate_times[1] - rate_times[0] : 0.0;
    for (size_t i = 0; i < n_t; ++i) {
        if (std::abs(greens.times[i] - rate_times[i]) > 1e-9 * (1.0 + std::abs(rate_times[i])))
            throw GridError("rate samples and relaxation trajectory must share one time grid");
        if (i > 1 && std::abs((rate_times[i] - rate_times[i - 1]) - dt) > 1e-9 * dt)
            throw GridError("prediction requires a uniform time grid");
    }

    std::vector<double> rate = rate_values;
    for (double& r : rate) {
        if (r < -1e-12) throw InvalidRate("negative transfer-rate sample: " + std::to_string(r));
        if (r < 0.0) r = 0.0;
    }

    const int n = static_cast<int>(greens.states.front().rows());
    PropagationResult out;
    out.times = rate_times;
    out.dt_output = dt;
    out.states.reserve(n_t);
    for (size_t i = 0; i < n_t; ++i) {
        ComplexMatrix acc = ComplexMatrix::Zero(n, n);
        if (i > 0) {
            // trapezoid over [0, t_i] of r(t') G(t_i - t')
            acc += 0.5 * rate[0] * greens.states[i];
            for (size_t j = 1; j < i; ++j) acc += rate[j] * greens.states[i - j];
            acc += 0.5 * rate[i] * greens.states[0];
            acc *= dt;
        }
        out.states.push_back(std::move(acc));
    }

    for (size_t i = 0; i < n_t; ++i) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.states[i], Eigen::EigenvaluesOnly);
        const double scale = std::max(1e-30, out.states[i].cwiseAbs().maxCoeff());
        if (es.eigenvalues().minCoeff() < -1e-8 * scale) {
            out.warnings.push_back("predicted state is not positive semidefinite from t = " +
                                   std::to_string(rate_times[i]) + " fs");
            break;
        }
    }
    return out;
}

Proportionality predict_rate_proportionality(const std::vector<double>& signal,
                                             const std::vector<double>& reference) {
    if (signal.size() != reference.size() || signal.size() < 3)
        throw Error("proportionality needs two equal-length series with at least 3 samples");
    const size_t n = signal.size();
    double sp = 0.0, pp = 0.0, ss = 0.0, sum_s = 0.0, sum_p = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sp += signal[i] * reference[i];
        pp += reference[i] * reference[i];
        ss += signal[i] * signal[i];
        sum_s += signal[i];
        sum_p += reference[i];
    }
    Proportionality out;
    out.scale = pp > 0.0 ? sp / pp : 0.0;
    double res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = signal[i] - out.scale * reference[i];
        res += d * d;
    }
    out.rms_residual = ss > 0.0 ? std::sqrt(res / ss) : 0.0;
    const double mean_s = sum_s / n, mean_p = sum_p / n;
    double cov = 0.0, vs = 0.0, vp = 0.0;
    for (size_t i = 0; i < n; ++i) {
        cov += (signal[i] - mean_s) * (reference[i] - mean_p);
        vs += (signal[i] - mean_s) * (signal[i] - mean_s);
        vp += (reference[i] - mean_p) * (reference[i] - mean_p);
    }
    out.pearson = (vs > 0.0 && vp > 0.0) ? cov / std::sqrt(vs * vp) : 0.0;
    return out;
}

}  // namespace icct
