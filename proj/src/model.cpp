#include "icct/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace icct {

SiteHamiltonian::SiteHamiltonian(Matrix m, std::vector<std::string> names) : h(std::move(m)), labels(std::move(names)) {
    if (h.rows() != h.cols() || h.rows() == 0) throw Error("site Hamiltonian must be square and nonempty");
    if (!h.isApprox(h.transpose(), 1e-12)) throw Error("site Hamiltonian must be symmetric");
    if (labels.empty()) {
        labels.resize(h.rows());
        for (int i = 0; i < h.rows(); ++i) labels[i] = std::to_string(i + 1);
    }
    if (static_cast<int>(labels.size()) != h.rows()) throw Error("label count does not match Hamiltonian size");
}

void ComplexPartition::validate(int n_sites) const {
    if (donor.empty() || acceptor.empty()) throw InvalidPartition("donor and acceptor sets must be nonempty");
    std::set<int> d(donor.begin(), donor.end()), a(acceptor.begin(), acceptor.end());
    if (d.size() != donor.size() || a.size() != acceptor.size())
        throw InvalidPartition("repeated site index in partition");
    for (int i : donor)
        if (i < 0 || i >= n_sites) throw InvalidPartition("donor index out of range: " + std::to_string(i));
    for (int i : acceptor) {
        if (i < 0 || i >= n_sites) throw InvalidPartition("acceptor index out of range: " + std::to_string(i));
        if (d.count(i)) throw InvalidPartition("site " + std::to_string(i) + " is in both donor and acceptor sets");
    }
}

DrudeBath::DrudeBath(double lambda, double tau_c, double temp, Matrix corr)
    : reorganization(lambda), correlation_time(tau_c), temperature(temp), site_correlation(std::move(corr)) {}

void DrudeBath::validate(int n_sites) const {
    if (!(reorganization >= 0.0)) throw InvalidBath("reorganization energy must be >= 0");
    if (!(correlation_time > 0.0)) throw InvalidBath("bath correlation time must be > 0");
    if (!(temperature > 0.0)) throw InvalidBath("temperature must be > 0");
    if (site_correlation.size() == 0) return;
    if (site_correlation.rows() != site_correlation.cols()) throw InvalidBath("site correlation matrix must be square");
    if (n_sites >= 0 && site_correlation.rows() != n_sites)
        throw InvalidBath("site correlation matrix size does not match the Hamiltonian");
    if (!site_correlation.isApprox(site_correlation.transpose(), 1e-10))
        throw InvalidBath("site correlation matrix must be symmetric");
    for (int i = 0; i < site_correlation.rows(); ++i)
        if (std::abs(site_correlation(i, i) - 1.0) > 1e-10)
            throw InvalidBath("site correlation matrix must have unit diagonal");
    Eigen::SelfAdjointEigenSolver<Matrix> es(site_correlation, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw InvalidBath("site correlation matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : rho(std::move(m)) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) throw Error("density matrix must be square and nonempty");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw Error("density matrix must be Hermitian");
    const std::complex<double> tr = rho.trace();
    if (std::abs(tr.imag()) > 1e-10) throw Error("density matrix trace must be real");
    if (tr.real() < -1e-10 || tr.real() > 1.0 + 1e-9) throw Error("density matrix trace must lie in [0, 1]");
}

DensityMatrix DensityMatrix::site_state(int n_sites, int site) {
    if (site < 0 || site >= n_sites) throw Error("site index out of range");
    ComplexMatrix m = ComplexMatrix::Zero(n_sites, n_sites);
    m(site, site) = 1.0;
    return DensityMatrix(std::move(m));
}

namespace {

// Largest-magnitude component positive; ties toward the lowest index.
void fix_column_signs(Matrix& u) {
    for (int c = 0; c < u.cols(); ++c) {
        int arg = 0;
        double best = std::abs(u(0, c));
        for (int r = 1; r < u.rows(); ++r) {
            const double v = std::abs(u(r, c));
            if (v > best) {
                best = v;
                arg = r;
            }
        }
        if (u(arg, c) < 0.0) u.col(c) *= -1.0;
    }
}

}  // namespace

ExcitonBasis exciton_basis(const SiteHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.h);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    ExcitonBasis basis{es.eigenvalues(), es.eigenvectors()};
    fix_column_signs(basis.states);
    return basis;
}

namespace {

// Seven-site block plus the couplings of the eighth pigment; energies are
// relative to the lowest site energy of the fitted set.
constexpr double kFmo8[8][8] = {
    {200.0, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9, 37.5},
    {-87.7, 320.0, 30.8, 8.2, 0.7, 11.8, 4.3, 6.5},
    {5.5, 30.8, 0.0, -53.5, -2.2, -9.6, 6.0, 1.3},
    {-5.9, 8.2, -53.5, 110.0, -70.7, -17.0, -63.3, -1.8},
    {6.7, 0.7, -2.2, -70.7, 270.0, 81.1, -1.3, 4.3},
    {-13.7, 11.8, -9.6, -17.0, 81.1, 420.0, 39.7, -9.5},
    {-9.9, 4.3, 6.0, -63.3, -1.3, 39.7, 230.0, -11.3},
    {37.5, 6.5, 1.3, -1.8, 4.3, -9.5, -11.3, 0.0},
};

}  // namespace

SiteHamiltonian fmo_hamiltonian() {
    Matrix h(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) h(i, j) = kFmo8[i][j];
    return SiteHamiltonian(std::move(h));
}

SiteHamiltonian fmo_hamiltonian8(std::optional<double> site8_energy) {
    if (!site8_energy)
        throw MissingParameter(
            "the eighth pigment's site energy is not part of the fitted set; "
            "it must be supplied explicitly");
    Matrix h(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) h(i, j) = kFmo8[i][j];
    h(7, 7) = *site8_energy;
    return SiteHamiltonian(std::move(h));
}

SiteHamiltonian dimer_hamiltonian(double theta, double delta_e) {
    if (delta_e < 0.0) throw Error("dimer splitting must be >= 0");
    const double s = std::sin(theta), c = std::cos(theta);
    Matrix h(2, 2);
    h << delta_e * s * s, delta_e * s * c, delta_e * s * c, delta_e * c * c;
    return SiteHamiltonian(std::move(h));
}

DimerParams dimer_from_sites(double e1, double e2, double j) {
    DimerParams p;
    p.delta_e = std::hypot(e2 - e1, 2.0 * j);
    if (p.delta_e == 0.0) return p;  // degenerate uncoupled pair: theta conventionally 0
    double theta = 0.5 * std::atan2(2.0 * j, e2 - e1);
    // atan2 yields 2*theta in (-pi, pi]; fold the boundary into (-pi/2, pi/2].
    if (theta <= -0.5 * M_PI) theta += M_PI;
    p.theta = theta;
    return p;
}

}  // namespace icct
