#include "icct/icc.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace icct {

namespace {

Matrix submatrix(const Matrix& h, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out(i, j) = h(rows[i], cols[j]);
    return out;
}

}  // namespace

IccDecomposition icc_decompose(const SiteHamiltonian& h, const ComplexPartition& part) {
    part.validate(h.size());
    const Matrix j = submatrix(h.h, part.donor, part.acceptor);
    Eigen::JacobiSVD<Matrix> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);

    IccDecomposition d;
    d.couplings = svd.singularValues();
    d.donor_states = svd.matrixU();
    d.acceptor_states = svd.matrixV();

    // Deterministic signs: each (u_l, v_l) pair may be flipped together.
    for (int l = 0; l < d.donor_states.cols(); ++l) {
        int arg = 0;
        double best = std::abs(d.donor_states(0, l));
        for (int r = 1; r < d.donor_states.rows(); ++r) {
            const double v = std::abs(d.donor_states(r, l));
            if (v > best) {
                best = v;
                arg = r;
            }
        }
        if (d.donor_states(arg, l) < 0.0) {
            d.donor_states.col(l) *= -1.0;
            d.acceptor_states.col(l) *= -1.0;
        }
    }
    return d;
}

IccBlockHamiltonian icc_block_hamiltonian(const SiteHamiltonian& h, const ComplexPartition& part) {
    part.validate(h.size());
    const IccDecomposition d = icc_decompose(h, part);
    const int nd = static_cast<int>(part.donor.size());
    const int na = static_cast<int>(part.acceptor.size());
    const int r = static_cast<int>(d.couplings.size());

    // Complete the channel vectors to orthonormal bases of the donor and
    // acceptor subspaces (the completions span the kernel/cokernel of J).
    auto complete = [](const Matrix& cols, int n) {
        Eigen::HouseholderQR<Matrix> qr(cols);
        Matrix q = qr.householderQ() * Matrix::Identity(n, n);
        // Q's leading columns span the same space as `cols` but may differ
        // by sign/rotation; splice the exact channel vectors back in. The
        // tail columns are orthogonal to that span, so the spliced matrix
        // stays orthogonal.
        q.leftCols(cols.cols()) = cols;
        return q;
    };
    const Matrix ud = complete(d.donor_states, nd);
    const Matrix ua = complete(d.acceptor_states, na);

    const Matrix hd = submatrix(h.h, part.donor, part.donor);
    const Matrix ha = submatrix(h.h, part.acceptor, part.acceptor);
    const Matrix j = submatrix(h.h, part.donor, part.acceptor);

    IccBlockHamiltonian out;
    out.n_donor = nd;
    out.n_channels = r;
    out.h = Matrix::Zero(nd + na, nd + na);
    out.h.topLeftCorner(nd, nd) = ud.transpose() * hd * ud;
    out.h.bottomRightCorner(na, na) = ua.transpose() * ha * ua;
    out.h.topRightCorner(nd, na) = ud.transpose() * j * ua;
    out.h.bottomLeftCorner(na, nd) = out.h.topRightCorner(nd, na).transpose();
    return out;
}

Vector site_weights(const Vector& state) {
    const double n2 = state.squaredNorm();
    if (n2 <= 0.0) throw Error("cannot compute site weights of a zero vector");
    return state.cwiseAbs2() / n2;
}

int coupling_rank(const IccDecomposition& d, double tol) {
    int r = 0;
    for (int i = 0; i < d.couplings.size(); ++i)
        if (d.couplings(i) > tol) ++r;
    return r;
}

}  // namespace icct
