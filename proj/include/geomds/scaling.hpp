#pragma once

#include "geomds/decompose.hpp"
#include "geomds/error.hpp"
#include "geomds/geodesics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace geomds {

/// Coordinates Z (p x m) with the retained eigenvalues, sorted descending.
/// Negative retained eigenvalues contribute zero columns and are counted.
template <typename Scalar>
struct Embedding {
    Matrix<Scalar> Z;
    Vector<Scalar> eigenvalues;
    Index clamped_count = 0;
};

/// Q R = (optionally centered) S, and the q x q core +/- c R T R^T whose
/// eigenpairs are those of the p x p matrix Q core Q^T.
template <typename Scalar>
struct SmallEigenProblem {
    Matrix<Scalar> Q;    ///< p x k, orthonormal columns, k = min(p, q)
    Matrix<Scalar> Rfac; ///< k x q, upper trapezoidal
    Matrix<Scalar> core; ///< k x k, symmetric
};

namespace detail {

// Flip each column so its largest-magnitude entry is positive.
template <typename Scalar>
void normalize_signs(Matrix<Scalar>& Z)
{
    for (Index c = 0; c < Z.cols(); ++c) {
        Index r = 0;
        Z.col(c).cwiseAbs().maxCoeff(&r);
        if (Z(r, c) < Scalar(0)) Z.col(c) = -Z.col(c);
    }
}

// Top-m algebraic eigenpairs of a symmetric matrix as the embedding
// basis * V * Lambda^{1/2} (basis = identity when null); clamps negative
// eigenvalues to zero.
template <typename Scalar>
Embedding<Scalar> embed_top(const Matrix<Scalar>& sym, const Matrix<Scalar>* basis, Index m)
{
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sym);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "symmetric eigendecomposition failed");
    Embedding<Scalar> out;
    out.eigenvalues = eig.eigenvalues().tail(m).reverse();
    Matrix<Scalar> V = eig.eigenvectors().rightCols(m).rowwise().reverse();
    Vector<Scalar> root(m);
    for (Index c = 0; c < m; ++c) {
        using std::sqrt;
        if (out.eigenvalues[c] < Scalar(0)) ++out.clamped_count;
        root[c] = sqrt(std::max(Scalar(0), out.eigenvalues[c]));
    }
    Matrix<Scalar> coeffs = V * root.asDiagonal();
    out.Z = basis ? Matrix<Scalar>(*basis * coeffs) : coeffs;
    normalize_signs(out.Z);
    return out;
}

template <typename Scalar>
Matrix<Scalar> double_center(const Matrix<Scalar>& E)
{
    const Vector<Scalar> row_mean = E.rowwise().mean();
    const Vector<Scalar> col_mean = E.colwise().mean().transpose();
    const Scalar grand = row_mean.mean();
    Matrix<Scalar> B(E.rows(), E.cols());
    for (Index j = 0; j < E.cols(); ++j) {
        for (Index i = 0; i < E.rows(); ++i) {
            B(i, j) = Scalar(-0.5) * (E(i, j) - row_mean[i] - col_mean[j] + grand);
        }
    }
    symmetrize(B);
    return B;
}

} // namespace detail

/// S with each column's mean subtracted (J S without forming J).
template <typename Derived>
Matrix<typename Derived::Scalar> center_columns(const Eigen::MatrixBase<Derived>& S)
{
    return S.rowwise() - S.colwise().mean();
}

/// Thin QR of S (centered first if `center`) and the core sign * R T R^T.
template <typename Scalar>
SmallEigenProblem<Scalar> small_eigen_problem(const Matrix<Scalar>& S, const Matrix<Scalar>& T, bool center, Scalar sign)
{
    if (S.cols() != T.rows() || T.rows() != T.cols()) throw Error(ErrorKind::ShapeMismatch, "S and T sizes disagree");
    const Index p = S.rows(), q = S.cols(), k = std::min(p, q);
    Eigen::HouseholderQR<Matrix<Scalar>> qr(center ? center_columns(S) : S);
    SmallEigenProblem<Scalar> sp;
    sp.Q = qr.householderQ() * Matrix<Scalar>::Identity(p, k);
    sp.Rfac = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    sp.core = sign * (sp.Rfac * T * sp.Rfac.transpose());
    detail::symmetrize(sp.core);
    return sp;
}

/// Classical scaling on a dense squared-distance matrix: top-m eigenpairs of -1/2 J E J.
/// Throws TooLarge, NonSymmetric, InvalidArgument (m out of range).
template <typename Derived>
Embedding<typename Derived::Scalar> classical_mds_dense(const Eigen::MatrixBase<Derived>& E, Index m)
{
    using Scalar = typename Derived::Scalar;
    const Index p = E.rows();
    require_dense(p, "classical_mds_dense");
    if (E.cols() != p) throw Error(ErrorKind::ShapeMismatch, "E must be square");
    if (m < 1 || m > p) throw Error(ErrorKind::InvalidArgument, "target dimension must satisfy 1 <= m <= p");
    const Scalar scale = std::max(E.cwiseAbs().maxCoeff(), Scalar(1e-300));
    if ((E - E.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9) * scale) {
        throw Error(ErrorKind::NonSymmetric, "squared-distance matrix is not symmetric");
    }
    const Matrix<Scalar> B = detail::double_center<Scalar>(E);
    return detail::embed_top<Scalar>(B, nullptr, m);
}

/// Classical scaling from factors without forming E_hat: thin QR of J S,
/// eigenpairs of -1/2 R T R^T, Z = Q V Lambda^{1/2}.
template <typename Scalar>
Embedding<Scalar> accelerated_mds(const LowRankFactors<Scalar>& fac, Index m)
{
    if (fac.metric != Metric::SquaredGeodesic) {
        throw Error(ErrorKind::InvalidArgument, "flat embedding needs squared-geodesic factors");
    }
    const Index k = std::min(fac.S.rows(), fac.S.cols());
    if (m < 1 || m > k) {
        throw Error(ErrorKind::ShapeMismatch, "target dimension " + std::to_string(m) + " exceeds factor size " +
                                                  std::to_string(k));
    }
    const auto sp = small_eigen_problem<Scalar>(fac.S, fac.T, true, Scalar(-0.5));
    return detail::embed_top<Scalar>(sp.core, &sp.Q, m);
}

/// cos(F / r) columns for sphere embedding. Entries at the samples are exactly 1.
DistanceColumns cos_transform(const SampleSet& samples, double r);

/// Radius mapping the largest observed distance to an antipodal arc: max(F) / pi.
inline double default_sphere_radius(const Eigen::MatrixXd& F) { return F.maxCoeff() / std::numbers::pi; }

/// Embedding on the radius-r k-sphere in R^{k+1} from cosine factors:
/// thin QR of S (no centering), top k+1 eigenpairs of +R T R^T, rows
/// optionally scaled to unit norm, output Z = r Z_r.
/// Throws DegenerateEmbedding with fewer than k+1 positive eigenvalues
/// (values within 1000 eps of the largest count as zero).
template <typename Scalar>
Embedding<Scalar> sphere_embed(const LowRankFactors<Scalar>& fac, Index k, Scalar r, bool normalize)
{
    if (fac.metric != Metric::Cosine) throw Error(ErrorKind::InvalidArgument, "sphere embedding needs cosine factors");
    if (!(r > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
    const Index inner = std::min(fac.S.rows(), fac.S.cols());
    if (k < 0 || k + 1 > inner) throw Error(ErrorKind::ShapeMismatch, "sphere dimension exceeds factor size");

    const auto sp = small_eigen_problem<Scalar>(fac.S, fac.T, false, Scalar(1));
    Embedding<Scalar> out = detail::embed_top<Scalar>(sp.core, &sp.Q, k + 1);
    using std::abs;
    const Scalar floor = Scalar(1000) * std::numeric_limits<Scalar>::epsilon() * abs(out.eigenvalues[0]);
    if (out.clamped_count > 0 || out.eigenvalues[k] <= floor) {
        throw Error(ErrorKind::DegenerateEmbedding, "fewer than k+1 positive eigenvalues");
    }
    if (normalize) {
        for (Index i = 0; i < out.Z.rows(); ++i) {
            const Scalar nrm = out.Z.row(i).norm();
            if (!(nrm > Scalar(0))) throw Error(ErrorKind::DegenerateEmbedding, "zero row cannot be normalized");
            out.Z.row(i) /= nrm;
        }
    }
    out.Z *= r;
    return out;
}

/// ||Z Z^T + 1/2 J E J||_F.
template <typename DerivedZ, typename DerivedE>
typename DerivedE::Scalar stress(const Eigen::MatrixBase<DerivedZ>& Z, const Eigen::MatrixBase<DerivedE>& E)
{
    using Scalar = typename DerivedE::Scalar;
    require_dense(E.rows(), "stress");
    if (E.rows() != E.cols() || Z.rows() != E.rows()) throw Error(ErrorKind::ShapeMismatch, "stress operand sizes");
    const Matrix<Scalar> B = detail::double_center<Scalar>(E);
    return (Z * Z.transpose() - B).norm();
}

/// The (100 / p^2) scaling used when reporting stress.
inline double display_stress(double s, Index p) { return 100.0 * s / (double(p) * double(p)); }

/// ||Z_r Z_r^T - cos(D / r)||_F with Z_r = Z / r: the sphere analog of stress.
template <typename DerivedZ, typename DerivedD>
typename DerivedD::Scalar sphere_stress(const Eigen::MatrixBase<DerivedZ>& Z, const Eigen::MatrixBase<DerivedD>& D,
                                        typename DerivedD::Scalar r)
{
    using Scalar = typename DerivedD::Scalar;
    require_dense(D.rows(), "sphere_stress");
    if (D.rows() != D.cols() || Z.rows() != D.rows()) throw Error(ErrorKind::ShapeMismatch, "stress operand sizes");
    const Matrix<Scalar> Zr = Z / r;
    const Matrix<Scalar> C = (D.array() / r).cos().matrix();
    return (Zr * Zr.transpose() - C).norm();
}

} // namespace geomds
