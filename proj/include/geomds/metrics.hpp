#pragma once

#include "geomds/decompose.hpp"
#include "geomds/error.hpp"
#include "geomds/geodesics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace geomds {

/// ||Dhat - D||_F / ||D||_F. Throws ShapeMismatch or ZeroReference.
template <typename DA, typename DB>
typename DB::Scalar rel_frobenius_error(const Eigen::MatrixBase<DA>& Dhat, const Eigen::MatrixBase<DB>& D)
{
    if (Dhat.rows() != D.rows() || Dhat.cols() != D.cols()) throw Error(ErrorKind::ShapeMismatch, "operand shapes differ");
    const auto ref = D.norm();
    if (!(ref > 0)) throw Error(ErrorKind::ZeroReference, "reference matrix is zero");
    return (Dhat - D).norm() / ref;
}

/// Seeded random (i, j) pairs with i != j, reproducible across platforms
/// (raw mt19937_64 output reduced modulo p).
struct PairSample {
    std::vector<std::pair<Index, Index>> pairs;
    std::uint64_t seed = 0;

    static PairSample generate(Index p, std::size_t count, std::uint64_t seed);
};

/// sqrt(mean((dhat - d) / d)^2). Throws ZeroDistancePair when some d == 0.
double rms_relative_error(const Eigen::VectorXd& dhat, const Eigen::VectorXd& d);

/// RMS relative pair error of factor queries against backend distances.
double rms_relative_pair_error(const LowRankSquaredDistances& fac, const GeodesicBackend& backend,
                               const PairSample& pairs);

struct AnchorViolation {
    Index anchor;
    double violation;
};

/// Relative roundoff slack below which a triangle-inequality excess is
/// treated as zero (a few ulps of the right-hand side).
inline constexpr double kTriangleSlack = 8 * std::numeric_limits<double>::epsilon();

/// For each anchor a: sum over unordered pairs (b, c) of
/// max(0, D(b,c) - D(b,a) - D(c,a)), sorted by violation descending.
/// Excesses within kTriangleSlack of D(b,a) + D(c,a) count as zero.
std::vector<AnchorViolation> triangle_violation(const Eigen::MatrixXd& D, const std::vector<Index>& anchors);

/// Same on the reconstructed distances sqrt(max(0, S T S^T)).
std::vector<AnchorViolation> triangle_violation(const LowRankSquaredDistances& fac, const std::vector<Index>& anchors);

inline double total_violation(const std::vector<AnchorViolation>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0, [](double s, const AnchorViolation& a) { return s + a.violation; });
}

/// ||Z Q + 1 t^T - Z*||_F / ||Z*||_F minimized over orthogonal Q (reflections
/// allowed) and translation t. Scale is not removed.
template <typename DA, typename DB>
typename DB::Scalar procrustes_error(const Eigen::MatrixBase<DA>& Z, const Eigen::MatrixBase<DB>& Zstar)
{
    using Scalar = typename DB::Scalar;
    if (Z.rows() != Zstar.rows() || Z.cols() != Zstar.cols()) throw Error(ErrorKind::ShapeMismatch, "operand shapes differ");
    const Scalar ref = Zstar.norm();
    if (!(ref > Scalar(0))) throw Error(ErrorKind::ZeroReference, "reference embedding is zero");
    const Matrix<Scalar> A = Z.rowwise() - Z.colwise().mean();
    const Matrix<Scalar> B = Zstar.rowwise() - Zstar.colwise().mean();
    Eigen::JacobiSVD<Matrix<Scalar>> svd(A.transpose() * B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix<Scalar> Q = svd.matrixU() * svd.matrixV().transpose();
    return (A * Q - B).norm() / ref;
}

/// Best rank-n approximation of a symmetric matrix: the n largest-magnitude eigenpairs.
template <typename Derived>
Matrix<typename Derived::Scalar> best_rank_n(const Eigen::MatrixBase<Derived>& E, Index n)
{
    using Scalar = typename Derived::Scalar;
    const Index p = E.rows();
    require_dense(p, "best_rank_n");
    if (E.cols() != p) throw Error(ErrorKind::ShapeMismatch, "E must be square");
    if (n < 0 || n > p) throw Error(ErrorKind::InvalidArgument, "rank must satisfy 0 <= n <= p");
    Matrix<Scalar> sym = E;
    detail::symmetrize(sym);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sym);
    const auto& lambda = eig.eigenvalues();
    std::vector<Index> order(p);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(lambda[a]) > std::abs(lambda[b]); });
    Matrix<Scalar> V(p, n);
    Vector<Scalar> l(n);
    for (Index t = 0; t < n; ++t) {
        V.col(t) = eig.eigenvectors().col(order[t]);
        l[t] = lambda[order[t]];
    }
    Matrix<Scalar> out = V * l.asDiagonal() * V.transpose();
    detail::symmetrize(out);
    return out;
}

} // namespace geomds
