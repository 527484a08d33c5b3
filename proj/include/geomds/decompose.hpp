#pragma once

#include "geomds/error.hpp"
#include "geomds/geodesics.hpp"
#include "geomds/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace geomds {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Method { FMDS, NMDS, CUR };

std::string_view to_string(Method m);
std::string_view to_string(Metric m);
Method parse_method(std::string_view s);
Metric parse_metric(std::string_view s);

/// The n x p 0/1 matrix B with B(k, indices[k]) = 1, kept as the index list.
class SelectionMatrix {
public:
    /// Throws IndexOutOfRange or InvalidArgument (duplicates, empty).
    SelectionMatrix(std::vector<Index> indices, Index num_points);

    const std::vector<Index>& indices() const noexcept { return indices_; }
    Index rows() const noexcept { return static_cast<Index>(indices_.size()); }
    Index cols() const noexcept { return p_; }

    /// B e: the entries of e at the selected vertices.
    template <typename Derived>
    Vector<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& e) const
    {
        Vector<typename Derived::Scalar> r(rows());
        for (Index k = 0; k < rows(); ++k) r[k] = e(indices_[k]);
        return r;
    }

private:
    std::vector<Index> indices_;
    Index p_;
};

/// Smooth interpolation operator M = (W A^{-1} W + mu B^T B)^{-1} mu B^T.
struct InterpolationMatrix {
    Eigen::MatrixXd M;
    std::vector<Index> indices;
    double mu = 0.0;
    /// Largest relative residual |K m_j - mu b_j| / |mu b_j| over the columns.
    double residual = 0.0;

    /// max |M[indices[k], j] - delta_kj|; tends to zero as mu grows.
    double constraint_deviation() const;
};

inline constexpr double kDefaultMu = 1e4;

/// Solves K M = mu B^T with a sparse LDL^T factorization (iterative
/// refinement, then conjugate gradients if the 1e-8 residual target is
/// missed). Throws SingularSystem or SolverFailure.
InterpolationMatrix compute_M(const LaplacianPair& lap, const SelectionMatrix& B, double mu = kDefaultMu);

/// Low-rank factor pair with E_hat = S T S^T. T is exactly symmetric.
template <typename Scalar>
struct LowRankFactors {
    Matrix<Scalar> S;
    Matrix<Scalar> T;
    Method method = Method::NMDS;
    Metric metric = Metric::SquaredGeodesic;
    std::vector<Index> indices;
    Index n1 = 0;
    double mu = 0.0;
    /// Set when fewer usable eigenvalues than requested were found (NMDS).
    bool rank_deficient = false;

    Index num_points() const noexcept { return S.rows(); }
    Index inner_dim() const noexcept { return S.cols(); }
    Index num_samples() const noexcept { return static_cast<Index>(indices.size()); }
};

using LowRankSquaredDistances = LowRankFactors<double>;

inline Index default_n1(Index n) { return (n + 1) / 2; }

namespace detail {

template <typename Scalar>
void symmetrize(Matrix<Scalar>& A)
{
    A = (Scalar(0.5) * (A + A.transpose())).eval();
}

} // namespace detail

/// FMDS factors: S = (M | R), T = 1/2 [[0, I], [I, 0]], so that
/// S T S^T = 1/2 (M R^T + R M^T).
inline LowRankSquaredDistances fmds_decompose(const InterpolationMatrix& M, const DistanceColumns& R)
{
    if (M.M.rows() != R.R.rows() || M.M.cols() != R.R.cols() || M.indices != R.indices) {
        throw Error(ErrorKind::ShapeMismatch, "interpolation matrix and distance columns disagree");
    }
    const Index p = R.R.rows(), n = R.R.cols();
    LowRankSquaredDistances f;
    f.S.resize(p, 2 * n);
    f.S << M.M, R.R;
    f.T = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    f.T.topRightCorner(n, n).diagonal().setConstant(0.5);
    f.T.bottomLeftCorner(n, n).diagonal().setConstant(0.5);
    f.method = Method::FMDS;
    f.metric = R.metric;
    f.indices = R.indices;
    f.n1 = n;
    f.mu = M.mu;
    return f;
}

/// Regularized Nystrom factors: S = R, T = V diag(1/lambda) V^T over the n1
/// largest-magnitude eigenpairs of the symmetrized sampled block R_s.
/// Eigenvalues with |lambda| <= 1e-12 max|lambda| are never inverted; when
/// that leaves fewer than n1 pairs the result is flagged rank_deficient.
inline LowRankSquaredDistances nmds_decompose(const DistanceColumns& R, Index n1)
{
    const Index n = R.num_samples();
    if (n1 < 1 || n1 > n) throw Error(ErrorKind::InvalidArgument, "n1 must satisfy 1 <= n1 <= n");

    Eigen::MatrixXd Rs = R.sampled_block();
    detail::symmetrize(Rs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Rs);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "eigendecomposition of R_s failed");
    const Eigen::VectorXd& lambda = eig.eigenvalues();

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(lambda[a]) > std::abs(lambda[b]); });
    const double cutoff = 1e-12 * std::abs(lambda[order[0]]);

    std::vector<Index> kept;
    for (Index t = 0; t < n1; ++t) {
        const double l = lambda[order[t]];
        if (std::abs(l) > cutoff && l != 0.0) kept.push_back(order[t]);
    }

    Eigen::MatrixXd Vk(n, static_cast<Index>(kept.size()));
    Eigen::VectorXd inv(static_cast<Index>(kept.size()));
    for (std::size_t t = 0; t < kept.size(); ++t) {
        Vk.col(static_cast<Index>(t)) = eig.eigenvectors().col(kept[t]);
        inv[static_cast<Index>(t)] = 1.0 / lambda[kept[t]];
    }

    LowRankSquaredDistances f;
    f.S = R.R;
    f.T = Vk * inv.asDiagonal() * Vk.transpose();
    detail::symmetrize(f.T);
    f.method = Method::NMDS;
    f.metric = R.metric;
    f.indices = R.indices;
    f.n1 = static_cast<Index>(kept.size());
    f.rank_deficient = f.n1 < n1;
    return f;
}

/// CUR factors from an explicit subset of sample columns:
/// C = R[:, subset], U = C_s^+ (least squares), E_hat = 1/2 (C U R^T + R U^T C^T)
/// exposed as S = (C | R), T = 1/2 [[0, U], [U^T, 0]].
/// Throws IllConditioned when cond(C_s) > 1e12.
inline LowRankSquaredDistances cur_decompose(const DistanceColumns& R, const std::vector<Index>& subset)
{
    const Index n = R.num_samples(), p = R.num_points();
    const Index n1 = static_cast<Index>(subset.size());
    if (n1 < 1 || n1 > n) throw Error(ErrorKind::InvalidArgument, "CUR subset size must be in [1, n]");
    std::vector<Index> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 || sorted.back() >= n) {
        throw Error(ErrorKind::InvalidArgument, "CUR subset must hold distinct column ids in [0, n)");
    }

    Eigen::MatrixXd C(p, n1);
    for (Index t = 0; t < n1; ++t) C.col(t) = R.R.col(subset[t]);
    Eigen::MatrixXd Cs(n, n1);
    for (Index k = 0; k < n; ++k) Cs.row(k) = C.row(R.indices[k]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Cs);
    const auto& sv = svd.singularValues();
    if (!(sv[n1 - 1] > 0.0) || sv[0] / sv[n1 - 1] > 1e12) {
        throw Error(ErrorKind::IllConditioned, "sampled block of C has condition number above 1e12");
    }
    const Eigen::MatrixXd U = Cs.householderQr().solve(Eigen::MatrixXd::Identity(n, n));

    LowRankSquaredDistances f;
    f.S.resize(p, n1 + n);
    f.S << C, R.R;
    f.T = Eigen::MatrixXd::Zero(n1 + n, n1 + n);
    f.T.topRightCorner(n1, n) = 0.5 * U;
    f.T.bottomLeftCorner(n, n1) = 0.5 * U.transpose();
    f.method = Method::CUR;
    f.metric = R.metric;
    f.indices = R.indices;
    f.n1 = n1;
    return f;
}

/// Row-wise evaluation of S T S^T for arbitrary (i, j) pairs at O(q) each.
/// Holds S T and S in row-major layout; safe for concurrent queries.
template <typename Scalar>
class PairQuery {
public:
    explicit PairQuery(const LowRankFactors<Scalar>& fac) : left_(fac.S * fac.T), right_(fac.S)
    {
        if (fac.metric != Metric::SquaredGeodesic) {
            throw Error(ErrorKind::InvalidArgument, "distance queries need squared-geodesic factors");
        }
    }

    Index num_points() const noexcept { return right_.rows(); }

    /// Reconstructed squared distance (unclamped).
    Scalar squared(Index i, Index j) const { return left_.row(i).dot(right_.row(j)); }

    /// sqrt(max(0, S_i T S_j^T)).
    Scalar distance(Index i, Index j) const
    {
        using std::sqrt;
        return sqrt(std::max(Scalar(0), squared(i, j)));
    }

    /// Distances in input order. Throws IndexOutOfRange before computing anything.
    Vector<Scalar> operator()(const std::vector<std::pair<Index, Index>>& pairs) const
    {
        const Index p = num_points();
        for (std::size_t t = 0; t < pairs.size(); ++t) {
            auto [i, j] = pairs[t];
            if (i < 0 || j < 0 || i >= p || j >= p) {
                throw Error(ErrorKind::IndexOutOfRange, "pair " + std::to_string(t) + " (" + std::to_string(i) + "," +
                                                            std::to_string(j) + ") out of range");
            }
        }
        Vector<Scalar> out(static_cast<Index>(pairs.size()));
        for (std::size_t t = 0; t < pairs.size(); ++t) out[static_cast<Index>(t)] = distance(pairs[t].first, pairs[t].second);
        return out;
    }

private:
    using RowMajor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor left_;
    RowMajor right_;
};

template <typename Scalar>
Vector<Scalar> query_pairs(const LowRankFactors<Scalar>& fac, const std::vector<std::pair<Index, Index>>& pairs)
{
    return PairQuery<Scalar>(fac)(pairs);
}

/// Dense S T S^T (evaluation only). Throws TooLarge above the dense cap.
template <typename Scalar>
Matrix<Scalar> reconstruct_dense(const LowRankFactors<Scalar>& fac)
{
    require_dense(fac.num_points(), "reconstruct_dense");
    const Matrix<Scalar> ST = fac.S * fac.T;
    Matrix<Scalar> E = ST * fac.S.transpose();
    detail::symmetrize(E);
    return E;
}

/// Dense distances sqrt(max(0, E_hat)).
template <typename Scalar>
Matrix<Scalar> reconstruct_distances(const LowRankFactors<Scalar>& fac)
{
    return reconstruct_dense(fac).cwiseMax(Scalar(0)).cwiseSqrt();
}

} // namespace geomds
