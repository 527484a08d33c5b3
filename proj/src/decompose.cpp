#include "geomds/decompose.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <set>

namespace geomds {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::FMDS: return "fmds";
    case Method::NMDS: return "nmds";
    case Method::CUR: return "cur";
    }
    return "unknown";
}

std::string_view to_string(Metric m)
{
    return m == Metric::SquaredGeodesic ? "squared-geodesic" : "cosine";
}

Method parse_method(std::string_view s)
{
    if (s == "fmds") return Method::FMDS;
    if (s == "nmds") return Method::NMDS;
    if (s == "cur") return Method::CUR;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

Metric parse_metric(std::string_view s)
{
    if (s == "squared-geodesic") return Metric::SquaredGeodesic;
    if (s == "cosine") return Metric::Cosine;
    throw Error(ErrorKind::InvalidArgument, "unknown metric '" + std::string(s) + "'");
}

SelectionMatrix::SelectionMatrix(std::vector<Index> indices, Index num_points)
    : indices_(std::move(indices)), p_(num_points)
{
    if (indices_.empty()) throw Error(ErrorKind::InvalidArgument, "selection needs at least one index");
    std::set<Index> seen;
    for (Index i : indices_) {
        if (i < 0 || i >= p_) throw Error(ErrorKind::IndexOutOfRange, "selected index " + std::to_string(i));
        if (!seen.insert(i).second) throw Error(ErrorKind::InvalidArgument, "duplicate selected index " + std::to_string(i));
    }
}

double InterpolationMatrix::constraint_deviation() const
{
    double dev = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        for (Index j = 0; j < M.cols(); ++j) {
            const double target = static_cast<Index>(k) == j ? 1.0 : 0.0;
            dev = std::max(dev, std::abs(M(indices[k], j) - target));
        }
    }
    return dev;
}

namespace {

constexpr double kResidualTarget = 1e-8;

double column_residual(const SparseMatrix& K, const Eigen::VectorXd& x, Index row, double mu)
{
    Eigen::VectorXd r = K * x;
    r[row] -= mu;
    return r.norm() / mu;
}

} // namespace

InterpolationMatrix compute_M(const LaplacianPair& lap, const SelectionMatrix& B, double mu)
{
    const Index p = lap.size(), n = B.rows();
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    if (B.cols() != p) throw Error(ErrorKind::ShapeMismatch, "selection matrix width differs from mesh size");

    SparseMatrix K = lap.energy_matrix();
    {
        std::vector<Eigen::Triplet<double>> pen;
        for (Index i : B.indices()) pen.emplace_back(i, i, mu);
        SparseMatrix P(p, p);
        P.setFromTriplets(pen.begin(), pen.end());
        K += P;
    }
    K.makeCompressed();

    Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "LDL^T factorization of K failed");
    if ((ldlt.vectorD().array() <= 0.0).any()) {
        throw Error(ErrorKind::SingularSystem, "K is not positive definite (disconnected mesh?)");
    }

    InterpolationMatrix out;
    out.M.resize(p, n);
    out.indices = B.indices();
    out.mu = mu;
    for (Index k = 0; k < n; ++k) {
        const Index row = B.indices()[k];
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
        rhs[row] = mu;
        Eigen::VectorXd x = ldlt.solve(rhs);
        double res = column_residual(K, x, row, mu);
        for (int it = 0; it < 3 && res > kResidualTarget; ++it) {
            x += ldlt.solve(rhs - K * x);
            res = column_residual(K, x, row, mu);
        }
        if (!(res <= kResidualTarget)) {
            Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg(K);
            cg.setTolerance(1e-2 * kResidualTarget);
            cg.setMaxIterations(10 * p);
            x = cg.solveWithGuess(rhs, x);
            res = column_residual(K, x, row, mu);
        }
        if (!x.allFinite()) throw Error(ErrorKind::SingularSystem, "non-finite interpolation column");
        if (!(res <= kResidualTarget)) {
            throw Error(ErrorKind::SolverFailure, "column " + std::to_string(k) + " residual " + std::to_string(res));
        }
        out.residual = std::max(out.residual, res);
        out.M.col(k) = x;
    }
    return out;
}

} // namespace geomds
