#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace geomds;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct GridCase {
    TriMesh mesh;
    GeodesicBackend backend;
    MatrixXd E; // exact squared graph distances
};

const GridCase& grid_case()
{
    static const GridCase c = [] {
        TriMesh mesh = synthetic::grid_mesh(15, 14, 1.0 / 14);
        GeodesicBackend b(DijkstraGraph{mesh_to_graph(mesh)});
        MatrixXd D = all_pairs_distances(b);
        return GridCase{std::move(mesh), std::move(b), D.cwiseProduct(D)};
    }();
    return c;
}

DistanceColumns columns_of(const MatrixXd& E, const std::vector<Index>& idx)
{
    DistanceColumns r;
    r.indices = idx;
    r.R.resize(E.rows(), Index(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) r.R.col(Index(k)) = E.col(idx[k]);
    return r;
}

DistanceColumns grid_columns(Index n)
{
    return square_columns(farthest_point_sampling(grid_case().backend, n));
}

LowRankSquaredDistances grid_fmds(Index n, double mu = kDefaultMu)
{
    const DistanceColumns r = grid_columns(n);
    const SelectionMatrix B(r.indices, r.num_points());
    return fmds_decompose(compute_M(make_laplacian(grid_case().mesh), B, mu), r);
}

std::vector<Index> first_k(Index k)
{
    std::vector<Index> v(k);
    std::iota(v.begin(), v.end(), Index{0});
    return v;
}

double rel(const MatrixXd& A, const MatrixXd& B) { return (A - B).norm() / B.norm(); }

} // namespace

TEST_SUITE("decompose") {

TEST_CASE("method and metric names")
{
    CHECK(parse_method("fmds") == Method::FMDS);
    CHECK(parse_method("cur") == Method::CUR);
    CHECK(to_string(Method::NMDS) == "nmds");
    CHECK(parse_metric(to_string(Metric::Cosine)) == Metric::Cosine);
    CHECK_ERROR(parse_method("smds"), InvalidArgument);
    CHECK(default_n1(1) == 1);
    CHECK(default_n1(7) == 4);
    CHECK(default_n1(100) == 50);
}

TEST_CASE("selection matrix")
{
    const SelectionMatrix B({3, 0}, 5);
    CHECK(B.rows() == 2);
    CHECK(B.cols() == 5);
    CHECK(B.apply(VectorXd::LinSpaced(5, 10, 14)) == Eigen::Vector2d(13, 10));
    CHECK_ERROR(SelectionMatrix({0, 0}, 5), InvalidArgument);
    CHECK_ERROR(SelectionMatrix({5}, 5), IndexOutOfRange);
    CHECK_ERROR(SelectionMatrix({}, 5), InvalidArgument);
}

TEST_CASE("M tends to the identity when every vertex is sampled")
{
    const TriMesh m = synthetic::grid_mesh(10, 5);
    const SelectionMatrix B(first_k(50), 50);
    const InterpolationMatrix M = compute_M(make_laplacian(m), B, 1e10);
    CHECK((M.M - MatrixXd::Identity(50, 50)).cwiseAbs().rowwise().sum().maxCoeff() <= 1e-4);
    CHECK(M.residual <= 1e-8);
}

TEST_CASE("constant constraints are interpolated by a constant")
{
    const TriMesh m = synthetic::bumpy_torus(10, 12);
    const SelectionMatrix B({0, 17, 55, 80}, m.num_vertices());
    const InterpolationMatrix M = compute_M(make_laplacian(m), B, 1e8);
    const double c = 2.5;
    const VectorXd e = M.M * VectorXd::Constant(4, c);
    CHECK((e.array() - c).abs().maxCoeff() <= 1e-4 * c);
}

TEST_CASE("M reconstructs a paraboloid more closely with more samples")
{
    const TriMesh m = synthetic::grid_mesh(21, 21, 0.05);
    const Eigen::Vector3d center = m.vertices().row(10 * 21 + 10);
    const VectorXd z = (m.vertices().rowwise() - center.transpose()).rowwise().squaredNorm();
    const GeodesicBackend b(DijkstraGraph{mesh_to_graph(m)});
    const LaplacianPair lap = make_laplacian(m);
    std::vector<double> errs;
    for (Index n : {13, 40, 120}) {
        const SelectionMatrix B(farthest_point_sampling(b, n).indices, m.num_vertices());
        const InterpolationMatrix M = compute_M(lap, B, kDefaultMu);
        CHECK(M.residual <= 1e-8);
        errs.push_back((M.M * B.apply(z) - z).norm() / z.norm());
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[2] <= 0.05);
}

TEST_CASE("constraint deviation shrinks as mu grows")
{
    const auto& c = grid_case();
    const SelectionMatrix B({0, 40, 100, 209}, c.mesh.num_vertices());
    const LaplacianPair lap = make_laplacian(c.mesh);
    const double d2 = compute_M(lap, B, 1e2).constraint_deviation();
    const double d8 = compute_M(lap, B, 1e8).constraint_deviation();
    CHECK(d8 < d2);
    CHECK(d8 <= 1e-4);
}

TEST_CASE("compute_M argument checks")
{
    const TriMesh m = synthetic::grid_mesh(4, 4);
    CHECK_ERROR(compute_M(make_laplacian(m), SelectionMatrix({0}, 16), 0.0), InvalidArgument);
    CHECK_ERROR(compute_M(make_laplacian(m), SelectionMatrix({0}, 15), 1.0), ShapeMismatch);
}

TEST_CASE("FMDS with one sample expands to the symmetrized outer product")
{
    InterpolationMatrix M;
    M.M = oracle::random_matrix(6, 1, 1);
    M.indices = {2};
    M.mu = 1.0;
    DistanceColumns r;
    r.R = oracle::random_matrix(6, 1, 2);
    r.indices = {2};
    const MatrixXd E = reconstruct_dense(fmds_decompose(M, r));
    const MatrixXd expected = 0.5 * (M.M * r.R.transpose() + r.R * M.M.transpose());
    CHECK((E - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("FMDS factors on random data")
{
    InterpolationMatrix M;
    M.M = oracle::random_matrix(20, 3, 3);
    M.indices = {1, 5, 9};
    DistanceColumns r;
    r.R = oracle::random_matrix(20, 3, 4);
    r.indices = {1, 5, 9};
    const auto f = fmds_decompose(M, r);
    CHECK(f.S.cols() == 6);
    CHECK(f.T == f.T.transpose());
    const MatrixXd expected = 0.5 * (M.M * r.R.transpose() + r.R * M.M.transpose());
    CHECK(rel(reconstruct_dense(f), expected) <= 1e-12);
    CHECK(oracle::numerical_rank(reconstruct_dense(f), 1e-9) <= 6);

    r.indices = {1, 5, 8};
    CHECK_ERROR(fmds_decompose(M, r), ShapeMismatch);
    r.R = oracle::random_matrix(19, 3, 4);
    CHECK_ERROR(fmds_decompose(M, r), ShapeMismatch);
}

TEST_CASE("NMDS with n1 = n reproduces the sampled columns")
{
    const auto& c = grid_case();
    const DistanceColumns r = grid_columns(12);
    const auto f = nmds_decompose(r, 12);
    CHECK_FALSE(f.rank_deficient);
    CHECK(f.T == f.T.transpose());
    const MatrixXd E = reconstruct_dense(f);
    double worst = 0.0;
    for (Index k = 0; k < 12; ++k) {
        worst = std::max(worst, (E.col(r.indices[k]) - r.R.col(k)).cwiseAbs().maxCoeff() / r.R.col(k).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);

    const PairQuery<double> q(f);
    const double diameter = std::sqrt(c.E.maxCoeff());
    for (Index k = 0; k < 12; ++k) {
        CHECK(q.distance(r.indices[k], r.indices[k]) <= 1e-6 * diameter);
        for (Index i : {3, 77, 150}) {
            const double truth = std::sqrt(r.R(i, k));
            if (truth > 0) CHECK(std::abs(q.distance(i, r.indices[k]) - truth) <= 1e-6 * truth);
        }
    }
}

TEST_CASE("NMDS is exact on a rank-one matrix")
{
    VectorXd x(8);
    x << 1, -2, 0.5, 3, -1.5, 2, 0.25, -4;
    const MatrixXd E = x * x.transpose();
    for (Index s = 0; s < 8; ++s) {
        const auto f = nmds_decompose(columns_of(E, {s}), 1);
        CHECK((reconstruct_dense(f) - E).cwiseAbs().maxCoeff() <= 1e-12 * E.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("NMDS drops tiny eigenvalues and flags rank deficiency")
{
    VectorXd x(6);
    x << 1, 2, 3, 4, 5, 6;
    const MatrixXd E = x * x.transpose();
    const auto f = nmds_decompose(columns_of(E, {0, 3, 5}), 3);
    CHECK(f.rank_deficient);
    CHECK(f.n1 == 1);
    CHECK(f.T.allFinite());
    CHECK((reconstruct_dense(f) - E).cwiseAbs().maxCoeff() <= 1e-10 * E.maxCoeff());
    CHECK_ERROR(nmds_decompose(columns_of(E, {0, 3}), 3), InvalidArgument);
    CHECK_ERROR(nmds_decompose(columns_of(E, {0, 3}), 0), InvalidArgument);
}

TEST_CASE("NMDS symmetrizes an asymmetric sampled block")
{
    const auto& c = grid_case();
    DistanceColumns r = grid_columns(8);
    DistanceColumns noisy = r;
    noisy.R(r.indices[1], 4) *= 1.0 + 1e-12;
    const MatrixXd a = reconstruct_dense(nmds_decompose(r, 8));
    const MatrixXd b = reconstruct_dense(nmds_decompose(noisy, 8));
    CHECK(rel(b, a) <= 1e-6);
    CHECK(rel(a, c.E) < 1.0);
}

TEST_CASE("regularized NMDS beats the plain Nystrom choice on a desk mesh")
{
    const auto& c = grid_case();
    const DistanceColumns r = grid_columns(30);
    const double half = rel(reconstruct_dense(nmds_decompose(r, default_n1(30))), c.E);
    const double full = rel(reconstruct_dense(nmds_decompose(r, 30)), c.E);
    CHECK(half <= full);
}

TEST_CASE("CUR with every column equals NMDS with n1 = n")
{
    const DistanceColumns r = grid_columns(10);
    const MatrixXd cur = reconstruct_dense(cur_decompose(r, first_k(10)));
    const MatrixXd nmds = reconstruct_dense(nmds_decompose(r, 10));
    CHECK(rel(cur, nmds) <= 1e-10);
}

TEST_CASE("CUR with one column matches the dense product")
{
    const DistanceColumns r = grid_columns(6);
    const auto f = cur_decompose(r, {2});
    CHECK(f.S.cols() == 7);
    CHECK(f.T == f.T.transpose());
    const MatrixXd C = r.R.col(2);
    MatrixXd Cs(6, 1);
    for (Index k = 0; k < 6; ++k) Cs(k, 0) = C(r.indices[k], 0);
    const MatrixXd U = (Cs.transpose() * Cs).inverse() * Cs.transpose();
    const MatrixXd expected = 0.5 * (C * U * r.R.transpose() + r.R * U.transpose() * C.transpose());
    CHECK(rel(reconstruct_dense(f), expected) <= 1e-12);
}

TEST_CASE("CUR core is the least-squares pseudo-inverse")
{
    const DistanceColumns r = grid_columns(9);
    const std::vector<Index> subset{0, 3, 4, 7};
    const auto f = cur_decompose(r, subset);
    const MatrixXd U = 2.0 * f.T.topRightCorner(4, 9);
    MatrixXd Cs(9, 4);
    for (Index k = 0; k < 9; ++k) {
        for (Index t = 0; t < 4; ++t) Cs(k, t) = r.R(r.indices[k], subset[t]);
    }
    const MatrixXd I = MatrixXd::Identity(9, 9);
    const double best = (Cs * U - I).norm();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const MatrixXd P = 1e-3 * U.norm() * oracle::random_matrix(4, 9, seed);
        CHECK(best <= (Cs * (U + P) - I).norm());
    }
}

TEST_CASE("CUR rejects bad subsets and ill-conditioned columns")
{
    const DistanceColumns r = grid_columns(5);
    CHECK_ERROR(cur_decompose(r, {}), InvalidArgument);
    CHECK_ERROR(cur_decompose(r, {1, 1}), InvalidArgument);
    CHECK_ERROR(cur_decompose(r, {5}), InvalidArgument);
    DistanceColumns twin = r;
    twin.R.col(1) = twin.R.col(0);
    CHECK_ERROR(cur_decompose(twin, {0, 1}), IllConditioned);
}

TEST_CASE("reconstruction invariants on a desk mesh")
{
    const auto& c = grid_case();
    const Index n = 16;
    const DistanceColumns r = grid_columns(n);
    const std::vector<std::pair<const char*, LowRankSquaredDistances>> cases{
        {"fmds", grid_fmds(n)}, {"nmds", nmds_decompose(r, default_n1(n))}, {"cur", cur_decompose(r, first_k(default_n1(n)))}};

    // Column-space projection of E onto span(R).
    const MatrixXd proj = r.R * r.R.completeOrthogonalDecomposition().solve(c.E);
    const double proj_err = (proj - c.E).norm();

    for (const auto& [name, f] : cases) {
        CAPTURE(name);
        const MatrixXd E = reconstruct_dense(f);
        CHECK((E - E.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * E.cwiseAbs().maxCoeff());
        CHECK(E.diagonal().cwiseAbs().maxCoeff() <= 0.05 * E.cwiseAbs().maxCoeff());
        const double rank_cap = f.method == Method::NMDS ? double(f.n1) : double(2 * n);
        CHECK(oracle::numerical_rank(E, 1e-9) <= rank_cap);
        if (f.method != Method::FMDS) CHECK(proj_err <= (E - c.E).norm() + 1e-9);
    }
}

TEST_CASE("FMDS column error decreases with mu")
{
    const auto& c = grid_case();
    const double lo = rel(reconstruct_dense(grid_fmds(16, 1e2)), c.E);
    const double hi = rel(reconstruct_dense(grid_fmds(16, 1e8)), c.E);
    CHECK(hi <= lo);
}

TEST_CASE("queries follow input order and validate indices")
{
    const auto& c = grid_case();
    const auto f = nmds_decompose(grid_columns(20), 10);
    const MatrixXd D = reconstruct_distances(f);
    const std::vector<std::pair<Index, Index>> pairs{{5, 9}, {9, 5}, {0, 209}, {100, 100}};
    const VectorXd d = query_pairs(f, pairs);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        CHECK(d[Index(t)] == doctest::Approx(D(pairs[t].first, pairs[t].second)).epsilon(1e-10));
    }
    CHECK((d.array() >= 0.0).all());
    CHECK_ERROR(query_pairs(f, {{0, 1}, {0, 210}}), IndexOutOfRange);
    CHECK_ERROR(query_pairs(f, {{-1, 1}}), IndexOutOfRange);
    CHECK(c.E.rows() == 210);
}

TEST_CASE("negative reconstructed squares clamp to zero")
{
    LowRankSquaredDistances f;
    f.S = MatrixXd::Identity(2, 2);
    f.T = -MatrixXd::Identity(2, 2);
    CHECK(query_pairs(f, {{0, 0}, {0, 1}}) == Eigen::Vector2d(0, 0));
    CHECK(PairQuery<double>(f).squared(0, 0) == -1.0);
}

TEST_CASE("all-pairs queries on a small flat grid")
{
    const TriMesh m = synthetic::grid_mesh(10, 10, 0.1);
    const PointCloud cloud = synthetic::planar_points(m);
    const GeodesicBackend b(AnalyticPlane{cloud});
    const auto f = nmds_decompose(square_columns(farthest_point_sampling(b, 30)), 15);
    const MatrixXd D = oracle::euclidean(cloud.points());
    std::vector<std::pair<Index, Index>> pairs;
    for (Index i = 0; i < 100; ++i) {
        for (Index j = 0; j < 100; ++j) {
            if (i != j) pairs.emplace_back(i, j);
        }
    }
    const VectorXd d = query_pairs(f, pairs);
    double acc = 0.0;
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const double truth = D(pairs[t].first, pairs[t].second);
        acc += std::pow((d[Index(t)] - truth) / truth, 2);
    }
    CHECK(std::sqrt(acc / double(pairs.size())) <= 0.05);
}

TEST_CASE("cosine factors are not distance queries")
{
    LowRankSquaredDistances f;
    f.S = MatrixXd::Identity(2, 2);
    f.T = MatrixXd::Identity(2, 2);
    f.metric = Metric::Cosine;
    CHECK_ERROR(PairQuery<double>(f), InvalidArgument);
}

TEST_CASE("dense reconstruction respects the size cap")
{
    LowRankSquaredDistances f;
    f.S = MatrixXd::Zero(dense_cap() + 1, 1);
    f.T = MatrixXd::Zero(1, 1);
    CHECK_ERROR(reconstruct_dense(f), TooLarge);
}

TEST_CASE("factors work in single precision")
{
    const auto f = nmds_decompose(grid_columns(12), 6);
    LowRankFactors<float> g;
    g.S = f.S.cast<float>();
    g.T = f.T.cast<float>();
    const Eigen::MatrixXf E = reconstruct_dense(g);
    CHECK(rel(E.cast<double>(), reconstruct_dense(f)) <= 1e-4);
    CHECK(PairQuery<float>(g).distance(3, 3) >= 0.0f);
}

} // TEST_SUITE
