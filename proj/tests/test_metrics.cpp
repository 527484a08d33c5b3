#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace geomds;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("metrics") {

TEST_CASE("relative Frobenius error")
{
    const MatrixXd D = oracle::random_matrix(7, 7, 1);
    CHECK(rel_frobenius_error(D, D) == 0.0);
    CHECK(rel_frobenius_error(MatrixXd::Zero(7, 7), D) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel_frobenius_error(1.1 * D, D) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_ERROR(rel_frobenius_error(D, MatrixXd::Zero(7, 7)), ZeroReference);
    CHECK_ERROR(rel_frobenius_error(D, MatrixXd::Ones(6, 7)), ShapeMismatch);
}

TEST_CASE("pair samples are seeded and valid")
{
    const auto a = PairSample::generate(50, 500, 9);
    const auto b = PairSample::generate(50, 500, 9);
    const auto c = PairSample::generate(50, 500, 10);
    CHECK(a.pairs == b.pairs);
    CHECK(a.pairs != c.pairs);
    CHECK(a.seed == 9);
    for (auto [i, j] : a.pairs) {
        CHECK(i != j);
        CHECK(i >= 0);
        CHECK(j < 50);
    }
    CHECK_ERROR(PairSample::generate(1, 3, 0), InvalidArgument);
}

TEST_CASE("pair samples follow raw mt19937_64 output")
{
    std::mt19937_64 rng(5);
    std::vector<std::pair<Index, Index>> expected;
    while (expected.size() < 20) {
        const Index i = Index(rng() % 13), j = Index(rng() % 13);
        if (i != j) expected.emplace_back(i, j);
    }
    CHECK(PairSample::generate(13, 20, 5).pairs == expected);
}

TEST_CASE("RMS relative error")
{
    CHECK(rms_relative_error(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2)) == 0.0);
    CHECK(rms_relative_error(VectorXd::Constant(1, 1.2), VectorXd::Constant(1, 1.0)) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(rms_relative_error(Eigen::Vector2d(1.1, 1.8), Eigen::Vector2d(1, 2)) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_ERROR(rms_relative_error(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)), ZeroDistancePair);
}

TEST_CASE("RMS pair error on a sphere matches a dense recomputation")
{
    const PointCloud cloud = synthetic::sphere_points(1000, 3, 1.0, 3);
    const GeodesicBackend b(AnalyticSphere{cloud, 1.0});
    const auto f = nmds_decompose(square_columns(farthest_point_sampling(b, 100)), 50);
    const auto pairs = PairSample::generate(1000, 2000, 17);
    const double value = rms_relative_pair_error(f, b, pairs);

    const MatrixXd Dhat = reconstruct_distances(f);
    const MatrixXd X = cloud.points();
    double acc = 0.0;
    for (auto [i, j] : pairs.pairs) {
        const double d = std::acos(std::clamp(X.row(i).dot(X.row(j)), -1.0, 1.0));
        acc += std::pow((Dhat(i, j) - d) / d, 2);
    }
    CHECK(value == doctest::Approx(std::sqrt(acc / 2000.0)).epsilon(1e-12));
}

TEST_CASE("RMS pair error is zero for exact factors")
{
    const MatrixXd X = oracle::random_matrix(30, 2, 4);
    const GeodesicBackend b(AnalyticPlane{PointCloud(X)});
    // Squared Euclidean distances in the plane have rank 4.
    const auto f = nmds_decompose(square_columns(farthest_point_sampling(b, 6)), 4);
    CHECK(rms_relative_pair_error(f, b, PairSample::generate(30, 200, 1)) <= 1e-6);
}

TEST_CASE("triangle violation")
{
    const MatrixXd X = oracle::random_matrix(40, 3, 2);
    for (const auto& v : triangle_violation(oracle::euclidean(X), {0, 5, 39})) CHECK(v.violation == 0.0);

    MatrixXd D{{0, 1, 1}, {1, 0, 3}, {1, 3, 0}};
    const auto v = triangle_violation(D, {0, 1});
    CHECK(v.size() == 2);
    CHECK(v[0].anchor == 0);
    CHECK(v[0].violation == 1.0);
    CHECK(v[1].violation == 0.0);
    CHECK(total_violation(v) == 1.0);
    CHECK_ERROR(triangle_violation(D, {3}), IndexOutOfRange);
}

TEST_CASE("triangle violation matches a brute-force sum")
{
    MatrixXd D = oracle::random_matrix(15, 15, 6).cwiseAbs();
    D = (D + D.transpose()).eval();
    D.diagonal().setZero();
    const std::vector<Index> anchors{2, 7, 11};
    const auto v = triangle_violation(D, anchors);
    std::vector<double> expected;
    for (Index a : anchors) {
        double s = 0.0;
        for (Index b = 0; b < 15; ++b) {
            for (Index c = b + 1; c < 15; ++c) s += std::max(0.0, D(b, c) - D(b, a) - D(c, a));
        }
        expected.push_back(s);
    }
    std::sort(expected.rbegin(), expected.rend());
    for (std::size_t t = 0; t < 3; ++t) CHECK(v[t].violation == doctest::Approx(expected[t]).epsilon(1e-12));
    CHECK(std::is_sorted(v.begin(), v.end(), [](auto& x, auto& y) { return x.violation > y.violation; }));
}

TEST_CASE("triangle violation from factors uses reconstructed distances")
{
    const GeodesicBackend b(DijkstraGraph{mesh_to_graph(synthetic::grid_mesh(9, 8))});
    const auto f = nmds_decompose(square_columns(farthest_point_sampling(b, 10)), 5);
    const auto from_fac = triangle_violation(f, {0, 30, 71});
    const auto from_dense = triangle_violation(reconstruct_distances(f), {0, 30, 71});
    for (std::size_t t = 0; t < 3; ++t) CHECK(from_fac[t].violation == doctest::Approx(from_dense[t].violation).epsilon(1e-12));
}

TEST_CASE("Procrustes alignment")
{
    const MatrixXd Zs = oracle::random_matrix(20, 3, 8);
    const MatrixXd Q = oracle::random_rotation(3, 9);
    const MatrixXd moved = (Zs * Q).rowwise() + Eigen::RowVector3d(1, -2, 5);
    CHECK(procrustes_error(moved, Zs) <= 1e-10);
    MatrixXd reflected = Zs;
    reflected.col(1) *= -1;
    CHECK(procrustes_error(reflected, Zs) <= 1e-10);

    const MatrixXd centered = Zs.rowwise() - Zs.colwise().mean();
    CHECK(procrustes_error(2.0 * centered, centered) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_ERROR(procrustes_error(Zs, MatrixXd::Zero(20, 3)), ZeroReference);
    CHECK_ERROR(procrustes_error(Zs, MatrixXd::Zero(19, 3)), ShapeMismatch);
}

TEST_CASE("accelerated and dense embeddings agree under Procrustes")
{
    const GeodesicBackend b(DijkstraGraph{mesh_to_graph(synthetic::bumpy_torus(12, 15))});
    const auto f = nmds_decompose(square_columns(farthest_point_sampling(b, 20)), 10);
    const auto fast = accelerated_mds(f, 3);
    const auto dense = classical_mds_dense(reconstruct_dense(f), 3);
    CHECK(procrustes_error(fast.Z, dense.Z) <= 1e-8);
}

TEST_CASE("best rank-n approximation")
{
    const MatrixXd A = oracle::random_matrix(12, 12, 3);
    const MatrixXd E = A + A.transpose();
    CHECK((best_rank_n(E, 12) - E).norm() <= 1e-10 * E.norm());

    const MatrixXd U = oracle::random_matrix(12, 2, 4);
    const MatrixXd E2 = U * Eigen::Vector2d(3, -2).asDiagonal() * U.transpose();
    CHECK((best_rank_n(E2, 2) - E2).norm() <= 1e-10 * E2.norm());
    CHECK(best_rank_n(E, 0).isZero(0.0));

    const double best = (best_rank_n(E, 3) - E).norm();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MatrixXd V = oracle::random_matrix(12, 3, 100 + seed);
        const MatrixXd L = oracle::random_matrix(3, 3, 200 + seed);
        const MatrixXd competitor = V * (L + L.transpose()) * V.transpose();
        CHECK(best <= (competitor - E).norm());
    }
    CHECK_ERROR(best_rank_n(E, 13), InvalidArgument);
}

} // TEST_SUITE
