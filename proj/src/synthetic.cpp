#include "geomds/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace geomds::synthetic {

TriMesh grid_mesh(int nx, int ny, double h)
{
    TriMesh::Vertices V(nx * ny, 3);
    auto id = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) V.row(id(i, j)) << i * h, j * h, 0.0;
    }
    TriMesh::Faces F(2 * (nx - 1) * (ny - 1), 3);
    int f = 0;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            F.row(f++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
            F.row(f++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
        }
    }
    return TriMesh(std::move(V), std::move(F));
}

PointCloud planar_points(const TriMesh& mesh) { return PointCloud(mesh.vertices().leftCols(2)); }

PointCloud gaussian_points(Index p, Index dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd X(p, dim);
    for (Index i = 0; i < p; ++i) {
        for (Index c = 0; c < dim; ++c) X(i, c) = normal(rng);
    }
    return PointCloud(std::move(X));
}

PointCloud sphere_points(Index p, Index dim, double r, std::uint64_t seed)
{
    Eigen::MatrixXd X = gaussian_points(p, dim, seed).points();
    X = r * X.rowwise().normalized();
    return PointCloud(std::move(X));
}

PointCloud quarter_sphere_points(Index p, double r, std::uint64_t seed)
{
    Eigen::MatrixXd X = sphere_points(p, 3, r, seed).points();
    X.leftCols(2) = X.leftCols(2).cwiseAbs();
    return PointCloud(std::move(X));
}

PointCloud circle_points(Index p, double r)
{
    Eigen::MatrixXd X(p, 2);
    for (Index i = 0; i < p; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(p);
        X.row(i) << r * std::cos(t), r * std::sin(t);
    }
    return PointCloud(std::move(X));
}

TriMesh bumpy_torus(int nu, int nv)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    TriMesh::Vertices V(nu * nv, 3);
    auto id = [nv](int i, int j) { return i * nv + j; };
    for (int i = 0; i < nu; ++i) {
        const double u = two_pi * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = two_pi * j / nv;
            const double tube = 0.35 * (1.0 + 0.25 * std::sin(3.0 * u) * std::cos(v) + 0.1 * std::cos(2.0 * u));
            const double ring = 1.0 + tube * std::cos(v);
            V.row(id(i, j)) << 1.3 * ring * std::cos(u), ring * std::sin(u), 0.8 * tube * std::sin(v);
        }
    }
    TriMesh::Faces F(2 * nu * nv, 3);
    int f = 0;
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const int a = id(i, j), b = id((i + 1) % nu, j), c = id((i + 1) % nu, (j + 1) % nv), d = id(i, (j + 1) % nv);
            F.row(f++) << a, b, c;
            F.row(f++) << a, c, d;
        }
    }
    return TriMesh(std::move(V), std::move(F));
}

} // namespace geomds::synthetic
