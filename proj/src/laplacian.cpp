#include "geomds/laplacian.hpp"

#include "geomds/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <string>
#include <vector>

namespace geomds {

namespace {

constexpr double kCotClamp = 1e4;

// Twice the face area; throws when the triangle is degenerate.
double doubled_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c, Index f)
{
    const Eigen::Vector3d u = b - a, v = c - a;
    const double cross = u.cross(v).norm();
    if (!(cross > 1e-14 * u.norm() * v.norm())) {
        throw Error(ErrorKind::ZeroAreaFace, "face " + std::to_string(f) + " has zero area");
    }
    return cross;
}

} // namespace

SparseMatrix LaplacianPair::energy_matrix() const
{
    const SparseMatrix scaled = mass.cwiseInverse().asDiagonal() * W;
    SparseMatrix K = SparseMatrix(W.transpose()) * scaled;
    return K;
}

SparseMatrix cotan_stiffness(const TriMesh& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    const Index p = mesh.num_vertices();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(F.rows()) * 6);
    for (Index f = 0; f < F.rows(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const Index i = F(f, c), j = F(f, (c + 1) % 3), k = F(f, (c + 2) % 3);
            const Eigen::Vector3d u = V.row(j) - V.row(i);
            const Eigen::Vector3d v = V.row(k) - V.row(i);
            const double cross = doubled_area(V.row(i), V.row(j), V.row(k), f);
            const double cot = std::clamp(u.dot(v) / cross, -kCotClamp, kCotClamp);
            trips.emplace_back(j, k, -0.5 * cot);
            trips.emplace_back(k, j, -0.5 * cot);
        }
    }
    SparseMatrix W(p, p);
    W.setFromTriplets(trips.begin(), trips.end());

    // Diagonal from the assembled off-diagonals so rows sum to zero.
    Eigen::VectorXd diag = -(W * Eigen::VectorXd::Ones(p));
    for (Index i = 0; i < p; ++i) trips.emplace_back(i, i, diag[i]);
    W.setFromTriplets(trips.begin(), trips.end());
    W.makeCompressed();
    return W;
}

Eigen::VectorXd barycentric_mass(const TriMesh& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (Index f = 0; f < F.rows(); ++f) {
        const double third = doubled_area(V.row(F(f, 0)), V.row(F(f, 1)), V.row(F(f, 2)), f) / 6.0;
        for (int c = 0; c < 3; ++c) mass[F(f, c)] += third;
    }
    for (Index i = 0; i < mass.size(); ++i) {
        if (!(mass[i] > 0.0)) throw Error(ErrorKind::IsolatedVertex, "vertex " + std::to_string(i) + " is in no face");
    }
    return mass;
}

LaplacianPair make_laplacian(const TriMesh& mesh) { return {cotan_stiffness(mesh), barycentric_mass(mesh)}; }

} // namespace geomds
