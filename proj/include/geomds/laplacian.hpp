#pragma once

#include "geomds/geometry.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace geomds {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete Laplace-Beltrami operator as a stiffness/mass pair.
/// The pointwise Laplacian is L = A^{-1} W, so the bi-Laplacian energy
/// e^T L^T A L e equals e^T W A^{-1} W e.
struct LaplacianPair {
    SparseMatrix W;       ///< symmetric, rows sum to zero
    Eigen::VectorXd mass; ///< diagonal of A, strictly positive

    Index size() const noexcept { return W.rows(); }

    /// W^T A^{-1} W, the matrix of the smoothness energy.
    SparseMatrix energy_matrix() const;
};

/// Cotangent stiffness: W_ij = -1/2 sum of cot(opposite angles), W_ii = -sum_j W_ij.
/// Cotangents are clamped to [-1e4, 1e4]. Throws ZeroAreaFace.
SparseMatrix cotan_stiffness(const TriMesh& mesh);

/// Barycentric vertex areas: one third of the incident face areas.
/// Throws ZeroAreaFace or IsolatedVertex.
Eigen::VectorXd barycentric_mass(const TriMesh& mesh);

LaplacianPair make_laplacian(const TriMesh& mesh);

} // namespace geomds
