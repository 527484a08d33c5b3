#pragma once

#include "geomds/geometry.hpp"

#include <cstdint>

// Synthetic manifolds used by tests, the acceptance suite and fixture generation.
namespace geomds::synthetic {

/// nx x ny planar grid with spacing h in the z = 0 plane, each cell split
/// into two counter-clockwise triangles along the same diagonal.
TriMesh grid_mesh(int nx, int ny, double h = 1.0);

/// The (x, y) vertex coordinates of a mesh as a 2-D point cloud.
PointCloud planar_points(const TriMesh& mesh);

/// i.i.d. standard normal points in R^dim.
PointCloud gaussian_points(Index p, Index dim, std::uint64_t seed);

/// Uniform random points on the radius-r sphere in R^dim.
PointCloud sphere_points(Index p, Index dim, double r, std::uint64_t seed);

/// Uniform random points on the part of the radius-r 2-sphere with x >= 0 and y >= 0.
PointCloud quarter_sphere_points(Index p, double r, std::uint64_t seed);

/// p points equally spaced on the circle of radius r.
PointCloud circle_points(Index p, double r);

/// Closed torus (major radius 1) whose tube radius varies with both angles.
TriMesh bumpy_torus(int nu, int nv);

} // namespace geomds::synthetic
