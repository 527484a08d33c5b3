#pragma once

#include "geomds/geometry.hpp"

#include <Eigen/Core>

#include <utility>
#include <variant>
#include <vector>

namespace geomds {

/// Shortest paths on a weighted graph (binary-heap Dijkstra).
struct DijkstraGraph {
    WeightedGraph graph;
};

/// Euclidean distances between the points of a flat domain.
struct AnalyticPlane {
    PointCloud cloud;
};

/// Great-circle distances on the radius-r sphere centered at the origin.
struct AnalyticSphere {
    PointCloud cloud;
    double radius;
};

/// Source of exact single-source distance columns. New backends (fast
/// marching, exact polyhedral geodesics) slot in as further alternatives.
class GeodesicBackend {
public:
    using Variant = std::variant<DijkstraGraph, AnalyticPlane, AnalyticSphere>;

    GeodesicBackend(DijkstraGraph g);
    GeodesicBackend(AnalyticPlane plane);
    /// Throws InvalidArgument unless r > 0 and every point lies within 1e-9 r of the sphere.
    GeodesicBackend(AnalyticSphere sphere);

    Index size() const;
    const Variant& get() const noexcept { return backend_; }

private:
    Variant backend_;
};

enum class Metric { SquaredGeodesic, Cosine };

/// Farthest point samples and their unsquared distance columns.
/// Column k of F holds distances from indices[k].
struct SampleSet {
    std::vector<Index> indices;
    Eigen::MatrixXd F;
};

/// Columns of the p x p target matrix at the sample indices: squared
/// distances (R = F o F) or, for sphere embedding, cos(F / r).
struct DistanceColumns {
    Eigen::MatrixXd R;
    std::vector<Index> indices;
    Metric metric = Metric::SquaredGeodesic;

    Index num_points() const noexcept { return R.rows(); }
    Index num_samples() const noexcept { return R.cols(); }

    /// The n x n block R[indices, :].
    Eigen::MatrixXd sampled_block() const;
};

/// Distances from `source` to every vertex; entry `source` is exactly 0.
/// Throws Unreachable if some vertex cannot be reached.
Eigen::VectorXd dist_column(const GeodesicBackend& backend, Index source);

/// Greedy farthest point sampling starting from `first`. Each new sample
/// maximizes the distance to the current set, ties going to the lowest id.
SampleSet farthest_point_sampling(const GeodesicBackend& backend, Index n, Index first = 0);

DistanceColumns square_columns(const SampleSet& samples);

/// True distances for a list of pairs; sources are grouped so each distinct
/// first index costs one dist_column call.
Eigen::VectorXd pair_distances(const GeodesicBackend& backend, const std::vector<std::pair<Index, Index>>& pairs);

/// Dense p x p distance matrix (subject to the dense cap).
Eigen::MatrixXd all_pairs_distances(const GeodesicBackend& backend);

} // namespace geomds
