#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace geomds {

using Index = Eigen::Index;

enum class MeshFormat { OFF, OBJ };

/// Parses "off" / "obj" (case-insensitive); throws InvalidArgument otherwise.
MeshFormat parse_mesh_format(std::string_view name);

/// Triangle mesh with p >= 3 vertices and counter-clockwise faces.
/// Validated on construction and immutable afterwards.
class TriMesh {
public:
    using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3>;
    using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3>;

    TriMesh(Vertices vertices, Faces faces);

    const Vertices& vertices() const noexcept { return vertices_; }
    const Faces& faces() const noexcept { return faces_; }
    Index num_vertices() const noexcept { return vertices_.rows(); }
    Index num_faces() const noexcept { return faces_.rows(); }

private:
    Vertices vertices_;
    Faces faces_;
};

/// p points in R^k, one per row.
class PointCloud {
public:
    explicit PointCloud(Eigen::MatrixXd points);

    const Eigen::MatrixXd& points() const noexcept { return points_; }
    Index size() const noexcept { return points_.rows(); }
    Index dim() const noexcept { return points_.cols(); }

private:
    Eigen::MatrixXd points_;
};

struct Edge {
    Index i;
    Index j;
    double weight;
};

/// Undirected weighted graph in CSR form. Each undirected edge is stored
/// in both endpoint rows with the same weight; neighbors are sorted by id.
class WeightedGraph {
public:
    /// Builds the graph from undirected edges. Duplicate (i,j) entries are
    /// merged keeping the smallest weight. Throws InvalidArgument on
    /// self-loops, nonpositive weights or out-of-range endpoints.
    static WeightedGraph from_edges(Index num_vertices, std::span<const Edge> edges);

    Index num_vertices() const noexcept { return static_cast<Index>(offsets_.size()) - 1; }
    Index num_edges() const noexcept { return static_cast<Index>(targets_.size()) / 2; }

    std::span<const Index> neighbors(Index v) const
    {
        return {targets_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
    }
    std::span<const double> weights(Index v) const
    {
        return {weights_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
    }

    const std::vector<Index>& offsets() const noexcept { return offsets_; }
    const std::vector<Index>& targets() const noexcept { return targets_; }
    const std::vector<double>& edge_weights() const noexcept { return weights_; }

    /// Weight of edge (i,j), or a negative value if absent.
    double weight(Index i, Index j) const;

    bool is_connected() const;

private:
    std::vector<Index> offsets_{0};
    std::vector<Index> targets_;
    std::vector<double> weights_;
};

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
TriMesh load_mesh(const std::filesystem::path& path); // format from extension

TriMesh parse_off(std::string_view text);
TriMesh parse_obj(std::string_view text);

/// OFF text with 17 significant digits, enough to reproduce coordinates exactly.
std::string to_off(const TriMesh& mesh);
void save_off(const TriMesh& mesh, const std::filesystem::path& path);

/// Headerless CSV (comma or whitespace separated), one point per row.
PointCloud load_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud(std::string_view text);

/// Edge-length graph of the mesh: one edge per distinct undirected mesh edge.
WeightedGraph mesh_to_graph(const TriMesh& mesh);

/// Union-symmetrized w-nearest-neighbor graph with Euclidean weights.
/// Neighbor ties are broken by lower point id. Throws DisconnectedGraph
/// when the result is not connected.
WeightedGraph knn_graph(const PointCloud& cloud, int w);

} // namespace geomds
