#include "geomds/geodesics.hpp"

#include "geomds/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <string>

namespace geomds {

namespace {

Eigen::VectorXd dijkstra(const WeightedGraph& g, Index source)
{
    const Index p = g.num_vertices();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(p, inf);
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue; // stale entry
        auto nb = g.neighbors(v);
        auto wt = g.weights(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const double nd = d + wt[k];
            if (nd < dist[nb[k]]) {
                dist[nb[k]] = nd;
                heap.emplace(nd, nb[k]);
            }
        }
    }
    for (Index i = 0; i < p; ++i) {
        if (dist[i] == inf) {
            throw Error(ErrorKind::Unreachable,
                        "vertex " + std::to_string(i) + " unreachable from " + std::to_string(source));
        }
    }
    return dist;
}

} // namespace

GeodesicBackend::GeodesicBackend(DijkstraGraph g) : backend_(std::move(g)) {}

GeodesicBackend::GeodesicBackend(AnalyticPlane plane) : backend_(std::move(plane)) {}

GeodesicBackend::GeodesicBackend(AnalyticSphere sphere) : backend_(std::move(sphere))
{
    const auto& s = std::get<AnalyticSphere>(backend_);
    if (!(s.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
    const Eigen::VectorXd norms = s.cloud.points().rowwise().norm();
    for (Index i = 0; i < norms.size(); ++i) {
        if (std::abs(norms[i] - s.radius) > 1e-9 * s.radius) {
            throw Error(ErrorKind::InvalidArgument, "point " + std::to_string(i) + " is off the sphere");
        }
    }
}

Index GeodesicBackend::size() const
{
    return std::visit(
        [](const auto& b) -> Index {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, DijkstraGraph>) return b.graph.num_vertices();
            else return b.cloud.size();
        },
        backend_);
}

Eigen::MatrixXd DistanceColumns::sampled_block() const
{
    const Index n = num_samples();
    Eigen::MatrixXd block(n, n);
    for (Index k = 0; k < n; ++k) block.row(k) = R.row(indices[k]);
    return block;
}

Eigen::VectorXd dist_column(const GeodesicBackend& backend, Index source)
{
    if (source < 0 || source >= backend.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "source " + std::to_string(source) + " out of range");
    }
    return std::visit(
        [source](const auto& b) -> Eigen::VectorXd {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, DijkstraGraph>) {
                return dijkstra(b.graph, source);
            } else if constexpr (std::is_same_v<B, AnalyticPlane>) {
                const auto& X = b.cloud.points();
                return (X.rowwise() - X.row(source)).rowwise().norm();
            } else {
                const auto& X = b.cloud.points();
                const double r2 = b.radius * b.radius;
                Eigen::VectorXd c = (X * X.row(source).transpose()) / r2;
                Eigen::VectorXd d = c.unaryExpr([&](double t) { return b.radius * std::acos(std::clamp(t, -1.0, 1.0)); });
                d[source] = 0.0;
                return d;
            }
        },
        backend.get());
}

SampleSet farthest_point_sampling(const GeodesicBackend& backend, Index n, Index first)
{
    const Index p = backend.size();
    if (n < 1 || n > p) throw Error(ErrorKind::InvalidArgument, "sample count must satisfy 1 <= n <= p");
    if (first < 0 || first >= p) throw Error(ErrorKind::IndexOutOfRange, "first sample out of range");

    SampleSet s;
    s.indices.reserve(n);
    s.F.resize(p, n);
    std::vector<char> chosen(p, 0);
    Eigen::VectorXd nearest = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());

    Index next = first;
    for (Index k = 0; k < n; ++k) {
        s.indices.push_back(next);
        chosen[next] = 1;
        s.F.col(k) = dist_column(backend, next);
        nearest = nearest.cwiseMin(s.F.col(k));
        if (k + 1 == n) break;
        // Strict comparison in ascending id order keeps the lowest id on ties.
        Index best = -1;
        double best_d = -1.0;
        for (Index j = 0; j < p; ++j) {
            if (!chosen[j] && nearest[j] > best_d) {
                best_d = nearest[j];
                best = j;
            }
        }
        next = best;
    }
    return s;
}

DistanceColumns square_columns(const SampleSet& samples)
{
    return {samples.F.cwiseProduct(samples.F), samples.indices, Metric::SquaredGeodesic};
}

Eigen::VectorXd pair_distances(const GeodesicBackend& backend, const std::vector<std::pair<Index, Index>>& pairs)
{
    const Index p = backend.size();
    std::map<Index, std::vector<std::size_t>> by_source;
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        auto [i, j] = pairs[t];
        if (i < 0 || j < 0 || i >= p || j >= p) throw Error(ErrorKind::IndexOutOfRange, "pair index out of range");
        by_source[i].push_back(t);
    }
    Eigen::VectorXd out(static_cast<Index>(pairs.size()));
    for (const auto& [src, slots] : by_source) {
        const Eigen::VectorXd col = dist_column(backend, src);
        for (std::size_t t : slots) out[static_cast<Index>(t)] = col[pairs[t].second];
    }
    return out;
}

Eigen::MatrixXd all_pairs_distances(const GeodesicBackend& backend)
{
    const Index p = backend.size();
    require_dense(p, "all_pairs_distances");
    Eigen::MatrixXd D(p, p);
    for (Index i = 0; i < p; ++i) D.col(i) = dist_column(backend, i);
    return D;
}

} // namespace geomds
