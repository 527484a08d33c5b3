#include "geomds/metrics.hpp"

#include <random>
#include <string>

namespace geomds {

PairSample PairSample::generate(Index p, std::size_t count, std::uint64_t seed)
{
    if (p < 2) throw Error(ErrorKind::InvalidArgument, "pair sampling needs p >= 2");
    PairSample s;
    s.seed = seed;
    s.pairs.reserve(count);
    std::mt19937_64 rng(seed);
    const auto up = static_cast<std::uint64_t>(p);
    while (s.pairs.size() < count) {
        const auto i = static_cast<Index>(rng() % up);
        const auto j = static_cast<Index>(rng() % up);
        if (i != j) s.pairs.emplace_back(i, j);
    }
    return s;
}

double rms_relative_error(const Eigen::VectorXd& dhat, const Eigen::VectorXd& d)
{
    if (dhat.size() != d.size() || d.size() == 0) throw Error(ErrorKind::ShapeMismatch, "pair vectors differ in size");
    double acc = 0.0;
    for (Index t = 0; t < d.size(); ++t) {
        if (!(d[t] > 0.0)) throw Error(ErrorKind::ZeroDistancePair, "pair " + std::to_string(t) + " has zero true distance");
        const double eps = (dhat[t] - d[t]) / d[t];
        acc += eps * eps;
    }
    return std::sqrt(acc / static_cast<double>(d.size()));
}

double rms_relative_pair_error(const LowRankSquaredDistances& fac, const GeodesicBackend& backend,
                               const PairSample& pairs)
{
    const Eigen::VectorXd d = pair_distances(backend, pairs.pairs);
    for (Index t = 0; t < d.size(); ++t) {
        if (!(d[t] > 0.0)) throw Error(ErrorKind::ZeroDistancePair, "pair " + std::to_string(t) + " has zero true distance");
    }
    return rms_relative_error(query_pairs(fac, pairs.pairs), d);
}

std::vector<AnchorViolation> triangle_violation(const Eigen::MatrixXd& D, const std::vector<Index>& anchors)
{
    const Index p = D.rows();
    require_dense(p, "triangle_violation");
    if (D.cols() != p) throw Error(ErrorKind::ShapeMismatch, "distance matrix must be square");
    std::vector<AnchorViolation> out;
    out.reserve(anchors.size());
    for (Index a : anchors) {
        if (a < 0 || a >= p) throw Error(ErrorKind::IndexOutOfRange, "anchor " + std::to_string(a));
        const auto da = D.col(a);
        double total = 0.0;
        for (Index c = 0; c < p; ++c) {
            const auto dc = D.col(c);
            for (Index b = 0; b < c; ++b) {
                const double bound = da[b] + da[c];
                const double excess = dc[b] - bound;
                if (excess > kTriangleSlack * bound) total += excess;
            }
        }
        out.push_back({a, total});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const AnchorViolation& x, const AnchorViolation& y) { return x.violation > y.violation; });
    return out;
}

std::vector<AnchorViolation> triangle_violation(const LowRankSquaredDistances& fac, const std::vector<Index>& anchors)
{
    return triangle_violation(reconstruct_distances(fac), anchors);
}

} // namespace geomds
