#include "geomds/geometry.hpp"

#include "geomds/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

namespace geomds {

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> tokenize(std::string_view line, bool commas = false)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    auto is_sep = [&](char c) { return c == ' ' || c == '\t' || (commas && c == ','); };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_sep(line[j])) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::string_view strip_comment(std::string_view line)
{
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
    return line;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg)
{
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + msg);
}

double to_double(std::string_view tok, std::size_t line_no)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        parse_fail(line_no, "bad number '" + std::string(tok) + "'");
    }
    return v;
}

long long to_integer(std::string_view tok, std::size_t line_no)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        parse_fail(line_no, "bad integer '" + std::string(tok) + "'");
    }
    return v;
}

} // namespace

MeshFormat parse_mesh_format(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "off") return MeshFormat::OFF;
    if (lower == "obj") return MeshFormat::OBJ;
    throw Error(ErrorKind::InvalidArgument, "unknown mesh format '" + std::string(name) + "'");
}

TriMesh::TriMesh(Vertices vertices, Faces faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces))
{
    if (vertices_.rows() < 3 || faces_.rows() == 0) {
        throw Error(ErrorKind::EmptyMesh, "mesh needs at least 3 vertices and one face");
    }
    if (!vertices_.allFinite()) throw Error(ErrorKind::ParseError, "non-finite vertex coordinate");
    const Index p = vertices_.rows();
    for (Index f = 0; f < faces_.rows(); ++f) {
        for (int c = 0; c < 3; ++c) {
            if (faces_(f, c) < 0 || faces_(f, c) >= p) {
                throw Error(ErrorKind::ParseError, "face " + std::to_string(f) + " has out-of-range index " +
                                                       std::to_string(faces_(f, c)));
            }
        }
        if (faces_(f, 0) == faces_(f, 1) || faces_(f, 1) == faces_(f, 2) || faces_(f, 0) == faces_(f, 2)) {
            throw Error(ErrorKind::ParseError, "face " + std::to_string(f) + " repeats a vertex");
        }
    }
}

PointCloud::PointCloud(Eigen::MatrixXd points) : points_(std::move(points))
{
    if (points_.rows() < 2 || points_.cols() < 1) {
        throw Error(ErrorKind::InvalidArgument, "point cloud needs p >= 2 points of dimension >= 1");
    }
    if (!points_.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite point coordinate");
}

WeightedGraph WeightedGraph::from_edges(Index num_vertices, std::span<const Edge> edges)
{
    struct Half {
        Index from, to;
        double w;
    };
    std::vector<Half> halves;
    halves.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= num_vertices || e.j >= num_vertices) {
            throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
        }
        if (e.i == e.j) throw Error(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(e.i));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw Error(ErrorKind::InvalidArgument, "edge weight must be positive and finite");
        }
        halves.push_back({e.i, e.j, e.weight});
        halves.push_back({e.j, e.i, e.weight});
    }
    std::sort(halves.begin(), halves.end(), [](const Half& a, const Half& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.to != b.to) return a.to < b.to;
        return a.w < b.w;
    });
    // (from,to) duplicates are adjacent and the first carries the minimum weight.
    halves.erase(std::unique(halves.begin(), halves.end(),
                             [](const Half& a, const Half& b) { return a.from == b.from && a.to == b.to; }),
                 halves.end());

    WeightedGraph g;
    g.offsets_.assign(static_cast<std::size_t>(num_vertices) + 1, 0);
    g.targets_.reserve(halves.size());
    g.weights_.reserve(halves.size());
    for (const Half& h : halves) {
        ++g.offsets_[h.from + 1];
        g.targets_.push_back(h.to);
        g.weights_.push_back(h.w);
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    return g;
}

double WeightedGraph::weight(Index i, Index j) const
{
    auto nb = neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) return -1.0;
    return weights(i)[it - nb.begin()];
}

bool WeightedGraph::is_connected() const
{
    const Index p = num_vertices();
    if (p == 0) return true;
    std::vector<char> seen(p, 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    Index count = 1;
    while (!stack.empty()) {
        Index v = stack.back();
        stack.pop_back();
        for (Index u : neighbors(v)) {
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == p;
}

TriMesh parse_off(std::string_view text)
{
    auto lines = split_lines(text);
    std::size_t ln = 0;
    auto next_tokens = [&]() -> std::vector<std::string_view> {
        while (ln < lines.size()) {
            auto toks = tokenize(strip_comment(lines[ln++]));
            if (!toks.empty()) return toks;
        }
        parse_fail(ln, "unexpected end of file");
    };

    auto header = next_tokens();
    if (header[0] != "OFF") parse_fail(ln, "missing OFF header");
    // Counts may share the header line ("OFF p f e").
    std::vector<std::string_view> counts(header.begin() + 1, header.end());
    if (counts.empty()) counts = next_tokens();
    if (counts.size() < 2) parse_fail(ln, "expected vertex and face counts");
    const long long p = to_integer(counts[0], ln);
    const long long f = to_integer(counts[1], ln);
    if (p < 0 || f < 0) parse_fail(ln, "negative counts");
    if (p == 0 || f == 0) throw Error(ErrorKind::EmptyMesh, "OFF declares no vertices or no faces");

    TriMesh::Vertices V(p, 3);
    for (long long i = 0; i < p; ++i) {
        auto toks = next_tokens();
        if (toks.size() < 3) parse_fail(ln, "vertex line needs 3 coordinates");
        for (int c = 0; c < 3; ++c) V(i, c) = to_double(toks[c], ln);
    }
    TriMesh::Faces F(f, 3);
    for (long long i = 0; i < f; ++i) {
        auto toks = next_tokens();
        if (toks.size() < 4 || to_integer(toks[0], ln) != 3) parse_fail(ln, "only triangular faces are supported");
        for (int c = 0; c < 3; ++c) {
            long long idx = to_integer(toks[c + 1], ln);
            if (idx < 0 || idx >= p) parse_fail(ln, "face index " + std::to_string(idx) + " out of range");
            F(i, c) = static_cast<int>(idx);
        }
    }
    return TriMesh(std::move(V), std::move(F));
}

TriMesh parse_obj(std::string_view text)
{
    std::vector<double> coords;
    std::vector<int> faces;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto toks = tokenize(strip_comment(lines[ln]));
        if (toks.empty()) continue;
        if (toks[0] == "v") {
            if (toks.size() < 4) parse_fail(ln + 1, "vertex line needs 3 coordinates");
            for (int c = 1; c <= 3; ++c) coords.push_back(to_double(toks[c], ln + 1));
        } else if (toks[0] == "f") {
            if (toks.size() != 4) parse_fail(ln + 1, "only triangular faces are supported");
            const long long nv = static_cast<long long>(coords.size() / 3);
            for (int c = 1; c <= 3; ++c) {
                std::string_view t = toks[c].substr(0, toks[c].find('/'));
                long long idx = to_integer(t, ln + 1);
                if (idx == 0) parse_fail(ln + 1, "OBJ indices are 1-based; got 0");
                long long zero_based = idx > 0 ? idx - 1 : nv + idx;
                if (zero_based < 0 || zero_based >= nv) {
                    parse_fail(ln + 1, "face index " + std::to_string(idx) + " out of range");
                }
                faces.push_back(static_cast<int>(zero_based));
            }
        }
    }
    if (coords.empty() || faces.empty()) throw Error(ErrorKind::EmptyMesh, "OBJ has no vertices or no faces");
    TriMesh::Vertices V = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>>(
        coords.data(), static_cast<Index>(coords.size() / 3), 3);
    TriMesh::Faces F = Eigen::Map<const Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>>(
        faces.data(), static_cast<Index>(faces.size() / 3), 3);
    return TriMesh(std::move(V), std::move(F));
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format)
{
    const std::string text = read_file(path);
    return format == MeshFormat::OFF ? parse_off(text) : parse_obj(text);
}

TriMesh load_mesh(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    if (!ext.empty()) ext.erase(0, 1);
    return load_mesh(path, parse_mesh_format(ext));
}

std::string to_off(const TriMesh& mesh)
{
    std::string out = "OFF\n" + std::to_string(mesh.num_vertices()) + " " + std::to_string(mesh.num_faces()) + " 0\n";
    char buf[96];
    for (Index i = 0; i < mesh.num_vertices(); ++i) {
        const auto& v = mesh.vertices();
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v(i, 0), v(i, 1), v(i, 2));
        out += buf;
    }
    for (Index f = 0; f < mesh.num_faces(); ++f) {
        const auto& F = mesh.faces();
        std::snprintf(buf, sizeof buf, "3 %d %d %d\n", F(f, 0), F(f, 1), F(f, 2));
        out += buf;
    }
    return out;
}

void save_off(const TriMesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << to_off(mesh);
}

PointCloud parse_point_cloud(std::string_view text)
{
    std::vector<double> values;
    Index cols = -1;
    Index rows = 0;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto toks = tokenize(lines[ln], true);
        if (toks.empty()) continue;
        if (cols < 0) cols = static_cast<Index>(toks.size());
        if (static_cast<Index>(toks.size()) != cols) parse_fail(ln + 1, "inconsistent column count");
        for (auto t : toks) values.push_back(to_double(t, ln + 1));
        ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::ParseError, "empty point cloud");
    Eigen::MatrixXd P = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), rows, cols);
    return PointCloud(std::move(P));
}

PointCloud load_point_cloud(const std::filesystem::path& path) { return parse_point_cloud(read_file(path)); }

WeightedGraph mesh_to_graph(const TriMesh& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    std::vector<std::pair<Index, Index>> keys;
    keys.reserve(static_cast<std::size_t>(F.rows()) * 3);
    for (Index f = 0; f < F.rows(); ++f) {
        for (int c = 0; c < 3; ++c) {
            Index a = F(f, c), b = F(f, (c + 1) % 3);
            keys.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (auto [a, b] : keys) {
        double len = (V.row(a) - V.row(b)).norm();
        if (len == 0.0) {
            throw Error(ErrorKind::DegenerateEdge,
                        "edge (" + std::to_string(a) + "," + std::to_string(b) + ") has zero length");
        }
        edges.push_back({a, b, len});
    }
    return WeightedGraph::from_edges(mesh.num_vertices(), edges);
}

WeightedGraph knn_graph(const PointCloud& cloud, int w)
{
    const Index p = cloud.size();
    if (w < 1 || w >= p) {
        throw Error(ErrorKind::InvalidArgument, "knn neighbor count must satisfy 1 <= w < p");
    }
    const auto& X = cloud.points();
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(p) * w);
    std::vector<std::pair<double, Index>> cand(p - 1);
    for (Index i = 0; i < p; ++i) {
        Index k = 0;
        for (Index j = 0; j < p; ++j) {
            if (j != i) cand[k++] = {(X.row(i) - X.row(j)).squaredNorm(), j};
        }
        std::nth_element(cand.begin(), cand.begin() + (w - 1), cand.end());
        for (int t = 0; t < w; ++t) {
            Index j = cand[t].second;
            Index a = std::min(i, j), b = std::max(i, j);
            double d = (X.row(a) - X.row(b)).norm();
            if (d == 0.0) {
                throw Error(ErrorKind::DegenerateEdge,
                            "points " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
            }
            edges.push_back({a, b, d});
        }
    }
    WeightedGraph g = WeightedGraph::from_edges(p, edges);
    if (!g.is_connected()) {
        throw Error(ErrorKind::DisconnectedGraph, "knn graph with w = " + std::to_string(w) + " is disconnected");
    }
    return g;
}

} // namespace geomds
