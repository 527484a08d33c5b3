#include "geomds/io.hpp"

#include "geomds/error.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace geomds::io {

namespace {

constexpr std::string_view kMagic = "GMDS1";
constexpr std::uint64_t kKindFloat64 = 1;

void put_u64(std::string& out, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t at)
{
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t(static_cast<unsigned char>(in[at + b])) << (8 * b);
    return v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

long long parse_int(std::string_view tok, std::size_t line)
{
    tok = trim(tok);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
    }
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn)
{
    std::size_t start = 0, line = 1;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view l = trim(text.substr(start, end - start));
        if (!l.empty()) fn(l, line);
        start = end + 1;
        ++line;
    }
}

} // namespace

std::string encode_matrix(const Eigen::MatrixXd& A)
{
    std::string out(kMagic);
    put_u64(out, static_cast<std::uint64_t>(A.rows()));
    put_u64(out, static_cast<std::uint64_t>(A.cols()));
    put_u64(out, kKindFloat64);
    out.reserve(out.size() + static_cast<std::size_t>(A.size()) * 8);
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(A(i, j)));
    }
    return out;
}

Eigen::MatrixXd decode_matrix(std::string_view bytes)
{
    const std::size_t header = kMagic.size() + 24;
    if (bytes.size() < header || bytes.substr(0, kMagic.size()) != kMagic) {
        throw Error(ErrorKind::ParseError, "missing GMDS1 magic");
    }
    const std::uint64_t rows = get_u64(bytes, kMagic.size());
    const std::uint64_t cols = get_u64(bytes, kMagic.size() + 8);
    const std::uint64_t kind = get_u64(bytes, kMagic.size() + 16);
    if (kind != kKindFloat64) throw Error(ErrorKind::ParseError, "unsupported element kind " + std::to_string(kind));
    if (cols != 0 && rows > (bytes.size() - header) / 8 / cols) throw Error(ErrorKind::ParseError, "truncated matrix payload");
    if (bytes.size() != header + rows * cols * 8) throw Error(ErrorKind::ParseError, "matrix payload size mismatch");
    Eigen::MatrixXd A(static_cast<Index>(rows), static_cast<Index>(cols));
    std::size_t at = header;
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j, at += 8) A(i, j) = std::bit_cast<double>(get_u64(bytes, at));
    }
    return A;
}

void write_atomic(const fs::path& path, std::string_view contents)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot rename into " + path.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_matrix(const fs::path& path, const Eigen::MatrixXd& A) { write_atomic(path, encode_matrix(A)); }

Eigen::MatrixXd read_matrix(const fs::path& path) { return decode_matrix(read_text(path)); }

std::string matrix_to_csv(const Eigen::MatrixXd& A)
{
    std::string out;
    char buf[32];
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", A(i, j));
            if (j) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string indices_to_csv(const std::vector<Index>& indices)
{
    std::string out;
    for (Index i : indices) out += std::to_string(i) + "\n";
    return out;
}

std::vector<Index> parse_indices(std::string_view text)
{
    std::vector<Index> out;
    for_each_line(text, [&](std::string_view l, std::size_t line) { out.push_back(parse_int(l, line)); });
    return out;
}

std::vector<std::pair<Index, Index>> parse_pairs(std::string_view text)
{
    std::vector<std::pair<Index, Index>> out;
    for_each_line(text, [&](std::string_view l, std::size_t line) {
        const auto comma = l.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected 'i,j'");
        }
        out.emplace_back(parse_int(l.substr(0, comma), line), parse_int(l.substr(comma + 1), line));
    });
    return out;
}

void save_samples(const fs::path& dir, const SampleSet& s)
{
    write_atomic(dir / "indices.csv", indices_to_csv(s.indices));
    write_matrix(dir / "F.bin", s.F);
}

SampleSet load_samples(const fs::path& dir)
{
    SampleSet s;
    s.indices = parse_indices(read_text(dir / "indices.csv"));
    s.F = read_matrix(dir / "F.bin");
    if (static_cast<Index>(s.indices.size()) != s.F.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "indices.csv and F.bin disagree on the sample count");
    }
    for (Index i : s.indices) {
        if (i < 0 || i >= s.F.rows()) throw Error(ErrorKind::IndexOutOfRange, "sample index " + std::to_string(i));
    }
    return s;
}

nlohmann::json factor_header(const LowRankSquaredDistances& fac, double radius)
{
    nlohmann::json h;
    h["method"] = std::string(to_string(fac.method));
    h["metric"] = std::string(to_string(fac.metric));
    h["p"] = fac.num_points();
    h["n"] = fac.num_samples();
    h["n1"] = fac.n1;
    h["q"] = fac.inner_dim();
    h["mu"] = fac.mu;
    h["rank_deficient"] = fac.rank_deficient;
    h["indices"] = fac.indices;
    if (fac.metric == Metric::Cosine) h["radius"] = radius;
    return h;
}

void save_factors(const fs::path& dir, const LowRankSquaredDistances& fac, double radius)
{
    write_matrix(dir / "S.bin", fac.S);
    write_matrix(dir / "T.bin", fac.T);
    write_atomic(dir / "header.json", factor_header(fac, radius).dump(2) + "\n");
}

LoadedFactors load_factors(const fs::path& dir)
{
    LoadedFactors out;
    try {
        out.header = nlohmann::json::parse(read_text(dir / "header.json"));
        auto& f = out.factors;
        f.method = parse_method(out.header.at("method").get<std::string>());
        f.metric = parse_metric(out.header.at("metric").get<std::string>());
        f.indices = out.header.at("indices").get<std::vector<Index>>();
        f.n1 = out.header.at("n1").get<Index>();
        f.mu = out.header.at("mu").get<double>();
        f.rank_deficient = out.header.value("rank_deficient", false);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("header.json: ") + e.what());
    }
    auto& f = out.factors;
    f.S = read_matrix(dir / "S.bin");
    f.T = read_matrix(dir / "T.bin");
    if (f.S.cols() != f.T.rows() || f.T.rows() != f.T.cols() || f.S.rows() != out.header.at("p").get<Index>()) {
        throw Error(ErrorKind::ShapeMismatch, "S.bin, T.bin and header.json disagree");
    }
    return out;
}

std::string to_json_lines(const std::vector<nlohmann::json>& records)
{
    std::string out;
    for (const auto& r : records) out += r.dump() + "\n";
    return out;
}

} // namespace geomds::io
