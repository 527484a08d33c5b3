#include "cli.hpp"

#include "geomds/geomds.hpp"
#include "geomds/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>

namespace geomds::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string input;
    std::string format;
    std::string backend = "dijkstra";
    std::string method = "nmds";
    std::string out = ".";
    std::string pairs;
    Index n = 0;
    Index n1 = 0;
    double mu = kDefaultMu;
    Index dim = 3;
    bool sphere = false;
    Index k = 2;
    double radius = 0.0;
    bool normalize = false;
    Index first = 0;
    std::uint64_t seed = 0;
    int knn = 10;
    std::vector<std::string> metrics;
    std::vector<Index> sweep_n;
    std::size_t pair_count = 1000;
    Index anchors = 100;

    void validate() const
    {
        if (n < 0) throw Error(ErrorKind::InvalidArgument, "--n must be >= 1");
        if (n1 < 0 || (n > 0 && n1 > n)) throw Error(ErrorKind::InvalidArgument, "--n1 must satisfy n1 <= n");
        if (!(mu >= 1.0 && mu <= 1e12)) throw Error(ErrorKind::InvalidArgument, "--mu must lie in [1, 1e12]");
        if (dim < 1) throw Error(ErrorKind::InvalidArgument, "--dim must be >= 1");
        if (radius < 0.0) throw Error(ErrorKind::InvalidArgument, "--radius must be positive");
    }
};

struct Input {
    std::optional<TriMesh> mesh;
    std::optional<GeodesicBackend> backend;
};

std::string resolve_format(const RunConfig& cfg)
{
    if (!cfg.format.empty()) return cfg.format;
    std::string ext = fs::path(cfg.input).extension().string();
    if (!ext.empty()) ext.erase(0, 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

Input load_input(const RunConfig& cfg)
{
    if (cfg.input.empty()) throw Error(ErrorKind::InvalidArgument, "--input is required");
    if (!fs::exists(cfg.input)) throw Error(ErrorKind::Io, "input file not found: " + cfg.input);
    Input in;
    const std::string format = resolve_format(cfg);
    std::optional<PointCloud> cloud;
    if (format == "csv") {
        cloud = load_point_cloud(cfg.input);
    } else {
        in.mesh = load_mesh(cfg.input, parse_mesh_format(format));
        cloud = PointCloud(in.mesh->vertices());
    }
    if (cfg.backend == "dijkstra") {
        in.backend = in.mesh ? GeodesicBackend(DijkstraGraph{mesh_to_graph(*in.mesh)})
                             : GeodesicBackend(DijkstraGraph{knn_graph(*cloud, cfg.knn)});
    } else if (cfg.backend == "plane") {
        in.backend = GeodesicBackend(AnalyticPlane{*cloud});
    } else if (cfg.backend == "sphere") {
        const double r = cfg.radius > 0.0 ? cfg.radius : cloud->points().row(0).norm();
        in.backend = GeodesicBackend(AnalyticSphere{*cloud, r});
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown backend '" + cfg.backend + "'");
    }
    return in;
}

void ensure_out_dir(const RunConfig& cfg)
{
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + cfg.out + ": " + ec.message());
}

void write_log(const RunConfig& cfg, const std::string& command, const std::vector<json>& records)
{
    io::write_atomic(fs::path(cfg.out) / (command + ".jsonl"), io::to_json_lines(records));
}

SampleSet sample(const RunConfig& cfg, const Input& in)
{
    if (cfg.n < 1) throw Error(ErrorKind::InvalidArgument, "--n is required and must be >= 1");
    return farthest_point_sampling(*in.backend, cfg.n, cfg.first);
}

struct Decomposition {
    LowRankSquaredDistances factors;
    double radius = 0.0;
};

Decomposition decompose(const RunConfig& cfg, const SampleSet& s, const Input* in)
{
    Decomposition d;
    DistanceColumns cols;
    if (cfg.sphere) {
        d.radius = cfg.radius > 0.0 ? cfg.radius : default_sphere_radius(s.F);
        cols = cos_transform(s, d.radius);
    } else {
        cols = square_columns(s);
    }
    const Index n = static_cast<Index>(s.indices.size());
    const Index n1 = cfg.n1 > 0 ? cfg.n1 : default_n1(n);
    switch (parse_method(cfg.method)) {
    case Method::FMDS: {
        if (!in || !in->mesh) throw Error(ErrorKind::InvalidArgument, "fmds needs a triangle mesh --input");
        const SelectionMatrix B(s.indices, in->mesh->num_vertices());
        d.factors = fmds_decompose(compute_M(make_laplacian(*in->mesh), B, cfg.mu), cols);
        break;
    }
    case Method::NMDS: d.factors = nmds_decompose(cols, n1); break;
    case Method::CUR: {
        std::vector<Index> subset(n1);
        std::iota(subset.begin(), subset.end(), Index{0});
        d.factors = cur_decompose(cols, subset);
        break;
    }
    }
    return d;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out)
{
    const Input in = load_input(cfg);
    ensure_out_dir(cfg);
    const SampleSet s = sample(cfg, in);
    io::save_samples(cfg.out, s);
    write_log(cfg, "sample", {json{{"command", "sample"}, {"n", cfg.n}, {"first", cfg.first},
                                   {"backend", cfg.backend}, {"p", s.F.rows()}, {"indices", s.indices}}});
    out << "sampled " << s.indices.size() << " of " << s.F.rows() << " points\n";
    return 0;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out)
{
    ensure_out_dir(cfg);
    std::optional<Input> in;
    if (!cfg.input.empty()) in = load_input(cfg);
    SampleSet s;
    if (cfg.n > 0) {
        if (!in) throw Error(ErrorKind::InvalidArgument, "inline sampling needs --input");
        s = sample(cfg, *in);
        io::save_samples(cfg.out, s);
    } else {
        s = io::load_samples(cfg.out);
    }
    const Decomposition d = decompose(cfg, s, in ? &*in : nullptr);
    io::save_factors(cfg.out, d.factors, d.radius);
    json rec = io::factor_header(d.factors, d.radius);
    rec.erase("indices");
    rec["command"] = "decompose";
    write_log(cfg, "decompose", {rec});
    out << to_string(d.factors.method) << " factors: p=" << d.factors.num_points() << " q=" << d.factors.inner_dim()
        << "\n";
    if (d.factors.rank_deficient) out << "warning: only " << d.factors.n1 << " usable eigenvalues\n";
    return 0;
}

int cmd_embed(const RunConfig& cfg, std::ostream& out)
{
    const auto loaded = io::load_factors(cfg.out);
    const auto& fac = loaded.factors;
    Embedding<double> emb;
    json rec{{"command", "embed"}};
    if (fac.metric == Metric::Cosine) {
        const double r = cfg.radius > 0.0 ? cfg.radius : loaded.header.value("radius", 0.0);
        emb = sphere_embed(fac, cfg.k, r, cfg.normalize);
        rec["sphere"] = true;
        rec["k"] = cfg.k;
        rec["radius"] = r;
        rec["normalize"] = cfg.normalize;
    } else {
        if (cfg.sphere) throw Error(ErrorKind::InvalidArgument, "factors are not cosine; decompose with --sphere first");
        emb = accelerated_mds(fac, cfg.dim);
        rec["dim"] = cfg.dim;
    }
    io::write_atomic(fs::path(cfg.out) / "Z.csv", io::matrix_to_csv(emb.Z));
    io::write_matrix(fs::path(cfg.out) / "Z.bin", emb.Z);
    rec["eigenvalues"] = std::vector<double>(emb.eigenvalues.data(), emb.eigenvalues.data() + emb.eigenvalues.size());
    rec["clamped_count"] = emb.clamped_count;
    write_log(cfg, "embed", {rec});
    out << "embedded " << emb.Z.rows() << " points in " << emb.Z.cols() << " coordinates";
    if (emb.clamped_count > 0) out << " (" << emb.clamped_count << " negative eigenvalues clamped)";
    out << "\n";
    return 0;
}

int cmd_query(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.pairs.empty()) throw Error(ErrorKind::InvalidArgument, "--pairs is required");
    const auto pairs = io::parse_pairs(io::read_text(cfg.pairs));
    const auto loaded = io::load_factors(cfg.out);

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const PairQuery<double> query(loaded.factors);
    const auto t1 = clock::now();
    const Eigen::VectorXd d = query(pairs);
    const auto t2 = clock::now();

    std::string csv;
    csv.reserve(pairs.size() * 32);
    char buf[64];
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g\n", static_cast<long long>(pairs[t].first),
                      static_cast<long long>(pairs[t].second), d[static_cast<Index>(t)]);
        csv += buf;
    }
    io::write_atomic(fs::path(cfg.out) / "distances.csv", csv);

    const double setup = std::chrono::duration<double>(t1 - t0).count();
    const double secs = std::chrono::duration<double>(t2 - t1).count();
    const double rate = secs > 0.0 ? double(pairs.size()) / secs : 0.0;
    write_log(cfg, "query", {json{{"command", "query"}, {"pairs", pairs.size()}, {"setup_seconds", setup},
                                  {"query_seconds", secs}, {"pairs_per_second", rate}}});
    out << "answered " << pairs.size() << " queries (" << rate << " pairs/s)\n";
    return 0;
}

json metric_record(const std::string& metric, json params, double value, std::uint64_t seed)
{
    return json{{"metric", metric}, {"params", std::move(params)}, {"value", value}, {"seed", seed}};
}

int cmd_eval(const RunConfig& cfg, std::ostream& out)
{
    const Input in = load_input(cfg);
    ensure_out_dir(cfg);
    std::vector<std::string> metrics = cfg.metrics;
    if (metrics.empty() && cfg.sweep_n.empty()) metrics = {"stress", "frobenius", "rms", "triangle"};

    std::optional<io::LoadedFactors> loaded;
    std::optional<Eigen::MatrixXd> truth;
    auto factors = [&]() -> const LowRankSquaredDistances& {
        if (!loaded) loaded = io::load_factors(cfg.out);
        if (loaded->factors.metric != Metric::SquaredGeodesic) {
            throw Error(ErrorKind::InvalidArgument, "evaluation needs squared-geodesic factors");
        }
        return loaded->factors;
    };
    auto ground_truth = [&]() -> const Eigen::MatrixXd& {
        if (!truth) truth = all_pairs_distances(*in.backend);
        return *truth;
    };

    std::vector<json> records;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TooLarge) throw;
            records.push_back(json{{"metric", name}, {"warning", e.what()}, {"seed", cfg.seed}});
        }
    };

    for (const auto& m : metrics) {
        if (m == "stress") {
            guarded(m, [&] {
                const auto& fac = factors();
                const fs::path zpath = fs::path(cfg.out) / "Z.bin";
                const Eigen::MatrixXd Z = fs::exists(zpath) ? io::read_matrix(zpath) : accelerated_mds(fac, cfg.dim).Z;
                const Eigen::MatrixXd& D = ground_truth();
                const double s = stress(Z, D.cwiseProduct(D));
                records.push_back(metric_record(m, {{"dim", Z.cols()}, {"display", display_stress(s, D.rows())}}, s, cfg.seed));
            });
        } else if (m == "frobenius") {
            guarded(m, [&] {
                const double e = rel_frobenius_error(reconstruct_distances(factors()), ground_truth());
                records.push_back(metric_record(m, {{"n", factors().num_samples()}}, e, cfg.seed));
            });
        } else if (m == "rms") {
            const auto& fac = factors();
            const auto ps = PairSample::generate(fac.num_points(), cfg.pair_count, cfg.seed);
            records.push_back(metric_record(m, {{"pairs", cfg.pair_count}}, rms_relative_pair_error(fac, *in.backend, ps), cfg.seed));
        } else if (m == "triangle") {
            guarded(m, [&] {
                const auto& fac = factors();
                const Index count = std::min(cfg.anchors, fac.num_points());
                const auto anchors = farthest_point_sampling(*in.backend, count, cfg.first).indices;
                const auto v = triangle_violation(fac, anchors);
                records.push_back(metric_record(m, {{"anchors", count}, {"max", v.front().violation}}, total_violation(v), cfg.seed));
            });
        } else {
            throw Error(ErrorKind::InvalidArgument, "unknown metric '" + m + "'");
        }
    }

    for (Index n : cfg.sweep_n) {
        guarded("frobenius", [&] {
            RunConfig c = cfg;
            c.n = n;
            c.n1 = 0;
            c.sphere = false;
            const auto d = decompose(c, sample(c, in), &in);
            const double e = rel_frobenius_error(reconstruct_distances(d.factors), ground_truth());
            records.push_back(metric_record("frobenius", {{"n", n}, {"n1", d.factors.n1}, {"method", cfg.method}}, e, cfg.seed));
        });
    }

    const std::string lines = io::to_json_lines(records);
    io::write_atomic(fs::path(cfg.out) / "metrics.jsonl", lines);
    out << lines;
    return 0;
}

void add_input_options(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--input", cfg.input, "Mesh (OFF/OBJ) or point cloud (CSV)");
    cmd->add_option("--format", cfg.format, "off, obj or csv (default: from extension)");
    cmd->add_option("--backend", cfg.backend, "dijkstra, plane or sphere")
        ->check(CLI::IsMember({"dijkstra", "plane", "sphere"}));
    cmd->add_option("--knn", cfg.knn, "Neighbors per point for point-cloud graphs");
    cmd->add_option("--n", cfg.n, "Number of farthest point samples");
    cmd->add_option("--first", cfg.first, "First farthest point sample");
    cmd->add_option("--radius", cfg.radius, "Sphere radius");
}

void add_decompose_options(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--method", cfg.method, "fmds, nmds or cur")->check(CLI::IsMember({"fmds", "nmds", "cur"}));
    cmd->add_option("--n1", cfg.n1, "Retained eigenpairs / CUR columns (default ceil(n/2))");
    cmd->add_option("--mu", cfg.mu, "FMDS constraint penalty");
    cmd->add_flag("--sphere", cfg.sphere, "Decompose cos(D/r) for sphere embedding");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Low-rank geodesic distances and fast classical scaling", "geomds"};
    app.require_subcommand(1);
    app.add_option("--out", cfg.out, "Working directory for inputs and outputs");
    app.add_option("--seed", cfg.seed, "Random seed for evaluation pairs");

    auto* sample_cmd = app.add_subcommand("sample", "Farthest point sampling; writes indices.csv and F.bin");
    add_input_options(sample_cmd, cfg);

    auto* decompose_cmd = app.add_subcommand("decompose", "Build the factors S, T");
    add_input_options(decompose_cmd, cfg);
    add_decompose_options(decompose_cmd, cfg);

    auto* embed_cmd = app.add_subcommand("embed", "Classical scaling (flat or spherical) from the factors");
    embed_cmd->add_option("--dim", cfg.dim, "Target dimension m");
    embed_cmd->add_flag("--sphere", cfg.sphere, "Embed on a sphere (needs cosine factors)");
    embed_cmd->add_option("--k", cfg.k, "Sphere dimension");
    embed_cmd->add_option("--radius", cfg.radius, "Sphere radius (default: from header.json)");
    embed_cmd->add_flag("--normalize", cfg.normalize, "Project rows onto the sphere");

    auto* query_cmd = app.add_subcommand("query", "Approximate distances for i,j pairs");
    query_cmd->add_option("--pairs", cfg.pairs, "CSV of i,j rows")->required();

    auto* eval_cmd = app.add_subcommand("eval", "Evaluation metrics as JSON lines");
    add_input_options(eval_cmd, cfg);
    add_decompose_options(eval_cmd, cfg);
    eval_cmd->add_option("--dim", cfg.dim, "Target dimension for stress");
    eval_cmd->add_option("--metric", cfg.metrics, "stress, frobenius, rms, triangle");
    eval_cmd->add_option("--sweep-n", cfg.sweep_n, "Sample counts for a frobenius-error curve")->delimiter(',');
    eval_cmd->add_option("--pair-count", cfg.pair_count, "Random pairs for the rms metric");
    eval_cmd->add_option("--anchors", cfg.anchors, "Anchors for the triangle metric");

    for (auto* cmd : {sample_cmd, decompose_cmd, embed_cmd, query_cmd, eval_cmd}) {
        cmd->add_option("--out", cfg.out, "Working directory for inputs and outputs");
        cmd->add_option("--seed", cfg.seed, "Random seed for evaluation pairs");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 3;
    }

    try {
        cfg.validate();
        if (*sample_cmd) return cmd_sample(cfg, out);
        if (*decompose_cmd) return cmd_decompose(cfg, out);
        if (*embed_cmd) return cmd_embed(cfg, out);
        if (*query_cmd) return cmd_query(cfg, out);
        if (*eval_cmd) return cmd_eval(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace geomds::cli
