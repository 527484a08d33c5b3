#pragma once

#include "geomds/decompose.hpp"
#include "geomds/geodesics.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace geomds::io {

namespace fs = std::filesystem;

/// Binary matrix layout: magic "GMDS1", then rows, cols and element kind
/// (1 = 64-bit real) as little-endian uint64, then the row-major payload
/// as little-endian IEEE doubles.
std::string encode_matrix(const Eigen::MatrixXd& A);
Eigen::MatrixXd decode_matrix(std::string_view bytes);

void write_matrix(const fs::path& path, const Eigen::MatrixXd& A);
Eigen::MatrixXd read_matrix(const fs::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const fs::path& path, std::string_view contents);
std::string read_text(const fs::path& path);

/// Rows of comma-separated values printed with 17 significant digits.
std::string matrix_to_csv(const Eigen::MatrixXd& A);

std::string indices_to_csv(const std::vector<Index>& indices);
std::vector<Index> parse_indices(std::string_view text);

/// "i,j" rows; throws ParseError naming the offending line.
std::vector<std::pair<Index, Index>> parse_pairs(std::string_view text);

/// indices.csv + F.bin in `dir`.
void save_samples(const fs::path& dir, const SampleSet& s);
SampleSet load_samples(const fs::path& dir);

nlohmann::json factor_header(const LowRankSquaredDistances& fac, double radius = 0.0);

/// S.bin, T.bin and header.json in `dir`.
void save_factors(const fs::path& dir, const LowRankSquaredDistances& fac, double radius = 0.0);

struct LoadedFactors {
    LowRankSquaredDistances factors;
    nlohmann::json header;
};
LoadedFactors load_factors(const fs::path& dir);

/// Appends one compact JSON record per line.
std::string to_json_lines(const std::vector<nlohmann::json>& records);

} // namespace geomds::io
