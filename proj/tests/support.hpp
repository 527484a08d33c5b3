#pragma once

#include "geomds/error.hpp"

#include <filesystem>
#include <optional>
#include <string>

#if !defined(GEOMDS_TEST_DATA) || !defined(GEOMDS_DATA_DIR)
#error "GEOMDS_TEST_DATA and GEOMDS_DATA_DIR must be defined"
#endif

inline std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(GEOMDS_TEST_DATA) / name; }

// Bundled meshes under data/.
inline std::filesystem::path bundled(const std::string& name) { return std::filesystem::path(GEOMDS_DATA_DIR) / name; }

template <typename Fn>
std::optional<geomds::ErrorKind> error_kind(Fn&& fn)
{
    try {
        fn();
    } catch (const geomds::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

#define CHECK_ERROR(expr, kind) CHECK(error_kind([&] { (void)(expr); }) == std::optional(geomds::ErrorKind::kind))
