#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geomds {

enum class ErrorKind {
    Io,
    ParseError,
    EmptyMesh,
    DegenerateEdge,
    DisconnectedGraph,
    Unreachable,
    ZeroAreaFace,
    IsolatedVertex,
    InvalidArgument,
    ShapeMismatch,
    IndexOutOfRange,
    NonSymmetric,
    TooLarge,
    ZeroReference,
    ZeroDistancePair,
    SingularSystem,
    IllConditioned,
    DegenerateEmbedding,
    SolverFailure,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error kind: 2 I/O, 3 bad input data,
/// 4 numerical degeneracy, 5 solver failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Upper bound on p for operations that materialize a dense p x p matrix.
/// Defaults to 5000; overridden by the GEOMDS_DENSE_CAP environment variable.
long dense_cap();

inline void require_dense(long p, const char* what)
{
    if (p > dense_cap()) {
        throw Error(ErrorKind::TooLarge, std::string(what) + ": p = " + std::to_string(p) +
                                             " exceeds dense cap " + std::to_string(dense_cap()));
    }
}

} // namespace geomds
