#include "geomds/error.hpp"

#include <cstdlib>
#include <string>

namespace geomds {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Io: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyMesh: return "EmptyMesh";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::ZeroAreaFace: return "ZeroAreaFace";
    case ErrorKind::IsolatedVertex: return "IsolatedVertex";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::ZeroDistancePair: return "ZeroDistancePair";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorKind::SolverFailure: return "SolverFailure";
    }
    return "Error";
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Io: return 2;
    case ErrorKind::SingularSystem:
    case ErrorKind::IllConditioned:
    case ErrorKind::DegenerateEmbedding: return 4;
    case ErrorKind::SolverFailure: return 5;
    default: return 3;
    }
}

long dense_cap()
{
    if (const char* env = std::getenv("GEOMDS_DENSE_CAP")) {
        try {
            long v = std::stol(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return 5000;
}

} // namespace geomds
