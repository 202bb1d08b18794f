#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bistable {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParameterOutOfRange : public Error {
public:
    using Error::Error;
};

/// Elongations violate the hexagonal equations; carries the worst node.
class IncompatibleElongations : public Error {
public:
    IncompatibleElongations(std::size_t node, double residual, double tolerance)
        : Error("incompatible elongations: hexagonal residual " + std::to_string(residual) +
                " at interior node " + std::to_string(node) + " exceeds " +
                std::to_string(tolerance)),
          worst_node(node),
          worst_residual(residual) {}

    std::size_t worst_node;
    double worst_residual;
};

class DegenerateTriangle : public Error {
public:
    explicit DegenerateTriangle(std::size_t triangle)
        : Error("degenerate triangle " + std::to_string(triangle) +
                ": cosine argument outside (-1, 1)"),
          index(triangle) {}

    std::size_t index;
};

class OverlappingLongEdges : public Error {
public:
    explicit OverlappingLongEdges(std::size_t edge)
        : Error("still states share long edge " + std::to_string(edge)), edge(edge) {}

    std::size_t edge;
};

class FractionSumError : public Error {
public:
    using Error::Error;
};

class NoRealRotation : public Error {
public:
    using Error::Error;
};

class TargetOutsideD : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double grad_norm)
        : Error(what + " (final gradient norm " + std::to_string(grad_norm) + ")"),
          grad_norm(grad_norm) {}

    double grad_norm;
};

}  // namespace bistable
