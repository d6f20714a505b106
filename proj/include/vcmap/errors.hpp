#pragma once

#include <stdexcept>
#include <string>

namespace vcmap {

// Base class for every error this library raises on purpose.
struct MappingError : std::runtime_error {
    explicit MappingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; message carries file name and 1-based line number.
struct ParseError : MappingError {
    using MappingError::MappingError;
};

// A row references an id that is not defined anywhere in its target set.
struct ReferenceError : MappingError {
    using MappingError::MappingError;
};

// A hierarchy axis that must be acyclic has a cycle; message shows one.
struct CycleError : MappingError {
    using MappingError::MappingError;
};

// Lookup of a concept or code that does not exist.
struct NotFoundError : MappingError {
    using MappingError::MappingError;
};

// Input is well-formed but breaks a structural rule (duplicates, limits...).
struct ValidationError : MappingError {
    using MappingError::MappingError;
};

}  // namespace vcmap
