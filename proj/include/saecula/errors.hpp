#pragma once

#include <stdexcept>
#include <string>

namespace saecula {

// Input violates the JSON schema (missing keys, wrong types, bad coeff tag).
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Input is well-formed but mathematically invalid (map not well defined,
// boundary of wrong degree, grades not monotone, dd != 0, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A structural identity that should hold for every valid input failed at
// runtime; indicates a bug or a genuinely non-distributive configuration.
struct NaturalityFailure : std::logic_error {
    explicit NaturalityFailure(const std::string& what) : std::logic_error(what) {}
};

// A multiplicity vector was requested for an object without finite
// composition length (free rank over Z).
struct InfiniteLengthError : std::runtime_error {
    explicit InfiniteLengthError(const std::string& what) : std::runtime_error(what) {}
};

// Group order exceeds the supported cap.
struct OrderCapError : std::runtime_error {
    explicit OrderCapError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace saecula
