#pragma once

#include <stdexcept>
#include <string>

namespace nuelab {

// Catalog / parameter errors
struct UnknownCatalogId : std::runtime_error {
    explicit UnknownCatalogId(const std::string& m) : std::runtime_error("UnknownCatalogId: " + m) {}
};
struct InvalidParams : std::runtime_error {
    explicit InvalidParams(const std::string& m) : std::runtime_error("InvalidParams: " + m) {}
};
struct OutOfDomain : std::runtime_error {
    explicit OutOfDomain(const std::string& m) : std::runtime_error("OutOfDomain: " + m) {}
};
struct CriticalPoint : std::runtime_error {
    explicit CriticalPoint(const std::string& m) : std::runtime_error("CriticalPoint: " + m) {}
};

// Orbit errors
struct NoiseExceedsMargin : std::runtime_error {
    explicit NoiseExceedsMargin(const std::string& m) : std::runtime_error("NoiseExceedsMargin: " + m) {}
};
struct CriticalOrbitStuck : std::runtime_error {
    explicit CriticalOrbitStuck(const std::string& m) : std::runtime_error("CriticalOrbitStuck: " + m) {}
};

// Hyperbolic-time errors
struct HypothesisViolated : std::runtime_error {
    explicit HypothesisViolated(const std::string& m) : std::runtime_error("HypothesisViolated: " + m) {}
};
struct DeltaMismatch : std::runtime_error {
    explicit DeltaMismatch(const std::string& m) : std::runtime_error("DeltaMismatch: " + m) {}
};
struct InsufficientHorizon : std::runtime_error {
    explicit InsufficientHorizon(const std::string& m) : std::runtime_error("InsufficientHorizon: " + m) {}
};

// Measure errors
struct DomainMismatch : std::runtime_error {
    explicit DomainMismatch(const std::string& m) : std::runtime_error("DomainMismatch: " + m) {}
};
struct NotOneDimensional : std::runtime_error {
    explicit NotOneDimensional(const std::string& m) : std::runtime_error("NotOneDimensional: " + m) {}
};
struct NotHyperbolicTime : std::runtime_error {
    explicit NotHyperbolicTime(const std::string& m) : std::runtime_error("NotHyperbolicTime: " + m) {}
};
struct BranchNotFound : std::runtime_error {
    explicit BranchNotFound(const std::string& m) : std::runtime_error("BranchNotFound: " + m) {}
};

// Viana-lab errors
struct NoRootFound : std::runtime_error {
    explicit NoRootFound(const std::string& m) : std::runtime_error("NoRootFound: " + m) {}
};
struct ContractionViolated : std::runtime_error {
    explicit ContractionViolated(const std::string& m) : std::runtime_error("ContractionViolated: " + m) {}
};
struct MaxItersExceeded : std::runtime_error {
    explicit MaxItersExceeded(const std::string& m) : std::runtime_error("MaxItersExceeded: " + m) {}
};

// Config / IO errors
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error("ParseError: " + m) {}
};
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error("ValidationError: " + m) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error("IoError: " + m) {}
};

} // namespace nuelab
