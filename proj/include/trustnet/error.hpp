#pragma once

#include <stdexcept>
#include <string>

namespace trustnet {

// Base class for everything this library throws.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Unknown source/facet/term, or a payload that contradicts the taxonomy.
class taxonomy_error : public error {
public:
    using error::error;
};

// A caller violated a documented precondition (cardinality mismatch,
// self-evaluation, cross-cluster pair, ...).
class contract_error : public error {
public:
    using error::error;
};

// Non-finite or otherwise unusable numeric input.
class input_error : public error {
public:
    using error::error;
};

// No rule fired, or the aggregated fuzzy set has zero area.
class empty_inference_error : public error {
public:
    using error::error;
};

// Fewer observation samples than the estimator needs.
class insufficient_data_error : public error {
public:
    using error::error;
};

// An aggregate was requested where no evidence exists at all.
class no_evidence_error : public error {
public:
    using error::error;
};

// Scenario / evidence file could not be parsed.
class parse_error : public error {
public:
    using error::error;
};

} // namespace trustnet
