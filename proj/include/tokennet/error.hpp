#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tokennet {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- ingest ---

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line_no, const std::string& detail)
        : Error("malformed row at line " + std::to_string(line_no) + ": " + detail),
          line_no(line_no) {}
    std::size_t line_no;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& name)
        : Error("missing required column: " + name), column(name) {}
    std::string column;
};

class DuplicateDate : public Error {
public:
    explicit DuplicateDate(const std::string& date)
        : Error("duplicate date: " + date), date(date) {}
    std::string date;
};

class NonPositivePrice : public Error {
public:
    explicit NonPositivePrice(const std::string& date)
        : Error("non-positive price on " + date), date(date) {}
    std::string date;
};

// --- graph ---

class EmptyDay : public Error {
public:
    explicit EmptyDay(const std::string& day)
        : Error("no edges remain for day " + day) {}
};

class DegenerateGraph : public Error {
public:
    explicit DegenerateGraph(const std::string& detail) : Error("degenerate graph: " + detail) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& detail) : Error("no convergence: " + detail) {}
};

// --- core-periphery ---

class RewireFailure : public Error {
public:
    explicit RewireFailure(const std::string& detail) : Error("rewire failure: " + detail) {}
};

class EmptyCounterfactual : public Error {
public:
    EmptyCounterfactual() : Error("no edges survive core removal") {}
};

// --- econ ---

class SeriesTooShort : public Error {
public:
    SeriesTooShort(std::size_t got, std::size_t need)
        : Error("series too short: " + std::to_string(got) + " < " + std::to_string(need)) {}
};

class NoStationaryTransform : public Error {
public:
    explicit NoStationaryTransform(const std::string& name)
        : Error("no candidate transform makes '" + name + "' stationary") {}
};

class SingularDesign : public Error {
public:
    SingularDesign() : Error("regression design matrix is singular") {}
};

class InsufficientObservations : public Error {
public:
    InsufficientObservations(std::size_t got, std::size_t need)
        : Error("insufficient observations: " + std::to_string(got) + " <= " +
                std::to_string(need)) {}
};

class DegenerateColumn : public Error {
public:
    explicit DegenerateColumn(std::size_t index)
        : Error("zero-variance column at index " + std::to_string(index)), index(index) {}
    std::size_t index;
};

// --- generators / cli ---

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& detail) : Error("invalid parameters: " + detail) {}
};

}  // namespace tokennet
