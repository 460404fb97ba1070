#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pplab {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a closed-form Hessian is requested on or too close to a
// coordinate hyperplane {x_i = 0}.  Carries the offending axes.
struct DegenerateDirection : std::runtime_error {
    std::vector<int> axes;
    DegenerateDirection(const std::string& msg, std::vector<int> which)
        : std::runtime_error(msg), axes(std::move(which)) {}
};

struct Singularity : std::runtime_error {
    explicit Singularity(const std::string& msg) : std::runtime_error(msg) {}
};

struct SearchFailure : std::runtime_error {
    explicit SearchFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundaryProximity : std::runtime_error {
    explicit BoundaryProximity(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidSlice : std::runtime_error {
    explicit InvalidSlice(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Divergence : std::runtime_error {
    explicit Divergence(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pplab
