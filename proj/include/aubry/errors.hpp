#pragma once

#include <stdexcept>
#include <string>

namespace aubry {

/// Base class for computational failures. `name()` is the stable error
/// identifier printed by the command-line front end.
class AubryError : public std::runtime_error {
public:
    AubryError(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// The lift is not strictly increasing in y where a root was needed.
class TwistViolation : public AubryError {
public:
    explicit TwistViolation(const std::string& what) : AubryError("TwistViolation", what) {}
};

/// A displacement or argmin left the tabulated band.
class BandExceeded : public AubryError {
public:
    explicit BandExceeded(const std::string& what) : AubryError("BandExceeded", what) {}
};

/// The quadrangle inequality fails beyond tolerance.
class NonMongeInput : public AubryError {
public:
    explicit NonMongeInput(const std::string& what) : AubryError("NonMongeInput", what) {}
};

/// Tables on different grids were combined.
class IncompatibleGrids : public AubryError {
public:
    explicit IncompatibleGrids(const std::string& what) : AubryError("IncompatibleGrids", what) {}
};

/// A requested error budget needs parameters beyond the configured caps.
class ToleranceNotAchievable : public AubryError {
public:
    explicit ToleranceNotAchievable(const std::string& what)
        : AubryError("ToleranceNotAchievable", what) {}
};

}  // namespace aubry
