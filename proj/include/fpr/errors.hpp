#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fpr {

/// Base of every failure the library reports. `exit_code()` is what the CLI
/// returns for it; each kind has its own code.
class FprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual int exit_code() const { return 1; }
};

class ConfigError : public FprError {
public:
    using FprError::FprError;
    [[nodiscard]] int exit_code() const override { return 2; }
};

/// The level search exhausted its region. `furthest` is the last lattice
/// offset (first t-axis) that was examined.
class LevelsNotFound : public FprError {
public:
    LevelsNotFound(int axis, int level, std::int64_t furthest)
        : FprError("levels not found: r-axis " + std::to_string(axis) + ", level " +
                   std::to_string(level) + ", scanned up to t=" + std::to_string(furthest)),
          axis_(axis), level_(level), furthest_(furthest) {}
    [[nodiscard]] int exit_code() const override { return 3; }
    [[nodiscard]] int axis() const { return axis_; }
    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] std::int64_t furthest() const { return furthest_; }

private:
    int axis_;
    int level_;
    std::int64_t furthest_;
};

class PrecisionExceeded : public FprError {
public:
    using FprError::FprError;
    [[nodiscard]] int exit_code() const override { return 4; }
};

/// A scan hit its t budget without an answer; `scanned` is the bound reached.
class BudgetExceeded : public FprError {
public:
    BudgetExceeded(const std::string& what, std::int64_t scanned)
        : FprError(what + " (scanned up to t=" + std::to_string(scanned) + ")"), scanned_(scanned) {}
    [[nodiscard]] int exit_code() const override { return 5; }
    [[nodiscard]] std::int64_t scanned() const { return scanned_; }

private:
    std::int64_t scanned_;
};

class UnknownFunction : public FprError {
public:
    explicit UnknownFunction(const std::string& id) : FprError("unknown function id: " + id) {}
    [[nodiscard]] int exit_code() const override { return 6; }
};

class DuplicateAbscissa : public FprError {
public:
    using FprError::FprError;
    [[nodiscard]] int exit_code() const override { return 7; }
};

}  // namespace fpr
