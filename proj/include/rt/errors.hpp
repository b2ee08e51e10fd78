#pragma once

#include <stdexcept>
#include <string>

namespace rt {

// A lemma hypothesis did not hold on the given input. CLI exit code 2.
struct GateError : std::runtime_error {
    std::string gate;
    GateError(std::string g, const std::string& detail)
        : std::runtime_error(g + ": " + detail), gate(std::move(g)) {}
};

// Malformed input (not a tree, bad constants, unknown vertex). CLI exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A postcondition audit failed. Always a bug.
struct AuditError : std::logic_error {
    using std::logic_error::logic_error;
};

inline void audit(bool ok, const std::string& what) {
    if (!ok) throw AuditError(what);
}

}  // namespace rt
