#pragma once

#include <stdexcept>
#include <string>

namespace etx {

enum class ErrKind {
    Parse,             // malformed input file
    CapacityOverflow,  // an object or conflation term exceeds the model cap
    Inconsistent,      // model fails a structural invariant
    IncompleteIndecs,  // a module failed to decompose over the declared indec list
    NotExtensionClosed,
    HypothesisNotMet,  // a checker was invoked outside its hypotheses
    BadQuery,
};

struct Error : std::runtime_error {
    ErrKind kind;
    Error(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace etx
