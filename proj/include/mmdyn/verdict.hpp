#pragma once

#include <string>
#include <string_view>

namespace mmdyn {

enum class Status { holds, fails, unknown };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::unknown: return "unknown";
    }
    return "?";
}

/// Three-valued verdict. `basis` names the rule that justifies a holds or
/// fails answer; `detail` carries human-readable evidence.
struct Verdict {
    Status status = Status::unknown;
    std::string basis;
    std::string detail;

    static Verdict make(Status s, std::string basis, std::string detail = "") {
        return Verdict{s, std::move(basis), std::move(detail)};
    }
};

}  // namespace mmdyn
