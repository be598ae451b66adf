#pragma once

#include <cstdint>
#include <string>

namespace jobshop {

// Time values are 64-bit so accumulated completion times cannot overflow at
// any realistic instance size.
using Time = std::int64_t;

// Identifies one operation: the `position`-th task of job `job`.
struct OperationId {
    int job = 0;
    int position = 0;

    friend bool operator==(const OperationId&, const OperationId&) = default;
    friend auto operator<=>(const OperationId&, const OperationId&) = default;
};

inline std::string to_string(const OperationId& op) {
    return std::to_string(op.job) + "." + std::to_string(op.position);
}

} // namespace jobshop
