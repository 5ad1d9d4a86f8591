#pragma once

#include <string>

namespace capnet {

enum class BoundKind { ExactDirichlet, DirichletUpper, ThomsonLower, BkExact, BkMc };

const char* bound_kind_name(BoundKind k);

/// Capacity value with provenance. `residual_or_stderr` is the solver
/// residual for exact kinds and the standard error for bk-mc.
struct CapacityReport {
    double value = 0.0;
    BoundKind kind = BoundKind::ExactDirichlet;
    double residual_or_stderr = 0.0;
    std::string meta;
};

}  // namespace capnet
