#pragma once

// Reaction-coordinate transport: the RC junction solved with Redfield
// residual baths.

#include <vector>

#include "qjunction/junction.hpp"
#include "qjunction/rc_embedding.hpp"
#include "qjunction/redfield.hpp"

namespace qjunction {

/// Residual-bath dissipators (x_a, Gamma_RC of bath a) for an RC model.
std::vector<DissipatorSpec> rc_dissipators(const RCModel& model);

/// Builds the RC model, assembles its Liouvillian and solves for the NESS.
NessResult rc_ness(const JunctionSpec& spec, const NessOptions& options = {},
                   const AssemblyOptions& assembly = {});

struct Rectification {
  double j_forward = 0.0;
  double j_reverse = 0.0;
  double asymmetry = 0.0;
};

/// Left-bath current with (T_L, T_R) and with the temperatures swapped;
/// asymmetry = (|j_f| - |j_r|) / (|j_f| + |j_r|), zero when both vanish.
Rectification rectification(const JunctionSpec& spec, const NessOptions& options = {});

}  // namespace qjunction
