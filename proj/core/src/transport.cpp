#include "qjunction/transport.hpp"

#include <cmath>

#include "qjunction/error.hpp"

namespace qjunction {

std::vector<DissipatorSpec> rc_dissipators(const RCModel& model) {
  std::vector<DissipatorSpec> out;
  for (BathLabel label : {BathLabel::left, BathLabel::right}) {
    const BathSpec bath = model.spec.bath(label);
    out.push_back({model.s_res(label), [bath](double w) { return gamma_rc(w, bath); }, label});
  }
  return out;
}

NessResult rc_ness(const JunctionSpec& spec, const NessOptions& options, const AssemblyOptions& assembly) {
  const RCModel model = build_rc_model(spec);
  const Liouvillian l = assemble_liouvillian(model.h_s_rc, rc_dissipators(model), assembly);
  return ness_solve(l, options);
}

Rectification rectification(const JunctionSpec& spec, const NessOptions& options) {
  if (spec.left.temperature == spec.right.temperature)
    throw DomainError("rectification: needs T_L != T_R");
  Rectification r;
  r.j_forward = rc_ness(spec, options).j_left;
  r.j_reverse = rc_ness(spec.with_temperatures(spec.right.temperature, spec.left.temperature), options).j_left;
  const double sum = std::abs(r.j_forward) + std::abs(r.j_reverse);
  r.asymmetry = sum > 0.0 ? (std::abs(r.j_forward) - std::abs(r.j_reverse)) / sum : 0.0;
  return r;
}

}  // namespace qjunction
