#pragma once

// Redfield generator for a system Hamiltonian coupled to a list of baths,
// nonequilibrium steady state and heat currents.
//
// Vectorization stacks columns: |rho>> index of rho(i, j) is i + j * d, so
// vec(A rho B) = (B^T (x) A) vec(rho).
//
// Each bath with Hermitian coupling operator S and rate function Gamma
// contributes (Lamb shift omitted)
//
//   D(rho) = S~ rho S + S rho S~^dagger - S S~ rho - rho S~^dagger S,
//
// where the filtered operator S~ has energy-basis elements
// S~_jk = S_jk Gamma(w_k - w_j).

#include <functional>
#include <string>
#include <vector>

#include "qjunction/junction.hpp"
#include "qjunction/operator.hpp"

namespace qjunction {

using RateFunction = std::function<double(double)>;

struct DissipatorSpec {
  Operator s;
  RateFunction rate;
  BathLabel label = BathLabel::left;
};

/// S~ expressed in the computational basis.
Operator filtered_operator(const DissipatorSpec& d, const EigenSystem& eig);

struct BathTerm {
  BathLabel label;
  Operator s;
  Operator s_filtered;
};

struct AssemblyOptions {
  /// Largest system dimension for which the d^2 x d^2 generator is stored.
  /// Above it the generator is only applied in operator form.
  std::size_t dense_limit = 72;
};

class Liouvillian {
 public:
  Liouvillian(Operator h, EigenSystem eig, std::vector<BathTerm> baths, ComplexMatrix generator);

  std::size_t dim() const noexcept { return h_.dim(); }
  const Operator& hamiltonian() const noexcept { return h_; }
  const EigenSystem& eigensystem() const noexcept { return eig_; }
  const std::vector<BathTerm>& baths() const noexcept { return baths_; }
  bool has_bath(BathLabel label) const;

  /// Stored d^2 x d^2 generator; empty when assembled matrix-free.
  bool dense() const noexcept { return generator_.size() > 0; }
  const ComplexMatrix& generator() const noexcept { return generator_; }

  /// -i [H, .] as a d^2 x d^2 matrix.
  ComplexMatrix coherent_block() const;
  /// One bath's dissipator as a d^2 x d^2 matrix.
  ComplexMatrix dissipator_block(BathLabel label) const;

  /// L(rho) in operator form, O(d^3).
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  ComplexMatrix apply_dissipator(BathLabel label, const ComplexMatrix& rho) const;

 private:
  const BathTerm& term(BathLabel label) const;
  std::size_t index(BathLabel label) const;

  Operator h_;
  EigenSystem eig_;
  std::vector<BathTerm> baths_;
  // S S~ and S~^dagger S per bath
  std::vector<ComplexMatrix> ss_;
  std::vector<ComplexMatrix> sts_;
  ComplexMatrix generator_;
};

Liouvillian assemble_liouvillian(const Operator& h, const std::vector<DissipatorSpec>& baths,
                                 const AssemblyOptions& options = {});

enum class NessMethod {
  automatic,       // hermitian_dense when the generator is stored, otherwise iterative
  hermitian_dense, // real LU on the Hermitian-coordinate restriction of the corrected system
  complex_dense,   // complex LU on the corrected d^2 x d^2 system
  iterative,       // preconditioned GMRES on the corrected system, matrix-free
};

struct NessOptions {
  NessMethod method = NessMethod::automatic;
  double iterative_tolerance = 1e-14;
  std::size_t gmres_restart = 80;
  std::size_t max_iterations = 4000;
  /// Energy-basis elements rho_mn with |w_m - w_n| below this window are
  /// preconditioned together with the populations by a dense block.
  double secular_window = 0.05;
  std::size_t max_block = 3000;
};

struct NessResult {
  Operator rho;
  double j_left = 0.0;
  double j_right = 0.0;
  /// || L |rho>> ||_2 after symmetrization and normalization.
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  /// || rho - rho^dagger ||_max before symmetrization.
  double asymmetry = 0.0;
  bool ill_conditioned = false;
  std::size_t iterations = 0;
  std::string method;
};

/// Solves (L + |e_0>><<1|) |rho>> = |e_0>> and evaluates both heat currents.
/// Throws NonuniqueSteadyState when the corrected system is singular.
NessResult ness_solve(const Liouvillian& l, const NessOptions& options = {});

/// Tr[D_label(rho) h], positive when heat flows into the system.
double heat_current(const Liouvillian& l, const Operator& rho, const Operator& h, BathLabel label);

struct PropagationControl {
  /// Allowed local error per unit time.
  double tolerance = 1e-10;
  double max_step = 0.5;
  /// Above this many steps the step propagator is squared instead.
  std::size_t max_vector_steps = 200000;
  /// Largest d^2 for which a dense step propagator may be formed.
  std::size_t max_dense_dim = 2500;
};

/// rho(t_final) for d|rho>>/dt = L |rho>>.  Steps with a Taylor propagator
/// whose truncation error stays below the tolerance; long horizons double
/// the step by repeated squaring of the dense step propagator.
Operator propagate(const Liouvillian& l, const Operator& rho0, double t_final,
                   const PropagationControl& control = {});

}  // namespace qjunction
