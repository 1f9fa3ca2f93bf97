#ifndef DIAGFORGE_SYNTH_DISCRETE_HPP
#define DIAGFORGE_SYNTH_DISCRETE_HPP

#include <string>
#include <vector>

#include "diagforge/schurhorn.hpp"
#include "diagforge/spectral_data.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

struct SynthDiscreteResult {
  int truncation_dim = 0;  // M
  // N_M: finite eigenvalues first (declared order, with multiplicity), then
  // essential-value slots in construction order.
  std::vector<Complex> model_diagonal;
  CMatrix unitary;                         // M x M, diag(U* N_M U) ~ target
  std::vector<Complex> realized_diagonal;  // in spec order
  double residual = 0.0;
  NecessityReport necessity;  // of the realized diagonal, against conv(sigma_e)
  double snap_cost = 0.0;     // value grid used for the cover
  bool identity_shortcut = false;
  std::vector<std::string> notes;
};

// Realizes the target diagonal spec as diag(U* N_M U) at a truncation chosen
// by the construction. Requires every target value within 1e-9 of the hull
// of the essential spectrum; throws NecessityViolated otherwise.
SynthDiscreteResult synth_diagonal_discrete(const SpectralData& n,
                                            const DiagonalSpec& a, double eps,
                                            long long max_dim = kDefaultMaxDim);

}  // namespace diagforge

#endif
