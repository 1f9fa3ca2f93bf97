#ifndef DIAGFORGE_SPECTRAL_DATA_HPP
#define DIAGFORGE_SPECTRAL_DATA_HPP

#include <vector>

#include "diagforge/rational.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// A diagonal ell-infinity element: finite head, then the tail pattern
// repeated cyclically forever. The distinct tail values model the essential
// spectrum of the diagonal operator.
struct DiagonalSpec {
  std::vector<Complex> head;
  std::vector<Complex> tail_pattern;

  Complex at(long i) const;
  std::vector<Complex> truncate(int m) const;
  std::vector<Complex> essential_values() const;  // distinct tail entries
  void validate() const;
};

// n stacked real-valued specs forming a partition of unity pointwise.
struct JointPartitionSpec {
  std::vector<DiagonalSpec> specs;

  int members() const { return static_cast<int>(specs.size()); }
  int head_length() const;
  int period() const;
  void validate() const;  // real entries in [0,1], pointwise sums 1 (1e-12)
};

// Matrix-model partition data: d diagonal cells with one value per member,
// plus exact trace targets.
struct TracialPartition {
  int dim = 0;                          // d
  std::vector<std::vector<double>> columns;  // columns[k][i] in [0,1]
  std::vector<Rational> trace_targets;

  int members() const { return static_cast<int>(columns.size()); }
  void validate() const;  // sums to 1 pointwise; targets sum to 1 exactly
};

// A normal operator given by spectral data. Discrete model: eigenvalues of
// finite multiplicity plus the essential spectrum. Tracial model: values
// with exact trace weights.
struct SpectralData {
  enum class Model { Discrete, Tracial };
  Model model = Model::Discrete;

  // discrete
  std::vector<std::pair<Complex, int>> finite_eigs;
  std::vector<Complex> essential_values;

  // tracial
  std::vector<Complex> values;
  std::vector<Rational> weights;

  void validate() const;
  std::vector<Complex> hull_vertices() const;  // essential (discrete) / values
  Complex trace() const;  // tracial only: sum w_k z_k
};

}  // namespace diagforge

#endif
