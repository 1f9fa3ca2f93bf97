#ifndef DIAGFORGE_PROJECTION_FAMILY_HPP
#define DIAGFORGE_PROJECTION_FAMILY_HPP

#include <vector>

#include "diagforge/matrix_checks.hpp"
#include "diagforge/rational.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// One summand of a block-diagonal family: the same index window for every
// member. Every construction here conjugates 0/1 diagonals by one unitary:
// mats[k] = basis_unitary^* Q_k basis_unitary with Q_k the indicator of
// {i : slots[i] == k}. The unitary and the slot assignment are kept so the
// synthesis layer can conjugate model diagonals through the same block.
struct FamilyBlock {
  int offset = 0;
  std::vector<CMatrix> mats;  // one square matrix per member
  CMatrix basis_unitary;      // may be empty for externally supplied blocks
  std::vector<int> slots;     // member owning each model slot

  int dim() const { return mats.empty() ? 0 : static_cast<int>(mats[0].rows()); }

  bool has_model() const {
    return basis_unitary.rows() == dim() &&
           static_cast<int>(slots.size()) == dim();
  }

  // basis_unitary^* diag(values by slot) basis_unitary
  CMatrix conjugate_model_diagonal(const std::vector<Complex>& member_values)
      const;
};

// Pairwise-orthogonal projections summing to the identity, stored as a
// direct sum of blocks so large truncations stay tractable. Blocks must tile
// [0, dim) exactly.
struct ProjectionFamily {
  int members = 0;
  int dim = 0;
  std::vector<FamilyBlock> blocks;
  std::vector<BigInt> ranks;  // per member, summed over blocks

  static ProjectionFamily dense(std::vector<CMatrix> mats);

  // Blocks sorted by offset; throws unless they tile [0, dim).
  void validate() const;

  CMatrix materialize(int k) const;
  std::vector<CMatrix> materialize_all() const;
  CVector member_diagonal(int k) const;

  // Residuals decompose exactly over a direct sum, so the blockwise maximum
  // is the true family residual.
  FamilyCheck verify(double tol) const;

  // Exact traces ranks/dim.
  std::vector<Rational> traces() const;
};

// Direct sum: appends the blocks of g (shifted) to f; member counts must
// match.
ProjectionFamily family_direct_sum(const ProjectionFamily& f,
                                   const ProjectionFamily& g);

}  // namespace diagforge

#endif
