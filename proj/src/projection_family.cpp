#include "diagforge/projection_family.hpp"

#include <algorithm>

#include "diagforge/errors.hpp"

namespace diagforge {

CMatrix FamilyBlock::conjugate_model_diagonal(
    const std::vector<Complex>& member_values) const {
  if (!has_model())
    throw InvalidInput("family block carries no model basis");
  const int d = dim();
  CVector diag(d);
  for (int i = 0; i < d; ++i) diag(i) = member_values[slots[i]];
  return basis_unitary.adjoint() * diag.asDiagonal() * basis_unitary;
}

ProjectionFamily ProjectionFamily::dense(std::vector<CMatrix> mats) {
  ProjectionFamily f;
  if (mats.empty()) throw InvalidInput("empty projection family");
  f.members = static_cast<int>(mats.size());
  f.dim = static_cast<int>(mats[0].rows());
  FamilyBlock blk;
  blk.offset = 0;
  blk.mats = std::move(mats);
  f.blocks.push_back(std::move(blk));
  f.validate();
  return f;
}

void ProjectionFamily::validate() const {
  if (members <= 0) throw InvalidInput("projection family has no members");
  std::vector<std::pair<int, int>> spans;
  for (const FamilyBlock& b : blocks) {
    if (static_cast<int>(b.mats.size()) != members)
      throw DimensionMismatch("family block with wrong member count");
    const int d = b.dim();
    for (const CMatrix& m : b.mats)
      if (m.rows() != d || m.cols() != d)
        throw DimensionMismatch("family block matrices differ in dimension");
    spans.emplace_back(b.offset, b.offset + d);
  }
  std::sort(spans.begin(), spans.end());
  int cursor = 0;
  for (auto [lo, hi] : spans) {
    if (lo != cursor) throw DimensionMismatch("family blocks do not tile");
    cursor = hi;
  }
  if (cursor != dim) throw DimensionMismatch("family blocks do not reach dim");
}

CMatrix ProjectionFamily::materialize(int k) const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const FamilyBlock& b : blocks)
    out.block(b.offset, b.offset, b.dim(), b.dim()) = b.mats[k];
  return out;
}

std::vector<CMatrix> ProjectionFamily::materialize_all() const {
  std::vector<CMatrix> out;
  out.reserve(members);
  for (int k = 0; k < members; ++k) out.push_back(materialize(k));
  return out;
}

CVector ProjectionFamily::member_diagonal(int k) const {
  CVector d = CVector::Zero(dim);
  for (const FamilyBlock& b : blocks)
    d.segment(b.offset, b.dim()) = b.mats[k].diagonal();
  return d;
}

FamilyCheck ProjectionFamily::verify(double tol) const {
  validate();
  FamilyCheck out;
  out.tol = tol;
  for (const FamilyBlock& b : blocks) {
    FamilyCheck c = verify_projection_family(b.mats, tol);
    out.hermitian = std::max(out.hermitian, c.hermitian);
    out.idempotent = std::max(out.idempotent, c.idempotent);
    out.orthogonal = std::max(out.orthogonal, c.orthogonal);
    out.completeness = std::max(out.completeness, c.completeness);
  }
  out.pass = out.worst() <= tol;
  return out;
}

std::vector<Rational> ProjectionFamily::traces() const {
  std::vector<Rational> t;
  t.reserve(ranks.size());
  for (const BigInt& r : ranks) t.emplace_back(r, BigInt(dim));
  return t;
}

ProjectionFamily family_direct_sum(const ProjectionFamily& f,
                                   const ProjectionFamily& g) {
  if (f.members != g.members)
    throw DimensionMismatch("direct sum of families with different members");
  ProjectionFamily out = f;
  for (FamilyBlock b : g.blocks) {
    b.offset += f.dim;
    out.blocks.push_back(std::move(b));
  }
  out.dim = f.dim + g.dim;
  if (out.ranks.size() == g.ranks.size())
    for (size_t k = 0; k < g.ranks.size(); ++k) out.ranks[k] += g.ranks[k];
  return out;
}

}  // namespace diagforge
