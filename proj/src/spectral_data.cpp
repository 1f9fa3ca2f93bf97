#include "diagforge/spectral_data.hpp"

#include <cmath>
#include <set>

#include "diagforge/errors.hpp"

namespace diagforge {

Complex DiagonalSpec::at(long i) const {
  const long h = static_cast<long>(head.size());
  if (i < h) return head[i];
  const long l = static_cast<long>(tail_pattern.size());
  return tail_pattern[(i - h) % l];
}

std::vector<Complex> DiagonalSpec::truncate(int m) const {
  if (m < static_cast<int>(head.size()))
    throw InvalidInput("truncation shorter than the head");
  std::vector<Complex> out(m);
  for (int i = 0; i < m; ++i) out[i] = at(i);
  return out;
}

std::vector<Complex> DiagonalSpec::essential_values() const {
  std::vector<Complex> vals;
  for (const Complex& v : tail_pattern) {
    bool seen = false;
    for (const Complex& w : vals)
      if (w == v) {
        seen = true;
        break;
      }
    if (!seen) vals.push_back(v);
  }
  return vals;
}

void DiagonalSpec::validate() const {
  if (tail_pattern.empty())
    throw InvalidInput("diagonal spec needs a nonempty tail pattern");
}

int JointPartitionSpec::head_length() const {
  return specs.empty() ? 0 : static_cast<int>(specs[0].head.size());
}

int JointPartitionSpec::period() const {
  return specs.empty() ? 0 : static_cast<int>(specs[0].tail_pattern.size());
}

void JointPartitionSpec::validate() const {
  if (specs.empty()) throw InvalidInput("joint partition needs members");
  const size_t h = specs[0].head.size();
  const size_t l = specs[0].tail_pattern.size();
  for (const DiagonalSpec& s : specs) {
    s.validate();
    if (s.head.size() != h || s.tail_pattern.size() != l)
      throw DimensionMismatch("joint partition members differ in shape");
  }
  auto check_sum = [&](auto getter, size_t count, const char* what) {
    for (size_t i = 0; i < count; ++i) {
      double sum = 0.0;
      for (const DiagonalSpec& s : specs) {
        Complex v = getter(s, i);
        if (std::abs(v.imag()) > 1e-12)
          throw InfeasibleInput("joint partition entries must be real");
        if (v.real() < -1e-12 || v.real() > 1.0 + 1e-12)
          throw InfeasibleInput("joint partition entries must lie in [0,1]");
        sum += v.real();
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw InfeasibleInput(std::string("joint partition ") + what +
                              " sums differ from 1");
    }
  };
  check_sum([](const DiagonalSpec& s, size_t i) { return s.head[i]; }, h,
            "head");
  check_sum([](const DiagonalSpec& s, size_t i) { return s.tail_pattern[i]; },
            l, "tail");
}

void TracialPartition::validate() const {
  if (dim <= 0) throw InvalidInput("tracial partition needs dim >= 1");
  if (columns.empty()) throw InvalidInput("tracial partition needs members");
  if (trace_targets.size() != columns.size())
    throw DimensionMismatch("one trace target per member required");
  for (const auto& col : columns) {
    if (static_cast<int>(col.size()) != dim)
      throw DimensionMismatch("column length must equal dim");
    for (double v : col)
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw InfeasibleInput("column entries must lie in [0,1]");
  }
  for (int i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (const auto& col : columns) sum += col[i];
    if (std::abs(sum - 1.0) > 1e-12)
      throw InfeasibleInput("columns must sum to 1 pointwise");
  }
  Rational total = 0;
  for (const Rational& t : trace_targets) total += t;
  if (total != Rational(1))
    throw InfeasibleInput("trace targets must sum to 1 exactly");
}

void SpectralData::validate() const {
  if (model == Model::Discrete) {
    if (essential_values.empty())
      throw InvalidInput("discrete spectral data needs essential values");
    for (const auto& [v, mult] : finite_eigs)
      if (mult <= 0) throw InvalidInput("finite eigenvalue multiplicity must be positive");
  } else {
    if (values.empty() || values.size() != weights.size())
      throw InvalidInput("tracial spectral data needs matched values/weights");
    Rational total = 0;
    for (const Rational& w : weights) {
      if (w < Rational(0)) throw InvalidInput("weights must be nonnegative");
      total += w;
    }
    if (total != Rational(1))
      throw InvalidInput("weights must sum to 1 exactly");
  }
}

std::vector<Complex> SpectralData::hull_vertices() const {
  return model == Model::Discrete ? essential_values : values;
}

Complex SpectralData::trace() const {
  if (model != Model::Tracial)
    throw InvalidInput("trace defined for the tracial model");
  Complex t = 0.0;
  for (size_t k = 0; k < values.size(); ++k)
    t += weights[k].to_double() * values[k];
  return t;
}

}  // namespace diagforge
