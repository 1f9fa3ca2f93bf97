#ifndef DIAGFORGE_JSON_IO_HPP
#define DIAGFORGE_JSON_IO_HPP

#include <json.hpp>

#include "diagforge/carpenter.hpp"
#include "diagforge/obstructions.hpp"
#include "diagforge/projection_family.hpp"
#include "diagforge/schurhorn.hpp"
#include "diagforge/spectral_data.hpp"
#include "diagforge/synth_discrete.hpp"
#include "diagforge/types.hpp"

namespace diagforge {

// Insertion-ordered documents keep reports byte-stable across runs.
using Json = nlohmann::ordered_json;

// complex <-> [re, im]; each part is a number or a "p/q" string
Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json to_json(const Rational& q);  // "p/q"
Rational rational_from_json(const Json& j);

Json matrix_to_json(const CMatrix& m);  // row-major nested arrays
CMatrix matrix_from_json(const Json& j);

Json to_json(const FamilyCheck& c);

Json family_to_json(const ProjectionFamily& f);
ProjectionFamily family_from_json(const Json& j);  // blocks or dense members

Json diagonal_spec_to_json(const DiagonalSpec& s);
DiagonalSpec diagonal_spec_from_json(const Json& j);
JointPartitionSpec joint_partition_from_json(const Json& j);
TracialPartition tracial_partition_from_json(const Json& j);

Json spectral_to_json(const SpectralData& n);
SpectralData spectral_from_json(const Json& j);

std::vector<TargetBlock> target_blocks_from_json(const Json& j);

// report builders used by the command line
Json report_carpenter_block(const CarpenterBlockResult& r);
Json report_carpenter_discrete(const CarpenterDiscreteResult& r);
Json report_carpenter_tracial(const CarpenterTracialResult& r);
Json report_carpenter_uhf(const CarpenterUhfResult& r);
Json report_feasibility(const FeasibilityReport& r, const ThreePointCheck& tp);
Json report_synth_tracial(const SynthTracial& s);
Json report_synth_discrete(const SynthDiscreteResult& s, int unitary_limit);
Json report_arveson(const ArvesonSearchResult& r);
Json report_square(const SquareCertificate& c);
Json report_contrast(const ContrastReport& c);
Json report_necessity(const NecessityReport& r);

}  // namespace diagforge

#endif
