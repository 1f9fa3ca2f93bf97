#include "diagforge/json_io.hpp"

#include "diagforge/errors.hpp"

namespace diagforge {

namespace {

double real_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
  if (j.is_number()) return j.get<double>();
  throw InvalidInput("expected a number or a \"p/q\" string");
}

}  // namespace

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number() || j.is_string()) return Complex(real_from_json(j), 0.0);
  if (!j.is_array() || j.size() != 2)
    throw InvalidInput("complex values are two-element arrays [re, im]");
  return Complex(real_from_json(j[0]), real_from_json(j[1]));
}

Json to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw InvalidInput("rationals are \"p/q\" strings");
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("matrices are nonempty nested arrays");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw InvalidInput("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Json to_json(const FamilyCheck& c) {
  Json j;
  j["hermitian"] = c.hermitian;
  j["idempotent"] = c.idempotent;
  j["orthogonal"] = c.orthogonal;
  j["completeness"] = c.completeness;
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  return j;
}

Json family_to_json(const ProjectionFamily& f) {
  Json j;
  j["members"] = f.members;
  j["dim"] = f.dim;
  Json blocks = Json::array();
  for (const FamilyBlock& b : f.blocks) {
    Json jb;
    jb["offset"] = b.offset;
    Json mats = Json::array();
    for (const CMatrix& m : b.mats) mats.push_back(matrix_to_json(m));
    jb["projections"] = std::move(mats);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  Json traces = Json::array();
  for (const Rational& t : f.traces()) traces.push_back(to_json(t));
  if (!f.ranks.empty()) j["traces"] = std::move(traces);
  return j;
}

ProjectionFamily family_from_json(const Json& j) {
  ProjectionFamily f;
  if (j.contains("projections")) {
    // dense form: a flat list of member matrices
    std::vector<CMatrix> mats;
    for (const Json& m : j.at("projections")) mats.push_back(matrix_from_json(m));
    return ProjectionFamily::dense(std::move(mats));
  }
  f.members = j.at("members").get<int>();
  f.dim = j.at("dim").get<int>();
  for (const Json& jb : j.at("blocks")) {
    FamilyBlock b;
    b.offset = jb.at("offset").get<int>();
    for (const Json& m : jb.at("projections"))
      b.mats.push_back(matrix_from_json(m));
    f.blocks.push_back(std::move(b));
  }
  f.validate();
  return f;
}

Json diagonal_spec_to_json(const DiagonalSpec& s) {
  Json j;
  Json head = Json::array();
  for (const Complex& v : s.head) head.push_back(to_json(v));
  Json tail = Json::array();
  for (const Complex& v : s.tail_pattern) tail.push_back(to_json(v));
  j["head"] = std::move(head);
  j["tail_pattern"] = std::move(tail);
  return j;
}

DiagonalSpec diagonal_spec_from_json(const Json& j) {
  DiagonalSpec s;
  if (j.contains("head"))
    for (const Json& v : j.at("head")) s.head.push_back(complex_from_json(v));
  for (const Json& v : j.at("tail_pattern"))
    s.tail_pattern.push_back(complex_from_json(v));
  s.validate();
  return s;
}

JointPartitionSpec joint_partition_from_json(const Json& j) {
  JointPartitionSpec joint;
  for (const Json& s : j.at("specs"))
    joint.specs.push_back(diagonal_spec_from_json(s));
  joint.validate();
  return joint;
}

TracialPartition tracial_partition_from_json(const Json& j) {
  TracialPartition p;
  p.dim = j.at("dim").get<int>();
  for (const Json& col : j.at("columns")) {
    std::vector<double> c;
    for (const Json& v : col) c.push_back(real_from_json(v));
    p.columns.push_back(std::move(c));
  }
  for (const Json& t : j.at("trace_targets"))
    p.trace_targets.push_back(rational_from_json(t));
  p.validate();
  return p;
}

Json spectral_to_json(const SpectralData& n) {
  Json j;
  if (n.model == SpectralData::Model::Discrete) {
    Json eigs = Json::array();
    for (const auto& [v, mult] : n.finite_eigs)
      eigs.push_back(Json::array({to_json(v), mult}));
    j["finite_eigs"] = std::move(eigs);
    Json ess = Json::array();
    for (const Complex& v : n.essential_values) ess.push_back(to_json(v));
    j["essential"] = std::move(ess);
  } else {
    Json vals = Json::array();
    for (const Complex& v : n.values) vals.push_back(to_json(v));
    j["values"] = std::move(vals);
    Json ws = Json::array();
    for (const Rational& w : n.weights) ws.push_back(to_json(w));
    j["weights"] = std::move(ws);
  }
  return j;
}

SpectralData spectral_from_json(const Json& j) {
  SpectralData n;
  if (j.contains("essential")) {
    n.model = SpectralData::Model::Discrete;
    if (j.contains("finite_eigs"))
      for (const Json& e : j.at("finite_eigs"))
        n.finite_eigs.emplace_back(complex_from_json(e.at(0)),
                                   e.at(1).get<int>());
    for (const Json& v : j.at("essential"))
      n.essential_values.push_back(complex_from_json(v));
  } else {
    n.model = SpectralData::Model::Tracial;
    for (const Json& v : j.at("values"))
      n.values.push_back(complex_from_json(v));
    for (const Json& w : j.at("weights"))
      n.weights.push_back(rational_from_json(w));
  }
  n.validate();
  return n;
}

std::vector<TargetBlock> target_blocks_from_json(const Json& j) {
  std::vector<TargetBlock> blocks;
  for (const Json& b : j) {
    TargetBlock t;
    t.value = complex_from_json(b.at("value"));
    t.weight = rational_from_json(b.at("weight"));
    blocks.push_back(std::move(t));
  }
  return blocks;
}

namespace {

Json diag_to_json(const std::vector<Complex>& d) {
  Json out = Json::array();
  for (const Complex& v : d) out.push_back(to_json(v));
  return out;
}

}  // namespace

Json report_carpenter_block(const CarpenterBlockResult& r) {
  Json j;
  j["dim"] = r.dim;
  j["diag_residual"] = r.diag_residual;
  j["check"] = to_json(r.check);
  Json plan;
  plan["n1"] = r.plan.n1.str();
  plan["n2"] = r.plan.n2.str();
  plan["n0"] = r.plan.n0.str();
  plan["shortcut"] = r.plan.shortcut;
  plan["err_alpha"] = r.plan.err_alpha;
  plan["err_beta"] = r.plan.err_beta;
  j["plan"] = std::move(plan);
  j["zero_members"] = r.zero_members;
  j["family"] = family_to_json(r.family);
  return j;
}

Json report_carpenter_discrete(const CarpenterDiscreteResult& r) {
  Json j;
  j["truncation_dim"] = r.truncation_dim;
  j["periods"] = r.periods;
  j["diag_residual"] = r.diag_residual;
  j["check"] = to_json(r.check);
  j["stage_budget"] = r.stage_budget;
  Json costs;
  costs["clamp"] = r.stage_costs.clamp;
  costs["essential_snap"] = r.stage_costs.essential_snap;
  costs["cover_snap"] = r.stage_costs.cover_snap;
  costs["block"] = r.stage_costs.block;
  costs["assembly"] = r.stage_costs.assembly;
  j["stage_costs"] = std::move(costs);
  j["index_map"] = r.index_map;
  j["notes"] = r.notes;
  j["family"] = family_to_json(r.family);
  return j;
}

Json report_carpenter_tracial(const CarpenterTracialResult& r) {
  Json j;
  j["model_dim"] = r.model_dim;
  j["diag_residual"] = r.diag_residual;
  j["exact_model"] = r.exact_model;
  j["check"] = to_json(r.check);
  Json ledger = Json::array();
  for (const TraceLedgerEntry& e : r.trace_ledger) {
    Json je;
    je["target"] = to_json(e.target);
    je["achieved"] = to_json(e.achieved);
    je["deviation"] = e.deviation;
    je["exact"] = e.exact;
    ledger.push_back(std::move(je));
  }
  j["trace_ledger"] = std::move(ledger);
  j["surrogates"] = r.surrogates;
  j["family"] = family_to_json(r.family);
  return j;
}

Json report_carpenter_uhf(const CarpenterUhfResult& r) {
  Json j;
  j["level"] = r.level;
  j["base_level"] = r.base_level;
  j["model_dim"] = r.family.dim;
  j["diag_residual"] = r.diag_residual;
  j["check"] = to_json(r.check);
  Json traces = Json::array();
  for (const Rational& t : r.traces) traces.push_back(to_json(t));
  j["traces"] = std::move(traces);
  j["zero_members"] = r.zero_members;
  j["family"] = family_to_json(r.family);
  return j;
}

Json report_feasibility(const FeasibilityReport& r, const ThreePointCheck& tp) {
  Json j;
  j["status"] = r.feasible ? "feasible" : "infeasible";
  if (r.feasible) {
    Json w = Json::array();
    for (const auto& row : r.witness) {
      Json jr = Json::array();
      for (const Rational& g : row) jr.push_back(to_json(g));
      w.push_back(std::move(jr));
    }
    j["witness"] = std::move(w);
  } else {
    Json cert;
    Json dual = Json::array();
    for (const Rational& y : r.farkas) dual.push_back(to_json(y));
    cert["dual"] = std::move(dual);
    cert["pairing"] = to_json(r.pairing);
    j["certificate"] = std::move(cert);
  }
  if (tp.applicable) {
    Json jt;
    jt["feasible"] = tp.feasible;
    jt["trace_match"] = tp.trace_match;
    jt["in_hull"] = tp.in_hull;
    j["three_point"] = std::move(jt);
  }
  return j;
}

Json report_synth_tracial(const SynthTracial& s) {
  Json j;
  j["status"] = "synthesized";
  j["model_dim"] = s.model_dim;
  j["residual"] = s.residual;
  j["exact_gamma"] = s.exact_gamma;
  Json cells = Json::array();
  for (const SynthCell& c : s.cells) {
    Json jc;
    jc["offset"] = c.offset;
    jc["size"] = c.size;
    jc["counts"] = c.counts;
    jc["target"] = to_json(c.target);
    jc["realized"] = to_json(c.realized);
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  j["diagonal"] = diag_to_json(s.diagonal);
  Json ledger = Json::array();
  for (const SynthTraceEntry& e : s.spectral_ledger) {
    Json je;
    je["target"] = to_json(e.target);
    je["achieved"] = to_json(e.achieved);
    je["exact"] = e.exact;
    ledger.push_back(std::move(je));
  }
  j["spectral_ledger"] = std::move(ledger);
  j["witness"] = report_feasibility(s.feasibility, {})["witness"];
  return j;
}

Json report_synth_discrete(const SynthDiscreteResult& s, int unitary_limit) {
  Json j;
  j["truncation_dim"] = s.truncation_dim;
  j["residual"] = s.residual;
  j["snap_cost"] = s.snap_cost;
  j["identity_shortcut"] = s.identity_shortcut;
  j["model_diagonal"] = diag_to_json(s.model_diagonal);
  j["diagonal"] = diag_to_json(s.realized_diagonal);
  j["necessity"] = report_necessity(s.necessity);
  if (s.truncation_dim <= unitary_limit)
    j["unitary"] = matrix_to_json(s.unitary);
  else
    j["unitary_omitted"] = true;
  j["notes"] = s.notes;
  return j;
}

Json report_arveson(const ArvesonSearchResult& r) {
  Json j;
  j["floor"] = r.floor;
  j["seed"] = r.seed;
  j["restarts"] = r.restarts;
  j["iters"] = r.iters;
  j["best_unitary"] = matrix_to_json(r.best_unitary);
  return j;
}

Json report_square(const SquareCertificate& c) {
  Json j;
  j["status"] = c.infeasible ? "infeasible" : "feasible";
  Json cert;
  Json dual = Json::array();
  for (const Rational& y : c.farkas) dual.push_back(to_json(y));
  cert["dual"] = std::move(dual);
  cert["pairing"] = to_json(c.pairing);
  j["certificate"] = std::move(cert);
  Json direct;
  direct["forced_weight"] = to_json(c.forced_weight);
  direct["available_weight"] = to_json(c.available_weight);
  j["direct_argument"] = std::move(direct);
  return j;
}

Json report_contrast(const ContrastReport& c) {
  Json j;
  j["carpenter_residual"] = c.carpenter_residual;
  j["carpenter_dim"] = c.carpenter_dim;
  j["synthesis_residual"] = c.synthesis_residual;
  j["synthesis_dim"] = c.synthesis_dim;
  j["floor"] = c.floor;
  j["floor_exceeds_residuals"] = c.floor_exceeds_residuals;
  j["notes"] = c.notes;
  return j;
}

Json report_necessity(const NecessityReport& r) {
  Json j;
  j["inside"] = r.ok;
  j["worst_point"] = to_json(r.worst_point);
  j["worst_distance"] = r.worst_distance;
  return j;
}

}  // namespace diagforge
