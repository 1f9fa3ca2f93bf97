// diagforge: synthesis of projection families and unitaries with prescribed
// approximate diagonals, with exact feasibility certificates.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "diagforge/carpenter.hpp"
#include "diagforge/dft.hpp"
#include "diagforge/errors.hpp"
#include "diagforge/json_io.hpp"
#include "diagforge/obstructions.hpp"
#include "diagforge/schurhorn.hpp"
#include "diagforge/synth_discrete.hpp"

using namespace diagforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitTolerance = 4;

struct Io {
  std::string input = "-";
  std::string output = "-";

  Json read() const {
    if (input == "-") {
      Json j;
      std::cin >> j;
      return j;
    }
    std::ifstream f(input);
    if (!f) throw InvalidInput("cannot open input file: " + input);
    Json j;
    f >> j;
    return j;
  }

  void write(const Json& j) const {
    if (output == "-") {
      std::cout << j.dump(2) << "\n";
      return;
    }
    std::ofstream f(output);
    if (!f) throw InvalidInput("cannot open output file: " + output);
    f << j.dump(2) << "\n";
  }
};

std::vector<double> parse_csv(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

long long dim_cap(long long flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("DIAGFORGE_MAX_DIM")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return kDefaultMaxDim;
}

void emit_error(const std::string& type, const std::string& message) {
  Json err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  std::cerr << err.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diagonal synthesis for normal operators"};
  app.require_subcommand(1);
  app.fallthrough();

  Io io;
  double eps = 0.05;
  double tol = 1e-9;
  long long max_dim_flag = 0;
  std::uint64_t seed = 0;
  app.add_option("--input", io.input, "input file, - for stdin")
      ->capture_default_str();
  app.add_option("--output", io.output, "output file, - for stdout")
      ->capture_default_str();
  app.add_option("--eps", eps, "approximation budget")->capture_default_str();
  app.add_option("--tol", tol, "verification tolerance")
      ->capture_default_str();
  app.add_option("--max-dim", max_dim_flag,
                 "model dimension cap (default 4096, or DIAGFORGE_MAX_DIM)");
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  auto* flatten = app.add_subcommand("flatten",
                                     "unitary equalizing the diagonal of a "
                                     "normal matrix at its trace");

  auto* carpenter = app.add_subcommand("carpenter", "projection synthesis");
  carpenter->require_subcommand(1);
  std::string alpha_csv, beta_csv;
  auto* c_block = carpenter->add_subcommand("block", "single block");
  c_block->add_option("--alpha", alpha_csv, "comma-separated first entries");
  c_block->add_option("--beta", beta_csv, "comma-separated bulk entries");
  auto* c_discrete =
      carpenter->add_subcommand("discrete", "eventually periodic truncation");
  auto* c_tracial = carpenter->add_subcommand("tracial", "matrix model");
  auto* c_uhf = carpenter->add_subcommand("uhf", "dyadic tower model");

  auto* synth = app.add_subcommand("synth", "diagonal synthesis");
  synth->require_subcommand(1);
  auto* s_discrete = synth->add_subcommand("discrete", "truncation model");
  auto* s_tracial = synth->add_subcommand("tracial", "matrix model");

  auto* feas = app.add_subcommand("feasibility",
                                  "exact feasibility of a step diagonal");

  auto* obstruct = app.add_subcommand("obstruct", "negative results");
  obstruct->require_subcommand(1);
  int restarts = 200, iters = 2000;
  auto* o_arveson = obstruct->add_subcommand("arveson", "3x3 residual floor");
  o_arveson->add_option("--restarts", restarts)->capture_default_str();
  o_arveson->add_option("--iters", iters)->capture_default_str();
  auto* o_square =
      obstruct->add_subcommand("square", "four-point trace obstruction");
  auto* o_contrast =
      obstruct->add_subcommand("contrast", "finite floor vs truncated success");
  o_contrast->add_option("--restarts", restarts)->capture_default_str();
  o_contrast->add_option("--iters", iters)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check emitted artifacts");
  verify->require_subcommand(1);
  auto* v_family = verify->add_subcommand("family", "projection family");
  auto* v_necessity = verify->add_subcommand("necessity", "hull membership");

  CLI11_PARSE(app, argc, argv);
  const long long cap = dim_cap(max_dim_flag);

  try {
    if (flatten->parsed()) {
      Json in = io.read();
      CMatrix n = matrix_from_json(in.at("matrix"));
      double t = in.value("tol", tol);
      FlattenResult f = flatten_constant_diagonal(n, t);
      CMatrix conj = f.unitary.adjoint() * n * f.unitary;
      Complex tau = normalized_trace(n);
      double dev = 0.0;
      for (Eigen::Index i = 0; i < conj.rows(); ++i)
        dev = std::max(dev, std::abs(conj(i, i) - tau));
      Json rep;
      rep["dim"] = static_cast<int>(n.rows());
      rep["trace"] = to_json(tau);
      rep["max_deviation"] = dev;
      rep["unitary_residual"] = unitary_residual(f.unitary);
      Json eigs = Json::array();
      for (const Complex& v : f.diag.eigenvalues) eigs.push_back(to_json(v));
      rep["eigenvalues"] = std::move(eigs);
      Json diag = Json::array();
      for (Eigen::Index i = 0; i < conj.rows(); ++i)
        diag.push_back(to_json(conj(i, i)));
      rep["diagonal"] = std::move(diag);
      rep["unitary"] = matrix_to_json(f.unitary);
      io.write(rep);
      return kExitOk;
    }

    if (c_block->parsed()) {
      std::vector<double> alpha, beta;
      if (!alpha_csv.empty()) {
        alpha = parse_csv(alpha_csv);
        beta = parse_csv(beta_csv);
      } else {
        Json in = io.read();
        for (const Json& v : in.at("alpha")) alpha.push_back(v.get<double>());
        for (const Json& v : in.at("beta")) beta.push_back(v.get<double>());
        if (in.contains("eps")) eps = in["eps"].get<double>();
      }
      CarpenterBlockResult r = carpenter_block(alpha, beta, eps, cap);
      io.write(report_carpenter_block(r));
      return kExitOk;
    }

    if (c_discrete->parsed()) {
      Json in = io.read();
      JointPartitionSpec joint = joint_partition_from_json(in);
      if (in.contains("eps")) eps = in["eps"].get<double>();
      CarpenterDiscreteResult r = carpenter_discrete(joint, eps, cap);
      io.write(report_carpenter_discrete(r));
      return kExitOk;
    }

    if (c_tracial->parsed()) {
      Json in = io.read();
      TracialPartition part = tracial_partition_from_json(in);
      if (in.contains("eps")) eps = in["eps"].get<double>();
      CarpenterTracialResult r = carpenter_tracial(part, eps, cap);
      io.write(report_carpenter_tracial(r));
      return kExitOk;
    }

    if (c_uhf->parsed()) {
      Json in = io.read();
      std::vector<std::vector<double>> cols;
      for (const Json& col : in.at("columns")) {
        std::vector<double> c;
        for (const Json& v : col) c.push_back(v.get<double>());
        cols.push_back(std::move(c));
      }
      if (in.contains("eps")) eps = in["eps"].get<double>();
      CarpenterUhfResult r = carpenter_uhf(cols, eps, cap);
      io.write(report_carpenter_uhf(r));
      return kExitOk;
    }

    if (feas->parsed()) {
      Json in = io.read();
      SpectralData n = spectral_from_json(in.at("spectrum"));
      std::vector<TargetBlock> blocks =
          target_blocks_from_json(in.at("blocks"));
      FeasibilityReport r = feasibility_partition(n, blocks);
      ThreePointCheck tp = feasibility_three_point(n, blocks);
      io.write(report_feasibility(r, tp));
      return r.feasible ? kExitOk : kExitInfeasible;
    }

    if (s_tracial->parsed()) {
      Json in = io.read();
      SpectralData n = spectral_from_json(in.at("spectrum"));
      std::vector<TargetBlock> blocks =
          target_blocks_from_json(in.at("blocks"));
      if (in.contains("eps")) eps = in["eps"].get<double>();
      SynthTracial s = synth_diagonal_tracial(n, blocks, eps, cap);
      if (!s.feasibility.feasible) {
        io.write(report_feasibility(s.feasibility, {}));
        return kExitInfeasible;
      }
      io.write(report_synth_tracial(s));
      return kExitOk;
    }

    if (s_discrete->parsed()) {
      Json in = io.read();
      SpectralData n = spectral_from_json(in.at("spectrum"));
      DiagonalSpec a = diagonal_spec_from_json(in.at("target"));
      if (in.contains("eps")) eps = in["eps"].get<double>();
      SynthDiscreteResult s = synth_diagonal_discrete(n, a, eps, cap);
      Json rep = report_synth_discrete(s, 128);
      rep["spectrum"] = spectral_to_json(n);
      io.write(rep);
      return kExitOk;
    }

    if (o_arveson->parsed()) {
      ArvesonSearchResult r = arveson_search(restarts, iters, seed);
      io.write(report_arveson(r));
      return kExitOk;
    }

    if (o_square->parsed()) {
      SquareCertificate c = square_infeasibility_certificate();
      io.write(report_square(c));
      return c.infeasible ? kExitInfeasible : kExitOk;
    }

    if (o_contrast->parsed()) {
      ContrastReport c = contrast_demo(eps, restarts, iters, seed, cap);
      io.write(report_contrast(c));
      return kExitOk;
    }

    if (v_family->parsed()) {
      Json in = io.read();
      const Json& fam_json = in.contains("family") ? in.at("family") : in;
      ProjectionFamily f = family_from_json(fam_json);
      FamilyCheck c = f.verify(tol);
      Json rep;
      rep["check"] = to_json(c);
      io.write(rep);
      return c.pass ? kExitOk : kExitTolerance;
    }

    if (v_necessity->parsed()) {
      Json in = io.read();
      SpectralData n = spectral_from_json(in.at("spectrum"));
      std::vector<Complex> diag;
      for (const Json& v : in.at("diagonal"))
        diag.push_back(complex_from_json(v));
      NecessityReport r = check_necessity(diag, n, tol);
      io.write(report_necessity(r));
      return r.ok ? kExitOk : kExitInfeasible;
    }

    emit_error("usage", "no subcommand executed");
    return kExitInvalid;
  } catch (const NecessityViolated& e) {
    Json err;
    err["error"]["type"] = "NecessityViolated";
    err["error"]["message"] = e.what();
    err["error"]["point"] =
        Json::array({e.violating_re, e.violating_im});
    err["error"]["distance"] = e.distance;
    std::cerr << err.dump(2) << "\n";
    return kExitInfeasible;
  } catch (const ToleranceUnreachable& e) {
    emit_error("ToleranceUnreachable", e.what());
    return kExitTolerance;
  } catch (const ModelTooCoarse& e) {
    emit_error("ModelTooCoarse", e.what());
    return kExitTolerance;
  } catch (const InvalidInput& e) {
    emit_error("InvalidInput", e.what());
    return kExitInvalid;
  } catch (const Json::exception& e) {
    emit_error("ParseError", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    emit_error("Internal", e.what());
    return 1;
  }
}
