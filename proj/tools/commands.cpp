#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "equitile/analysis.hpp"
#include "equitile/io.hpp"
#include "equitile/partition.hpp"
#include "equitile/rectangular.hpp"
#include "equitile/triangularize.hpp"

namespace equitile::cli {

namespace fs = std::filesystem;
using nlohmann::json;

double tolerance_from_environment() {
  const char* raw = std::getenv("EQUITILE_TOL");
  if (raw == nullptr || *raw == '\0') return kDefaultTolerance;
  const std::string text(raw);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value) ||
      !(value > 0.0)) {
    throw InvalidArgument("EQUITILE_TOL must be a positive finite number, got '" + text + "'");
  }
  return value;
}

namespace {

struct Common {
  std::string matrix;
  std::string partition;
  std::string weights;
  std::optional<double> tol;
};

struct RefineArgs {
  std::string matrix;
  std::string initial;
  std::string weights;
  std::optional<double> tol;
};

struct CheckArgs {
  Common in;
  std::string side = "front";
  bool epsilon = false;
  bool regular = false;
};

struct TransformArgs {
  Common in;
  std::string phases = "auto";
  std::vector<std::string> emit;
  std::vector<double> alphas;
  std::string out_dir;
};

struct RectArgs {
  std::string matrix;
  std::string structure;
  std::string wminus;
  std::string wplus;
  std::string out_dir;
  std::optional<double> tol;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const char* format_name(io::MatrixFormat f) {
  return f == io::MatrixFormat::array ? "array" : "coordinate";
}

const char* field_name(io::MatrixField f) {
  switch (f) {
    case io::MatrixField::real: return "real";
    case io::MatrixField::complex: return "complex";
    case io::MatrixField::integer: return "integer";
  }
  return "?";
}

json file_digest(const std::string& path) {
  return {{"path", path}, {"fnv1a64", io::fnv1a64_hex(io::read_text(path))}};
}

struct LoadedMatrix {
  Matrix a;
  json digest;
};

LoadedMatrix load_matrix(const std::string& path) {
  io::MatrixFile file = io::read_matrix_market(fs::path(path));
  json d = file_digest(path);
  d["rows"] = file.payload.rows();
  d["cols"] = file.payload.cols();
  d["format"] = format_name(file.format);
  d["field"] = field_name(file.field);
  return {std::move(file.payload), std::move(d)};
}

LoadedMatrix load_square(const std::string& path) {
  LoadedMatrix m = load_matrix(path);
  if (m.a.rows() != m.a.cols()) {
    throw InvalidArgument("matrix in " + path + " is " + std::to_string(m.a.rows()) + "x" +
                          std::to_string(m.a.cols()) + ", expected square");
  }
  return m;
}

Partition load_partition(const std::string& path, Index n, json& inputs) {
  Partition p = io::partition_from_json(io::read_json(path));
  inputs["partition"] = file_digest(path);
  if (p.size() != n) {
    throw InvalidArgument("partition covers " + std::to_string(p.size()) +
                          " indices but the matrix has size " + std::to_string(n));
  }
  return p;
}

WeightedIndicator load_indicator(const Common& c, const Matrix& a, json& inputs) {
  Partition p = load_partition(c.partition, a.rows(), inputs);
  if (c.weights.empty()) return WeightedIndicator::unit(std::move(p));
  Vector w = io::complex_vector_from_json(io::read_json(c.weights));
  inputs["weights"] = file_digest(c.weights);
  return WeightedIndicator(std::move(p), std::move(w));
}

json complex_matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json deviation_report_to_json(const DeviationReport& r) {
  return {{"frobenius", r.frobenius},
          {"spectral", r.spectral},
          {"nuclear", r.nuclear},
          {"nonzero_columns", r.nonzero_columns},
          {"per_block", io::real_matrix_to_json(r.per_block_norms)}};
}

double frobenius(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

json command_echo(const std::string& name, const std::vector<std::string>& args) {
  return {{"name", name}, {"args", args}};
}

double resolve_tol(const std::optional<double>& flag) {
  if (!flag) return tolerance_from_environment();
  if (!std::isfinite(*flag) || !(*flag > 0.0)) {
    throw InvalidArgument("--tol must be a positive finite number");
  }
  return *flag;
}

void emit(json& report, const fs::path& dir, const std::string& name, const Matrix& m) {
  const fs::path path = dir / (name + ".mtx");
  io::write_matrix_market(path, m);
  report["outputs"].push_back({{"name", name}, {"path", path.string()}});
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_refine(const RefineArgs& args, std::ostream& out) {
  const double tol = resolve_tol(args.tol);
  const Matrix a = load_square(args.matrix).a;
  json unused;
  const Partition initial = args.initial.empty() ? Partition::single_cell(a.rows())
                                                 : load_partition(args.initial, a.rows(), unused);
  RefinementOptions options;
  options.color_tol = tol;
  Partition result;
  if (args.weights.empty()) {
    result = coarsest_front_equitable_refinement(a, initial, options);
  } else {
    const Vector w = io::complex_vector_from_json(io::read_json(args.weights));
    result = weighted_refinement(a, w, initial, options);
  }
  print(out, io::partition_to_json(result.canonical()));
  return kSuccess;
}

int cmd_check(const CheckArgs& args, const std::vector<std::string>& argv, std::ostream& out) {
  const Clock clock;
  const double tol = resolve_tol(args.in.tol);
  if (args.side != "front" && args.side != "rear") {
    throw InvalidArgument("--side must be front or rear");
  }
  const Side side = args.side == "front" ? Side::front : Side::rear;
  LoadedMatrix m = load_square(args.in.matrix);
  json inputs = {{"matrix", m.digest}};
  const WeightedIndicator wi = load_indicator(args.in, m.a, inputs);
  const EquitabilityVerdict v = check_equitable(m.a, wi, side, tol);

  json report = {{"command", command_echo("check", argv)},
                 {"inputs", inputs},
                 {"partition", io::partition_to_json(wi.partition())},
                 {"side", to_string(side)},
                 {"tolerance", tol},
                 {"is_equitable", v.is_equitable},
                 {"max_residual", v.max_residual},
                 {"per_block", io::real_matrix_to_json(v.per_block_residuals)}};
  if (args.epsilon) report["epsilon"] = epsilon_equitability(m.a, wi.partition());
  if (args.regular) report["regular"] = check_regular_equivalence(m.a, wi.partition(), tol);
  report["timing"] = {{"seconds", clock.seconds()}};
  print(out, report);
  return v.is_equitable ? kSuccess : kNegative;
}

std::optional<std::vector<Phase>> load_phases(const std::string& spec, json& inputs) {
  if (spec == "auto") return std::nullopt;
  inputs["phases"] = file_digest(spec);
  return io::phases_from_json(io::read_json(spec));
}

// Lifts eigenvectors of E back to A; exact only when D⁻ vanishes.
json emit_eigvecs(json& report, const fs::path& dir, const Matrix& a,
                  const TriangularizationResult& r) {
  const Index k = r.num_cells();
  const Index n = r.size();
  Eigen::ComplexEigenSolver<Matrix> solver(r.E, true);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver failed on E");
  Matrix vecs(n, k);
  json residuals = json::array();
  std::vector<Complex> values;
  for (Index j = 0; j < k; ++j) {
    Vector z = Vector::Zero(n);
    z.head(k) = solver.eigenvectors().col(j);
    const Vector x = recover_eigenvector(r, z);
    const Complex lambda = solver.eigenvalues()(j);
    vecs.col(j) = x;
    values.push_back(lambda);
    residuals.push_back((a * x - lambda * x).norm() / std::max(x.norm(), 1e-300));
  }
  emit(report, dir, "eigvecs", vecs);
  return {{"eigenvalues", io::complex_list_to_json(values)}, {"residuals", residuals}};
}

int cmd_transform(const TransformArgs& args, const std::vector<std::string>& argv,
                  std::ostream& out) {
  const Clock clock;
  const double tol = resolve_tol(args.in.tol);
  static const std::vector<std::string> kEmits{"E", "F", "D", "full", "eigvecs"};
  for (const auto& e : args.emit) {
    if (std::find(kEmits.begin(), kEmits.end(), e) == kEmits.end()) {
      throw InvalidArgument("--emit accepts E, F, D, full or eigvecs, got '" + e + "'");
    }
  }
  if (!args.emit.empty() && args.out_dir.empty()) {
    throw InvalidArgument("--emit requires --out-dir");
  }
  LoadedMatrix m = load_square(args.in.matrix);
  json inputs = {{"matrix", m.digest}};
  const WeightedIndicator wi = load_indicator(args.in, m.a, inputs);
  const auto phases = load_phases(args.phases, inputs);
  const TriangularizationResult r = block_triangularize(m.a, wi, phases);
  const DeviationPair dev = deviation_matrices(m.a, wi);
  const double scale = std::max(1.0, frobenius(m.a));
  const SpectrumSplit split = spectrum_split(r, tol * scale);

  std::vector<Complex> used;
  for (const Phase& b : r.reflector.phases()) used.push_back(b.value());

  json quotients = json::array();
  for (double alpha : args.alphas) {
    quotients.push_back({{"alpha", alpha},
                         {"entries", complex_matrix_to_json(
                                         generalized_quotient(m.a, wi, alpha).entries)}});
  }

  json report = {{"command", command_echo("transform", argv)},
                 {"inputs", inputs},
                 {"partition", io::partition_to_json(wi.partition())},
                 {"tolerance", tol},
                 {"phases", io::complex_list_to_json(used)},
                 {"quotients", quotients},
                 {"deviation",
                  {{"front", deviation_report_to_json(deviation_report(dev.front))},
                   {"rear", deviation_report_to_json(deviation_report(dev.rear))}}},
                 {"blocks",
                  {{"E_frobenius", frobenius(r.E)},
                   {"D_minus_frobenius", frobenius(r.D_minus)},
                   {"D_plus_frobenius", frobenius(r.D_plus_conj)},
                   {"F_frobenius", frobenius(r.F)}}},
                 {"spectrum",
                  {{"eigs_E", io::complex_list_to_json(split.eigs_E)},
                   {"eigs_F", io::complex_list_to_json(split.eigs_F)},
                   {"exact", split.exact}}},
                 {"outputs", json::array()}};

  if (!args.emit.empty()) {
    const fs::path dir = prepare_out_dir(args.out_dir);
    auto wants = [&](const char* e) {
      return std::find(args.emit.begin(), args.emit.end(), e) != args.emit.end();
    };
    if (wants("E")) emit(report, dir, "E", r.E);
    if (wants("F")) emit(report, dir, "F", r.F);
    if (wants("D")) {
      emit(report, dir, "D_minus", r.D_minus);
      emit(report, dir, "D_plus_conj", r.D_plus_conj);
    }
    if (wants("full")) emit(report, dir, "A_hat", r.assembled());
    if (wants("eigvecs")) report["eigvecs"] = emit_eigvecs(report, dir, m.a, r);
  }
  report["timing"] = {{"seconds", clock.seconds()}};
  print(out, report);
  return kSuccess;
}

int cmd_split(const Common& args, const std::vector<std::string>& argv, std::ostream& out) {
  const Clock clock;
  const double tol = resolve_tol(args.tol);
  LoadedMatrix m = load_square(args.matrix);
  json inputs = {{"matrix", m.digest}};
  const WeightedIndicator wi = load_indicator(args, m.a, inputs);
  const TriangularizationResult r = block_triangularize(m.a, wi);
  const SpectrumSplit split = spectrum_split(r, tol * std::max(1.0, frobenius(m.a)));
  const double tau = r.D_minus.size() == 0 ? 0.0 : singular_values(r.D_minus).maxCoeff();

  json report = {{"command", command_echo("split", argv)},
                 {"inputs", inputs},
                 {"partition", io::partition_to_json(wi.partition())},
                 {"tolerance", tol},
                 {"eigs_E", io::complex_list_to_json(split.eigs_E)},
                 {"eigs_F", io::complex_list_to_json(split.eigs_F)},
                 {"tau_spec", tau},
                 {"exact", split.exact}};
  if (is_hermitian(m.a)) {
    const PerturbationCheck w = weyl_check(m.a, r);
    report["weyl_holds"] = w.holds;
    report["weyl"] = {{"max_gap", w.max_gap}, {"slack", w.slack}};
  }
  report["timing"] = {{"seconds", clock.seconds()}};
  print(out, report);
  return kSuccess;
}

std::vector<Index> size_list(const json& j, const char* side, const char* key) {
  if (!j.is_object() || !j.contains(side) || !j[side].is_object() || !j[side].contains(key)) {
    throw io::ParseError(std::string("structure JSON lacks ") + side + "." + key);
  }
  const json& list = j[side][key];
  if (!list.is_array() || list.empty()) {
    throw io::ParseError(std::string(side) + "." + key + " must be a non-empty array");
  }
  std::vector<Index> out;
  for (const json& e : list) {
    if (!e.is_number_integer() || e.get<long long>() < 1) {
      throw io::ParseError(std::string(side) + "." + key + " must hold positive integers");
    }
    out.push_back(e.get<Index>());
  }
  return out;
}

double max_gap(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

// Singular values padded with zeros to `len`, descending.
RealVector padded_sv(const Matrix& m, Index len) {
  RealVector out = RealVector::Zero(len);
  const RealVector s = singular_values(m);
  out.head(std::min(len, s.size())) = s.head(std::min(len, s.size()));
  return out;
}

json sv_comparison(const Matrix& lhs, const Matrix& rhs) {
  const Index len = std::max({lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()});
  const Index shown = std::max(std::min(lhs.rows(), lhs.cols()), std::min(rhs.rows(), rhs.cols()));
  const RealVector a = padded_sv(lhs, len);
  const RealVector b = padded_sv(rhs, len);
  return {{"lhs", real_vector_to_json(a.head(shown))},
          {"rhs", real_vector_to_json(b.head(shown))},
          {"max_gap", max_gap(a, b)}};
}

int cmd_rect(const RectArgs& args, const std::vector<std::string>& argv, std::ostream& out) {
  const Clock clock;
  const double tol = resolve_tol(args.tol);
  LoadedMatrix m = load_matrix(args.matrix);
  LoadedMatrix wm = load_matrix(args.wminus);
  LoadedMatrix wp = load_matrix(args.wplus);
  const json structure = io::read_json(args.structure);
  const BlockDiagonal left = BlockDiagonal::from_dense(
      wm.a, size_list(structure, "left", "m_sizes"), size_list(structure, "left", "q_sizes"));
  const BlockDiagonal right = BlockDiagonal::from_dense(
      wp.a, size_list(structure, "right", "n_sizes"), size_list(structure, "right", "r_sizes"));
  const BlockSVD lsvd = block_svd(left);
  const BlockSVD rsvd = block_svd(right);
  const RectResult r = rect_transform(m.a, lsvd, rsvd);
  const RectDeviation dev = deviation_from_factors(m.a, lsvd, rsvd);
  const Matrix e0 = rayleigh_quotient_from_factors(m.a, lsvd, rsvd);

  const json a_vs_hat = sv_comparison(m.a, r.assembled());
  const json dm = sv_comparison(r.D_minus, dev.t_minus);
  const json dp = sv_comparison(r.D_plus(), dev.t_plus);
  const json ee = sv_comparison(r.E, e0);
  const double scale = std::max(1.0, frobenius(m.a));
  const bool consistent = a_vs_hat["max_gap"].get<double>() <= tol * scale &&
                          dm["max_gap"].get<double>() <= tol * scale &&
                          dp["max_gap"].get<double>() <= tol * scale &&
                          ee["max_gap"].get<double>() <= tol * scale;

  json report = {{"command", command_echo("rect", argv)},
                 {"inputs",
                  {{"matrix", m.digest},
                   {"structure", file_digest(args.structure)},
                   {"wminus", wm.digest},
                   {"wplus", wp.digest}}},
                 {"tolerance", tol},
                 {"shapes",
                  {{"E", {r.E.rows(), r.E.cols()}},
                   {"D_minus", {r.D_minus.rows(), r.D_minus.cols()}},
                   {"D_plus_conj", {r.D_plus_conj.rows(), r.D_plus_conj.cols()}},
                   {"F", {r.F.rows(), r.F.cols()}}}},
                 {"singular_values",
                  {{"A_vs_A_hat", a_vs_hat},
                   {"D_minus_vs_T_minus", dm},
                   {"D_plus_vs_T_plus", dp},
                   {"E_vs_E0", ee}}},
                 {"deviation",
                  {{"T_minus_frobenius", frobenius(dev.t_minus)},
                   {"T_plus_frobenius", frobenius(dev.t_plus)}}},
                 {"exact", std::max(frobenius(r.D_minus), frobenius(r.D_plus_conj)) <= tol * scale},
                 {"consistent", consistent},
                 {"outputs", json::array()}};
  if (!args.out_dir.empty()) {
    const fs::path dir = prepare_out_dir(args.out_dir);
    emit(report, dir, "E", r.E);
    emit(report, dir, "D_minus", r.D_minus);
    emit(report, dir, "D_plus_conj", r.D_plus_conj);
    emit(report, dir, "F", r.F);
  }
  report["timing"] = {{"seconds", clock.seconds()}};
  print(out, report);
  return kSuccess;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("matrix", c.matrix, "Matrix Market file")->required();
  sub->add_option("-p,--partition", c.partition, "partition JSON (1-based cells)")->required();
  sub->add_option("-w,--weights", c.weights, "weight vector JSON");
  sub->add_option("--tol", c.tol, "tolerance (default EQUITILE_TOL or 1e-10)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equitable partitions, block triangularization and deviation analysis",
               "equitile"};
  app.require_subcommand(1);

  RefineArgs refine;
  CLI::App* sub_refine = app.add_subcommand("refine", "coarsest front equitable refinement");
  sub_refine->add_option("matrix", refine.matrix, "Matrix Market file")->required();
  sub_refine->add_option("-i,--initial", refine.initial, "initial partition JSON");
  sub_refine->add_option("-w,--weights", refine.weights, "nonzero weight vector JSON");
  sub_refine->add_option("--tol", refine.tol, "color tolerance");

  CheckArgs check;
  CLI::App* sub_check = app.add_subcommand("check", "test a partition for equitability");
  add_common(sub_check, check.in);
  sub_check->add_option("--side", check.side, "front or rear")
      ->check(CLI::IsMember({"front", "rear"}));
  sub_check->add_flag("--epsilon", check.epsilon, "report the epsilon of equitability");
  sub_check->add_flag("--regular", check.regular, "report regular equivalence");

  TransformArgs transform;
  CLI::App* sub_transform = app.add_subcommand("transform", "block triangularize");
  add_common(sub_transform, transform.in);
  sub_transform->add_option("--phases", transform.phases, "auto or a phases JSON file");
  sub_transform->add_option("--emit", transform.emit, "E, F, D, full, eigvecs");
  sub_transform->add_option("--alpha", transform.alphas, "report generalized quotients");
  sub_transform->add_option("-o,--out-dir", transform.out_dir, "directory for matrix files");

  Common split;
  CLI::App* sub_split = app.add_subcommand("split", "spectrum split and perturbation bound");
  add_common(sub_split, split);

  RectArgs rect;
  CLI::App* sub_rect = app.add_subcommand("rect", "rectangular two-sided reduction");
  sub_rect->add_option("matrix", rect.matrix, "Matrix Market file")->required();
  sub_rect->add_option("-s,--structure", rect.structure, "block structure JSON")->required();
  sub_rect->add_option("--wminus", rect.wminus, "left block-diagonal matrix")->required();
  sub_rect->add_option("--wplus", rect.wplus, "right block-diagonal matrix")->required();
  sub_rect->add_option("-o,--out-dir", rect.out_dir, "directory for matrix files");
  sub_rect->add_option("--tol", rect.tol, "tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (sub_refine->parsed()) return cmd_refine(refine, out);
    if (sub_check->parsed()) return cmd_check(check, args, out);
    if (sub_transform->parsed()) return cmd_transform(transform, args, out);
    if (sub_split->parsed()) return cmd_split(split, args, out);
    if (sub_rect->parsed()) return cmd_rect(rect, args, out);
  } catch (const RankDeficient& e) {
    err << "equitile: rank deficient: " << e.what() << '\n';
    return kNegative;
  } catch (const NumericalFailure& e) {
    err << "equitile: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const InvalidArgument& e) {
    err << "equitile: invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "equitile: invalid JSON: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "equitile: file error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "equitile: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace equitile::cli
