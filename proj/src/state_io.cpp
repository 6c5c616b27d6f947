#include "entwit/state_io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entwit {

namespace {

using nlohmann::ordered_json;

// Deviations repaired with a warning up to this bound; errors beyond.
constexpr double kRepairTol = 1e-6;
// Deviations below this are silently normalized without a warning.
constexpr double kQuietTol = 1e-9;

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double require_number(const ordered_json& node, const std::string& where) {
  if (!node.is_number()) {
    throw StateFileError(where, "expected a number");
  }
  return node.get<double>();
}

Complex parse_pair(const ordered_json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2) {
    throw StateFileError(where, "expected a [re, im] pair");
  }
  return Complex(require_number(node[0], where + "[0]"),
                 require_number(node[1], where + "[1]"));
}

ordered_json pair_json(Complex value) {
  return ordered_json::array({value.real(), value.imag()});
}

SystemShape parse_dims(const ordered_json& doc) {
  if (!doc.contains("dims")) {
    throw StateFileError("dims", "missing field");
  }
  const ordered_json& dims = doc["dims"];
  if (!dims.is_array() || dims.empty()) {
    throw StateFileError("dims", "expected a non-empty array of integers");
  }
  std::vector<int> values;
  for (size_t j = 0; j < dims.size(); ++j) {
    const std::string where = "dims[" + std::to_string(j) + "]";
    if (!dims[j].is_number_integer()) {
      throw StateFileError(where, "expected an integer");
    }
    const long long d = dims[j].get<long long>();
    if (d < 2 || d > 4096) {
      throw StateFileError(where, "dimension must be in [2, 4096]");
    }
    values.push_back(static_cast<int>(d));
  }
  try {
    return SystemShape(std::move(values));
  } catch (const std::invalid_argument& err) {
    throw StateFileError("dims", err.what());
  }
}

PureState parse_pure(const ordered_json& doc, const SystemShape& shape, double tol,
                     std::vector<std::string>& warnings) {
  const ordered_json& data = doc["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != shape.total_dim()) {
    throw StateFileError("data", "expected " + std::to_string(shape.total_dim()) +
                                     " amplitude pairs for shape " + shape.to_string());
  }
  Vector amplitudes(shape.total_dim());
  for (Index i = 0; i < shape.total_dim(); ++i) {
    amplitudes(i) = parse_pair(data[static_cast<size_t>(i)],
                               "data[" + std::to_string(i) + "]");
  }
  const double norm = amplitudes.norm();
  const double deviation = std::abs(norm - 1.0);
  if (deviation > kRepairTol) {
    throw StateFileError("data", "norm " + format_double(norm) +
                                     " violates the unit-norm invariant");
  }
  if (norm == 0.0) {
    throw StateFileError("data", "amplitudes are all zero");
  }
  if (deviation > kQuietTol) {
    warnings.push_back("normalized amplitudes (norm deviated by " +
                       format_double(deviation) + ")");
  }
  amplitudes /= norm;
  return PureState(shape, std::move(amplitudes), tol);
}

DensityMatrix parse_density(const ordered_json& doc, const SystemShape& shape, double tol,
                            std::vector<std::string>& warnings) {
  const ordered_json& data = doc["data"];
  const Index d = shape.total_dim();
  if (!data.is_array() || static_cast<Index>(data.size()) != d) {
    throw StateFileError("data", "expected " + std::to_string(d) + " rows for shape " +
                                     shape.to_string());
  }
  Matrix matrix(d, d);
  for (Index r = 0; r < d; ++r) {
    const ordered_json& row = data[static_cast<size_t>(r)];
    const std::string row_path = "data[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw StateFileError(row_path, "expected " + std::to_string(d) + " entry pairs");
    }
    for (Index c = 0; c < d; ++c) {
      matrix(r, c) = parse_pair(row[static_cast<size_t>(c)],
                                row_path + "[" + std::to_string(c) + "]");
    }
  }

  const double herm_dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kRepairTol) {
    throw StateFileError("data", "Hermiticity violated by " + format_double(herm_dev));
  }
  if (herm_dev > kQuietTol) {
    warnings.push_back("symmetrized matrix (Hermiticity deviated by " +
                       format_double(herm_dev) + ")");
  }
  matrix = 0.5 * (matrix + matrix.adjoint()).eval();

  const double trace = matrix.trace().real();
  const double trace_dev = std::abs(trace - 1.0);
  if (trace_dev > kRepairTol) {
    throw StateFileError("data", "trace " + format_double(trace) +
                                     " violates the unit-trace invariant");
  }
  if (trace <= 0.0) {
    throw StateFileError("data", "trace must be positive");
  }
  if (trace_dev > kQuietTol) {
    warnings.push_back("renormalized trace (deviated by " + format_double(trace_dev) + ")");
  }
  matrix /= trace;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kRepairTol) {
    throw StateFileError("data", "eigenvalue " + format_double(min_eig) +
                                     " violates positive semidefiniteness");
  }
  if (min_eig < -tol) {
    // Small negative tail from file rounding: project back onto the cone.
    Eigen::SelfAdjointEigenSolver<Matrix> full(matrix);
    RealVector clamped = full.eigenvalues().cwiseMax(0.0);
    matrix = full.eigenvectors() * clamped.asDiagonal() * full.eigenvectors().adjoint();
    matrix /= matrix.trace().real();
    warnings.push_back("projected onto the PSD cone (eigenvalue floor " +
                       format_double(min_eig) + ")");
  }
  return DensityMatrix(shape, std::move(matrix), tol);
}

void emit(const ordered_json& node, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (node.type()) {
    case ordered_json::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t k = 0;
      for (auto it = node.begin(); it != node.end(); ++it, ++k) {
        out += pad_in;
        out += ordered_json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, indent, depth + 1);
        if (k + 1 < node.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      // Pack flat numeric pairs on one line; indent everything else.
      bool flat = true;
      for (const auto& item : node) {
        if (item.is_array() || item.is_object()) {
          flat = false;
          break;
        }
      }
      if (flat) {
        out += '[';
        for (size_t k = 0; k < node.size(); ++k) {
          if (k > 0) out += ", ";
          emit(node[k], out, indent, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (size_t k = 0; k < node.size(); ++k) {
        out += pad_in;
        emit(node[k], out, indent, depth + 1);
        if (k + 1 < node.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double value = node.get<double>();
      if (!std::isfinite(value)) {
        throw std::runtime_error("dump_json_17: non-finite number");
      }
      out += format_double(value);
      return;
    }
    default:
      out += node.dump();
      return;
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace

const SystemShape& LoadedState::shape() const {
  return is_pure() ? pure().shape() : density().shape();
}

LoadedState parse_state_json(const ordered_json& doc, double tol) {
  if (!doc.is_object()) {
    throw StateFileError("", "top-level value must be an object");
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw StateFileError("kind", "missing or non-string field");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind != "pure" && kind != "density") {
    throw StateFileError("kind", "expected \"pure\" or \"density\", got \"" + kind + "\"");
  }
  const SystemShape shape = parse_dims(doc);
  if (!doc.contains("data")) {
    throw StateFileError("data", "missing field");
  }

  LoadedState loaded{PureState(SystemShape({2}), Vector::Unit(2, 0)), kind, {}};
  if (kind == "pure") {
    loaded.state = parse_pure(doc, shape, tol, loaded.warnings);
  } else {
    loaded.state = parse_density(doc, shape, tol, loaded.warnings);
  }
  return loaded;
}

LoadedState parse_state_file(const std::string& path, double tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StateFileError("", "cannot open file: " + path);
  }
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw StateFileError("", std::string("invalid JSON: ") + err.what());
  }
  return parse_state_json(doc, tol);
}

nlohmann::ordered_json pure_state_to_json(const PureState& psi) {
  ordered_json doc;
  doc["kind"] = "pure";
  doc["dims"] = psi.shape().dims();
  ordered_json data = ordered_json::array();
  for (Index i = 0; i < psi.amplitudes().size(); ++i) {
    data.push_back(pair_json(psi.amplitudes()(i)));
  }
  doc["data"] = std::move(data);
  return doc;
}

nlohmann::ordered_json density_to_json(const DensityMatrix& rho) {
  ordered_json doc;
  doc["kind"] = "density";
  doc["dims"] = rho.shape().dims();
  ordered_json data = ordered_json::array();
  for (Index r = 0; r < rho.matrix().rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < rho.matrix().cols(); ++c) {
      row.push_back(pair_json(rho.matrix()(r, c)));
    }
    data.push_back(std::move(row));
  }
  doc["data"] = std::move(data);
  return doc;
}

void write_state_file(const std::string& path, const PureState& psi) {
  write_text_file(path, dump_json_17(pure_state_to_json(psi)) + "\n");
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  write_text_file(path, dump_json_17(density_to_json(rho)) + "\n");
}

std::string dump_json_17(const ordered_json& doc, int indent) {
  std::string out;
  emit(doc, out, indent, 0);
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("file_digest: cannot open " + path);
  }
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char chunk[4096];
  while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(chunk[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "fnv1a:%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

nlohmann::ordered_json report_to_json(const Report& report) {
  ordered_json doc;
  doc["input_digest"] = report.input_digest;
  doc["kind"] = report.kind;
  doc["dims"] = report.dims;
  doc["mes_overlap_best"] = report.mes_overlap_best;
  doc["threshold"] = report.threshold;
  doc["margin"] = report.margin;
  doc["mes_verdict"] = report.mes_verdict;
  doc["all_bipartitions_npt"] = report.all_bipartitions_npt;
  ordered_json table = ordered_json::array();
  for (const PptRow& row : report.ppt_table) {
    ordered_json entry;
    entry["b_side"] = row.b_side;
    entry["min_eigenvalue"] = row.min_eigenvalue;
    entry["is_npt"] = row.is_npt;
    table.push_back(std::move(entry));
  }
  doc["ppt_table"] = std::move(table);
  ordered_json optimizer;
  optimizer["restarts"] = report.restarts;
  optimizer["converged_restarts"] = report.converged_restarts;
  optimizer["seed"] = report.seed;
  optimizer["max_iterations"] = report.max_iterations;
  optimizer["per_restart_values"] = report.per_restart_values;
  doc["optimizer"] = std::move(optimizer);
  if (report.purity_table) {
    ordered_json purity = ordered_json::array();
    for (const PurityRow& row : *report.purity_table) {
      ordered_json entry;
      entry["b_side"] = row.b_side;
      entry["one_minus_purity"] = row.one_minus_purity;
      purity.push_back(std::move(entry));
    }
    doc["purity_table"] = std::move(purity);
  }
  if (report.schmidt) {
    ordered_json schmidt;
    schmidt["coefficients"] = report.schmidt->coefficients;
    schmidt["schmidt_number"] = report.schmidt->schmidt_number;
    doc["schmidt"] = std::move(schmidt);
  }
  return doc;
}

void write_report(const Report& report, const std::string& path) {
  write_text_file(path, dump_json_17(report_to_json(report)) + "\n");
}

}  // namespace entwit
