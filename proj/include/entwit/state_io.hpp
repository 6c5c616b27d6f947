#pragma once

#include "entwit/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace entwit {

/// Structured error for malformed state files; `where` is the JSON path of
/// the offending field (e.g. "data[3][1]").
class StateFileError : public std::runtime_error {
 public:
  StateFileError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what) {}
};

struct LoadedState {
  std::variant<PureState, DensityMatrix> state;
  std::string kind;  // "pure" | "density"
  std::vector<std::string> warnings;

  const SystemShape& shape() const;
  bool is_pure() const { return kind == "pure"; }
  const PureState& pure() const { return std::get<PureState>(state); }
  const DensityMatrix& density() const { return std::get<DensityMatrix>(state); }
};

/// Parses a state file. Norm/trace deviations up to 1e-6 are repaired with
/// a warning; anything beyond, or any structural problem, raises
/// StateFileError naming the violated invariant and field. `tol` is the
/// final validation tolerance of the constructed object.
LoadedState parse_state_file(const std::string& path, double tol = kValidationTol);
LoadedState parse_state_json(const nlohmann::ordered_json& doc,
                             double tol = kValidationTol);

nlohmann::ordered_json pure_state_to_json(const PureState& psi);
nlohmann::ordered_json density_to_json(const DensityMatrix& rho);
void write_state_file(const std::string& path, const PureState& psi);
void write_state_file(const std::string& path, const DensityMatrix& rho);

/// JSON text with every float printed at 17 significant digits, so a parse
/// of the output reproduces each double bit-exactly. Deterministic byte
/// output for a given document.
std::string dump_json_17(const nlohmann::ordered_json& doc, int indent = 2);

/// FNV-1a digest of a file's bytes, formatted "fnv1a:<16 hex digits>".
std::string file_digest(const std::string& path);

struct PptRow {
  std::vector<int> b_side;
  double min_eigenvalue = 0.0;
  bool is_npt = false;
};

struct PurityRow {
  std::vector<int> b_side;
  double one_minus_purity = 0.0;
};

struct SchmidtSummary {
  std::vector<double> coefficients;
  int schmidt_number = 0;
};

/// Everything cmd_check computes, in a form that serializes to one JSON
/// document. The verdict is re-derivable from the stored numbers.
struct Report {
  std::string input_digest;
  std::string kind;
  std::vector<int> dims;
  double mes_overlap_best = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  std::string mes_verdict;
  bool all_bipartitions_npt = false;
  std::vector<PptRow> ppt_table;
  int restarts = 0;
  int converged_restarts = 0;
  std::uint64_t seed = 0;
  int max_iterations = 0;
  std::vector<double> per_restart_values;
  std::optional<std::vector<PurityRow>> purity_table;
  std::optional<SchmidtSummary> schmidt;
};

nlohmann::ordered_json report_to_json(const Report& report);
void write_report(const Report& report, const std::string& path);

}  // namespace entwit
