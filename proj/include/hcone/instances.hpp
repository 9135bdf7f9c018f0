#pragma once

#include "hcone/error_bound.hpp"
#include "hcone/hccp.hpp"
#include "hcone/properties.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcone {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

/// Malformed input. `where` is a JSON pointer to the offending field, or
/// "line L, column C" for syntax errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// ---------------------------------------------------------------------------
// Generators

/// tt* with t in T_+: diagonals |N(0,1)| (plus 0.1 when interior), off-diagonal
/// coordinates N(0,1).
Element random_cone_point(const AlgebraPtr& algebra, std::uint64_t seed, bool interior);

enum class ProblemClass { strongly_monotone, monotone, skew, P0_R0_candidate };

std::string to_string(ProblemClass c);
ProblemClass problem_class_from_string(const std::string& s);
const std::vector<ProblemClass>& all_problem_classes();

struct InstanceBundle {
  /// "builtin:<name>" for built-ins, empty for inline algebras.
  std::string algebra_ref;
  AlgebraPtr algebra;
  HccpProblem problem;
  std::optional<Element> xstar;
  std::optional<Element> ystar;
  std::string generator;
  std::uint64_t seed = 0;
  std::string problem_class;
  /// Property names that hold by construction and re-verify via the probes.
  std::vector<std::string> certified;
  /// Recorded constants, e.g. "mu" for the strong-monotonicity modulus.
  std::map<std::string, double> constants;
  std::string notes;
};

/// Linear instance with a known solution x* = uu*, y* = v*v from the Moreau
/// decomposition of a random w, and q = y* - F(x*). Coordinate matrices are
/// built in whitened Hermitian coordinates so that the stated moduli hold in
/// the trace metric.
InstanceBundle random_problem(const AlgebraPtr& algebra, const std::string& algebra_ref,
                              std::uint64_t seed, ProblemClass cls);

/// Random matrix with all principal minors positive: strongly monotone,
/// permuted triangular with positive diagonal, or diagonally dominant.
Eigen::MatrixXd random_P_matrix(int n, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// JSON

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);
json parse_json_text(const std::string& text);

json spec_to_json(const TAlgebraSpec& spec);
TAlgebraSpec spec_from_json(const json& j, const std::string& where = "");

/// Accepts "builtin:<name>", a bare built-in name, a path to an algebra JSON
/// file, or an inline algebra object.
AlgebraPtr resolve_algebra(const json& ref, const std::string& where = "/algebra");
AlgebraPtr load_algebra(const std::string& ref_or_path);

/// Hermitian elements serialize as "hermitian" coordinates, others as blocks.
json element_to_json(const Element& x, const std::string& algebra_ref = "");
/// Accepts {"hermitian": [...]} or {"blocks": [{"i","j","values"}]}; the
/// algebra is taken from the document when present, otherwise `algebra`.
Element element_from_json(const json& j, const AlgebraPtr& algebra = nullptr,
                          const std::string& where = "");
Element load_element(const std::filesystem::path& path, const AlgebraPtr& algebra = nullptr);

json map_to_json(const Map& F);
Map map_from_json(const json& j, const AlgebraPtr& algebra, const std::string& where = "/F");

/// Options block of a problem document.
struct ProblemOptions {
  std::optional<SolveMethod> method;
  std::optional<double> tol;
  std::optional<int> max_iterations;
  std::optional<int> starts;
  std::optional<std::uint64_t> seed;
};

struct ProblemDocument {
  InstanceBundle bundle;
  ProblemOptions options;
};

json bundle_to_json(const InstanceBundle& b, const ProblemOptions& options = {});
ProblemDocument problem_from_json(const json& j);
ProblemDocument load_problem(const std::filesystem::path& path);

json to_json(const AxiomReport& r);
json to_json(const MembershipVerdict& v);
json to_json(const MoreauFactors& f);
json to_json(const ComplementarityReport& r);
json to_json(const Solution& s);
json to_json(const PropertyVerdict& v);
json to_json(const AuditReport& r);
json to_json(const BoundReport& r);

// ---------------------------------------------------------------------------
// Corpus

/// Algebras of the shipped corpus, as "builtin:<name>" references.
const std::vector<std::string>& corpus_algebras();
constexpr int kBundlesPerClass = 20;

/// Writes algebras/, bundles/ and the vinberg pair and identity fixtures under
/// `dir`; returns the written paths in a fixed order.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir);

/// Sorted bundle files under dir/bundles.
std::vector<std::filesystem::path> corpus_bundles(const std::filesystem::path& dir);

}  // namespace hcone
