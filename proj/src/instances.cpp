#include "hcone/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace hcone {

using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Generators

Element random_cone_point(const AlgebraPtr& algebra, std::uint64_t seed, bool interior) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Element t(algebra);
  for (int k : algebra->upper_indices()) t.coeffs()[k] = g(rng);
  for (int i = 0; i < algebra->rank(); ++i)
    t.set_diagonal_value(i, std::abs(t.diagonal_value(i)) + (interior ? 0.1 : 0.0));
  return mul(t, star(t));
}

std::string to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::strongly_monotone:
      return "strongly_monotone";
    case ProblemClass::monotone:
      return "monotone";
    case ProblemClass::skew:
      return "skew";
    case ProblemClass::P0_R0_candidate:
      return "P0_R0_candidate";
  }
  return "?";
}

ProblemClass problem_class_from_string(const std::string& s) {
  for (ProblemClass c : all_problem_classes())
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown problem class '" + s +
                              "' (expected strongly_monotone, monotone, skew or P0_R0_candidate)");
}

const std::vector<ProblemClass>& all_problem_classes() {
  static const std::vector<ProblemClass> all = {ProblemClass::strongly_monotone,
                                                ProblemClass::monotone, ProblemClass::skew,
                                                ProblemClass::P0_R0_candidate};
  return all;
}

namespace {

MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = g(rng);
  return A;
}

MatrixXd skew_part(int m, std::mt19937_64& rng) {
  const MatrixXd B = gaussian_matrix(m, m, rng) / std::sqrt(static_cast<double>(m));
  return 0.5 * (B - B.transpose());
}

}  // namespace

InstanceBundle random_problem(const AlgebraPtr& algebra, const std::string& algebra_ref,
                              std::uint64_t seed, ProblemClass cls) {
  std::mt19937_64 rng(seed);
  const int m = algebra->hermitian_dim();
  const double sm = std::sqrt(static_cast<double>(m));
  std::map<std::string, double> constants;
  std::vector<std::string> certified;

  MatrixXd Mt;
  switch (cls) {
    case ProblemClass::strongly_monotone: {
      const double mu = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      const MatrixXd A = gaussian_matrix(m, m, rng) / sm;
      Mt = mu * MatrixXd::Identity(m, m) + A.transpose() * A + skew_part(m, rng);
      constants["mu"] = mu;
      certified = {"monotone", "strictly_monotone", "strongly_monotone"};
      break;
    }
    case ProblemClass::monotone: {
      const MatrixXd A = gaussian_matrix(std::max(1, m / 2), m, rng) / sm;
      Mt = A.transpose() * A + skew_part(m, rng);
      certified = {"monotone"};
      break;
    }
    case ProblemClass::skew:
      Mt = skew_part(m, rng);
      certified = {"monotone"};
      break;
    case ProblemClass::P0_R0_candidate: {
      const MatrixXd A = gaussian_matrix(std::max(1, m / 2), m, rng) / sm;
      Mt = A.transpose() * A + skew_part(m, rng) + 1e-3 * MatrixXd::Identity(m, m);
      constants["mu"] = 1e-3;
      certified = {"monotone"};
      break;
    }
  }
  // Whitened construction: <z, Mz> = (Rz)^T Mt (Rz).
  const MatrixXd& R = algebra->hermitian_metric_sqrt();
  const MatrixXd M = R.triangularView<Eigen::Upper>().solve(Mt * R);
  Map F = Map::linear(M, to_string(cls));

  const Element w = gaussian_sampler(algebra)(rng);
  const MoreauFactors mf = project(w);
  const Element xstar = mf.proj_K();
  const Element ystar = mf.proj_Kstar();
  const Element q = ystar - F(xstar);

  InstanceBundle b{algebra_ref,
                   algebra,
                   HccpProblem(algebra, F, q, to_string(cls) + "-" + std::to_string(seed)),
                   xstar,
                   ystar,
                   "random_problem",
                   seed,
                   to_string(cls),
                   certified,
                   constants,
                   ""};

  if (cls == ProblemClass::strongly_monotone || cls == ProblemClass::P0_R0_candidate) {
    ProbeOptions po;
    po.samples = 200;
    po.seed = seed;
    const PropertyVerdict r0 = probe_R0(F, algebra, po);
    if (!r0.has_counterexample()) {
      b.certified.push_back("R0");
    } else {
      b.notes = "R0 probe found a counterexample; bundle not certified for R0";
    }
  }
  return b;
}

MatrixXd random_P_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int kind = static_cast<int>(rng() % 3);
  if (kind == 0) {
    const MatrixXd A = gaussian_matrix(n, n, rng) / std::sqrt(static_cast<double>(n));
    return (0.1 + u(rng)) * MatrixXd::Identity(n, n) + A.transpose() * A + 2.0 * skew_part(n, rng);
  }
  if (kind == 1) {
    MatrixXd L = gaussian_matrix(n, n, rng);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) L(i, j) = 0.0;
      L(i, i) = 0.5 + 1.5 * u(rng);
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    MatrixXd P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) = L(perm[i], perm[j]);
    return P;
  }
  MatrixXd D = gaussian_matrix(n, n, rng);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(D(i, j));
    D(i, i) = off + 0.1 + u(rng);
  }
  return D;
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }

void check_fields(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError(child(where, it.key()), "unknown field '" + it.key() + "'");
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(child(where, key), "missing field '" + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<int>();
}

std::uint64_t as_uint64(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(where, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(as_number(j[k], where + "/" + std::to_string(k)));
  return v;
}

MatrixXd as_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of rows");
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  MatrixXd M;
  for (int i = 0; i < rows; ++i) {
    const auto row = as_vector(j[i], where + "/" + std::to_string(i));
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      M.resize(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols) throw ParseError(where + "/" + std::to_string(i), "ragged matrix row");
    for (int c = 0; c < cols; ++c) M(i, c) = row[c];
  }
  if (rows == 0) M.resize(0, 0);
  return M;
}

json matrix_json(const MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

void check_header(const json& j, const std::string& type) {
  const json& v = require(j, "format_version", "");
  if (as_int(v, "/format_version") != kFormatVersion)
    throw ParseError("/format_version", "unsupported format version " + v.dump());
  const std::string t = as_string(require(j, "type", ""), "/type");
  if (t != type) throw ParseError("/type", "expected type '" + type + "', found '" + t + "'");
}

json header(const std::string& type) {
  json j;
  j["format_version"] = kFormatVersion;
  j["type"] = type;
  return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

void write_json_file(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Algebras

json spec_to_json(const TAlgebraSpec& spec) {
  json j = header("algebra");
  j["name"] = spec.name;
  j["rank"] = spec.rank;
  j["block_dims"] = spec.block_dims;
  j["rho"] = spec.rho;
  json sc = json::array();
  for (const auto& [key, values] : spec.structure_constants)
    sc.push_back({{"i", key[0] + 1}, {"j", key[1] + 1}, {"l", key[2] + 1}, {"values", values}});
  j["structure_constants"] = sc;
  json inv = json::array();
  for (const auto& [key, M] : spec.involution_maps)
    inv.push_back({{"i", key[0] + 1}, {"j", key[1] + 1}, {"matrix", matrix_json(M)}});
  j["involution"] = inv;
  return j;
}

TAlgebraSpec spec_from_json(const json& j, const std::string& where) {
  check_fields(j, {"format_version", "type", "name", "rank", "block_dims", "rho", "structure_constants",
                   "involution"},
               where);
  if (j.contains("type") && as_string(j["type"], child(where, "type")) != "algebra")
    throw ParseError(child(where, "type"), "expected type 'algebra'");
  TAlgebraSpec s;
  if (j.contains("name")) s.name = as_string(j["name"], child(where, "name"));
  s.rank = as_int(require(j, "rank", where), child(where, "rank"));
  if (s.rank < 1) throw ParseError(child(where, "rank"), "rank must be positive");
  const MatrixXd dims = as_matrix(require(j, "block_dims", where), child(where, "block_dims"));
  if (dims.rows() != s.rank || dims.cols() != s.rank)
    throw ParseError(child(where, "block_dims"), "block_dims must be rank x rank");
  s.block_dims.assign(s.rank, std::vector<int>(s.rank));
  for (int a = 0; a < s.rank; ++a)
    for (int b = 0; b < s.rank; ++b) s.block_dims[a][b] = static_cast<int>(dims(a, b));
  s.rho = as_vector(require(j, "rho", where), child(where, "rho"));

  auto index = [&](const json& e, const char* key, const std::string& w) {
    const int v = as_int(require(e, key, w), child(w, key));
    if (v < 1 || v > s.rank) throw ParseError(child(w, key), "block index out of range");
    return v - 1;
  };
  const json& sc = require(j, "structure_constants", where);
  if (!sc.is_array()) throw ParseError(child(where, "structure_constants"), "expected an array");
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const std::string w = child(where, "structure_constants") + "/" + std::to_string(k);
    check_fields(sc[k], {"i", "j", "l", "values"}, w);
    const std::array<int, 3> key = {index(sc[k], "i", w), index(sc[k], "j", w), index(sc[k], "l", w)};
    s.structure_constants[key] = as_vector(require(sc[k], "values", w), child(w, "values"));
  }
  const json& inv = require(j, "involution", where);
  if (!inv.is_array()) throw ParseError(child(where, "involution"), "expected an array");
  for (std::size_t k = 0; k < inv.size(); ++k) {
    const std::string w = child(where, "involution") + "/" + std::to_string(k);
    check_fields(inv[k], {"i", "j", "matrix"}, w);
    const std::array<int, 2> key = {index(inv[k], "i", w), index(inv[k], "j", w)};
    const int rows = s.block_dims[key[1]][key[0]], cols = s.block_dims[key[0]][key[1]];
    MatrixXd M = as_matrix(require(inv[k], "matrix", w), child(w, "matrix"));
    if (M.size() == 0) M.resize(rows, cols);
    s.involution_maps[key] = M;
  }
  return s;
}

AlgebraPtr resolve_algebra(const json& ref, const std::string& where) {
  if (ref.is_object()) {
    try {
      return TAlgebra::create(spec_from_json(ref, where));
    } catch (const AlgebraError& e) {
      throw ParseError(where, e.what());
    }
  }
  const std::string s = as_string(ref, where);
  try {
    return builtin(s);
  } catch (const AlgebraError&) {
    if (s.rfind("builtin:", 0) == 0) throw ParseError(where, "unknown built-in algebra '" + s + "'");
  }
  if (!fs::exists(s)) throw ParseError(where, "'" + s + "' is neither a built-in algebra nor a file");
  const json doc = read_json_file(s);
  try {
    return TAlgebra::create(spec_from_json(doc));
  } catch (const AlgebraError& e) {
    throw ParseError(s, e.what());
  }
}

AlgebraPtr load_algebra(const std::string& ref_or_path) { return resolve_algebra(json(ref_or_path), "algebra"); }

namespace {

std::string builtin_ref(const AlgebraPtr& a) {
  try {
    const auto b = builtin(a->name());
    if (b->same_as(*a)) return "builtin:" + a->name();
  } catch (const std::exception&) {
  }
  return "";
}

json algebra_ref_json(const std::string& ref, const AlgebraPtr& a) {
  if (!ref.empty()) return ref;
  const std::string b = builtin_ref(a);
  if (!b.empty()) return b;
  json s = spec_to_json(a->spec());
  s.erase("format_version");
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Elements

json element_to_json(const Element& x, const std::string& algebra_ref) {
  json j;
  if (!algebra_ref.empty()) {
    j = header("element");
    j["algebra"] = algebra_ref;
  }
  if (is_hermitian(x)) {
    j["hermitian"] = vector_json(to_hermitian(x));
    return j;
  }
  const auto& alg = x.algebra();
  json blocks = json::array();
  for (int i = 0; i < alg.rank(); ++i)
    for (int k = 0; k < alg.rank(); ++k)
      if (alg.block_dim(i, k) > 0)
        blocks.push_back({{"i", i + 1}, {"j", k + 1}, {"values", vector_json(x.block(i, k))}});
  j["blocks"] = blocks;
  return j;
}

Element element_from_json(const json& j, const AlgebraPtr& algebra, const std::string& where) {
  check_fields(j, {"format_version", "type", "algebra", "label", "hermitian", "blocks"}, where);
  AlgebraPtr alg = algebra;
  if (j.contains("algebra")) {
    const AlgebraPtr doc = resolve_algebra(j["algebra"], child(where, "algebra"));
    if (alg && !alg->same_as(*doc)) throw ParseError(child(where, "algebra"), "element belongs to a different algebra");
    alg = doc;
  }
  if (!alg) throw ParseError(child(where, "algebra"), "missing field 'algebra'");
  const bool h = j.contains("hermitian"), b = j.contains("blocks");
  if (h == b) throw ParseError(where.empty() ? "/" : where, "exactly one of 'hermitian' or 'blocks' is required");
  if (h) {
    const auto v = as_vector(j["hermitian"], child(where, "hermitian"));
    if (static_cast<int>(v.size()) != alg->hermitian_dim())
      throw ParseError(child(where, "hermitian"), "expected " + std::to_string(alg->hermitian_dim()) +
                                                       " coordinates, found " + std::to_string(v.size()));
    return from_hermitian(alg, Eigen::Map<const VectorXd>(v.data(), static_cast<int>(v.size())));
  }
  Element x(alg);
  const json& blocks = j["blocks"];
  if (!blocks.is_array()) throw ParseError(child(where, "blocks"), "expected an array");
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string w = child(where, "blocks") + "/" + std::to_string(k);
    check_fields(blocks[k], {"i", "j", "values"}, w);
    const int i = as_int(require(blocks[k], "i", w), child(w, "i")) - 1;
    const int l = as_int(require(blocks[k], "j", w), child(w, "j")) - 1;
    if (i < 0 || l < 0 || i >= alg->rank() || l >= alg->rank()) throw ParseError(w, "block index out of range");
    const auto v = as_vector(require(blocks[k], "values", w), child(w, "values"));
    if (static_cast<int>(v.size()) != alg->block_dim(i, l))
      throw ParseError(child(w, "values"), "block (" + std::to_string(i + 1) + "," + std::to_string(l + 1) +
                                               ") has dimension " + std::to_string(alg->block_dim(i, l)));
    for (std::size_t c = 0; c < v.size(); ++c) x.block(i, l)[static_cast<int>(c)] = v[c];
  }
  return x;
}

Element load_element(const fs::path& path, const AlgebraPtr& algebra) {
  const json j = read_json_file(path);
  try {
    check_header(j, "element");
    return element_from_json(j, algebra);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

// ---------------------------------------------------------------------------
// Maps and problems

json map_to_json(const Map& F) {
  if (F.is_linear()) {
    const MatrixXd& M = F.matrix();
    if (F.name() == "identity" && M.isIdentity(0.0)) return {{"type", "identity"}};
    if (F.name() == "zero" && M.isZero(0.0)) return {{"type", "zero"}};
    return {{"type", "matrix"}, {"name", F.name()}, {"matrix", matrix_json(M)}};
  }
  if (F.name() == "projection") return {{"type", "projection"}};
  throw std::invalid_argument("map '" + F.name() + "' has no file representation");
}

Map map_from_json(const json& j, const AlgebraPtr& algebra, const std::string& where) {
  check_fields(j, {"type", "name", "matrix"}, where);
  const std::string type = as_string(require(j, "type", where), child(where, "type"));
  if (type == "identity") return Map::identity(algebra);
  if (type == "zero") return Map::zero(algebra);
  if (type == "projection") {
    return Map::callable([](const Element& x) { return proj_K(x); }, "projection");
  }
  if (type == "matrix") {
    const MatrixXd M = as_matrix(require(j, "matrix", where), child(where, "matrix"));
    const int m = algebra->hermitian_dim();
    if (M.rows() != m || M.cols() != m)
      throw ParseError(child(where, "matrix"), "expected a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
    const std::string name = j.contains("name") ? as_string(j["name"], child(where, "name")) : "linear";
    return Map::linear(M, name);
  }
  throw ParseError(child(where, "type"), "unknown map type '" + type + "' (expected matrix, identity, zero or projection)");
}

json bundle_to_json(const InstanceBundle& b, const ProblemOptions& options) {
  json j = header("problem");
  j["label"] = b.problem.label;
  j["algebra"] = algebra_ref_json(b.algebra_ref, b.algebra);
  j["F"] = map_to_json(b.problem.F);
  j["q"] = element_to_json(b.problem.q);
  if (b.xstar || b.ystar) {
    json s;
    if (b.xstar) s["x"] = element_to_json(*b.xstar);
    if (b.ystar) s["y"] = element_to_json(*b.ystar);
    j["solution"] = s;
  }
  if (!b.generator.empty()) {
    json p;
    p["generator"] = b.generator;
    p["seed"] = b.seed;
    p["class"] = b.problem_class;
    p["certified"] = b.certified;
    json c = json::object();
    for (const auto& [k, v] : b.constants) c[k] = v;
    p["constants"] = c;
    if (!b.notes.empty()) p["notes"] = b.notes;
    j["provenance"] = p;
  }
  json o = json::object();
  if (options.method) o["method"] = to_string(*options.method);
  if (options.tol) o["tol"] = *options.tol;
  if (options.max_iterations) o["max_iterations"] = *options.max_iterations;
  if (options.starts) o["starts"] = *options.starts;
  if (options.seed) o["seed"] = *options.seed;
  if (!o.empty()) j["options"] = o;
  return j;
}

ProblemDocument problem_from_json(const json& j) {
  check_fields(j, {"format_version", "type", "label", "algebra", "F", "q", "solution", "provenance", "options"}, "");
  check_header(j, "problem");
  const AlgebraPtr alg = resolve_algebra(require(j, "algebra", ""), "/algebra");
  std::string ref;
  if (j["algebra"].is_string()) {
    ref = j["algebra"].get<std::string>();
    if (ref.rfind("builtin:", 0) != 0 && !builtin_ref(alg).empty()) ref = "builtin:" + ref;
    if (ref.rfind("builtin:", 0) != 0) ref.clear();
  }
  Map F = map_from_json(require(j, "F", ""), alg, "/F");
  Element q = element_from_json(require(j, "q", ""), alg, "/q");
  const std::string label = j.contains("label") ? as_string(j["label"], "/label") : "";
  ProblemDocument doc{InstanceBundle{ref, alg, HccpProblem(alg, F, q, label), std::nullopt, std::nullopt, "", 0, "",
                                     {}, {}, ""},
                      {}};
  if (j.contains("solution")) {
    const json& s = j["solution"];
    check_fields(s, {"x", "y"}, "/solution");
    if (s.contains("x")) doc.bundle.xstar = element_from_json(s["x"], alg, "/solution/x");
    if (s.contains("y")) doc.bundle.ystar = element_from_json(s["y"], alg, "/solution/y");
  }
  if (j.contains("provenance")) {
    const json& p = j["provenance"];
    check_fields(p, {"generator", "seed", "class", "certified", "constants", "notes"}, "/provenance");
    auto& b = doc.bundle;
    if (p.contains("generator")) b.generator = as_string(p["generator"], "/provenance/generator");
    if (p.contains("seed")) b.seed = as_uint64(p["seed"], "/provenance/seed");
    if (p.contains("class")) b.problem_class = as_string(p["class"], "/provenance/class");
    if (p.contains("certified")) {
      const json& c = p["certified"];
      if (!c.is_array()) throw ParseError("/provenance/certified", "expected an array");
      for (std::size_t k = 0; k < c.size(); ++k)
        b.certified.push_back(as_string(c[k], "/provenance/certified/" + std::to_string(k)));
    }
    if (p.contains("constants")) {
      const json& c = p["constants"];
      if (!c.is_object()) throw ParseError("/provenance/constants", "expected an object");
      for (auto it = c.begin(); it != c.end(); ++it)
        b.constants[it.key()] = as_number(it.value(), "/provenance/constants/" + it.key());
    }
    if (p.contains("notes")) b.notes = as_string(p["notes"], "/provenance/notes");
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    check_fields(o, {"method", "tol", "max_iterations", "starts", "seed"}, "/options");
    auto& opt = doc.options;
    if (o.contains("method")) {
      try {
        opt.method = solve_method_from_string(as_string(o["method"], "/options/method"));
      } catch (const std::invalid_argument& e) {
        throw ParseError("/options/method", e.what());
      }
    }
    if (o.contains("tol")) opt.tol = as_number(o["tol"], "/options/tol");
    if (o.contains("max_iterations")) opt.max_iterations = as_int(o["max_iterations"], "/options/max_iterations");
    if (o.contains("starts")) opt.starts = as_int(o["starts"], "/options/starts");
    if (o.contains("seed")) opt.seed = as_uint64(o["seed"], "/options/seed");
  }
  return doc;
}

ProblemDocument load_problem(const fs::path& path) {
  const json j = read_json_file(path);
  try {
    return problem_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const AxiomReport& r) {
  json j = header("axiom_report");
  j["algebra"] = r.algebra;
  j["all_passed"] = r.all_passed();
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name}, {"passed", c.passed}, {"tuples_checked", c.tuples_checked}};
    if (!c.passed) {
      e["witness"] = c.witness;
      e["lhs"] = c.lhs;
      e["rhs"] = c.rhs;
    }
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

json to_json(const MembershipVerdict& v) {
  json j = header("membership");
  j["status"] = to_string(v.status);
  j["residual"] = v.residual;
  if (v.failing_block >= 0) {
    j["failing_block"] = v.failing_block + 1;
    j["failing_value"] = v.failing_value;
  }
  if (v.factor) j["factor"] = element_to_json(*v.factor);
  return j;
}

json to_json(const MoreauFactors& f) {
  json j = header("moreau_factors");
  j["method"] = f.method;
  j["start"] = f.start;
  j["iterations"] = f.iterations;
  j["u"] = element_to_json(f.u);
  j["v"] = element_to_json(f.v);
  j["proj_K"] = element_to_json(f.proj_K());
  j["proj_Kstar"] = element_to_json(f.proj_Kstar());
  j["residuals"] = {{"reconstruction", f.reconstruction_residual},
                    {"cross", f.cross_residual},
                    {"orthogonality", f.orthogonality},
                    {"kolmogorov", f.kolmogorov}};
  return j;
}

json to_json(const ComplementarityReport& r) {
  json j = header("complementarity_report");
  j["all_hold"] = r.all_hold();
  j["consistent"] = r.consistent();
  j["x_in_K"] = r.x_in_K;
  j["y_in_Kstar"] = r.y_in_Kstar;
  j["inner_xy"] = r.xy_inner;
  j["xy_diag"] = r.xy_diag;
  json c = json::array();
  for (const auto& cond : r.conditions)
    c.push_back({{"label", cond.label}, {"holds", cond.holds}, {"residual", cond.residual}, {"detail", cond.detail}});
  j["conditions"] = c;
  return j;
}

json to_json(const Solution& s) {
  json j = header("solution");
  j["converged"] = s.converged;
  j["method"] = s.method;
  j["start"] = s.start;
  j["iterations"] = s.iterations;
  j["residual_norm"] = s.residual_norm;
  j["x"] = element_to_json(s.x);
  j["y"] = element_to_json(s.y);
  json rep = to_json(s.report);
  rep.erase("format_version");
  j["report"] = rep;
  return j;
}

json to_json(const PropertyVerdict& v) {
  json j = header("property_verdict");
  j["property"] = v.property;
  j["outcome"] = to_string(v.outcome);
  j["exact"] = v.exact;
  j["samples"] = v.samples;
  j["directed_samples"] = v.directed_samples;
  j["indeterminate"] = v.indeterminate;
  j["seed"] = v.seed;
  if (v.modulus) j["modulus"] = {{"name", v.modulus_name}, {"value", *v.modulus}};
  if (!v.exponent.empty()) j["exponent"] = v.exponent;
  if (v.has_counterexample()) {
    json w;
    if (v.witness_x) w["x"] = element_to_json(*v.witness_x);
    if (v.witness_y) w["y"] = element_to_json(*v.witness_y);
    w["value"] = v.value;
    w["threshold"] = v.threshold;
    if (!v.argmax.empty()) {
      json a = json::array();
      for (int i : v.argmax) a.push_back(i + 1);
      w["argmax"] = a;
    }
    if (v.epsilon) w["epsilon"] = *v.epsilon;
    if (!v.ray.empty()) {
      json ray = json::array();
      for (const auto& x : v.ray) ray.push_back(element_to_json(x));
      w["ray"] = ray;
    }
    j["witness"] = w;
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const AuditReport& r) {
  json j = header("audit_report");
  j["consistent"] = r.consistent();
  j["points"] = r.points;
  j["inconsistencies"] = r.inconsistencies;
  json vs = json::array();
  for (const auto& v : r.verdicts) {
    json e = to_json(v);
    e.erase("format_version");
    vs.push_back(e);
  }
  j["verdicts"] = vs;
  return j;
}

json to_json(const BoundReport& r) {
  json j = header("bound_report");
  j["kappa"] = r.kappa;
  j["kappa_source"] = r.kappa_source;
  j["alpha"] = r.alpha;
  j["alpha_source"] = r.alpha_source;
  j["exponent"] = r.exponent;
  j["slack"] = r.slack;
  j["seed"] = r.seed;
  j["samples"] = r.samples.size();
  j["lower_violations"] = r.lower_violations;
  j["upper_violations"] = r.upper_violations;
  j["worst_lower_margin"] = r.worst_lower_margin;
  j["worst_upper_margin"] = r.worst_upper_margin;
  j["hypothesis"] = {{"xstar_diagonal", r.xstar_diagonal}, {"ystar_diagonal", r.ystar_diagonal}};
  j["warnings"] = r.warnings;
  json rows = json::array();
  for (const auto& s : r.samples)
    rows.push_back({{"phi", s.phi},
                    {"distance", s.distance},
                    {"lower", s.lower},
                    {"upper", s.upper},
                    {"lower_ok", s.lower_ok},
                    {"upper_ok", s.upper_ok},
                    {"regime", s.regime}});
  j["rows"] = rows;
  return j;
}

// ---------------------------------------------------------------------------
// Corpus

const std::vector<std::string>& corpus_algebras() {
  static const std::vector<std::string> names = {"builtin:orthant(4)", "builtin:psd(3)", "builtin:vinberg5"};
  return names;
}

namespace {

std::string file_stem(const std::string& ref) {
  std::string s = ref.substr(ref.find(':') + 1);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '(' || c == ')'; }), s.end());
  return s;
}

}  // namespace

std::vector<fs::path> write_corpus(const fs::path& dir) {
  std::vector<fs::path> out;
  auto write = [&](const fs::path& p, const json& doc) {
    write_json_file(p, doc);
    out.push_back(p);
  };
  for (const auto& ref : corpus_algebras())
    write(dir / "algebras" / (file_stem(ref) + ".json"), spec_to_json(load_algebra(ref)->spec()));

  for (std::size_t a = 0; a < corpus_algebras().size(); ++a) {
    const std::string& ref = corpus_algebras()[a];
    const AlgebraPtr alg = load_algebra(ref);
    const auto& classes = all_problem_classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (int k = 0; k < kBundlesPerClass; ++k) {
        const std::uint64_t seed = 10000 * (a + 1) + 100 * c + k;
        const InstanceBundle b = random_problem(alg, ref, seed, classes[c]);
        std::ostringstream name;
        name << file_stem(ref) << '_' << to_string(classes[c]) << '_' << std::setw(2) << std::setfill('0') << k
             << ".json";
        write(dir / "bundles" / name.str(), bundle_to_json(b));
      }
    }
  }

  const AlgebraPtr v5 = builtin("vinberg5");
  const Element x = from_hermitian(v5, (VectorXd(5) << 5, -2, 1, -2, 5).finished());
  const Element y = from_hermitian(v5, (VectorXd(5) << 1, 2, 4, 2, 4).finished());
  {
    InstanceBundle b{"builtin:vinberg5", v5, HccpProblem(v5, Map::zero(v5), y, "vinberg pair, F = 0, q = y"),
                     std::nullopt, std::nullopt, "", 0, "", {}, {}, ""};
    write(dir / "vinberg_pair.problem.json", bundle_to_json(b));
    write(dir / "vinberg_pair.x.json", element_to_json(x, "builtin:vinberg5"));
    write(dir / "vinberg_pair.y.json", element_to_json(y, "builtin:vinberg5"));
  }
  {
    InstanceBundle b{"builtin:vinberg5", v5,
                     HccpProblem(v5, Map::identity(v5), -unit(v5), "vinberg5, F = identity, q = -e"),
                     unit(v5), Element(v5), "", 0, "", {}, {}, ""};
    write(dir / "identity_minus_e.problem.json", bundle_to_json(b));
    write(dir / "identity_minus_e.xstar.json", element_to_json(unit(v5), "builtin:vinberg5"));
  }
  return out;
}

std::vector<fs::path> corpus_bundles(const fs::path& dir) {
  std::vector<fs::path> out;
  const fs::path b = dir / "bundles";
  if (!fs::exists(b)) return out;
  for (const auto& e : fs::directory_iterator(b))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hcone
