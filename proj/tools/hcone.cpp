#include "hcone/instances.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace hcone;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::optional<double> tol;
  std::uint64_t seed = 1;
  long samples = 1000;
  std::string method = "newton";
  int starts = 1;
  std::string format = "text";
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string coords(const Element& x) {
  std::ostringstream os;
  os << '(';
  const Eigen::VectorXd h = to_hermitian(x);
  for (int k = 0; k < h.size(); ++k) os << (k ? ", " : "") << num(h[k]);
  os << ')';
  return os.str();
}

bool json_out(const Common& c) { return c.format == "json"; }

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void print_report(const ComplementarityReport& r) {
  std::cout << "x in K:  " << (r.x_in_K ? "yes" : "no") << '\n';
  std::cout << "y in K*: " << (r.y_in_Kstar ? "yes" : "no") << '\n';
  std::cout << "<x,y> = " << num(r.xy_inner) << '\n';
  for (std::size_t i = 0; i < r.xy_diag.size(); ++i)
    std::cout << "<xy,e_" << i + 1 << "> = " << num(r.xy_diag[i]) << '\n';
  for (const auto& c : r.conditions)
    std::cout << "(" << c.label << ") " << (c.holds ? "PASS" : "FAIL") << "  " << c.detail << " = " << num(c.residual)
              << '\n';
  std::cout << (r.all_hold() ? "PASS" : "FAIL") << (r.consistent() ? "" : " (conditions disagree)") << '\n';
}

void print_verdict(const PropertyVerdict& v) {
  std::cout << v.property << ": " << (v.has_counterexample() ? "counterexample" : "no counterexample")
            << (v.exact ? " (exact)" : "") << '\n';
  std::cout << "samples " << v.samples << ", directed " << v.directed_samples << ", seed " << v.seed << '\n';
  if (v.indeterminate) std::cout << "indeterminate " << v.indeterminate << '\n';
  if (v.modulus) std::cout << v.modulus_name << " = " << num(*v.modulus) << '\n';
  if (v.has_counterexample()) {
    if (v.witness_x) std::cout << "x = " << coords(*v.witness_x) << '\n';
    if (v.witness_y) std::cout << "y = " << coords(*v.witness_y) << '\n';
    std::cout << "value " << num(v.value) << ", threshold " << num(v.threshold) << '\n';
    if (v.epsilon) std::cout << "epsilon " << num(*v.epsilon) << '\n';
    if (!v.argmax.empty()) {
      std::cout << "argmax";
      for (int i : v.argmax) std::cout << ' ' << i + 1;
      std::cout << '\n';
    }
  }
  if (!v.note.empty()) std::cout << v.note << '\n';
}

ProjectionOptions projection_for(const Common& c) {
  ProjectionOptions po;
  po.seed = mix_seed(c.seed, 0x9e);
  return po;
}

int cmd_axioms(const Common& c, const std::string& ref) {
  const AlgebraPtr alg = load_algebra(ref);
  const AxiomReport rep = verify_axioms(alg->spec(), c.tol.value_or(0.0));
  if (json_out(c)) {
    print_json(to_json(rep));
  } else {
    std::cout << "algebra " << rep.algebra << '\n';
    for (const auto& ch : rep.checks) {
      std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name << " (" << ch.tuples_checked << " tuples)";
      if (!ch.passed) std::cout << "  " << ch.witness;
      std::cout << '\n';
    }
    std::cout << (rep.all_passed() ? "all axioms PASS" : "axioms FAIL") << '\n';
  }
  return rep.all_passed() ? kOk : kFail;
}

int cmd_project(const Common& c, const std::string& ref, const std::string& file) {
  const AlgebraPtr alg = load_algebra(ref);
  const Element x = load_element(file, alg);
  if (!is_hermitian(x, 1e-12)) throw ParseError(file, "element is not Hermitian");
  try {
    const MoreauFactors f = project(x, projection_for(c));
    if (json_out(c)) {
      print_json(to_json(f));
    } else {
      std::cout << "method " << f.method << ", start " << f.start << ", iterations " << f.iterations << '\n';
      std::cout << "P_K(x)    = " << coords(f.proj_K()) << '\n';
      std::cout << "P_K*(-x)  = " << coords(f.proj_Kstar()) << '\n';
      std::cout << "||uu* - v*v - x|| = " << num(f.reconstruction_residual) << '\n';
      std::cout << "||vu||            = " << num(f.cross_residual) << '\n';
      std::cout << "|<uu*, v*v>|      = " << num(f.orthogonality) << '\n';
      std::cout << "kolmogorov gap    = " << num(f.kolmogorov) << '\n';
    }
    return kOk;
  } catch (const ProjectionFailure& e) {
    std::cerr << "projection failed: " << e.what() << '\n';
    return kFail;
  }
}

SolveOptions solve_options(const Common& c, const ProblemOptions& doc, const CLI::App& sub) {
  SolveOptions so;
  so.method = solve_method_from_string(sub.count("--method") ? c.method
                                                              : (doc.method ? to_string(*doc.method) : c.method));
  so.tol = c.tol ? *c.tol : doc.tol.value_or(so.tol);
  if (doc.max_iterations) so.max_iterations = *doc.max_iterations;
  so.projection = projection_for(c);
  return so;
}

int cmd_solve(const Common& c, const CLI::App& sub, const std::string& file, const std::string& report_path) {
  const ProblemDocument doc = load_problem(file);
  const HccpProblem& p = doc.bundle.problem;
  const SolveOptions so = solve_options(c, doc.options, sub);
  const int starts = sub.count("--starts") ? c.starts : doc.options.starts.value_or(c.starts);
  const std::uint64_t seed = sub.count("--seed") ? c.seed : doc.options.seed.value_or(c.seed);

  std::vector<Solution> sols = starts > 1 ? multistart(p, starts, seed, so) : std::vector<Solution>{solve(p, so)};
  const Solution* best = &sols.front();
  for (const auto& s : sols)
    if ((s.converged && !best->converged) || (s.converged == best->converged && s.residual_norm < best->residual_norm))
      best = &s;
  const double spread = solution_spread(sols);
  long converged = 0;
  for (const auto& s : sols) converged += s.converged;

  json j = to_json(*best);
  j["problem"] = p.label;
  j["starts"] = starts;
  j["converged_starts"] = converged;
  j["spread"] = spread;
  if (!report_path.empty()) write_json_file(report_path, j);

  if (json_out(c)) {
    print_json(j);
  } else {
    std::cout << "problem " << (p.label.empty() ? file : p.label) << '\n';
    std::cout << (best->converged ? "converged" : "not converged") << " (" << best->method << ", "
              << best->iterations << " iterations, start " << best->start << ")\n";
    std::cout << "residual " << num(best->residual_norm) << '\n';
    std::cout << "x = " << coords(best->x) << '\n';
    std::cout << "y = " << coords(best->y) << '\n';
    if (starts > 1) std::cout << "starts " << converged << "/" << starts << " converged, spread " << num(spread) << '\n';
    if (!report_path.empty()) std::cout << "report written to " << report_path << '\n';
  }
  return best->converged ? kOk : kFail;
}

int cmd_probe(const Common& c, const std::string& file, const std::string& property) {
  const ProblemDocument doc = load_problem(file);
  const HccpProblem& p = doc.bundle.problem;
  ProbeOptions po;
  po.samples = c.samples;
  po.seed = c.seed;
  po.sum.projection = projection_for(c);
  if (property == "audit") {
    const AuditReport rep = implication_audit(p.F, p.algebra, po);
    if (json_out(c)) {
      print_json(to_json(rep));
    } else {
      for (const auto& v : rep.verdicts)
        std::cout << std::left << std::setw(18) << v.property
                  << (v.has_counterexample() ? "counterexample" : "no counterexample") << (v.exact ? " (exact)" : "")
                  << '\n';
      std::cout << "points " << rep.points << '\n';
      for (const auto& s : rep.inconsistencies) std::cout << "inconsistent: " << s << '\n';
      std::cout << (rep.consistent() ? "chain consistent" : "chain INCONSISTENT") << '\n';
    }
    return rep.consistent() ? kOk : kFail;
  }
  const PropertyVerdict v = probe(property, p.F, p.algebra, po);
  if (json_out(c))
    print_json(to_json(v));
  else
    print_verdict(v);
  return kOk;
}

int cmd_verify(const Common& c, const std::string& file, const std::string& element) {
  const ProblemDocument doc = load_problem(file);
  const HccpProblem& p = doc.bundle.problem;
  const Element x = load_element(element, p.algebra);
  const ComplementarityReport r = verify_solution(p, x, c.tol.value_or(1e-6), projection_for(c));
  if (json_out(c)) {
    json j = to_json(r);
    j["x"] = element_to_json(x);
    j["y"] = element_to_json(p.y(x));
    print_json(j);
  } else {
    std::cout << "x = " << coords(x) << '\n';
    std::cout << "y = " << coords(p.y(x)) << '\n';
    print_report(r);
  }
  return r.all_hold() ? kOk : kFail;
}

int cmd_bound(const Common& c, const std::string& file, const std::string& element, std::optional<double> kappa,
              std::optional<double> alpha, const std::string& csv) {
  const ProblemDocument doc = load_problem(file);
  const HccpProblem& p = doc.bundle.problem;
  const Element xstar = load_element(element, p.algebra);
  BoundOptions bo;
  bo.samples = c.samples;
  bo.seed = c.seed;
  bo.kappa = kappa;
  bo.alpha = alpha;
  if (c.tol) bo.verify_tol = *c.tol;
  bo.projection = projection_for(c);
  BoundReport rep;
  try {
    rep = check_bound(p, xstar, bo);
  } catch (const BoundPreconditionError& e) {
    std::cerr << "bound: " << e.what() << '\n';
    return kFail;
  }
  if (!csv.empty()) {
    std::ofstream out(csv);
    out << rep.to_csv();
  }
  if (json_out(c)) {
    print_json(to_json(rep));
  } else {
    std::cout << "kappa " << num(rep.kappa) << " (" << rep.kappa_source << ")\n";
    std::cout << "alpha " << num(rep.alpha) << " (" << rep.alpha_source << ", " << rep.exponent << " exponent)\n";
    std::cout << "samples " << rep.samples.size() << ", slack " << num(rep.slack) << '\n';
    std::cout << "lower: " << rep.lower_violations << " violations, worst margin " << num(rep.worst_lower_margin)
              << '\n';
    std::cout << "upper: " << rep.upper_violations << " violations, worst margin " << num(rep.worst_upper_margin)
              << '\n';
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
    std::cout << (rep.holds() ? "PASS" : "FAIL") << '\n';
  }
  return rep.holds() ? kOk : kFail;
}

int cmd_gen(const Common& c, const std::string& cls, const std::string& ref, const std::string& out,
            const std::string& corpus) {
  if (!corpus.empty()) {
    const auto files = write_corpus(corpus);
    std::cout << "wrote " << files.size() << " files under " << corpus << '\n';
    return kOk;
  }
  if (cls.empty()) throw CLI::RequiredError("--class");
  const AlgebraPtr alg = load_algebra(ref);
  const std::string canonical = ref.rfind("builtin:", 0) == 0 ? ref : "builtin:" + ref;
  const InstanceBundle b = random_problem(alg, canonical, c.seed, problem_class_from_string(cls));
  const json j = bundle_to_json(b);
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
    std::cout << "wrote " << out << '\n';
  }
  return kOk;
}

int cmd_bench(const Common& c, const CLI::App& sub, const std::string& corpus, const std::string& out) {
  const auto files = corpus_bundles(corpus);
  if (files.empty()) throw ParseError(corpus, "no bundles found");
  std::ostringstream csv;
  csv << "instance,algebra,class,method,iters,residual,wall-time\n";
  int failures = 0;
  for (const auto& f : files) {
    const ProblemDocument doc = load_problem(f);
    const SolveOptions so = solve_options(c, doc.options, sub);
    const auto t0 = std::chrono::steady_clock::now();
    const Solution s = solve(doc.bundle.problem, so);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !s.converged;
    csv << f.stem().string() << ',' << doc.bundle.algebra->name() << ',' << doc.bundle.problem_class << ','
        << s.method << ',' << s.iterations << ',' << std::scientific << std::setprecision(3) << s.residual_norm << ','
        << std::fixed << std::setprecision(4) << dt << std::defaultfloat << '\n';
  }
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream o(out);
    o << csv.str();
    std::cout << "wrote " << files.size() << " rows to " << out << '\n';
  }
  if (failures) std::cerr << failures << " of " << files.size() << " instances did not converge\n";
  return failures ? kFail : kOk;
}

std::string default_corpus() {
  if (const char* e = std::getenv("HCONE_CORPUS")) return e;
#ifdef HCONE_CORPUS_DIR
  if (fs::exists(HCONE_CORPUS_DIR)) return HCONE_CORPUS_DIR;
#endif
  return "corpus";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous cone complementarity toolkit"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--tol", c.tol, "Tolerance")->envname("HCONE_TOL");
    s->add_option("--seed", c.seed, "Random seed")->envname("HCONE_SEED")->capture_default_str();
    s->add_option("--samples", c.samples, "Number of samples")->envname("HCONE_SAMPLES")->capture_default_str();
    s->add_option("--method", c.method, "Solver method")
        ->envname("HCONE_METHOD")
        ->check(CLI::IsMember({"newton", "fixedpoint"}))
        ->capture_default_str();
    s->add_option("--starts", c.starts, "Number of solver starts")
        ->envname("HCONE_STARTS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--format", c.format, "Output format")
        ->envname("HCONE_FORMAT")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  std::string a1, a2, property, report, csv, cls, algebra = "builtin:orthant(4)", out, corpus;
  std::optional<double> kappa, alpha;

  auto* axioms = app.add_subcommand("axioms", "Check the T-algebra axioms");
  axioms->add_option("algebra", a1, "Built-in name or algebra file")->required();
  auto* projectc = app.add_subcommand("project", "Moreau decomposition of an element");
  projectc->add_option("algebra", a1)->required();
  projectc->add_option("element", a2)->required()->check(CLI::ExistingFile);
  auto* solvec = app.add_subcommand("solve", "Solve a problem file");
  solvec->add_option("problem", a1)->required()->check(CLI::ExistingFile);
  solvec->add_option("--report", report, "Solution report path (default <stem>.solution.json)");
  auto* probec = app.add_subcommand("probe", "Probe a property of F");
  probec->add_option("problem", a1)->required()->check(CLI::ExistingFile);
  std::vector<std::string> props = property_names();
  props.push_back("audit");
  probec->add_option("--property", property, "Property name or 'audit'")->required()->check(CLI::IsMember(props));
  auto* verifyc = app.add_subcommand("verify", "Check complementarity of a candidate solution");
  verifyc->add_option("problem", a1)->required()->check(CLI::ExistingFile);
  verifyc->add_option("element", a2)->required()->check(CLI::ExistingFile);
  auto* boundc = app.add_subcommand("bound", "Check the global error bound around x*");
  boundc->add_option("problem", a1)->required()->check(CLI::ExistingFile);
  boundc->add_option("xstar", a2)->required()->check(CLI::ExistingFile);
  boundc->add_option("--kappa", kappa, "Lipschitz constant");
  boundc->add_option("--alpha", alpha, "Uniform trace-P modulus");
  boundc->add_option("--csv", csv, "Write per-sample rows");
  auto* genc = app.add_subcommand("gen", "Generate a known-solution bundle or the corpus");
  genc->add_option("--class", cls, "strongly_monotone, monotone, skew or P0_R0_candidate");
  genc->add_option("--algebra", algebra, "Built-in algebra")->capture_default_str();
  genc->add_option("--out", out, "Output file (default stdout)");
  genc->add_option("--corpus", corpus, "Write the full corpus under this directory");
  auto* benchc = app.add_subcommand("bench", "Solve every corpus bundle and emit CSV");
  benchc->add_option("--corpus", corpus, "Corpus directory");
  benchc->add_option("--out", out, "CSV path (default stdout)");
  for (auto* s : {axioms, projectc, solvec, probec, verifyc, boundc, genc, benchc}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*axioms) return cmd_axioms(c, a1);
    if (*projectc) return cmd_project(c, a1, a2);
    if (*solvec) {
      if (report.empty()) report = fs::path(a1).stem().string() + ".solution.json";
      if (report == "-") report.clear();
      return cmd_solve(c, *solvec, a1, report);
    }
    if (*probec) return cmd_probe(c, a1, property);
    if (*verifyc) return cmd_verify(c, a1, a2);
    if (*boundc) return cmd_bound(c, a1, a2, kappa, alpha, csv);
    if (*genc) return cmd_gen(c, cls, algebra, out, corpus);
    if (*benchc) return cmd_bench(c, *benchc, corpus.empty() ? default_corpus() : corpus, out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
