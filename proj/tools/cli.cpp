#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "canon/errors.hpp"
#include "canon/finite_system.hpp"
#include "canon/io.hpp"
#include "canon/linear_system.hpp"
#include "canon/morphism.hpp"
#include "canon/realization.hpp"
#include "canon/reduction.hpp"
#include "canon/subspace.hpp"

namespace canon::cli {

namespace {

struct Config {
  double tol = kDefaultTol;
  double margin = kDefaultMargin;
  std::size_t horizon = 200;
  std::optional<double> eps;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string output;
};

struct Result {
  int code = kOk;
  Json report;
};

Json base_report(const char* command) {
  return Json{{"schema", 1}, {"command", command}};
}

// Both plain systems and reduce output are accepted wherever a linear
// system is expected.
std::optional<LinearSystem> as_linear(const Json& doc) {
  switch (document_kind(doc)) {
    case DocumentKind::kLinearSystem:
      return linear_system_from_json(doc);
    case DocumentKind::kReducedRealization:
      return reduced_realization_from_json(doc).system;
    default:
      return std::nullopt;
  }
}

const char* esp_word(EspStatus s) {
  switch (s) {
    case EspStatus::kHolds:
      return "holds";
    case EspStatus::kFails:
      return "fails";
    case EspStatus::kIndeterminate:
      return "indeterminate";
  }
  return "";
}

Json cycle_to_json(const PairCycle& c) {
  Json pairs = Json::array();
  for (const auto& [x, y] : c.pairs) pairs.push_back({x, y});
  return Json{{"pairs", pairs}, {"inputs", c.inputs}};
}

Json report_to_json(const ReductionReport& r) {
  return Json{{"impulse_gap", r.impulse_gap},
              {"reduced_canonical", r.reduced_canonical.canonical},
              {"section_residual", r.section_residual},
              {"kernel_residual", r.kernel_residual},
              {"intertwining_residual", r.intertwining_residual},
              {"spectrum_residual", r.spectrum_residual},
              {"reduced_rho", r.reduced_rho},
              {"passes", r.passes}};
}

// ---------------------------------------------------------------------------

Result check_esp(const Json& doc, const Config& cfg) {
  Result res{kOk, base_report("check-esp")};
  if (auto sys = as_linear(doc)) {
    const EspCertificate cert = esp_check(*sys, cfg.margin);
    res.report["kind"] = "linear";
    res.report["dim"] = sys->dim();
    res.report["rho"] = cert.rho;
    res.report["esp"] = esp_word(cert.status);
    res.code = cert.status == EspStatus::kHolds   ? kOk
               : cert.status == EspStatus::kFails ? kSemanticFailure
                                                  : kIndeterminate;
    return res;
  }
  if (document_kind(doc) != DocumentKind::kFiniteSystem) {
    throw ParseError("expected a linear or finite system");
  }
  const FiniteSystem sys = finite_system_from_json(doc);
  res.report["kind"] = "finite";
  res.report["states"] = sys.n_states();
  if (const auto cycle = find_pair_cycle(sys)) {
    res.report["esp"] = "fails";
    res.report["cycle"] = cycle_to_json(*cycle);
    res.code = kSemanticFailure;
  } else {
    res.report["esp"] = "holds";
    res.report["pair_graph_depth"] = pair_graph_depth(sys);
  }
  return res;
}

Result reduce_cmd(const Json& doc, const Config& cfg) {
  Result res{kOk, base_report("reduce")};
  if (auto sys = as_linear(doc)) {
    const ReducedRealization red = reduce(*sys, cfg.tol, cfg.margin);
    const ReductionReport rep =
        verify_reduction(*sys, red, cfg.horizon, cfg.tol);
    Json body = to_json(red);
    body.update(res.report);
    res.report = std::move(body);
    res.report["kind"] = "linear";
    res.report["dim"] = red.system.dim();
    res.report["unreliable_rank"] = red.unreliable_rank;
    res.report["verification"] = report_to_json(rep);
    res.code = rep.passes ? kOk : kSemanticFailure;
    return res;
  }
  if (document_kind(doc) != DocumentKind::kFiniteSystem) {
    throw ParseError("expected a linear or finite system");
  }
  const FiniteSystem sys = finite_system_from_json(doc);
  const FiniteSystem red = reduce_finite(sys);
  const Partition classes = nerode_partition(sys);
  Json body = to_json(red);
  body.update(res.report);
  res.report = std::move(body);
  res.report["kind"] = "finite";
  res.report["original_states"] = sys.n_states();
  res.report["dim"] = red.n_states();
  res.report["class_of"] = classes.class_of;
  const bool canonical = esp_check_finite(red) &&
                         reachable_states_finite(red).size() == red.n_states() &&
                         nerode_partition(red).n_classes == red.n_states();
  res.report["reduced_canonical"] = canonical;
  res.code = canonical ? kOk : kSemanticFailure;
  return res;
}

Result realize(const Json& doc, const Config& cfg) {
  Result res{kOk, base_report("realize")};
  ImpulseResponse psi;
  switch (document_kind(doc)) {
    case DocumentKind::kFilter:
      psi = filter_from_json(doc).as_impulse_response();
      break;
    case DocumentKind::kImpulseResponse:
      psi = impulse_response_from_json(doc);
      break;
    default:
      throw ParseError("expected a filter {\"psi\"} or impulse response");
  }

  ReducedRealization red;
  std::size_t kept = psi.coefficients.size();
  std::optional<double> truncation;
  if (cfg.eps) {
    const ApproximateRealization approx =
        approximate_realization(psi, *cfg.eps, cfg.tol);
    red = approx.realization;
    kept = approx.kept;
    truncation = approx.truncation_error;
  } else if (psi.tail_bound > 0.0) {
    throw Infeasible("kernel has a nonzero tail; pass --eps above the floor",
                     psi.tail_bound);
  } else {
    red = minimal_realization(FiniteMemoryFilter::from_impulse_response(psi),
                              cfg.tol);
  }
  ImpulseResponse prefix{
      std::vector<double>(psi.coefficients.begin(),
                          psi.coefficients.begin() + kept),
      0.0};
  const Eigen::Index oracle =
      hankel_rank(FiniteMemoryFilter::from_impulse_response(prefix), cfg.tol);

  Json body = to_json(red);
  body.update(res.report);
  res.report = std::move(body);
  res.report["dim"] = red.system.dim();
  res.report["hankel_rank"] = oracle;
  res.report["memory"] = kept;
  if (truncation) res.report["truncation_error"] = *truncation;
  return res;
}

Result compare_linear(const LinearSystem& a, const LinearSystem& b,
                      const Config& cfg) {
  Result res{kOk, base_report("compare")};
  res.report["kind"] = "linear";
  const std::vector<double> pa = markov_parameters(a, cfg.horizon);
  const std::vector<double> pb = markov_parameters(b, cfg.horizon);
  double gap = 0.0;
  for (std::size_t j = 0; j < pa.size(); ++j) {
    gap = std::max(gap, std::abs(pa[j] - pb[j]));
  }
  res.report["impulse_gap"] = gap;
  res.report["same_filter"] = gap < cfg.tol;
  res.code = gap < cfg.tol ? kOk : kSemanticFailure;
  if (gap >= cfg.tol) return res;

  const bool esp = esp_check(a, cfg.margin).holds() &&
                   esp_check(b, cfg.margin).holds();
  const bool canonical = esp && is_canonical(a, cfg.tol, cfg.margin).canonical &&
                         is_canonical(b, cfg.tol, cfg.margin).canonical;
  res.report["both_canonical"] = canonical;
  if (!canonical) return res;
  try {
    const LinearMap B = find_isomorphism(a, b, cfg.tol);
    res.report["isomorphism"] = to_json(B);
    res.report["condition_number"] = condition_number(B);
  } catch (const NoIsomorphism& e) {
    res.report["isomorphism_error"] = e.what();
  }
  return res;
}

Result compare_finite(const FiniteSystem& a, const FiniteSystem& b) {
  Result res{kOk, base_report("compare")};
  res.report["kind"] = "finite";
  if (!esp_check_finite(a) || !esp_check_finite(b)) {
    res.report["esp"] = "fails";
    res.code = kSemanticFailure;
    return res;
  }
  const FiniteSystem ra = reduce_finite(a);
  const FiniteSystem rb = reduce_finite(b);
  res.report["reduced_states"] = {ra.n_states(), rb.n_states()};
  const auto phi = find_finite_isomorphism(ra, rb);
  res.report["same_filter"] = phi.has_value();
  if (phi) {
    res.report["isomorphism"] = *phi;
  } else {
    res.code = kSemanticFailure;
  }
  return res;
}

Result compare(const Json& doc_a, const Json& doc_b, const Config& cfg) {
  const auto a = as_linear(doc_a);
  const auto b = as_linear(doc_b);
  if (a && b) return compare_linear(*a, *b, cfg);
  if (document_kind(doc_a) == DocumentKind::kFiniteSystem &&
      document_kind(doc_b) == DocumentKind::kFiniteSystem) {
    return compare_finite(finite_system_from_json(doc_a),
                          finite_system_from_json(doc_b));
  }
  throw ParseError("compare needs two linear or two finite systems");
}

// Runs the finite-system pipeline and cross-checks each stage against
// simulation or word enumeration.
Result oracle(const Json& doc, const Config& cfg) {
  Result res{kOk, base_report("oracle")};
  if (document_kind(doc) != DocumentKind::kFiniteSystem) {
    throw ParseError("oracle expects a finite system");
  }
  const FiniteSystem sys = finite_system_from_json(doc);
  const std::size_t n = sys.n_states();
  std::mt19937_64 rng(cfg.seed);
  res.report["states"] = n;
  res.report["trials"] = cfg.trials;

  if (const auto cycle = find_pair_cycle(sys)) {
    res.report["esp"] = "fails";
    res.report["cycle"] = cycle_to_json(*cycle);
    res.code = kSemanticFailure;
    return res;
  }
  res.report["esp"] = "holds";
  const std::size_t depth = pair_graph_depth(sys);
  res.report["pair_graph_depth"] = depth;
  Json checks = Json::object();

  const std::size_t washout = 4 * n * n;
  checks["simulation_merges"] = simulation_merges(sys, cfg.trials, washout, rng);

  const std::vector<State> reach = reachable_states_finite(sys);
  std::set<State> seen;
  std::uniform_int_distribution<State> start(0, n - 1);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    seen.insert(sys.run(start(rng), random_word(sys.n_inputs(), 4 * n, rng)));
  }
  res.report["reachable"] = reach;
  checks["reachable_contains_simulated"] =
      std::includes(reach.begin(), reach.end(), seen.begin(), seen.end());

  const Partition p = nerode_partition(sys);
  res.report["classes"] = p.n_classes;
  res.report["class_of"] = p.class_of;
  checks["partition_matches_words"] = partition_by_words(sys, reach, n) == p;

  const FiniteSystem red = reduce_finite(sys);
  res.report["reduced_states"] = red.n_states();
  checks["reduced_canonical"] =
      esp_check_finite(red) &&
      reachable_states_finite(red).size() == red.n_states() &&
      nerode_partition(red).n_classes == red.n_states();

  bool same_outputs = true;
  std::uniform_int_distribution<State> start_red(0, red.n_states() - 1);
  for (std::size_t i = 0; i < cfg.trials && same_outputs; ++i) {
    const Word pre = random_word(sys.n_inputs(), 4 * n, rng);
    const Word w = random_word(sys.n_inputs(), 50, rng);
    State x = sys.run(start(rng), pre);
    State y = red.run(start_red(rng), pre);
    for (Symbol z : w) {
      x = sys.next(x, z);
      y = red.next(y, z);
      same_outputs = same_outputs && sys.output(x) == red.output(y);
    }
  }
  checks["reduced_same_outputs"] = same_outputs;

  bool forgets = true;
  for (std::size_t i = 0; i < std::min<std::size_t>(cfg.trials, 100); ++i) {
    const Word u = random_word(sys.n_inputs(), washout, rng);
    const Word v = random_word(sys.n_inputs(), washout, rng);
    const Word z = random_word(sys.n_inputs(), depth + 10, rng);
    const std::vector<int> gaps = ifp_empirical(sys, u, v, z);
    for (std::size_t t = depth + 1; t <= gaps.size(); ++t) {
      forgets = forgets && gaps[t - 1] == 0;
    }
  }
  checks["ifp_decay"] = forgets;

  res.report["checks"] = checks;
  for (const auto& [name, ok] : checks.items()) {
    if (!ok.get<bool>()) res.code = kSemanticFailure;
  }
  return res;
}

// ---------------------------------------------------------------------------

void render_text(const Json& j, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render_text(value, name, os);
    } else if (value.is_string()) {
      os << name << " = " << value.get<std::string>() << '\n';
    } else if (value.is_number_float()) {
      os << name << " = " << value.get<double>() << '\n';
    } else {
      os << name << " = " << value.dump() << '\n';
    }
  }
}

std::string render(const Json& report, const std::string& format) {
  std::ostringstream os;
  if (format == "structured") {
    os << report.dump(2) << '\n';
  } else {
    Json shown = report;
    shown.erase("schema");
    render_text(shown, "", os);
  }
  return os.str();
}

// Written beside the target and renamed over it, so readers never see a
// partial document.
void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Canonical and minimal state-space realizations", "canon"};
  app.fallthrough();
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--tol", cfg.tol, "rank tolerance")->check(CLI::PositiveNumber);
  app.add_option("--margin", cfg.margin, "ESP margin below rho = 1")
      ->check(CLI::PositiveNumber);
  app.add_option("--horizon", cfg.horizon, "impulse-response horizon");
  app.add_option("--eps", cfg.eps, "approximation budget for realize")
      ->check(CLI::PositiveNumber);
  app.add_option("--trials", cfg.trials, "random trials for oracle")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--output", cfg.output, "write the report here");

  std::vector<std::string> files;
  auto* esp_cmd = app.add_subcommand("check-esp", "echo state property");
  esp_cmd->add_option("file", files, "system")->required()->expected(1);
  auto* reduce_sub = app.add_subcommand("reduce", "canonical reduction");
  reduce_sub->add_option("file", files, "system")->required()->expected(1);
  auto* realize_sub = app.add_subcommand("realize", "minimal realization");
  realize_sub->add_option("file", files, "filter")->required()->expected(1);
  auto* compare_sub = app.add_subcommand("compare", "compare two systems");
  compare_sub->add_option("files", files, "two systems")->required()->expected(2);
  auto* oracle_sub = app.add_subcommand("oracle", "finite-system checks");
  oracle_sub->add_option("file", files, "finite system")->required()->expected(1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Result res;
    std::vector<Json> docs;
    for (const std::string& f : files) docs.push_back(read_json_file(f));
    if (esp_cmd->parsed()) {
      res = check_esp(docs[0], cfg);
    } else if (reduce_sub->parsed()) {
      res = reduce_cmd(docs[0], cfg);
    } else if (realize_sub->parsed()) {
      res = realize(docs[0], cfg);
    } else if (compare_sub->parsed()) {
      res = compare(docs[0], docs[1], cfg);
    } else {
      res = oracle(docs[0], cfg);
    }
    const std::string text = render(res.report, cfg.format);
    if (cfg.output.empty()) {
      out << text;
    } else {
      write_atomically(cfg.output, text);
    }
    return res.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const EspViolation& e) {
    err << "echo state property: " << e.what() << '\n';
    return kSemanticFailure;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << " (floor " << e.floor() << ")\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSemanticFailure;
  }
}

}  // namespace canon::cli
