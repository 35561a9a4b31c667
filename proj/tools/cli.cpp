#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "arithreg/applications.hpp"
#include "arithreg/bohr.hpp"
#include "arithreg/errors.hpp"
#include "arithreg/reg_f2.hpp"
#include "arithreg/reg_general.hpp"
#include "selfcheck.hpp"

#ifndef ARITHREG_VERSION
#define ARITHREG_VERSION "unknown"
#endif

namespace arithreg::cli {

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  std::string group;
  std::vector<std::string> inputs;
  std::string set_path;
  double eps = 0.1;
  double delta = 0.1;
  std::optional<double> delta_prime;
  double tau = 0.1;
  double eta = 0.1;
  double kappa = 0.5;
  double omega = 0.1;
  int m = 1;
  std::string y;
  std::string character;
  std::vector<std::string> chars;
  std::string mode = "faithful";
  double scale = 8.0;
  int budget = 64;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> interval;
  int depth = 0;
  int samples = 5;
  std::string seed_characters = "none";
  bool regularity_path = false;
  std::string verify_path;
  std::string trace_path;
  std::string output_path;
  std::string format = "json";
  std::vector<std::string> mutate;
};

struct Output {
  json result;
  /// Field of `result` holding the rows of the CSV flattening; empty flattens every scalar.
  std::string table;
  std::optional<json> trace;
  int status = kOk;
  std::string text;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpecError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidSpecError("cannot write " + path);
  out << text;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

DenseFn read_set(const std::string& path, const GroupSpec& g) {
  DenseFn a(g);
  for (const auto& line : data_lines(read_text(path))) a[g.index_of(g.parse_element(line))] = 1.0;
  return a;
}

std::vector<DenseFn> read_sets(const std::vector<std::string>& paths, const GroupSpec& g) {
  std::vector<DenseFn> out;
  for (const auto& p : paths) out.push_back(read_set(p, g));
  return out;
}

GroupSpec parse_group(const std::string& spec) {
  GroupSpec g = GroupSpec::parse(spec);
  g.require_enumerable();
  return g;
}

std::vector<std::string> format_chars(const GroupSpec& g, const std::vector<std::size_t>& chars) {
  std::vector<std::string> out;
  for (auto c : chars) out.push_back(g.format(g.character(c)));
  return out;
}

std::vector<std::string> format_vecs(const std::vector<f2::Vec>& vs, int n) {
  std::vector<std::string> out;
  for (auto v : vs) out.push_back(f2::format_vec(v, n));
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const InequalityReport& r) {
  json j{{"part", r.part},    {"group", r.group},   {"d", r.d},         {"delta", r.delta},
         {"lhs", r.lhs},      {"rhs", r.rhs},       {"holds", r.holds}, {"slack", r.slack},
         {"hypothesis_ok", r.hypothesis_ok}, {"detail", r.detail}};
  if (r.delta_prime) j["deltaPrime"] = *r.delta_prime;
  if (r.tau) j["tau"] = *r.tau;
  return j;
}

ModeConfig mode_of(const RunConfig& c) {
  ModeConfig m;
  m.mode = parse_mode(c.mode);
  m.scale = c.scale;
  return m;
}

RegularizeOptions regularize_options(const RunConfig& c) {
  RegularizeOptions o;
  o.mode = mode_of(c);
  o.budget = c.budget;
  return o;
}

json regularity_summary(const RegularizeResult& r) {
  const GroupSpec& g = r.pair.group();
  return json{{"regular", r.regular},
              {"budget_exhausted", r.budget_exhausted},
              {"iterations", r.trace.size()},
              {"iteration_bound", r.iteration_bound},
              {"d", r.pair.d()},
              {"R", format_chars(g, r.pair.R().chars())},
              {"eta", r.pair.eta()},
              {"eta2", r.pair.eta2()},
              {"final_irregular", r.final_irregular},
              {"final_index", r.final_index.total},
              {"degenerate", r.pair.degenerate()},
              {"psi1_mass_at_zero", r.pair.psi1().mass_at_zero()},
              {"psi2_mass_at_zero", r.pair.psi2().mass_at_zero()}};
}

json regularity_trace(const RegularizeResult& r, double eps) {
  const GroupSpec& g = r.pair.group();
  json rows = json::array();
  for (const auto& t : r.trace) {
    rows.push_back(json{{"d", t.d_before},
                        {"d_after", t.d_after},
                        {"eta", t.eta_before},
                        {"eta2", t.eta2_before},
                        {"eta_after", t.eta_after},
                        {"per_set_irregular", t.irregular_counts},
                        {"branch", t.branch},
                        {"set", t.set},
                        {"witnesses", format_chars(g, t.witnesses)},
                        {"index_before", t.index_before},
                        {"index_after", t.index_after},
                        {"required_gain", t.required_gain},
                        {"gain_asserted", t.gain_asserted}});
  }
  return json{{"eps", eps}, {"iterations", rows}};
}

Output cmd_count(const RunConfig& c) {
  const GroupSpec g = parse_group(c.group);
  const auto sets = read_sets(c.inputs, g);
  if (sets.size() < 2) throw DomainError("count needs at least two sets");
  Output o;
  const double spectral = zero_sum_count(sets);
  o.result = {{"k", sets.size()}, {"spectral", spectral}, {"value", std::round(spectral)}};
  try {
    o.result["brute_force"] = brute_force_zero_sum(sets);
  } catch (const ResourceError&) {
    o.result["brute_force"] = nullptr;
  }
  return o;
}

Output cmd_regularize_f2(const RunConfig& c) {
  const GroupSpec g = parse_group(c.group);
  if (!g.is_elementary2()) throw DomainError("regularize-f2 needs a group 2^n, got " + g.to_string());
  if (!(c.eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
  const DenseFn a = read_set(c.set_path, g);
  const F2RegReport r = regularize_f2(a, c.eps);
  const int n = g.f2_dim();
  Output o;
  o.result = {{"eps", c.eps},
              {"iterations", r.iterations},
              {"final_dim", r.subgroup.dim()},
              {"irregular_values", r.irregular_values},
              {"subgroup", format_vecs(r.subgroup.basis(), n)},
              {"final_index", r.index_trace.back()}};
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(format_vecs(w, n));
  o.trace = json{{"eps", c.eps},
                 {"dims", r.dims},
                 {"index_trace", r.index_trace},
                 {"irregular_counts", r.irregular_counts},
                 {"witnesses", witnesses}};
  return o;
}

Output cmd_regularize(const RunConfig& c) {
  const GroupSpec g = parse_group(c.group);
  const auto sets = read_sets(c.inputs, g);
  RegularizeOptions opt = regularize_options(c);
  if (c.seed_characters == "interval") {
    if (!g.is_cyclic()) throw DomainError("interval seed characters need a cyclic group");
    opt.start = interval_start_characters(g.order());
  }
  const RegularizeResult r = regularize(sets, c.eps, opt);
  Output o;
  o.result = regularity_summary(r);
  o.result["k"] = sets.size();
  o.result["per_set_index"] = r.final_index.per_set;
  o.trace = regularity_trace(r, c.eps);
  o.result["trace"] = o.trace->at("iterations");
  o.table = "trace";
  return o;
}

Output cmd_remove(const RunConfig& c) {
  const GroupSpec g = parse_group(c.group);
  const auto sets = read_sets(c.inputs, g);
  Output o;
  if (g.is_elementary2() && sets.size() == 1) {
    const TriangleRemovalF2 r = remove_triangles_f2(sets.front(), c.eps);
    o.result = {{"kind", "f2-triangles"},
                {"triangles_before", r.triangles_before},
                {"triangles_after", r.exact_triangles_after},
                {"spectral_after", r.spectral_triangles_after},
                {"triangle_free", r.triangle_free},
                {"removed", r.reduced.removed},
                {"removed_irregular", r.reduced.removed_irregular},
                {"removed_sparse", r.reduced.removed_sparse},
                {"removal_bound", r.reduced.removal_bound},
                {"removal_within_bound", r.removal_within_bound},
                {"coupling_threshold", r.coupling_threshold},
                {"coupling_holds", r.coupling_holds},
                {"subgroup_dim", r.regularity.subgroup.dim()},
                {"iterations", r.regularity.iterations}};
    return o;
  }
  const RemovalCertificate r = zero_sum_removal(sets, c.eps, regularize_options(c));
  o.result = {{"kind", "zero-sum"},
              {"k", sets.size()},
              {"tuples_before", r.tuples_before},
              {"spectral_after", r.spectral_after},
              {"exact_after", optional_number(r.exact_after)},
              {"zero_sum_free", r.zero_sum_free},
              {"removed", r.reduced.removed},
              {"removal_bound", r.reduced.removal_bound},
              {"removal_within_bound", r.removal_within_bound},
              {"density_threshold", r.reduced.density_threshold},
              {"coupling", r.coupling},
              {"coupling_holds", r.coupling_holds},
              {"regularity", regularity_summary(r.regularity)}};
  return o;
}

Output cmd_bohr_check(const RunConfig& c) {
  const GroupSpec g = parse_group(c.group);
  std::vector<Character> chars;
  for (const auto& s : c.chars) chars.push_back(g.parse_character(s));
  const FrequencySet gamma(g, chars);
  const std::size_t y = c.y.empty() ? 0 : g.index_of(g.parse_element(c.y));
  const std::size_t character = c.character.empty() ? (gamma.empty() ? 0 : gamma.chars().front())
                                                    : g.index_of(g.parse_character(c.character));
  const DenseFn f = c.set_path.empty() ? DenseFn(g, 1.0) : read_set(c.set_path, g);

  json rows = json::array();
  const BohrSizeReport size = check_bohr_size(gamma, c.delta);
  rows.push_back(to_json(size.part_i));
  rows.push_back(to_json(size.part_ii));
  for (const char* part : {"i", "ii", "iii", "iv"}) rows.push_back(to_json(check_beta(part, gamma, c.delta, y, c.eta)));
  const BohrCutoff cutoff(gamma, c.delta);
  rows.push_back(to_json(check_tail_bound(cutoff, c.eta)));
  rows.push_back(to_json(check_sqrt_lipschitz(cutoff, y)));
  rows.push_back(to_json(check_bohr_domination(gamma, c.delta)));
  CutoffCheckInput in;
  in.cutoff = &cutoff;
  in.tau = c.tau;
  in.character = character;
  in.y = y;
  in.f = &f;
  in.m = c.m;
  in.kappa = c.kappa;
  in.omega = c.omega;
  std::optional<BohrCutoff> prime;
  std::vector<std::string> parts{"i", "ii", "iii", "iv", "iv-hat", "v"};
  if (c.delta_prime) {
    prime.emplace(gamma, *c.delta_prime);
    in.cutoff_prime = &*prime;
    for (const char* p : {"vi", "vii", "viii", "ix"}) parts.emplace_back(p);
  }
  for (const auto& p : parts) rows.push_back(to_json(check_cutoff(p, in)));
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r["hypothesis_ok"].get<bool>() && !r["holds"].get<bool>() ? 1 : 0;
  Output o;
  o.result = {{"reports", rows}, {"violations", violations}};
  o.table = "reports";
  return o;
}

json path_json(const RegularityPath& p) {
  const ProgressionWeightReport& w = p.weight;
  json j{{"regularity", regularity_summary(p.regularity)},
         {"nu_total", p.nu.total},
         {"nu_spectral_total", p.nu.spectral_total},
         {"nu_identity_defect", p.nu.identity_defect},
         {"nu_bound", to_json(p.nu.bound)},
         {"weighted", w.weighted},
         {"weighted_nonzero", w.weighted_nonzero},
         {"local_sum", w.local_sum},
         {"main_term", w.main_term},
         {"cs_middle", w.cs_middle},
         {"cube_term", w.cube_term},
         {"chain_holds", w.chain_holds},
         {"lower_bound", w.lower_bound},
         {"lower_bound_holds", w.lower_bound_holds},
         {"asserted", w.asserted},
         {"degenerate", w.degenerate}};
  j["far_mass"] = optional_number(p.far_mass);
  return j;
}

Output cmd_bhk(const RunConfig& c) {
  BhkOptions opt;
  opt.regularity_path = c.regularity_path;
  opt.regularize = regularize_options(c);
  Output o;
  if (c.interval) {
    const IntegerSet a = IntegerSet::parse(read_text(c.set_path), *c.interval);
    const BhkIntervalResult r = bhk_witness_interval(a, c.eps, opt);
    o.result = {{"kind", "interval"},
                {"n", *c.interval},
                {"d", r.d ? json(*r.d) : json(nullptr)},
                {"d_limit", r.d_limit},
                {"genuine", r.genuine},
                {"modular", r.modular},
                {"alpha", r.alpha},
                {"bound", r.bound},
                {"bound_ok", r.bound_ok},
                {"coarse_bound", r.coarse_bound}};
    if (r.path) o.result["regularity_path"] = path_json(*r.path);
    return o;
  }
  if (c.group.empty()) throw DomainError("bhk needs --group or --interval");
  const GroupSpec g = parse_group(c.group);
  const BhkGroupResult r = bhk_witness_group(read_set(c.set_path, g), c.eps, opt);
  o.result = {{"kind", "group"},
              {"d", g.format_element(r.d)},
              {"count", r.count},
              {"alpha", r.alpha},
              {"bound", r.bound},
              {"bound_ok", r.bound_ok}};
  if (r.path) o.result["regularity_path"] = path_json(*r.path);
  return o;
}

Output cmd_sumfree(const RunConfig& c) {
  const IntegerSet a = IntegerSet::parse(read_text(c.set_path), c.n);
  const SumFreeResult r = sum_free_decompose(a, c.eps, regularize_options(c));
  Output o;
  o.result = {{"n", c.n},
              {"size", a.size()},
              {"b", r.b.members()},
              {"c", r.c.members()},
              {"schur_before", r.schur_before},
              {"schur_after", r.schur_after},
              {"sum_free", r.sum_free},
              {"removal_bound", r.removal_bound},
              {"removal_within_bound", r.removal_within_bound},
              {"zero_sum_free", r.certificate.zero_sum_free},
              {"coupling", r.certificate.coupling},
              {"coupling_holds", r.certificate.coupling_holds},
              {"regularity", regularity_summary(r.certificate.regularity)}};
  return o;
}

json level_check_json(const TowerStepReport& r, const std::string& kind, int dim) {
  return json{{"i", r.level},
              {"subgroup", kind},
              {"dim", dim},
              {"escaping", r.escaping},
              {"escaping_fraction", r.escaping_fraction},
              {"fraction_within_eps", r.fraction_within_eps},
              {"bound", r.bound},
              {"min_coefficient_ratio", optional_number(r.min_coefficient_ratio)},
              {"cosets_checked", r.cosets_checked},
              {"holds", r.holds}};
}

Output cmd_tower(const RunConfig& c) {
  const TowerFunction t = build_tower_function(static_cast<int>(c.n), c.depth, c.seed);
  const TowerSpec& spec = t.spec;
  std::optional<f2::Subgroup> user;
  if (!c.verify_path.empty()) {
    const GroupSpec g = GroupSpec::elementary2(spec.n);
    std::vector<f2::Vec> gens;
    for (const auto& line : data_lines(read_text(c.verify_path))) gens.push_back(g.index_of(g.parse_element(line)));
    user.emplace(spec.n, gens);
  }
  json levels = json::array();
  json checks = json::array();
  std::mt19937_64 rng(c.seed);
  bool all_hold = true;
  for (const auto& level : spec.levels) {
    levels.push_back(json{{"i", level.i},
                          {"b_size", level.b.sum()},
                          {"family_size", level.family.m},
                          {"family_dim", level.family.dim},
                          {"family_attempts", level.family.attempts},
                          {"worst_hyperplane", level.family.worst_hyperplane},
                          {"threshold", level.family.threshold}});
    const auto& hi = spec.h[static_cast<std::size_t>(level.i)];
    auto add = [&](const f2::Subgroup& h, const std::string& kind) {
      const TowerStepReport r = verify_tower_step(spec, t.f, h, level.i, c.eps);
      all_hold = all_hold && r.holds;
      checks.push_back(level_check_json(r, kind, h.dim()));
    };
    add(hi, "canonical");
    if (user && hi.contains(*user)) add(*user, "user");
    for (int s = 0; s < c.samples; ++s) add(random_level_subgroup(spec, level.i, rng), "sampled");
  }
  Output o;
  o.result = {{"n", spec.n},
              {"depth", spec.s},
              {"dims", spec.dims},
              {"levels", levels},
              {"f_sup", t.f.sup()},
              {"level_checks", checks},
              {"all_hold", all_hold}};
  o.table = "level_checks";
  return o;
}

Output cmd_selfcheck(const RunConfig& c) {
  Mutations m;
  for (const auto& s : c.mutate) {
    if (s == "dft-sign") m.dft_sign = true;
    if (s == "second-width") m.second_width = true;
  }
  const auto suites = run_selfcheck(m);
  Output o;
  json rows = json::array();
  bool ok = true;
  std::ostringstream text;
  for (const auto& s : suites) {
    ok = ok && s.passed;
    rows.push_back(json{{"suite", s.name}, {"passed", s.passed}, {"checks", s.checks}, {"detail", s.detail}});
    text << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checks << " checks)";
    if (!s.passed) text << ": " << s.detail;
    text << '\n';
  }
  o.result = {{"suites", rows}, {"passed", ok}};
  o.table = "suites";
  o.status = ok ? kOk : kCheckFailed;
  o.text = text.str();
  return o;
}

json config_json(const RunConfig& c) {
  json j{{"command", c.command}, {"seed", c.seed}, {"format", c.format}};
  if (!c.group.empty()) j["group"] = c.group;
  if (!c.inputs.empty()) j["sets"] = c.inputs;
  if (!c.set_path.empty()) j["set"] = c.set_path;
  if (c.command == "regularize-f2" || c.command == "regularize" || c.command == "remove" || c.command == "bhk" ||
      c.command == "sumfree" || c.command == "tower") {
    j["eps"] = c.eps;
  }
  if (c.command == "regularize" || c.command == "remove" || c.command == "bhk" || c.command == "sumfree") {
    j["mode"] = c.mode;
    j["scale"] = c.scale;
    j["budget"] = c.budget;
  }
  if (c.command == "regularize") j["seed_characters"] = c.seed_characters;
  if (c.command == "bhk") {
    j["regularity_path"] = c.regularity_path;
    if (c.interval) j["interval"] = *c.interval;
  }
  if (c.command == "sumfree" || c.command == "tower") j["n"] = c.n;
  if (c.command == "tower") {
    j["depth"] = c.depth;
    j["samples"] = c.samples;
    if (!c.verify_path.empty()) j["verify"] = c.verify_path;
  }
  if (c.command == "bohr-check") {
    j["chars"] = c.chars;
    j["delta"] = c.delta;
    j["delta_prime"] = optional_number(c.delta_prime);
    j["tau"] = c.tau;
    j["eta"] = c.eta;
    j["kappa"] = c.kappa;
    j["omega"] = c.omega;
    j["m"] = c.m;
    j["y"] = c.y;
  }
  if (c.command == "selfcheck") j["mutate"] = c.mutate;
  return j;
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string to_csv(const Output& o) {
  std::ostringstream out;
  if (!o.table.empty() && o.result.contains(o.table) && o.result[o.table].is_array() &&
      !o.result[o.table].empty()) {
    const json& rows = o.result[o.table];
    std::set<std::string> key_set;
    for (const auto& row : rows) {
      for (auto it = row.begin(); it != row.end(); ++it) key_set.insert(it.key());
    }
    const std::vector<std::string> keys(key_set.begin(), key_set.end());
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        out << (i ? "," : "") << (row.contains(keys[i]) ? csv_cell(row[keys[i]]) : std::string());
      }
      out << '\n';
    }
    return out.str();
  }
  out << "key,value\n";
  const json flat = o.result.flatten();
  for (auto it = flat.begin(); it != flat.end(); ++it) out << csv_cell(it.key()) << ',' << csv_cell(it.value()) << '\n';
  return out.str();
}

CLI::Validator open_unit() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = std::stod(s);
        } catch (...) {
          return "expected a number, got " + s;
        }
        return v > 0.0 && v < 1.0 ? std::string() : "must lie in (0, 1), got " + s;
      },
      "(0,1)");
}

void add_mode_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mode", c.mode, "Constants mode")->check(CLI::IsMember({"faithful", "scaled"}));
  sub->add_option("--scale", c.scale, "Shrink factor in scaled mode")->check(CLI::Range(1.0 + 1e-9, 1e6));
  sub->add_option("--budget", c.budget, "Refinement budget")->check(CLI::Range(0, 100000));
}

int dispatch(RunConfig& c, std::ostream& out) {
  static const std::map<std::string, std::function<Output(const RunConfig&)>> table{
      {"count", cmd_count},         {"regularize-f2", cmd_regularize_f2}, {"regularize", cmd_regularize},
      {"remove", cmd_remove},       {"bohr-check", cmd_bohr_check},       {"bhk", cmd_bhk},
      {"sumfree", cmd_sumfree},     {"tower", cmd_tower},                 {"selfcheck", cmd_selfcheck}};
  const Output o = table.at(c.command)(c);
  json report{{"tool", "arithreg"}, {"version", ARITHREG_VERSION}, {"config", config_json(c)}, {"result", o.result}};
  const std::string body = c.format == "csv" ? to_csv(o) : report.dump(2) + "\n";
  if (!c.trace_path.empty() && o.trace) write_text(c.trace_path, o.trace->dump(2) + "\n");
  if (!c.output_path.empty()) {
    write_text(c.output_path, body);
    if (!o.text.empty()) out << o.text;
  } else if (!o.text.empty() && c.command == "selfcheck") {
    out << o.text;
  } else {
    out << body;
  }
  return o.status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Arithmetic regularity experiments on finite abelian groups", "arithreg"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--out", c.output_path, "Write the report to this file");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", c.seed, "RNG seed");
  app.set_version_flag("--version", ARITHREG_VERSION);

  auto* count = app.add_subcommand("count", "Zero-sum count of k sets");
  count->add_option("--group", c.group)->required();
  count->add_option("--sets", c.inputs)->required();

  auto* rf2 = app.add_subcommand("regularize-f2", "Subgroup regularity on (Z/2)^n");
  rf2->add_option("--group", c.group)->required();
  rf2->add_option("--set", c.set_path)->required();
  rf2->add_option("--eps", c.eps)->required()->check(open_unit());
  rf2->add_option("--trace", c.trace_path);

  auto* reg = app.add_subcommand("regularize", "Bohr-pair regularity for k sets");
  reg->add_option("--group", c.group)->required();
  reg->add_option("--sets", c.inputs)->required();
  reg->add_option("--eps", c.eps)->required()->check(open_unit());
  reg->add_option("--trace", c.trace_path);
  reg->add_option("--seed-characters", c.seed_characters)->check(CLI::IsMember({"none", "interval"}));
  add_mode_options(reg, c);

  auto* rem = app.add_subcommand("remove", "Removal: triangles on (Z/2)^n or zero-sum k-tuples");
  rem->add_option("--group", c.group)->required();
  rem->add_option("--sets", c.inputs)->required();
  rem->add_option("--eps", c.eps)->required()->check(open_unit());
  add_mode_options(rem, c);

  auto* bohr = app.add_subcommand("bohr-check", "Bohr set and cutoff inequalities");
  bohr->add_option("--group", c.group)->required();
  bohr->add_option("--chars", c.chars, "Frequencies, one comma-separated character each");
  bohr->add_option("--delta", c.delta)->required()->check(CLI::Range(1e-12, 1.0));
  double delta_prime = 0.0;
  auto* delta_prime_opt = bohr->add_option("--delta-prime", delta_prime)->check(CLI::Range(1e-300, 1.0));
  bohr->add_option("--tau", c.tau)->check(CLI::Range(0.0, 1.0));
  bohr->add_option("--eta", c.eta)->check(CLI::Range(0.0, 0.5));
  bohr->add_option("--kappa", c.kappa)->check(CLI::Range(0.0, 1.0));
  bohr->add_option("--omega", c.omega)->check(CLI::Range(0.0, 2.0));
  bohr->add_option("--m", c.m)->check(CLI::Range(1, 16));
  bohr->add_option("--y", c.y, "Shift element (default 0)");
  bohr->add_option("--character", c.character, "Character for parts iv and ix");
  bohr->add_option("--set", c.set_path, "Function f for part viii (default 1)");

  auto* bhk = app.add_subcommand("bhk", "Three-term progressions with a popular difference");
  auto* bhk_group = bhk->add_option("--group", c.group);
  std::uint64_t interval_n = 0;
  auto* bhk_interval = bhk->add_option("--interval", interval_n)->check(CLI::Range(1ULL, 1ULL << 24));
  bhk_group->excludes(bhk_interval);
  bhk_interval->excludes(bhk_group);
  bhk->add_option("--set", c.set_path)->required();
  bhk->add_option("--eps", c.eps)->required()->check(open_unit());
  bhk->add_flag("--regularity-path", c.regularity_path, "Also run the regularity-driven weighted count");
  add_mode_options(bhk, c);

  auto* sf = app.add_subcommand("sumfree", "Sum-free subset by removal on Z/2N");
  sf->add_option("--n", c.n)->required()->check(CLI::Range(1ULL, 1ULL << 22));
  sf->add_option("--set", c.set_path)->required();
  sf->add_option("--eps", c.eps)->required()->check(open_unit());
  add_mode_options(sf, c);

  auto* tower = app.add_subcommand("tower", "Tower lower-bound function and its level checks");
  tower->add_option("--n", c.n)->required()->check(CLI::Range(1ULL, 62ULL));
  tower->add_option("--depth", c.depth)->required()->check(CLI::Range(0, 64));
  tower->add_option("--verify", c.verify_path, "Subgroup generators, one element per line");
  tower->add_option("--eps", c.eps)->check(open_unit());
  tower->add_option("--samples", c.samples)->check(CLI::Range(0, 10000));

  auto* self = app.add_subcommand("selfcheck", "Oracle and inequality suites at pinned sizes");
  self->add_option("--mutate", c.mutate, "Inject a fault")->check(CLI::IsMember({"dft-sign", "second-width"}));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ARITHREG_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "tower" && !tower->count("--eps")) c.eps = 0.05;
  if (bhk_interval->count()) c.interval = interval_n;
  if (delta_prime_opt->count()) c.delta_prime = delta_prime;

  try {
    return dispatch(c, out);
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace arithreg::cli
