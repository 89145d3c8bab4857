#include "kato/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kato/error.hpp"
#include "kato/fibers.hpp"
#include "kato/profin.hpp"
#include "kato/strata.hpp"

namespace kato::cli {

namespace {

using nlohmann::json;

constexpr double kDefaultTol = kDefaultTolerance;
constexpr std::size_t kDefaultDegreeBound = 20;
constexpr Level kDefaultBound = 100;
constexpr std::uint64_t kDefaultSeed = 0;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(what + ": " + e.what());
  }
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      parse_fail(where + ": unknown field \"" + key + "\"");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) parse_fail(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

std::int64_t as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where + ": expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_nonnegative(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const std::int64_t x = as_integer(v, where);
  if (x < 0) parse_fail(where + ": expected a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

std::vector<std::int64_t> as_int_vector(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + ": expected an array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_integer(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json orders_json(const std::vector<mpz_class>& orders) {
  json out = json::array();
  for (const auto& o : orders) out.push_back(to_json(o));
  return out;
}

json face_json(const std::vector<std::size_t>& support) {
  json out = json::array();
  for (std::size_t i : support) out.push_back(i + 1);
  return out;
}

json group_json(const FgAbelianGroup& g) {
  return json{{"free_rank", g.free_rank()}, {"torsion", orders_json(g.torsion())},
              {"group", g.to_string()}};
}

json relation_json(const Relation& r) { return json{{"lhs", r.lhs}, {"rhs", r.rhs}}; }

mpq_class parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(mpz_class(v.dump()));
  if (!v.is_string()) parse_fail(where + ": expected a number or rational string");
  mpq_class q;
  if (q.set_str(v.get<std::string>(), 10) != 0) parse_fail(where + ": not a rational number");
  if (q.get_den() == 0) parse_fail(where + ": zero denominator");
  q.canonicalize();
  return q;
}

double parse_double(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  return parse_rational(v, where).get_d();
}

// Output -------------------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_table(const json& report, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& [key, value] : report.items()) width = std::max(width, key.size());
  for (const auto& [key, value] : report.items()) {
    const bool rows = value.is_array() && !value.empty() &&
                      std::all_of(value.begin(), value.end(), [](const json& x) { return x.is_object(); });
    if (!rows) {
      out << std::left << std::setw(static_cast<int>(width) + 2) << key << scalar_text(value) << "\n";
      continue;
    }
    out << key << ":\n";
    std::vector<std::string> columns;
    for (const auto& [col, unused] : value.front().items()) columns.push_back(col);
    std::vector<std::size_t> widths;
    for (const auto& c : columns) {
      std::size_t w = c.size();
      for (const auto& row : value) w = std::max(w, scalar_text(row.value(c, json())).size());
      widths.push_back(w);
    }
    out << " ";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << " " << std::left << std::setw(static_cast<int>(widths[i])) << columns[i];
    out << "\n";
    for (const auto& row : value) {
      out << " ";
      for (std::size_t i = 0; i < columns.size(); ++i)
        out << " " << std::left << std::setw(static_cast<int>(widths[i]))
            << scalar_text(row.value(columns[i], json()));
      out << "\n";
    }
  }
}

// Settings -----------------------------------------------------------------

struct Flags {
  CLI::Option* tol = nullptr;
  CLI::Option* degree_bound = nullptr;
  CLI::Option* bound = nullptr;
  CLI::Option* seed = nullptr;
  double tol_value = 0;
  std::size_t degree_bound_value = 0;
  Level bound_value = 0;
  std::uint64_t seed_value = 0;
  bool table = false;
};

struct Settings {
  double tol = kDefaultTol;
  std::size_t degree_bound = kDefaultDegreeBound;
  Level bound = kDefaultBound;
  std::uint64_t seed = kDefaultSeed;
};

template <class T>
std::optional<T> from_env(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::istringstream in(raw);
  T value{};
  in >> value;
  if (!in || !in.eof()) parse_fail(std::string("environment variable ") + name + " is malformed");
  return value;
}

template <class T>
T pick(const CLI::Option* flag, T flag_value, const char* env, std::optional<T> chart, T fallback) {
  if (flag != nullptr && flag->count() > 0) return flag_value;
  if (auto v = from_env<T>(env)) return *v;
  if (chart) return *chart;
  return fallback;
}

Settings resolve(const Flags& f, const ChartOptions& chart) {
  Settings s;
  s.tol = pick<double>(f.tol, f.tol_value, "KATO_TOL", chart.tolerance, kDefaultTol);
  s.degree_bound = pick<std::size_t>(f.degree_bound, f.degree_bound_value, "KATO_DEGREE_BOUND",
                                     chart.degree_bound, kDefaultDegreeBound);
  s.bound = pick<Level>(f.bound, f.bound_value, "KATO_BOUND", std::nullopt, kDefaultBound);
  s.seed = pick<std::uint64_t>(f.seed, f.seed_value, "KATO_SEED", chart.seed, kDefaultSeed);
  if (!(s.tol > 0)) parse_fail("tolerance must be positive");
  if (s.bound == 0) parse_fail("bound must be at least 1");
  return s;
}

struct Loaded {
  ChartDocument doc;
  Settings settings;
  AffineMonoid monoid;
};

Loaded load(const std::string& path, const Flags& flags) {
  ChartDocument doc = load_chart(path);
  Settings s = resolve(flags, doc.options);
  AffineMonoid m = validate(doc.spec, ValidationOptions{s.degree_bound});
  return Loaded{std::move(doc), s, std::move(m)};
}

Face resolve_face(const AffineMonoid& m, const std::optional<std::string>& text, bool dense_default) {
  if (!text) return dense_default ? faces(m).back() : faces(m).front();
  return face_with_support(m, parse_face(*text, m.generator_count()));
}

// Commands -----------------------------------------------------------------

struct Outcome {
  json report;
  bool holds = true;
};

Outcome cmd_info(const Loaded& c) {
  const AffineMonoid& m = c.monoid;
  return {json{{"name", c.doc.name},
               {"ambient_rank", m.ambient_rank()},
               {"generator_count", m.generator_count()},
               {"gp_rank", m.gp_lattice_rank()},
               {"sharp", m.is_sharp()},
               {"saturated", m.is_saturated()},
               {"saturation_degree_bound", m.degree_bound()},
               {"face_count", faces(m).size()},
               {"relation_count", m.relations().size()},
               {"relations_synthesized", m.relations_synthesized()}}};
}

Outcome cmd_strata(const Loaded& c) {
  const StratumTable table = stratify(c.monoid);
  json entries = json::array();
  for (const auto& e : table.entries) {
    entries.push_back(json{{"face", face_json(e.face.support)},
                           {"face_rank", face_lattice_rank(c.monoid, e.face)},
                           {"stalk_rank", e.stalk_rank},
                           {"stalk_generators", e.stalk.generator_count()}});
  }
  return {json{{"name", c.doc.name},
               {"max_rank", table.max_rank},
               {"vertex", face_json(table.vertex().face.support)},
               {"strata", entries}}};
}

Outcome cmd_mu(const Loaded& c, Level n) {
  const FgAbelianGroup g = mu(c.monoid, n);
  json report = group_json(g);
  report["n"] = n;
  report["order"] = to_json(*g.order());
  return {report};
}

Outcome cmd_fiber(const Loaded& c, const Face& f, Level n) {
  const KnFiberModel kn = kn_fiber(c.monoid, f);
  const RootFiberTower root = root_fiber_tower(c.monoid, f);
  const CyclicSum level = root.tower.presentation(n);
  const GroupMap induced{completion(kn.pi1).presentation(n), level, IntMatrix::identity(root.rank)};
  const bool iso = induced.is_well_defined() && induced.is_isomorphism();
  return {json{{"face", face_json(f.support)},
               {"n", n},
               {"kn_fiber", json{{"torus_rank", kn.torus_rank}, {"pi1", kn.pi1.to_string()}}},
               {"root_fiber", group_json(level.normal_form())},
               {"comparison_isomorphism", iso}},
          iso};
}

Outcome cmd_compare(const Loaded& c, const Face& f) {
  const FiberEquivalenceCertificate cert = verify_fiber_equivalence(c.monoid, f, c.settings.bound);
  json report{{"face", face_json(f.support)},
              {"equivalent", cert.equivalent},
              {"levels", cert.levels.size()},
              {"rank", cert.rank},
              {"scope", cert.pro.scope}};
  if (!cert.equivalent) report["failure"] = cert.failure;
  return {report, cert.equivalent};
}

Outcome cmd_emit(const Loaded& c, const std::string& target) {
  Target t;
  if (target == "complex") {
    t = Target::ComplexPoints;
  } else if (target == "kn") {
    t = Target::KnPoints;
  } else {
    parse_fail("emit target must be \"complex\" or \"kn\"");
  }
  const BinomialSystem sys = emit_equations(c.monoid, t);
  json eqs = json::array();
  for (const auto& r : sys.equations) eqs.push_back(relation_json(r));
  return {json{{"target", target}, {"variable_count", sys.variable_count}, {"equations", eqs}}};
}

json point_json(const KnPoint& p) {
  json out = json::array();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.is_exact()) {
      const auto& v = p.exact_values()[j];
      std::string radius = v.radius.base.get_str();
      if (v.radius.index != 1) radius = "(" + radius + ")^(1/" + std::to_string(v.radius.index) + ")";
      out.push_back(json{{"radius", radius}, {"turns", v.turns.get_str()}});
    } else {
      const auto& v = p.values()[j];
      double turns = std::arg(v.phase) / (2 * std::numbers::pi);
      if (turns < 0) turns += 1;
      out.push_back(json{{"radius", v.radius}, {"turns", turns}});
    }
  }
  return out;
}

Outcome cmd_torsor(const Loaded& c, const std::optional<std::string>& point_text,
                   const std::optional<std::string>& face_text, Level n) {
  KnPoint p = point_text ? parse_kn_point(*point_text)
                         : sample_kn_stratum(c.monoid, resolve_face(c.monoid, face_text, true), 1,
                                             c.settings.seed)
                               .front();
  const TorsorReport r = torsor_check(c.monoid, p, n, c.settings.tol);
  json report{{"n", n},
              {"point", point_json(p)},
              {"exact", p.is_exact()},
              {"is_torsor", r.is_torsor},
              {"preserves_fiber", r.preserves_fiber},
              {"free", r.free},
              {"transitive", r.transitive},
              {"group_order", r.group_order},
              {"fiber_size", r.fiber_size},
              {"max_residual", r.max_residual}};
  if (!r.is_torsor) report["failure"] = r.failure;
  return {report, r.is_torsor};
}

}  // namespace

ChartDocument parse_chart(const std::string& json_text) {
  const json doc = parse_json(json_text, "chart");
  if (!doc.is_object()) parse_fail("chart: expected a JSON object");
  allow_keys(doc, {"name", "ambient_rank", "generators", "relations", "options"}, "chart");

  ChartDocument out;
  const json& name = require(doc, "name", "chart");
  if (!name.is_string()) parse_fail("chart.name: expected a string");
  out.name = name.get<std::string>();
  out.spec.ambient_rank = as_nonnegative(require(doc, "ambient_rank", "chart"), "chart.ambient_rank");

  const json& gens = require(doc, "generators", "chart");
  if (!gens.is_array()) parse_fail("chart.generators: expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    IntVector g;
    for (auto x : as_int_vector(gens[i], "chart.generators[" + std::to_string(i) + "]"))
      g.emplace_back(static_cast<long>(x));
    out.spec.generators.push_back(std::move(g));
  }

  if (doc.contains("relations")) {
    const json& rels = doc.at("relations");
    if (!rels.is_array()) parse_fail("chart.relations: expected an array");
    std::vector<Relation> parsed;
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const std::string where = "chart.relations[" + std::to_string(i) + "]";
      if (!rels[i].is_object()) parse_fail(where + ": expected an object");
      allow_keys(rels[i], {"lhs", "rhs"}, where);
      parsed.push_back(Relation{as_int_vector(require(rels[i], "lhs", where), where + ".lhs"),
                                as_int_vector(require(rels[i], "rhs", where), where + ".rhs")});
    }
    out.spec.relations = std::move(parsed);
  }

  if (doc.contains("options")) {
    const json& opts = doc.at("options");
    if (!opts.is_object()) parse_fail("chart.options: expected an object");
    allow_keys(opts, {"degree_bound", "tolerance", "seed"}, "chart.options");
    if (opts.contains("degree_bound"))
      out.options.degree_bound = as_nonnegative(opts.at("degree_bound"), "chart.options.degree_bound");
    if (opts.contains("tolerance")) {
      if (!opts.at("tolerance").is_number()) parse_fail("chart.options.tolerance: expected a number");
      out.options.tolerance = opts.at("tolerance").get<double>();
    }
    if (opts.contains("seed")) out.options.seed = as_nonnegative(opts.at("seed"), "chart.options.seed");
  }
  return out;
}

ChartDocument load_chart(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open chart file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chart(buf.str());
}

std::vector<std::size_t> parse_face(const std::string& json_text, std::size_t generator_count) {
  const json doc = parse_json(json_text, "face");
  std::vector<std::size_t> support;
  for (auto x : as_int_vector(doc, "face")) {
    if (x < 1 || static_cast<std::size_t>(x) > generator_count)
      parse_fail("face: index " + std::to_string(x) + " is outside 1.." + std::to_string(generator_count));
    support.push_back(static_cast<std::size_t>(x - 1));
  }
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end())
    parse_fail("face: indices must be strictly increasing");
  return support;
}

KnPoint parse_kn_point(const std::string& json_text) {
  const json doc = parse_json(json_text, "point");
  if (!doc.is_array()) parse_fail("point: expected an array of {radius, turns}");
  bool exact = true;
  for (std::size_t j = 0; j < doc.size(); ++j) {
    const std::string where = "point[" + std::to_string(j) + "]";
    if (!doc[j].is_object()) parse_fail(where + ": expected an object");
    allow_keys(doc[j], {"radius", "turns"}, where);
    for (const char* key : {"radius", "turns"}) {
      const json& v = require(doc[j], key, where);
      if (v.is_number_float()) exact = false;
      else if (!v.is_number_integer() && !v.is_string())
        parse_fail(where + "." + key + ": expected a number or rational string");
    }
  }
  if (exact) {
    std::vector<ExactKnCoordinate> coords;
    for (std::size_t j = 0; j < doc.size(); ++j) {
      const std::string where = "point[" + std::to_string(j) + "]";
      mpq_class radius = parse_rational(doc[j].at("radius"), where + ".radius");
      if (radius < 0) parse_fail(where + ".radius: must be nonnegative");
      coords.push_back({Radical{radius, 1},
                        normalize_turns(parse_rational(doc[j].at("turns"), where + ".turns"))});
    }
    return KnPoint::exact(std::move(coords));
  }
  std::vector<FloatKnCoordinate> coords;
  for (std::size_t j = 0; j < doc.size(); ++j) {
    const std::string where = "point[" + std::to_string(j) + "]";
    const double radius = parse_double(doc[j].at("radius"), where + ".radius");
    if (radius < 0) parse_fail(where + ".radius: must be nonnegative");
    const double turns = parse_double(doc[j].at("turns"), where + ".turns");
    coords.push_back({radius, std::polar(1.0, 2 * std::numbers::pi * turns)});
  }
  return KnPoint::floating(std::move(coords));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariants of log schemes given by toric Kato charts", "kato"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", flags.tol_value, "numeric tolerance (default 1e-9)");
    sub->add_option("--degree-bound", flags.degree_bound_value, "saturation and relation degree bound (default 20)");
    sub->add_option("--bound", flags.bound_value, "comparison bound (default 100)");
    sub->add_option("--seed", flags.seed_value, "sampling seed (default 0)");
    auto* table = sub->add_flag("--table", flags.table, "human-readable table");
    sub->add_flag("--json", "JSON output (default)")->excludes(table);
  };

  std::string chart;
  Level n = 0;
  std::string target;
  std::optional<std::string> face_text, point_text;

  CLI::App* info = app.add_subcommand("info", "summary of a chart");
  CLI::App* strata = app.add_subcommand("strata", "rank stratification");
  CLI::App* mu_cmd = app.add_subcommand("mu", "mu_n(P) as a finite abelian group");
  CLI::App* fiber = app.add_subcommand("fiber", "torus and root-stack fibers over a stratum");
  CLI::App* compare = app.add_subcommand("compare", "fiberwise profinite comparison");
  CLI::App* emit = app.add_subcommand("emit", "binomial equations of the chart");
  CLI::App* torsor = app.add_subcommand("torsor", "torsor check of the Kummer fiber");
  for (CLI::App* sub : {info, strata, mu_cmd, fiber, compare, emit, torsor}) {
    sub->add_option("chart", chart, "chart JSON file")->required();
    add_common(sub);
  }
  for (CLI::App* sub : {fiber, compare, torsor})
    sub->add_option("--face", face_text, "1-based generator indices, e.g. [1,2]");
  for (CLI::App* sub : {mu_cmd, fiber, torsor})
    sub->add_option("n", n, "level")->required()->check(CLI::PositiveNumber);
  emit->add_option("target", target, "complex or kn")->required();
  torsor->add_option("--point", point_text, "point as JSON [{radius, turns}, ...]");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* selected = app.get_subcommands().front();
  flags.tol = selected->get_option("--tol");
  flags.degree_bound = selected->get_option("--degree-bound");
  flags.bound = selected->get_option("--bound");
  flags.seed = selected->get_option("--seed");

  try {
    const Loaded c = load(chart, flags);
    Outcome result;
    if (info->parsed()) result = cmd_info(c);
    else if (strata->parsed()) result = cmd_strata(c);
    else if (mu_cmd->parsed()) result = cmd_mu(c, n);
    else if (fiber->parsed()) result = cmd_fiber(c, resolve_face(c.monoid, face_text, false), n);
    else if (compare->parsed()) result = cmd_compare(c, resolve_face(c.monoid, face_text, false));
    else if (emit->parsed()) result = cmd_emit(c, target);
    else result = cmd_torsor(c, point_text, face_text, n);

    if (flags.table) print_table(result.report, out);
    else out << result.report.dump(2) << "\n";
    return result.holds ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::FiberCardinalityMismatch ? 1 : 2;
  }
}

}  // namespace kato::cli
