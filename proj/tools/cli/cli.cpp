#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lglab/classifier.hpp"
#include "lglab/lg_analysis.hpp"
#include "lglab/model_io.hpp"
#include "lglab/two_slit.hpp"
#include "lglab/zoo.hpp"
#include "report.hpp"

namespace lglab::cli {

namespace {

// Decomposition residuals above this signal an engine defect.
constexpr double kResidualLimit = 1e-10;

struct Common {
  std::string out_path;
  bool no_timestamp = false;
  std::optional<double> tol;
  std::string format = "json";

  Tolerances tolerances() const {
    Tolerances t;
    if (tol) t.equivalence = *tol;
    return t;
  }
};

struct ModelChoice {
  std::string file;
  std::string zoo;
  ZooParams params;
};

void add_common(CLI::App* app, Common& c, bool csv_allowed) {
  app->add_option("--out", c.out_path, "Write output to this file instead of stdout");
  app->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation time from reports");
  app->add_option("--tol", c.tol, "Equivalence tolerance")->check(CLI::PositiveNumber);
  std::vector<std::string> formats{"json"};
  if (csv_allowed) formats.push_back("csv");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
}

void add_model_choice(CLI::App* app, ModelChoice& m) {
  auto* file = app->add_option("model", m.file, "Model file");
  auto* zoo = app->add_option("--zoo", m.zoo, "Built-in model name");
  file->excludes(zoo);
  zoo->excludes(file);
  app->add_option("--theta1", m.params.theta1, "First rotation angle (radians)");
  app->add_option("--theta2", m.params.theta2, "Second rotation angle (radians)");
  app->add_option_function<double>(
      "--p", [&m](const double& p) { m.params.p1 = m.params.p2 = p; }, "Both flip probabilities");
  app->add_option("--p1", m.params.p1, "First flip probability");
  app->add_option("--p2", m.params.p2, "Second flip probability");
  app->add_option("--grid", m.params.grid, "Sphere grid size for ks-sphere");
  app->add_option("--reset", m.params.reset, "Reset probability for lgi-holds-d-nonzero");
  app->add_option("--mod1-sq", m.params.mod1_sq, "|a1|^2 for two-slit");
  app->add_option("--phi", m.params.phi, "Phase difference for two-slit (radians)");
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

ModelBundle build_cached(const std::string& name, const ZooParams& p, std::ostream& err) {
  const char* cache = std::getenv("LGLAB_ZOO_CACHE");
  if (name != "ks-sphere" || cache == nullptr || *cache == '\0') return build_zoo(name, p);
  const std::filesystem::path dir(cache);
  const auto file = dir / ("ks-sphere-N" + std::to_string(p.grid) + "-" + format_double(p.theta1) + "-" +
                           format_double(p.theta2) + ".yaml");
  if (std::filesystem::exists(file)) return load_model_file(file);
  auto bundle = build_zoo(name, p);
  try {
    std::filesystem::create_directories(dir);
    save_model_file(bundle, file);
  } catch (const std::exception& e) {
    err << "warning: could not write zoo cache: " << e.what() << '\n';
  }
  return bundle;
}

struct Loaded {
  ModelBundle bundle;
  Json source;
};

Loaded load(const ModelChoice& m, std::ostream& err) {
  if (!m.zoo.empty()) {
    Loaded l{build_cached(m.zoo, m.params, err), {}};
    l.source = {{"zoo", m.zoo}};
    return l;
  }
  if (m.file.empty()) throw DomainError("give a model file or --zoo NAME");
  std::ifstream in(m.file, std::ios::binary);
  if (!in) throw InputError(m.file, 0, "cannot open model file");
  std::ostringstream text;
  text << in.rdbuf();
  Loaded l{parse_model(text.str(), m.file), {}};
  l.source = {{"file", m.file}, {"fnv1a64", hex(fnv1a(text.str()))}};
  return l;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write '" + c.out_path + "'");
  f << text;
}

Json args_json(std::span<const std::string> args) {
  Json a = Json::array();
  for (const auto& s : args) a.push_back(s);
  return a;
}

std::string render(const Common& c, const std::string& command, Json inputs, Json results) {
  auto report = envelope(command, inputs, c.tolerances(), c.no_timestamp ? "" : utc_timestamp());
  report["results"] = std::move(results);
  return report.dump(2) + "\n";
}

// -- commands ---------------------------------------------------------------------

struct RunArgs {
  std::string protocol;
  std::vector<std::string> marginals;
};

int cmd_run(const Common& c, const ModelChoice& m, const RunArgs& r, std::span<const std::string> args,
            std::ostream& out, std::ostream& err) {
  const auto loaded = load(m, err);
  const auto& b = loaded.bundle;
  std::string name = r.protocol;
  if (name.empty()) {
    if (b.protocols.empty()) throw DomainError("model declares no protocol");
    name = b.protocols.begin()->first;
  }
  const auto* protocol = b.protocols.find(name);
  if (!protocol) throw DomainError("unknown protocol '" + name + "'");
  const auto joint = run_protocol(*b.model, *protocol);

  if (c.format == "csv") {
    std::ostringstream s;
    for (const auto& a : joint.axes()) s << "step" << a.step << ':' << a.measurement << ',';
    s << "probability\n";
    for (std::size_t i = 0; i < joint.size(); ++i) {
      const auto idx = joint.unflatten(i);
      for (std::size_t k = 0; k < idx.size(); ++k) s << joint.axes()[k].outcomes[idx[k]] << ',';
      s << format_double(joint.table()[i]) << '\n';
    }
    emit(c, s.str(), out);
    return kExitOk;
  }

  Json marginals = Json::array();
  for (const auto& spec : r.marginals) {
    std::vector<std::size_t> keep;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || ptr != part.data() + part.size() || v >= joint.rank()) {
        throw DomainError("bad --marginal axis list '" + spec + "'");
      }
      keep.push_back(v);
    }
    marginals.push_back({{"keep", keep}, {"joint", to_json(marginalize(joint, keep))}});
  }
  Json steps = Json::array();
  for (const auto& st : protocol->steps) {
    steps.push_back({{"transformation", st.transformation}, {"measurement", st.measurement}, {"perform", st.perform}});
  }
  Json inputs{{"argv", args_json(args)}, {"model", loaded.source}, {"protocol", name}};
  Json results{{"protocol", {{"preparation", protocol->preparation}, {"steps", steps}}},
               {"joint", to_json(joint)},
               {"marginals", marginals}};
  emit(c, render(c, "run", inputs, results), out);
  return kExitOk;
}

struct LgArgs {
  std::string arrangement;
  std::size_t depth = 2;
  bool no_chain = false;
};

int cmd_lg(const Common& c, const ModelChoice& m, const LgArgs& l, std::span<const std::string> args,
           std::ostream& out, std::ostream& err) {
  const auto loaded = load(m, err);
  const auto arrangement = loaded.bundle.arrangement(l.arrangement);
  const auto tol = c.tolerances();
  const auto report = disturbance_report(arrangement);
  Json results{{"arrangement", to_json(arrangement.spec())},
               {"lg_value_all_three", report.lg_all_three},
               {"lg_value_pairwise", report.lg_pairwise},
               {"disturbance", to_json(report)}};
  if (!l.no_chain) {
    const auto chain = check_implication_chain(arrangement, OpndBounds{1, l.depth}, tol.equivalence);
    results["chain"] = to_json(chain);
  }
  const bool defect = std::abs(report.decomposition_residual) > kResidualLimit;
  results["identity_ok"] = !defect;
  Json inputs{{"argv", args_json(args)}, {"model", loaded.source}};
  emit(c, render(c, "lg", inputs, results), out);
  if (defect) {
    err << "error: decomposition residual " << report.decomposition_residual << " exceeds "
        << kResidualLimit << '\n';
    return kExitIdentity;
  }
  return kExitOk;
}

int cmd_classify(const Common& c, const ModelChoice& m, const std::string& cls,
                 std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  const auto loaded = load(m, err);
  const auto tol = c.tolerances();
  const auto quantity = loaded.bundle.quantity_class(cls, tol.equivalence);
  const auto& model = *loaded.bundle.model;
  const auto result = classify(model, quantity, tol);
  Json equilibrium = Json::object();
  for (const auto& name : quantity.measurements()) {
    const auto e = check_equilibrium_property(model, quantity, name, tol);
    equilibrium[name] = {{"holds", e.holds},
                         {"max_deviation", e.max_deviation},
                         {"preparations_checked", e.preparations_checked}};
  }
  Json inputs{{"argv", args_json(args)}, {"model", loaded.source}, {"class", quantity.label()},
              {"class_members", quantity.measurements()}};
  Json results{{"classification", to_json(model.states(), result)}, {"equilibrium", equilibrium}};
  emit(c, render(c, "classify", inputs, results), out);
  return kExitOk;
}

struct TwoSlitArgs {
  std::optional<double> mod1_sq;
  std::optional<double> mod2_sq;
  double phi = std::numbers::pi;
  bool sweep = false;
  std::size_t mod_steps = 100;
  std::size_t phase_steps = 360;
};

int cmd_twoslit(const Common& c, const TwoSlitArgs& t, std::span<const std::string> args,
                std::ostream& out, std::ostream& err) {
  Json inputs{{"argv", args_json(args)}};
  if (t.sweep) {
    if (t.mod_steps < 2 || t.phase_steps < 1) throw DomainError("sweep needs at least 2 moduli and 1 phase");
    std::vector<double> mods(t.mod_steps), phases(t.phase_steps);
    for (std::size_t i = 0; i < t.mod_steps; ++i) mods[i] = static_cast<double>(i) / static_cast<double>(t.mod_steps - 1);
    for (std::size_t j = 0; j < t.phase_steps; ++j) {
      phases[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(t.phase_steps);
    }
    const auto map = violation_map(mods, phases);
    if (c.format == "csv") {
      std::ostringstream s;
      write_violation_csv(s, map);
      emit(c, s.str(), out);
    } else {
      emit(c, render(c, "twoslit", inputs, {{"sweep", to_json(map)}}), out);
    }
    return kExitOk;
  }

  if (!t.mod1_sq) throw DomainError("give --mod1-sq or --sweep");
  const double m1 = *t.mod1_sq;
  const double m2 = t.mod2_sq ? *t.mod2_sq : 1.0 - m1;
  if (!(m1 >= 0.0) || !(m2 >= 0.0)) throw DomainError("squared moduli must be non-negative");
  Json warnings = Json::array();
  const double phi = normalize_phase(t.phi);
  if (phi != t.phi) {
    const std::string w = "phi " + format_double(t.phi) + " normalized to " + format_double(phi);
    err << "warning: " << w << '\n';
    warnings.push_back(w);
  }
  const auto s = SlitAmplitudes::from_moduli(std::sqrt(m1), std::sqrt(m2), phi);
  const auto lg = lg_plus_value(s);
  const auto engine = disturbance_report(compile_to_arrangement(s));

  if (c.format == "csv") {
    ViolationMap map;
    map.rows.push_back({m1, phi, lg.value, lg.mirrored, lg.violated});
    std::ostringstream o;
    write_violation_csv(o, map);
    emit(c, o.str(), out);
    return kExitOk;
  }
  Json results{{"mod1", s.mod1()},
               {"mod2", s.mod2()},
               {"phi", s.phi()},
               {"detection", to_json(detection_probabilities(s))},
               {"lg_plus", lg.value},
               {"lg_plus_mirrored", lg.mirrored},
               {"violated", lg.violated},
               {"mirrored_violated", lg.mirrored_violated},
               {"disturbance_d2", disturbance_d2(s)},
               {"engine", {{"lg_value_pairwise", engine.lg_pairwise},
                           {"d2_plus_plus", engine.d2[0][0]},
                           {"p_plus_all", engine.p_plus_all},
                           {"decomposition_residual", engine.decomposition_residual}}},
               {"warnings", warnings}};
  if (s.mod2() > 0.0) results["violation_threshold_cos_phi"] = -s.mod1() / s.mod2();
  emit(c, render(c, "twoslit", inputs, results), out);
  return kExitOk;
}

int cmd_zoo_list(const Common& c, std::ostream& out) {
  if (c.format == "json") {
    Json list = Json::array();
    for (const auto& e : zoo_list()) {
      list.push_back({{"name", e.name}, {"kind", e.fixture ? "fixture" : "model"}, {"description", e.description}});
    }
    emit(c, list.dump(2) + "\n", out);
    return kExitOk;
  }
  std::ostringstream s;
  s << "name,kind,description\n";
  for (const auto& e : zoo_list()) {
    s << e.name << ',' << (e.fixture ? "fixture" : "model") << ",\"" << e.description << "\"\n";
  }
  emit(c, s.str(), out);
  return kExitOk;
}

int cmd_zoo_export(const Common& c, const std::string& name, const ZooParams& p, std::ostream& out,
                   std::ostream& err) {
  emit(c, export_model(build_cached(name, p, err)), out);
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lglab: Leggett-Garg analysis of finite ontic models", "lglab"};
  app.set_version_flag("--version", LGLAB_VERSION);
  app.require_subcommand(1);

  Common common;
  ModelChoice model;
  RunArgs run_args;
  LgArgs lg_args;
  std::string class_name;
  TwoSlitArgs slit;
  std::string export_name;

  auto* run_cmd = app.add_subcommand("run", "Run a protocol and print its joint outcome table");
  add_common(run_cmd, common, true);
  add_model_choice(run_cmd, model);
  run_cmd->add_option("--protocol", run_args.protocol, "Protocol name (default: first declared)");
  run_cmd->add_option("--marginal", run_args.marginals, "Comma-separated axes to keep; repeatable");

  auto* lg_cmd = app.add_subcommand("lg", "LG values, disturbance tables and the implication chain");
  add_common(lg_cmd, common, false);
  add_model_choice(lg_cmd, model);
  lg_cmd->add_option("--arrangement", lg_args.arrangement, "Arrangement name (default: first declared)");
  lg_cmd->add_option("--depth", lg_args.depth, "Suffix depth for complete non-disturbance")
      ->check(CLI::Range(1, 4));
  lg_cmd->add_flag("--no-chain", lg_args.no_chain, "Skip the implication-chain checks");

  auto* classify_cmd = app.add_subcommand("classify", "Macrodefiniteness and macrorealism class");
  add_common(classify_cmd, common, false);
  add_model_choice(classify_cmd, model);
  classify_cmd->add_option("--class", class_name, "Quantity class (default: first declared)");

  auto* slit_cmd = app.add_subcommand("twoslit", "Two-slit LG quantity at one point or over a sweep");
  add_common(slit_cmd, common, true);
  slit_cmd->add_option("--mod1-sq", slit.mod1_sq, "|a1|^2");
  slit_cmd->add_option("--mod2-sq", slit.mod2_sq, "|a2|^2 (default 1 - |a1|^2)");
  slit_cmd->add_option("--phi", slit.phi, "Phase difference (radians)");
  slit_cmd->add_flag("--sweep", slit.sweep, "Sweep |a1|^2 over [0,1] and phi over [0, 2pi)");
  slit_cmd->add_option("--mod-steps", slit.mod_steps, "Sweep points for |a1|^2");
  slit_cmd->add_option("--phase-steps", slit.phase_steps, "Sweep points for phi");

  auto* zoo_cmd = app.add_subcommand("zoo", "Built-in models");
  zoo_cmd->require_subcommand(1);
  auto* list_cmd = zoo_cmd->add_subcommand("list", "List built-in models and fixtures");
  list_cmd->add_option("--out", common.out_path, "Write output to this file");
  std::string list_format = "csv";
  list_cmd->add_option("--format", list_format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  auto* export_cmd = zoo_cmd->add_subcommand("export", "Write a built-in model as a model file");
  export_cmd->add_option("name", export_name, "Model name")->required();
  export_cmd->add_option("--out", common.out_path, "Write output to this file");
  export_cmd->add_option("--theta1", model.params.theta1, "First rotation angle (radians)");
  export_cmd->add_option("--theta2", model.params.theta2, "Second rotation angle (radians)");
  export_cmd->add_option_function<double>(
      "--p", [&model](const double& p) { model.params.p1 = model.params.p2 = p; }, "Both flip probabilities");
  export_cmd->add_option("--grid", model.params.grid, "Sphere grid size for ks-sphere");
  export_cmd->add_option("--reset", model.params.reset, "Reset probability");
  export_cmd->add_option("--mod1-sq", model.params.mod1_sq, "|a1|^2 for two-slit");
  export_cmd->add_option("--phi", model.params.phi, "Phase difference for two-slit");

  std::vector<std::string> argv_storage{"lglab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(common, model, run_args, args, out, err);
    if (*lg_cmd) return cmd_lg(common, model, lg_args, args, out, err);
    if (*classify_cmd) return cmd_classify(common, model, class_name, args, out, err);
    if (*slit_cmd) return cmd_twoslit(common, slit, args, out, err);
    if (*list_cmd) {
      common.format = list_format;
      return cmd_zoo_list(common, out);
    }
    if (*export_cmd) return cmd_zoo_export(common, export_name, model.params, out, err);
  } catch (const EngineDefect& e) {
    err << "engine defect: " << e.what() << '\n';
    return kExitIdentity;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitUnexpected;
  }
  return kExitInput;
}

}  // namespace lglab::cli
