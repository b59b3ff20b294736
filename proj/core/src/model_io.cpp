#include "lglab/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace lglab {

InputError::InputError(const std::string& source, int line, const std::string& message)
    : DomainError(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                           : source + ": " + message),
      line_(line) {}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

namespace {

// -- import -------------------------------------------------------------------------

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    const auto mark = at.Mark();
    throw InputError(source_, mark.is_null() ? 0 : mark.line + 1, message);
  }

  void expect_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(n, what + " must be a mapping");
  }
  void expect_seq(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + " must be a sequence");
  }
  std::string scalar(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + " must be a scalar");
    return n.Scalar();
  }
  double number(const YAML::Node& n, const std::string& what) const {
    const auto v = parse_double(scalar(n, what));
    if (!v) fail(n, what + " is not a finite decimal number: '" + n.Scalar() + "'");
    return *v;
  }
  std::string optional_scalar(const YAML::Node& parent, const char* key, const std::string& what) const {
    const auto n = parent[key];
    if (!n || n.IsNull()) return {};
    return scalar(n, what);
  }

  /// Runs `f`, turning domain errors from the core into located input errors.
  template <class F>
  auto located(const YAML::Node& at, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const InputError&) {
      throw;
    } catch (const DomainError& e) {
      fail(at, e.what());
    }
  }

 private:
  std::string source_;
};

class ModelParser {
 public:
  ModelParser(const YAML::Node& root, Reader reader) : root_(root), r_(std::move(reader)) {}

  ModelBundle parse() {
    r_.expect_map(root_, "model document");
    const auto schema = root_["schema"];
    if (!schema) r_.fail(root_, "missing 'schema' field");
    if (r_.scalar(schema, "schema") != std::to_string(kModelSchemaVersion)) {
      r_.fail(schema, "unsupported schema '" + schema.Scalar() + "', expected " +
                          std::to_string(kModelSchemaVersion));
    }
    for (const auto& kv : root_) {
      static const std::vector<std::string> known{
          "schema",       "name",         "metadata",         "ontic_states", "distributions",
          "preparations", "transformations", "measurements", "quantity_classes", "protocols",
          "arrangements"};
      const auto key = r_.scalar(kv.first, "top-level key");
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        r_.fail(kv.first, "unknown top-level key '" + key + "'");
      }
    }

    ModelBundle b;
    b.name = r_.optional_scalar(root_, "name", "name");
    parse_states();
    auto model = std::make_shared<OnticModel>(space_);
    if (const auto meta = root_["metadata"]) {
      r_.expect_map(meta, "metadata");
      for (const auto& kv : meta) {
        model->set_metadata(r_.scalar(kv.first, "metadata key"), r_.scalar(kv.second, "metadata value"));
      }
    }
    parse_named_distributions();
    parse_preparations(*model);
    parse_transformations(*model);
    parse_measurements(*model);
    b.model = model;
    parse_classes(b);
    parse_protocols(b);
    parse_arrangements(b);
    return b;
  }

 private:
  void parse_states() {
    const auto states = root_["ontic_states"];
    if (!states) r_.fail(root_, "missing 'ontic_states'");
    r_.expect_seq(states, "ontic_states");
    if (states.size() == 0) r_.fail(states, "ontic_states is empty");
    std::vector<std::string> labels;
    labels.reserve(states.size());
    for (const auto& s : states) {
      auto label = r_.scalar(s, "ontic state label");
      if (label.empty() || label.front() == '@') r_.fail(s, "ontic state labels must be non-empty and not start with '@'");
      labels.push_back(std::move(label));
    }
    space_ = r_.located(states, [&] { return std::make_shared<const StateSpace>(std::move(labels)); });
  }

  std::size_t state(const YAML::Node& n) const {
    const auto label = r_.scalar(n, "state label");
    const auto idx = space_->find(label);
    if (!idx) r_.fail(n, "unknown ontic state '" + label + "'");
    return *idx;
  }

  /// A bare label is a point mass, "@name" a named distribution, a mapping
  /// lists weights by state.
  DistributionPtr distribution(const YAML::Node& n, const std::string& what) const {
    if (n.IsScalar()) {
      const auto& text = n.Scalar();
      if (!text.empty() && text.front() == '@') {
        auto it = named_.find(text.substr(1));
        if (it == named_.end()) r_.fail(n, "unknown named distribution '" + text + "'");
        return it->second;
      }
      return std::make_shared<const Distribution>(Distribution::point_mass(space_, state(n)));
    }
    r_.expect_map(n, what);
    std::vector<WeightedState> entries;
    entries.reserve(n.size());
    for (const auto& kv : n) entries.push_back({state(kv.first), r_.number(kv.second, what + " weight")});
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.state < b.state; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].state == entries[i - 1].state) r_.fail(n, what + " lists a state twice");
    }
    return r_.located(n, [&] {
      return std::make_shared<const Distribution>(Distribution::from_entries(space_, std::move(entries)));
    });
  }

  void parse_named_distributions() {
    const auto d = root_["distributions"];
    if (!d) return;
    r_.expect_map(d, "distributions");
    for (const auto& kv : d) {
      const auto name = r_.scalar(kv.first, "distribution name");
      if (named_.contains(name)) r_.fail(kv.first, "duplicate distribution '" + name + "'");
      named_.emplace(name, distribution(kv.second, "distribution '" + name + "'"));
    }
  }

  void parse_preparations(OnticModel& model) {
    const auto preps = root_["preparations"];
    if (!preps) return;
    r_.expect_map(preps, "preparations");
    for (const auto& kv : preps) {
      const auto name = r_.scalar(kv.first, "preparation name");
      auto mu = distribution(kv.second, "preparation '" + name + "'");
      r_.located(kv.first, [&] { model.add_preparation(name, *mu); });
    }
  }

  void parse_transformations(OnticModel& model) {
    const auto ts = root_["transformations"];
    if (!ts) return;
    r_.expect_map(ts, "transformations");
    for (const auto& kv : ts) {
      const auto name = r_.scalar(kv.first, "transformation name");
      const std::string what = "transformation '" + name + "'";
      // Unlisted source states stay put.
      std::vector<DistributionPtr> rows(space_->size());
      std::vector<bool> seen(space_->size(), false);
      if (!kv.second.IsNull()) {
        r_.expect_map(kv.second, what);
        for (const auto& row : kv.second) {
          const std::size_t from = state(row.first);
          if (seen[from]) r_.fail(row.first, what + " lists a source state twice");
          seen[from] = true;
          rows[from] = distribution(row.second, what + " row");
        }
      }
      for (std::size_t s = 0; s < rows.size(); ++s) {
        if (!rows[s]) rows[s] = std::make_shared<const Distribution>(Distribution::point_mass(space_, s));
      }
      r_.located(kv.first, [&] { model.add_transformation(name, TransformationKernel(space_, std::move(rows))); });
    }
  }

  void parse_measurements(OnticModel& model) {
    const auto ms = root_["measurements"];
    if (!ms) return;
    r_.expect_map(ms, "measurements");
    for (const auto& kv : ms) {
      const auto name = r_.scalar(kv.first, "measurement name");
      const std::string what = "measurement '" + name + "'";
      const auto& m = kv.second;
      r_.expect_map(m, what);

      const auto outs = m["outcomes"];
      if (!outs) r_.fail(m, what + " has no 'outcomes'");
      r_.expect_seq(outs, what + " outcomes");
      std::vector<std::string> outcomes;
      for (const auto& o : outs) outcomes.push_back(r_.scalar(o, "outcome label"));
      const std::size_t k = outcomes.size();
      if (k == 0) r_.fail(outs, what + " has no outcomes");

      std::vector<double> values;
      if (const auto v = m["values"]) {
        r_.expect_seq(v, what + " values");
        for (const auto& x : v) values.push_back(r_.number(x, what + " value"));
        if (values.size() != k) r_.fail(v, what + " needs one value per outcome");
      }

      const auto resp = m["response"];
      if (!resp) r_.fail(m, what + " has no 'response'");
      r_.expect_map(resp, what + " response");
      std::vector<double> table(space_->size() * k, 0.0);
      std::vector<bool> seen(space_->size(), false);
      for (const auto& row : resp) {
        const std::size_t s = state(row.first);
        if (seen[s]) r_.fail(row.first, what + " response lists a state twice");
        seen[s] = true;
        r_.expect_seq(row.second, what + " response row");
        if (row.second.size() != k) r_.fail(row.second, what + " response row needs one probability per outcome");
        for (std::size_t q = 0; q < k; ++q) table[s * k + q] = r_.number(row.second[q], what + " probability");
        const double sum = [&] {
          double t = 0.0;
          for (std::size_t q = 0; q < k; ++q) t += table[s * k + q];
          return t;
        }();
        if (std::abs(sum - 1.0) > kDefaultTolerances.normalization) {
          r_.fail(row.second, what + " response row for '" + space_->label(s) + "' sums to " + format_double(sum));
        }
      }
      for (std::size_t s = 0; s < seen.size(); ++s) {
        if (!seen[s]) r_.fail(resp, what + " response has no row for '" + space_->label(s) + "'");
      }

      std::vector<DistributionPtr> update(space_->size() * k);
      std::vector<bool> updated(space_->size(), false);
      if (const auto up = m["update"]) {
        r_.expect_map(up, what + " update");
        for (const auto& row : up) {
          const std::size_t s = state(row.first);
          if (updated[s]) r_.fail(row.first, what + " update lists a state twice");
          updated[s] = true;
          r_.expect_seq(row.second, what + " update row");
          if (row.second.size() != k) r_.fail(row.second, what + " update row needs one entry per outcome");
          for (std::size_t q = 0; q < k; ++q) {
            if (!row.second[q].IsNull()) {
              update[s * k + q] = distribution(row.second[q], what + " update");
            } else if (table[s * k + q] > 0.0) {
              r_.fail(row.second[q], what + " update row for '" + space_->label(s) + "' is null for outcome '" +
                                         outcomes[q] + "' which has nonzero probability");
            }
          }
        }
      }
      for (std::size_t s = 0; s < updated.size(); ++s) {
        if (updated[s]) continue;
        auto d = std::make_shared<const Distribution>(Distribution::point_mass(space_, s));
        for (std::size_t q = 0; q < k; ++q) update[s * k + q] = d;
      }

      r_.located(m, [&] {
        model.add_measurement(name, Measurement(name, ResponseFunction(space_, outcomes, std::move(table)),
                                                MeasurementUpdate(space_, k, std::move(update)),
                                                std::move(values)));
      });
    }
  }

  void parse_classes(ModelBundle& b) {
    const auto cs = root_["quantity_classes"];
    if (!cs) return;
    r_.expect_map(cs, "quantity_classes");
    for (const auto& kv : cs) {
      const auto name = r_.scalar(kv.first, "quantity class name");
      r_.expect_seq(kv.second, "quantity class '" + name + "'");
      std::vector<std::string> members;
      for (const auto& m : kv.second) {
        members.push_back(r_.scalar(m, "measurement name"));
        if (!b.model->measurements().contains(members.back())) {
          r_.fail(m, "unknown measurement '" + members.back() + "'");
        }
      }
      if (members.empty()) r_.fail(kv.second, "quantity class '" + name + "' is empty");
      r_.located(kv.first, [&] { b.quantity_classes.add(name, std::move(members)); });
    }
  }

  void parse_protocols(ModelBundle& b) {
    const auto ps = root_["protocols"];
    if (!ps) return;
    r_.expect_map(ps, "protocols");
    for (const auto& kv : ps) {
      const auto name = r_.scalar(kv.first, "protocol name");
      const std::string what = "protocol '" + name + "'";
      r_.expect_map(kv.second, what);
      Protocol p;
      p.preparation = r_.optional_scalar(kv.second, "preparation", what + " preparation");
      const auto steps = kv.second["steps"];
      if (!steps) r_.fail(kv.second, what + " has no 'steps'");
      r_.expect_seq(steps, what + " steps");
      for (const auto& st : steps) {
        r_.expect_map(st, what + " step");
        ProtocolStep step;
        step.transformation = r_.optional_scalar(st, "transformation", "transformation");
        step.measurement = r_.optional_scalar(st, "measurement", "measurement");
        if (!step.transformation.empty() && !b.model->transformations().contains(step.transformation)) {
          r_.fail(st["transformation"], "unknown transformation '" + step.transformation + "'");
        }
        if (!b.model->measurements().contains(step.measurement)) {
          r_.fail(st["measurement"] ? st["measurement"] : st, "unknown measurement '" + step.measurement + "'");
        }
        if (const auto perform = st["perform"]) {
          const auto text = r_.scalar(perform, "perform");
          if (text != "true" && text != "false") r_.fail(perform, "perform must be true or false");
          step.perform = text == "true";
        }
        p.steps.push_back(std::move(step));
      }
      r_.located(kv.second, [&] { validate_protocol(*b.model, p); });
      r_.located(kv.first, [&] { b.protocols.add(name, std::move(p)); });
    }
  }

  void parse_arrangements(ModelBundle& b) {
    const auto as = root_["arrangements"];
    if (!as) return;
    r_.expect_map(as, "arrangements");
    for (const auto& kv : as) {
      const auto name = r_.scalar(kv.first, "arrangement name");
      const std::string what = "arrangement '" + name + "'";
      r_.expect_map(kv.second, what);
      ArrangementSpec spec{r_.optional_scalar(kv.second, "preparation", "preparation"),
                           r_.optional_scalar(kv.second, "t1", "t1"),
                           r_.optional_scalar(kv.second, "t2", "t2"),
                           r_.optional_scalar(kv.second, "m1", "m1"),
                           r_.optional_scalar(kv.second, "m2", "m2"),
                           r_.optional_scalar(kv.second, "m3", "m3")};
      r_.located(kv.second, [&] { LgArrangement::create(b.model, spec); });
      r_.located(kv.first, [&] { b.arrangements.add(name, std::move(spec)); });
    }
  }

  const YAML::Node& root_;
  Reader r_;
  SpacePtr space_;
  std::unordered_map<std::string, DistributionPtr> named_;
};

// -- export -------------------------------------------------------------------------

class ModelWriter {
 public:
  explicit ModelWriter(const ModelBundle& b) : b_(b), model_(*b.model), space_(model_.states()) {}

  std::string write() {
    name_shared_rows();
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "schema" << YAML::Value << kModelSchemaVersion;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << b_.name;
    if (!model_.metadata().empty()) {
      out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
      for (const auto& [k, v] : model_.metadata()) {
        out << YAML::Key << YAML::DoubleQuoted << k << YAML::Value << YAML::DoubleQuoted << v;
      }
      out << YAML::EndMap;
    }

    out << YAML::Key << "ontic_states" << YAML::Value << YAML::BeginSeq;
    for (const auto& l : space_.labels()) out << YAML::DoubleQuoted << l;
    out << YAML::EndSeq;

    if (!shared_order_.empty()) {
      out << YAML::Key << "distributions" << YAML::Value << YAML::BeginMap;
      for (const auto* d : shared_order_) {
        out << YAML::Key << YAML::DoubleQuoted << shared_.at(d).substr(1) << YAML::Value;
        emit_entries(out, *d);
      }
      out << YAML::EndMap;
    }

    out << YAML::Key << "preparations" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, mu] : model_.preparations()) {
      out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value;
      emit_entries(out, mu);
    }
    out << YAML::EndMap;

    out << YAML::Key << "transformations" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, kernel] : model_.transformations()) {
      out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value << YAML::BeginMap;
      for (std::size_t s = 0; s < space_.size(); ++s) {
        const auto& row = kernel.row(s);
        if (row.is_point_mass() && row.entries()[0].state == s) continue;
        out << YAML::Key << YAML::DoubleQuoted << space_.label(s) << YAML::Value;
        emit_row(out, kernel.row_ptr(s));
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "measurements" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, m] : model_.measurements()) emit_measurement(out, name, m);
    out << YAML::EndMap;

    out << YAML::Key << "quantity_classes" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, members] : b_.quantity_classes) {
      out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& m : members) out << YAML::DoubleQuoted << m;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    out << YAML::Key << "protocols" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, p] : b_.protocols) {
      out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "preparation" << YAML::Value << YAML::DoubleQuoted << p.preparation;
      out << YAML::Key << "steps" << YAML::Value << YAML::BeginSeq;
      for (const auto& st : p.steps) {
        out << YAML::Flow << YAML::BeginMap;
        if (!st.transformation.empty()) {
          out << YAML::Key << "transformation" << YAML::Value << YAML::DoubleQuoted << st.transformation;
        }
        out << YAML::Key << "measurement" << YAML::Value << YAML::DoubleQuoted << st.measurement;
        if (!st.perform) out << YAML::Key << "perform" << YAML::Value << "false";
        out << YAML::EndMap;
      }
      out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "arrangements" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, a] : b_.arrangements) {
      out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value << YAML::Flow << YAML::BeginMap;
      const std::array<std::pair<const char*, const std::string*>, 6> fields{
          {{"preparation", &a.preparation}, {"t1", &a.t1}, {"t2", &a.t2}, {"m1", &a.m1}, {"m2", &a.m2}, {"m3", &a.m3}}};
      for (const auto& [key, value] : fields) {
        if (value->empty()) continue;
        out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << *value;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::EndMap;
    if (!out.good()) throw EngineDefect(std::string("model export failed: ") + out.GetLastError());
    return std::string(out.c_str()) + "\n";
  }

 private:
  // Non-delta rows used more than once are written once under a name, which
  // restores the sharing on import.
  void name_shared_rows() {
    std::unordered_map<const Distribution*, std::size_t> uses;
    std::vector<const Distribution*> order;
    auto count = [&](const DistributionPtr& d) {
      if (!d || d->is_point_mass()) return;
      if (uses[d.get()]++ == 0) order.push_back(d.get());
    };
    for (const auto& [_, kernel] : model_.transformations()) {
      for (const auto& row : kernel.rows()) count(row);
    }
    for (const auto& [_, m] : model_.measurements()) {
      for (const auto& row : m.update().rows()) count(row);
    }
    for (const auto* d : order) {
      if (uses[d] < 2) continue;
      shared_.emplace(d, "@r" + std::to_string(shared_order_.size()));
      shared_order_.push_back(d);
    }
  }

  void emit_entries(YAML::Emitter& out, const Distribution& d) const {
    const bool small = d.entries().size() <= 8;
    if (small) out << YAML::Flow;
    out << YAML::BeginMap;
    for (const auto& e : d.entries()) {
      out << YAML::Key << YAML::DoubleQuoted << space_.label(e.state) << YAML::Value << format_double(e.weight);
    }
    out << YAML::EndMap;
  }

  void emit_row(YAML::Emitter& out, const DistributionPtr& d) const {
    if (!d) {
      out << YAML::Null;
    } else if (d->is_point_mass()) {
      out << YAML::DoubleQuoted << space_.label(d->entries()[0].state);
    } else if (auto it = shared_.find(d.get()); it != shared_.end()) {
      out << YAML::DoubleQuoted << it->second;
    } else {
      emit_entries(out, *d);
    }
  }

  void emit_measurement(YAML::Emitter& out, const std::string& name, const Measurement& m) const {
    const std::size_t k = m.outcomes().size();
    out << YAML::Key << YAML::DoubleQuoted << name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "outcomes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& o : m.outcomes()) out << YAML::DoubleQuoted << o;
    out << YAML::EndSeq;
    if (m.has_explicit_values()) {
      out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (double v : *m.values()) out << format_double(v);
      out << YAML::EndSeq;
    }
    out << YAML::Key << "response" << YAML::Value << YAML::BeginMap;
    for (std::size_t s = 0; s < space_.size(); ++s) {
      out << YAML::Key << YAML::DoubleQuoted << space_.label(s) << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (double p : m.response().row(s)) out << format_double(p);
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    // Rows whose every outcome leaves the state alone are omitted.
    out << YAML::Key << "update" << YAML::Value << YAML::BeginMap;
    for (std::size_t s = 0; s < space_.size(); ++s) {
      bool identity = true;
      for (std::size_t q = 0; q < k; ++q) {
        const auto& row = m.update().row_ptr(s, q);
        identity = identity && row && row->is_point_mass() && row->entries()[0].state == s;
      }
      if (identity) continue;
      out << YAML::Key << YAML::DoubleQuoted << space_.label(s) << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (std::size_t q = 0; q < k; ++q) emit_row(out, m.update().row_ptr(s, q));
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    out << YAML::EndMap;
  }

  const ModelBundle& b_;
  const OnticModel& model_;
  const StateSpace& space_;
  std::unordered_map<const Distribution*, std::string> shared_;
  std::vector<const Distribution*> shared_order_;
};

}  // namespace

ModelBundle parse_model(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw InputError(source, e.mark.is_null() ? 0 : e.mark.line + 1, e.msg);
  }
  return ModelParser(root, Reader(source)).parse();
}

ModelBundle load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open model file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str(), path.string());
}

std::string export_model(const ModelBundle& bundle) {
  if (!bundle.model) throw DomainError("cannot export a bundle without a model");
  return ModelWriter(bundle).write();
}

void save_model_file(const ModelBundle& bundle, const std::filesystem::path& path) {
  const auto text = export_model(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write model file '" + path.string() + "'");
  out << text;
  if (!out) throw DomainError("failed writing model file '" + path.string() + "'");
}

}  // namespace lglab
