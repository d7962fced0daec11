#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "digits/error.hpp"
#include "digits/random.hpp"

namespace digits::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Typed, strict view of one JSON object; remembers which keys were read so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section sub(const std::string& key) {
    used_.insert(key);
    return Section(node_.at(key), where(key));
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  double get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  bool get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) fail(key, "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(where(key) + ": " + msg);
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

void read_train(Section& s, TrainConfig& tc) {
  tc.learning_rate = s.get_double("learning_rate", tc.learning_rate);
  tc.momentum = s.get_double("momentum", tc.momentum);
  tc.epochs = static_cast<int>(s.get_uint("epochs", static_cast<std::uint64_t>(tc.epochs)));
  tc.shuffle = s.get_bool("shuffle", tc.shuffle);
}

json train_json(const TrainConfig& tc) {
  return {{"learning_rate", tc.learning_rate}, {"momentum", tc.momentum}, {"epochs", tc.epochs},
          {"shuffle", tc.shuffle}};
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

}  // namespace

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  RunConfig c;
  Section root(doc, "");
  c.seed = root.get_uint("seed", c.seed);

  if (!root.has("dataset")) root.fail("dataset", "missing; exactly one dataset source (idx, dir, synth) is required");
  {
    Section ds = root.sub("dataset");
    const int sources = ds.has("idx") + ds.has("dir") + ds.has("synth");
    if (sources != 1) {
      ds.fail("", "exactly one dataset source (idx, dir, synth) is required, found " + std::to_string(sources));
    }
    if (ds.has("idx")) {
      Section idx = ds.sub("idx");
      if (!idx.has("images") || !idx.has("labels")) idx.fail("", "needs both 'images' and 'labels'");
      c.dataset = IdxSource{resolve(base_dir, idx.get_string("images", "")), resolve(base_dir, idx.get_string("labels", ""))};
      idx.finish();
    } else if (ds.has("dir")) {
      const json& d = ds.raw("dir");
      if (!d.is_string()) ds.fail("dir", "expected a directory path");
      c.dataset = DirSource{resolve(base_dir, d.get<std::string>())};
    } else {
      Section syn = ds.sub("synth");
      SynthSource s;
      s.per_class = syn.get_uint("per_class", s.per_class);
      s.seed = syn.get_uint("seed", s.seed);
      s.noise = syn.get_double("noise", s.noise);
      if (s.per_class < 1) syn.fail("per_class", "must be at least 1");
      if (!(s.noise >= 0.0 && s.noise <= 1.0)) syn.fail("noise", "must lie in [0,1]");
      c.dataset = s;
      syn.finish();
    }
    ds.finish();
  }

  if (root.has("binarize")) {
    Section b = root.sub("binarize");
    const std::string mode = b.get_string("mode", "otsu");
    if (mode == "otsu") {
      c.threshold = OtsuThreshold{};
      if (b.has("threshold")) b.fail("threshold", "only valid with mode \"fixed\"");
    } else if (mode == "fixed") {
      const auto t = b.get_uint("threshold", 128);
      if (t > 255) b.fail("threshold", "must lie in 0..255");
      c.threshold = FixedThreshold{static_cast<std::uint8_t>(t)};
    } else {
      b.fail("mode", "expected \"otsu\" or \"fixed\"");
    }
    c.invert = b.get_bool("invert", false);
    b.finish();
  }

  // Sub-seeds derive from the run seed; split.seed may be pinned separately.
  c.split.seed = mix_seed(c.seed, 4);
  if (root.has("split")) {
    Section s = root.sub("split");
    c.split.train_fraction = s.get_double("train_fraction", c.split.train_fraction);
    c.split.seed = s.get_uint("seed", c.split.seed);
    c.split.stratified = s.get_bool("stratified", c.split.stratified);
    if (!(c.split.train_fraction > 0.0 && c.split.train_fraction < 1.0)) {
      s.fail("train_fraction", "must lie strictly between 0 and 1");
    }
    s.finish();
  }

  PipelineConfig& p = c.pipeline;
  p.coarse_train.seed = mix_seed(c.seed, 1);
  p.ga.seed = mix_seed(c.seed, 2);
  p.expert_train.seed = mix_seed(c.seed, 3);

  if (root.has("coarse")) {
    Section s = root.sub("coarse");
    p.coarse_hidden = s.get_uint("hidden", p.coarse_hidden);
    read_train(s, p.coarse_train);
    s.finish();
  }
  if (root.has("grouping")) {
    Section s = root.sub("grouping");
    p.tau = static_cast<std::int64_t>(s.get_uint("tau", static_cast<std::uint64_t>(p.tau)));
    s.finish();
  }
  if (root.has("ga")) {
    Section s = root.sub("ga");
    GaConfig& g = p.ga;
    g.population_size = s.get_uint("population_size", g.population_size);
    g.max_generations = static_cast<int>(s.get_uint("max_generations", static_cast<std::uint64_t>(g.max_generations)));
    g.crossover_fraction = s.get_double("crossover_fraction", g.crossover_fraction);
    g.mutation_fraction = s.get_double("mutation_fraction", g.mutation_fraction);
    g.stop_ratio = s.get_double("stop_ratio", g.stop_ratio);
    g.fitness_epochs = static_cast<int>(s.get_uint("fitness_epochs", static_cast<std::uint64_t>(g.fitness_epochs)));
    g.hidden_units = s.get_uint("hidden_units", g.hidden_units);
    g.learning_rate = s.get_double("learning_rate", g.learning_rate);
    g.momentum = s.get_double("momentum", g.momentum);
    g.threads = static_cast<unsigned>(s.get_uint("threads", g.threads));
    p.validation_fraction = s.get_double("validation_fraction", p.validation_fraction);
    p.fitness_on_test = s.get_bool("fitness_on_test", p.fitness_on_test);
    s.finish();
  }
  if (root.has("experts")) {
    Section s = root.sub("experts");
    if (s.has("hidden")) {
      const json& h = s.raw("hidden");
      if (!h.is_object()) s.fail("hidden", "expected an object mapping \"a,b,...\" to a hidden size");
      p.expert_hidden.clear();
      for (const auto& [key, value] : h.items()) {
        LabelSet group;
        try {
          group = LabelSet::parse(key);
        } catch (const Error& e) {
          s.fail("hidden." + key, e.what());
        }
        if (!value.is_number_unsigned()) s.fail("hidden." + key, "expected a positive integer");
        p.expert_hidden[group.to_string()] = value.get<std::size_t>();
      }
    }
    p.expert_hidden_default = s.get_uint("default_hidden", p.expert_hidden_default);
    read_train(s, p.expert_train);
    s.finish();
  }

  c.output_dir = root.get_string("output_dir", c.output_dir.string());
  root.finish();

  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].empty()) throw ConfigError("--set key '" + key + "' has an empty component");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError("--set key '" + key + "' descends into a non-object");
    node = &(*node)[path[i]];
  }
  *node = std::move(value);
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config file");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(path.string() + ": not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  try {
    return parse_config(doc, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json doc;
  doc["seed"] = c.seed;
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, IdxSource>) {
          doc["dataset"] = {{"idx", {{"images", src.images.string()}, {"labels", src.labels.string()}}}};
        } else if constexpr (std::is_same_v<T, DirSource>) {
          doc["dataset"] = {{"dir", src.root.string()}};
        } else {
          doc["dataset"] = {{"synth", {{"per_class", src.per_class}, {"seed", src.seed}, {"noise", src.noise}}}};
        }
      },
      c.dataset);
  if (const auto* fixed = std::get_if<FixedThreshold>(&c.threshold)) {
    doc["binarize"] = {{"mode", "fixed"}, {"threshold", fixed->value}, {"invert", c.invert}};
  } else {
    doc["binarize"] = {{"mode", "otsu"}, {"invert", c.invert}};
  }
  doc["split"] = {{"train_fraction", c.split.train_fraction}, {"seed", c.split.seed}, {"stratified", c.split.stratified}};

  const PipelineConfig& p = c.pipeline;
  doc["coarse"] = train_json(p.coarse_train);
  doc["coarse"]["hidden"] = p.coarse_hidden;
  doc["grouping"] = {{"tau", p.tau}};
  const GaConfig& g = p.ga;
  doc["ga"] = {{"population_size", g.population_size},
               {"max_generations", g.max_generations},
               {"crossover_fraction", g.crossover_fraction},
               {"mutation_fraction", g.mutation_fraction},
               {"stop_ratio", g.stop_ratio},
               {"fitness_epochs", g.fitness_epochs},
               {"hidden_units", g.hidden_units},
               {"learning_rate", g.learning_rate},
               {"momentum", g.momentum},
               {"threads", g.threads},
               {"validation_fraction", p.validation_fraction},
               {"fitness_on_test", p.fitness_on_test}};
  doc["experts"] = train_json(p.expert_train);
  doc["experts"]["hidden"] = json::object();
  for (const auto& [key, h] : p.expert_hidden) doc["experts"]["hidden"][key] = h;
  doc["experts"]["default_hidden"] = p.expert_hidden_default;
  doc["output_dir"] = c.output_dir.string();
  return doc;
}

}  // namespace digits::cli
