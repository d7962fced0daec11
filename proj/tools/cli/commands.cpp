#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include "cli/config.hpp"
#include "cli/model_document.hpp"
#include "digits/datasets.hpp"
#include "digits/error.hpp"
#include "digits/pipeline.hpp"
#include "digits/report.hpp"

namespace digits::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "JSON run configuration");
  cmd->add_option("--seed", opts.seed, "Override the run seed");
  cmd->add_option("--out", opts.out, "Output directory");
  cmd->add_option("--set", opts.sets, "Override a config field, e.g. ga.max_generations=5")->take_all();
}

RunConfig resolve_config(const CommonOptions& opts, bool required = true) {
  if (opts.config.empty()) {
    if (required) throw ConfigError("--config is required");
    RunConfig cfg;
    if (!opts.out.empty()) cfg.output_dir = opts.out;
    return cfg;
  }
  auto overrides = opts.sets;
  if (opts.seed) overrides.push_back("seed=" + std::to_string(*opts.seed));
  RunConfig cfg = load_config(opts.config, overrides);
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  return cfg;
}

std::vector<LabeledImage> load_dataset(const RunConfig& cfg, std::ostream& err) {
  return std::visit(
      [&](const auto& src) -> std::vector<LabeledImage> {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, IdxSource>) {
          return load_idx(src.images, src.labels);
        } else if constexpr (std::is_same_v<T, DirSource>) {
          auto loaded = load_dir(src.root);
          if (loaded.skipped) err << "skipped " << loaded.skipped << " non-PGM file(s) under " << src.root << '\n';
          return std::move(loaded.samples);
        } else {
          return synth_digits(src.per_class, src.seed, src.noise);
        }
      },
      cfg.dataset);
}

struct PreparedSplits {
  PreparedSamples train;
  PreparedSamples test;
};

PreparedSplits prepare_splits(const RunConfig& cfg, std::ostream& err) {
  const auto data = load_dataset(cfg, err);
  auto [train, test] = split(data, cfg.split);
  PreparedSplits out{prepare_samples(train, cfg.threshold, cfg.invert),
                     prepare_samples(test, cfg.threshold, cfg.invert)};
  if (out.train.blank + out.test.blank) {
    err << "skipped " << out.train.blank + out.test.blank << " blank sample(s)\n";
  }
  err << "dataset: " << out.train.samples.size() << " train / " << out.test.samples.size() << " test samples\n";
  return out;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  body(f);
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

void write_route_confusions(const fs::path& dir, const std::string& prefix, const Report& report) {
  write_file(dir / (prefix + "confusion_coarse.csv"), [&](std::ostream& o) { write_confusion_csv(o, report.coarse_confusion); });
  write_file(dir / (prefix + "confusion_combined.csv"),
             [&](std::ostream& o) { write_confusion_csv(o, report.combined_confusion); });
  write_file(dir / (prefix + "confusion_route_final.csv"),
             [&](std::ostream& o) { write_confusion_csv(o, report.final_confusion); });
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    write_file(dir / (prefix + "confusion_route_group" + std::to_string(g) + ".csv"),
               [&](std::ostream& o) { write_confusion_csv(o, report.groups[g].routed_confusion); });
  }
}

std::string window_rect(std::size_t w) {
  const Window& win = window_table()[w];
  return "(" + std::to_string(win.x0) + "," + std::to_string(win.y0) + ")-(" + std::to_string(win.x1) + "," +
         std::to_string(win.y1) + ")";
}

int cmd_train(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(opts);
  const auto data = prepare_splits(cfg, err);
  const auto build = train_pipeline(data.train.samples, cfg.pipeline, data.test.samples,
                                    [&](std::string_view msg) { err << msg << '\n'; });

  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  save_document(dir / "model.json", build.model, cfg);
  write_file(dir / "confusion_train.csv", [&](std::ostream& o) { write_confusion_csv(o, build.train_confusion); });
  const auto pairs = qualifying_pairs(build.train_confusion, cfg.pipeline.tau);
  write_file(dir / "groups.csv", [&](std::ostream& o) { write_groups_csv(o, build.model.groups, pairs); });
  for (std::size_t g = 0; g < build.ga_runs.size(); ++g) {
    write_file(dir / ("ga_history_group" + std::to_string(g) + ".csv"),
               [&](std::ostream& o) { write_ga_history_csv(o, build.ga_runs[g].history); });
  }

  const Report report = evaluate(build.model, data.test.samples);
  write_file(dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, report); });
  write_file(dir / "report.txt", [&](std::ostream& o) { write_report_table(o, report, cfg.pipeline.coarse_hidden); });
  write_route_confusions(dir, "", report);

  write_report_table(out, report, cfg.pipeline.coarse_hidden);
  for (const auto& e : build.model.experts) {
    out << "group {" << e.group.to_string() << "}: windows " << e.chromosome.to_string() << " fitness "
        << format_decimal(e.fitness) << '\n';
  }
  out << "model written to " << (dir / "model.json").string() << '\n';
  return kExitOk;
}

int cmd_eval(const CommonOptions& opts, const std::string& model_path, const std::string& which, std::ostream& out,
             std::ostream& err) {
  const ModelDocument doc = load_document(model_path);
  RunConfig cfg;
  if (opts.config.empty()) {
    auto echo = doc.config;
    for (const auto& s : opts.sets) apply_override(echo, s);
    if (opts.seed) echo["seed"] = *opts.seed;
    cfg = parse_config(echo);
    if (!opts.out.empty()) cfg.output_dir = opts.out;
  } else {
    cfg = resolve_config(opts);
  }

  const auto data = prepare_splits(cfg, err);
  std::vector<FeatureSample> samples;
  if (which == "train" || which == "all") {
    samples.insert(samples.end(), data.train.samples.begin(), data.train.samples.end());
  }
  if (which == "test" || which == "all") {
    samples.insert(samples.end(), data.test.samples.begin(), data.test.samples.end());
  }
  const Report report = evaluate(doc.model, samples);

  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  write_file(dir / "eval_report.csv", [&](std::ostream& o) { write_report_csv(o, report); });
  write_file(dir / "eval_report.txt",
             [&](std::ostream& o) { write_report_table(o, report, doc.model.coarse.topology.hidden); });
  write_route_confusions(dir, "eval_", report);
  write_report_table(out, report, doc.model.coarse.topology.hidden);
  return kExitOk;
}

int cmd_ga(const CommonOptions& opts, const std::string& group_text, bool mock, std::ostream& out,
           std::ostream& err) {
  LabelSet group;
  try {
    group = LabelSet::parse(group_text);
  } catch (const Error& e) {
    throw ConfigError(std::string("--group: ") + e.what());
  }
  if (group.size() < 2) throw ConfigError("--group needs at least two labels, got {" + group.to_string() + "}");

  const RunConfig cfg = resolve_config(opts, !mock);
  GaResult result;
  if (mock) {
    GaConfig ga = cfg.pipeline.ga;
    if (opts.seed) ga.seed = *opts.seed;
    result = evolve(ga, [](const Chromosome& c) { return static_cast<double>(c.popcount()) / kNumWindows; });
  } else {
    const auto data = prepare_splits(cfg, err);
    result = run_group_ga(group, data.train.samples, data.test.samples, cfg.pipeline);
  }

  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  write_file(dir / "ga_history.csv", [&](std::ostream& o) { write_ga_history_csv(o, result.history); });

  out << "group {" << group.to_string() << "}" << (mock ? " (mock fitness popcount/9)" : "") << '\n';
  out << "generations: " << result.history.size() << '\n';
  out << "best: " << result.best.to_string() << '\n';
  out << "fitness: " << format_decimal(result.best_fitness) << '\n';
  for (std::size_t w : result.best.selected()) out << "window " << w << ": " << window_rect(w) << '\n';
  return kExitOk;
}

int cmd_groups(const CommonOptions& opts, const std::string& matrix, std::optional<std::int64_t> tau,
               std::ostream& out, std::ostream& err) {
  ConfusionMatrix cm;
  std::int64_t threshold = PipelineConfig{}.tau;
  if (!matrix.empty()) {
    std::ifstream in(matrix);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + matrix);
    try {
      cm = read_confusion_csv(in);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidArgument, matrix + ": " + e.what());
    }
    if (!opts.config.empty()) threshold = resolve_config(opts).pipeline.tau;
  } else {
    const RunConfig cfg = resolve_config(opts);
    threshold = cfg.pipeline.tau;
    const auto data = prepare_splits(cfg, err);
    const auto coarse = train_coarse(data.train.samples, cfg.pipeline);
    std::vector<LabeledFeatures> shadow;
    for (const auto& s : data.train.samples) shadow.push_back({{s.features.shadow.begin(), s.features.shadow.end()}, s.label});
    cm = confusion(coarse.model, shadow);
  }
  if (tau) threshold = *tau;
  if (threshold < 1) throw ConfigError("--tau must be at least 1");
  const auto pairs = qualifying_pairs(cm, threshold);
  write_groups_csv(out, form_groups(cm, threshold), pairs);
  return kExitOk;
}

int cmd_features(const std::string& image, const std::string& chromosome_text, const std::string& threshold_text,
                 bool invert, std::ostream& out) {
  Chromosome chromosome;
  ThresholdMode mode = OtsuThreshold{};
  try {
    chromosome = Chromosome::parse(chromosome_text);
    if (threshold_text != "otsu") {
      const int t = std::stoi(threshold_text);
      if (t < 0 || t > 255) throw std::out_of_range("threshold");
      mode = FixedThreshold{static_cast<std::uint8_t>(t)};
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("--chromosome: ") + e.what());
  } catch (const std::exception&) {
    throw ConfigError("--threshold expects 'otsu' or an integer in 0..255");
  }

  GrayImage gray = read_pgm(image);
  if (invert) {
    std::vector<std::uint8_t> px(gray.pixels().begin(), gray.pixels().end());
    for (auto& p : px) p = static_cast<std::uint8_t>(255 - p);
    gray = GrayImage(gray.width(), gray.height(), std::move(px));
  }
  const auto features = assemble_features(normalize(binarize(gray, mode)), chromosome);
  const auto names = feature_names(chromosome);
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t i = 0; i < features.size(); ++i) out << (i ? "," : "") << format_decimal(features[i]);
  out << '\n';
  return kExitOk;
}

int cmd_synth(const CommonOptions& opts, std::optional<std::size_t> per_class, std::optional<double> noise,
              const std::string& format, std::ostream& out) {
  SynthSource src;
  fs::path dir = "synth";
  if (!opts.config.empty()) {
    const RunConfig cfg = resolve_config(opts);
    if (const auto* s = std::get_if<SynthSource>(&cfg.dataset)) src = *s;
    dir = cfg.output_dir;
  }
  if (per_class) src.per_class = *per_class;
  if (noise) src.noise = *noise;
  if (opts.seed) src.seed = *opts.seed;
  if (!opts.out.empty()) dir = opts.out;

  const auto data = synth_digits(src.per_class, src.seed, src.noise);
  ensure_dir(dir);
  if (format == "idx") {
    save_idx(data, dir / "images.idx", dir / "labels.idx");
  } else {
    std::vector<std::size_t> per_label(kNumClasses, 0);
    for (const auto& s : data) {
      const fs::path sub = dir / std::to_string(s.label);
      ensure_dir(sub);
      char name[32];
      std::snprintf(name, sizeof name, "%06zu.pgm", per_label[static_cast<std::size_t>(s.label)]++);
      write_pgm(std::get<GrayImage>(s.image), sub / name);
    }
  }
  out << "wrote " << data.size() << " samples (" << src.per_class << " per class, noise " << format_decimal(src.noise)
      << ", seed " << src.seed << ") to " << dir.string() << '\n';
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BlankImage:
      return kExitDegenerate;
    case ErrorCode::Io:
    case ErrorCode::BadMagic:
    case ErrorCode::CountMismatch:
    case ErrorCode::TruncatedFile:
    case ErrorCode::MissingRoot:
    case ErrorCode::NoSamples:
    case ErrorCode::EmptyDataset:
    case ErrorCode::LabelOutsideGroup:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
      return kExitData;
    default:
      return kExitFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-pass handwritten digit classifier with GA-selected local windows", "digits"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* train = app.add_subcommand("train", "Train the coarse classifier, groups and group experts");
  add_common(train, common);

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model");
  add_common(eval, common);
  std::string model_path;
  std::string which = "test";
  eval->add_option("--model", model_path, "Model document written by train")->required();
  eval->add_option("--split", which, "Which split to evaluate")->check(CLI::IsMember({"train", "test", "all"}));

  auto* ga = app.add_subcommand("ga", "Run the window-selection GA for one label group");
  add_common(ga, common);
  std::string group_text;
  bool mock = false;
  ga->add_option("--group", group_text, "Comma-separated labels, e.g. 1,9")->required();
  ga->add_flag("--mock-fitness", mock, "Use popcount/9 as fitness (no classifier)");

  auto* groups = app.add_subcommand("groups", "Print the group table and qualifying pair sums");
  add_common(groups, common);
  std::string matrix;
  std::optional<std::int64_t> tau;
  groups->add_option("--matrix", matrix, "Confusion matrix CSV instead of training a coarse classifier");
  groups->add_option("--tau", tau, "Mutual-confusion threshold");

  auto* features = app.add_subcommand("features", "Print the feature vector of one PGM image as CSV");
  std::string image;
  std::string chromosome_text = Chromosome::all().to_string();
  std::string threshold_text = "otsu";
  bool invert = false;
  features->add_option("image", image, "Binary PGM (P5) image")->required();
  features->add_option("--chromosome", chromosome_text, "Nine-bit window selection, bit 0 first");
  features->add_option("--threshold", threshold_text, "'otsu' or a fixed threshold 0..255");
  features->add_flag("--invert", invert, "Treat bright pixels as ink");

  auto* synth = app.add_subcommand("synth", "Write a synthetic digit dataset");
  add_common(synth, common);
  std::optional<std::size_t> per_class;
  std::optional<double> noise;
  std::string format = "idx";
  synth->add_option("--per-class", per_class, "Samples per digit");
  synth->add_option("--noise", noise, "Per-pixel flip probability");
  synth->add_option("--format", format, "idx or dir")->check(CLI::IsMember({"idx", "dir"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return cmd_train(common, out, err);
    if (*eval) return cmd_eval(common, model_path, which, out, err);
    if (*ga) return cmd_ga(common, group_text, mock, out, err);
    if (*groups) return cmd_groups(common, matrix, tau, out, err);
    if (*features) return cmd_features(image, chromosome_text, threshold_text, invert, out);
    if (*synth) return cmd_synth(common, per_class, noise, format, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ModelIntegrityError& e) {
    err << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace digits::cli
