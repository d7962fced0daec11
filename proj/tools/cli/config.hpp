#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "digits/datasets.hpp"
#include "digits/pipeline.hpp"

namespace digits::cli {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IdxSource {
  std::filesystem::path images;
  std::filesystem::path labels;
};
struct DirSource {
  std::filesystem::path root;
};
struct SynthSource {
  std::size_t per_class = 200;
  std::uint64_t seed = 1;
  double noise = 0.08;
};
using DatasetSource = std::variant<IdxSource, DirSource, SynthSource>;

struct RunConfig {
  std::uint64_t seed = 1;
  DatasetSource dataset = SynthSource{};
  ThresholdMode threshold = OtsuThreshold{};
  bool invert = false;
  SplitSpec split;
  PipelineConfig pipeline;
  std::filesystem::path output_dir = "out";
};

/// Parses and validates a config document. Relative dataset paths are
/// resolved against `base_dir`. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads `path`, applies `--set key=value` overrides (dotted keys, JSON
/// values, bare strings allowed) and parses the result.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Applies one `a.b.c=value` override in place.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Canonical echo of a parsed config; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace digits::cli
