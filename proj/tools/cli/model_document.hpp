#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "digits/pipeline.hpp"

namespace digits::cli {

inline constexpr int kModelFormatVersion = 1;

/// Unreadable, tampered or incompatible model file (exit code 4).
class ModelIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelDocument {
  PipelineModel model;
  nlohmann::json config;
};

nlohmann::json model_to_json(const PipelineModel& model);
PipelineModel model_from_json(const nlohmann::json& doc);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& bytes);

/// Full document text: format_version, config echo, model and a digest of
/// the compact serialization of the first three.
std::string serialize_document(const PipelineModel& model, const RunConfig& config);

/// Throws ModelIntegrityError on parse failure, unknown version, digest
/// mismatch or a structurally invalid model.
ModelDocument parse_document(const std::string& text);

void save_document(const std::filesystem::path& path, const PipelineModel& model, const RunConfig& config);
ModelDocument load_document(const std::filesystem::path& path);

}  // namespace digits::cli
