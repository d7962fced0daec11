#include "cli/model_document.hpp"

#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "digits/error.hpp"

namespace digits::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json mlp_to_json(const MlpModel& m) {
  return {{"topology", {m.topology.inputs, m.topology.hidden, m.topology.outputs}},
          {"hidden_weights", m.hidden_weights},
          {"hidden_biases", m.hidden_biases},
          {"output_weights", m.output_weights},
          {"output_biases", m.output_biases}};
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  const auto topo = j.at("topology").get<std::vector<std::size_t>>();
  if (topo.size() != 3) throw ModelIntegrityError("topology must have three entries");
  m.topology = {topo[0], topo[1], topo[2]};
  m.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
  m.hidden_biases = j.at("hidden_biases").get<std::vector<double>>();
  m.output_weights = j.at("output_weights").get<std::vector<double>>();
  m.output_biases = j.at("output_biases").get<std::vector<double>>();
  return m;
}

json payload(int version, const json& config, const json& model) {
  return {{"format_version", version}, {"config", config}, {"model", model}};
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

json model_to_json(const PipelineModel& model) {
  json groups = json::array();
  for (const auto& g : model.groups.groups()) groups.push_back(g.members());
  json experts = json::array();
  for (const auto& e : model.experts) {
    experts.push_back({{"group", e.group.members()},
                       {"chromosome", e.chromosome.to_string()},
                       {"fitness", e.fitness},
                       {"mlp", mlp_to_json(e.model)}});
  }
  return {{"coarse", mlp_to_json(model.coarse)}, {"groups", groups}, {"experts", experts}};
}

PipelineModel model_from_json(const json& doc) {
  PipelineModel pm;
  try {
    pm.coarse = mlp_from_json(doc.at("coarse"));
    std::vector<LabelSet> groups;
    for (const auto& g : doc.at("groups")) groups.push_back(LabelSet::from_vector(g.get<std::vector<Label>>()));
    pm.groups = GroupTable(std::move(groups));
    for (const auto& e : doc.at("experts")) {
      GroupExpert ex;
      ex.group = LabelSet::from_vector(e.at("group").get<std::vector<Label>>());
      ex.chromosome = Chromosome::parse(e.at("chromosome").get<std::string>());
      ex.fitness = e.at("fitness").get<double>();
      ex.model = mlp_from_json(e.at("mlp"));
      pm.experts.push_back(std::move(ex));
    }
    pm.validate();
  } catch (const json::exception& e) {
    throw ModelIntegrityError(std::string("malformed model content: ") + e.what());
  } catch (const Error& e) {
    throw ModelIntegrityError(std::string("invalid model content: ") + e.what());
  }
  return pm;
}

std::string serialize_document(const PipelineModel& model, const RunConfig& config) {
  json echo = to_json(config);
  echo.erase("output_dir");
  json doc = payload(kModelFormatVersion, echo, model_to_json(model));
  doc["digest"] = "sha256:" + sha256_hex(doc.dump());
  return doc.dump(1) + "\n";
}

ModelDocument parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ModelIntegrityError("model file is not a valid JSON document");
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw ModelIntegrityError("model file has no format_version");
  }
  const int version = doc["format_version"].get<int>();
  if (version != kModelFormatVersion) {
    throw ModelIntegrityError("unsupported model format_version " + std::to_string(version) + " (expected " +
                              std::to_string(kModelFormatVersion) + ")");
  }
  if (!doc.contains("digest") || !doc["digest"].is_string() || !doc.contains("config") || !doc.contains("model")) {
    throw ModelIntegrityError("model file is missing digest, config or model");
  }
  const std::string expected = "sha256:" + sha256_hex(payload(version, doc["config"], doc["model"]).dump());
  if (doc["digest"].get<std::string>() != expected) throw ModelIntegrityError("model digest mismatch");
  return {model_from_json(doc["model"]), doc["config"]};
}

void save_document(const fs::path& path, const PipelineModel& model, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << serialize_document(model, config);
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

ModelDocument load_document(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIntegrityError("cannot read model file " + path.string());
  return parse_document(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
}

}  // namespace digits::cli
