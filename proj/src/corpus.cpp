#include "docreward/corpus.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "docreward/errors.hpp"

namespace docreward {

namespace {

constexpr std::array<std::string_view, 8> kDomainNames = {
    "text_doc", "formula", "table", "chart", "web", "svg", "plot", "molecule"};

std::string required_string(const nlohmann::json& obj, const char* field,
                            std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw SchemaError(line, field, std::string("missing required field '") + field + "'");
  if (!it->is_string())
    throw SchemaError(line, field, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj,
                                           const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw SchemaError(line, field, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Domain d) {
  return kDomainNames[static_cast<std::size_t>(d)];
}

std::optional<Domain> domain_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kDomainNames.size(); ++i)
    if (kDomainNames[i] == s) return static_cast<Domain>(i);
  return std::nullopt;
}

bool is_vision_domain(Domain d) {
  switch (d) {
    case Domain::text_doc:
    case Domain::formula:
    case Domain::table:
      return false;
    default:
      return true;
  }
}

EvalRecord parse_record_line(std::string_view line, std::size_t line_number) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_number, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line_number, "record is not a JSON object");

  EvalRecord r;
  r.id = required_string(obj, "id", line_number);
  if (r.id.empty()) throw SchemaError(line_number, "id", "field 'id' must be non-empty");

  const std::string domain = required_string(obj, "domain", line_number);
  auto d = domain_from_string(domain);
  if (!d) throw DomainError(line_number, "unknown domain tag '" + domain + "'");
  r.domain = *d;

  r.prediction = required_string(obj, "prediction", line_number);
  r.ground_truth = required_string(obj, "ground_truth", line_number);
  r.gt_image_path = optional_string(obj, "gt_image_path", line_number);
  r.pred_image_path = optional_string(obj, "pred_image_path", line_number);
  return r;
}

std::string serialize_record(const EvalRecord& record) {
  nlohmann::ordered_json obj;
  obj["id"] = record.id;
  obj["domain"] = std::string(to_string(record.domain));
  obj["prediction"] = record.prediction;
  obj["ground_truth"] = record.ground_truth;
  if (record.gt_image_path) obj["gt_image_path"] = *record.gt_image_path;
  if (record.pred_image_path) obj["pred_image_path"] = *record.pred_image_path;
  return obj.dump();
}

std::vector<EvalRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset '" + path.string() + "'");

  std::vector<EvalRecord> records;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    EvalRecord r = parse_record_line(line, line_number);
    auto [it, inserted] = first_line.emplace(r.id, line_number);
    if (!inserted)
      throw DatasetError("duplicate id '" + r.id + "' on lines " +
                         std::to_string(it->second) + "," +
                         std::to_string(line_number));
    records.push_back(std::move(r));
  }
  if (in.bad()) throw DatasetError("read error on '" + path.string() + "'");
  return records;
}

}  // namespace docreward
