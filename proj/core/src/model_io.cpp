#include "sessrec/model_io.hpp"

#include <fstream>
#include <string>

#include "json.hpp"
#include "sessrec/neighborhood.hpp"
#include "sessrec/sr.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

}  // namespace

void save_model(const Model& model, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot open '" + file.string() + "' for writing");
  out << json{{"format_version", kFormatVersion},
              {"method", std::string(model.method())},
              {"payload", model.save_payload()}}
             .dump(2)
      << '\n';
  if (!out) throw DataError("failed writing '" + file.string() + "'");
}

std::unique_ptr<Model> load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open model file '" + file.string() + "'");
  json doc;
  try {
    in >> doc;
    const int version = doc.at("format_version").get<int>();
    if (version > kFormatVersion) {
      throw DataError("model file '" + file.string() + "' uses format version " +
                      std::to_string(version) + ", newest supported is " +
                      std::to_string(kFormatVersion));
    }
    const std::string method = doc.at("method").get<std::string>();
    const std::string payload = doc.at("payload").get<std::string>();
    if (method == "sr") return sr_from_payload(payload);
    if (method == "vsknn" || method == "stan" || method == "vstan") {
      auto model = neighborhood_from_payload(payload);
      if (model->method() != method) {
        throw DataError("model file '" + file.string() + "' declares method '" + method +
                        "' but its payload holds '" + std::string(model->method()) + "'");
      }
      return model;
    }
    throw DataError("unknown model method '" + method + "'");
  } catch (const json::exception& e) {
    throw DataError("malformed model file '" + file.string() + "': " + e.what());
  }
}

}  // namespace sessrec
