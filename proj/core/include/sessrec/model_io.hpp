#pragma once

#include <filesystem>
#include <memory>

#include "sessrec/model.hpp"

namespace sessrec {

// Self-describing JSON container: {"format_version", "method", "payload"}.
// load_model rejects unknown methods and format versions newer than its own.
void save_model(const Model& model, const std::filesystem::path& file);
std::unique_ptr<Model> load_model(const std::filesystem::path& file);

}  // namespace sessrec
