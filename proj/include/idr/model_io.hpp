#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idr/idr.hpp"
#include "idr/subagging.hpp"

namespace idr {

inline constexpr int kModelFormatMajor = 1;
inline constexpr int kModelFormatMinor = 0;

/// A model file: a single fit or a subagged ensemble, plus the names of the
/// covariate columns (in OrderSpec layout) and of the response.
struct ModelDocument {
  std::variant<IdrModel, SubaggedModel> model;
  std::vector<std::string> columns;
  std::string response;
};

std::string serialize_model(const ModelDocument& doc);
// Throws ParseError on malformed input or an unsupported major version.
ModelDocument parse_model(std::string_view text);

void save_model(const ModelDocument& doc, const std::string& path);
ModelDocument load_model(const std::string& path);

// Default column names x0, x1, ...
std::vector<std::string> default_column_names(std::size_t dimension);

}  // namespace idr
