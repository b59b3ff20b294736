#pragma once

// Model files: a YAML document with `schema: 1` declaring ontic states,
// preparations, transformations, measurements, quantity classes, protocols
// and arrangements. Export followed by import reproduces the model exactly,
// including which kernel rows are shared.

#include <filesystem>
#include <string>
#include <string_view>

#include "lglab/bundle.hpp"

namespace lglab {

inline constexpr int kModelSchemaVersion = 1;

/// Parse or validation failure, located in the source document.
class InputError : public DomainError {
 public:
  InputError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }  ///< 1-based; 0 when no position applies

 private:
  int line_;
};

ModelBundle parse_model(std::string_view text, const std::string& source = "<input>");
ModelBundle load_model_file(const std::filesystem::path& path);

std::string export_model(const ModelBundle& bundle);
void save_model_file(const ModelBundle& bundle, const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Strict decimal parse; nullopt on trailing garbage or non-finite values.
std::optional<double> parse_double(std::string_view text);

}  // namespace lglab
