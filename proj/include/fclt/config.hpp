#pragma once

#include <string>

#include "fclt/harness.hpp"

namespace fclt {

/// Output file names from the config's `output` section (defaults
/// samples.csv / report.json).
struct OutputSpec {
  std::string samples = "samples.csv";
  std::string report = "report.json";
};

struct ParsedConfig {
  ExperimentConfig experiment;
  OutputSpec output;
  std::string canonical;  // sorted keys, no insignificant whitespace
  std::string digest;     // FNV-1a 64 of the canonical bytes, hex
};

/// Parses the JSON experiment config (sections family / functional /
/// run / output). Measures may be inline atom lists or file paths in
/// the measures text format; paths resolve relative to `base_dir`.
/// Throws ParseError on schema violations.
ParsedConfig parse_config(const std::string& text, const std::string& base_dir);

/// FNV-1a 64-bit hex digest of a byte string.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fclt
