#include "fclt/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "fclt/errors.hpp"
#include "fclt/markov.hpp"

namespace fclt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError("config: " + msg); }

const json& require(const json& j, const char* key, const char* section) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string(section) + " is missing \"" + key + "\"");
  return *it;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty()) fail("empty file path");
  if (path.front() == '/' || base_dir.empty()) return path;
  return base_dir + "/" + path;
}

std::vector<Atom> parse_atoms(const json& j, std::size_t dim) {
  if (!j.is_array()) fail("\"atoms\" must be an array");
  std::vector<Atom> atoms;
  for (const json& row : j) {
    if (!row.is_array() || row.size() != dim + 1)
      fail("each atom must be [weight, x1..xd]");
    std::vector<double> coords;
    for (std::size_t c = 1; c < row.size(); ++c)
      coords.push_back(row[c].get<double>());
    atoms.push_back({Point(std::move(coords)), row[0].get<double>()});
  }
  return atoms;
}

DiscreteMeasure parse_measure(const json& j, const std::string& base_dir) {
  if (j.is_string())
    return DiscreteMeasure::from_text(read_file(resolve(j.get<std::string>(), base_dir)));
  if (!j.is_object()) fail("a measure must be a path string or an object");
  if (j.contains("path"))
    return DiscreteMeasure::from_text(
        read_file(resolve(j["path"].get<std::string>(), base_dir)));
  std::size_t dim = require(j, "dim", "measure").get<std::size_t>();
  return DiscreteMeasure::consolidate(dim, parse_atoms(require(j, "atoms", "measure"), dim));
}

SignedDiscreteMeasure parse_signed(const json& j) {
  if (!j.is_object()) fail("a signed measure must be an object");
  std::size_t dim = require(j, "dim", "signed measure").get<std::size_t>();
  return SignedDiscreteMeasure::consolidate(
      dim, parse_atoms(require(j, "atoms", "signed measure"), dim));
}

std::shared_ptr<const MarkovModel> parse_model(const json& j,
                                               const std::string& base_dir) {
  if (j.is_string()) {
    std::istringstream in(read_file(resolve(j.get<std::string>(), base_dir)));
    return std::make_shared<const MarkovModel>(MarkovModel::from_text(in));
  }
  if (!j.is_object()) fail("\"model\" must be a path string or an object");
  if (j.contains("path")) {
    std::istringstream in(read_file(resolve(j["path"].get<std::string>(), base_dir)));
    return std::make_shared<const MarkovModel>(MarkovModel::from_text(in));
  }
  std::vector<Point> states;
  for (const json& row : require(j, "states", "model")) {
    std::vector<double> coords;
    if (row.is_number()) {
      coords.push_back(row.get<double>());
    } else {
      for (const json& c : row) coords.push_back(c.get<double>());
    }
    states.emplace_back(std::move(coords));
  }
  std::vector<std::vector<double>> kernel;
  for (const json& row : require(j, "kernel", "model"))
    kernel.push_back(row.get<std::vector<double>>());
  return std::make_shared<const MarkovModel>(
      MarkovModel::create(std::move(states), std::move(kernel)));
}

SequenceFamily parse_family(const json& j, double ell, const std::string& base_dir) {
  std::string kind = require(j, "kind", "family").get<std::string>();
  if (kind == "iid") return SequenceFamily::iid(parse_measure(require(j, "mu", "family"), base_dir), ell);
  if (kind == "cyclic") {
    std::vector<DiscreteMeasure> thetas;
    for (const json& t : require(j, "thetas", "family"))
      thetas.push_back(parse_measure(t, base_dir));
    return SequenceFamily::cyclic(std::move(thetas), ell);
  }
  if (kind == "decaying")
    return SequenceFamily::decaying(parse_measure(require(j, "mu", "family"), base_dir),
                                    parse_signed(require(j, "tau", "family")),
                                    require(j, "alpha", "family").get<double>(),
                                    require(j, "c", "family").get<double>(), ell);
  if (kind == "sqrt_perturbed")
    return SequenceFamily::sqrt_perturbed(
        parse_measure(require(j, "mu", "family"), base_dir),
        parse_signed(require(j, "tau", "family")), ell);
  if (kind == "markov") {
    auto model = parse_model(require(j, "model", "family"), base_dir);
    std::vector<double> nu1;
    if (j.contains("nu1")) {
      nu1 = j["nu1"].get<std::vector<double>>();
    } else {
      nu1 = model->invariant_weights();
    }
    return SequenceFamily::markov(std::move(model), std::move(nu1), ell);
  }
  if (kind == "ar1")
    return SequenceFamily::ar1(require(j, "a", "family").get<double>(),
                               require(j, "noise_sd", "family").get<double>(), ell);
  fail("unknown family kind: " + kind);
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ParsedConfig parse_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  const json& run = require(j, "run", "config");
  const double ell = run.value("ell", 2.0);
  ExperimentConfig cfg{
      parse_family(require(j, "family", "config"), ell, base_dir),
      require(require(j, "functional", "config"), "id", "functional").get<std::string>(),
      require(run, "N", "run").get<std::size_t>(),
      require(run, "M", "run").get<std::size_t>(),
      require(run, "master_seed", "run").get<std::uint64_t>(),
      ell,
      run.value("threads", std::size_t{0}),
      run.value("decomposition_trace", false),
      run.contains("N_grid") ? run["N_grid"].get<std::vector<std::size_t>>()
                             : std::vector<std::size_t>{}};
  cfg.validate();

  OutputSpec output;
  if (j.contains("output")) {
    const json& section = j["output"];
    output.samples = section.value("samples", output.samples);
    output.report = section.value("report", output.report);
  }

  std::string canonical = j.dump();  // nlohmann objects iterate in sorted key order
  std::string digest = fnv1a_hex(canonical);
  return ParsedConfig{std::move(cfg), std::move(output), std::move(canonical),
                      std::move(digest)};
}

}  // namespace fclt
