#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fclt/config.hpp"
#include "fclt/errors.hpp"
#include "fclt/harness.hpp"
#include "fclt/markov.hpp"
#include "fclt/transport.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;
constexpr int kExitMath = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fclt::ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fclt::Error("cannot write " + path.string());
  out << bytes;
}

std::size_t env_threads() {
  const char* v = std::getenv("FUNCTIONAL_CLT_THREADS");
  if (!v || !*v) return 0;
  return static_cast<std::size_t>(std::strtoull(v, nullptr, 10));
}

int cmd_wasserstein(const std::string& file1, const std::string& file2, double ell,
                    bool dump_plan) {
  fclt::DiscreteMeasure m1 = fclt::DiscreteMeasure::from_text(read_file(file1));
  fclt::DiscreteMeasure m2 = fclt::DiscreteMeasure::from_text(read_file(file2));
  if (ell == 0.0) {
    std::printf("%.12g\n", fclt::wasserstein0(m1, m2));
    return kExitOk;
  }
  auto [dist, plan] = fclt::wasserstein(m1, m2, ell);
  std::printf("%.12g\n", dist);
  if (dump_plan) std::fputs(plan.to_text().c_str(), stdout);
  return kExitOk;
}

int cmd_clt_run(const std::string& config_path, const std::string& out_dir,
                long long seed_override, long long threads_override) {
  std::string text = read_file(config_path);
  std::string base_dir = std::filesystem::path(config_path).parent_path().string();
  fclt::ParsedConfig parsed = fclt::parse_config(text, base_dir);
  if (seed_override >= 0)
    parsed.experiment.master_seed = static_cast<std::uint64_t>(seed_override);
  if (threads_override >= 0) {
    parsed.experiment.threads = static_cast<std::size_t>(threads_override);
  } else if (parsed.experiment.threads == 0) {
    parsed.experiment.threads = env_threads();
  }

  auto t0 = std::chrono::steady_clock::now();
  fclt::CltReport report = fclt::run_experiment(parsed.experiment);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / parsed.output.samples, fclt::samples_to_csv(report.samples));
  write_file(dir / parsed.output.report, fclt::report_to_json(report));

  nlohmann::json manifest;
  manifest["config_digest"] = parsed.digest;
  manifest["version"] = kVersion;
  manifest["master_seed"] = parsed.experiment.master_seed;
  manifest["outputs"] = {parsed.output.samples, parsed.output.report};
  manifest["wall_clock_seconds"] = seconds;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

int cmd_poisson(const std::string& model_path, const std::string& observable,
                double tol) {
  std::istringstream in(read_file(model_path));
  fclt::MarkovModel model = fclt::MarkovModel::from_text(in);

  std::vector<double> f;
  if (observable == "coord0") {
    for (const fclt::Point& s : model.states()) f.push_back(s[0]);
  } else if (observable == "norm") {
    for (const fclt::Point& s : model.states()) f.push_back(s.norm());
  } else if (observable == "constant") {
    f.assign(model.state_count(), 1.0);
  } else {
    throw fclt::ParseError("unknown observable id: " + observable);
  }

  fclt::PoissonSolution direct = fclt::solve_poisson_direct(model, f);
  fclt::PoissonSolution neumann = fclt::solve_poisson_neumann(model, f, tol);
  double gap = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    gap = std::max(gap, std::abs(direct.F[i] - neumann.F[i]));

  for (std::size_t i = 0; i < f.size(); ++i)
    std::printf("F[%zu] = %.12g\n", i, direct.F[i]);
  std::printf("residual = %.3g\n", direct.residual);
  std::printf("solver_gap = %.3g\n", gap);
  std::printf("variance = %.12g\n", direct.variance);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical-measure functional CLT laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string file1, file2, config_path, out_dir = ".", model_path;
  std::string observable = "coord0";
  double ell = 2.0, tol = 1e-10;
  long long seed_override = -1, threads_override = -1;
  bool dump_plan = false;

  CLI::App* w = app.add_subcommand("wasserstein", "Exact W_ell between two measure files");
  w->add_option("file1", file1)->required();
  w->add_option("file2", file2)->required();
  w->add_option("--ell", ell, "moment order (0 uses the 1^|x-y| cost)");
  w->add_flag("--plan", dump_plan, "dump the optimal plan");

  CLI::App* r = app.add_subcommand("clt-run", "Run a config-driven CLT experiment");
  r->add_option("--config", config_path)->required();
  r->add_option("--out", out_dir);
  r->add_option("--seed", seed_override, "overrides the config master_seed");
  r->add_option("--threads", threads_override, "0 = auto");

  CLI::App* p = app.add_subcommand("poisson", "Solve F - PF = f - mu(f) for a model file");
  p->add_option("model", model_path)->required();
  p->add_option("--observable", observable, "coord0 | norm | constant");
  p->add_option("--tol", tol, "Neumann series stopping tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (w->parsed()) return cmd_wasserstein(file1, file2, ell, dump_plan);
    if (r->parsed()) return cmd_clt_run(config_path, out_dir, seed_override, threads_override);
    if (p->parsed()) return cmd_poisson(model_path, observable, tol);
  } catch (const fclt::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const fclt::ExactSolverLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  } catch (const fclt::CostLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  } catch (const fclt::NotErgodicError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMath;
  } catch (const fclt::DegenerateError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMath;
  } catch (const fclt::ConvergenceFailureError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMath;
  } catch (const fclt::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
