#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sni/fast_marching.hpp"
#include "sni/krylov.hpp"
#include "sni/metrics.hpp"
#include "sni/photometric.hpp"
#include "sni/synthetic.hpp"

namespace sni {

enum class Method { kFm, kCg, kPcg, kFmPcg, kFft, kDct };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

// A named generator (sombrero, peaks, vase, phantom, blob, zero) or files on
// disk. `mask` restricts either source to a sub-domain.
struct DataSpec {
  std::string name = "sombrero";
  int size = 256;
  std::filesystem::path gradient;
  std::filesystem::path truth;
  std::filesystem::path mask;
};

Dataset load_dataset(const DataSpec& spec);
std::vector<std::string> dataset_names();

struct RunSpec {
  DataSpec data;
  Method method = Method::kFmPcg;
  // cg ignores the preconditioner; pcg and fm-pcg use it (none is allowed).
  SolverConfig solver{1e-4, std::nullopt, PreconditionerKind::kMic};
  FmConfig fm;
  double noise_pct = 0;
  double outlier_frac = 0;
  double outlier_magnitude = 10;
  bool robustify = false;
  std::uint64_t seed = 1;
};

struct StageTimes {
  double data = 0;            // generation or loading, corruption, robustification
  double fm = 0;
  double assembly = 0;
  double preconditioner = 0;
  double solve = 0;
  double evaluation = 0;
  double total = 0;
};

struct RunResult {
  Dataset input;  // after noise / outliers / robustification
  DepthMap depth;  // NaN outside the domain
  std::optional<Metrics> metrics;  // when ground truth is known
  std::optional<SolveStats> stats;
  std::optional<double> applied_alpha;
  std::size_t factor_nonzeros = 0;
  StageTimes times;
};

// Applies the corruption settings of `spec` to `clean`.
Dataset prepare_input(const RunSpec& spec, const Dataset& clean);

// Integrates g over the domain with the chosen method; fills depth, stats and
// the stage times from fm onwards.
RunResult integrate(const RunSpec& spec, const Domain& domain, const GradientField& g);

RunResult run(const RunSpec& spec);
RunResult run(const RunSpec& spec, const Dataset& clean);

struct BenchmarkRow {
  std::string dataset;
  int size = 0;
  std::string method;
  std::string preconditioner;
  double tau = 0;
  double alpha = 0;
  double noise_pct = 0;
  double outlier_frac = 0;
  bool robustify = false;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0;
  double mse = 0;
  double ssim = 0;
  StageTimes times;
  std::string error;
};

// Named suites: "precond" (Phantom, preconditioner sweep, cold and FM
// warm starts), "datasets" (all methods on the analytic surfaces), "noise"
// (Sombrero noise sweep), "outliers" (plain vs robustified).
std::vector<RunSpec> make_suite(std::string_view name, const std::vector<int>& sizes,
                                std::uint64_t seed);
std::vector<std::string> suite_names();

BenchmarkRow benchmark_one(const RunSpec& spec);
std::vector<BenchmarkRow> benchmark(const std::vector<RunSpec>& suite);

// Wall-time columns are omitted when include_times is false; the remaining
// output is a deterministic function of the specs.
void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows, bool include_times);

std::string manifest_json(const RunSpec& spec, const RunResult& result);

// depth.pfm, manifest.json and, with ground truth, error.png (cap = error_cap
// or the largest error when not given).
void write_run_artifacts(const std::filesystem::path& dir, const RunSpec& spec, const RunResult& result,
                         std::optional<double> error_cap = std::nullopt);

// Photometric stereo front end.
std::vector<Vec3> default_lightings();
PsProblem synthetic_ps(const Dataset& data, const std::vector<Vec3>& lightings);

struct PsResult {
  NormalField normals;
  RunResult integration;
  Reprojection reprojection;
};

PsResult run_ps(const RunSpec& spec, const Domain& domain, const PsProblem& problem);

std::string version();

}  // namespace sni
