#include "sni/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sni/io.hpp"
#include "sni/poisson.hpp"
#include "sni/spectral.hpp"

namespace sni {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Dataset zero_dataset(int n) {
  Domain domain(DomainMask::full(n, n));
  Dataset d{"zero", domain, GradientField(n, n), DepthMap(n, n, 0.0)};
  return d;
}

Dataset generate(const std::string& name, int n) {
  if (name == "sombrero") return gen_sombrero(n);
  if (name == "peaks") return gen_peaks(n);
  if (name == "vase") return gen_vase(n);
  if (name == "phantom") return gen_phantom(n);
  if (name == "blob") {
    Dataset d = restrict_to_mask(gen_peaks(n), blob_mask(n, n));
    d.name = "blob";
    return d;
  }
  if (name == "zero") return zero_dataset(n);
  throw std::invalid_argument("unknown dataset '" + name + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string version() { return "0.3.0"; }

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kFm: return "fm";
    case Method::kCg: return "cg";
    case Method::kPcg: return "pcg";
    case Method::kFmPcg: return "fm-pcg";
    case Method::kFft: return "fft";
    case Method::kDct: return "dct";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kFm, Method::kCg, Method::kPcg, Method::kFmPcg, Method::kFft, Method::kDct}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::vector<std::string> dataset_names() { return {"sombrero", "peaks", "vase", "phantom", "blob", "zero"}; }

Dataset load_dataset(const DataSpec& spec) {
  Dataset d;
  if (!spec.gradient.empty()) {
    d.name = spec.gradient.stem().string();
    d.gradient = read_gradient(spec.gradient);
    const DomainMask mask = spec.mask.empty() ? DomainMask::full(d.gradient.width(), d.gradient.height())
                                              : read_mask(spec.mask);
    if (mask.width() != d.gradient.width() || mask.height() != d.gradient.height()) {
      throw std::invalid_argument("mask and gradient sizes differ");
    }
    d.domain = build_domain(mask);
    if (!spec.truth.empty()) {
      DepthMap truth = read_pfm(spec.truth);
      if (!truth.same_shape(d.gradient.p)) throw std::invalid_argument("truth and gradient sizes differ");
      d.ground_truth = std::move(truth);
    }
    return d;
  }
  d = generate(spec.name, spec.size);
  if (!spec.mask.empty()) {
    const std::string name = d.name;
    d = restrict_to_mask(d, read_mask(spec.mask));
    d.name = name;
  }
  return d;
}

Dataset prepare_input(const RunSpec& spec, const Dataset& clean) {
  Dataset d = clean;
  if (spec.noise_pct > 0) d.gradient = add_noise(d.gradient, d.domain, spec.noise_pct, spec.seed);
  if (spec.outlier_frac > 0) {
    d.gradient = inject_outliers(d.gradient, d.domain, spec.outlier_frac, spec.outlier_magnitude, spec.seed + 1);
  }
  if (spec.robustify) d.gradient = robustify_gradient(d.domain, d.gradient).gradient;
  return d;
}

RunResult integrate(const RunSpec& spec, const Domain& domain, const GradientField& g) {
  RunResult out;
  const Method m = spec.method;

  if (m == Method::kFft || m == Method::kDct) {
    auto t = Clock::now();
    const RectGradient rg = embed_masked(domain, g);
    DepthMap full = m == Method::kFft ? integrate_fft(rg) : integrate_dct(rg);
    out.depth = scatter(domain, gather(domain, full));
    out.times.solve = seconds_since(t);
    return out;
  }

  std::vector<double> x0;
  if (m == Method::kFm || m == Method::kFmPcg) {
    auto t = Clock::now();
    out.depth = integrate_fm(g, domain, spec.fm);
    out.times.fm = seconds_since(t);
    if (m == Method::kFm) return out;
    x0 = gather(domain, out.depth);
  }

  auto t = Clock::now();
  const SparseSystem system = compatibilize(assemble(domain, g));
  out.times.assembly = seconds_since(t);

  SolverConfig cfg = spec.solver;
  if (m == Method::kCg) cfg.preconditioner = PreconditionerKind::kNone;
  t = Clock::now();
  const std::optional<CholeskyFactor> factor = build_preconditioner(system.A, cfg);
  out.times.preconditioner = seconds_since(t);
  if (factor) {
    out.applied_alpha = factor->applied_alpha;
    out.factor_nonzeros = factor->fill_count();
  }

  t = Clock::now();
  SolveResult res = cg_solve(system, x0, factor ? &*factor : nullptr, cfg);
  out.times.solve = seconds_since(t);
  out.depth = scatter(domain, res.x);
  out.stats = std::move(res.stats);
  return out;
}

RunResult run(const RunSpec& spec, const Dataset& clean) {
  const auto start = Clock::now();
  auto t = Clock::now();
  Dataset input = prepare_input(spec, clean);
  const double data_time = seconds_since(t);

  RunResult out = integrate(spec, input.domain, input.gradient);
  out.times.data = data_time;
  if (input.ground_truth) {
    t = Clock::now();
    out.metrics = mse_opt(out.depth, *input.ground_truth, input.domain);
    out.times.evaluation = seconds_since(t);
  }
  out.input = std::move(input);
  out.times.total = seconds_since(start);
  return out;
}

RunResult run(const RunSpec& spec) {
  const auto start = Clock::now();
  const Dataset clean = load_dataset(spec.data);
  const double load = seconds_since(start);
  RunResult out = run(spec, clean);
  out.times.data += load;
  out.times.total += load;
  return out;
}

std::vector<std::string> suite_names() { return {"precond", "datasets", "noise", "outliers"}; }

std::vector<RunSpec> make_suite(std::string_view name, const std::vector<int>& sizes, std::uint64_t seed) {
  std::vector<RunSpec> suite;
  auto base = [&](const std::string& data, int n, Method m) {
    RunSpec s;
    s.data.name = data;
    s.data.size = n;
    s.method = m;
    s.seed = seed;
    return s;
  };
  if (name == "precond") {
    for (int n : sizes) {
      for (Method m : {Method::kPcg, Method::kFmPcg}) {
        RunSpec none = base("phantom", n, m);
        none.solver.preconditioner = PreconditionerKind::kNone;
        suite.push_back(none);
        for (double tau : {0.0, 1e-1, 1e-2, 1e-3, 1e-4}) {
          RunSpec s = base("phantom", n, m);
          s.solver.preconditioner = PreconditionerKind::kMic;
          s.solver.tau = tau;
          suite.push_back(s);
        }
      }
    }
  } else if (name == "datasets") {
    for (int n : sizes) {
      for (const char* data : {"sombrero", "peaks", "vase"}) {
        for (Method m : {Method::kFft, Method::kDct, Method::kFm, Method::kCg, Method::kFmPcg}) {
          suite.push_back(base(data, n, m));
        }
      }
    }
  } else if (name == "noise") {
    for (int n : sizes) {
      for (double pct : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        for (Method m : {Method::kFm, Method::kCg, Method::kFmPcg}) {
          RunSpec s = base("sombrero", n, m);
          s.noise_pct = pct;
          suite.push_back(s);
        }
      }
    }
  } else if (name == "outliers") {
    for (int n : sizes) {
      for (bool robust : {false, true}) {
        for (Method m : {Method::kFm, Method::kDct, Method::kFmPcg}) {
          RunSpec s = base("sombrero", n, m);
          s.outlier_frac = 0.01;
          s.robustify = robust;
          suite.push_back(s);
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  }
  return suite;
}

BenchmarkRow benchmark_one(const RunSpec& spec) {
  BenchmarkRow row;
  row.dataset = spec.data.gradient.empty() ? spec.data.name : spec.data.gradient.string();
  row.size = spec.data.size;
  row.method = to_string(spec.method);
  const bool solves = spec.method == Method::kPcg || spec.method == Method::kFmPcg;
  row.preconditioner = solves ? to_string(spec.solver.preconditioner) : "none";
  row.tau = spec.solver.tau;
  row.alpha = spec.solver.alpha;
  row.noise_pct = spec.noise_pct;
  row.outlier_frac = spec.outlier_frac;
  row.robustify = spec.robustify;
  row.seed = spec.seed;
  try {
    const RunResult r = run(spec);
    if (r.stats) {
      row.iterations = r.stats->iterations;
      row.converged = r.stats->converged;
      row.final_residual = r.stats->final_residual;
    }
    if (r.applied_alpha) row.alpha = *r.applied_alpha;
    if (r.metrics) {
      row.mse = r.metrics->mse;
      row.ssim = r.metrics->ssim;
    }
    row.times = r.times;
  } catch (const std::exception& e) {
    row.error = e.what();
    std::replace(row.error.begin(), row.error.end(), ',', ';');
    std::replace(row.error.begin(), row.error.end(), '\n', ' ');
  }
  return row;
}

std::vector<BenchmarkRow> benchmark(const std::vector<RunSpec>& suite) {
  if (suite.empty()) throw std::invalid_argument("benchmark suite is empty");
  std::vector<BenchmarkRow> rows;
  rows.reserve(suite.size());
  for (const RunSpec& s : suite) rows.push_back(benchmark_one(s));
  return rows;
}

void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows, bool include_times) {
  os << "dataset,size,method,preconditioner,tau,alpha,noise_pct,outlier_frac,robustify,seed,"
        "iterations,converged,final_residual,mse,ssim";
  if (include_times) os << ",t_data,t_fm,t_assembly,t_preconditioner,t_solve,t_evaluation,t_total";
  os << ",error\n";
  for (const BenchmarkRow& r : rows) {
    os << r.dataset << ',' << r.size << ',' << r.method << ',' << r.preconditioner << ','
       << format_double(r.tau) << ',' << format_double(r.alpha) << ',' << format_double(r.noise_pct) << ','
       << format_double(r.outlier_frac) << ',' << (r.robustify ? 1 : 0) << ',' << r.seed << ','
       << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.final_residual) << ','
       << format_double(r.mse) << ',' << format_double(r.ssim);
    if (include_times) {
      const StageTimes& t = r.times;
      for (double v : {t.data, t.fm, t.assembly, t.preconditioner, t.solve, t.evaluation, t.total}) {
        os << ',' << format_double(v);
      }
    }
    os << ',' << r.error << '\n';
  }
}

std::string manifest_json(const RunSpec& spec, const RunResult& result) {
  nlohmann::json j;
  j["version"] = version();
  j["spec"] = {
      {"dataset", spec.data.name},
      {"size", spec.data.size},
      {"gradient", spec.data.gradient.string()},
      {"truth", spec.data.truth.string()},
      {"mask", spec.data.mask.string()},
      {"method", to_string(spec.method)},
      {"precond", to_string(spec.solver.preconditioner)},
      {"tau", spec.solver.tau},
      {"alpha", spec.solver.alpha},
      {"tol", spec.solver.tol},
      {"lambda", spec.fm.lambda},
      {"noise_pct", spec.noise_pct},
      {"outlier_frac", spec.outlier_frac},
      {"outlier_magnitude", spec.outlier_magnitude},
      {"robustify", spec.robustify},
      {"seed", spec.seed},
  };
  j["domain"] = {{"width", result.input.domain.width()},
                 {"height", result.input.domain.height()},
                 {"pixels", result.input.domain.size()}};
  if (result.stats) {
    j["solver"] = {{"iterations", result.stats->iterations},
                   {"converged", result.stats->converged},
                   {"restarted", result.stats->restarted},
                   {"final_residual", result.stats->final_residual}};
  }
  if (result.applied_alpha) j["preconditioner"] = {{"applied_alpha", *result.applied_alpha},
                                                   {"nonzeros", result.factor_nonzeros}};
  if (result.metrics) {
    j["metrics"] = {{"mse", result.metrics->mse},
                    {"ssim", result.metrics->ssim},
                    {"offset", result.metrics->offset_used}};
  }
  const StageTimes& t = result.times;
  j["times"] = {{"data", t.data},         {"fm", t.fm},     {"assembly", t.assembly},
                {"preconditioner", t.preconditioner}, {"solve", t.solve}, {"evaluation", t.evaluation},
                {"total", t.total}};
  return j.dump(2);
}

void write_run_artifacts(const std::filesystem::path& dir, const RunSpec& spec, const RunResult& result,
                         std::optional<double> error_cap) {
  std::filesystem::create_directories(dir);
  write_pfm(dir / "depth.pfm", result.depth);
  if (result.metrics && result.input.ground_truth) {
    const Domain& domain = result.input.domain;
    ScalarField err(domain.width(), domain.height(), kOutside);
    double worst = 0;
    for (int k = 0; k < domain.size(); ++k) {
      const Pixel px = domain.pixel_of(k);
      const double d = result.depth(px.x, px.y) + result.metrics->offset_used - (*result.input.ground_truth)(px.x, px.y);
      err(px.x, px.y) = d * d;
      worst = std::max(worst, d * d);
    }
    write_error_map(dir / "error.png", err, domain.mask(), error_cap.value_or(worst > 0 ? worst : 1.0));
  }
  std::ofstream(dir / "manifest.json") << manifest_json(spec, result) << '\n';
}

std::vector<Vec3> default_lightings() {
  std::vector<Vec3> out;
  for (Vec3 l : {Vec3{0, 0, 1}, Vec3{0.5, 0, 1}, Vec3{0, 0.5, 1}, Vec3{-0.4, -0.4, 1}}) {
    const double n = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
    out.push_back({l[0] / n, l[1] / n, l[2] / n});
  }
  return out;
}

PsProblem synthetic_ps(const Dataset& data, const std::vector<Vec3>& lightings) {
  const NormalField nf = gradient_to_normals(data.domain, data.gradient);
  return {render_lambertian(data.domain, nf, lightings), lightings};
}

PsResult run_ps(const RunSpec& spec, const Domain& domain, const PsProblem& problem) {
  const auto start = Clock::now();
  PsResult out;
  out.normals = estimate_normals(domain, problem);
  GradientField g = normals_to_gradient(domain, out.normals);
  if (spec.robustify) g = robustify_gradient(domain, g).gradient;
  const double data_time = seconds_since(start);

  out.integration = integrate(spec, domain, g);
  out.integration.times.data = data_time;
  auto t = Clock::now();
  out.reprojection = reproject(domain, out.integration.depth, out.normals.albedo, problem.lightings, problem.images);
  out.integration.times.evaluation = seconds_since(t);
  out.integration.input.domain = domain;
  out.integration.input.gradient = std::move(g);
  out.integration.input.name = "ps";
  out.integration.times.total = seconds_since(start);
  return out;
}

}  // namespace sni
