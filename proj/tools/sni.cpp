#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sni/io.hpp"
#include "sni/pipeline.hpp"

namespace {

struct MethodFlags {
  std::string method = "fm-pcg";
  std::string precond = "mic";
  double tau = 1e-3;
  double alpha = 1e-3;
  double tol = 1e-4;
  double lambda = 1e5;
  std::optional<int> max_iter;
  bool robustify = false;
  std::string auxiliary = "geodesic";
};

void add_method_flags(CLI::App* app, MethodFlags& f) {
  app->add_option("--method", f.method, "fm, cg, pcg, fm-pcg, fft or dct")
      ->check(CLI::IsMember({"fm", "cg", "pcg", "fm-pcg", "fft", "dct"}))
      ->capture_default_str();
  app->add_option("--precond", f.precond, "none, ic or mic")
      ->check(CLI::IsMember({"none", "ic", "mic"}))
      ->capture_default_str();
  app->add_option("--tau", f.tau, "drop tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--alpha", f.alpha, "diagonal shift")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--tol", f.tol, "relative residual")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--lambda", f.lambda, "fast-marching weight")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-iter", f.max_iter, "iteration cap (default 10 sqrt(n) + 1000)");
  app->add_option("--auxiliary", f.auxiliary, "fast-marching auxiliary distance")
      ->check(CLI::IsMember({"geodesic", "euclidean"}))
      ->capture_default_str();
  app->add_flag("--robustify", f.robustify, "down-weight non-integrable gradients");
}

void apply(const MethodFlags& f, sni::RunSpec& spec) {
  spec.method = sni::parse_method(f.method);
  spec.solver.preconditioner = sni::parse_preconditioner(f.precond);
  spec.solver.tau = f.tau;
  spec.solver.alpha = f.alpha;
  spec.solver.tol = f.tol;
  spec.solver.max_iter = f.max_iter;
  spec.fm.lambda = f.lambda;
  spec.fm.auxiliary = f.auxiliary == "geodesic" ? sni::Auxiliary::kGeodesic : sni::Auxiliary::kSquaredEuclidean;
  spec.robustify = f.robustify;
}

void print_summary(const sni::RunSpec& spec, const sni::RunResult& r) {
  std::printf("method=%s pixels=%d", std::string(sni::to_string(spec.method)).c_str(), r.input.domain.size());
  if (r.stats) {
    std::printf(" iterations=%d converged=%d residual=%.3g", r.stats->iterations, r.stats->converged ? 1 : 0,
                r.stats->final_residual);
  }
  if (r.applied_alpha) std::printf(" alpha=%g nnz(L)=%zu", *r.applied_alpha, r.factor_nonzeros);
  if (r.metrics) std::printf(" mse=%.6g ssim=%.6f", r.metrics->mse, r.metrics->ssim);
  const auto& t = r.times;
  std::printf(" t_fm=%.3fs t_assembly=%.3fs t_precond=%.3fs t_solve=%.3fs t_total=%.3fs\n", t.fm, t.assembly,
              t.preconditioner, t.solve, t.total);
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) sizes.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (sizes.empty()) throw CLI::ValidationError("--sizes", "no sizes given");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface normal integration toolkit"};
  app.set_version_flag("--version", sni::version());
  app.require_subcommand(1);

  // generate
  std::string dataset = "sombrero";
  int size = 256;
  double noise_pct = 0, outlier_frac = 0, outlier_magnitude = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string mask;

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset (gradient, truth, mask)");
  gen->add_option("--dataset", dataset)->check(CLI::IsMember(sni::dataset_names()))->capture_default_str();
  gen->add_option("--size", size)->check(CLI::Range(8, 1 << 14))->capture_default_str();
  gen->add_option("--mask", mask, "restrict to this mask (PGM/PNG)")->check(CLI::ExistingFile);
  gen->add_option("--noise-pct", noise_pct)->check(CLI::Range(0.0, 100.0))->capture_default_str();
  gen->add_option("--outlier-frac", outlier_frac)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_flag("--lightings", "also render photometric-stereo images under the default lightings");
  gen->add_option("--out", out, "output directory")->required();

  // integrate
  MethodFlags mf;
  std::string gradient_path, truth_path;
  std::optional<double> error_cap;
  auto* integ = app.add_subcommand("integrate", "reconstruct depth from a gradient field");
  integ->add_option("--dataset", dataset, "synthetic dataset when --gradient is not given")
      ->check(CLI::IsMember(sni::dataset_names()))
      ->capture_default_str();
  integ->add_option("--size", size)->check(CLI::Range(8, 1 << 14))->capture_default_str();
  integ->add_option("--gradient", gradient_path, "Gf gradient file")->check(CLI::ExistingFile);
  integ->add_option("--truth", truth_path, "PFM ground truth")->check(CLI::ExistingFile);
  integ->add_option("--mask", mask, "domain mask (PGM/PNG, > 127 inside)")->check(CLI::ExistingFile);
  integ->add_option("--noise-pct", noise_pct)->check(CLI::Range(0.0, 100.0))->capture_default_str();
  integ->add_option("--outlier-frac", outlier_frac)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  integ->add_option("--outlier-magnitude", outlier_magnitude)->check(CLI::PositiveNumber)->capture_default_str();
  integ->add_option("--seed", seed)->capture_default_str();
  integ->add_option("--error-cap", error_cap, "squared error mapped to red in error.png");
  integ->add_option("--out", out, "output directory");
  add_method_flags(integ, mf);

  // benchmark
  std::string suite = "precond";
  std::string sizes = "64,128,256";
  bool no_times = false;
  auto* bench = app.add_subcommand("benchmark", "run a named suite and write a CSV table");
  bench->add_option("--suite", suite)->check(CLI::IsMember(sni::suite_names()))->capture_default_str();
  bench->add_option("--sizes", sizes, "comma-separated side lengths")->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--tol", mf.tol)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--alpha", mf.alpha)->check(CLI::NonNegativeNumber)->capture_default_str();
  bench->add_option("--lambda", mf.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--no-times", no_times, "omit wall-time columns");
  bench->add_option("--out", out, "CSV path (stdout when omitted)");

  // ps
  std::vector<std::string> images;
  std::string lightings_path;
  std::string synthetic;
  auto* ps = app.add_subcommand("ps", "photometric stereo: normals, integration and reprojection");
  ps->add_option("--images", images, "grayscale images (PGM/PNG)")->check(CLI::ExistingFile);
  ps->add_option("--lightings", lightings_path, "one 'lx ly lz' per line")->check(CLI::ExistingFile);
  ps->add_option("--mask", mask)->check(CLI::ExistingFile);
  ps->add_option("--synthetic", synthetic, "render a synthetic dataset instead of reading images")
      ->check(CLI::IsMember(sni::dataset_names()));
  ps->add_option("--size", size)->check(CLI::Range(8, 1 << 14))->capture_default_str();
  ps->add_option("--noise-pct", noise_pct, "gradient noise before rendering (synthetic only)")
      ->check(CLI::Range(0.0, 100.0));
  ps->add_option("--outlier-frac", outlier_frac, "gradient outliers before rendering (synthetic only)")
      ->check(CLI::Range(0.0, 1.0));
  ps->add_option("--seed", seed)->capture_default_str();
  ps->add_option("--out", out, "output directory");
  add_method_flags(ps, mf);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      sni::RunSpec spec;
      spec.data.name = dataset;
      spec.data.size = size;
      spec.data.mask = mask;
      spec.noise_pct = noise_pct;
      spec.outlier_frac = outlier_frac;
      spec.seed = seed;
      const sni::Dataset d = sni::prepare_input(spec, sni::load_dataset(spec.data));
      const sni::fs::path dir(out);
      sni::fs::create_directories(dir);
      sni::write_gradient(dir / "gradient.gf", d.gradient);
      sni::write_mask(dir / "mask.pgm", d.domain.mask());
      if (d.ground_truth) sni::write_pfm(dir / "truth.pfm", *d.ground_truth);
      if (gen->count("--lightings")) {
        const auto lights = sni::default_lightings();
        const sni::PsProblem problem = sni::synthetic_ps(d, lights);
        sni::write_lightings(dir / "lightings.txt", lights);
        for (std::size_t i = 0; i < problem.images.size(); ++i) {
          sni::Grid<std::uint8_t> img(d.domain.width(), d.domain.height(), 0);
          for (std::size_t k = 0; k < img.size(); ++k) {
            img[k] = static_cast<std::uint8_t>(std::lround(255 * std::clamp(problem.images[i][k], 0.0, 1.0)));
          }
          sni::write_png_gray(dir / ("image" + std::to_string(i) + ".png"), img);
        }
      }
      std::printf("wrote %s (%dx%d, %d pixels)\n", dir.string().c_str(), d.domain.width(), d.domain.height(),
                  d.domain.size());
      return 0;
    }

    if (*integ) {
      sni::RunSpec spec;
      apply(mf, spec);
      spec.data.name = dataset;
      spec.data.size = size;
      spec.data.gradient = gradient_path;
      spec.data.truth = truth_path;
      spec.data.mask = mask;
      spec.noise_pct = noise_pct;
      spec.outlier_frac = outlier_frac;
      spec.outlier_magnitude = outlier_magnitude;
      spec.seed = seed;
      const sni::RunResult r = sni::run(spec);
      print_summary(spec, r);
      if (!out.empty()) sni::write_run_artifacts(out, spec, r, error_cap);
      if (r.stats && !r.stats->converged) return 2;
      return 0;
    }

    if (*bench) {
      auto specs = sni::make_suite(suite, parse_sizes(sizes), seed);
      for (auto& s : specs) {
        s.solver.tol = mf.tol;
        if (s.solver.preconditioner != sni::PreconditionerKind::kNone) s.solver.alpha = mf.alpha;
        s.fm.lambda = mf.lambda;
      }
      const auto rows = sni::benchmark(specs);
      if (out.empty()) {
        sni::write_benchmark_csv(std::cout, rows, !no_times);
      } else {
        std::ofstream os(out);
        if (!os) throw sni::IoError("cannot write '" + out + "'");
        sni::write_benchmark_csv(os, rows, !no_times);
      }
      for (const auto& r : rows) {
        if (!r.error.empty()) return 2;
      }
      return 0;
    }

    if (*ps) {
      sni::RunSpec spec;
      apply(mf, spec);
      sni::PsProblem problem;
      std::optional<sni::Domain> domain;
      if (!synthetic.empty()) {
        spec.data.name = synthetic;
        spec.data.size = size;
        spec.data.mask = mask;
        spec.noise_pct = noise_pct;
        spec.outlier_frac = outlier_frac;
        spec.seed = seed;
        spec.robustify = false;
        const sni::Dataset d = sni::prepare_input(spec, sni::load_dataset(spec.data));
        spec.robustify = mf.robustify;
        problem = sni::synthetic_ps(d, sni::default_lightings());
        domain = d.domain;
      } else {
        if (images.size() < 3 || lightings_path.empty()) {
          throw CLI::ValidationError("ps", "needs --images (at least 3) and --lightings, or --synthetic");
        }
        for (const auto& path : images) problem.images.push_back(sni::read_image(path));
        problem.lightings = sni::read_lightings(lightings_path);
        const auto& first = problem.images.front();
        domain = sni::build_domain(mask.empty() ? sni::DomainMask::full(first.width(), first.height())
                                                : sni::read_mask(mask));
      }
      const sni::PsResult r = sni::run_ps(spec, *domain, problem);
      print_summary(spec, r.integration);
      std::printf("reprojection mean_mse=%.6g mean_ssim=%.6f\n", r.reprojection.mean_mse, r.reprojection.mean_ssim);
      for (std::size_t i = 0; i < r.reprojection.mse.size(); ++i) {
        std::printf("  image %zu: mse=%.6g ssim=%.6f\n", i, r.reprojection.mse[i], r.reprojection.ssim[i]);
      }
      if (!out.empty()) {
        const sni::fs::path dir(out);
        sni::write_run_artifacts(dir, spec, r.integration);
        sni::write_normal_map(dir / "normals.png", *domain, r.normals);
        sni::write_pfm(dir / "albedo.pfm", r.normals.albedo);
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sni: %s\n", e.what());
    return 1;
  }
  return 0;
}
