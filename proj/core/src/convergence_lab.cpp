#include "varistore/convergence_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "varistore/error.hpp"
#include "varistore/noise.hpp"

namespace varistore {

std::string_view to_string(TestImageKind kind) {
  switch (kind) {
    case TestImageKind::Step: return "step";
    case TestImageKind::Ramp: return "ramp";
    case TestImageKind::SmoothBump: return "bump";
  }
  return "unknown";
}

TestImageKind parse_test_image_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "step") return TestImageKind::Step;
  if (s == "ramp") return TestImageKind::Ramp;
  if (s == "bump" || s == "smoothbump" || s == "smooth_bump") {
    return TestImageKind::SmoothBump;
  }
  throw InvalidArgument("unknown test image '" + std::string(name) + "'");
}

ContinuousField test_image_function(TestImageKind kind) {
  switch (kind) {
    case TestImageKind::Step:
      return [](double x, double) { return x < 0.5 ? 0.25 : 0.75; };
    case TestImageKind::Ramp:
      return [](double x, double) { return x; };
    case TestImageKind::SmoothBump:
      return [](double x, double y) {
        const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
        return 0.2 + 0.6 * std::exp(-r2 / (2.0 * 0.15 * 0.15));
      };
  }
  throw InvalidArgument("unknown test image");
}

ImageGrid synthesize_test_image(TestImageKind kind, std::size_t N) {
  if (N < 8) throw InvalidArgument("synthesize_test_image: N must be >= 8");
  return sample_cell_average(test_image_function(kind), N);
}

ImageGrid cell_average_down(const ImageGrid& fine, std::size_t N) {
  if (N == 0 || fine.width() % N != 0 || fine.height() % N != 0) {
    throw InvalidArgument("cell_average_down: size must divide the fine grid");
  }
  const std::size_t fx = fine.width() / N;
  const std::size_t fy = fine.height() / N;
  ImageGrid out(N, N, fine.spacing() * static_cast<double>(fx));
  const double inv = 1.0 / static_cast<double>(fx * fy);
  for (std::size_t y = 0; y < fine.height(); ++y) {
    for (std::size_t x = 0; x < fine.width(); ++x) {
      out(x / fx, y / fy) += fine(x, y) * inv;
    }
  }
  return out;
}

double fit_log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("fit_log_log_slope: need two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidArgument("fit_log_log_slope: samples must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("fit_log_log_slope: degenerate x");
  return (n * sxy - sx * sy) / denom;
}

namespace {

SolveReport solve_level(const ImageGrid& u0_fine, std::size_t N,
                        const RegularizerSpec& spec, SolverConfig cfg,
                        double penalty_ratio) {
  ImageGrid u0 = cell_average_down(u0_fine, N);
  u0.set_spacing(1.0 / static_cast<double>(N));
  if (penalty_ratio > 0.0) {
    const double mu = cfg.mu.value_or(cfg.lambda_policy.value);
    cfg.mu = mu;
    cfg.lambda_policy = LambdaPolicy::fixed(penalty_ratio * mu * u0.spacing() *
                                            u0.spacing());
  }
  const ImageGrid W(N, N, u0.spacing(), 1.0);
  SolveOptions opts;
  opts.form = ObjectiveForm::Symmetric;
  return split_bregman(u0, W, cfg, spec, opts);
}

}  // namespace

RefinementStudy refinement_study(TestImageKind kind, double noise_sigma_255,
                                 std::uint64_t seed,
                                 std::span<const std::size_t> levels,
                                 const RegularizerSpec& spec,
                                 const SolverConfig& cfg,
                                 const RefinementOptions& options) {
  if (levels.size() < 2) {
    throw InvalidArgument("refinement_study: need at least two levels");
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) {
      throw InvalidArgument("refinement_study: levels must increase");
    }
  }
  if (options.reference_factor < 1) {
    throw InvalidArgument("refinement_study: reference factor must be >= 1");
  }
  if (cfg.lambda_policy.is_adaptive()) {
    throw InvalidArgument("refinement_study: requires a fixed lambda");
  }
  const std::size_t n_ref = levels.back() * options.reference_factor;
  for (std::size_t N : levels) {
    if (n_ref % N != 0) {
      throw InvalidArgument("refinement_study: levels must divide the reference size");
    }
  }

  // One noise realisation on the reference lattice, shared by every level.
  const ImageGrid clean = synthesize_test_image(kind, n_ref);
  ImageGrid u0_fine = add_noise(clean, NoiseModel{noise_sigma_255, 0.0, seed});
  u0_fine.set_spacing(1.0 / static_cast<double>(n_ref));

  RegularizerSpec level_spec = spec;
  if (level_spec.auto_k) {
    level_spec.k = mad_threshold(u0_fine);
    level_spec.auto_k = false;
  }

  SolverConfig ref_cfg = cfg;
  ref_cfg.gap_tol = options.reference_gap_tol;
  ref_cfg.max_iters = std::max(cfg.max_iters, options.reference_max_iters);

  // Index 0 is the reference; 1.. are the study levels.
  std::vector<SolveReport> reports(levels.size() + 1);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < reports.size(); j = next++) {
      try {
        reports[j] =
            j == 0 ? solve_level(u0_fine, n_ref, level_spec, ref_cfg, options.penalty_ratio)
                   : solve_level(u0_fine, levels[j - 1], level_spec, cfg,
                                 options.penalty_ratio);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const PiecewiseLinearInterpolant reference = interpolate(reports[0].restored);
  RefinementStudy study;
  study.reference_N = n_ref;
  study.k = level_spec.k;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const SolveReport& r = reports[i + 1];
    study.levels.push_back({1.0 / static_cast<double>(levels[i]), levels[i]});
    study.errors_l2.push_back(l2_distance(interpolate(r.restored), reference));
    study.energies.push_back(r.energy_trace.back().total);
    study.iterations.push_back(r.iterations);
  }
  for (std::size_t i = 1; i < study.errors_l2.size(); ++i) {
    if (!(study.errors_l2[i] < study.errors_l2[i - 1])) {
      study.errors_monotone = false;
    }
  }
  std::vector<double> hs;
  for (const auto& l : study.levels) hs.push_back(l.h);
  study.fitted_rate = fit_log_log_slope(hs, study.errors_l2);
  return study;
}

void write_study_csv(std::ostream& out, const RefinementStudy& study) {
  out << "h,N,error_l2,energy\n";
  out.precision(17);
  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    out << study.levels[i].h << ',' << study.levels[i].N << ','
        << study.errors_l2[i] << ',' << study.energies[i] << '\n';
  }
  out << "fitted_rate," << study.fitted_rate << '\n';
}

}  // namespace varistore
