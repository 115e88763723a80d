#include "varistore/commands.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "varistore/error.hpp"
#include "varistore/metrics.hpp"

namespace varistore {

namespace {

bool is_dual_solver(SolverKind k) {
  return k == SolverKind::PDHG || k == SolverKind::ProjGrad ||
         k == SolverKind::FGP;
}

ImageGrid ones_like(const ImageGrid& u) {
  return ImageGrid(u.width(), u.height(), u.spacing(), 1.0);
}

ImageGrid weight_for(const RunConfig& c, const ImageGrid& u0) {
  return c.edge_weight ? edge_indicator(u0, c.edge) : ones_like(u0);
}

// Stacks the channels vertically so that one PSNR covers all of them.
ImageGrid stacked(const Image& img) {
  if (img.channels.size() == 1) return img.channels[0];
  const std::size_t w = img.width(), h = img.height();
  ImageGrid out(w, h * img.channels.size(), img.channels[0].spacing());
  for (std::size_t c = 0; c < img.channels.size(); ++c) {
    for (std::size_t i = 0; i < w * h; ++i) out[c * w * h + i] = img.channels[c][i];
  }
  return out;
}

std::optional<Image> reference_for(const RunConfig& c, const Image& clean,
                                   const Image& input) {
  if (!c.reference_path.empty()) {
    Image ref = read_image(c.reference_path);
    if (ref.channels.size() != input.channels.size()) {
      throw InvalidArgument("reference and input differ in channel count");
    }
    for (std::size_t i = 0; i < ref.channels.size(); ++i) {
      require_same_shape(ref.channels[i], input.channels[i], "reference");
      ref.channels[i].set_spacing(c.spacing);
    }
    return ref;
  }
  if (c.synthetic) return clean;
  return std::nullopt;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(12);
  return out;
}

void write_trace_rows(std::ostream& out, const SolveReport& r,
                      const std::string& prefix) {
  for (int i = 0; i < r.iterations; ++i) {
    const auto& e = r.energy_trace[static_cast<std::size_t>(i)];
    out << prefix << i + 1 << ',' << e.regularization_term << ','
        << e.fidelity_term << ',' << e.total << ','
        << r.gap_trace[static_cast<std::size_t>(i)] << ','
        << r.me_trace[static_cast<std::size_t>(i)] << '\n';
  }
}

const char* termination_name(Termination t) {
  return t == Termination::GapTol ? "gap tolerance" : "iteration cap";
}

}  // namespace

int first_iteration_within(const std::vector<double>& trace, double tol) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] <= tol) return static_cast<int>(i) + 1;
  }
  return -1;
}

unsigned threads_from_env() {
  const char* env = std::getenv("VARISTORE_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  unsigned n = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
    throw InvalidArgument("VARISTORE_THREADS must be a positive integer");
  }
  return n;
}

CompareResult compare_solvers(const ImageGrid& u0, const ImageGrid& W,
                              double lambda, int max_iters,
                              const ImageGrid* reference, unsigned threads) {
  CompareResult result;
  result.reports.resize(kCompareSolvers.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < kCompareSolvers.size(); j = next++) {
      try {
        SolverConfig cfg;
        cfg.solver = kCompareSolvers[j];
        cfg.lambda_policy = LambdaPolicy::fixed(lambda);
        cfg.gap_tol = kCompareTolerances.back();
        cfg.max_iters = max_iters;
        SolveOptions opts;
        opts.form = ObjectiveForm::ForwardOnly;
        opts.reference = reference;
        result.reports[j] = solve(u0, W, cfg, RegularizerSpec::tv(), opts);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, kCompareSolvers.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t j = 0; j < kCompareSolvers.size(); ++j) {
    const SolveReport& r = result.reports[j];
    CompareRow row;
    row.solver = kCompareSolvers[j];
    for (std::size_t t = 0; t < kCompareTolerances.size(); ++t) {
      row.iterations_to_tol[t] = first_iteration_within(r.gap_trace, kCompareTolerances[t]);
    }
    row.iterations = r.iterations;
    row.final_gap = r.gap_trace.back();
    row.psnr_db = reference ? psnr(r.restored, *reference)
                            : std::numeric_limits<double>::quiet_NaN();
    row.mean_error = reference ? mean_error(r.restored, *reference)
                               : std::numeric_limits<double>::quiet_NaN();
    result.rows.push_back(row);
  }
  return result;
}

Image load_input(const RunConfig& c, Image* clean) {
  Image img;
  if (c.synthetic) {
    img.channels = {synthesize_test_image(*c.synthetic, c.synthetic_size)};
  } else if (!c.input_path.empty()) {
    img = read_image(c.input_path);
  } else {
    throw InvalidArgument("no input image: pass --in or --synthetic");
  }
  for (ImageGrid& ch : img.channels) ch.set_spacing(c.spacing);
  if (clean != nullptr) *clean = img;
  if (c.noise) {
    for (std::size_t i = 0; i < img.channels.size(); ++i) {
      NoiseModel m = *c.noise;
      m.seed += i;
      img.channels[i] = add_noise(img.channels[i], m);
    }
  }
  return img;
}

void run_denoise(const RunConfig& c, std::ostream& log) {
  if (c.output_path.empty()) throw InvalidArgument("denoise: --out is required");
  Image clean;
  const Image input = load_input(c, &clean);
  const std::optional<Image> ref = reference_for(c, clean, input);

  SolverConfig cfg = c.cfg;
  cfg.lambda_policy.value = c.lambda.value_or(kDefaultLambda);
  if (c.tol) cfg.gap_tol = *c.tol;
  if (c.max_iters) cfg.max_iters = *c.max_iters;
  SolveOptions opts;
  opts.form = c.form.value_or(is_dual_solver(cfg.solver) ? ObjectiveForm::ForwardOnly
                                                         : ObjectiveForm::Symmetric);

  Image out;
  std::vector<SolveReport> reports;
  for (std::size_t ch = 0; ch < input.channels.size(); ++ch) {
    const ImageGrid& u0 = input.channels[ch];
    RegularizerSpec spec = c.spec;
    if (spec.auto_k) {
      spec.k = mad_threshold(u0);
      spec.auto_k = false;
    }
    opts.reference = ref ? &ref->channels[ch] : nullptr;
    reports.push_back(solve(u0, weight_for(c, u0), cfg, spec, opts));
    out.channels.push_back(reports.back().restored);
  }
  write_image(c.output_path, out);

  std::optional<double> quality;
  if (ref) quality = psnr(stacked(out), stacked(*ref));
  if (!c.trace_path.empty()) {
    std::ofstream trace = open_output(c.trace_path);
    const bool color = reports.size() > 1;
    trace << (color ? "channel," : "") << "iter,reg,fid,total,gap,me\n";
    for (std::size_t ch = 0; ch < reports.size(); ++ch) {
      write_trace_rows(trace, reports[ch], color ? std::to_string(ch) + "," : "");
    }
    if (quality) trace << "psnr_db," << *quality << '\n';
    if (!trace) throw IoError("trace write failed");
  }
  for (std::size_t ch = 0; ch < reports.size(); ++ch) {
    const SolveReport& r = reports[ch];
    log << to_string(cfg.solver) << " channel " << ch << ": " << r.iterations
        << " iterations (" << termination_name(r.terminated_by)
        << "), final gap " << r.gap_trace.back() << '\n';
  }
  if (quality) log << "PSNR " << std::fixed << std::setprecision(2) << *quality << " dB\n";
}

void run_compare(const RunConfig& c, std::ostream& log) {
  if (c.out_dir.empty()) throw InvalidArgument("compare: --out-dir is required");
  Image clean;
  const Image input = load_input(c, &clean);
  if (input.is_color()) throw InvalidArgument("compare expects a grayscale image");
  const std::optional<Image> ref = reference_for(c, clean, input);
  const ImageGrid& u0 = input.channels[0];

  const CompareResult result = compare_solvers(
      u0, weight_for(c, u0), c.lambda.value_or(kDefaultLambda),
      c.max_iters.value_or(100000), ref ? &ref->channels[0] : nullptr,
      threads_from_env());

  std::filesystem::create_directories(c.out_dir);
  {
    std::ofstream csv = open_output(c.out_dir / "compare.csv");
    csv << "solver,iters_tol_1e-2,iters_tol_1e-4,iters_tol_1e-6,iterations,"
           "final_gap,psnr_db,me\n";
    for (const CompareRow& row : result.rows) {
      csv << to_string(row.solver);
      for (int n : row.iterations_to_tol) csv << ',' << n;
      csv << ',' << row.iterations << ',' << row.final_gap << ',';
      if (ref) csv << row.psnr_db << ',' << row.mean_error;
      else csv << ',';
      csv << '\n';
    }
    if (!csv) throw IoError("compare.csv write failed");
  }
  for (std::size_t j = 0; j < result.rows.size(); ++j) {
    Image img;
    img.channels = {result.reports[j].restored};
    write_image(c.out_dir / (std::string(to_string(result.rows[j].solver)) + ".pgm"), img);
  }

  log << std::left << std::setw(15) << "solver" << std::right << std::setw(10)
      << "1e-2" << std::setw(10) << "1e-4" << std::setw(10) << "1e-6"
      << std::setw(10) << "PSNR" << std::setw(10) << "seconds" << '\n';
  for (std::size_t j = 0; j < result.rows.size(); ++j) {
    const CompareRow& row = result.rows[j];
    log << std::left << std::setw(15) << to_string(row.solver) << std::right;
    for (int n : row.iterations_to_tol) log << std::setw(10) << n;
    log << std::fixed << std::setprecision(2) << std::setw(10) << row.psnr_db
        << std::setw(10) << result.reports[j].wall_seconds << '\n';
    log.unsetf(std::ios::floatfield);
  }
}

void run_convergence(const RunConfig& c, std::ostream& log) {
  if (c.output_path.empty()) throw InvalidArgument("convergence: --out is required");
  SolverConfig cfg = c.cfg;
  cfg.solver = SolverKind::SplitBregman;
  cfg.lambda_policy = LambdaPolicy::fixed(c.lambda.value_or(kDefaultStudyLambda));
  cfg.gap_tol = c.tol.value_or(1e-6);
  cfg.max_iters = c.max_iters.value_or(20000);
  RefinementOptions options;
  options.penalty_ratio = c.penalty_ratio;
  options.threads = threads_from_env();
  const double sigma = c.noise ? c.noise->sigma_255 : 0.0;
  const std::uint64_t seed = c.noise ? c.noise->seed : 0;

  const RefinementStudy study =
      refinement_study(c.study_kind, sigma, seed, c.levels, c.spec, cfg, options);
  std::ofstream csv = open_output(c.output_path);
  write_study_csv(csv, study);
  if (!csv) throw IoError("study CSV write failed");

  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    log << "N=" << study.levels[i].N << "  L2 error " << study.errors_l2[i]
        << "  energy " << study.energies[i] << '\n';
  }
  log << "fitted rate " << study.fitted_rate
      << (study.errors_monotone ? "" : "  (errors not monotone)") << '\n';
}

void run_addnoise(const RunConfig& c, std::ostream& log) {
  if (c.output_path.empty()) throw InvalidArgument("addnoise: --out is required");
  if (!c.noise) throw InvalidArgument("addnoise: --sigma is required");
  const Image noisy = load_input(c);
  write_image(c.output_path, noisy);
  log << "wrote " << c.output_path.string() << '\n';
}

}  // namespace varistore
