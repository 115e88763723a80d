#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varistore/commands.hpp"
#include "varistore/error.hpp"
#include "varistore/run_config.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

// Flags are collected as strings and replayed through the config keys, so
// the file and the command line share one parser and flags win.
struct Flags {
  std::string config;
  std::string in, out, trace, ref, out_dir;
  std::vector<std::pair<std::string, std::string>> entries;
};

void add_entry_option(CLI::App* app, Flags& flags, const std::string& name,
                      const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.entries.emplace_back(key, v); },
      help);
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value settings file");
  add_entry_option(app, f, "--synthetic", "synthetic", "Use a test image: step, ramp, bump");
  add_entry_option(app, f, "--size", "size", "Synthetic image size (default 64)");
  add_entry_option(app, f, "--sigma", "sigma", "Gaussian noise std dev on the 0-255 scale");
  add_entry_option(app, f, "--seed", "seed", "Noise seed");
  add_entry_option(app, f, "--spacing", "spacing", "Grid spacing h (default 0.2)");
}

void add_model(CLI::App* app, Flags& f) {
  add_entry_option(app, f, "--reg", "reg", "tikhonov, tv, huber, tukey, adaptive");
  add_entry_option(app, f, "--k", "k", "Threshold k (default: MAD estimate)");
  add_entry_option(app, f, "--lambda", "lambda", "Fidelity weight");
  add_entry_option(app, f, "--tol", "tol", "Relative duality-gap tolerance");
  add_entry_option(app, f, "--max-iters", "max_iters", "Iteration cap");
  add_entry_option(app, f, "--edge-weight", "edge_weight", "on|off: edge indicator W");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational image restoration: denoising, solver comparison, refinement studies"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* denoise = app.add_subcommand("denoise", "Restore an image");
  add_common(denoise, f);
  add_model(denoise, f);
  denoise->add_option("--in", f.in, "Input PGM/PPM");
  denoise->add_option("--out", f.out, "Output PGM/PPM")->required();
  denoise->add_option("--trace", f.trace, "Iteration trace CSV");
  denoise->add_option("--ref", f.ref, "Noise-free reference for PSNR");
  add_entry_option(denoise, f, "--solver", "solver",
                   "split_bregman, pdhg, proj_grad, fgp, admm, diffusion");
  add_entry_option(denoise, f, "--adaptive-lambda", "adaptive_lambda",
                   "on|off: per-pixel fidelity weight");

  CLI::App* compare = app.add_subcommand("compare", "Run the five convex solvers");
  add_common(compare, f);
  add_entry_option(compare, f, "--lambda", "lambda", "Fidelity weight");
  add_entry_option(compare, f, "--max-iters", "max_iters", "Iteration cap per solver");
  add_entry_option(compare, f, "--edge-weight", "edge_weight", "on|off: edge indicator W");
  compare->add_option("--in", f.in, "Input PGM");
  compare->add_option("--ref", f.ref, "Noise-free reference for PSNR");
  compare->add_option("--out-dir", f.out_dir, "Directory for compare.csv and images")
      ->required();

  CLI::App* conv = app.add_subcommand("convergence", "Grid-refinement study");
  add_common(conv, f);
  add_model(conv, f);
  add_entry_option(conv, f, "--kind", "study_kind", "step, ramp, bump");
  add_entry_option(conv, f, "--levels", "levels", "Comma-separated sizes, e.g. 16,32,64,128");
  conv->add_option("--out", f.out, "Study CSV")->required();

  CLI::App* addnoise = app.add_subcommand("addnoise", "Add Gaussian noise to an image");
  add_common(addnoise, f);
  addnoise->add_option("--in", f.in, "Input PGM/PPM");
  addnoise->add_option("--out", f.out, "Output PGM/PPM")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    varistore::RunConfig config;
    if (!f.config.empty()) varistore::load_config_file(config, f.config);
    for (const auto& [key, value] : f.entries) {
      varistore::apply_config_entry(config, key, value);
    }
    config.input_path = f.in;
    config.output_path = f.out;
    config.trace_path = f.trace;
    config.reference_path = f.ref;
    config.out_dir = f.out_dir;

    if (denoise->parsed()) varistore::run_denoise(config, std::cout);
    if (compare->parsed()) varistore::run_compare(config, std::cout);
    if (conv->parsed()) varistore::run_convergence(config, std::cout);
    if (addnoise->parsed()) varistore::run_addnoise(config, std::cout);
  } catch (const varistore::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const varistore::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const varistore::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
