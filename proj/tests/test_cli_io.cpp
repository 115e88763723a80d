#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "varistore/commands.hpp"
#include "varistore/error.hpp"
#include "varistore/image_io.hpp"
#include "varistore/noise.hpp"
#include "varistore/run_config.hpp"

using namespace varistore;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "varistore_test_cli_io" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Image read_text(const std::string& text) {
  std::istringstream in(text);
  return read_image(in);
}

}  // namespace

TEST_CASE("ASCII PGM") {
  const Image img = read_text("P2\n# comment\n2 2\n255\n0 255\n128 64\n");
  REQUIRE_FALSE(img.is_color());
  const ImageGrid& g = img.channels[0];
  CHECK(g.width() == 2);
  CHECK(g(0, 0) == 0.0);
  CHECK(g(1, 0) == 1.0);
  CHECK(g(0, 1) == 128.0 / 255.0);
  CHECK(g(1, 1) == 64.0 / 255.0);
}

TEST_CASE("PPM yields three grids") {
  const Image img = read_text("P3 2 1 255  10 20 30  40 50 60");
  REQUIRE(img.is_color());
  for (const auto& c : img.channels) {
    CHECK(c.width() == 2);
    CHECK(c.height() == 1);
  }
  CHECK(img.channels[1](1, 0) == 50.0 / 255.0);
}

TEST_CASE("binary round trip is exact after quantisation") {
  std::mt19937_64 rng(3);
  for (int channels : {1, 3}) {
    Image img;
    for (int c = 0; c < channels; ++c) {
      ImageGrid g(13, 7);
      for (double& v : g.values()) v = static_cast<double>(rng() % 256) / 255.0;
      img.channels.push_back(g);
    }
    std::stringstream buf;
    write_image(buf, img);
    CHECK(buf.str().substr(0, 2) == (channels == 1 ? "P5" : "P6"));
    const Image back = read_image(buf);
    REQUIRE(back.channels.size() == img.channels.size());
    for (std::size_t c = 0; c < img.channels.size(); ++c) {
      for (std::size_t i = 0; i < img.channels[c].size(); ++i) {
        CHECK(back.channels[c][i] == img.channels[c][i]);
      }
    }
  }
  // Writing clamps to [0, 1] and rounds to the nearest level.
  Image img{{ImageGrid(3, 1, 1.0, {-0.5, 1.7, 100.4 / 255.0})}};
  std::stringstream buf;
  write_image(buf, img);
  const Image back = read_image(buf);
  CHECK(back.channels[0][0] == 0.0);
  CHECK(back.channels[0][1] == 1.0);
  CHECK(back.channels[0][2] == 100.0 / 255.0);
}

TEST_CASE("malformed images") {
  CHECK_THROWS_AS(read_text(""), IoError);
  CHECK_THROWS_AS(read_text("P7\n2 2\n255\n"), IoError);
  CHECK_THROWS_AS(read_text("P2\n2 2\n65535\n0 0 0 0\n"), IoError);
  CHECK_THROWS_AS(read_text("P2\n2 2\n255\n0 0 0\n"), IoError);
  CHECK_THROWS_AS(read_text("P2\n2 2\n255\n0 0 0 300\n"), IoError);
  CHECK_THROWS_AS(read_text(std::string("P5\n2 2\n255\n") + "ab"), IoError);
  CHECK_THROWS_AS(read_text("P2\n0 2\n255\n"), IoError);
  CHECK_THROWS_AS(read_image(fs::path("/nonexistent/varistore.pgm")), IoError);
  Image nan_img{{ImageGrid(1, 1, 1.0, std::nan(""))}};
  std::stringstream buf;
  CHECK_THROWS(write_image(buf, nan_img));
}

TEST_CASE("Gaussian noise") {
  const ImageGrid clean(256, 256, 1.0, 0.5);
  CHECK(add_noise(clean, {0.0, 0.0, 7}).values()[10] == 0.5);
  const ImageGrid n1 = add_noise(clean, {20.0, 0.0, 7});
  const ImageGrid n2 = add_noise(clean, {20.0, 0.0, 7});
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n1.size(); ++i) {
    CHECK(n1[i] == n2[i]);
    sum += n1[i] - 0.5;
    sq += (n1[i] - 0.5) * (n1[i] - 0.5);
  }
  const double n = static_cast<double>(n1.size());
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  CHECK(std::abs(sd - 20.0 / 255.0) <= 0.03 * 20.0 / 255.0);
  CHECK(std::abs(sum / n) <= 1e-3);
  const ImageGrid other = add_noise(clean, {20.0, 0.0, 8});
  CHECK(other[0] != n1[0]);
  const ImageGrid shifted = add_noise(clean, {0.0, 25.5, 7});
  CHECK(shifted[0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(add_noise(clean, {-1.0, 0.0, 7}), InvalidArgument);
}

TEST_CASE("config entries") {
  RunConfig c;
  apply_config_text(c,
                    "# model\n"
                    "kind = huber\n"
                    "k=0.3\n"
                    "auto_k=off\n"
                    "solver=fgp\n"
                    "lambda=4.5\n"
                    "tol=1e-5\n"
                    "max_iters=77\n"
                    "sigma=15\n"
                    "seed=3\n"
                    "edge_weight=no\n"
                    "levels=8,16,32\n"
                    "form=forward\n"
                    "\n");
  CHECK(c.spec.kind == RegularizerKind::Huber);
  CHECK(c.spec.k == 0.3);
  CHECK_FALSE(c.spec.auto_k);
  CHECK(c.cfg.solver == SolverKind::FGP);
  CHECK(*c.lambda == 4.5);
  CHECK(*c.tol == 1e-5);
  CHECK(*c.max_iters == 77);
  REQUIRE(c.noise);
  CHECK(c.noise->sigma_255 == 15.0);
  CHECK(c.noise->seed == 3);
  CHECK_FALSE(c.edge_weight);
  CHECK(c.levels == std::vector<std::size_t>{8, 16, 32});
  CHECK(*c.form == ObjectiveForm::ForwardOnly);
  // Later entries win, which is how flags override the file.
  apply_config_entry(c, "lambda", "9");
  CHECK(*c.lambda == 9.0);

  CHECK_THROWS_AS(apply_config_entry(c, "colour", "red"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_entry(c, "lambda", "abc"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_entry(c, "max_iters", "1.5"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_text(c, "no equals sign"), InvalidArgument);
  CHECK(parse_switch("Yes"));
  CHECK_FALSE(parse_switch("0"));
  CHECK_THROWS_AS(parse_switch("maybe"), InvalidArgument);
  CHECK_THROWS_AS(load_config_file(c, "/nonexistent/varistore.cfg"), IoError);
}

TEST_CASE("denoise writes image and trace") {
  const fs::path dir = scratch_dir("denoise");
  RunConfig c;
  c.synthetic = TestImageKind::Step;
  c.synthetic_size = 32;
  c.noise = NoiseModel{20.0, 0.0, 7};
  c.output_path = dir / "out.pgm";
  c.trace_path = dir / "trace.csv";
  std::ostringstream log;
  run_denoise(c, log);
  const Image out = read_image(c.output_path);
  CHECK(out.width() == 32);
  const auto lines = lines_of(c.trace_path);
  REQUIRE(lines.size() >= 3);
  CHECK(lines.front() == "iter,reg,fid,total,gap,me");
  CHECK(lines.back().rfind("psnr_db,", 0) == 0);
  CHECK(std::stod(lines.back().substr(8)) > 25.0);
  CHECK(log.str().find("PSNR") != std::string::npos);
  CHECK_THROWS_AS(run_denoise(RunConfig{}, log), InvalidArgument);
}

TEST_CASE("colour channels are processed independently") {
  const fs::path dir = scratch_dir("colour");
  std::mt19937_64 rng(5);
  Image img;
  for (int ch = 0; ch < 3; ++ch) {
    ImageGrid g = fixtures::random_grid(rng, 16, 16);
    for (double& v : g.values()) v = std::round(v * 255.0) / 255.0;
    img.channels.push_back(g);
  }
  Image perm{{img.channels[2], img.channels[0], img.channels[1]}};
  write_image(dir / "rgb.ppm", img);
  write_image(dir / "brg.ppm", perm);
  RunConfig c;
  c.max_iters = 200;
  c.input_path = dir / "rgb.ppm";
  c.output_path = dir / "rgb_out.ppm";
  c.trace_path = dir / "rgb.csv";
  std::ostringstream log;
  run_denoise(c, log);
  c.input_path = dir / "brg.ppm";
  c.output_path = dir / "brg_out.ppm";
  c.trace_path.clear();
  run_denoise(c, log);
  const Image a = read_image(dir / "rgb_out.ppm");
  const Image b = read_image(dir / "brg_out.ppm");
  REQUIRE(a.is_color());
  for (std::size_t i = 0; i < a.channels[0].size(); ++i) {
    CHECK(b.channels[0][i] == a.channels[2][i]);
    CHECK(b.channels[1][i] == a.channels[0][i]);
    CHECK(b.channels[2][i] == a.channels[1][i]);
  }
  CHECK(lines_of(dir / "rgb.csv").front() == "channel,iter,reg,fid,total,gap,me");
}

TEST_CASE("addnoise and convergence") {
  const fs::path dir = scratch_dir("misc");
  RunConfig c;
  c.synthetic = TestImageKind::Ramp;
  c.synthetic_size = 16;
  c.output_path = dir / "noisy.pgm";
  std::ostringstream log;
  CHECK_THROWS_AS(run_addnoise(c, log), InvalidArgument);
  c.noise = NoiseModel{10.0, 0.0, 1};
  run_addnoise(c, log);
  const std::string first = slurp(c.output_path);
  run_addnoise(c, log);
  CHECK(slurp(c.output_path) == first);
  CHECK(read_image(c.output_path).width() == 16);

  RunConfig s;
  s.output_path = dir / "study.csv";
  s.levels = {8, 16};
  s.noise = NoiseModel{20.0, 0.0, 7};
  run_convergence(s, log);
  const auto lines = lines_of(s.output_path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "h,N,error_l2,energy");
  CHECK(lines[1].rfind("0.125,8,", 0) == 0);
  CHECK(lines[2].rfind("0.0625,16,", 0) == 0);
  CHECK(lines[3].rfind("fitted_rate,", 0) == 0);
}

TEST_CASE("first iteration within a tolerance") {
  const std::vector<double> trace{1.0, 0.1, 0.5, 0.001, 1e-7};
  CHECK(first_iteration_within(trace, 0.2) == 2);
  CHECK(first_iteration_within(trace, 1e-6) == 5);
  CHECK(first_iteration_within(trace, 1e-9) == -1);
}
