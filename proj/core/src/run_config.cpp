#include "varistore/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "varistore/error.hpp"

namespace varistore {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config: bad value '" + std::string(value) +
                          "' for " + std::string(key));
  }
  return out;
}

std::vector<std::size_t> parse_levels(std::string_view value) {
  std::vector<std::size_t> levels;
  while (!value.empty()) {
    const std::size_t comma = value.find(',');
    const std::string_view item = trim(value.substr(0, comma));
    levels.push_back(parse_number<std::size_t>("levels", item));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  if (levels.empty()) throw InvalidArgument("config: empty level list");
  return levels;
}

NoiseModel& noise_of(RunConfig& c) {
  if (!c.noise) c.noise = NoiseModel{};
  return *c.noise;
}

}  // namespace

bool parse_switch(std::string_view value) {
  const std::string v = lower(trim(value));
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw InvalidArgument("expected on/off, got '" + std::string(value) + "'");
}

void apply_config_entry(RunConfig& c, std::string_view raw_key,
                        std::string_view raw_value) {
  const std::string_view key = trim(raw_key);
  const std::string_view value = trim(raw_value);
  const auto num = [&] { return parse_number<double>(key, value); };

  if (key == "kind" || key == "reg") {
    c.spec.kind = parse_regularizer_kind(value);
  } else if (key == "k") {
    c.spec.k = num();
    c.spec.auto_k = false;
  } else if (key == "auto_k") {
    c.spec.auto_k = parse_switch(value);
  } else if (key == "a") {
    c.spec.a = num();
  } else if (key == "b") {
    c.spec.b = num();
  } else if (key == "K") {
    c.edge.K = num();
  } else if (key == "rho") {
    c.edge.rho = num();
  } else if (key == "edge_weight") {
    c.edge_weight = parse_switch(value);
  } else if (key == "form") {
    const std::string v = lower(value);
    if (v == "symmetric") {
      c.form = ObjectiveForm::Symmetric;
    } else if (v == "forward") {
      c.form = ObjectiveForm::ForwardOnly;
    } else {
      throw InvalidArgument("config: form must be symmetric or forward");
    }
  } else if (key == "solver") {
    c.cfg.solver = parse_solver_kind(value);
  } else if (key == "lambda") {
    c.lambda = num();
  } else if (key == "adaptive_lambda") {
    c.cfg.lambda_policy.mode = parse_switch(value) ? LambdaPolicy::Mode::Adaptive
                                                   : LambdaPolicy::Mode::Fixed;
  } else if (key == "epsilon_sq") {
    c.cfg.lambda_policy.epsilon_sq = num();
  } else if (key == "normalize_lambda") {
    c.cfg.lambda_policy.normalize = parse_switch(value);
  } else if (key == "mu") {
    c.cfg.mu = num();
  } else if (key == "tol") {
    c.tol = num();
  } else if (key == "max_iters") {
    c.max_iters = parse_number<int>(key, value);
  } else if (key == "gs_sweeps") {
    c.cfg.inner_gs_sweeps = parse_number<int>(key, value);
  } else if (key == "time_step") {
    c.cfg.time_step = num();
  } else if (key == "admm_penalty_scale") {
    c.cfg.admm_penalty_scale = num();
  } else if (key == "seed") {
    noise_of(c).seed = parse_number<std::uint64_t>(key, value);
    c.cfg.seed = c.noise->seed;
  } else if (key == "sigma") {
    noise_of(c).sigma_255 = num();
  } else if (key == "spacing") {
    c.spacing = num();
    if (!(c.spacing > 0.0)) throw InvalidArgument("config: spacing must be > 0");
  } else if (key == "synthetic") {
    c.synthetic = parse_test_image_kind(value);
  } else if (key == "size") {
    c.synthetic_size = parse_number<std::size_t>(key, value);
  } else if (key == "study_kind") {
    c.study_kind = parse_test_image_kind(value);
  } else if (key == "levels") {
    c.levels = parse_levels(value);
  } else if (key == "penalty_ratio") {
    c.penalty_ratio = num();
  } else {
    throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected key=value");
    }
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

}  // namespace varistore
