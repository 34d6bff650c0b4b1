#include "dgpe/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dgpe {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_values(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ConfigError("not a finite number: '" + std::string(tok) + "'", line);
  }
  return v;
}

long long to_integer(std::string_view tok, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ConfigError("not an integer: '" + std::string(tok) + "'", line);
  }
  return v;
}

double single_double(std::string_view value, int line) {
  const auto toks = split_values(value);
  if (toks.size() != 1) throw ConfigError("expected one number", line);
  return to_double(toks[0], line);
}

long long single_integer(std::string_view value, int line) {
  const auto toks = split_values(value);
  if (toks.size() != 1) throw ConfigError("expected one integer", line);
  return to_integer(toks[0], line);
}

template <class T, class Parse>
std::array<T, 3> triple(std::string_view value, int line, Parse parse) {
  const auto toks = split_values(value);
  if (toks.size() == 1) {
    const T v = parse(toks[0], line);
    return {v, v, v};
  }
  if (toks.size() != 3) throw ConfigError("expected 1 or 3 values", line);
  return {parse(toks[0], line), parse(toks[1], line), parse(toks[2], line)};
}

void require(bool ok, const std::string& what, int line) {
  if (!ok) throw ConfigError(what, line);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);

    if (key == "lambda1") {
      cfg.physics.lambda1 = single_double(value, line_no);
    } else if (key == "lambda2") {
      cfg.physics.lambda2 = single_double(value, line_no);
    } else if (key == "mass_c") {
      cfg.physics.mass_c = single_double(value, line_no);
      require(cfg.physics.mass_c > 0.0, "mass_c must be > 0", line_no);
    } else if (key == "dims") {
      const auto d = triple<long long>(value, line_no, to_integer);
      for (long long n : d) require(n >= 8 && n % 2 == 0, "dims must be even and >= 8", line_no);
      cfg.dims = {static_cast<std::size_t>(d[0]), static_cast<std::size_t>(d[1]),
                  static_cast<std::size_t>(d[2])};
    } else if (key == "box") {
      cfg.box = triple<double>(value, line_no, to_double);
      for (double l : cfg.box) require(l > 0.0, "box half-lengths must be > 0", line_no);
    } else if (key == "tol_residual") {
      cfg.solver.tol_residual = single_double(value, line_no);
      require(cfg.solver.tol_residual > 0.0, "tol_residual must be > 0", line_no);
    } else if (key == "max_iters") {
      const long long v = single_integer(value, line_no);
      require(v >= 1 && v <= 1'000'000'000, "max_iters must be >= 1", line_no);
      cfg.solver.max_iters = static_cast<int>(v);
    } else if (key == "dt") {
      cfg.dynamics.dt = single_double(value, line_no);
      require(cfg.dynamics.dt > 0.0, "dt must be > 0", line_no);
    } else if (key == "t_final") {
      cfg.dynamics.t_final = single_double(value, line_no);
      require(cfg.dynamics.t_final > 0.0, "t_final must be > 0", line_no);
    } else if (key == "delta") {
      cfg.delta = single_double(value, line_no);
      require(cfg.delta >= 0.0, "delta must be >= 0", line_no);
    } else if (key == "epsilons") {
      cfg.epsilons.clear();
      for (auto tok : split_values(value)) cfg.epsilons.push_back(to_double(tok, line_no));
      for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        require(cfg.epsilons[i] > 0.0, "epsilons must be > 0", line_no);
        require(i == 0 || cfg.epsilons[i] < cfg.epsilons[i - 1],
                "epsilons must be strictly decreasing", line_no);
      }
    } else if (key == "seed") {
      const long long v = single_integer(value, line_no);
      require(v >= 0, "seed must be >= 0", line_no);
      cfg.seed = static_cast<std::uint64_t>(v);
      cfg.solver.seed = cfg.seed;
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }
  if (!seen.contains("lambda1")) throw ConfigError("missing required key 'lambda1'", 0);
  if (!seen.contains("lambda2")) throw ConfigError("missing required key 'lambda2'", 0);
  if (cfg.dynamics.t_final < cfg.dynamics.dt) throw ConfigError("t_final must be >= dt", 0);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace dgpe
