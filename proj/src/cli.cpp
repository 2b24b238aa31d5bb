#include "catldp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catldp/experiments.hpp"
#include "catldp/oracle.hpp"
#include "catldp/rate.hpp"
#include "catldp/sampler.hpp"

namespace catldp::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(where + ": unknown key \"" + it.key() + "\"");
}

double need_number(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) fail(where + ": missing required key \"" + key + "\"");
  if (!j.at(key).is_number()) fail(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

std::int64_t need_count(const json& j, const std::string& where, const std::string& key) {
  const double v = need_number(j, where, key);
  if (v < 1 || v != std::floor(v)) fail(where + "." + key + " must be a positive integer");
  return static_cast<std::int64_t>(v);
}

std::int64_t opt_count(const json& j, const std::string& where, const std::string& key,
                       std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  return need_count(j, where, key);
}

std::vector<double> need_grid(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array())
    fail(where + ": \"" + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) fail(where + "." + key + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  if (out.empty()) fail(where + "." + key + " must not be empty");
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) fail("cannot open output file " + p.string());
  return out;
}

}  // namespace

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config is not valid JSON: " + std::string(e.what()));
  }
  // a manifest re-fed as config: unwrap the embedded config
  if (j.is_object() && j.contains("config") && j.contains("tool_version"))
    return j.at("config");
  return j;
}

std::uint64_t resolve_seed(const nlohmann::json& config, const CliOverrides& ov) {
  if (ov.seed) return *ov.seed;
  if (config.contains("seed")) {
    const auto& s = config.at("seed");
    if (!s.is_number_integer()) fail("\"seed\" must be a nonnegative integer");
    if (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)
      fail("\"seed\" must be a nonnegative integer");
    return s.get<std::uint64_t>();
  }
  if (const char* env = std::getenv("CATLDP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail("CATLDP_SEED is not a nonnegative integer");
    return v;
  }
  return 0;
}

ModelParams parse_model(const nlohmann::json& m) {
  if (!m.is_object()) fail("\"model\" must be an object");
  reject_unknown(m, "model", {"alpha", "lambda", "mu", "jump_pmf", "kernel", "delta"});
  ModelParams params;
  params.alpha = need_number(m, "model", "alpha");
  params.lambda_up = need_number(m, "model", "lambda");
  params.mu_down = need_number(m, "model", "mu");

  if (!m.contains("jump_pmf") || !m.at("jump_pmf").is_array())
    fail("model: \"jump_pmf\" must be an array [P_0, P_1, ...]");
  params.jump_pmf.probs.clear();
  for (const auto& v : m.at("jump_pmf")) {
    if (!v.is_number()) fail("model.jump_pmf must contain only numbers");
    params.jump_pmf.probs.push_back(v.get<double>());
  }

  try {
    if (!m.contains("kernel")) {
      params.kernel = CatastropheKernel::uniform();
    } else if (m.at("kernel").is_string()) {
      const std::string kind = m.at("kernel").get<std::string>();
      if (kind != "uniform") fail("model.kernel string must be \"uniform\"");
      params.kernel = CatastropheKernel::uniform();
    } else if (m.at("kernel").is_object()) {
      reject_unknown(m.at("kernel"), "model.kernel", {"tilted"});
      params.kernel =
          CatastropheKernel::tilted(need_number(m.at("kernel"), "model.kernel", "tilted"));
    } else {
      fail("model.kernel must be \"uniform\" or {\"tilted\": a}");
    }
    if (m.contains("delta")) {
      const double d = need_number(m, "model", "delta");
      if (!(d > 1.0)) fail("model.delta must exceed 1");
      params.kernel.delta_bound = d;
    }
  } catch (const std::domain_error& e) {
    fail(std::string("model.kernel: ") + e.what());
  }
  return params;
}

TargetPath parse_target(const nlohmann::json& section) {
  const int present = section.contains("f_slope") + section.contains("f_values") +
                      section.contains("f_csv");
  if (present != 1)
    fail("target function: provide exactly one of \"f_slope\", \"f_values\", \"f_csv\"");
  if (section.contains("f_slope")) {
    const double s = need_number(section, "target", "f_slope");
    return TargetPath::linear(s);
  }
  std::vector<double> values;
  if (section.contains("f_values")) {
    for (const auto& v : section.at("f_values")) {
      if (!v.is_number()) fail("f_values must contain only numbers");
      values.push_back(v.get<double>());
    }
  } else {
    // CSV rows "t,f" on a uniform grid; a "t,f" header line is tolerated
    const std::string path = section.at("f_csv").get<std::string>();
    std::ifstream in(path);
    if (!in) fail("cannot read f_csv file " + path);
    std::vector<double> ts;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) fail(path + ": expected \"t,f\" rows");
      char* end = nullptr;
      const double t = std::strtod(line.c_str(), &end);
      if (end == line.c_str()) continue;  // header line
      ts.push_back(t);
      values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
    }
    if (ts.size() < 2) fail(path + ": needs at least two grid rows");
    const double dt = 1.0 / static_cast<double>(ts.size() - 1);
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (std::abs(ts[i] - static_cast<double>(i) * dt) > 1e-9)
        fail(path + ": t column must be the uniform grid i/N over [0,1]");
  }
  if (values.size() < 2) fail("target function needs at least two grid values");
  if (values.front() != 0.0) fail("target function must start at f(0) = 0");
  TargetPath f;
  f.values = std::move(values);
  return f;
}

namespace {

const std::set<std::string> kKinds = {"simulate", "rate",        "tube",   "slope",
                                      "maxgrowth", "equivalence", "bounds", "plotdata"};

json target_echo(const TargetPath& f) { return json(f.values); }

struct Resolved {
  ModelParams model;
  std::uint64_t seed = 0;
  int workers = 0;
  fs::path out;
  json section;  // the kind's own section (possibly empty object)
};

int run_simulate(const Resolved& r) {
  reject_unknown(r.section, "simulate", {"T", "sampler"});
  const double T = need_number(r.section, "simulate", "T");
  if (!(T > 0.0)) fail("simulate.T must be positive");
  std::string sampler = "direct";
  if (r.section.contains("sampler")) sampler = r.section.at("sampler").get<std::string>();

  CadlagPath path;
  const RngStream stream{r.seed, 0};
  if (sampler == "direct")
    path = sample_direct(r.model, T, stream);
  else if (sampler == "decomposed")
    path = sample_decomposed(r.model, T, stream);
  else if (sampler == "subordinated")
    path = sample_subordinated(r.model, T, stream);
  else
    fail("simulate.sampler must be direct, decomposed or subordinated");

  auto out = open_out(r.out / "path.csv");
  out << "time,value\n";
  for (const auto& e : path.events())
    out << num(e.time) << "," << e.value << "\n";
  return kExitOk;
}

int run_rate(const Resolved& r) {
  reject_unknown(r.section, "rate", {"f_slope", "f_values", "f_csv"});
  const TargetPath f = parse_target(r.section);
  if (!f.in_ac0_plus())
    fail("rate: target must be strictly positive for t > 0 (grid values after the "
         "first must be > 0)");
  const RateReport report = rate_I(f, r.model);
  json j{{"rate_value", report.rate_value},
         {"catastrophe_term", report.catastrophe_term},
         {"variational_term", report.variational_term},
         {"optimal_slopes", report.optimal_slopes},
         {"fplus_slopes", report.fplus_slopes},
         {"f_values", target_echo(f)}};
  const auto& probs = r.model.jump_pmf.probs;
  if (r.model.jump_pmf.max_jump() == 1 && probs.size() >= 2 &&
      std::abs(probs[1] - 1.0) <= kPmfTol)
    j["closed_form_rate"] = rate_I_closed_poisson(f, r.model).rate_value;
  open_out(r.out / "rate.json") << j.dump(2) << "\n";
  return kExitOk;
}

void write_tube_rows(std::ofstream& out, const std::vector<TubeEstimate>& rows) {
  out << "T,eps,n,hits,p_hat,ci_lo,ci_hi,log_rate\n";
  for (const auto& e : rows) {
    out << num(e.T) << "," << num(e.eps) << "," << e.n << "," << e.hits << ","
        << num(e.p_hat) << "," << num(e.ci_lo) << "," << num(e.ci_hi) << ","
        << num(e.log_rate) << "\n";
  }
}

int run_tube(const Resolved& r) {
  reject_unknown(r.section, "tube",
                 {"f_slope", "f_values", "f_csv", "eps", "T", "n"});
  const TargetPath f = parse_target(r.section);
  const double eps = need_number(r.section, "tube", "eps");
  const double T = need_number(r.section, "tube", "T");
  const std::int64_t n = need_count(r.section, "tube", "n");
  if (!(eps > 0.0)) fail("tube.eps must be positive");
  if (!(T > 0.0)) fail("tube.T must be positive");
  const TubeEstimate est = tube_probability(r.model, f, eps, T, n, r.seed, r.workers);
  auto out = open_out(r.out / "tube.csv");
  write_tube_rows(out, {est});
  return kExitOk;
}

int run_slope(const Resolved& r) {
  reject_unknown(r.section, "slope",
                 {"f_slope", "f_values", "f_csv", "eps", "T_grid", "n"});
  const TargetPath f = parse_target(r.section);
  if (!f.in_ac0_plus())
    fail("slope: target must be strictly positive for t > 0 so the reference rate "
         "is finite");
  const double eps = need_number(r.section, "slope", "eps");
  if (!(eps > 0.0)) fail("slope.eps must be positive");
  const std::vector<double> grid = need_grid(r.section, "slope", "T_grid");
  if (grid.size() < 3) fail("slope.T_grid needs at least 3 horizons");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1])) fail("slope.T_grid must be strictly increasing");
  if (!(grid.front() > 0.0)) fail("slope.T_grid entries must be positive");
  const std::int64_t n = need_count(r.section, "slope", "n");

  const SlopeFit fit = lldp_slope(r.model, f, eps, grid, n, r.seed, r.workers);
  {
    auto out = open_out(r.out / "slope.csv");
    write_tube_rows(out, fit.per_T);
  }
  json j{{"slope", fit.slope},           {"slope_se", fit.slope_se},
         {"used_points", fit.used_points}, {"conclusive", fit.conclusive},
         {"rate_ref", fit.rate_ref},     {"ratio", fit.ratio},
         {"eps", eps}};
  open_out(r.out / "slope.json") << j.dump(2) << "\n";
  if (!fit.conclusive) {
    std::fprintf(stderr,
                 "slope: only %d usable horizons (need 3); raise n or shrink T_grid\n",
                 fit.used_points);
    return kExitInconclusive;
  }
  return kExitOk;
}

int run_maxgrowth(const Resolved& r) {
  reject_unknown(r.section, "maxgrowth", {"b", "eps", "T_grid", "n"});
  const double b = need_number(r.section, "maxgrowth", "b");
  const double eps = need_number(r.section, "maxgrowth", "eps");
  const std::vector<double> grid = need_grid(r.section, "maxgrowth", "T_grid");
  const std::int64_t n = need_count(r.section, "maxgrowth", "n");
  if (!(b > 0.0) || !(b < 1.0)) fail("maxgrowth.b must lie in (0,1)");
  if (!(eps > 0.0)) fail("maxgrowth.eps must be positive");
  for (double T : grid)
    if (!(T > 0.0)) fail("maxgrowth.T_grid entries must be positive");

  const auto rows = max_growth(r.model, b, eps, grid, n, r.seed, r.workers);
  auto out = open_out(r.out / "maxgrowth.csv");
  out << "T,b,eps,n,exceed_freq\n";
  for (const auto& row : rows)
    out << num(row.T) << "," << num(row.b) << "," << num(row.eps) << "," << row.n
        << "," << num(row.exceed_freq) << "\n";
  return kExitOk;
}

int run_equivalence(const Resolved& r) {
  reject_unknown(r.section, "equivalence", {"t", "n", "x_max", "k_max"});
  const double t = need_number(r.section, "equivalence", "t");
  if (!(t > 0.0)) fail("equivalence.t must be positive");
  const std::int64_t n = need_count(r.section, "equivalence", "n");
  const auto x_max = static_cast<int>(opt_count(r.section, "equivalence", "x_max", 60));
  const auto k_max = static_cast<int>(opt_count(r.section, "equivalence", "k_max", 60));

  const auto rows = sampler_equivalence(r.model, t, n, x_max, k_max, r.seed, r.workers);
  auto out = open_out(r.out / "equivalence.csv");
  out << "sampler,t,n,tv,trunc_bound,pass\n";
  for (const auto& row : rows)
    out << row.sampler << "," << num(row.t) << "," << row.n << "," << num(row.tv)
        << "," << num(row.trunc_bound) << "," << (row.pass ? "true" : "false") << "\n";
  return kExitOk;
}

int run_bounds(const Resolved& r) {
  reject_unknown(r.section, "bounds",
                 {"u", "c1", "k_max", "x_max", "c_grid", "delta_grid", "T_grid"});
  const auto u = static_cast<int>(opt_count(r.section, "bounds", "u", 1));
  const std::int64_t c1 = opt_count(r.section, "bounds", "c1", 4);
  const auto k_max = static_cast<int>(opt_count(r.section, "bounds", "k_max", 50));
  const auto x_max = static_cast<int>(opt_count(r.section, "bounds", "x_max", 200));

  std::vector<double> c_grid, delta_grid{0.0, 0.25, 0.5, 0.75}, t_grid{1.0, 5.0, 10.0, 50.0};
  for (int i = 1; i <= 19; ++i) c_grid.push_back(0.05 * i);
  if (r.section.contains("c_grid")) c_grid = need_grid(r.section, "bounds", "c_grid");
  if (r.section.contains("delta_grid")) delta_grid = need_grid(r.section, "bounds", "delta_grid");
  if (r.section.contains("T_grid")) t_grid = need_grid(r.section, "bounds", "T_grid");
  for (double c : c_grid)
    if (!(c >= 0.0) || !(c < 1.0)) fail("bounds.c_grid entries must lie in [0,1)");
  for (double d : delta_grid)
    if (!(d >= 0.0) || !(d <= 1.0)) fail("bounds.delta_grid entries must lie in [0,1]");
  for (double T : t_grid)
    if (!(T > 0.0)) fail("bounds.T_grid entries must be positive");

  const ChainMomentReport chain = chain_moment_bound_check(r.model, u, c1, k_max, x_max);
  double max_lhs = 0.0;
  for (double v : chain.lhs_per_k) max_lhs = std::max(max_lhs, v);

  int violations = 0;
  int checks = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  ClockTailReport worst{};
  bool have_worst = false;
  for (double c : c_grid)
    for (double d : delta_grid)
      for (double T : t_grid) {
        const ClockTailReport rep = clock_lower_tail_check(r.model, c, d, T);
        ++checks;
        if (!rep.pass) ++violations;
        const double margin = rep.rhs - rep.lhs;
        if (margin < min_margin) {
          min_margin = margin;
          worst = rep;
          have_worst = true;
        }
      }

  json j;
  j["chain_moment_bound"] = {
      {"claim", "E X(k)^{3u} 1(X(k) > c1) stays below C2 for every step k <= k_max"},
      {"parameters",
       {{"u", u}, {"c1", c1}, {"k_max", k_max}, {"x_max", x_max},
        {"delta", r.model.kernel.delta_bound}}},
      {"lhs", max_lhs},
      {"rhs", chain.bound},
      {"margin", chain.bound - max_lhs},
      {"truncation_bound", chain.truncation_term},
      {"max_ratio", chain.max_ratio},
      {"inconclusive", chain.inconclusive},
      {"pass", chain.pass}};
  j["clock_lower_tail"] = {
      {"claim",
       "P(catastrophe clock increment over (delta T, T] has at most c*T arrivals) "
       "<= exp(-rho(1-delta)T + rho(1-delta)cT - T c ln c)"},
      {"parameters",
       {{"c_grid", c_grid}, {"delta_grid", delta_grid}, {"T_grid", t_grid}}},
      {"checks", checks},
      {"violations", violations},
      {"lhs", have_worst ? worst.lhs : 0.0},
      {"rhs", have_worst ? worst.rhs : 0.0},
      {"margin", min_margin},
      {"truncation_bound", 0.0},
      {"pass", violations == 0}};
  open_out(r.out / "bounds.json") << j.dump(2) << "\n";
  return chain.inconclusive ? kExitInconclusive : kExitOk;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) fail("cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int run_plotdata(const Resolved& r, const CliOverrides& ov) {
  reject_unknown(r.section, "plotdata", {"input"});
  std::string input;
  if (ov.input_dir)
    input = *ov.input_dir;
  else if (r.section.contains("input"))
    input = r.section.at("input").get<std::string>();
  else
    fail("plotdata: provide \"input\" (run directory) in the config or via --input");

  const fs::path dir(input);
  auto out = open_out(r.out / "plotdata.csv");
  out << "series,x,y,flag\n";

  const auto emit_curve = [&](const fs::path& csv, bool with_ref) {
    const auto rows = read_csv(csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() < 8) fail(csv.string() + ": malformed row");
      const bool bound = std::strtoll(row[3].c_str(), nullptr, 10) == 0;
      out << "log_rate_emp," << row[0] << "," << row[7] << ","
          << (bound ? "bound" : "") << "\n";
    }
    if (!with_ref) return;
    std::ifstream jin(dir / "slope.json");
    if (!jin) return;
    json j;
    jin >> j;
    if (!j.contains("rate_ref")) return;
    const double ref = j.at("rate_ref").get<double>();
    for (std::size_t i = 1; i < rows.size(); ++i)
      out << "rate_ref," << rows[i][0] << "," << num(ref) << ",\n";
  };

  if (fs::exists(dir / "slope.csv")) {
    emit_curve(dir / "slope.csv", true);
  } else if (fs::exists(dir / "tube.csv")) {
    emit_curve(dir / "tube.csv", false);
  } else if (fs::exists(dir / "maxgrowth.csv")) {
    const auto rows = read_csv(dir / "maxgrowth.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() < 5) fail("maxgrowth.csv: malformed row");
      out << "exceed_freq," << rows[i][0] << "," << rows[i][4] << ",\n";
    }
  } else {
    fail("plotdata: no slope.csv, tube.csv or maxgrowth.csv under " + dir.string());
  }
  return kExitOk;
}

}  // namespace

int run(const std::string& kind, const std::string& config_path, const CliOverrides& ov) {
  if (!kKinds.count(kind)) fail("unknown subcommand \"" + kind + "\"");
  const auto t0 = std::chrono::steady_clock::now();

  json config;
  if (config_path.empty()) {
    // plotdata can run on --input alone; everything else needs a config
    if (kind != "plotdata") fail("--config is required");
    config = json::object();
  } else {
    config = load_config_file(config_path);
  }
  if (!config.is_object()) fail("config root must be a JSON object");
  {
    std::set<std::string> allowed = {"model", "seed", "workers", "out"};
    allowed.insert(kKinds.begin(), kKinds.end());
    reject_unknown(config, "config", allowed);
  }

  Resolved r;
  r.seed = resolve_seed(config, ov);
  if (ov.workers)
    r.workers = *ov.workers;
  else if (config.contains("workers")) {
    if (!config.at("workers").is_number_integer() || config.at("workers").get<int>() < 0)
      fail("\"workers\" must be a nonnegative integer");
    r.workers = config.at("workers").get<int>();
  }
  std::string out_dir = ".";
  if (ov.out_dir)
    out_dir = *ov.out_dir;
  else if (config.contains("out"))
    out_dir = config.at("out").get<std::string>();
  r.out = out_dir;

  if (kind != "plotdata") {
    if (!config.contains("model")) fail("config needs a \"model\" section");
    r.model = parse_model(config.at("model"));
    const ValidationReport report = validate(r.model);
    if (!report.pass()) fail("model validation failed: " + report.summary());
  }
  r.section = config.contains(kind) ? config.at(kind) : json::object();
  if (!r.section.is_object()) fail("\"" + kind + "\" section must be an object");

  std::error_code ec;
  fs::create_directories(r.out, ec);
  if (ec) fail("cannot create output directory " + r.out.string());

  int code = kExitOk;
  if (kind == "simulate")
    code = run_simulate(r);
  else if (kind == "rate")
    code = run_rate(r);
  else if (kind == "tube")
    code = run_tube(r);
  else if (kind == "slope")
    code = run_slope(r);
  else if (kind == "maxgrowth")
    code = run_maxgrowth(r);
  else if (kind == "equivalence")
    code = run_equivalence(r);
  else if (kind == "bounds")
    code = run_bounds(r);
  else
    code = run_plotdata(r, ov);

  // resolved echo: re-feeding this manifest reproduces the run exactly
  json resolved = config;
  resolved["seed"] = r.seed;
  resolved["workers"] = r.workers;
  resolved["out"] = out_dir;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest{{"config", resolved},
                {"seed", r.seed},
                {"kind", kind},
                {"tool_version", kToolVersion},
                {"wall_time_s", wall}};
  open_out(r.out / "manifest.json") << manifest.dump(2) << "\n";
  return code;
}

}  // namespace catldp::cli
