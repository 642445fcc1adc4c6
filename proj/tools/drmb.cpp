// Copyright 2026 The drmbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drmb/oracle.hpp"
#include "json.hpp"

namespace {

using drmb::BoundResult;
using drmb::BoundSide;
using drmb::DistortionFunction;
using drmb::MomentSpec;
using drmb::ShapeClass;

struct RunConfig {
  std::string command = "bound";  // bound | extremal | verify | sweep
  std::string distortion = "identity";
  std::string cls = "general";
  std::string side = "sup";  // sup | inf | both
  double mu = 0.0;
  double sigma = 1.0;
  std::string alpha;  // sweep range start:stop:step
  std::string output;
  std::string format = "json";  // json | csv
  long budget = 10000;
  std::uint64_t seed = 20260809;
  int grid = 0;
  double tol = 1e-9;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DRMB_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 20260809ull;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const char* method_name(const BoundResult& r) {
  switch (r.method) {
    case BoundResult::Method::ClosedForm:
      return "closed-form";
    case BoundResult::Method::EnvelopeIntegral:
      return "envelope-integral";
    case BoundResult::Method::Bracket:
      return "bracket";
  }
  return "?";
}

std::string bound_json(const std::string& cls, const std::string& side,
                       const BoundResult& r) {
  std::ostringstream os;
  auto jnum = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "\"inf\"" : "\"-inf\"");
    return fmt(v);
  };
  os << "{\"class\":\"" << cls << "\",\"side\":\"" << side << "\"";
  os << ",\"value\":" << jnum(r.value);
  os << ",\"method\":\"" << method_name(r) << "\"";
  os << ",\"attainable\":" << (r.attainable ? "true" : "false");
  if (r.bracket) {
    os << ",\"bracket\":[" << jnum(r.bracket->lower) << ","
       << jnum(r.bracket->upper) << "],\"argmax_b\":" << jnum(r.bracket->argmax_b);
  }
  if (!r.diagnostic.empty()) os << ",\"diagnostic\":\"" << r.diagnostic << "\"";
  os << "}";
  return os.str();
}

std::vector<std::pair<std::string, BoundSide>> parse_sides(const std::string& s) {
  if (s == "both")
    return {{"sup", BoundSide::Sup}, {"inf", BoundSide::Inf}};
  if (s == "sup") return {{"sup", BoundSide::Sup}};
  if (s == "inf") return {{"inf", BoundSide::Inf}};
  throw std::invalid_argument("unknown side: " + s);
}

int run_bound(const RunConfig& cfg, std::ostream& os) {
  const auto h = drmb::parse_distortion(cfg.distortion);
  const ShapeClass cls = drmb::parse_shape_class(cfg.cls);
  const MomentSpec m{cfg.mu, cfg.sigma};
  for (auto& [name, side] : parse_sides(cfg.side)) {
    const BoundResult r = drmb::bound(h, cls, side, m);
    if (cfg.format == "csv") {
      os << cfg.cls << "," << name << "," << fmt(r.value) << ","
         << (r.attainable ? "1" : "0") << "," << method_name(r) << "\n";
    } else {
      os << bound_json(cfg.cls, name, r) << "\n";
    }
  }
  return 0;
}

int run_extremal(const RunConfig& cfg, std::ostream& os) {
  const auto h = drmb::parse_distortion(cfg.distortion);
  const ShapeClass cls = drmb::parse_shape_class(cfg.cls);
  const MomentSpec m{cfg.mu, cfg.sigma};
  const auto sides = parse_sides(cfg.side);
  const BoundResult r = drmb::bound(h, cls, sides.front().second, m);
  if (!r.extremal) {
    std::cerr << "no extremal distribution available: "
              << (r.diagnostic.empty() ? "not attainable" : r.diagnostic) << "\n";
    return 1;
  }
  r.extremal->export_csv(os, cfg.grid);
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
  const auto h = drmb::parse_distortion(cfg.distortion);
  const ShapeClass cls = drmb::parse_shape_class(cfg.cls);
  const MomentSpec m{cfg.mu, cfg.sigma};
  int bad = 0;
  for (auto& [name, side] : parse_sides(cfg.side)) {
    const drmb::OracleReport rep =
        drmb::search(h, cls, side, m, cfg.budget, cfg.seed, cfg.tol);
    os << rep.to_json() << "\n";
    if (rep.violation) ++bad;
    if (rep.analytic_attainable && std::fabs(rep.gap) > 1e-4) ++bad;
  }
  return bad == 0 ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, std::ostream& os) {
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(cfg.alpha.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0) {
    std::cerr << "sweep needs --alpha start:stop:step with step > 0\n";
    return 2;
  }
  const ShapeClass cls = drmb::parse_shape_class(cfg.cls);
  const MomentSpec m{cfg.mu, cfg.sigma};
  const auto colon = cfg.distortion.find(':');
  const std::string family = cfg.distortion.substr(0, colon);
  const std::string suffix =
      colon == std::string::npos ? std::string() : cfg.distortion.substr(colon + 1);
  os << "alpha,sup,inf,method\n";
  for (double a = start; a <= stop + 1e-12; a += step) {
    std::string spec;
    if (family == "var" || family == "tvar") {
      spec = family + ":" + fmt(a);
    } else if (family == "ph") {
      spec = "ph:" + fmt(a) + "," + (suffix.empty() ? "0.75" : suffix);
    } else {
      std::cerr << "sweep supports var, tvar and ph:<r> distortions\n";
      return 2;
    }
    const DistortionFunction h = drmb::parse_distortion(spec);
    const BoundResult s = drmb::bound(h, cls, BoundSide::Sup, m);
    const BoundResult i = drmb::bound(h, cls, BoundSide::Inf, m);
    os << fmt(a) << "," << fmt(s.value) << "," << fmt(i.value) << ","
       << method_name(s) << "\n";
  }
  return 0;
}

int dispatch(const RunConfig& cfg) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.output.empty() && cfg.output != "-") {
    file.open(cfg.output);
    if (!file) {
      std::cerr << "cannot open output file: " << cfg.output << "\n";
      return 2;
    }
    os = &file;
  }
  if (cfg.command == "bound") return run_bound(cfg, *os);
  if (cfg.command == "extremal") return run_extremal(cfg, *os);
  if (cfg.command == "verify") return run_verify(cfg, *os);
  if (cfg.command == "sweep") return run_sweep(cfg, *os);
  std::cerr << "unknown command: " << cfg.command << "\n";
  return 2;
}

RunConfig config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  RunConfig cfg;
  cfg.seed = default_seed();
  cfg.command = j.value("command", cfg.command);
  cfg.distortion = j.value("distortion", cfg.distortion);
  cfg.cls = j.value("class", cfg.cls);
  cfg.side = j.value("side", cfg.side);
  cfg.mu = j.value("mu", cfg.mu);
  cfg.sigma = j.value("sigma", cfg.sigma);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.output = j.value("output", cfg.output);
  cfg.format = j.value("format", cfg.format);
  cfg.budget = j.value("budget", cfg.budget);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.grid = j.value("grid", cfg.grid);
  cfg.tol = j.value("tol", cfg.tol);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sharp worst/best-case distortion risk measures under mean, variance "
      "and shape information"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.seed = default_seed();
  std::string config_path;

  auto add_common = [&](CLI::App* cmd, bool need_side) {
    cmd->add_option("--distortion", cfg.distortion,
                    "identity|var:a|tvar:a|rvar:a,b|ph:a,r|pow:e|pwl:...|steps:...");
    cmd->add_option("--class", cfg.cls, "general|symmetric|unimodal|us");
    if (need_side) cmd->add_option("--side", cfg.side, "sup|inf|both");
    cmd->add_option("--mu", cfg.mu, "mean");
    cmd->add_option("--sigma", cfg.sigma, "standard deviation (> 0)");
    cmd->add_option("--output", cfg.output, "output path (default stdout)");
  };

  CLI::App* cmd_bound = app.add_subcommand("bound", "worst/best-case bound");
  add_common(cmd_bound, true);
  cmd_bound->add_option("--format", cfg.format, "json|csv");

  CLI::App* cmd_extremal =
      app.add_subcommand("extremal", "attaining quantile function as CSV");
  add_common(cmd_extremal, true);
  cmd_extremal->add_option("--grid", cfg.grid,
                           "extra interior grid points per segment");

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "brute-force oracle check (exit 1 on violation)");
  add_common(cmd_verify, true);
  cmd_verify->add_option("--budget", cfg.budget, "oracle evaluation budget");
  cmd_verify->add_option("--seed", cfg.seed, "oracle RNG seed (or DRMB_SEED)");
  cmd_verify->add_option("--tol", cfg.tol, "candidate feasibility tolerance");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "alpha sweep as CSV rows");
  add_common(cmd_sweep, false);
  cmd_sweep->add_option("--alpha", cfg.alpha, "start:stop:step")->required();

  CLI::App* cmd_run =
      app.add_subcommand("run", "execute a JSON run configuration");
  cmd_run->add_option("--config", config_path, "path to the JSON config")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) return dispatch(config_from_json(config_path));
    if (cmd_bound->parsed()) cfg.command = "bound";
    if (cmd_extremal->parsed()) cfg.command = "extremal";
    if (cmd_verify->parsed()) cfg.command = "verify";
    if (cmd_sweep->parsed()) cfg.command = "sweep";
    return dispatch(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
