#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "relgeo/cli.hpp"
#include "relgeo/curve.hpp"
#include "relgeo/discrete.hpp"
#include "relgeo/errors.hpp"
#include "relgeo/morph.hpp"
#include "relgeo/shooting.hpp"

namespace relgeo::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string c0 = "circle";
  std::string c1 = "eight";
  std::size_t n = 100;
  double m = 2.0;
  std::size_t grid = 128;
  double tol = 1e-10;
  double guess = 0.0;
  bool guess_set = false;
  std::size_t frames = 5;
  std::string out;
  std::string format;
  bool no_rotate = false;
  bool no_normalize = false;
  std::vector<std::size_t> ns{10, 100, 1000, 10000};
  std::vector<int> ps;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

void validate(const RunConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (!(cfg.m > 0.0) || !std::isfinite(cfg.m)) bad("--m must be positive");
  if (cfg.n < 1) bad("--N must be at least 1");
  if (cfg.grid < 2) bad("--grid must be at least 2");
  if (!(cfg.tol > 0.0)) bad("--tol must be positive");
  if (cfg.frames < 2) bad("--frames must be at least 2");
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv") bad("--format must be json or csv");
  if (cfg.ns.empty()) bad("--Ns needs at least one value");
  for (std::size_t n : cfg.ns) {
    if (n < 1) bad("--Ns entries must be at least 1");
  }
  for (int p : cfg.ps) {
    if (p < 1) bad("--p entries must be at least 1");
  }
}

DiscreteCurve load_source(const std::string& src, std::size_t n) {
  if (src.rfind("csv:", 0) == 0) return load_csv(src.substr(4));
  return sample(parse_curve_spec(src), n);
}

bool is_constant(const DiscreteCurve& c) {
  return std::all_of(c.points().begin(), c.points().end(), [&](const Vec2& p) { return p == c[0]; });
}

DiscreteCurve prepare_curve(const DiscreteCurve& c, const RunConfig& cfg) {
  if (cfg.no_normalize) return c;
  // A single repeated point has no tangent; translating it is all normalization can do.
  const NormalizeMode mode =
      cfg.no_rotate || is_constant(c) ? NormalizeMode::kTranslateOnly : NormalizeMode::kRotate;
  return normalize(c, mode).first;
}

struct Problem {
  DiscreteCurve c0;
  DiscreteCurve c1;
  Metric metric;
  DiscrepancyOptions options;
};

Problem make_problem(const DiscreteCurve& raw0, const DiscreteCurve& raw1, const RunConfig& cfg) {
  DiscreteCurve c0 = prepare_curve(raw0, cfg);
  DiscreteCurve c1 = prepare_curve(raw1, cfg);
  require_same_length(c0, c1);
  DiscrepancyOptions opt;
  opt.grid = cfg.grid;
  opt.newton.tol = cfg.tol;
  opt.newton.integrate.start = cfg.no_normalize ? StartCondition::kGeneral : StartCondition::kOrigin;
  return {std::move(c0), std::move(c1), Metric(cfg.m), opt};
}

Problem make_problem(const RunConfig& cfg) {
  return make_problem(load_source(cfg.c0, cfg.n), load_source(cfg.c1, cfg.n), cfg);
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot write '{}'", path));
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

json candidates_json(const DiscrepancyResult& r) {
  json arr = json::array();
  for (const auto& c : r.candidates) {
    arr.push_back({{"theta0", c.theta0},
                   {"energy", c.energy},
                   {"terminal_residual", c.terminal_residual},
                   {"converged", c.converged}});
  }
  return arr;
}

int cmd_discrepancy(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = make_problem(cfg);
  const DiscrepancyResult r = discrepancy(pb.c0, pb.c1, pb.metric, pb.options);
  Sink sink(cfg.out, out);
  if (cfg.format == "csv") {
    sink.os() << "theta0,energy,terminal_residual,converged\n";
    for (const auto& c : r.candidates) {
      sink.os() << num(c.theta0) << ',' << num(c.energy) << ',' << num(c.terminal_residual) << ','
                << (c.converged ? 1 : 0) << '\n';
    }
    return kExitOk;
  }
  json j{{"discrepancy", r.discrepancy},
         {"theta0_min", r.theta0_min},
         {"family", r.family},
         {"N", pb.c0.intervals()},
         {"m", cfg.m},
         {"candidates", candidates_json(r)}};
  sink.os() << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = make_problem(cfg);
  const auto scan = scan_theta0(pb.c0, pb.c1, pb.metric, cfg.grid, pb.options.newton.integrate);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& p : scan) {
      json row{{"theta0", p.theta0}, {"ok", p.ok}};
      if (p.ok) {
        row["energy"] = p.energy;
        row["terminal_residual"] = p.terminal_residual;
      } else {
        row["error"] = p.error;
      }
      arr.push_back(row);
    }
    sink.os() << arr.dump(2) << '\n';
    return kExitOk;
  }
  sink.os() << "theta0,energy,terminal_residual\n";
  for (const auto& p : scan) {
    if (p.ok) {
      sink.os() << num(p.theta0) << ',' << num(p.energy) << ',' << num(p.terminal_residual) << '\n';
    } else {
      sink.os() << num(p.theta0) << ",nan,nan\n";
    }
  }
  return kExitOk;
}

NewtonResult solve_geodesic(const Problem& pb, const RunConfig& cfg) {
  if (cfg.guess_set) return newton_solve(pb.c0, pb.c1, pb.metric, cfg.guess, pb.options.newton);
  const DiscrepancyResult r = discrepancy(pb.c0, pb.c1, pb.metric, pb.options);
  return newton_solve(pb.c0, pb.c1, pb.metric, r.theta0_min, pb.options.newton);
}

int cmd_geodesic(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = make_problem(cfg);
  const double guess = cfg.guess_set ? cfg.guess : 0.0;
  const NewtonResult nr = newton_solve(pb.c0, pb.c1, pb.metric, guess, pb.options.newton);
  const GeodesicPath& path = nr.path;
  const std::size_t n = path.intervals();
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json rows = json::array();
    for (std::size_t k = 0; k <= n; ++k) {
      json row{{"k", k}, {"theta", path.theta[k]}, {"x", {path.x[k].x, path.x[k].y}}};
      if (k < n) {
        row["omega"] = path.omega[k];
        row["v"] = {path.v[k].x, path.v[k].y};
      }
      rows.push_back(row);
    }
    json j{{"theta0", nr.theta0},
           {"energy", path.energy},
           {"terminal_residual", nr.residual},
           {"iterations", nr.iterations},
           {"path", rows}};
    sink.os() << j.dump(2) << '\n';
    return kExitOk;
  }
  sink.os() << "k,theta,x1,x2,omega,v1,v2\n";
  for (std::size_t k = 0; k <= n; ++k) {
    sink.os() << k << ',' << num(path.theta[k]) << ',' << num(path.x[k].x) << ',' << num(path.x[k].y);
    if (k < n) {
      sink.os() << ',' << num(path.omega[k]) << ',' << num(path.v[k].x) << ',' << num(path.v[k].y) << '\n';
    } else {
      sink.os() << ",,,\n";
    }
  }
  return kExitOk;
}

// Order from three successive values on a geometric N ladder.
double order_estimate(double a, double b, double c, double ratio) {
  return std::log(std::abs(b - a) / std::abs(c - b)) / std::log(ratio);
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  struct Row {
    std::size_t n;
    double delta;
    double theta0;
  };
  std::vector<Row> rows;
  for (std::size_t n : cfg.ns) {
    const Problem pb = make_problem(load_source(cfg.c0, n), load_source(cfg.c1, n), cfg);
    const DiscrepancyResult r = discrepancy(pb.c0, pb.c1, pb.metric, pb.options);
    rows.push_back({n, r.discrepancy, r.theta0_min});
  }
  std::vector<double> orders(rows.size(), std::nan(""));
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double ratio = static_cast<double>(rows[i].n) / static_cast<double>(rows[i - 1].n);
    orders[i] = order_estimate(rows[i - 2].delta, rows[i - 1].delta, rows[i].delta, ratio);
  }
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json row{{"N", rows[i].n}, {"discrepancy", rows[i].delta}, {"theta0_min", rows[i].theta0}};
      if (std::isfinite(orders[i])) row["order"] = orders[i];
      arr.push_back(row);
    }
    json j{{"rows", arr}};
    if (rows.size() >= 3) j["order"] = orders.back();
    sink.os() << j.dump(2) << '\n';
    return kExitOk;
  }
  sink.os() << "N,discrepancy,theta0_min,order\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sink.os() << rows[i].n << ',' << num(rows[i].delta) << ',' << num(rows[i].theta0) << ','
              << (std::isfinite(orders[i]) ? num(orders[i]) : std::string()) << '\n';
  }
  return kExitOk;
}

int cmd_polystudy(const RunConfig& cfg, std::ostream& out) {
  std::vector<int> ps = cfg.ps;
  if (ps.empty()) {
    for (int p = 1; p <= 25; ++p) ps.push_back(p);
  }
  const DiscreteCurve base = sample(CurveSpec::segment({1.0, 0.0}), cfg.n);
  struct Row {
    int p;
    double delta;
    double kappa;
  };
  std::vector<Row> rows;
  for (int p : ps) {
    const DiscreteCurve cp = sample_polynomial_arclength(p, cfg.n);
    const Problem pb = make_problem(base, cp, cfg);
    const DiscrepancyResult r = discrepancy(pb.c0, pb.c1, pb.metric, pb.options);
    rows.push_back({p, r.discrepancy, total_absolute_curvature(cp)});
  }
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"p", r.p}, {"discrepancy", r.delta}, {"kappa", r.kappa}});
    sink.os() << arr.dump(2) << '\n';
    return kExitOk;
  }
  sink.os() << "p,discrepancy,kappa\n";
  for (const auto& r : rows) sink.os() << r.p << ',' << num(r.delta) << ',' << num(r.kappa) << '\n';
  return kExitOk;
}

int cmd_morph(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = make_problem(cfg);
  const NewtonResult nr = solve_geodesic(pb, cfg);
  const auto frames = morph(nr.path, pb.c0, cfg.frames);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& f : frames) {
      json pts = json::array();
      for (const Vec2& p : f.curve.points()) pts.push_back({p.x, p.y});
      arr.push_back({{"epsilon", f.epsilon}, {"points", pts}});
    }
    Sink sink(cfg.out, out);
    sink.os() << arr.dump(2) << '\n';
    return kExitOk;
  }
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path("morph") : std::filesystem::path(cfg.out);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto file = dir / fmt::format("frame_{:03d}.csv", i);
    save_csv(frames[i].curve, file);
    out << file.string() << '\n';
  }
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kUnsupportedSpec:
    case ErrorKind::kDegenerateTangent:
    case ErrorKind::kParseError:
    case ErrorKind::kTooFewPoints:
    case ErrorKind::kNotNormalized:
    case ErrorKind::kPreconditionViolated:
      return kExitInput;
    case ErrorKind::kLogUndefined:
      return kExitLog;
    default:
      return kExitSolver;
  }
}

void add_common(CLI::App* sub, RunConfig& cfg, bool curves = true) {
  if (curves) {
    sub->add_option("--c0", cfg.c0, "source curve: spec or csv:PATH")->capture_default_str();
    sub->add_option("--c1", cfg.c1, "target curve: spec or csv:PATH")->capture_default_str();
  }
  sub->add_option("--N", cfg.n, "intervals per curve when sampling specs")->capture_default_str();
  sub->add_option("--m", cfg.m, "rotational weight of the metric")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "theta0 scan resolution")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "terminal residual tolerance")->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (morph: directory)");
  sub->add_option("--format", cfg.format, "json or csv");
  sub->add_flag("--no-rotate", cfg.no_rotate, "normalize by translation only");
  sub->add_flag("--no-normalize", cfg.no_normalize, "use curves as given");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Relative geodesics in SE(2) between discrete planar curves"};
  app.name(args.empty() ? "relgeo" : args.front());
  app.require_subcommand(1);

  auto* disc = app.add_subcommand("discrepancy", "minimal deformation energy over theta0");
  add_common(disc, cfg);
  auto* scan = app.add_subcommand("scan", "energy and terminal residual on a theta0 grid");
  add_common(scan, cfg);
  auto* geo = app.add_subcommand("geodesic", "Newton shooting from a guess, per-node output");
  add_common(geo, cfg);
  geo->add_option("--guess", cfg.guess, "initial theta0")->capture_default_str();
  auto* conv = app.add_subcommand("convergence", "discrepancy over a ladder of N");
  add_common(conv, cfg);
  conv->add_option("--Ns", cfg.ns, "list of N values")->delimiter(',')->capture_default_str();
  auto* poly = app.add_subcommand("polystudy", "segment versus y = x^p, arclength sampled");
  add_common(poly, cfg, false);
  poly->add_option("--p", cfg.ps, "list of exponents (default 1..25)")->delimiter(',');
  auto* mor = app.add_subcommand("morph", "intermediate curves along the optimal geodesic");
  add_common(mor, cfg);
  mor->add_option("--frames", cfg.frames, "number of frames")->capture_default_str();
  mor->add_option("--guess", cfg.guess, "initial theta0 (default: global minimum)");
  poly->callback([&] { cfg.n = poly->count("--N") > 0 ? cfg.n : 1000; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitInput;
  }
  cfg.guess_set = geo->count("--guess") > 0 || mor->count("--guess") > 0;

  try {
    validate(cfg);
    if (*disc) return cmd_discrepancy(cfg, out);
    if (*scan) return cmd_scan(cfg, out);
    if (*geo) return cmd_geodesic(cfg, out);
    if (*conv) return cmd_convergence(cfg, out);
    if (*poly) return cmd_polystudy(cfg, out);
    if (*mor) return cmd_morph(cfg, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace relgeo::cli
