#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vtb/geometry.hpp"
#include "vtb/optimizer.hpp"
#include "vtb/phase.hpp"
#include "vtb/spectral.hpp"
#include "vtb/sum_rules.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  vtb::CompositePair pair;
  vtb::StepLoading loading;
  vtb::InfoSet info;
  std::vector<double> times;
  vtb::OptimizerSettings opt;
  vtb::GeometrySettings geom;
  vtb::NonReflectiveDiscretization disc;
  int kernel_directions = 32;
  int threads = 1;
  std::vector<std::pair<double, double>> measurements;
  struct Tuple {
    std::vector<double> times;
    std::vector<vtb::Point2> directions;
  };
  std::vector<Tuple> tuples;
  std::string raw;  // original text, for the provenance hash
};

vtb::PhaseModel parse_phase(const json& j) {
  const std::string model = j.at("model");
  if (model == "elastic") return vtb::PhaseModel::elastic(j.at("modulus"));
  if (model == "maxwell") return vtb::PhaseModel::maxwell(j.at("modulus"), j.at("viscosity"));
  if (model == "kelvin_voigt")
    return vtb::PhaseModel::kelvin_voigt(j.at("modulus"), j.at("viscosity"));
  throw ConfigError("unknown phase model: " + model);
}

RunConfig parse_config(const std::string& path, int threads_flag, double grid_scale) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  cfg.raw = buf.str();

  json j;
  try {
    j = json::parse(cfg.raw);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }

  try {
    const auto& prob = j.at("problem");
    const std::string side = prob.value("side", "stress");
    cfg.pair.side = side == "strain" ? vtb::Side::Strain : vtb::Side::Stress;
    if (side != "stress" && side != "strain") throw ConfigError("side must be stress|strain");
    cfg.pair.phase1 = parse_phase(prob.at("phase1"));
    cfg.pair.phase2 = parse_phase(prob.at("phase2"));
    cfg.pair.validate();
    cfg.loading.kind = cfg.pair.side == vtb::Side::Stress ? vtb::StepLoading::Kind::StrainStep
                                                          : vtb::StepLoading::Kind::StressStep;
    if (prob.contains("amplitude")) {
      const auto& a = prob.at("amplitude");
      if (a.is_number()) {
        cfg.loading.amplitude = {a.get<double>(), 0.0};
      } else {
        cfg.loading.amplitude = {a.at(0).get<double>(), a.at(1).get<double>()};
      }
    }

    if (j.contains("info")) {
      const auto& info = j.at("info");
      if (info.contains("volume_fraction"))
        cfg.info.volume_fraction = info.at("volume_fraction").get<double>();
      cfg.info.transverse_isotropy = info.value("transverse_isotropy", false);
      const std::string sym = info.value("symmetry", "reflective");
      if (sym == "nonreflective") cfg.info.symmetry = vtb::SymmetryClass::NonReflective;
      else if (sym != "reflective") throw ConfigError("symmetry must be reflective|nonreflective");
      cfg.info.fictitious_delta = info.value("fictitious_delta", 1e-6);
      cfg.info.known_value_tolerance = info.value("known_value_tolerance", 0.0);
      for (const auto& kv : info.value("known_values", json::array())) {
        vtb::KnownValue v;
        v.at_infinity = kv.value("at_infinity", false);
        if (!v.at_infinity) v.time = kv.at("time").get<double>();
        v.value = kv.at("value").get<double>();
        cfg.info.known_values.push_back(v);
      }
      cfg.info.validate();
    }

    if (j.contains("times")) {
      const auto& tj = j.at("times");
      const double start = tj.at("start"), stop = tj.at("stop");
      const int count = tj.at("count");
      const std::string spacing = tj.value("spacing", "linear");
      if (count < 1 || stop <= start) throw ConfigError("bad time grid");
      for (int i = 0; i < count; ++i) {
        const double w = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        if (spacing == "linear") {
          cfg.times.push_back(start + (stop - start) * w);
        } else if (spacing == "log") {
          if (start <= 0.0) throw ConfigError("log spacing requires start > 0");
          cfg.times.push_back(start * std::pow(stop / start, w));
        } else {
          throw ConfigError("spacing must be linear|log");
        }
      }
    }

    if (j.contains("optimizer")) {
      const auto& oj = j.at("optimizer");
      cfg.opt.grid_scale = oj.value("grid_scale", 1.0);
      cfg.threads = oj.value("threads", 1);
    }
    if (threads_flag > 0) cfg.threads = threads_flag;
    if (grid_scale > 0.0) {
      cfg.opt.grid_scale *= grid_scale;
      cfg.geom.grid_scale *= grid_scale;
    }

    if (j.contains("domain")) {
      const auto& dj = j.at("domain");
      cfg.geom.theta_count = dj.value("theta_count", 64);
      cfg.geom.alpha_count = dj.value("alpha_count", 256);
      cfg.geom.pole_grid = dj.value("pole_grid", 64);
    }
    if (j.contains("nonreflective")) {
      const auto& nj = j.at("nonreflective");
      cfg.disc.m = nj.value("m", 48);
      cfg.disc.k = nj.value("k", 12);
      cfg.disc.delta = nj.value("delta", 1e-6);
    }
    if (j.contains("kernel")) cfg.kernel_directions = j.at("kernel").value("directions", 32);
    if (j.contains("invert"))
      for (const auto& m : j.at("invert").at("measurements"))
        cfg.measurements.emplace_back(m.at(0).get<double>(), m.at(1).get<double>());
    if (j.contains("correlate"))
      for (const auto& tj : j.at("correlate").at("tuples")) {
        RunConfig::Tuple tup;
        for (const auto& t : tj.at("times")) tup.times.push_back(t.get<double>());
        for (const auto& d : tj.at("directions"))
          tup.directions.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
        if (tup.times.size() != tup.directions.size() || tup.times.empty())
          throw ConfigError("correlate tuple times/directions length mismatch");
        cfg.tuples.push_back(std::move(tup));
      }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

void write_provenance(std::ostream& out, const RunConfig& cfg) {
  const std::uint64_t h = std::hash<std::string>{}(cfg.raw);
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, static_cast<std::uint64_t>(h));
  out << "# vtb version " << kVersion << "\n";
  out << "# config-hash " << hex << "\n";
  out << "# normalization "
      << (cfg.pair.side == vtb::Side::Stress ? "stress/(G2*eps0)" : "strain/(sigma0/(2*G2))")
      << "\n";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

int cmd_bounds(const RunConfig& cfg, const std::string& out_path) {
  if (cfg.times.empty()) throw ConfigError("bounds requires a time grid");
  const auto records = vtb::sweep_bounds(cfg.pair, cfg.info, cfg.times, cfg.opt, cfg.threads);
  std::size_t nlo = 0, nup = 0;
  bool any_feasible = false;
  for (const auto& r : records) {
    nlo = std::max(nlo, r.lower_poles.size());
    nup = std::max(nup, r.upper_poles.size());
    any_feasible = any_feasible || r.feasible;
  }
  if (!any_feasible) throw InfeasibleError("bound problem infeasible at every requested time");
  auto out = open_output(out_path);
  write_provenance(out, cfg);
  out << "t,lower,upper";
  for (std::size_t i = 0; i < nlo; ++i) out << ",lower_pole_" << i;
  for (std::size_t i = 0; i < nup; ++i) out << ",upper_pole_" << i;
  out << ",gap\n";
  for (const auto& r : records) {
    if (!r.feasible) continue;
    out << fmt(r.t) << ',' << fmt(r.lower) << ',' << fmt(r.upper);
    for (std::size_t i = 0; i < nlo; ++i)
      out << ',' << (i < r.lower_poles.size() ? fmt(r.lower_poles[i]) : "");
    for (std::size_t i = 0; i < nup; ++i)
      out << ',' << (i < r.upper_poles.size() ? fmt(r.upper_poles[i]) : "");
    out << ',' << fmt(r.gap()) << '\n';
  }
  return 0;
}

int cmd_domain(const RunConfig& cfg, const std::string& out_path) {
  if (cfg.times.empty()) throw ConfigError("domain requires a time grid");
  for (std::size_t frame = 0; frame < cfg.times.size(); ++frame) {
    const double t = cfg.times[frame];
    const auto domain =
        vtb::domain_union_over_orientations(t, cfg.pair, cfg.info, cfg.loading, cfg.geom);
    std::vector<double> f1_grid;
    for (int i = 0; i <= 100; ++i) f1_grid.push_back(i / 100.0);
    const auto laminate =
        vtb::laminate_reference_curve(t, 0.0, cfg.pair, cfg.loading, f1_grid);
    std::string path = out_path;
    const auto dot = path.rfind('.');
    const std::string suffix = "_frame" + std::to_string(frame);
    if (dot == std::string::npos) path += suffix;
    else path.insert(dot, suffix);
    auto out = open_output(path);
    write_provenance(out, cfg);
    out << "# t " << fmt(t) << "\n";
    out << "kind,theta,vertex_index,x,y\n";
    for (std::size_t k = 0; k < domain.polygons.size(); ++k)
      for (std::size_t v = 0; v < domain.polygons[k].vertices.size(); ++v)
        out << "hull," << fmt(domain.thetas[k]) << ',' << v << ','
            << fmt(domain.polygons[k].vertices[v][0]) << ','
            << fmt(domain.polygons[k].vertices[v][1]) << '\n';
    for (std::size_t v = 0; v < laminate.size(); ++v)
      out << "laminate,0," << v << ',' << fmt(laminate[v][0]) << ',' << fmt(laminate[v][1])
          << '\n';
  }
  return 0;
}

int cmd_kernel(const RunConfig& cfg, const std::string& out_path) {
  if (cfg.times.empty()) throw ConfigError("kernel requires a time grid");
  const int n = cfg.kernel_directions;
  if (n < 2) throw ConfigError("kernel needs at least 2 directions");
  std::vector<std::array<double, 4>> fan;
  for (int i = 0; i < n / 2; ++i) {
    const double psi = 2.0 * std::numbers::pi * i / (n / 2);
    fan.push_back({std::cos(psi), 0.0, 0.0, std::sin(psi)});
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < n - n / 2; ++i) {
    const double psi = 2.0 * std::numbers::pi * i / (n - n / 2);
    const double d = std::cos(psi) * inv_sqrt2;
    const double c = std::sin(psi) * inv_sqrt2;
    fan.push_back({d, c, c, d});
  }
  auto out = open_output(out_path);
  write_provenance(out, cfg);
  out << "t,v_index,v11,v12,v22,support\n";
  std::vector<std::vector<double>> supports(cfg.times.size());
  for (std::size_t it = 0; it < cfg.times.size(); ++it)
    for (std::size_t iv = 0; iv < fan.size(); ++iv) {
      const double s = vtb::kernel_support(fan[iv], cfg.times[it], cfg.pair, cfg.info, cfg.geom);
      supports[it].push_back(s);
      out << fmt(cfg.times[it]) << ',' << iv << ',' << fmt(fan[iv][0]) << ',' << fmt(fan[iv][1])
          << ',' << fmt(fan[iv][3]) << ',' << fmt(s) << '\n';
    }
  // superadditivity spot check on the first time: F(V_i + V_j) >= F(V_i) + F(V_j)
  bool superadditive = true;
  for (std::size_t i = 0; i + 1 < fan.size() && superadditive; i += 2) {
    const std::array<double, 4> sum{fan[i][0] + fan[i + 1][0], fan[i][1] + fan[i + 1][1],
                                    fan[i][2] + fan[i + 1][2], fan[i][3] + fan[i + 1][3]};
    const double joint = vtb::kernel_support(sum, cfg.times[0], cfg.pair, cfg.info, cfg.geom);
    if (joint < supports[0][i] + supports[0][i + 1] - 1e-9) superadditive = false;
  }
  out << "# superadditivity_check " << (superadditive ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_invert(const RunConfig& cfg, const std::string& out_path) {
  if (cfg.measurements.empty()) throw ConfigError("invert requires measurements");
  vtb::InfoSet base = cfg.info;
  base.volume_fraction.reset();
  base.known_values.clear();
  const auto interval =
      vtb::invert_volume_fraction(cfg.measurements, cfg.pair, base, cfg.opt);
  auto out = open_output(out_path);
  write_provenance(out, cfg);
  out << "consistent,empty,f1_lo,f1_hi\n";
  out << (interval.consistent ? 1 : 0) << ',' << (interval.empty ? 1 : 0) << ','
      << (interval.empty ? "" : fmt(interval.lo)) << ','
      << (interval.empty ? "" : fmt(interval.hi)) << '\n';
  if (!interval.consistent)
    std::cerr << "warning: measurements violate the no-information envelope\n";
  else if (interval.empty)
    std::cerr << "warning: no volume fraction is consistent with all measurements\n";
  return 0;
}

int cmd_correlate(const RunConfig& cfg, const std::string& out_path) {
  if (cfg.tuples.empty()) throw ConfigError("correlate requires at least one tuple");
  auto out = open_output(out_path);
  write_provenance(out, cfg);
  out << "tuple_id,n,support,marginal_sum\n";
  for (std::size_t id = 0; id < cfg.tuples.size(); ++id) {
    const auto& tup = cfg.tuples[id];
    vtb::CorrelateQuery q;
    q.times = tup.times;
    q.directions = tup.directions;
    q.loadings.assign(tup.times.size(), cfg.loading);
    const double joint = vtb::correlate_support(q, cfg.pair, cfg.info, cfg.disc);
    double marginal = 0.0;
    for (std::size_t j = 0; j < tup.times.size(); ++j)
      marginal += vtb::directional_support(tup.directions[j], tup.times[j], cfg.pair, cfg.info,
                                           cfg.loading, cfg.disc);
    out << id << ',' << tup.times.size() << ',' << fmt(joint) << ',' << fmt(marginal) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transient response bounds for two-phase antiplane composites"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global options after the subcommand name

  std::string config_path, out_path = "out.csv";
  int threads = 0;
  double grid_scale = 0.0;
  app.add_option("--config", config_path, "path to the JSON run configuration")->required();
  app.add_option("--out", out_path, "output file path");
  app.add_option("--threads", threads, "worker threads for per-time sweeps");
  app.add_option("--grid-scale", grid_scale, "multiplier on all discretization defaults");

  auto* bounds = app.add_subcommand("bounds", "per-time lower/upper bound sweep (CSV)");
  auto* domain = app.add_subcommand("domain", "per-time attainable response domains (CSV frames)");
  auto* kern = app.add_subcommand("kernel", "support-function bounds on the homogenized kernel");
  auto* invert = app.add_subcommand("invert", "volume-fraction interval from measurements");
  auto* correlate = app.add_subcommand("correlate", "correlated multi-time support values");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = parse_config(config_path, threads, grid_scale);
    if (bounds->parsed()) return cmd_bounds(cfg, out_path);
    if (domain->parsed()) return cmd_domain(cfg, out_path);
    if (kern->parsed()) return cmd_kernel(cfg, out_path);
    if (invert->parsed()) return cmd_invert(cfg, out_path);
    if (correlate->parsed()) return cmd_correlate(cfg, out_path);
    std::cerr << "error: no subcommand selected\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
