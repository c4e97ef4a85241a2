#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lcqft/cli_io.hpp"
#include "lcqft/errors.hpp"

namespace lcqft::cli {

using nlohmann::ordered_json;

namespace {

ordered_json parse_json(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

cones::Vec4 vec4(const ordered_json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidArgument, "expected an array of 4 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

ordered_json array(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void apply_profile(lattice::LatticeSpacetime& l, const ordered_json& j) {
  const double beta = j.value("beta", 1.0), h = j.value("h", 1.0);
  std::fill(l.beta.begin(), l.beta.end(), beta);
  std::fill(l.h.begin(), l.h.end(), h);
  for (const auto& b : j.value("bumps", ordered_json::array())) {
    const std::string field = b.value("field", "h");
    if (field != "h" && field != "beta") throw Error(ErrorCode::InvalidArgument, "bump field must be h or beta");
    auto& target = field == "h" ? l.h : l.beta;
    const double row = b.at("row").get<double>(), col = b.at("col").get<double>();
    const double radius = b.at("radius").get<double>(), amp = b.at("amplitude").get<double>();
    for (int i = 0; i < l.nt; ++i)
      for (int k = 0; k < l.nx; ++k) {
        const double r2 = ((i - row) * (i - row) + (k - col) * (k - col)) / (radius * radius);
        if (r2 < 1.0) target[static_cast<std::size_t>(l.index(i, k))] += amp * std::exp(1.0 - 1.0 / (1.0 - r2));
      }
  }
}

lattice::Region region(const lattice::LatticeSpacetime& l, const ordered_json& j) {
  if (j.is_null()) return lattice::Region::like(l);
  const auto rows = j.at("rows"), cols = j.at("cols");
  const int i0 = rows.at(0).get<int>(), i1 = rows.at(1).get<int>();
  const int j0 = cols.at(0).get<int>(), j1 = cols.at(1).get<int>();
  if (i0 < 0 || j0 < 0 || i1 >= l.nt || j1 >= l.nx || i0 > i1 || j0 > j1)
    throw Error(ErrorCode::InvalidArgument, "box outside the grid");
  return lattice::Region::box(l, i0, i1, j0, j1);
}

ordered_json box_json(const lattice::Region& r) {
  if (r.empty()) return nullptr;
  int j0 = r.nx, j1 = -1;
  for (const auto& [i, k] : r.points()) {
    j0 = std::min(j0, k);
    j1 = std::max(j1, k);
  }
  return {{"rows", {r.min_row(), r.max_row()}}, {"cols", {j0, j1}}, {"cells", r.count()}};
}

}  // namespace

cones::CovectorConfig parse_cone_input(const std::string& text) {
  const auto j = parse_json(text, "cone input");
  try {
    const ordered_json& pts = j.is_array() ? j : j.at("points");
    const std::string order = j.is_object() ? j.value("order", "vertex") : "vertex";
    if (order != "vertex" && order != "slot") throw Error(ErrorCode::InvalidArgument, "order must be vertex or slot");
    std::vector<cones::Vec4> x, xi;
    for (const auto& p : pts) {
      x.push_back(vec4(p.at("x")));
      xi.push_back(vec4(p.at("xi")));
    }
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "no points");
    if (order == "slot") return cones::CovectorConfig::from_slots(x, xi);
    cones::CovectorConfig cfg;
    cfg.x = x;
    cfg.xi = xi;
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("cone input: ") + e.what());
  }
}

std::string cone_verdict_json(const cones::CovectorConfig& cfg, const cones::ConeVerdict& v) {
  ordered_json out;
  out["n"] = cfg.size();
  out["member"] = v.member;
  out["residual"] = v.residual;
  out["infeasibility_margin"] = v.infeasibility_margin;
  ordered_json cert = ordered_json::array();
  for (const auto& e : v.certificate) cert.push_back({{"i", e.i + 1}, {"j", e.j + 1}, {"p", array(e.p)}});
  out["certificate"] = cert;
  return out.dump(2) + "\n";
}

std::string wf_scan_json(const std::string& distribution, const cones::Vec2& x,
                         const std::vector<cones::DirectionVerdict>& scan) {
  ordered_json out;
  out["distribution"] = distribution;
  out["point"] = array(x);
  ordered_json dirs = ordered_json::array();
  for (std::size_t k = 0; k < scan.size(); ++k) {
    ordered_json d;
    d["index"] = k;
    d["direction"] = array(scan[k].direction);
    d["slope"] = std::isfinite(scan[k].slope) ? ordered_json(scan[k].slope) : ordered_json("-inf");
    d["singular"] = scan[k].singular;
    dirs.push_back(d);
  }
  out["directions"] = dirs;
  return out.dump(2) + "\n";
}

ScenarioFile parse_scenario(const std::string& text) {
  const auto j = parse_json(text, "scenario");
  ScenarioFile s;
  try {
    s.max_halvings = j.value("max_halvings", 20);
    if (j.contains("standard")) {
      s.scenario = lattice::standard_scenario(j.at("standard").get<int>());
      return s;
    }
    const auto& g = j.at("grid");
    const int nt = g.at("nt").get<int>(), nx = g.at("nx").get<int>();
    const double dt = g.value("dt", 1.0), dx = g.value("dx", 1.0);
    auto& spec = s.scenario.spec;
    spec.g1 = lattice::LatticeSpacetime::flat(nt, nx, dt, dx);
    spec.g2 = spec.g1;
    apply_profile(spec.g1, j.value("g1", ordered_json::object()));
    apply_profile(spec.g2, j.value("g2", ordered_json::object()));
    spec.slab_lo = j.at("slab").at(0).get<int>();
    spec.slab_hi = j.at("slab").at(1).get<int>();
    spec.beta_scale = j.value("beta_scale", 1.0);
    s.scenario.K1 = region(spec.g1, j.at("K1"));
    s.scenario.K2 = region(spec.g1, j.at("K2"));
    spec.g1.validate();
    spec.g2.validate();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("scenario: ") + e.what());
  }
  return s;
}

std::string deformation_certificate_json(const ScenarioFile& s, const lattice::DeformationResult& r) {
  const auto& spec = s.scenario.spec;
  ordered_json out;
  out["certified"] = r.certified;
  out["beta_scale"] = r.beta_scale;
  out["halvings"] = r.halvings;
  out["max_halvings"] = s.max_halvings;
  out["modes"] = {"inner", "outer"};
  out["grid"] = {{"nt", spec.g1.nt}, {"nx", spec.g1.nx}, {"dt", spec.g1.dt}, {"dx", spec.g1.dx}};
  out["slab"] = {spec.slab_lo, spec.slab_hi};
  out["K1"] = box_json(s.scenario.K1);
  out["K2"] = box_json(s.scenario.K2);
  return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  f << body;
}

}  // namespace lcqft::cli
