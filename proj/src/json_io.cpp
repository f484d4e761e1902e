#include "ccv/json_io.hpp"

#include <sstream>

namespace ccv {

using detail::FieldNode;

json encode_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_number(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("unexpected numeric string: " + s);
  }
  return j.get<double>();
}

json to_json(const Manifold& M) {
  json j;
  j["kind"] = M.name();
  switch (M.kind) {
    case ManifoldKind::Sphere:
      j["radius"] = M.radius;
      break;
    case ManifoldKind::FlatTorus:
      j["period"] = M.period;
      break;
    case ManifoldKind::Euclidean:
      j["dim"] = M.dim;
      j["box_min"] = {M.box_min[0], M.box_min[1], M.box_min[2]};
      j["box_max"] = {M.box_max[0], M.box_max[1], M.box_max[2]};
      break;
  }
  return j;
}

Manifold manifold_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "sphere") return Manifold::sphere(j.value("radius", 1.0));
  if (kind == "flat_torus") return Manifold::flat_torus(j.value("period", 1.0));
  if (kind == "euclidean") {
    int dim = j.value("dim", 2);
    Vec3 lo = Vec3::Zero(), hi = Vec3::Ones();
    if (j.contains("box_min"))
      for (int k = 0; k < 3; ++k) lo[k] = j["box_min"].at(k).get<double>();
    if (j.contains("box_max"))
      for (int k = 0; k < 3; ++k) hi[k] = j["box_max"].at(k).get<double>();
    return Manifold::euclidean(dim, lo, hi);
  }
  throw std::invalid_argument("unknown manifold kind: " + kind);
}

json to_json(const Point& p) { return json::array({p.x[0], p.x[1], p.x[2]}); }

Point point_from_json(const json& j) {
  return Point(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json to_json(const ScalarField& f) {
  const FieldNode& n = f.node();
  json j;
  switch (n.kind) {
    case FieldNode::Kind::Constant:
      j["type"] = "constant";
      j["value"] = n.value;
      break;
    case FieldNode::Kind::DistSqPotential:
      j["type"] = "dist_sq_potential";
      j["center"] = to_json(n.center);
      j["ramp"] = {{"t0", n.ramp.t0}, {"t1", n.ramp.t1}};
      break;
    case FieldNode::Kind::AmbientLinear:
      j["type"] = "ambient_linear";
      j["vector"] = {n.ambient[0], n.ambient[1], n.ambient[2]};
      break;
    case FieldNode::Kind::NormalCoordLinear:
      j["type"] = "normal_coord_linear";
      j["center"] = to_json(n.center);
      j["coeff"] = n.coeff;
      j["cut_in"] = n.cutoff.r_in;
      j["cut_out"] = n.cutoff.r_out;
      break;
    case FieldNode::Kind::NormalCoordCubic:
      j["type"] = "normal_coord_cubic";
      j["center"] = to_json(n.center);
      j["coeff"] = n.coeff;
      j["cut_in"] = n.cutoff.r_in;
      j["cut_out"] = n.cutoff.r_out;
      break;
    case FieldNode::Kind::Sum: {
      j["type"] = "sum";
      json terms = json::array();
      for (const auto& [coeff, part] : n.terms)
        terms.push_back({{"coeff", coeff}, {"field", to_json(part)}});
      j["terms"] = std::move(terms);
      break;
    }
  }
  return j;
}

ScalarField field_from_json(const Manifold& M, const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "constant") return ScalarField::constant(M, j.value("value", 0.0));
  if (type == "dist_sq_potential") {
    RampProfile ramp(j.at("ramp").at("t0").get<double>(),
                     j.at("ramp").at("t1").get<double>());
    return ScalarField::dist_sq_potential(M, point_from_json(j.at("center")), ramp);
  }
  if (type == "ambient_linear") {
    const json& v = j.at("vector");
    return ScalarField::ambient_linear(
        M, Vec3(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()));
  }
  if (type == "normal_coord_linear" || type == "normal_coord_cubic") {
    RadialCutoff cut{j.at("cut_in").get<double>(), j.at("cut_out").get<double>()};
    Point center = point_from_json(j.at("center"));
    double coeff = j.at("coeff").get<double>();
    return type == "normal_coord_linear"
               ? ScalarField::normal_coord_linear(M, center, coeff, cut)
               : ScalarField::normal_coord_cubic(M, center, coeff, cut);
  }
  if (type == "sum") {
    std::vector<std::pair<double, ScalarField>> terms;
    for (const json& t : j.at("terms"))
      terms.emplace_back(t.at("coeff").get<double>(),
                         field_from_json(M, t.at("field")));
    return ScalarField::sum(M, std::move(terms));
  }
  throw std::invalid_argument("unknown field type: " + type);
}

json to_json(const ComparisonReport& r) {
  json j;
  j["check"] = r.name;
  j["samples"] = r.samples;
  j["min_margin"] = encode_number(r.min_margin);
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["worst"] = r.worst;
  for (const auto& [k, v] : r.stats) j["stats"][k] = encode_number(v);
  return j;
}

json to_json(const Certificate& c) {
  json j;
  j["K"] = c.K;
  j["inj"] = encode_number(c.inj);
  j["diam"] = c.diam;
  j["grad_bound"] = c.grad_bound;
  j["delta"] = c.delta;
  j["delta_budget"] = encode_number(c.delta_budget);
  j["hess_margin"] = c.hess_margin;
  j["hess_threshold"] = c.hess_threshold;
  j["verdict"] = c.verdict_name();
  if (!std::isnan(c.epsilon)) j["epsilon"] = c.epsilon;
  j["tol"] = c.tol;
  j["grid_seed"] = c.grid_seed;
  j["grid_n"] = c.grid_n;
  return j;
}

json to_json(const ViolationWitness& w) {
  return json{{"x", to_json(w.x)},
              {"x_star", to_json(w.x_star)},
              {"y", to_json(w.y)},
              {"violation", w.violation}};
}

json to_json(const CconcavityResult& r) {
  json j;
  j["pass"] = r.pass;
  j["worst_violation"] = encode_number(r.worst_violation);
  j["threshold"] = r.threshold;
  j["x_checked"] = r.x_checked;
  j["smallness"] = r.smallness;
  j["smallness_budget"] = encode_number(r.smallness_budget);
  j["small_oscillation_regime"] = r.small_oscillation_regime;
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

json to_json(const ThreeClaimsReport& r) {
  json j;
  j["delta"] = r.delta;
  j["claim1_margin"] = encode_number(r.claim1_margin);
  j["claim2_error"] = r.claim2_error;
  j["claim3_margin"] = encode_number(r.claim3_margin);
  j["pass1"] = r.pass1;
  j["pass2"] = r.pass2;
  j["pass3"] = r.pass3;
  j["pass"] = r.pass();
  return j;
}

json to_json(const CounterexampleReport& r) {
  json j;
  j["hessian_bound_ok"] = r.hessian_bound_ok;
  j["hessian_scan_min"] = r.hessian_scan_min;
  j["violation_found"] = r.violation_found;
  j["violation"] = encode_number(r.violation);
  if (r.witness) j["witness"] = to_json(*r.witness);
  j["witness_dist_north"] = r.witness_dist_north;
  j["witness_local"] = r.witness_local;
  j["mechanism_ok"] = r.mechanism_ok;
  j["mechanism_eig"] = r.mechanism_eig;
  j["mechanism_expected"] = r.mechanism_expected;
  j["r_star"] = r.r_star;
  j["smallness"] = r.smallness;
  j["small_oscillation_regime"] = r.small_oscillation_regime;
  j["pass"] = r.pass();
  return j;
}

json to_json(const MonotonicityReport& r) {
  return json{{"trials", r.trials},
              {"min_slack", encode_number(r.min_slack)},
              {"worst", r.worst},
              {"pass", r.pass}};
}

json to_json(const OptimalityReport& r) {
  return json{{"n", r.n},           {"paired_cost", r.paired_cost},
              {"optimal_cost", r.optimal_cost}, {"gap", r.gap},
              {"certified", r.certified},       {"pass", r.pass}};
}

std::string cloud_to_csv(const PointCloud& cloud) {
  std::ostringstream os;
  os.precision(17);
  os << "# manifold " << to_json(cloud.manifold).dump() << "\n";
  os << "x,y,z,weight\n";
  double uniform = cloud.size() ? 1.0 / double(cloud.size()) : 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i].x;
    double w = cloud.weights.empty() ? uniform : cloud.weights[i];
    os << p[0] << "," << p[1] << "," << p[2] << "," << w << "\n";
  }
  return os.str();
}

PointCloud cloud_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# manifold ", 0) != 0)
    throw std::invalid_argument("cloud CSV must start with '# manifold <json>'");
  PointCloud cloud;
  cloud.manifold = manifold_from_json(json::parse(line.substr(11)));
  std::getline(is, line);  // column header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double v[4] = {0, 0, 0, 0};
    char comma;
    ls >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
    cloud.points.push_back(project(cloud.manifold, Point(v[0], v[1], v[2])));
    cloud.weights.push_back(v[3]);
  }
  double total = 0.0;
  for (double w : cloud.weights) total += w;
  if (cloud.size() && std::abs(total - 1.0) > 1e-12)
    for (double& w : cloud.weights) w /= total;
  return cloud;
}

}  // namespace ccv
