#include "stkin/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <random>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "stkin/observers.hpp"

namespace stkin::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config error: " + msg); }

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

template <std::size_t N>
std::array<double, N> as_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) {
    fail(where + " must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_number(j[i], where);
  return out;
}

std::map<std::string, double> catalog_defaults(const std::string& name) {
  if (name == "constant") return {{"wx", 0.0}, {"wy", 0.0}, {"wz", 0.0}};
  if (name == "rigid_rotation") return {{"omega0", 1.0}};
  if (name == "simple_shear") return {{"kappa", 1.0}};
  if (name == "time_ramped_shear") return {{"a", 1.0}};
  if (name == "planar_vortex") return {{"omega0", 1.0}, {"ell", 1.0}};
  if (name == "uniform_expansion") return {{"alpha", 1.0}};
  fail("unknown catalog field '" + name + "'");
}

struct KindInfo {
  int components = 0;       // stored components of the field itself
  bool space = false;       // spacelike variant
  bool tensor = false;
  bool scalar = false;
  bool covector = false;    // covector-valued (vs vector-valued)
  Variance variance = Variance::mixed;
};

KindInfo kind_info(const std::string& kind) {
  KindInfo k;
  if (kind == "scalar") {
    k.components = 1;
    k.scalar = true;
  } else if (kind == "four_vector") {
    k.components = 4;
  } else if (kind == "space_vector") {
    k.components = 3;
    k.space = true;
  } else if (kind == "four_covector") {
    k.components = 4;
    k.covector = true;
  } else if (kind == "space_covector") {
    k.components = 3;
    k.space = true;
    k.covector = true;
  } else if (kind == "con_tensor" || kind == "cov_tensor" || kind == "mixed_tensor") {
    k.components = 16;
    k.tensor = true;
    k.variance = kind == "con_tensor"   ? Variance::contravariant
                 : kind == "cov_tensor" ? Variance::covariant
                                        : Variance::mixed;
  } else if (kind == "space_con_tensor" || kind == "space_cov_tensor" ||
             kind == "space_mixed_tensor") {
    k.components = 9;
    k.tensor = true;
    k.space = true;
    k.variance = kind == "space_con_tensor"   ? Variance::contravariant
                 : kind == "space_cov_tensor" ? Variance::covariant
                                              : Variance::mixed;
  } else {
    fail("unknown test_field kind '" + kind + "'");
  }
  return k;
}

/// The concrete test field of a scenario, with the covector twin of a
/// spacelike vector kept alongside for the Jaumann comparison.
struct MaterializedField {
  KindInfo info;
  std::optional<ScalarField> scalar;
  std::optional<VectorField> vector;
  std::optional<CovectorField> covector;
  std::optional<Tensor2Field> tensor;
  std::optional<CovectorField> vector_flat;
};

std::vector<Poly4> polys_from_spec(const TestFieldSpec& spec) {
  std::vector<Poly4> polys;
  for (std::size_t c = 0; c < spec.polynomial.size(); ++c) {
    std::vector<Poly4::Term> terms;
    for (const auto& t : spec.polynomial[c]) {
      Poly4::Term term;
      term.coef = t[0];
      for (int a = 0; a < 4; ++a) {
        const double e = t[a + 1];
        if (e < 0.0 || e != std::floor(e)) {
          fail("polynomial exponents must be nonnegative integers");
        }
        term.e[a] = static_cast<int>(e);
      }
      terms.push_back(term);
    }
    polys.emplace_back(std::move(terms));
  }
  return polys;
}

template <std::size_t N>
std::array<Poly4, N> take_polys(const std::vector<Poly4>& polys) {
  std::array<Poly4, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = polys[i];
  return out;
}

template <std::size_t N>
std::array<Poly4, N> draw_polys(std::mt19937_64& rng) {
  std::array<Poly4, N> out;
  for (auto& p : out) p = Poly4::random_cubic(rng);
  return out;
}

MaterializedField materialize(const TestFieldSpec& spec, std::uint64_t seed) {
  MaterializedField f;
  f.info = kind_info(spec.kind);
  const int n = f.info.components;

  std::vector<Poly4> polys;
  if (spec.has_polynomial) {
    if (static_cast<int>(spec.polynomial.size()) != n) {
      fail("test_field kind '" + spec.kind + "' needs " + std::to_string(n) +
           " polynomial components");
    }
    polys = polys_from_spec(spec);
  } else if (spec.random_cubic) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) polys.push_back(Poly4::random_cubic(rng));
  } else if (spec.has_constant) {
    if (static_cast<int>(spec.constant.size()) != n) {
      fail("test_field kind '" + spec.kind + "' needs " + std::to_string(n) +
           " constant components");
    }
  } else {
    fail("test_field needs exactly one of constant, polynomial or random_cubic");
  }
  const bool from_polys = !polys.empty();

  if (f.info.scalar) {
    f.scalar = from_polys ? ScalarField::from_poly(polys[0])
                          : ScalarField::constant(spec.constant[0]);
  } else if (f.info.tensor && !f.info.space) {
    if (from_polys) {
      f.tensor = Tensor2Field::from_polys(f.info.variance, take_polys<16>(polys));
    } else {
      Mat4 m;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = spec.constant[4 * i + j];
      f.tensor = Tensor2Field::constant(Tensor2(f.info.variance, m));
    }
  } else if (f.info.tensor) {
    if (from_polys) {
      f.tensor = Tensor2Field::space_from_polys(f.info.variance, take_polys<9>(polys));
    } else {
      Mat3 m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = spec.constant[3 * i + j];
      f.tensor = Tensor2Field::constant_space(f.info.variance, m);
    }
  } else if (!f.info.space) {
    if (from_polys) {
      if (f.info.covector) {
        f.covector = CovectorField::from_polys(take_polys<4>(polys));
      } else {
        f.vector = VectorField::from_polys(take_polys<4>(polys));
      }
    } else {
      const FourVector v{spec.constant[0],
                         Vec3(spec.constant[1], spec.constant[2], spec.constant[3])};
      if (f.info.covector) {
        f.covector = CovectorField::constant(FourCovector{v.dt, v.dq});
      } else {
        f.vector = VectorField::constant(v);
      }
    }
  } else {
    // Spacelike (co)vector; keep the Euclidean twin of a vector for Jaumann.
    if (from_polys) {
      const auto comp = take_polys<3>(polys);
      if (f.info.covector) {
        f.covector = CovectorField::space_from_polys(comp);
      } else {
        f.vector = VectorField::space_from_polys(comp);
        f.vector_flat = CovectorField::space_from_polys(comp);
      }
    } else {
      const Vec3 v(spec.constant[0], spec.constant[1], spec.constant[2]);
      if (f.info.covector) {
        f.covector = CovectorField::constant_space(v);
      } else {
        f.vector = VectorField::constant_space(v);
        f.vector_flat = CovectorField::constant_space(v);
      }
    }
  }
  return f;
}

std::vector<std::string> component_labels(int n) {
  static const char* axes[] = {"t", "x", "y", "z"};
  std::vector<std::string> labels;
  if (n == 1) {
    labels = {"value"};
  } else if (n == 3) {
    labels = {"x", "y", "z"};
  } else if (n == 4) {
    labels = {"t", "x", "y", "z"};
  } else if (n == 9) {
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j) labels.push_back(std::string(axes[i]) + axes[j]);
  } else {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) labels.push_back(std::string(axes[i]) + axes[j]);
  }
  return labels;
}

std::vector<double> to_components(const FourVector& v) {
  return {v.dt, v.dq.x(), v.dq.y(), v.dq.z()};
}
std::vector<double> to_components(const FourCovector& k) {
  return {k.k0, k.k.x(), k.k.y(), k.k.z()};
}
std::vector<double> to_components(const Mat4& m) {
  std::vector<double> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.push_back(m(i, j));
  return out;
}
std::vector<double> to_components(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

/// Closed-form and oracle component values of one derivative kind at x.
/// Material and Lie results are reported in the arena of the result (all
/// four slots, even for spacelike inputs, because the Lie derivative of a
/// spacelike quantity can leak a time component); Jaumann is spacelike.
struct RowValues {
  std::vector<double> closed;
  std::vector<double> oracle;
};

RowValues eval_rows(const MaterializedField& f, const std::string& deriv,
                    const VelocityField& u, const WorldPoint& x, const OracleConfig& cfg) {
  RowValues rv;
  if (f.info.scalar) {
    if (deriv == "lie") {
      rv.closed = {lie_derivative(*f.scalar, u, x)};
      rv.oracle = {lie_oracle(*f.scalar, u, x, cfg)};
    } else {
      rv.closed = {material_derivative(*f.scalar, u, x)};
      rv.oracle = {material_oracle(*f.scalar, u, x, cfg)};
    }
  } else if (f.info.tensor) {
    if (deriv == "lie") {
      rv.closed = to_components(lie_derivative(*f.tensor, u, x).components());
      rv.oracle = to_components(lie_oracle(*f.tensor, u, x, cfg).components());
    } else {
      rv.closed = to_components(material_derivative(*f.tensor, u, x).components());
      rv.oracle = to_components(material_oracle(*f.tensor, u, x, cfg).components());
    }
  } else if (f.covector) {
    if (deriv == "lie") {
      rv.closed = to_components(lie_derivative(*f.covector, u, x));
      rv.oracle = to_components(lie_oracle(*f.covector, u, x, cfg));
    } else {
      rv.closed = to_components(material_derivative(*f.covector, u, x));
      rv.oracle = to_components(material_oracle(*f.covector, u, x, cfg));
    }
  } else {
    if (deriv == "jaumann") {
      rv.closed = to_components(jaumann(*f.vector, u, x));
      const Vec3 upper = lie_oracle(*f.vector, u, x, cfg).dq;
      const Vec3 lower = lie_oracle(*f.vector_flat, u, x, cfg).k;
      rv.oracle = to_components(Vec3(0.5 * (upper + lower)));
    } else if (deriv == "lie") {
      rv.closed = to_components(lie_derivative(*f.vector, u, x));
      rv.oracle = to_components(lie_oracle(*f.vector, u, x, cfg));
    } else {
      rv.closed = to_components(material_derivative(*f.vector, u, x));
      rv.oracle = to_components(material_oracle(*f.vector, u, x, cfg));
    }
  }
  return rv;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json observer_json(const ObserverSpec& o) {
  json j;
  j["type"] = o.type;
  j["origin"] = o.origin;
  if (o.type != "corotating") j["velocity"] = o.velocity;
  if (o.type == "rotating") {
    j["omega0"] = o.omega0;
    j["axis"] = o.axis;
  }
  return j;
}

json canonical(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["field"] = {{"name", sc.field.name}, {"params", sc.field.params}};
  j["observer"] = observer_json(sc.observer);
  json tf;
  tf["kind"] = sc.test_field.kind;
  if (sc.test_field.has_constant) {
    tf["constant"] = sc.test_field.constant;
  } else if (sc.test_field.has_polynomial) {
    json comps = json::array();
    for (const auto& comp : sc.test_field.polynomial) {
      json terms = json::array();
      for (const auto& t : comp) terms.push_back(t);
      comps.push_back(terms);
    }
    tf["polynomial"] = comps;
  } else {
    tf["random_cubic"] = true;
  }
  j["test_field"] = tf;
  if (!sc.points.explicit_points.empty()) {
    json pts = json::array();
    for (const WorldPoint& p : sc.points.explicit_points) {
      pts.push_back({p.t, p.q.x(), p.q.y(), p.q.z()});
    }
    j["points"] = pts;
  } else {
    j["points"] = {{"count", sc.points.count},
                   {"t_range", {sc.points.t_min, sc.points.t_max}},
                   {"box", sc.points.box}};
  }
  j["oracle"] = {{"s_step", sc.oracle.s_step},
                 {"flow_step", sc.oracle.flow_step},
                 {"fd_h", sc.oracle.fd_h}};
  j["tolerances"] = sc.tolerances;
  return j;
}

void parse_field(const json& j, FieldSpec& out) {
  if (j.is_string()) {
    out.name = j.get<std::string>();
  } else if (j.is_object()) {
    require_keys(j, "field", {"name", "params"});
    if (!j.contains("name") || !j["name"].is_string()) fail("field.name must be a string");
    out.name = j["name"].get<std::string>();
    if (j.contains("params")) {
      if (!j["params"].is_object()) fail("field.params must be an object");
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
        out.params[it.key()] = as_number(it.value(), "field.params." + it.key());
      }
    }
  } else {
    fail("field must be a catalog name or an object {name, params}");
  }
  auto defaults = catalog_defaults(out.name);
  for (const auto& [key, value] : out.params) {
    if (defaults.find(key) == defaults.end()) {
      fail("field '" + out.name + "' has no parameter '" + key + "'");
    }
    defaults[key] = value;
  }
  out.params = std::move(defaults);
}

void parse_observer(const json& j, ObserverSpec& out) {
  if (!j.is_object()) fail("observer must be an object");
  if (j.contains("type")) {
    if (!j["type"].is_string()) fail("observer.type must be a string");
    out.type = j["type"].get<std::string>();
  }
  if (out.type == "inertial") {
    require_keys(j, "observer", {"type", "origin", "velocity"});
  } else if (out.type == "rotating") {
    require_keys(j, "observer", {"type", "origin", "velocity", "omega0", "axis"});
  } else if (out.type == "corotating") {
    require_keys(j, "observer", {"type", "origin"});
  } else {
    fail("unknown observer type '" + out.type + "'");
  }
  if (j.contains("origin")) out.origin = as_array<4>(j["origin"], "observer.origin");
  if (j.contains("velocity")) out.velocity = as_array<3>(j["velocity"], "observer.velocity");
  if (j.contains("omega0")) out.omega0 = as_number(j["omega0"], "observer.omega0");
  if (j.contains("axis")) {
    out.axis = as_array<3>(j["axis"], "observer.axis");
    if (std::hypot(out.axis[0], out.axis[1], out.axis[2]) == 0.0) {
      fail("observer.axis must be nonzero");
    }
  }
}

void parse_test_field(const json& j, TestFieldSpec& out) {
  if (!j.is_object()) fail("test_field must be an object");
  require_keys(j, "test_field", {"kind", "constant", "polynomial", "random_cubic"});
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail("test_field.kind must be a string");
    out.kind = j["kind"].get<std::string>();
  }
  const KindInfo info = kind_info(out.kind);
  int forms = 0;
  if (j.contains("constant")) {
    ++forms;
    out.has_constant = true;
    const json& c = j["constant"];
    if (c.is_string()) {
      const std::string name = c.get<std::string>();
      if (info.components != 3) fail("named constants need a spacelike (co)vector kind");
      if (name == "e_x") {
        out.constant = {1.0, 0.0, 0.0};
      } else if (name == "e_y") {
        out.constant = {0.0, 1.0, 0.0};
      } else if (name == "e_z") {
        out.constant = {0.0, 0.0, 1.0};
      } else {
        fail("unknown named constant '" + name + "'");
      }
    } else if (c.is_number()) {
      out.constant = {as_number(c, "test_field.constant")};
    } else if (c.is_array()) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        out.constant.push_back(as_number(c[i], "test_field.constant"));
      }
    } else {
      fail("test_field.constant must be a number, array or axis name");
    }
    if (static_cast<int>(out.constant.size()) != info.components) {
      fail("test_field.constant needs " + std::to_string(info.components) + " components");
    }
  }
  if (j.contains("polynomial")) {
    ++forms;
    out.has_polynomial = true;
    const json& p = j["polynomial"];
    if (!p.is_array() || static_cast<int>(p.size()) != info.components) {
      fail("test_field.polynomial must list " + std::to_string(info.components) +
           " components");
    }
    for (const json& comp : p) {
      if (!comp.is_array()) fail("each polynomial component must be an array of terms");
      std::vector<std::array<double, 5>> terms;
      for (const json& term : comp) {
        terms.push_back(as_array<5>(term, "polynomial term"));
      }
      out.polynomial.push_back(std::move(terms));
    }
  }
  if (j.contains("random_cubic")) {
    if (!j["random_cubic"].is_boolean()) fail("test_field.random_cubic must be a boolean");
    if (j["random_cubic"].get<bool>()) {
      ++forms;
      out.random_cubic = true;
    }
  }
  if (forms != 1) fail("test_field needs exactly one of constant, polynomial or random_cubic");
}

void parse_points(const json& j, PointsSpec& out) {
  if (j.is_array()) {
    if (j.empty()) fail("points must not be empty");
    for (const json& p : j) {
      const auto a = as_array<4>(p, "point");
      out.explicit_points.push_back(WorldPoint{a[0], Vec3(a[1], a[2], a[3])});
    }
  } else if (j.is_object()) {
    require_keys(j, "points", {"count", "t_range", "box"});
    if (j.contains("count")) {
      if (!j["count"].is_number_integer()) fail("points.count must be an integer");
      out.count = j["count"].get<int>();
    }
    if (out.count < 1) fail("points.count must be at least 1");
    if (j.contains("t_range")) {
      const auto r = as_array<2>(j["t_range"], "points.t_range");
      out.t_min = r[0];
      out.t_max = r[1];
      if (!(out.t_min <= out.t_max)) fail("points.t_range must be ordered");
    }
    if (j.contains("box")) {
      out.box = as_number(j["box"], "points.box");
      if (out.box <= 0.0) fail("points.box must be positive");
    }
  } else {
    fail("points must be an array of events or {count, t_range, box}");
  }
}

}  // namespace

std::vector<std::string> test_field_kinds() {
  return {"scalar",         "four_vector",      "space_vector",
          "four_covector",  "space_covector",   "con_tensor",
          "cov_tensor",     "mixed_tensor",     "space_con_tensor",
          "space_cov_tensor", "space_mixed_tensor"};
}

Scenario parse_scenario_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario document must be a JSON object");
  require_keys(doc, "scenario",
               {"name", "seed", "field", "observer", "test_field", "points", "oracle",
                "tolerances"});

  Scenario sc;
  sc.points.count = 10;
  try {
    if (doc.contains("name")) {
      if (!doc["name"].is_string()) fail("name must be a string");
      sc.name = doc["name"].get<std::string>();
    }
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0) {
        fail("seed must be a nonnegative integer");
      }
      sc.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("field")) {
      parse_field(doc["field"], sc.field);
    } else {
      sc.field.params = catalog_defaults(sc.field.name);
    }
    if (doc.contains("observer")) parse_observer(doc["observer"], sc.observer);
    if (doc.contains("test_field")) {
      parse_test_field(doc["test_field"], sc.test_field);
    } else {
      sc.test_field.random_cubic = true;
    }
    if (doc.contains("points")) {
      sc.points.count = 0;
      parse_points(doc["points"], sc.points);
    }
    if (doc.contains("oracle")) {
      const json& o = doc["oracle"];
      if (!o.is_object()) fail("oracle must be an object");
      require_keys(o, "oracle", {"s_step", "flow_step", "fd_h"});
      if (o.contains("s_step")) sc.oracle.s_step = as_number(o["s_step"], "oracle.s_step");
      if (o.contains("flow_step")) {
        sc.oracle.flow_step = as_number(o["flow_step"], "oracle.flow_step");
      }
      if (o.contains("fd_h")) sc.oracle.fd_h = as_number(o["fd_h"], "oracle.fd_h");
    }
    sc.tolerances = {{"lie", 1e-6}, {"material", 1e-6}, {"jaumann", 1e-6}};
    if (doc.contains("tolerances")) {
      const json& t = doc["tolerances"];
      if (!t.is_object()) fail("tolerances must be an object");
      require_keys(t, "tolerances", {"lie", "material", "jaumann"});
      for (auto it = t.begin(); it != t.end(); ++it) {
        const double v = as_number(it.value(), "tolerances." + it.key());
        if (v < 0.0) fail("tolerances must be nonnegative");
        sc.tolerances[it.key()] = v;
      }
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed scenario: ") + e.what());
  }

  try {
    sc.oracle.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  // Validate the values that are only checked on materialization: parameter
  // ranges of the velocity field, and the shape of the test field.
  try {
    (void)catalog_field(sc.field.name, sc.field.params);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  (void)materialize(sc.test_field, sc.seed);

  sc.canonical_json = canonical(sc).dump();
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str());
}

VelocityField make_field(const FieldSpec& spec) {
  return catalog_field(spec.name, spec.params);
}

std::vector<WorldPoint> make_points(const Scenario& scenario) {
  if (!scenario.points.explicit_points.empty()) return scenario.points.explicit_points;
  std::mt19937_64 rng(scenario.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<WorldPoint> points;
  for (int i = 0; i < scenario.points.count; ++i) {
    WorldPoint x;
    x.t = scenario.points.t_min +
          uniform_01(rng) * (scenario.points.t_max - scenario.points.t_min);
    for (int a = 0; a < 3; ++a) x.q[a] = scenario.points.box * uniform_pm1(rng);
    points.push_back(x);
  }
  return points;
}

RigidObserver make_observer(const Scenario& scenario) {
  const ObserverSpec& o = scenario.observer;
  const WorldPoint origin{o.origin[0], Vec3(o.origin[1], o.origin[2], o.origin[3])};
  const Vec3 velocity(o.velocity[0], o.velocity[1], o.velocity[2]);
  if (o.type == "inertial") return RigidObserver::inertial(velocity, origin);

  ObserverOptions opts;
  double span = 2.0;
  for (const WorldPoint& p : make_points(scenario)) {
    span = std::max(span, std::abs(p.t - origin.t));
  }
  opts.horizon = span + 1.0;
  if (o.type == "rotating") {
    const Vec3 axis = Vec3(o.axis[0], o.axis[1], o.axis[2]).normalized();
    return RigidObserver::rotating_uniform(origin, o.omega0 * axis, velocity, opts);
  }
  return RigidObserver::corotating(make_field(scenario.field), origin, opts);
}

ScenarioRun run_scenario(const Scenario& scenario) {
  const VelocityField u = make_field(scenario.field);
  const std::vector<WorldPoint> points = make_points(scenario);
  const MaterializedField f = materialize(scenario.test_field, scenario.seed);

  std::vector<std::string> derivs = {"material", "lie"};
  if (f.info.space && !f.info.tensor && !f.info.covector) derivs.push_back("jaumann");

  std::ostringstream csv;
  csv << "# config: " << scenario.canonical_json << "\n";
  csv << "scenario,point,derivative,component,t,qx,qy,qz,closed_form,oracle,residual\n";

  ScenarioRun out;
  for (const std::string& deriv : derivs) {
    checks::CheckReport report;
    report.id = "scenario." + deriv;
    report.description = deriv + " derivative closed form vs oracle";
    report.tolerance = scenario.tolerances.at(deriv);
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const WorldPoint& x = points[i];
      const RowValues rv = eval_rows(f, deriv, u, x, scenario.oracle);
      const auto labels = component_labels(static_cast<int>(rv.closed.size()));
      for (std::size_t c = 0; c < rv.closed.size(); ++c) {
        const double residual = std::abs(rv.closed[c] - rv.oracle[c]);
        report.max_residual = std::max(report.max_residual, residual);
        report.points += 1;
        csv << scenario.name << ',' << i << ',' << deriv << ',' << labels[c] << ','
            << fmt(x.t) << ',' << fmt(x.q.x()) << ',' << fmt(x.q.y()) << ','
            << fmt(x.q.z()) << ',' << fmt(rv.closed[c]) << ',' << fmt(rv.oracle[c]) << ','
            << fmt(residual) << "\n";
      }
    }
    const auto stop = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    report.passed = report.max_residual <= report.tolerance;
    out.reports.push_back(report);
  }
  out.csv = csv.str();
  return out;
}

std::string emit_table(const std::string& kind, const Scenario& scenario) {
  std::ostringstream csv;
  csv << "# config: " << scenario.canonical_json << "\n";
  const std::vector<WorldPoint> points = make_points(scenario);

  if (kind == "convected_comparison") {
    const MaterializedField f = materialize(scenario.test_field, scenario.seed);
    if (!f.vector || !f.info.space) {
      fail("table 'convected_comparison' needs a space_vector test field");
    }
    const VelocityField u = make_field(scenario.field);
    csv << "scenario,point,component,t,qx,qy,qz,upper,lower,jaumann\n";
    const char* labels[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const WorldPoint& x = points[i];
      const Vec3 upper = lie_derivative(*f.vector, u, x).dq;
      const Vec3 lower = lie_derivative(*f.vector_flat, u, x).k;
      const Vec3 jau = jaumann(*f.vector, u, x);
      for (int c = 0; c < 3; ++c) {
        csv << scenario.name << ',' << i << ',' << labels[c] << ',' << fmt(x.t) << ','
            << fmt(x.q.x()) << ',' << fmt(x.q.y()) << ',' << fmt(x.q.z()) << ','
            << fmt(upper[c]) << ',' << fmt(lower[c]) << ',' << fmt(jau[c]) << "\n";
      }
    }
    return csv.str();
  }

  if (kind == "split_roundtrip") {
    const RigidObserver obs = make_observer(scenario);
    csv << "scenario,point,t,qx,qy,qz,roundtrip_residual,identity_residual\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const WorldPoint& x = points[i];
      const SplitPoint sp = obs.split(x);
      const WorldPoint back = obs.unsplit(sp.t, sp.q);
      const double roundtrip =
          std::max(std::abs(back.t - x.t), max_abs(Vec3(back.q - x.q)));
      const Mat4 composite =
          obs.split_jacobian(obs.unsplit(sp.t, sp.q)) * obs.unsplit_jacobian(sp.t, sp.q);
      const double identity = max_abs(Mat4(composite - Mat4::Identity()));
      csv << scenario.name << ',' << i << ',' << fmt(x.t) << ',' << fmt(x.q.x()) << ','
          << fmt(x.q.y()) << ',' << fmt(x.q.z()) << ',' << fmt(roundtrip) << ','
          << fmt(identity) << "\n";
    }
    return csv.str();
  }

  if (kind == "corotating") {
    if (scenario.observer.type != "corotating") {
      fail("table 'corotating' needs a corotating observer");
    }
    const MaterializedField f = materialize(scenario.test_field, scenario.seed);
    if (!f.vector || !f.info.space) {
      fail("table 'corotating' needs a space_vector test field");
    }
    const VelocityField u = make_field(scenario.field);
    const RigidObserver obs = make_observer(scenario);
    const RelVectorField c_rel = rel_space_vector_field(obs, *f.vector);
    csv << "scenario,point,component,t,partial0,jaumann_split,residual\n";
    const char* labels[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double t = points[i].t;
      const WorldPoint on_line = obs.unsplit(t, Vec3::Zero());
      const Vec3 lhs = relfd::partial_t(c_rel, t, Vec3::Zero(), scenario.oracle.fd_h);
      const Vec3 rhs = rel_space_vector(obs, jaumann(*f.vector, u, on_line), t);
      for (int c = 0; c < 3; ++c) {
        csv << scenario.name << ',' << i << ',' << labels[c] << ',' << fmt(t) << ','
            << fmt(lhs[c]) << ',' << fmt(rhs[c]) << ',' << fmt(std::abs(lhs[c] - rhs[c]))
            << "\n";
      }
    }
    return csv.str();
  }

  fail("unknown table kind '" + kind + "' (expected convected_comparison, split_roundtrip "
       "or corotating)");
}

std::string reports_to_json(const std::vector<checks::CheckReport>& reports) {
  json out;
  out["all_passed"] = checks::all_passed(reports);
  json list = json::array();
  for (const checks::CheckReport& r : reports) {
    list.push_back({{"id", r.id},
                    {"description", r.description},
                    {"points", r.points},
                    {"max_residual", r.max_residual},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed},
                    {"wall_ms", r.wall_ms}});
  }
  out["checks"] = list;
  return out.dump(2) + "\n";
}

std::string reports_to_text(const std::vector<checks::CheckReport>& reports) {
  std::size_t width = 4;
  for (const checks::CheckReport& r : reports) width = std::max(width, r.id.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %8s %13s %10s %9s  %s\n",
                static_cast<int>(width), "id", "points", "max_residual", "tolerance",
                "wall_ms", "status");
  out << line;
  for (const checks::CheckReport& r : reports) {
    std::snprintf(line, sizeof line, "%-*s %8d %13.3e %10.1e %9.1f  %s\n",
                  static_cast<int>(width), r.id.c_str(), r.points, r.max_residual,
                  r.tolerance, r.wall_ms, r.passed ? "PASS" : "FAIL");
    out << line;
  }
  return out.str();
}

}  // namespace stkin::harness
