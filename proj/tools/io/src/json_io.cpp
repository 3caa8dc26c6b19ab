#include "polygal_io/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace polygal::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

void check_version(const Json& j) {
  if (!j.is_object()) schema_error("expected a JSON object");
  const auto it = j.find("schema_version");
  if (it != j.end() && (!it->is_number_integer() || it->get<int>() != kSchemaVersion)) {
    schema_error("unsupported schema_version");
  }
}

double number(const Json& j, const char* what) {
  if (j.is_null()) return std::nan("");
  if (!j.is_number()) schema_error(std::string(what) + " must be a number");
  return j.get<double>();
}

Json index_list(const IndexSet& s) {
  Json a = Json::array();
  for (int i : s) a.push_back(i);
  return a;
}

IndexSet index_list_from(const Json& j) {
  if (!j.is_array()) schema_error("expected an index list");
  IndexSet s;
  for (const auto& x : j) {
    if (!x.is_number_integer()) schema_error("indices must be integers");
    s.push_back(x.get<int>());
  }
  return s;
}

void emit(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // Rows of plain numbers stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += indent >= 0 && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        emit(x, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        emit(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

std::string_view target_kind_name(ObjectiveSpec::Quadrature q) {
  switch (q) {
    case ObjectiveSpec::Quadrature::Explicit: return "explicit";
    case ObjectiveSpec::Quadrature::Uniform: return "uniform";
    case ObjectiveSpec::Quadrature::Arc: return "arc";
  }
  return "explicit";
}

std::string_view inner_name(InnerMethod m) {
  switch (m) {
    case InnerMethod::Gradient: return "gradient";
    case InnerMethod::Bfgs: return "bfgs";
    case InnerMethod::Newton: return "newton";
  }
  return "newton";
}

InnerMethod inner_from(const std::string& s) {
  if (s == "gradient") return InnerMethod::Gradient;
  if (s == "bfgs") return InnerMethod::Bfgs;
  if (s == "newton") return InnerMethod::Newton;
  schema_error("unknown inner method '" + s + "'");
}

Json objective_to_json(const ObjectiveSpec& o) {
  Json j;
  j["kind"] = std::string(to_string(o.kind));
  j["maximize"] = o.maximize;
  switch (o.kind) {
    case ObjectiveSpec::Kind::NegVolume:
      break;
    case ObjectiveSpec::Kind::LinearSupport:
      j["quadrature"] = std::string(target_kind_name(o.quadrature));
      if (o.quadrature == ObjectiveSpec::Quadrature::Explicit) j["weights"] = to_json(o.weights);
      break;
    case ObjectiveSpec::Kind::TargetTracking:
      if (o.target_body) j["target_body"] = body_to_json(*o.target_body);
      else j["target_b"] = to_json(o.target_b);
      break;
  }
  return j;
}

ObjectiveSpec objective_from_json(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  ObjectiveSpec o;
  if (kind == "neg_volume") {
    o = ObjectiveSpec::neg_volume();
  } else if (kind == "linear_support") {
    const std::string q = j.value("quadrature", j.contains("weights") ? "explicit" : "uniform");
    if (q == "explicit") o = ObjectiveSpec::linear_support(vector_from_json(require(j, "weights")));
    else if (q == "uniform") o = ObjectiveSpec::linear_support(ObjectiveSpec::Quadrature::Uniform);
    else if (q == "arc") o = ObjectiveSpec::linear_support(ObjectiveSpec::Quadrature::Arc);
    else schema_error("unknown quadrature '" + q + "'");
  } else if (kind == "target_tracking") {
    if (j.contains("target_body")) o = ObjectiveSpec::target_tracking(body_from_json(j["target_body"]));
    else o = ObjectiveSpec::target_tracking(vector_from_json(require(j, "target_b")));
  } else {
    schema_error("unknown objective kind '" + kind + "'");
  }
  o.maximize = j.value("maximize", false);
  return o;
}

Json constraint_to_json(const ConstraintSpec& c) {
  Json j;
  j["kind"] = std::string(to_string(c.kind));
  j["L"] = c.lipschitz_L;
  switch (c.kind) {
    case ConstraintSpec::Kind::PerimeterLe:
      j["limit"] = c.limit;
      break;
    case ConstraintSpec::Kind::SupportBox:
      j["directions"] = to_json(c.directions);
      j["limits"] = to_json(c.limits);
      break;
    case ConstraintSpec::Kind::LinearSupportLe:
      j["weights"] = to_json(c.weights);
      j["limit"] = c.limit;
      break;
  }
  return j;
}

ConstraintSpec constraint_from_json(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  ConstraintSpec c;
  if (kind == "perimeter_le") {
    c = ConstraintSpec::perimeter_le(number(require(j, "limit"), "limit"));
  } else if (kind == "support_box") {
    c = ConstraintSpec::support_box(matrix_from_json(require(j, "directions")), vector_from_json(require(j, "limits")));
  } else if (kind == "linear_support_le") {
    c = ConstraintSpec::linear_support_le(vector_from_json(require(j, "weights")), number(require(j, "limit"), "limit"));
  } else {
    schema_error("unknown constraint kind '" + kind + "'");
  }
  if (j.contains("L")) c.lipschitz_L = number(j["L"], "L");
  if (!(c.lipschitz_L > 0.0)) schema_error("constraint Lipschitz constant must be positive");
  return c;
}

Json solver_to_json(const SolverOptions& s) {
  Json j;
  j["mu_start"] = s.mu_start;
  j["mu_min"] = s.mu_min;
  j["mu_factor"] = s.mu_factor;
  j["step_tol"] = s.step_tol;
  j["max_inner"] = s.max_inner;
  j["max_phase1"] = s.max_phase1;
  j["inner"] = std::string(inner_name(s.inner));
  j["starts"] = s.starts;
  j["threads"] = s.threads;
  j["kappa_samples"] = s.kappa_samples;
  j["tol_scale"] = s.tol.scale;
  return j;
}

SolverOptions solver_from_json(const Json& j, const Tolerances& tol) {
  SolverOptions s;
  s.tol = tol;
  if (j.is_null()) return s;
  s.mu_start = j.value("mu_start", s.mu_start);
  s.mu_min = j.value("mu_min", s.mu_min);
  s.mu_factor = j.value("mu_factor", s.mu_factor);
  s.step_tol = j.value("step_tol", s.step_tol);
  s.max_inner = j.value("max_inner", s.max_inner);
  s.max_phase1 = j.value("max_phase1", s.max_phase1);
  if (j.contains("inner")) s.inner = inner_from(j["inner"].get<std::string>());
  s.starts = j.value("starts", s.starts);
  s.threads = j.value("threads", s.threads);
  s.kappa_samples = j.value("kappa_samples", s.kappa_samples);
  if (j.contains("tol_scale")) s.tol.scale *= number(j["tol_scale"], "tol_scale");
  if (!(s.mu_factor > 0.0 && s.mu_factor < 1.0)) schema_error("mu_factor must lie in (0, 1)");
  if (!(s.mu_start > 0.0 && s.mu_min > 0.0)) schema_error("barrier parameters must be positive");
  if (s.starts < 1) schema_error("at least one start is required");
  return s;
}

Json level_to_json(const LevelResult& r) {
  Json j;
  j["level"] = r.level;
  j["k"] = r.level_id;
  j["N"] = r.n;
  j["b"] = to_json(r.b);
  j["vertices"] = to_json(r.realization.vertex_matrix());
  j["polytope"] = polytope_to_json(r.realization);
  j["objective"] = r.objective;
  j["constraints"] = to_json(r.constraint_values);
  j["kappa_hat"] = r.kappa_hat;
  j["shift"] = r.shift;
  j["iterations"] = r.iterations;
  j["wall_ms"] = r.wall_ms;
  j["chosen_start"] = r.chosen_start;
  Json starts = Json::array();
  for (const auto& s : r.starts) {
    starts.push_back({{"name", s.name},
                      {"succeeded", s.succeeded},
                      {"objective", s.objective},
                      {"iterations", s.iterations},
                      {"failure", s.failure}});
  }
  j["starts"] = starts;
  j["feasibility"] = {{"min_column", r.feasibility.min_column},
                      {"lower_box_gap", r.feasibility.lower_box_gap},
                      {"upper_box_excess", r.feasibility.upper_box_excess},
                      {"max_constraint", r.feasibility.max_constraint},
                      {"ok", r.feasibility.ok}};
  return j;
}

LevelResult level_from_json(const Json& j) {
  LevelResult r;
  r.level = require(j, "level").get<int>();
  r.level_id = require(j, "k").get<int>();
  r.n = require(j, "N").get<int>();
  r.b = vector_from_json(require(j, "b"));
  r.realization = polytope_from_json(require(j, "polytope"));
  r.objective = number(require(j, "objective"), "objective");
  r.constraint_values = vector_from_json(require(j, "constraints"));
  r.kappa_hat = number(require(j, "kappa_hat"), "kappa_hat");
  r.shift = number(require(j, "shift"), "shift");
  r.iterations = require(j, "iterations").get<int>();
  r.wall_ms = number(require(j, "wall_ms"), "wall_ms");
  r.chosen_start = require(j, "chosen_start").get<int>();
  for (const auto& s : require(j, "starts")) {
    r.starts.push_back({require(s, "name").get<std::string>(), require(s, "succeeded").get<bool>(),
                        number(require(s, "objective"), "objective"), require(s, "iterations").get<int>(),
                        require(s, "failure").get<std::string>()});
  }
  const Json& f = require(j, "feasibility");
  r.feasibility.min_column = number(require(f, "min_column"), "min_column");
  r.feasibility.lower_box_gap = number(require(f, "lower_box_gap"), "lower_box_gap");
  r.feasibility.upper_box_excess = number(require(f, "upper_box_excess"), "upper_box_excess");
  const Json& mc = require(f, "max_constraint");
  r.feasibility.max_constraint = mc.is_null() ? -std::numeric_limits<double>::infinity() : mc.get<double>();
  r.feasibility.ok = require(f, "ok").get<bool>();
  return r;
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  emit(j, out, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    schema_error(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << dump(j);
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) schema_error("expected a list of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) schema_error("expected a list of rows");
  if (j.empty()) return Matrix(0, 0);
  if (!j[0].is_array()) schema_error("expected a list of rows");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i]);
    if (static_cast<std::size_t>(row.size()) != cols) schema_error("rows have different lengths");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

Json normals_to_json(const NormalSystem& ns) {
  return {{"schema_version", kSchemaVersion}, {"d", ns.dimension()}, {"rows", to_json(ns.rows)}};
}

NormalSystem normals_from_json(const Json& j, const Tolerances& tol) {
  check_version(j);
  const Matrix rows = matrix_from_json(require(j, "rows"));
  if (j.contains("d") && j["d"].get<int>() != rows.cols()) schema_error("d does not match the row length");
  return validate_normals(rows, tol);
}

Json cone_to_json(const CompiledCone& cone) {
  Json cols = Json::array();
  for (const auto& c : cone.columns) {
    Json col;
    col["vector"] = to_json(c.vector);
    if (c.provenance.target.is_diamond()) col["target"] = "diamond";
    else col["target"] = {{"touching", c.provenance.target.k}};
    col["support"] = index_list(c.provenance.support);
    col["weights"] = to_json(c.provenance.p);
    col["pruned"] = c.pruned;
    cols.push_back(col);
  }
  return {{"schema_version", kSchemaVersion},
          {"normals", normals_to_json(cone.normals)},
          {"counts", {{"diamond", cone.diamond_count()}, {"touching", cone.touching_count()}, {"pruned", cone.pruned_count()}}},
          {"columns", cols}};
}

CompiledCone cone_from_json(const Json& j, const Tolerances& tol) {
  check_version(j);
  CompiledCone cone;
  cone.normals = normals_from_json(require(j, "normals"), tol);
  const int n = cone.normals.size();
  for (const auto& c : require(j, "columns")) {
    ConeColumn col;
    col.vector = vector_from_json(require(c, "vector"));
    const Json& t = require(c, "target");
    if (t.is_string() && t.get<std::string>() == "diamond") col.provenance.target = DualTarget::diamond();
    else col.provenance.target = DualTarget::touching(require(t, "touching").get<int>());
    col.provenance.support = index_list_from(require(c, "support"));
    col.provenance.p = vector_from_json(require(c, "weights"));
    col.pruned = c.value("pruned", false);
    if (col.vector.size() != n || col.provenance.p.size() != n) schema_error("column length differs from N");
    const int k = col.provenance.target.k;
    if (!col.provenance.target.is_diamond() && (k < 0 || k >= n)) schema_error("touching index out of range");
    for (int i : col.provenance.support) {
      if (i < 0 || i >= n) schema_error("support index out of range");
    }
    cone.columns.push_back(std::move(col));
  }
  return cone;
}

Json coords_to_json(const CoordinateVector& c) {
  Json j{{"schema_version", kSchemaVersion}, {"b", to_json(c.b)}};
  if (c.classification != Classification::Unclassified) {
    j["classification"] = std::string(to_string(c.classification));
    j["active_columns"] = index_list(c.active_columns);
    j["min_activity"] = c.min_activity;
  }
  return j;
}

CoordinateVector coords_from_json(const Json& j) {
  CoordinateVector c;
  if (j.is_array()) {
    c.b = vector_from_json(j);
    return c;
  }
  check_version(j);
  c.b = vector_from_json(require(j, "b"));
  if (j.contains("classification")) {
    const std::string s = j["classification"].get<std::string>();
    if (s == "interior") c.classification = Classification::Interior;
    else if (s == "boundary") c.classification = Classification::Boundary;
    else if (s == "exterior") c.classification = Classification::Exterior;
    else if (s == "unclassified") c.classification = Classification::Unclassified;
    else schema_error("unknown classification '" + s + "'");
    if (j.contains("active_columns")) c.active_columns = index_list_from(j["active_columns"]);
    if (j.contains("min_activity")) c.min_activity = number(j["min_activity"], "min_activity");
  }
  return c;
}

Json polytope_to_json(const PolytopeRealization& real) {
  Json active = Json::array();
  for (const auto& v : real.vertices) active.push_back(index_list(v.active));
  Json facets = Json::array();
  for (std::size_t k = 0; k < real.facet_active.size(); ++k) {
    facets.push_back({{"k", static_cast<int>(k)}, {"vertex_indices", index_list(real.facet_active[k])}});
  }
  return {{"schema_version", kSchemaVersion},
          {"b", to_json(real.source_b)},
          {"normals", to_json(real.normals)},
          {"vertices", to_json(real.vertex_matrix())},
          {"vertex_active", active},
          {"facets", facets}};
}

PolytopeRealization polytope_from_json(const Json& j) {
  check_version(j);
  PolytopeRealization real;
  real.normals = matrix_from_json(require(j, "normals"));
  real.source_b = vector_from_json(require(j, "b"));
  const Matrix v = matrix_from_json(require(j, "vertices"));
  const Json& active = require(j, "vertex_active");
  if (active.size() != static_cast<std::size_t>(v.rows())) schema_error("vertex_active length differs from vertices");
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    real.vertices.push_back({v.row(i).transpose(), index_list_from(active[static_cast<std::size_t>(i)])});
  }
  const Json& facets = require(j, "facets");
  real.facet_active.assign(static_cast<std::size_t>(real.normals.rows()), {});
  for (const auto& f : facets) {
    const int k = require(f, "k").get<int>();
    if (k < 0 || k >= real.normals.rows()) schema_error("facet index out of range");
    real.facet_active[static_cast<std::size_t>(k)] = index_list_from(require(f, "vertex_indices"));
  }
  return real;
}

Json body_to_json(const Body& body) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PointHull>) {
          return {{"type", "point_hull"}, {"points", to_json(node.points)}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"}, {"center", to_json(node.center)}, {"radius", node.radius}};
        } else if constexpr (std::is_same_v<T, HalfspacePolytope>) {
          return {{"type", "halfspace"}, {"A", to_json(node.A)}, {"b", to_json(node.b)}};
        } else if constexpr (std::is_same_v<T, MinkowskiSum>) {
          Json parts = Json::array();
          for (const auto& p : node.parts) parts.push_back(body_to_json(p));
          return {{"type", "minkowski_sum"}, {"parts", parts}};
        } else {
          return {{"type", "scaled"}, {"factor", node.factor}, {"body", body_to_json(*node.inner)}};
        }
      },
      body.node);
}

Body body_from_json(const Json& j) {
  check_version(j);
  const std::string type = require(j, "type").get<std::string>();
  if (type == "point_hull") return Body::point_hull(matrix_from_json(require(j, "points")));
  if (type == "ball") return Body::ball(vector_from_json(require(j, "center")), number(require(j, "radius"), "radius"));
  if (type == "halfspace") return Body::halfspace(matrix_from_json(require(j, "A")), vector_from_json(require(j, "b")));
  if (type == "minkowski_sum") {
    std::vector<Body> parts;
    for (const auto& p : require(j, "parts")) parts.push_back(body_from_json(p));
    return Body::sum(std::move(parts));
  }
  if (type == "scaled") return Body::scaled(number(require(j, "factor"), "factor"), body_from_json(require(j, "body")));
  schema_error("unknown body type '" + type + "'");
}

Json report_to_json(const DegeneracyReport& report) {
  const auto witnesses = [](const std::vector<DegeneracyWitness>& ws) {
    Json a = Json::array();
    for (const auto& w : ws) {
      Json t = w.vertex.target.is_diamond() ? Json("diamond") : Json{{"touching", w.vertex.target.k}};
      a.push_back({{"column", w.column}, {"target", t}, {"support", index_list(w.vertex.support)},
                   {"weights", to_json(w.vertex.p)}});
    }
    return a;
  };
  return {{"flat", report.flat},
          {"degenerate_facets", index_list(report.degenerate_facets)},
          {"flat_witnesses", witnesses(report.flat_witnesses)},
          {"facet_witnesses", witnesses(report.facet_witnesses)},
          {"geometry_consistent", report.geometry_consistent}};
}

GalerkinProblem problem_from_json(const Json& j, const std::filesystem::path& base_dir, const Tolerances& tol) {
  check_version(j);
  GalerkinProblem pb;
  pb.solver = solver_from_json(j.value("solver", Json()), tol);
  const Tolerances& t = pb.solver.tol;
  const Json& seq = require(j, "sequence");
  if (seq.contains("normals")) {
    std::vector<NormalSystem> levels;
    for (const auto& entry : seq["normals"]) {
      if (entry.is_string()) {
        std::filesystem::path p(entry.get<std::string>());
        if (p.is_relative()) p = base_dir / p;
        levels.push_back(normals_from_json(read_file(p), t));
      } else {
        levels.push_back(normals_from_json(entry, t));
      }
    }
    pb.sequence = make_sequence(std::move(levels), t);
    if (seq.contains("level_ids")) {
      const IndexSet ids = index_list_from(seq["level_ids"]);
      if (static_cast<int>(ids.size()) != pb.sequence.size()) schema_error("level_ids length differs from levels");
      pb.sequence.level_ids = ids;
    }
  } else {
    const int d = require(seq, "d").get<int>();
    pb.sequence = spherical_sequence(d, index_list_from(require(seq, "levels")), t);
  }
  pb.objective = objective_from_json(require(j, "objective"));
  if (j.contains("constraints")) {
    for (const auto& c : j["constraints"]) pb.constraints.push_back(constraint_from_json(c));
  }
  if (j.contains("inner_body") && !j["inner_body"].is_null()) pb.inner_body = body_from_json(j["inner_body"]);
  pb.outer_body = body_from_json(require(j, "outer_body"));
  pb.lambda = j.value("lambda", pb.lambda);
  if (!(pb.lambda > 0.0 && pb.lambda < 1.0)) schema_error("lambda must lie in (0, 1)");
  const std::string shift = j.value("shift", "kappa");
  if (shift == "kappa") pb.shift = ConstraintShift::Kappa;
  else if (shift == "none") pb.shift = ConstraintShift::None;
  else schema_error("shift must be 'kappa' or 'none'");
  return pb;
}

Json problem_to_json(const GalerkinProblem& pb) {
  Json levels = Json::array();
  for (const auto& ns : pb.sequence.levels) levels.push_back(normals_to_json(ns));
  Json cons = Json::array();
  for (const auto& c : pb.constraints) cons.push_back(constraint_to_json(c));
  Json j{{"schema_version", kSchemaVersion},
         {"sequence", {{"normals", levels}, {"level_ids", index_list(pb.sequence.level_ids)}}},
         {"objective", objective_to_json(pb.objective)},
         {"constraints", cons},
         {"outer_body", body_to_json(pb.outer_body)},
         {"lambda", pb.lambda},
         {"shift", pb.shift == ConstraintShift::Kappa ? "kappa" : "none"},
         {"solver", solver_to_json(pb.solver)}};
  j["inner_body"] = pb.inner_body ? body_to_json(*pb.inner_body) : Json();
  return j;
}

Json results_to_json(const SequenceResult& result) {
  Json levels = Json::array();
  for (const auto& l : result.levels) levels.push_back(level_to_json(l));
  Json cross = Json::array();
  for (const auto& c : result.cross_level) {
    cross.push_back({{"level", c.level}, {"level_next", c.level_next},
                     {"k", result.levels[static_cast<std::size_t>(c.level)].level_id},
                     {"k_next", result.levels[static_cast<std::size_t>(c.level_next)].level_id},
                     {"hausdorff", c.hausdorff}, {"objective_delta", c.objective_delta}});
  }
  return {{"schema_version", kSchemaVersion}, {"levels", levels}, {"cross_level", cross}};
}

SequenceResult results_from_json(const Json& j) {
  check_version(j);
  SequenceResult r;
  for (const auto& l : require(j, "levels")) r.levels.push_back(level_from_json(l));
  for (const auto& c : require(j, "cross_level")) {
    r.cross_level.push_back({require(c, "level").get<int>(), require(c, "level_next").get<int>(),
                             number(require(c, "hausdorff"), "hausdorff"),
                             number(require(c, "objective_delta"), "objective_delta")});
  }
  return r;
}

}  // namespace polygal::io
