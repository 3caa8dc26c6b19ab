#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polygal/optimize.hpp"
#include "polygal/sphere.hpp"
#include "polygal_io/json_io.hpp"

namespace fs = std::filesystem;
using namespace polygal;
using io::Json;

namespace {

struct Globals {
  double tol_scale = 1.0;
  int threads = 1;
  std::uint64_t seed = 0;
  bool json = false;
};

// What a subcommand hands back: an optional artifact (written to --out,
// else printed as JSON), a machine-readable report and a text summary.
struct Output {
  Json artifact;
  Json report = Json::object();
  std::string text;
};

struct Command {
  std::string name;
  std::string out;
  Json config = Json::object();
  std::function<Output()> run;
};

Tolerances tolerances(const Globals& g) {
  Tolerances t;
  t.scale = g.tol_scale;
  return t;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
  return s + ")";
}

// b from --b file or --values list.
Vector read_b(const std::string& path, const std::vector<double>& values) {
  if (!path.empty()) return io::coords_from_json(io::read_file(path)).b;
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "pass coordinates with --b or --values");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Option values echoed into the config: numbers stay numbers.
Json config_value(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) return v;
  return s;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundedSpace:
    case ErrorCode::InfeasibleLevel:
      return 2;
    case ErrorCode::NumericalFailure:
      return 3;
    default:
      return 1;
  }
}

std::string touching_summary(const CompiledCone& cone) {
  std::vector<int> per_k(static_cast<std::size_t>(cone.normals.size()), 0);
  for (const auto& c : cone.columns) {
    if (!c.pruned && !c.provenance.target.is_diamond()) ++per_k[static_cast<std::size_t>(c.provenance.target.k)];
  }
  std::string s;
  for (std::size_t k = 0; k < per_k.size(); ++k) s += (k ? " " : "") + std::to_string(per_k[k]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polygal: polytopal Galerkin approximation of convex bodies"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-scale", g.tol_scale, "Multiply every default tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads for data-parallel sections")->check(CLI::Range(1, 256));
  app.add_option("--seed", g.seed, "Seed for direction samplers");
  app.add_flag("--json", g.json, "Machine-readable stdout");

  std::vector<Command> commands;
  commands.reserve(16);
  const auto add = [&](CLI::App* sub, Command c) {
    commands.push_back(std::move(c));
    Command* cmd = &commands.back();
    sub->add_option("--out", cmd->out, "Artifact file (stdout when absent)");
    return cmd;
  };

  // normals gen
  auto* normals = app.add_subcommand("normals", "Normal system generators");
  normals->require_subcommand(1);
  auto* gen = normals->add_subcommand("gen", "Spherical grid normals of level K");
  int gen_d = 2, gen_level = 1;
  gen->add_option("--d", gen_d, "Dimension (2 or 3)")->required();
  gen->add_option("--level", gen_level, "Grid level")->required();
  auto* c_gen = add(gen, {"normals gen", {}, {}, {}});
  c_gen->run = [&] {
    const NormalSystem ns = spherical_grid_normals(gen_d, gen_level);
    Output o;
    o.artifact = io::normals_to_json(ns);
    o.report = {{"d", ns.dimension()}, {"N", ns.size()}};
    o.text = std::to_string(ns.size()) + " normals in dimension " + std::to_string(ns.dimension());
    return o;
  };

  // compile
  auto* compile = app.add_subcommand("compile", "Compile the coordinate cone F of a normal system");
  std::string compile_normals;
  bool compile_prune = false, compile_large = false;
  compile->add_option("--normals", compile_normals, "normals.json")->required()->check(CLI::ExistingFile);
  compile->add_flag("--prune", compile_prune, "Mark redundant touching columns");
  compile->add_flag("--allow-large", compile_large, "Lift the complexity guard");
  auto* c_compile = add(compile, {"compile", {}, {}, {}});
  c_compile->run = [&] {
    const Tolerances tol = tolerances(g);
    const NormalSystem ns = io::normals_from_json(io::read_file(compile_normals), tol);
    CompiledCone cone = compile_cone(ns, tol, {compile_large, g.threads});
    if (compile_prune) cone = prune_redundant(cone, tol);
    Output o;
    o.artifact = io::cone_to_json(cone);
    o.report = {{"diamond", cone.diamond_count()}, {"touching", cone.touching_count()}, {"pruned", cone.pruned_count()}};
    o.text = "diamond " + std::to_string(cone.diamond_count()) + ", touching " +
             std::to_string(cone.touching_count()) + ", pruned " + std::to_string(cone.pruned_count()) +
             "\nsurviving touching per k: " + touching_summary(cone);
    return o;
  };

  // check
  auto* check = app.add_subcommand("check", "Classify coordinates against a compiled cone");
  std::string check_cone, check_b;
  std::vector<double> check_values;
  bool check_pruned = false;
  check->add_option("--cone", check_cone, "cone.json")->required()->check(CLI::ExistingFile);
  check->add_option("--b", check_b, "b.json")->check(CLI::ExistingFile);
  check->add_option("--values", check_values, "Coordinates, comma separated")->delimiter(',');
  check->add_flag("--include-pruned", check_pruned, "Also test pruned columns");
  auto* c_check = add(check, {"check", {}, {}, {}});
  c_check->run = [&] {
    const Tolerances tol = tolerances(g);
    const CompiledCone cone = io::cone_from_json(io::read_file(check_cone), tol);
    const Vector b = read_b(check_b, check_values);
    const CoordinateVector c = classify(b, cone, tol, check_pruned);
    Output o;
    o.report = io::coords_to_json(c);
    o.report.erase("schema_version");
    o.text = std::string(to_string(c.classification)) + " (min activity " + fmt(c.min_activity) + ")";
    if (c.classification == Classification::Boundary) {
      const DegeneracyReport rep = diagnose_boundary(b, cone, tol);
      o.report["diagnosis"] = io::report_to_json(rep);
      o.text += std::string("\nflat ") + (rep.flat ? "true" : "false") + ", degenerate facets";
      for (int k : rep.degenerate_facets) o.text += " " + std::to_string(k);
      for (const auto& w : rep.facet_witnesses) {
        o.text += "\n  facet witness: column " + std::to_string(w.column) + " touching " +
                  std::to_string(w.vertex.target.k) + " support";
        for (int i : w.vertex.support) o.text += " " + std::to_string(i);
      }
      for (const auto& w : rep.flat_witnesses) {
        o.text += "\n  flat witness: column " + std::to_string(w.column) + " support";
        for (int i : w.vertex.support) o.text += " " + std::to_string(i);
      }
    }
    return o;
  };

  // canonicalize
  auto* canon = app.add_subcommand("canonicalize", "Minimal coordinates of Q_{A,b}");
  std::string canon_normals, canon_cone, canon_b;
  std::vector<double> canon_values;
  auto* canon_src = canon->add_option("--normals", canon_normals, "normals.json")->check(CLI::ExistingFile);
  canon->add_option("--cone", canon_cone, "cone.json (also classifies)")->check(CLI::ExistingFile)->excludes(canon_src);
  canon->add_option("--b", canon_b, "b.json")->check(CLI::ExistingFile);
  canon->add_option("--values", canon_values, "Coordinates, comma separated")->delimiter(',');
  auto* c_canon = add(canon, {"canonicalize", {}, {}, {}});
  c_canon->run = [&] {
    const Tolerances tol = tolerances(g);
    const Vector b = read_b(canon_b, canon_values);
    CoordinateVector c;
    if (!canon_cone.empty()) {
      c = canonicalize(b, io::cone_from_json(io::read_file(canon_cone), tol), tol);
    } else if (!canon_normals.empty()) {
      c = canonicalize(b, io::normals_from_json(io::read_file(canon_normals), tol), tol);
    } else {
      throw Error(ErrorCode::InvalidArgument, "pass --normals or --cone");
    }
    Output o;
    o.artifact = io::coords_to_json(c);
    o.report = o.artifact;
    o.text = "b = " + fmt(c.b);
    if (c.classification != Classification::Unclassified) o.text += " (" + std::string(to_string(c.classification)) + ")";
    return o;
  };

  // realize
  auto* realize_cmd = app.add_subcommand("realize", "Vertices and facets of Q_{A,b}");
  std::string real_cone, real_b;
  std::vector<double> real_values;
  realize_cmd->add_option("--cone", real_cone, "cone.json")->required()->check(CLI::ExistingFile);
  realize_cmd->add_option("--b", real_b, "b.json")->check(CLI::ExistingFile);
  realize_cmd->add_option("--values", real_values, "Coordinates, comma separated")->delimiter(',');
  auto* c_real = add(realize_cmd, {"realize", {}, {}, {}});
  c_real->run = [&] {
    const Tolerances tol = tolerances(g);
    const CompiledCone cone = io::cone_from_json(io::read_file(real_cone), tol);
    const PolytopeRealization real = realize(read_b(real_b, real_values), cone, tol);
    Output o;
    o.artifact = io::polytope_to_json(real);
    o.report = {{"vertices", static_cast<int>(real.vertices.size())}, {"dimension", polytope_dimension(real)}};
    o.text = std::to_string(real.vertices.size()) + " vertices, dimension " + std::to_string(polytope_dimension(real));
    return o;
  };

  // project
  auto* project = app.add_subcommand("project", "Support coordinates of a convex body");
  std::string proj_cone, proj_body, proj_poly;
  std::optional<double> proj_lambda;
  project->add_option("--cone", proj_cone, "cone.json")->required()->check(CLI::ExistingFile);
  project->add_option("--body", proj_body, "body.json")->required()->check(CLI::ExistingFile);
  project->add_option("--lambda", proj_lambda, "Interior shift in (0, 1)");
  project->add_option("--polytope-out", proj_poly, "Also write the realization");
  auto* c_proj = add(project, {"project", {}, {}, {}});
  c_proj->run = [&] {
    const Tolerances tol = tolerances(g);
    const CompiledCone cone = io::cone_from_json(io::read_file(proj_cone), tol);
    const Body body = io::body_from_json(io::read_file(proj_body));
    const ProjectionResult r =
        proj_lambda ? project_interior(body, cone, *proj_lambda, tol) : project_coords(body, cone, tol);
    if (!proj_poly.empty() && r.realization) io::write_file(proj_poly, io::polytope_to_json(*r.realization));
    Output o;
    o.artifact = io::coords_to_json(r.coords);
    o.report = o.artifact;
    o.report["body_norm"] = r.body_norm;
    o.text = "b = " + fmt(r.coords.b) + " (" + std::string(to_string(r.coords.classification)) + ")";
    return o;
  };

  // hausdorff
  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance of a polytope to a polytope or body");
  std::string haus_p, haus_q, haus_body;
  int haus_samples = 720;
  haus->add_option("--p", haus_p, "polytope.json")->required()->check(CLI::ExistingFile);
  auto* haus_qopt = haus->add_option("--q", haus_q, "polytope.json")->check(CLI::ExistingFile);
  haus->add_option("--body", haus_body, "body.json")->check(CLI::ExistingFile)->excludes(haus_qopt);
  haus->add_option("--samples", haus_samples, "Directions for the body bracket")->check(CLI::PositiveNumber);
  auto* c_haus = add(haus, {"hausdorff", {}, {}, {}});
  c_haus->run = [&] {
    const Tolerances tol = tolerances(g);
    const PolytopeRealization p = io::polytope_from_json(io::read_file(haus_p));
    Output o;
    if (!haus_q.empty()) {
      const double h = hausdorff_polytopes(p, io::polytope_from_json(io::read_file(haus_q)), tol);
      o.report = {{"hausdorff", h}};
      o.text = "dist_H = " + fmt(h);
    } else if (!haus_body.empty()) {
      const HausdorffInterval h =
          hausdorff_body_vs_polytope(io::body_from_json(io::read_file(haus_body)), p, haus_samples, g.seed, tol);
      o.report = {{"lower", h.lower}, {"upper", h.upper}, {"mesh", h.mesh}, {"certified", h.certified}};
      o.text = "dist_H in [" + fmt(h.lower) + ", " + fmt(h.upper) + "]";
    } else {
      throw Error(ErrorCode::InvalidArgument, "pass --q or --body");
    }
    return o;
  };

  // constants
  auto* consts = app.add_subcommand("constants", "delta, kappa and rho estimates of a normal system");
  std::string const_normals;
  int const_samples = 720;
  consts->add_option("--normals", const_normals, "normals.json")->required()->check(CLI::ExistingFile);
  consts->add_option("--samples", const_samples, "Sample directions")->check(CLI::PositiveNumber);
  auto* c_const = add(consts, {"constants", {}, {}, {}});
  c_const->run = [&] {
    const Tolerances tol = tolerances(g);
    const NormalSystem ns = io::normals_from_json(io::read_file(const_normals), tol);
    const DeltaEstimate delta = estimate_delta(ns, const_samples, g.seed);
    const KappaEstimate kappa = estimate_kappa(ns, const_samples, g.seed, tol);
    Output o;
    o.report = {{"delta_hat", delta.value},
                {"delta_upper", delta.upper},
                {"delta_exact", delta.exact},
                {"kappa_hat", kappa.kappa},
                {"rho", kappa.rho},
                {"rho_bound", kappa.rho_bound ? Json(*kappa.rho_bound) : Json()},
                {"worst_direction", io::to_json(kappa.worst_direction)}};
    o.text = "delta_hat " + fmt(delta.value) + ", kappa_hat " + fmt(kappa.kappa) + ", rho " + fmt(kappa.rho) +
             ", rho_bound " + (kappa.rho_bound ? fmt(*kappa.rho_bound) : std::string("none"));
    return o;
  };

  // optimize
  auto* opt = app.add_subcommand("optimize", "Solve a Galerkin problem level by level");
  std::string opt_problem;
  opt->add_option("--problem", opt_problem, "problem.json")->required()->check(CLI::ExistingFile);
  auto* c_opt = add(opt, {"optimize", {}, {}, {}});
  c_opt->run = [&] {
    const fs::path path(opt_problem);
    GalerkinProblem pb = io::problem_from_json(io::read_file(path), path.parent_path(), tolerances(g));
    if (g.threads > 1) pb.solver.threads = g.threads;
    const SequenceResult r = run_sequence(pb);
    Output o;
    o.artifact = io::results_to_json(r);
    o.artifact["problem"] = io::problem_to_json(pb);
    Json levels = Json::array();
    for (const auto& l : r.levels) {
      levels.push_back({{"k", l.level_id}, {"N", l.n}, {"objective", l.objective}, {"kappa_hat", l.kappa_hat}});
      o.text += "k " + std::to_string(l.level_id) + "  N " + std::to_string(l.n) + "  objective " + fmt(l.objective) +
                "  kappa_hat " + fmt(l.kappa_hat) + "  iterations " + std::to_string(l.iterations) + "\n";
    }
    for (const auto& c : r.cross_level) {
      o.text += "dist_H(k " + std::to_string(r.levels[static_cast<std::size_t>(c.level)].level_id) + ", k " +
                std::to_string(r.levels[static_cast<std::size_t>(c.level_next)].level_id) + ") = " + fmt(c.hausdorff) +
                "\n";
    }
    if (!o.text.empty()) o.text.pop_back();
    o.report = {{"levels", levels}, {"cross_level", o.artifact["cross_level"]}};
    return o;
  };

  const std::vector<std::pair<CLI::App*, Command*>> dispatch{
      {gen, c_gen},       {compile, c_compile}, {check, c_check}, {canon, c_canon}, {realize_cmd, c_real},
      {project, c_proj},  {haus, c_haus},       {consts, c_const}, {opt, c_opt}};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (const auto& [sub, cmd] : dispatch) {
    if (!sub->parsed()) continue;
    cmd->config = {{"command", cmd->name}, {"tol_scale", g.tol_scale}, {"threads", g.threads}, {"seed", g.seed}};
    for (const auto* option : sub->get_options()) {
      if (option->get_name() == "--help" || option->get_name() == "--out" || option->count() == 0) continue;
      const auto& res = option->results();
      const std::string key = option->get_name().substr(2);
      if (option->get_expected_max() == 0) cmd->config[key] = true;
      else if (res.size() == 1) cmd->config[key] = config_value(res.front());
      else {
        Json values = Json::array();
        for (const auto& r : res) values.push_back(config_value(r));
        cmd->config[key] = values;
      }
    }
    try {
      Output o = cmd->run();
      if (!o.artifact.is_null()) o.artifact["config"] = cmd->config;
      o.report["config"] = cmd->config;
      if (!cmd->out.empty() && !o.artifact.is_null()) {
        io::write_file(cmd->out, o.artifact);
        std::cout << (g.json ? io::dump(o.report) : o.text + "\n");
      } else if (!o.artifact.is_null()) {
        std::cout << io::dump(o.artifact);
      } else {
        std::cout << (g.json ? io::dump(o.report) : o.text + "\n");
      }
      return 0;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code(e.code());
    } catch (const Json::exception& e) {
      std::cerr << "error: SchemaError: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
