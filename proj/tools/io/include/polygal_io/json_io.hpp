#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "polygal/bodies.hpp"
#include "polygal/optimize.hpp"

namespace polygal::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Serializes with every double printed as %.17g and keys in sorted order,
/// so equal values give byte-identical text. Non-finite doubles become null.
std::string dump(const Json& j, int indent = 2);

Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Json& j);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // list of rows
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

// normals.json: {schema_version, d, rows}
Json normals_to_json(const NormalSystem& ns);
NormalSystem normals_from_json(const Json& j, const Tolerances& tol = {});

// cone.json: {schema_version, normals, columns: [{vector, target, support, weights, pruned}]}
Json cone_to_json(const CompiledCone& cone);
CompiledCone cone_from_json(const Json& j, const Tolerances& tol = {});

// b.json: {schema_version, b, classification?, active_columns?, min_activity?}
Json coords_to_json(const CoordinateVector& c);
CoordinateVector coords_from_json(const Json& j);

// polytope.json: {schema_version, b, normals, vertices, vertex_active, facets: [{k, vertex_indices}]}
Json polytope_to_json(const PolytopeRealization& real);
PolytopeRealization polytope_from_json(const Json& j);

// body.json: {"type": point_hull | ball | halfspace | minkowski_sum | scaled, ...}
Json body_to_json(const Body& body);
Body body_from_json(const Json& j);

Json report_to_json(const DegeneracyReport& report);

/// problem.json. Normals files named in the sequence are resolved against
/// base_dir.
GalerkinProblem problem_from_json(const Json& j, const std::filesystem::path& base_dir = {},
                                  const Tolerances& tol = {});
Json problem_to_json(const GalerkinProblem& problem);

// results.json
Json results_to_json(const SequenceResult& result);
SequenceResult results_from_json(const Json& j);

}  // namespace polygal::io
