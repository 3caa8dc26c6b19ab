#pragma once

#include <optional>

#include "polygal/optimize.hpp"

namespace polygal::detail {

/// Gradient of polytope_volume in b: the facet measures.
Vector volume_gradient(const PolytopeRealization& real);

/// d = 2: L(k, j) = d len_k / d b_j through the vertex Jacobians, which is
/// also the Hessian of the area. Empty when some vertex is not simple.
std::optional<Matrix> facet_length_jacobian(const PolytopeRealization& real);

/// Gradient of the perimeter (d = 2); empty when some vertex is not simple.
std::optional<Vector> perimeter_gradient(const PolytopeRealization& real);

/// Gradient of sigma_Q(u) through the maximizing vertex; empty when the
/// maximizer is not a unique simple vertex.
std::optional<Vector> support_gradient(const PolytopeRealization& real, const Vector& u);

/// Index of row u among the normals, -1 when u is not a normal.
int normal_index(const NormalSystem& ns, const Vector& u);

}  // namespace polygal::detail
