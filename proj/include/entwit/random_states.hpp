#ifndef ENTWIT_RANDOM_STATES_HPP
#define ENTWIT_RANDOM_STATES_HPP

#include "entwit/qstate.hpp"
#include "entwit/rng.hpp"

namespace entwit {

/// Haar-random pure state of dimension dim.
Eigen::VectorXcd random_pure(int dim, RngStream& rng);

/// Ginibre-induced random density matrix, mixed with `floor` * I/dim to keep
/// it safely full rank.
DensityMatrix random_density(int dim, RngStream& rng, double floor = 0.02);

/// Random pure two-qubit product state |a> x |b|>.
DensityMatrix random_product_pure(RngStream& rng);

/// Haar-ish random 2x2 unitary (QR of a complex Ginibre matrix, phases fixed).
Mat2 random_unitary2(RngStream& rng);

/// Random proper rotation in SO(3).
Mat3r random_rotation3(RngStream& rng);

/// Random pure three-qubit state, biseparable across a random cut.
DensityMatrix random_biseparable3(RngStream& rng);

}  // namespace entwit

#endif
