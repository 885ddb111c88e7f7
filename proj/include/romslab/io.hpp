#pragma once

#include <iosfwd>
#include <string>

#include "romslab/experiments.hpp"
#include "romslab/medium.hpp"

namespace romslab {

/// Shortest-safe round-trip formatting: 17 significant digits.
std::string format_real(double x);

/// Columns n,estimate,se,samples,flagged,wall_time_s. Wall times are written
/// as 0 unless `timings` is set, so tables from identical inputs are
/// byte-identical.
void write_error_table(std::ostream& out, const ErrorTable& table, bool timings = false);
ErrorTable read_error_table(std::istream& in);

/// Columns delta,error,consistency,bound,holds.
void write_regularization_table(std::ostream& out, const RegularizationTable& table);

/// Columns cell,x_left,x_right,phi.
void write_flux(std::ostream& out, const ScalarFlux& phi, const SpatialGrid& grid);
ScalarFlux read_flux(std::istream& in);

}  // namespace romslab
