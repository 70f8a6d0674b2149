#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "savns/state.hpp"

namespace savns {

/// Text field dump: one header line `nx ny x0 x1 y0 y1 bc`, then the node
/// values row by row (y outer), one row per line, at full precision. Vector
/// fields write the first component's rows, then the second's.
void write_field(std::ostream& out, const ScalarField& f);
void write_field(std::ostream& out, const VectorField& f);

/// The dump does not record the discretisation; periodic dumps are read onto
/// `periodic_disc` grids. Throws ConfigError on malformed input or a value
/// count that does not match the header.
ScalarField read_scalar_field(std::istream& in,
                              Discretization periodic_disc = Discretization::Spectral,
                              int fd_order = 4);
VectorField read_vector_field(std::istream& in,
                              Discretization periodic_disc = Discretization::Spectral,
                              int fd_order = 4);

struct Checkpoint {
  FlowState state;
  std::uint64_t config_hash = 0;
  /// SR-SAV inner iterations; 0 for the other schemes.
  int s = 0;
};

/// Header line `savns-checkpoint step t q config_hash s`, then the u and p
/// dumps.
void write_checkpoint(std::ostream& out, const Checkpoint& c);
Checkpoint read_checkpoint(std::istream& in,
                           Discretization periodic_disc = Discretization::Spectral,
                           int fd_order = 4);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace savns
