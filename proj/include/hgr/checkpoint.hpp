#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hgr/mlp.hpp"
#include "hgr/optim.hpp"

namespace hgr {

// Binary serialization, explicitly little-endian, 64-bit doubles written by
// bit pattern so round-trips are bit-exact. Loaders throw std::runtime_error
// on bad magic, truncation, or implausible dimensions.

namespace io {
void write_u64(std::ostream& os, std::uint64_t v);
std::uint64_t read_u64(std::istream& is);
void write_f64(std::ostream& os, double v);
double read_f64(std::istream& is);
void write_f64s(std::ostream& os, const double* v, std::size_t n);
void read_f64s(std::istream& is, double* v, std::size_t n);
void write_tag(std::ostream& os, const char tag[4]);
void expect_tag(std::istream& is, const char tag[4]);
} // namespace io

void save_mlp(std::ostream& os, const MlpParams& p);
MlpParams load_mlp(std::istream& is);

void save_adam(std::ostream& os, const AdamState& s);
AdamState load_adam(std::istream& is);

} // namespace hgr
