#include "hgr/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hgr {

namespace io {

void write_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

std::uint64_t read_u64(std::istream& is) {
  char buf[8];
  is.read(buf, 8);
  if (is.gcount() != 8) throw std::runtime_error("checkpoint: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double v) {
  write_u64(os, std::bit_cast<std::uint64_t>(v));
}

double read_f64(std::istream& is) {
  return std::bit_cast<double>(read_u64(is));
}

void write_f64s(std::ostream& os, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) write_f64(os, v[i]);
}

void read_f64s(std::istream& is, double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = read_f64(is);
}

void write_tag(std::ostream& os, const char tag[4]) { os.write(tag, 4); }

void expect_tag(std::istream& is, const char tag[4]) {
  char buf[4];
  is.read(buf, 4);
  if (is.gcount() != 4 || std::memcmp(buf, tag, 4) != 0)
    throw std::runtime_error("checkpoint: bad section tag");
}

} // namespace io

namespace {
constexpr std::uint64_t kMaxLayers = 64;
constexpr std::uint64_t kMaxWidth = 1u << 20;
} // namespace

void save_mlp(std::ostream& os, const MlpParams& p) {
  io::write_tag(os, "MLP1");
  io::write_u64(os, p.layer_sizes.size());
  for (const std::size_t s : p.layer_sizes) io::write_u64(os, s);
  io::write_u64(os, p.output_activation == OutputActivation::tanh ? 1 : 0);
  io::write_u64(os, p.data.size());
  io::write_f64s(os, p.data.data(), p.data.size());
}

MlpParams load_mlp(std::istream& is) {
  io::expect_tag(is, "MLP1");
  const std::uint64_t nl = io::read_u64(is);
  if (nl < 2 || nl > kMaxLayers)
    throw std::runtime_error("checkpoint: implausible layer count");
  std::vector<std::size_t> sizes(nl);
  for (auto& s : sizes) {
    const std::uint64_t v = io::read_u64(is);
    if (v == 0 || v > kMaxWidth)
      throw std::runtime_error("checkpoint: implausible layer width");
    s = static_cast<std::size_t>(v);
  }
  const std::uint64_t act = io::read_u64(is);
  if (act > 1) throw std::runtime_error("checkpoint: unknown activation");
  MlpParams p = MlpParams::make(
      std::move(sizes),
      act == 1 ? OutputActivation::tanh : OutputActivation::identity);
  const std::uint64_t n = io::read_u64(is);
  if (n != p.data.size())
    throw std::runtime_error("checkpoint: parameter count mismatch");
  io::read_f64s(is, p.data.data(), p.data.size());
  return p;
}

void save_adam(std::ostream& os, const AdamState& s) {
  io::write_tag(os, "ADM1");
  io::write_u64(os, s.step_count);
  io::write_f64(os, s.beta1);
  io::write_f64(os, s.beta2);
  io::write_f64(os, s.eps_adam);
  io::write_u64(os, s.first_moment.size());
  io::write_f64s(os, s.first_moment.data(), s.first_moment.size());
  io::write_f64s(os, s.second_moment.data(), s.second_moment.size());
}

AdamState load_adam(std::istream& is) {
  io::expect_tag(is, "ADM1");
  AdamState s;
  s.step_count = io::read_u64(is);
  s.beta1 = io::read_f64(is);
  s.beta2 = io::read_f64(is);
  s.eps_adam = io::read_f64(is);
  const std::uint64_t n = io::read_u64(is);
  if (n > (kMaxWidth + 1) * kMaxWidth)
    throw std::runtime_error("checkpoint: implausible moment count");
  s.first_moment.resize(n);
  s.second_moment.resize(n);
  io::read_f64s(is, s.first_moment.data(), n);
  io::read_f64s(is, s.second_moment.data(), n);
  return s;
}

} // namespace hgr
