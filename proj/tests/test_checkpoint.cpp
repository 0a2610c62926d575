#include "doctest.h"

#include "hgr/checkpoint.hpp"
#include "hgr/mlp.hpp"
#include "hgr/optim.hpp"
#include "hgr/rng.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

using namespace hgr;

TEST_CASE("u64 and f64 primitives round-trip exactly") {
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  const std::uint64_t us[] = {0, 1, 0xdeadbeefcafebabeULL, ~0ULL};
  const double ds[] = {0.0, -0.0, 1.0 / 3.0, -1e308, 5e-324,
                       0x1.fffffffffffffp1023};
  for (const auto u : us) io::write_u64(ss, u);
  for (const auto d : ds) io::write_f64(ss, d);
  for (const auto u : us) CHECK(io::read_u64(ss) == u);
  for (const auto d : ds) {
    const double r = io::read_f64(ss);
    CHECK(std::bit_cast<std::uint64_t>(r) == std::bit_cast<std::uint64_t>(d));
  }
}

TEST_CASE("mlp round-trip is bit-exact") {
  MlpParams p = MlpParams::make({6, 33, 17, 4}, OutputActivation::tanh);
  Rng rng(11);
  init_uniform(p, rng);
  p.data[5] = 1.0 / 3.0; // a value with a non-terminating binary mantissa tail

  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  save_mlp(ss, p);
  const MlpParams q = load_mlp(ss);

  CHECK(q.layer_sizes == p.layer_sizes);
  CHECK(q.output_activation == p.output_activation);
  REQUIRE(q.data.size() == p.data.size());
  for (std::size_t i = 0; i < p.data.size(); ++i)
    CHECK(std::bit_cast<std::uint64_t>(q.data[i]) ==
          std::bit_cast<std::uint64_t>(p.data[i]));
}

TEST_CASE("adam state round-trip is bit-exact including step count") {
  AdamState s = AdamState::make(37);
  Rng rng(3);
  for (auto& m : s.first_moment) m = rng.normal(0.0, 0.01);
  for (auto& v : s.second_moment) v = rng.uniform(0.0, 1e-4);
  s.step_count = 123456789ULL;

  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  save_adam(ss, s);
  const AdamState t = load_adam(ss);

  CHECK(t.step_count == s.step_count);
  CHECK(t.beta1 == s.beta1);
  CHECK(t.beta2 == s.beta2);
  CHECK(t.eps_adam == s.eps_adam);
  REQUIRE(t.first_moment.size() == s.first_moment.size());
  for (std::size_t i = 0; i < s.first_moment.size(); ++i) {
    CHECK(std::bit_cast<std::uint64_t>(t.first_moment[i]) ==
          std::bit_cast<std::uint64_t>(s.first_moment[i]));
    CHECK(std::bit_cast<std::uint64_t>(t.second_moment[i]) ==
          std::bit_cast<std::uint64_t>(s.second_moment[i]));
  }
}

TEST_CASE("loader rejects corrupt input") {
  MlpParams p = MlpParams::make({2, 2}, OutputActivation::identity);

  SUBCASE("bad magic") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    ss << "NOPE";
    CHECK_THROWS_AS(load_mlp(ss), std::runtime_error);
  }
  SUBCASE("truncated payload") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    save_mlp(ss, p);
    const std::string full = ss.str();
    std::stringstream cut(std::string(full.begin(), full.end() - 9),
                          std::ios::in | std::ios::binary);
    CHECK_THROWS_AS(load_mlp(cut), std::runtime_error);
  }
  SUBCASE("implausible layer count") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    io::write_tag(ss, "MLP1");
    io::write_u64(ss, 1u << 30);
    CHECK_THROWS_AS(load_mlp(ss), std::runtime_error);
  }
  SUBCASE("adam bad magic") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    save_mlp(ss, p); // wrong section type entirely
    CHECK_THROWS_AS(load_adam(ss), std::runtime_error);
  }
}
