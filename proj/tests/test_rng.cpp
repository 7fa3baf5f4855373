#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "rssiloc/rng.hpp"

#include "support.hpp"

using rssiloc::RngStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  std::uint32_t out[4];

  RngStream::philox4x32_10(0, 0, 0, 0, 0, 0, out);
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  RngStream::philox4x32_10(0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu,
                           0xffffffffu, 0xffffffffu, out);
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  RngStream::philox4x32_10(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u,
                           0xa4093822u, 0x299f31d0u, out);
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("first draws come from the zero-counter block") {
  RngStream rng(0, 0);
  CHECK(rng.next_u64() == (0x6627e8d5ull | (0xe169c58dull << 32)));
  CHECK(rng.next_u64() == (0xbc57ac4cull | (0x9b00dbd8ull << 32)));
}

TEST_CASE("identical (seed, stream) reproduces the sequence bit for bit") {
  RngStream a(0x1234abcd5678ef01ull, 77);
  RngStream b(0x1234abcd5678ef01ull, 77);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(0x1234abcd5678ef01ull, 77);
  RngStream d(0x1234abcd5678ef01ull, 77);
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("distinct streams and seeds decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  RngStream c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint64_t va = a.next_u64();
    if (va == b.next_u64()) ++same_ab;
    if (va == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("substream derivation is deterministic and collision free in practice") {
  RngStream root(7, 0);
  CHECK(root.substream(3).stream() == root.substream(3).stream());
  CHECK(root.substream(3).stream() != root.substream(4).stream());
  // children of different parents stay apart
  CHECK(root.substream(1).substream(0).stream() != root.substream(2).substream(0).stream());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform") {
  RngStream rng(99, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal draws match N(0,1) moments") {
  RngStream rng(123, 5);
  testsupport::RunningStats stats;
  for (int i = 0; i < 1000000; ++i) stats.add(rng.normal());
  CHECK(std::abs(stats.mean) < 0.004);  // 4 sigma of the MC mean
  CHECK(stats.stddev() == doctest::Approx(1.0).epsilon(0.005));
}
