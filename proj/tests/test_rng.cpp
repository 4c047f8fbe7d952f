#include <doctest.h>

#include <cmath>
#include <set>

#include "wigner/rng.hpp"

using namespace wigner;

TEST_CASE("Philox known answers") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("splitmix64 reference values") {
  // First output of the reference generator seeded with 0.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
}

TEST_CASE("entry streams are pure functions of their key") {
  EntryStream a(7, 3, 5);
  EntryStream b(7, 3, 5);
  for (int i = 0; i < 20; ++i) CHECK(a.next_u32() == b.next_u32());
  EntryStream c(7, 5, 3);
  EntryStream d(8, 3, 5);
  EntryStream e(7, 3, 5, 1);
  CHECK(EntryStream(7, 3, 5).next_u32() != c.next_u32());
  CHECK(EntryStream(7, 3, 5).next_u32() != d.next_u32());
  CHECK(EntryStream(7, 3, 5).next_u32() != e.next_u32());
}

TEST_CASE("uniform and normal draws have the right moments") {
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  const int count = 200000;
  EntryStream s(42, 0, 0);
  for (int i = 0; i < count; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    su2 += u * u;
  }
  for (int i = 0; i < count; ++i) {
    const double z = s.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(su / count == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / count == doctest::Approx(1.0 / 3).epsilon(0.01));
  CHECK(std::abs(sn / count) < 0.01);
  CHECK(sn2 / count == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sn4 / count == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("bernoulli rate") {
  int hits = 0;
  for (std::uint32_t j = 0; j < 100000; ++j) hits += EntryStream(1, 0, j).bernoulli(0.1);
  CHECK(hits / 100000.0 == doctest::Approx(0.1).epsilon(0.05));
}
