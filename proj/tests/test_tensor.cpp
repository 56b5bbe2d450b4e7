#include "doctest.h"
#include "spikeatk/tensor.hpp"

#include <limits>
#include <stdexcept>

using namespace spikeatk;

TEST_CASE("geometry reports sizes") {
  Geometry g{2, 8, 8, 50};
  CHECK(g.spatial_size() == 128);
  CHECK(g.cell_count() == 6400);
  CHECK(g.describe() == "2x8x8x50");
  CHECK(g.valid());
  CHECK_FALSE(Geometry{0, 8, 8, 50}.valid());
}

TEST_CASE("spike tensor starts zeroed and stores cells") {
  SpikeTensor t(Geometry{2, 3, 4, 5});
  CHECK(t.size() == 120);
  CHECK(t.count_ones() == 0);
  t.set(1, 2, 3, 4, true);
  CHECK(t.at(1, 2, 3, 4) == 1);
  CHECK(t.count_ones() == 1);
  t.set(1, 2, 3, 4, false);
  CHECK(t.count_ones() == 0);
}

TEST_CASE("spike tensor layout is timestep major") {
  Geometry g{2, 2, 2, 3};
  SpikeTensor t(g);
  t.set(0, 0, 0, 1, true);
  CHECK(t.frame(1)[0] == 1);
  CHECK(t.frame(0)[0] == 0);
  // frame 1 starts after one full spatial block
  CHECK(t.index(0, 0, 0, 1) == g.spatial_size());
}

TEST_CASE("spike tensor rejects non-binary data") {
  CHECK_THROWS_AS(SpikeTensor(Geometry{1, 1, 1, 2}, {0, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpikeTensor(Geometry{1, 1, 1, 2}, {0, 1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpikeTensor(Geometry{0, 1, 1, 2}), std::invalid_argument);
}

TEST_CASE("real tensor rejects non-finite values") {
  CHECK_THROWS_AS(RealTensor(Geometry{1, 1, 1, 2},
                             {1.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RealTensor(Geometry{1, 1, 1, 2},
                             {1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  RealTensor ok(Geometry{1, 1, 1, 2}, {1.0, -2.5});
  CHECK(ok[1] == -2.5);
}

TEST_CASE("geometry mismatch errors name both shapes") {
  try {
    require_same_geometry(Geometry{1, 2, 3, 4}, Geometry{4, 3, 2, 1}, "test");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& err) {
    const std::string msg = err.what();
    CHECK(msg.find("1x2x3x4") != std::string::npos);
    CHECK(msg.find("4x3x2x1") != std::string::npos);
  }
}
