// SPDX-License-Identifier: MIT

#include "plab/checkpoint.hpp"

#include <cstdio>
#include <fstream>

#include "test_util.hpp"

using namespace plab;

TEST_SUITE("checkpoint") {
  TEST_CASE("metadata and arrays survive a save/load round trip") {
    const std::string path = "ckpt_roundtrip.bin";
    Checkpoint ck;
    ck.meta["label"] = "crystal";
    ck.meta["params"]["a"] = 1.7;
    ck.meta["params"]["z"] = 1;
    ck.add_array("eigenvalues", {0.25, -1.5, 3.75});
    ck.add_complex("orbital", {{1.0, -2.0}, {0.0, 0.5}});
    ck.save(path);

    const auto back = Checkpoint::load(path);
    CHECK(back.meta["label"] == "crystal");
    CHECK(back.meta["params"]["a"].get<double>() == 1.7);
    CHECK(back.array("eigenvalues") == std::vector<double>{0.25, -1.5, 3.75});
    const auto orb = back.complex_array("orbital");
    REQUIRE(orb.size() == 2);
    CHECK(orb[0] == cdouble{1.0, -2.0});
    CHECK(orb[1] == cdouble{0.0, 0.5});
    CHECK(back.has_array("orbital"));
    CHECK(!back.has_array("missing"));
    CHECK_ERRC(back.array("missing"), errc::bad_config);
    std::remove(path.c_str());
  }

  TEST_CASE("corrupt files are rejected") {
    const std::string path = "ckpt_corrupt.bin";
    {
      std::ofstream out(path, std::ios::binary);
      out << "NOT A CHECKPOINT AT ALL";
    }
    CHECK_ERRC(Checkpoint::load(path), errc::bad_config);
    std::remove(path.c_str());
    CHECK_ERRC(Checkpoint::load("definitely_missing_file.bin"), errc::bad_config);
  }
}
