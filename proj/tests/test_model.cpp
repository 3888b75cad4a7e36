#include "doctest.h"

#include <cmath>
#include <limits>

#include "entflow/model.hpp"

using namespace entflow;

TEST_SUITE_BEGIN("model");

TEST_CASE("validate accepts in-range points and is idempotent") {
  CouplingPoint p{1.0, 1.5, 0.0};
  CouplingPoint v = validate(p);
  CHECK(v.gamma == p.gamma);
  CHECK(v.lambda == p.lambda);
  CHECK(v.epsilon == p.epsilon);
  CouplingPoint vv = validate(v);
  CHECK(vv.lambda == v.lambda);
}

TEST_CASE("validate rejects negative fields") {
  CHECK_THROWS_WITH_AS(validate({1.0, -0.1, 0.0}), doctest::Contains("negative_field"), Error);
  CHECK_THROWS_AS(validate({1.0, 1.0, -0.5}), Error);
  try {
    validate({1.0, -0.1, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_field);
  }
}

TEST_CASE("validate rejects non-finite fields") {
  double nan = std::numeric_limits<double>::quiet_NaN();
  double inf = std::numeric_limits<double>::infinity();
  try {
    validate({nan, 1.0, 0.0});
    FAIL("expected non_finite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_finite);
  }
  CHECK_THROWS_AS(validate({1.0, inf, 0.0}), Error);
}

TEST_CASE("flow_distance") {
  CHECK(flow_distance({1.0, 1.0, 0.0}) == 0.0);
  CHECK(flow_distance({1.0, 1.5, 0.0}) == doctest::Approx(0.5));
  CHECK(flow_distance({1.0, 0.8, 0.0}) == doctest::Approx(0.2));
}

TEST_CASE("flow_distance is symmetric about lambda* = 1") {
  for (double lam : {0.0, 0.3, 0.7, 0.95, 1.0}) {
    CHECK(flow_distance({1.0, lam, 0.0}) == doctest::Approx(flow_distance({1.0, 2.0 - lam, 0.0})));
  }
}

TEST_CASE("branch helpers") {
  CHECK(branch_of({1.0, 1.2, 0.0}) == Branch::above_critical);
  CHECK(branch_of({1.0, 0.2, 0.0}) == Branch::below_critical);
  CHECK_THROWS_AS(branch_of({1.0, 1.0, 0.0}), Error);

  CHECK(further_along_flow({1, 1.2, 0}, {1, 1.5, 0}));
  CHECK_FALSE(further_along_flow({1, 1.5, 0}, {1, 1.2, 0}));
  CHECK_FALSE(further_along_flow({1, 1.5, 0}, {1, 1.5, 0}));
  CHECK_THROWS_AS(further_along_flow({1, 0.8, 0}, {1, 1.2, 0}), Error);
}

TEST_CASE("block_size validation") {
  CHECK(block_size(1).sites == 1);
  CHECK(block_size(64).sites == 64);
  CHECK_THROWS_AS(block_size(0), Error);
  CHECK_THROWS_AS(block_size(-4), Error);
}

TEST_SUITE_END();
