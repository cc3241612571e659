#include <doctest.h>

#include "generators.hpp"
#include "repliscope/model.hpp"

using namespace repliscope;

namespace {

template <typename F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("two-kind parameterization") {
  const auto p = ModelParams::twoKind(0.1, StudyProfile{0.8, 0.05}, 0.2);
  REQUIRE(p.kindCount() == 2);
  CHECK(p.kinds[0].baseRateShare == doctest::Approx(0.1));
  CHECK(p.kinds[1].baseRateShare == doctest::Approx(0.9));
  CHECK(p.kinds[0].initialPositiveRate == 0.8);
  CHECK(p.kinds[1].replicationPositiveRate == 0.05);
  CHECK(p.comm.isFull());
  CHECK(p.activityRate == 1.0);
  CHECK(p.tallyBound == 30);

  CHECK(codeOf([] { ModelParams::twoKind(0.1, StudyProfile{0.05, 0.05}, 0.2); }) == ErrorCode::InvalidParameter);
  CHECK(codeOf([] { ModelParams::twoKind(1.2, StudyProfile{}, 0.2); }) == ErrorCode::InvalidProbability);
}

TEST_CASE("validation rejects bad parameters") {
  auto base = ModelParams::twoKind(0.1, StudyProfile{}, 0.2);

  auto p = base;
  p.replicationRate = 1.0;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidProbability);

  p = base;
  p.comm.cRepNegative = -0.1;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidProbability);

  p = base;
  p.kinds[0].baseRateShare = 0.3;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::SharesDontSum);

  p = base;
  p.targeting.targetFraction = 0.5;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::EmptyTarget);

  p = base;
  p.targeting = Targeting{0.5, {1, 31}};
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidParameter);

  p = base;
  p.activityRate = 0.0;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidParameter);

  p = base;
  p.tallyBound = 0;
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidParameter);

  p = base;
  p.kinds.clear();
  CHECK(codeOf([&] { validate_params(p); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("validation canonicalizes") {
  auto p = ModelParams::twoKind(0.1, StudyProfile{}, 0.2);
  p.kinds[0].baseRateShare = 0.1 + 4e-10;
  p.targeting = Targeting{0.5, {3, 1, 2, 1}};
  const auto v = validate_params(p);
  CHECK(v.kinds[0].baseRateShare + v.kinds[1].baseRateShare == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.targeting.targetTallies == std::vector<int>{1, 2, 3});
  CHECK(validate_params(v) == v);
}

TEST_CASE("validate_params is idempotent on generated parameters") {
  gen::Source src(7);
  gen::Ranges rg;
  rg.allowTargeting = true;
  for (int i = 0; i < 1000; ++i) {
    const auto p = gen::two_kind(src, rg);
    REQUIRE(validate_params(p) == p);
  }
}

TEST_CASE("warnings for an uninformative replication profile") {
  const auto p = ModelParams::twoKind(0.1, StudyProfile{0.8, 0.05}, StudyProfile{0.05, 0.3}, 0.2);
  CHECK(params_warnings(p).size() == 1);
  CHECK(params_warnings(ModelParams::twoKind(0.1, StudyProfile{}, 0.2)).empty());
}

TEST_CASE("stage rates and novel publication") {
  const auto p = ModelParams::twoKind(0.1, StudyProfile{0.6, 0.2}, StudyProfile{0.8, 0.05}, 0.2,
                                      CommunicationPolicy{0.5, 1, 1});
  CHECK(positive_rate(p.kinds[0], Stage::initial) == 0.6);
  CHECK(positive_rate(p.kinds[0], Stage::replication) == 0.8);
  CHECK(novel_publication_rate(p.kinds[1], p.comm) == doctest::Approx(0.2 + 0.8 * 0.5));
}

TEST_CASE("tally distribution bookkeeping") {
  TallyDistribution d(2, 3);
  CHECK(d.width() == 7);
  d.at(0, 1) = 2.0;
  d.at(1, -3) = 1.0;
  d.at(1, 1) = 1.0;
  CHECK(d.total() == 4.0);
  CHECK(d.kindTotal(1) == 2.0);
  CHECK(d.tallyTotal(1) == 3.0);
  d.normalize();
  CHECK(d.normalization() == Normalization::normalized);
  CHECK(d.at(0, 1) == 0.5);
  CHECK(codeOf([&] { (void)d.at(0, 4); }) == ErrorCode::BoundsMismatch);
  CHECK(codeOf([&] { (void)d.at(2, 0); }) == ErrorCode::BoundsMismatch);

  TallyDistribution empty(2, 3);
  CHECK(codeOf([&] { empty.normalize(); }) == ErrorCode::MassBlowup);
  empty.at(0, 0) = -1.0;
  CHECK(codeOf([&] { empty.checkFinite(); }) == ErrorCode::MassBlowup);
}

TEST_CASE("error messages carry their code") {
  const Error e(ErrorCode::NoConvergence, "stalled");
  CHECK(std::string(e.what()).find("NoConvergence") != std::string::npos);
  CHECK(to_string(ErrorCode::MassBlowup) == "MassBlowup");
}
