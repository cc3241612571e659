#include <doctest.h>

#include "property_suites.hpp"

namespace {

void expect(const props::SuiteResult& r) {
  INFO(r.name << ": " << r.failures << "/" << r.cases << " failed, worst " << r.worst << ", first " << r.firstFailure);
  CHECK(r.ok());
}

}  // namespace

TEST_CASE("substitution symmetry") { expect(props::substitution_symmetry(1000, 101)); }
TEST_CASE("uniqueness of the steady state") { expect(props::uniqueness(300, 102)); }
TEST_CASE("boundary insensitivity") { expect(props::boundary_insensitivity(300, 103)); }
TEST_CASE("truncation honesty") { expect(props::truncation_honesty(1000, 104)); }
TEST_CASE("growth per step") { expect(props::growth_per_step(1000, 105)); }
TEST_CASE("simulation determinism") { expect(props::determinism(1000, 106)); }
TEST_CASE("analytic vs fixed point") { expect(props::analytic_vs_fixed_point(50, 107)); }
TEST_CASE("mass closure") { expect(props::mass_closure(200, 108)); }
TEST_CASE("gradient step stability") { expect(props::gradient_stability(200, 109)); }
