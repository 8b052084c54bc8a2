#include "doctest.h"

#include <cmath>

#include "support/fixtures.hpp"
#include "support/reference.hpp"
#include "glotsal/instances.hpp"
#include "glotsal/solver.hpp"

using namespace glotsal;

namespace {

NetworkParams su_only(int iterations) {
  NetworkParams p;
  p.alpha = 1.0;
  p.beta = 0.0;
  p.iterations = iterations;
  p.normalize_maps = false;
  return p;
}

std::vector<std::pair<Pixel, int>> along(Pixel start, const std::vector<int>& dirs) {
  std::vector<std::pair<Pixel, int>> on;
  Pixel at = start;
  for (int d : dirs) {
    on.push_back({at, d});
    at = {at.x + kDirections[d][0], at.y + kDirections[d][1]};
  }
  return on;
}

// Octagonal ring of 16 active elements whose turns are all pi/4.
const std::vector<int> kOctagon{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7};

}  // namespace

TEST_CASE("all-virtual lattice with zero field has nothing salient") {
  const ElementLattice lat = fixture::with_active(6, 6, {});
  NetworkParams p;
  p.iterations = 10;
  const SaliencyState s = run_dp(lat, VelocityField::zeros(6, 6), p);
  CHECK(s.iteration == 10);
  for (ElementId id = 0; id < lat.size(); ++id) {
    CHECK(s.phi[id] == 0.0);
    CHECK(s.raw_phi[id] == 0.0);
    CHECK(s.best_next[id] == kNoElement);
  }
}

TEST_CASE("isolated straight segment of six active elements") {
  const ElementLattice lat = fixture::with_active(12, 5, along({3, 2}, {0, 0, 0, 0, 0, 0}));
  const ElementId tail = lat.find(lat.pixel_index({3, 2}), 0);
  for (int iterations : {6, 7, 10}) {
    CAPTURE(iterations);
    const SaliencyState s = run_dp(lat, VelocityField::zeros(12, 5), su_only(iterations));
    CHECK(s.raw_phi[tail] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(s.phi[tail] == s.raw_phi[tail]);
    const Curve c = backtrack(s, lat, tail, iterations);
    REQUIRE(c.elements.size() >= 6);
    for (int k = 0; k < 6; ++k) {
      CHECK(lat.pixel(lat.from_index(c.elements[k])) == Pixel{3 + k, 2});
      CHECK(lat.direction(c.elements[k]) == 0);
    }
  }
  // Fewer iterations see only a prefix of the segment.
  CHECK(run_dp(lat, VelocityField::zeros(12, 5), su_only(4)).raw_phi[tail] == doctest::Approx(4.0));
}

TEST_CASE("defaults normalize phi by the per-frame maxima") {
  const ElementLattice lat = fixture::with_active(12, 5, along({3, 2}, {0, 0, 0, 0, 0, 0}));
  VelocityField f = VelocityField::zeros(12, 5);
  f.vx.setConstant(0.4);
  f.valid.setConstant(true);
  NetworkParams p;
  p.iterations = 8;
  const SaliencyState s = run_dp(lat, f, p);
  const ElementId tail = lat.find(lat.pixel_index({3, 2}), 0);
  CHECK(s.argmax() == tail);
  CHECK(s.scale.su == doctest::Approx(6.0));
  CHECK(s.scale.ms == doctest::Approx(6 * 0.4));
  CHECK(s.phi[tail] == doctest::Approx(1.0));
  CHECK(s.raw_phi[tail] == doctest::Approx(0.3 * 6.0 + 0.7 * 2.4));
}

TEST_CASE("run_dp matches brute force on random 6x6 instances") {
  InstanceSpec spec;
  for (bool combined : {false, true}) {
    NetworkParams p = combined ? NetworkParams{} : su_only(5);
    p.iterations = 5;
    CAPTURE(combined);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const RandomInstance inst = random_instance(seed, spec, p);
      const SaliencyState s = run_dp(inst.lattice, inst.field, p);
      const auto [best, witness] = brute_force_max(inst.lattice, inst.field, p, 5);
      CHECK(*std::max_element(s.raw_phi.begin(), s.raw_phi.end()) == doctest::Approx(best).epsilon(1e-12));
      CHECK(combined_measure(witness, inst.lattice, inst.field, p) == doctest::Approx(best).epsilon(1e-12));
      const auto per = brute_force_element_max(inst.lattice, inst.field, p, 5);
      const auto oracle = ref::best_per_element(inst.lattice, inst.field, p, 5);
      for (ElementId id = 0; id < inst.lattice.size(); ++id) {
        CHECK(std::fabs(s.raw_phi[id] - per[id]) <= 1e-9);
        CHECK(std::fabs(oracle[id] - per[id]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("run_dp preconditions") {
  const ElementLattice lat = fixture::with_active(6, 6, {});
  NetworkParams p;
  p.ms_form = MsForm::head_anchored;
  CHECK_THROWS_AS(run_dp(lat, VelocityField::zeros(6, 6), p), ParameterError);
  CHECK_THROWS_AS(run_dp(lat, VelocityField::zeros(5, 6), NetworkParams{}), ShapeError);
  NetworkParams zero;
  zero.iterations = 0;
  CHECK_THROWS_AS(run_dp(lat, VelocityField::zeros(6, 6), zero), ParameterError);
}

TEST_CASE("brute_force_max") {
  SUBCASE("single active element") {
    const ElementLattice lat = fixture::with_active(5, 5, {{{2, 2}, 0}});
    VelocityField f = VelocityField::zeros(5, 5);
    f.vx.setConstant(0.3);
    f.vy.setConstant(0.4);
    NetworkParams p;
    const auto [value, curve] = brute_force_max(lat, f, p, 4);
    CHECK(value == doctest::Approx(0.3 * 1.0 + 0.7 * 0.5).epsilon(1e-12));
    REQUIRE(curve.elements.size() == 1);
    CHECK(curve.elements[0] == lat.find(lat.pixel_index({2, 2}), 0));
  }
  SUBCASE("two collinear active elements") {
    const ElementLattice lat = fixture::with_active(5, 5, along({1, 2}, {0, 0}));
    const auto [value, curve] = brute_force_max(lat, VelocityField::zeros(5, 5), su_only(1), 4);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(curve.elements == fixture::chain(lat, {1, 2}, {0, 0}).elements);
  }
  SUBCASE("bounds every sampled curve") {
    std::mt19937_64 rng(17);
    const NetworkParams p;
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
      const RandomInstance inst = random_instance(seed, InstanceSpec{}, p);
      const double best = brute_force_max(inst.lattice, inst.field, p, 5).first;
      for (int k = 0; k < 300; ++k) {
        const Curve c = fixture::random_walk(inst.lattice, rng, 1 + k % 5, p);
        CHECK(combined_measure(c, inst.lattice, inst.field, p) <= best + 1e-12);
      }
    }
  }
  SUBCASE("capacity guard") {
    const ElementLattice lat = fixture::with_active(30, 30, {});
    CHECK_THROWS_AS(brute_force_max(lat, VelocityField::zeros(30, 30), NetworkParams{}, 12), CapacityError);
    CHECK_THROWS_AS(brute_force_max(lat, VelocityField::zeros(30, 30), NetworkParams{}, 0), ParameterError);
  }
  SUBCASE("head anchored form is searchable by brute force") {
    NetworkParams p;
    p.ms_form = MsForm::head_anchored;
    const RandomInstance inst = random_instance(3, InstanceSpec{}, p);
    const auto [value, curve] = brute_force_max(inst.lattice, inst.field, p, 4);
    CHECK(value == doctest::Approx(ref::blend(curve.elements, inst.lattice, inst.field, p)).epsilon(1e-12));
    const auto oracle = ref::best_per_element(inst.lattice, inst.field, p, 4);
    CHECK(value == doctest::Approx(*std::max_element(oracle.begin(), oracle.end())).epsilon(1e-12));
  }
}

TEST_CASE("backtrack") {
  SUBCASE("element without a successor") {
    const ElementLattice lat = fixture::with_active(5, 5, {});
    const SaliencyState s = run_dp(lat, VelocityField::zeros(5, 5), su_only(3));
    const Curve c = backtrack(s, lat, 7, 10);
    CHECK(c.elements == std::vector<ElementId>{7});
    CHECK_FALSE(c.closed);
    CHECK_THROWS_AS(backtrack(s, lat, -1, 10), TopologyError);
  }
  SUBCASE("closed octagon") {
    const ElementLattice lat = fixture::with_active(9, 9, along({3, 1}, kOctagon));
    const SaliencyState s = run_dp(lat, VelocityField::zeros(9, 9), su_only(40));
    const ElementId start = lat.find(lat.pixel_index({3, 1}), 0);
    const Curve c = backtrack(s, lat, start, 100);
    CHECK(c.closed);
    CHECK(c.elements == fixture::chain(lat, {3, 1}, kOctagon).elements);
    CHECK(lat.to_index(c.elements.back()) == lat.from_index(start));
    CHECK(backtrack(s, lat, start, 5).elements.size() == 6);
  }
}

TEST_CASE("front capacity is not reached on random instances") {
  const NetworkParams p;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InstanceSpec spec;
    spec.width = spec.height = 12;
    const RandomInstance inst = random_instance(seed, spec, p);
    const SaliencyState s = run_dp(inst.lattice, inst.field, p);
    CHECK(s.front_truncations == 0);
    for (auto n : s.front_size) CHECK(n <= kFrontCapacity);
  }
}

TEST_CASE("saliency_map takes the best outgoing element per pixel") {
  const ElementLattice lat = fixture::with_active(12, 5, along({3, 2}, {0, 0, 0, 0, 0, 0}));
  const SaliencyState s = run_dp(lat, VelocityField::zeros(12, 5), su_only(8));
  const PlaneD map = saliency_map(s, lat);
  CHECK(map(2, 3) == doctest::Approx(6.0));
  CHECK(map(2, 8) == doctest::Approx(1.0));
  CHECK(map(2, 9) == doctest::Approx(0.0));
}
