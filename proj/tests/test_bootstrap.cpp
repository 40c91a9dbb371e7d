#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "dcic/bootstrap.hpp"
#include "dcic/dataset.hpp"
#include "dcic/error.hpp"
#include "dcic/estimators.hpp"
#include "dcic/numerics.hpp"

using dcic::BootstrapConfig;
using dcic::EffectRequest;
using dcic::Mode;
using dcic::PanelDataset;
using dcic::Parameter;

namespace {

PanelDataset demo_dataset(std::uint64_t seed, std::size_t n_per_cell) {
  dcic::Rng rng(seed);
  std::vector<std::vector<double>> cells(4);
  for (auto& cell : cells) {
    cell.resize(n_per_cell);
    for (double& v : cell) v = rng.uniform01() * 4.0;
  }
  // Mild treatment lift so the target effect is not centered at zero.
  for (double& v : cells[3]) v += 1.0;
  return PanelDataset::from_cells(dcic::TreatmentLevels::build({"0", "A"}, false),
                                  std::move(cells));
}

const EffectRequest kAtt{Parameter::att, Mode::weak, std::nullopt, "A", "0", "A"};

}  // namespace

TEST_CASE("bootstrap config is validated", "[bootstrap]") {
  const auto ds = demo_dataset(1, 30);
  REQUIRE_THROWS_AS(dcic::bootstrap_ci(ds, kAtt, {0, 0.95, 1, 1}), dcic::Error);
  REQUIRE_THROWS_AS(dcic::bootstrap_ci(ds, kAtt, {9, 0.0, 1, 1}), dcic::Error);
  REQUIRE_THROWS_AS(dcic::bootstrap_ci(ds, kAtt, {9, 1.0, 1, 1}), dcic::Error);
  REQUIRE_THROWS_AS(dcic::bootstrap_ci(ds, kAtt, {9, 0.95, 1, 0}), dcic::Error);
}

TEST_CASE("request errors surface before any replicate runs", "[bootstrap]") {
  const auto ds = demo_dataset(2, 20);
  const EffectRequest bad{Parameter::ate, Mode::weak, std::nullopt, "A", "0", ""};
  REQUIRE_THROWS_AS(dcic::bootstrap_ci(ds, bad, {50, 0.95, 1, 1}), dcic::Error);
}

TEST_CASE("single replicate collapses the interval to one value", "[bootstrap]") {
  const auto ds = demo_dataset(3, 25);
  const auto s = dcic::bootstrap_ci(ds, kAtt, {1, 0.95, 7, 1});
  REQUIRE(s.replicate_values.size() == 1);
  REQUIRE(s.lower == s.replicate_values[0]);
  REQUIRE(s.upper == s.replicate_values[0]);
}

TEST_CASE("constant outcomes give a zero-width interval at zero", "[bootstrap]") {
  const auto ds = PanelDataset::from_cells(
      dcic::TreatmentLevels::build({"0", "A"}, false),
      {{3, 3, 3}, {3, 3}, {3, 3, 3}, {3, 3}});
  const auto s = dcic::bootstrap_ci(ds, kAtt, {99, 0.95, 1, 1});
  REQUIRE(s.lower == 0.0);
  REQUIRE(s.upper == 0.0);
}

TEST_CASE("replicates are deterministic in the seed", "[bootstrap][determinism]") {
  const auto ds = demo_dataset(4, 40);
  const auto a = dcic::bootstrap_ci(ds, kAtt, {200, 0.9, 42, 1});
  const auto b = dcic::bootstrap_ci(ds, kAtt, {200, 0.9, 42, 1});
  REQUIRE(a.replicate_values == b.replicate_values);
  REQUIRE(a.lower == b.lower);
  REQUIRE(a.upper == b.upper);

  const auto c = dcic::bootstrap_ci(ds, kAtt, {200, 0.9, 43, 1});
  REQUIRE(a.replicate_values != c.replicate_values);
}

TEST_CASE("results are byte-identical across thread counts", "[bootstrap][determinism]") {
  const auto ds = demo_dataset(5, 35);
  const std::vector<EffectRequest> requests = {
      kAtt,
      {Parameter::qtt, Mode::weak, 0.5, "A", "0", "A"},
      {Parameter::did_att, Mode::weak, std::nullopt, "A", "", ""},
  };
  const auto one = dcic::bootstrap_many(ds, requests, {257, 0.95, 11, 1});
  const auto four = dcic::bootstrap_many(ds, requests, {257, 0.95, 11, 4});
  const auto seven = dcic::bootstrap_many(ds, requests, {257, 0.95, 11, 7});
  REQUIRE(one.size() == 3);
  for (std::size_t q = 0; q < requests.size(); ++q) {
    REQUIRE(one[q].replicate_values == four[q].replicate_values);
    REQUIRE(one[q].replicate_values == seven[q].replicate_values);
    REQUIRE(one[q].lower == four[q].lower);
    REQUIRE(one[q].upper == seven[q].upper);
  }
}

TEST_CASE("more threads than replicates still works", "[bootstrap]") {
  const auto ds = demo_dataset(6, 20);
  const auto a = dcic::bootstrap_ci(ds, kAtt, {3, 0.95, 9, 16});
  const auto b = dcic::bootstrap_ci(ds, kAtt, {3, 0.95, 9, 1});
  REQUIRE(a.replicate_values == b.replicate_values);
}

TEST_CASE("intervals are nested in the confidence level", "[bootstrap]") {
  const auto ds = demo_dataset(7, 50);
  const auto wide = dcic::bootstrap_ci(ds, kAtt, {400, 0.99, 5, 2});
  const auto mid = dcic::bootstrap_ci(ds, kAtt, {400, 0.95, 5, 2});
  const auto narrow = dcic::bootstrap_ci(ds, kAtt, {400, 0.5, 5, 2});
  REQUIRE(wide.lower <= mid.lower);
  REQUIRE(mid.lower <= narrow.lower);
  REQUIRE(narrow.lower <= narrow.upper);
  REQUIRE(narrow.upper <= mid.upper);
  REQUIRE(mid.upper <= wide.upper);
}

TEST_CASE("interval brackets the point estimate on well-behaved data", "[bootstrap]") {
  const auto ds = demo_dataset(8, 80);
  const auto est = dcic::estimate_with_ci(ds, kAtt, {499, 0.95, 3, 2});
  REQUIRE(est.ci.has_value());
  REQUIRE(est.ci->lower <= est.value);
  REQUIRE(est.value <= est.ci->upper);
  REQUIRE(est.ci->level == 0.95);
  REQUIRE(est.ci->replicates == 499);
  REQUIRE(est.ci->method.find("heuristic") != std::string::npos);
  // The replicate spread should be on the sampling-noise scale, not zero and
  // not absurd.
  REQUIRE(est.ci->upper - est.ci->lower > 0.01);
  REQUIRE(est.ci->upper - est.ci->lower < 2.0);
}

TEST_CASE("percentile endpoints come from the replicate distribution", "[bootstrap]") {
  const auto ds = demo_dataset(9, 30);
  const BootstrapConfig cfg{99, 0.9, 21, 1};
  const auto s = dcic::bootstrap_ci(ds, kAtt, cfg);
  const auto sorted = dcic::SortedSample::build(s.replicate_values);
  REQUIRE(s.lower == sorted.quantile(0.05));
  REQUIRE(s.upper == sorted.quantile(0.95));
}
