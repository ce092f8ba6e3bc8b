#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "forestlab/analytics.hpp"
#include "forestlab/error.hpp"
#include "forestlab/forest.hpp"
#include "forestlab/oracles.hpp"
#include "forestlab/stats.hpp"
#include "support/generators.hpp"
#include "support/laws.hpp"

using namespace forestlab;
using forestlab::testing::make_graph;

namespace {

// Triangle a=0, b=1, c=2 with ab=0, bc=1, ca=2.
Graph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {2, 0}}); }
EdgeLabels tri_labels() { return EdgeLabels({0.1, 0.5, 0.9}); }

ForestConfig forest_of(const Graph& g, std::vector<EdgeId> edges) {
  return ForestConfig(g.edge_count(), edges);
}

bool subset(const ForestConfig& a, const ForestConfig& b) {
  for (EdgeId e : a.edges())
    if (!b.contains(e)) return false;
  return true;
}

}  // namespace

TEST_CASE("labels") {
  Rng rng(3);
  const EdgeLabels tri = sample_labels(triangle(), rng);
  CHECK(tri.size() == 3);
  CHECK(tri.is_injective());
  for (double v : tri.values()) CHECK((v > 0.0 && v < 1.0));

  const Graph path = build_path(100001);
  const EdgeLabels many = sample_labels(path, rng);
  const auto ms = stats::mean_se(many.values());
  CHECK(std::abs(ms.mean - 0.5) < 0.01);

  Rng a(99), b(99);
  CHECK(sample_labels(path, a) == sample_labels(path, b));

  CHECK_THROWS_AS(EdgeLabels({0.2, 0.3}).set(0, 1.5), Error);
  CHECK_FALSE(EdgeLabels({0.2, 0.3}).collides(0.25));
  CHECK(EdgeLabels({0.2, 0.3}).collides(0.3));
}

TEST_CASE("wilson on a path and the triangle") {
  Rng rng(1);
  const Graph p3 = build_path(3);
  for (int i = 0; i < 100; ++i) CHECK(wilson_ust(p3, 0, rng).size() == 2);

  const Graph tri = triangle();
  const auto trees = oracles::enumerate_spanning_trees(tri);
  const std::size_t n = 100000;
  const auto counts = testing::tree_histogram(trees, n, [&] { return wilson_ust(tri, 0, rng); });
  for (std::size_t c : counts) CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 3) < 0.01);
}

TEST_CASE("wilson is uniform on K4 and on a multigraph") {
  Rng rng(2);
  const Graph k4 = build_complete(4);
  const auto trees = oracles::enumerate_spanning_trees(k4);
  REQUIRE(trees.count() == 16);
  const auto counts =
      testing::tree_histogram(trees, 32000, [&] { return wilson_ust(k4, 2, rng); });
  CHECK(stats::chi_square_gof(counts, testing::uniform_probs(16)).p_value > 1e-3);

  // Doubled edge: each of its copies is a distinct tree.
  const Graph multi = make_graph(3, {{0, 1}, {0, 1}, {1, 2}, {2, 0}});
  const auto mtrees = oracles::enumerate_spanning_trees(multi);
  REQUIRE(mtrees.count() == 5);
  const auto mcounts =
      testing::tree_histogram(mtrees, 20000, [&] { return wilson_ust(multi, 0, rng); });
  CHECK(stats::chi_square_gof(mcounts, testing::uniform_probs(5)).p_value > 1e-3);
}

TEST_CASE("wilson rejects disconnected graphs") {
  Rng rng(1);
  const Graph two = make_graph(4, {{0, 1}, {2, 3}});
  try {
    wilson_ust(two, 0, rng);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::disconnected);
  }
}

TEST_CASE("free window forests are spanning trees") {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Graph g = testing::random_connected_graph(rng);
    const ForestConfig f = fusf_window(g, rng);
    CHECK(f.provenance() == Provenance::free);
    CHECK(is_acyclic(g, f));
    CHECK(components(g, f).count() == 1);
  }
}

TEST_CASE("wired window forests") {
  Rng rng(5);
  const Graph edge = make_graph(2, {{0, 1}}, {1, 1});
  std::size_t with_ab = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) with_ab += wusf_window(edge, rng).contains(0);
  CHECK(std::abs(static_cast<double>(with_ab) / n - 2.0 / 3) < 0.01);

  const Graph lone = make_graph(1, {}, {1});
  const ForestConfig empty = wusf_window(lone, rng);
  CHECK(empty.size() == 0);
  CHECK(empty.provenance() == Provenance::wired);
  CHECK(components(lone, empty).count() == 1);

  CHECK_THROWS_AS(wusf_window(build_torus(2, 4), rng), Error);

  for (int i = 0; i < 200; ++i) {
    const Graph g = testing::random_wired_window(rng);
    CHECK(is_acyclic(g, wusf_window(g, rng)));
  }
}

TEST_CASE("wired window edge marginals match enumeration") {
  // Marginal of each window edge = share of completion trees containing it.
  Rng rng(6);
  const Graph box = build_box(2, 3);
  const Graph hat = wire_boundary(box);
  const auto trees = oracles::enumerate_spanning_trees(hat, 1000000);
  std::vector<double> exact(box.edge_count(), 0.0);
  for (const auto& t : trees.trees)
    for (EdgeId e : t)
      if (e < box.edge_count()) exact[e] += 1.0 / static_cast<double>(trees.count());
  const std::size_t n = 20000;
  std::vector<double> seen(box.edge_count(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (EdgeId e : wusf_window(box, rng).edges()) seen[e] += 1.0 / n;
  for (EdgeId e = 0; e < box.edge_count(); ++e) {
    const double se = std::sqrt(exact[e] * (1 - exact[e]) / n);
    CHECK(std::abs(seen[e] - exact[e]) < 4 * se);
  }
}

TEST_CASE("free minimal spanning forest") {
  const Graph tri = triangle();
  CHECK(free_msf(tri, tri_labels()) == forest_of(tri, {0, 1}));

  Rng rng(7);
  const Graph tree = build_tree_ball(3, 2);
  const ForestConfig all = free_msf(tree, sample_labels(tree, rng));
  CHECK(all.size() == tree.edge_count());

  testing::RandomGraphOptions opt;
  opt.min_vertices = 10;
  opt.max_vertices = 10;
  opt.extra_edge_probability = 0.25;
  for (int i = 0; i < 20; ++i) {
    const Graph g = testing::random_connected_graph(rng, opt);
    const EdgeLabels l = sample_labels(g, rng);
    CHECK(free_msf(g, l) == oracles::msf_by_definition(g, l));
  }
}

TEST_CASE("wired minimal spanning forest on the single edge") {
  const Graph edge = make_graph(2, {{0, 1}}, {1, 1});
  // Completion edges: ab, az, bz.
  const ForestConfig kept = wired_msf_window(edge, EdgeLabels({0.2}), EdgeLabels({0.7, 0.4}));
  CHECK(kept.edges() == std::vector<EdgeId>{0});
  CHECK(kept.provenance() == Provenance::wired);
  const Graph hat = wire_boundary(edge);
  CHECK(minimal_spanning_forest(hat, EdgeLabels({0.2, 0.7, 0.4})).edges() ==
        std::vector<EdgeId>{0, 2});

  const ForestConfig dropped =
      wired_msf_window(edge, EdgeLabels({0.9}), EdgeLabels({0.2, 0.4}));
  CHECK(dropped.size() == 0);
  CHECK(components(edge, dropped).count() == 2);

  Rng rng(1);
  CHECK_THROWS_AS(wired_msf_window(build_torus(2, 3), sample_labels(build_torus(2, 3), rng),
                                   EdgeLabels()),
                  Error);
}

TEST_CASE("wired minimal forest sits inside the free one") {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const Graph g = testing::random_wired_window(rng, 10);
    const Graph hat = wire_boundary(g);
    const EdgeLabels joint = sample_labels(hat, rng);
    const EdgeLabels window(std::vector<double>(joint.values().begin(),
                                                joint.values().begin() + g.edge_count()));
    const EdgeLabels star(std::vector<double>(joint.values().begin() + g.edge_count(),
                                              joint.values().end()));
    const ForestConfig wired = wired_msf_window(g, window, star);
    CHECK(subset(wired, free_msf(g, window)));
    CHECK(is_acyclic(g, wired));
  }
}

TEST_CASE("z values") {
  const Graph tri = triangle();
  const ZResult z = z_value(tri, tri_labels(), 2);
  REQUIRE(z.z.has_value());
  CHECK(*z.z == 0.5);
  CHECK(z.phi == 1);

  const Graph lollipop = make_graph(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  const ZResult bridge = z_value(lollipop, EdgeLabels({0.1, 0.2, 0.3, 0.4}), 3);
  CHECK_FALSE(bridge.z.has_value());
  CHECK(bridge.phi == kNoEdge);

  // Square 0-1-2-3 with diagonal 0-2 (edge 4).
  const Graph sq = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const EdgeLabels l = sample_labels(sq, rng);
    const auto cycles = oracles::enumerate_cycles_through(sq, 4);
    REQUIRE(cycles.size() == 2);
    double best = 2.0;
    for (const auto& c : cycles) {
      double mx = 0.0;
      for (EdgeId f : c)
        if (f != 4) mx = std::max(mx, l[f]);
      best = std::min(best, mx);
    }
    const ZResult zr = z_value(sq, l, 4);
    REQUIRE(zr.z.has_value());
    CHECK(*zr.z == best);
    CHECK(l[zr.phi] == *zr.z);
  }
}

TEST_CASE("z values agree with cycle enumeration on random graphs") {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    const bool wired = i % 2 == 1;
    const Graph g = wired ? wire_boundary(testing::random_wired_window(rng, 7))
                          : testing::random_connected_graph(rng, {2, 8, 0.3, 0.1, 0.0});
    const EdgeLabels l = sample_labels(g, rng);
    for (CycleClass cls : {CycleClass::free, CycleClass::wired}) {
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto cycles = oracles::enumerate_cycles_through(g, e, cls);
        std::optional<double> best;
        for (const auto& c : cycles) {
          double mx = 0.0;
          for (EdgeId f : c)
            if (f != e) mx = std::max(mx, l[f]);
          if (!best || mx < *best) best = mx;
        }
        const ZResult zr = z_value(g, l, e, cls);
        CHECK(zr.z == best);
        if (zr.z) CHECK(l[zr.phi] == *zr.z);
        else CHECK(zr.phi == kNoEdge);
      }
    }
  }
}

TEST_CASE("label changes") {
  const Graph tri = triangle();
  const EdgeLabels l = tri_labels();
  CHECK(predict_label_change(tri, l, 2, 0.3) == forest_of(tri, {0, 2}));
  CHECK(predict_label_change(tri, l, 0, 0.05) == forest_of(tri, {0, 1}));
  CHECK(predict_label_change(tri, l, 0, 0.95) == forest_of(tri, {1, 2}));
  CHECK_THROWS_AS(predict_label_change(tri, l, 0, 0.5), Error);

  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const Graph g = testing::random_connected_graph(rng, {2, 9, 0.35, 0.1, 0.0});
    const EdgeLabels base = sample_labels(g, rng);
    const auto e = static_cast<EdgeId>(rng.index(g.edge_count()));
    double v = rng.uniform01();
    while (base.collides(v)) v = rng.uniform01();
    EdgeLabels changed = base;
    changed.set(e, v);
    CHECK(predict_label_change(g, base, e, v) == free_msf(g, changed));
  }
}

TEST_CASE("threshold subgraph") {
  const Graph tri = triangle();
  CHECK(threshold_subgraph(tri, tri_labels(), 0.0).empty());
  CHECK(threshold_subgraph(tri, tri_labels(), 1.0).size() == 3);
  CHECK(threshold_subgraph(tri, tri_labels(), 0.6) == std::vector<EdgeId>{0, 1});
  CHECK_THROWS_AS(threshold_subgraph(tri, tri_labels(), 1.5), Error);
}

TEST_CASE("forest modes round trip") {
  for (ForestMode m : {ForestMode::fusf, ForestMode::wusf, ForestMode::fmsf, ForestMode::wmsf})
    CHECK(parse_forest_mode(to_string(m)) == m);
  CHECK_FALSE(parse_forest_mode("ust").has_value());
}
