#include <doctest.h>

#include <algorithm>

#include "forestlab/analytics.hpp"
#include "forestlab/error.hpp"
#include "forestlab/model.hpp"
#include "forestlab/surgery.hpp"
#include "support/generators.hpp"

using namespace forestlab;
using forestlab::testing::make_graph;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

ForestConfig forest_of(const Graph& g, std::vector<EdgeId> edges) {
  return ForestConfig(g.edge_count(), edges);
}

// C6 with edges v_i v_{i+1} (ids 0..4) and the closing edge v5 v0 (id 5).
Graph c6() { return make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}); }

// Wired single edge: ab = 0, az = 1, bz = 2.
Graph wired_edge() { return wire_boundary(make_graph(2, {{0, 1}}, {1, 1})); }

}  // namespace

TEST_CASE("apply_surgery") {
  const Graph two = make_graph(4, {{0, 1}, {2, 3}});
  CHECK(apply_surgery(two, forest_of(two, {0}), 1, kNoEdge) == forest_of(two, {0, 1}));

  const Graph tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const ForestConfig path = forest_of(tri, {0, 1});
  CHECK(code_of([&] { apply_surgery(tri, path, 2, kNoEdge); }) == ErrorCode::same_cluster);
  CHECK(code_of([&] { apply_surgery(tri, path, 0, kNoEdge); }) == ErrorCode::edge_present);
  CHECK(code_of([&] { apply_surgery(two, forest_of(two, {0}), 0, 0); }) ==
        ErrorCode::edge_present);
  const ForestConfig single = forest_of(tri, {0});
  CHECK(code_of([&] { apply_surgery(tri, single, 2, 1); }) == ErrorCode::edge_absent);

  const Graph c = c6();
  const ForestConfig tree = forest_of(c, {0, 1, 2, 3, 4});
  const ForestConfig swapped = apply_surgery(c, tree, 5, 1);
  CHECK(swapped == forest_of(c, {0, 2, 3, 4, 5}));
  CHECK(is_acyclic(c, swapped));
  CHECK(components(c, swapped).count() == 1);
}

TEST_CASE("apply_surgery keeps forests acyclic") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const Graph g = testing::random_connected_graph(rng);
    const ForestConfig tree = wilson_ust(g, 0, rng);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (tree.contains(e)) continue;
      for (EdgeId f : tree.edges()) {
        ForestConfig next(g.edge_count());
        try {
          next = apply_surgery(g, tree, e, f);
        } catch (const Error& err) {
          CHECK(err.code() == ErrorCode::same_cluster);
          continue;
        }
        CHECK(is_acyclic(g, next));
      }
    }
  }
}

TEST_CASE("usf pivot on the six-cycle") {
  const Graph c = c6();
  const ForestConfig tree = forest_of(c, {0, 1, 2, 3, 4});
  CHECK(usf_pivot_edge(c, tree, 5, 0, 0) == 1);
  CHECK(usf_pivot_edge(c, tree, 5, 0, 1) == 2);
  CHECK(usf_pivot_edge(c, tree, 5, 5, 0) == 3);
  CHECK_FALSE(condition_d(c, tree, 5, 0, 2));
  CHECK(code_of([&] { usf_pivot_edge(c, tree, 5, 0, 2); }) == ErrorCode::condition_d_failed);
}

TEST_CASE("usf pivot on the wired triangle") {
  const Graph hat = wired_edge();
  const ForestConfig tree = forest_of(hat, {1, 2});
  CHECK(usf_pivot_edge(hat, tree, 0, 0, 0) == 2);
  CHECK(usf_pivot_edge(hat, tree, 0, 1, 0) == 1);
}

TEST_CASE("usf pivots sit on the sphere and in the cluster of x") {
  Rng rng(32);
  std::size_t checked = 0;
  for (int i = 0; i < 800; ++i) {
    const Graph window = testing::random_wired_window(rng, 9);
    const Graph hat = wire_boundary(window);
    const ForestConfig tree = wilson_ust(hat, *hat.wired_vertex(), rng);
    const auto e = static_cast<EdgeId>(rng.index(window.edge_count()));
    if (tree.contains(e)) continue;
    const VertexId x = rng.bernoulli(0.5) ? window.edge(e).u : window.edge(e).v;
    const int r = static_cast<int>(rng.index(3));
    if (!condition_d(hat, tree, e, x, r)) {
      CHECK(code_of([&] { usf_pivot_edge(hat, tree, e, x, r); }) ==
            ErrorCode::condition_d_failed);
      continue;
    }
    const EdgeId f = usf_pivot_edge(hat, tree, e, x, r);
    const auto d = distances(hat, x);
    CHECK(edge_distance(hat, d, f) == r + 1);
    // f lies between x and y on the tree path, so removing it splits them
    // and e rejoins: the result is a spanning tree again.
    const ForestConfig after = apply_surgery(hat, tree, e, f);
    CHECK(components(hat, after).count() == 1);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("msf relabel on the wired single edge") {
  const Graph hat = wired_edge();
  const EdgeLabels l({0.9, 0.2, 0.4});
  const RelabelResult rel = msf_relabel(hat, l, 0, 0, 0);
  CHECK(rel.pivots == std::vector<EdgeId>{2});
  CHECK(rel.thresholds == std::vector<double>{0.4});
  CHECK(rel.k == 1);
  CHECK(rel.labels == l);
  CHECK(rel.terminal == 2);
  CHECK(rel.window_terminal == kNoEdge);

  const InsertResult ins = msf_insert(hat, rel);
  CHECK(ins.new_label < 0.4);
  CHECK(ins.removed == 2);
  CHECK(ins.recomputed == forest_of(hat, {0, 1}));
  CHECK(ins.swap_identity_holds);
  CHECK(ins.recomputed.restricted(1, Provenance::wired).edges() == std::vector<EdgeId>{0});
}

TEST_CASE("msf relabel rejects joined endpoints") {
  // On a finite graph every bridge lies in the free forest, so an edge with
  // no cycle through it always has its endpoints joined.
  const Graph two = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const EdgeLabels l({0.3, 0.6, 0.2});
  CHECK(code_of([&] { msf_relabel(two, l, 1, 1, 0, CycleClass::free); }) ==
        ErrorCode::same_cluster);
  const Graph tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(code_of([&] { msf_relabel(tri, EdgeLabels({0.1, 0.5, 0.9}), 0, 0, 0); }) ==
        ErrorCode::same_cluster);
}

TEST_CASE("msf insert with no cycle through e") {
  // Free class on a wired graph: the only cycle through ab uses z.
  const Graph hat = wired_edge();
  const EdgeLabels l({0.9, 0.2, 0.4});
  const ForestConfig free_forest = msf_of_class(hat, l, CycleClass::free);
  CHECK(free_forest.contains(0));
  CHECK(code_of([&] { msf_relabel(hat, l, 0, 0, 0, CycleClass::free); }) ==
        ErrorCode::same_cluster);

  RelabelResult bare;
  bare.e = 0;
  bare.cycles = CycleClass::free;
  bare.labels = EdgeLabels({0.9, 0.2, 0.4});
  const InsertResult ins = msf_insert(hat, bare);
  CHECK(ins.removed == kNoEdge);
  CHECK(ins.new_label == 0.1);
  CHECK(ins.recomputed == free_forest);
  CHECK(ins.swap_identity_holds);
}

TEST_CASE("msf relabel properties on random wired windows") {
  Rng rng(33);
  std::size_t runs = 0, multi = 0;
  for (int i = 0; i < 400; ++i) {
    const Graph window = testing::random_wired_window(rng, 10, 0.35);
    const Graph hat = wire_boundary(window);
    const EdgeLabels l = sample_labels(hat, rng);
    const ForestConfig forest = minimal_spanning_forest(hat, l);
    const auto crossing = testing::crossing_edges(
        window, forest.restricted(window.edge_count(), Provenance::wired), window.edge_count());
    if (crossing.empty()) continue;
    const EdgeId e = crossing[rng.index(crossing.size())];
    const VertexId x = rng.bernoulli(0.5) ? hat.edge(e).u : hat.edge(e).v;
    const int r = static_cast<int>(rng.index(3));
    const RelabelResult rel = msf_relabel(hat, l, e, x, r);
    ++runs;
    multi += rel.pivots.size() > 1;
    for (std::size_t j = 1; j < rel.thresholds.size(); ++j)
      CHECK(rel.thresholds[j] < rel.thresholds[j - 1]);
    CHECK(minimal_spanning_forest(hat, rel.labels) == forest);
    // Only f_1..f_{k-1} move, and only downwards.
    const auto last = rel.pivots.empty() ? rel.pivots.end() : rel.pivots.end() - 1;
    for (EdgeId h = 0; h < hat.edge_count(); ++h) {
      if (std::find(rel.pivots.begin(), last, h) != last) CHECK(rel.labels[h] < l[h]);
      else CHECK(rel.labels[h] == l[h]);
    }
    const InsertResult ins = msf_insert(hat, rel);
    CHECK(ins.swap_identity_holds);
    CHECK(ins.removed == rel.terminal);
    if (rel.window_terminal != kNoEdge) {
      UnionFind uf(hat.vertex_count());
      for (EdgeId h : forest.edges())
        if (!hat.is_wired_edge(h)) uf.unite(hat.edge(h).u, hat.edge(h).v);
      CHECK(uf.same(hat.edge(rel.window_terminal).u, x));
      CHECK(edge_distance(hat, distances(hat, x), rel.window_terminal) > r);
    }
  }
  CHECK(runs > 100);
  CHECK(multi > 0);
}

TEST_CASE("radon-nikodym on the wired triangle") {
  const Graph edge = make_graph(2, {{0, 1}}, {1, 1});
  const RadonNikodymReport rn = radon_nikodym_exact(edge, 0, 0, 0);
  CHECK(rn.tree_count == 3);
  CHECK(rn.sphere_size == 1);
  CHECK(rn.outside_event == 2);
  REQUIRE(rn.atoms.size() == 1);
  CHECK(rn.atoms[0].window.empty());
  CHECK(rn.atoms[0].trees == 1);
  CHECK(rn.atoms[0].images == 1);
  CHECK(rn.atoms[0].ratio == 1);

  const DeltaBoundReport d = delta_bound_check(edge, 0, 0, 0);
  CHECK(d.holds());
  CHECK_FALSE(d.vacuous);
}

TEST_CASE("radon-nikodym with e internal everywhere") {
  // c hangs off b by a bridge, so b and c are always joined.
  const Graph path = make_graph(3, {{0, 1}, {1, 2}}, {1, 0, 0});
  const RadonNikodymReport rn = radon_nikodym_exact(path, 1, 1, 0);
  CHECK(rn.atoms.empty());
  CHECK(rn.outside_event == rn.tree_count);
}

TEST_CASE("delta bound on small wired windows") {
  // 4-cycle wired at two opposite vertices.
  const Graph square = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {1, 0, 1, 0});
  for (EdgeId e = 0; e < 4; ++e) {
    for (VertexId x : {square.edge(e).u, square.edge(e).v}) {
      const DeltaBoundReport d = delta_bound_check(square, e, x, 0);
      CHECK(d.holds());
      for (const auto& a : d.detail.atoms) CHECK(a.ratio <= Rational(d.detail.sphere_size));
    }
  }
  // Radius past the window: D always fails.
  const DeltaBoundReport far = delta_bound_check(square, 0, 0, 5);
  CHECK(far.vacuous);
  CHECK(far.holds());
}

TEST_CASE("surgery records through the model") {
  Rng rng(34);
  const auto window = std::make_shared<const Graph>(build_box(2, 4));
  for (ForestMode mode : {ForestMode::wusf, ForestMode::wmsf}) {
    const Model model = make_model(window, mode);
    std::size_t done = 0;
    for (int i = 0; i < 200 && done < 30; ++i) {
      const ForestSample sample = sample_forest(model, rng);
      const auto crossing =
          testing::crossing_edges(*window, sample.window_forest, window->edge_count());
      if (crossing.empty()) continue;
      const EdgeId e = crossing[rng.index(crossing.size())];
      const VertexId x = window->edge(e).u;
      const int r = static_cast<int>(rng.index(2));
      SurgeryRecord rec;
      try {
        rec = perform_surgery(model, sample, e, x, r);
      } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::condition_d_failed);
        continue;
      }
      ++done;
      CHECK(rec.result.contains(e));
      CHECK(is_acyclic(*window, rec.result));
      if (rec.window_f != kNoEdge) CHECK_FALSE(rec.result.contains(rec.window_f));
      if (rec.mode == SurgeryMode::msf || rec.ball_inside_window) CHECK(rec.wit_ok);
      if (rec.insert) CHECK(rec.insert->swap_identity_holds);
    }
    CHECK(done > 0);
  }
}

TEST_CASE("wired modes need a boundary") {
  const auto torus = std::make_shared<const Graph>(build_torus(2, 4));
  CHECK(code_of([&] { make_model(torus, ForestMode::wusf); }) == ErrorCode::precondition);
  CHECK_NOTHROW(make_model(torus, ForestMode::fmsf));
}
