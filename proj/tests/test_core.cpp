#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pgmap/graph.hpp"
#include "pgmap/synth.hpp"

using namespace pgmap;

TEST_SUITE_BEGIN("core");

TEST_CASE("centroid of symmetric and asymmetric boxes") {
  CHECK(centroid(TowerBox({0, 0}, 10, 10)) == PixelPoint{5, 5});
  CHECK(centroid(TowerBox({10, 20}, 5, 9)) == PixelPoint{12.5, 24.5});
}

TEST_CASE("degenerate extents are rejected at construction") {
  CHECK_THROWS_AS(TowerBox({3, 7}, 0, 5), ValidationError);
  CHECK_THROWS_AS(TowerBox({3, 7}, 5, -1), ValidationError);
  CHECK_THROWS_AS(TowerBox({0, 0}, 2, 2, NodeKind::EN), ValidationError);
  CHECK_THROWS_AS(TowerBox({0, 0}, 1, 1, NodeKind::T, 1.5), ValidationError);
  CHECK_NOTHROW(TowerBox::edge_node({0.0, 12.5}));
}

TEST_CASE("centroid distances in meters") {
  const GeoScale scale(0.3);
  const TowerBox a({0, 0}, 10, 10);
  CHECK(centroid_distance_m(a, a, scale) == 0.0);

  const TowerBox b({0, 10}, 10, 10);  // centroids 10 px apart
  CHECK(centroid_distance_m(a, b, scale) == doctest::Approx(3.0));

  const TowerBox c({3, 4}, 10, 10);  // 3-4-5 triangle
  CHECK(centroid_distance_m(a, c, scale) == doctest::Approx(1.5));
}

TEST_CASE("box IoU examples") {
  const TowerBox a({0, 0}, 10, 10);
  CHECK(box_iou(a, a) == 1.0);
  CHECK(box_iou(a, TowerBox({50, 50}, 10, 10)) == 0.0);

  const TowerBox shifted({0, 5}, 10, 10);
  CHECK(box_iou(a, shifted) == doctest::Approx(1.0 / 3.0));
  CHECK(box_iou(a, shifted) ==
        doctest::Approx(oracle::box_iou_by_counting(a, shifted)));
}

TEST_CASE("symmetry, translation invariance, triangle inequality") {
  Rng rng(7);
  const GeoScale scale(0.3);
  auto random_box = [&rng]() {
    return TowerBox({rng.uniform(-50, 50), rng.uniform(-50, 50)},
                    rng.uniform(1, 20), rng.uniform(1, 20));
  };
  for (int it = 0; it < 200; ++it) {
    const TowerBox a = random_box();
    const TowerBox b = random_box();
    const TowerBox c = random_box();
    CHECK(box_iou(a, b) == box_iou(b, a));
    CHECK(centroid_distance_m(a, b, scale) == centroid_distance_m(b, a, scale));

    const double dr = static_cast<double>(rng.below(101)) - 50.0;
    const double dc = static_cast<double>(rng.below(101)) - 50.0;
    TowerBox at = a;
    TowerBox bt = b;
    at.top_left = at.top_left + PixelPoint{dr, dc};
    bt.top_left = bt.top_left + PixelPoint{dr, dc};
    CHECK(box_iou(at, bt) == doctest::Approx(box_iou(a, b)).epsilon(1e-12));
    CHECK(centroid_distance_m(at, bt, scale) ==
          doctest::Approx(centroid_distance_m(a, b, scale)).epsilon(1e-12));

    CHECK(centroid_distance_m(a, c, scale) <=
          centroid_distance_m(a, b, scale) + centroid_distance_m(b, c, scale) +
              1e-9);
  }
}

TEST_CASE("grid graph integrity") {
  GridGraph g;
  g.add_node(0, TowerBox({0, 0}, 5, 5));
  g.add_node(1, TowerBox({20, 20}, 5, 5));
  CHECK_THROWS_AS(g.add_node(0, TowerBox({9, 9}, 5, 5)), ValidationError);
  CHECK_THROWS_AS(g.add_edge(0, 0), ValidationError);
  CHECK_THROWS_AS(g.add_edge(0, 7), ValidationError);

  g.add_edge(1, 0);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.edge_count() == 1);
  g.add_edge(0, 1);  // unordered pair: no duplicate
  CHECK(g.edge_count() == 1);
  CHECK(g.degree(0) == 1);
}

TEST_SUITE_END();
