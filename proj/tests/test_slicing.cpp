#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "ssir/errors.hpp"
#include "ssir/slicing.hpp"

#include "helpers.hpp"

using namespace ssir;

TEST_CASE("slice_response: binary response collapses to two slices") {
  GridShape shape{4, 5, 1.0};
  ScalarField y(shape);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) y.at(i, j) = (i + j) % 2;
  SliceAssignment s = slice_response(y, 10);
  CHECK(s.H == 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(s.labels[shape.flat(i, j)] == (i + j) % 2);
  CHECK(s.counts[0] + s.counts[1] == 20);
}

TEST_CASE("slice_response: 0..99 on a 10x10 grid gives 10 equal slices") {
  GridShape shape{10, 10, 1.0};
  ScalarField y(shape);
  for (std::int64_t c = 0; c < 100; ++c) y.values()[c] = double(c);
  SliceAssignment s = slice_response(y, 10);
  CHECK(s.H == 10);
  for (std::int64_t count : s.counts) CHECK(count == 10);
  CHECK(s.labels[0] == 0);
  CHECK(s.labels[99] == 9);
  CHECK(s.boundaries.size() == 9);
  CHECK(std::is_sorted(s.boundaries.begin(), s.boundaries.end()));
}

TEST_CASE("slice_response: constant response is an error") {
  ScalarField y({5, 5, 1.0});
  for (double& v : y.values()) v = 3.14;
  CHECK_THROWS_AS(slice_response(y, 10), DegenerateResponseError);
}

TEST_CASE("slice_response: parameter validation") {
  ScalarField y({2, 2, 1.0}, {1, 2, 3, 4});
  CHECK_THROWS_AS(slice_response(y, 1), std::invalid_argument);
  CHECK_THROWS_AS(slice_response(y, 5), std::invalid_argument);
  ScalarField bad({2, 2, 1.0}, {1, 2, 3, std::nan("")});
  CHECK_THROWS_AS(slice_response(bad, 2), std::invalid_argument);
}

TEST_CASE("slice_response: monotone transforms preserve labels") {
  GridShape shape{8, 9, 1.0};
  ScalarField y = test::random_scalar(shape, 21);
  SliceAssignment base = slice_response(y, 7);

  ScalarField exp_y(shape), lin_y(shape);
  for (std::int64_t c = 0; c < shape.cells(); ++c) {
    exp_y.values()[c] = std::exp(y.values()[c]);
    lin_y.values()[c] = 3.0 * y.values()[c] + 1.0;
  }
  CHECK(slice_response(exp_y, 7).labels == base.labels);
  CHECK(slice_response(lin_y, 7).labels == base.labels);
}

TEST_CASE("slice_response: permuting cells permutes labels the same way") {
  GridShape shape{6, 6, 1.0};
  ScalarField y = test::random_scalar(shape, 22);
  SliceAssignment base = slice_response(y, 4);

  std::vector<std::int64_t> perm(shape.cells());
  std::iota(perm.begin(), perm.end(), 0);
  StreamRng rng(22, 907);
  for (std::int64_t i = perm.size() - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);

  ScalarField shuffled(shape);
  for (std::int64_t c = 0; c < shape.cells(); ++c)
    shuffled.values()[perm[c]] = y.values()[c];
  SliceAssignment out = slice_response(shuffled, 4);
  for (std::int64_t c = 0; c < shape.cells(); ++c)
    CHECK(out.labels[perm[c]] == base.labels[c]);
}

TEST_CASE("slice_response: ties go to the lower slice") {
  // 12 cells, value 5 occupies ranks 2..7 and would span a boundary.
  GridShape shape{3, 4, 1.0};
  ScalarField y(shape, {0, 1, 5, 5, 5, 5, 5, 5, 8, 9, 10, 11});
  SliceAssignment s = slice_response(y, 4);
  CHECK(s.H == 4);
  // the tie group takes one label, the one of its first member
  const int tie_label = s.labels[2];
  for (int c = 2; c <= 7; ++c) CHECK(s.labels[c] == tie_label);
  CHECK(tie_label == 0);  // rank 2 of 12 with H=4 sits in slice 0
  std::int64_t total = 0;
  for (std::int64_t count : s.counts) total += count;
  CHECK(total == 12);
}
