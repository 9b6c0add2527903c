#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "magdim/metric.hpp"
#include "magdim/pointcloud_io.hpp"
#include "test_helpers.hpp"

using namespace magdim;
using testing_util::cloud_of;
using testing_util::random_cloud;

TEST_CASE("pairwise distances on small fixtures") {
  CHECK(pairwise_distances(cloud_of({{0}, {3}}))(0, 1) == 3.0);

  const auto tri = pairwise_distances(cloud_of({{0, 0}, {3, 0}, {0, 4}}));
  CHECK(tri(0, 1) == 3.0);
  CHECK(tri(0, 2) == 4.0);
  CHECK(tri(1, 2) == 5.0);

  CHECK(pairwise_distances(cloud_of({{1, 1}, {1, 1}}))(0, 1) == 0.0);
}

TEST_CASE("point cloud rejects non-finite coordinates") {
  PointCloud::Matrix m(2, 1);
  m << 0.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(PointCloud{m}, Error);
  m(1, 0) = std::numeric_limits<double>::infinity();
  try {
    PointCloud bad(m);
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateInput);
  }
}

TEST_CASE("distance matrix invariants hold on random clouds") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cloud = random_cloud(40, 3, seed);
    const auto dm = pairwise_distances(cloud);
    const auto& e = dm.entries();
    CHECK(e == e.transpose());
    CHECK(e.diagonal().isZero(0.0));
    CHECK(e.allFinite());
    CHECK(e.minCoeff() >= 0.0);
    CounterStream rng(derive_key(seed, 99));
    for (int k = 0; k < 500; ++k) {
      const auto i = static_cast<Eigen::Index>(rng.below(40)), j = static_cast<Eigen::Index>(rng.below(40)),
                 l = static_cast<Eigen::Index>(rng.below(40));
      CHECK(e(i, l) <= e(i, j) + e(j, l) + 1e-12);
    }
  }
}

TEST_CASE("distance matrix constructor validates") {
  DistanceMatrix::Matrix m(2, 2);
  m << 0, 1, 2, 0;
  CHECK_THROWS_AS(DistanceMatrix{m}, Error);
  m << 0, -1, -1, 0;
  CHECK_THROWS_AS(DistanceMatrix{m}, Error);
  m << 1, 1, 1, 0;
  CHECK_THROWS_AS(DistanceMatrix{m}, Error);
  m << 0, 1, 1, 0;
  CHECK_NOTHROW(DistanceMatrix{m});
}

TEST_CASE("scale_distances") {
  const auto dm = pairwise_distances(cloud_of({{0}, {3}}));
  CHECK(scale_distances(dm, 1.0).entries() == dm.entries());
  CHECK(scale_distances(dm, 2.0)(0, 1) == 6.0);
  for (double bad : {0.0, -1.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN()}) {
    try {
      (void)scale_distances(dm, bad);
      FAIL("expected InvalidScale");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidScale);
    }
  }
}

TEST_CASE("scaling composes multiplicatively") {
  const auto dm = pairwise_distances(random_cloud(30, 4, 7));
  CounterStream rng(11);
  for (int k = 0; k < 20; ++k) {
    const double a = 0.01 + 10 * rng.uniform(), b = 0.01 + 10 * rng.uniform();
    const auto two_step = scale_distances(scale_distances(dm, a), b).entries();
    const auto one_step = scale_distances(dm, a * b).entries();
    const double rel = (two_step - one_step).cwiseAbs().maxCoeff() / one_step.cwiseAbs().maxCoeff();
    CHECK(rel <= 1e-12);
  }
}

TEST_CASE("pairwise distances are permutation equivariant") {
  const auto cloud = random_cloud(25, 3, 3);
  std::vector<Eigen::Index> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 7, perm.end());
  const auto d = pairwise_distances(cloud);
  const auto dp = pairwise_distances(cloud.subset(perm));
  for (Eigen::Index i = 0; i < 25; ++i)
    for (Eigen::Index j = 0; j < 25; ++j) CHECK(dp(i, j) == d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
}

TEST_CASE("pairwise distances do not depend on the thread count") {
  const auto cloud = random_cloud(200, 5, 4);
  set_num_threads(1);
  const auto serial = pairwise_distances(cloud).entries();
  set_num_threads(4);
  const auto threaded = pairwise_distances(cloud).entries();
  set_num_threads(1);
  CHECK(serial == threaded);
}

TEST_CASE("median and minimum distances") {
  const auto dm = pairwise_distances(cloud_of({{0}, {1}, {3}, {7}}));
  // distances 1,3,7,2,6,4 -> sorted 1,2,3,4,6,7
  CHECK(median_distance(dm) == doctest::Approx(3.5));
  CHECK(min_positive_distance(dm) == 1.0);
  CHECK(diameter(dm) == 7.0);
}

TEST_CASE("point-cloud CSV parsing") {
  std::istringstream in("# comment\n# another\n1.5, 2\n-3e-2,4\n\n");
  const auto c = read_cloud_csv(in);
  CHECK(c.size() == 2);
  CHECK(c.dim() == 2);
  CHECK(c.points()(1, 0) == -0.03);

  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_cloud_csv(ragged), Error);
  std::istringstream junk("1,abc\n");
  CHECK_THROWS_AS(read_cloud_csv(junk), Error);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(read_cloud_csv(empty), Error);
}

TEST_CASE("point-cloud binary layout") {
  const auto c = cloud_of({{1.0, -2.0}});
  std::ostringstream out;
  write_cloud_binary(out, c);
  const std::string bytes = out.str();
  REQUIRE(bytes.size() == 6 + 4 + 4 + 16);
  CHECK(bytes.substr(0, 6) == "MAGPC1");
  CHECK(bytes[6] == 1);
  CHECK(bytes[10] == 2);
  // 1.0 = 0x3FF0000000000000, little endian
  CHECK(static_cast<unsigned char>(bytes[14 + 7]) == 0x3F);
  CHECK(static_cast<unsigned char>(bytes[14 + 6]) == 0xF0);

  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_cloud_binary(truncated), Error);
}

TEST_CASE("CSV and binary round trips are exact") {
  const auto cloud = random_cloud(50, 3, 21, 1e3);
  std::stringstream csv;
  write_cloud_csv(csv, cloud, "round trip");
  CHECK(read_cloud_csv(csv).points() == cloud.points());
  std::stringstream bin;
  write_cloud_binary(bin, cloud);
  CHECK(read_cloud_binary(bin).points() == cloud.points());
}
