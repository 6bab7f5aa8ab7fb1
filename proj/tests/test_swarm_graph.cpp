#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "swarm/errors.hpp"
#include "swarm/swarm_graph.hpp"

using namespace swarm;

TEST_SUITE("swarm_graph") {

TEST_CASE("links include the boundary and exclude pairs beyond it") {
  const SwarmConfig at_boundary{{0.0, 0.0}, {fixture::kRa, 0.0}};
  const LinkSet links = compute_links(at_boundary, fixture::kRa);
  REQUIRE(links.size() == 1);
  CHECK(links[0].i == 0);
  CHECK(links[0].j == 1);

  const SwarmConfig far{{0.0, 0.0}, {2.0 * fixture::kRa, 0.0}};
  CHECK(compute_links(far, fixture::kRa).empty());
  CHECK_THROWS_AS(compute_links(far, 0.0), InvalidInput);
}

TEST_CASE("lattice links all have length R") {
  const SwarmConfig lattice = fixture::lattice(100, 11);
  const LinkSet links = compute_links(lattice, fixture::kRa);
  REQUIRE(!links.empty());
  for (const Link& link : links) CHECK(std::abs(link.length - 1.0) <= 1e-15);
}

TEST_CASE("links are lexicographic, unique and within R_a") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SwarmConfig c = fixture::random_config(30, 4.0, seed);
    const LinkSet links = compute_links(c, fixture::kRa);
    for (std::size_t k = 0; k < links.size(); ++k) {
      CHECK(links[k].i < links[k].j);
      CHECK(links[k].length <= fixture::kRa);
      CHECK(links[k].length == doctest::Approx((c[links[k].i] - c[links[k].j]).norm()));
      if (k > 0) {
        const bool ordered = links[k - 1].i < links[k].i ||
                             (links[k - 1].i == links[k].i && links[k - 1].j < links[k].j);
        CHECK(ordered);
      }
    }
    // Brute-force count of qualifying pairs.
    std::size_t expected = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        expected += (c[i] - c[j]).norm() <= fixture::kRa ? 1 : 0;
      }
    }
    CHECK(links.size() == expected);
  }
}

TEST_CASE("incidence matrix examples") {
  const LinkSet single({{0, 1, 1.0}});
  const Eigen::MatrixXd B1 = incidence_matrix(single, 2);
  CHECK(B1(0, 0) == 1.0);
  CHECK(B1(1, 0) == -1.0);

  const LinkSet tri({{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
  const Eigen::MatrixXd B3 = incidence_matrix(tri, 3);
  CHECK(B3.rows() == 3);
  CHECK(B3.cols() == 3);
  CHECK(B3.colwise().sum().cwiseAbs().maxCoeff() == 0.0);

  const LinkSet path({{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(oracle::jacobi_rank(incidence_matrix(path, 3), 1e-12) == 2);
  CHECK(numerical_rank(incidence_matrix(path, 3)) == 2);

  CHECK_THROWS_AS(incidence_matrix(single, 1), InvalidInput);
}

TEST_CASE("incidence columns hold one +1 and one -1 on random graphs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SwarmConfig c = fixture::random_config(15, 3.0, 1000 + seed);
    const LinkSet links = compute_links(c, fixture::kRa);
    const Eigen::MatrixXd B = incidence_matrix(links, c.size());
    for (Eigen::Index k = 0; k < B.cols(); ++k) {
      CHECK(B.col(k).sum() == 0.0);
      CHECK((B.col(k).array() == 1.0).count() == 1);
      CHECK((B.col(k).array() == -1.0).count() == 1);
      CHECK((B.col(k).array() == 0.0).count() == B.rows() - 2);
    }
  }
}

TEST_CASE("rigidity matrix examples") {
  const SwarmConfig pair{{0, 0}, {1, 0}};
  const Eigen::MatrixXd M = rigidity_matrix(pair, compute_links(pair, fixture::kRa));
  REQUIRE(M.rows() == 1);
  CHECK(M(0, 0) == -1.0);
  CHECK(M(0, 1) == 0.0);
  CHECK(M(0, 2) == 1.0);
  CHECK(M(0, 3) == 0.0);

  const SwarmConfig tri = fixture::triangle();
  const Eigen::MatrixXd Mt = rigidity_matrix(tri, compute_links(tri, fixture::kRa));
  CHECK(Mt.rows() == 3);
  CHECK(oracle::jacobi_rank(Mt, 1e-8) == 3);
  CHECK(numerical_rank(Mt) == 3);

  const SwarmConfig line = fixture::collinear3();
  const Eigen::MatrixXd Ml = rigidity_matrix(line, compute_links(line, fixture::kRa));
  CHECK(Ml.rows() == 2);
  CHECK(oracle::jacobi_rank(Ml, 1e-8) == 2);
  CHECK(numerical_rank(Ml) == 2);

  CHECK_THROWS_AS(rigidity_matrix(SwarmConfig{{0, 0}}, LinkSet{}), InvalidInput);
}

TEST_CASE("rigidity rows are antisymmetric and annihilate roto-translations") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SwarmConfig c = fixture::random_config(20, 3.0, 77 + seed);
    const LinkSet links = compute_links(c, fixture::kRa);
    const Eigen::MatrixXd M = rigidity_matrix(c, links);
    for (std::size_t k = 0; k < links.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      const auto a = static_cast<Eigen::Index>(2 * links[k].i);
      const auto b = static_cast<Eigen::Index>(2 * links[k].j);
      CHECK(M.block<1, 2>(row, a) == -M.block<1, 2>(row, b));
      CHECK(std::abs(M.row(row).sum()) <= 1e-14);
    }
    const Eigen::Index dim = static_cast<Eigen::Index>(2 * c.size());
    Eigen::VectorXd tx = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd ty = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd rot(dim);
    const Vec2 center = swarm_center(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(2 * i);
      tx[r] = 1.0;
      ty[r + 1] = 1.0;
      rot[r] = -(c[i].y() - center.y());
      rot[r + 1] = c[i].x() - center.x();
    }
    if (M.rows() == 0) continue;
    const double scale = M.norm();
    CHECK((M * tx).norm() <= 1e-10 * scale);
    CHECK((M * ty).norm() <= 1e-10 * scale);
    CHECK((M * rot).norm() <= 1e-10 * scale * rot.norm());
  }
}

TEST_CASE("numerical rank examples") {
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(3, 3)) == 3);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(4, 5)) == 0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXd u(6);
  Eigen::VectorXd v(4);
  for (auto& x : u) x = g(rng);
  for (auto& x : v) x = g(rng);
  CHECK(numerical_rank(u * v.transpose()) == 1);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(numerical_rank(bad), InvalidInput);
  CHECK_THROWS_AS(numerical_rank(Eigen::MatrixXd::Identity(2, 2), 0.0), InvalidInput);
}

TEST_CASE("numerical rank is invariant under permutation and scaling") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    // Rank-3 product of random factors.
    Eigen::MatrixXd L(8, 3);
    Eigen::MatrixXd R(3, 6);
    for (Eigen::Index k = 0; k < L.size(); ++k) L.data()[k] = g(rng);
    for (Eigen::Index k = 0; k < R.size(); ++k) R.data()[k] = g(rng);
    const Eigen::MatrixXd A = L * R;
    const std::size_t rank = numerical_rank(A);
    CHECK(rank == 3);
    CHECK(rank == oracle::jacobi_rank(A, 1e-8));

    Eigen::PermutationMatrix<Eigen::Dynamic> prow(8);
    Eigen::PermutationMatrix<Eigen::Dynamic> pcol(6);
    prow.setIdentity();
    pcol.setIdentity();
    std::shuffle(prow.indices().data(), prow.indices().data() + 8, rng);
    std::shuffle(pcol.indices().data(), pcol.indices().data() + 6, rng);
    CHECK(numerical_rank(prow * A * pcol) == rank);
    CHECK(numerical_rank(-1e-7 * A) == rank);
    CHECK(numerical_rank(3.5e5 * A) == rank);
  }
}

TEST_CASE("infinitesimal rigidity on the fixture set agrees with the SVD oracle") {
  struct Case {
    const char* name;
    SwarmConfig config;
    bool rigid;
  };
  const Case cases[] = {
      {"triangle", fixture::triangle(), true},
      {"square", fixture::unit_square(), false},
      {"collinear", fixture::collinear3(), false},
      {"lattice-25", fixture::lattice(25, 4), true},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const LinkSet links = compute_links(c.config, fixture::kRa);
    const std::size_t oracle_rank = oracle::jacobi_rank(rigidity_matrix(c.config, links), 1e-8);
    const bool oracle_rigid = oracle_rank == 2 * c.config.size() - 3;
    CHECK(oracle_rigid == c.rigid);
    CHECK(is_infinitesimally_rigid(c.config, links) == c.rigid);
    const RigidityReport report = rigidity_report(c.config, links);
    CHECK(report.rank == oracle_rank);
    CHECK(report.expected_rank == 2 * c.config.size() - 3);
  }
  // Square with only its sides: rank 4 < 5.
  const SwarmConfig sq = fixture::unit_square();
  CHECK(rigidity_report(sq, compute_links(sq, fixture::kRa)).rank == 4);
}

TEST_CASE("congruence") {
  const SwarmConfig c = fixture::random_config(12, 3.0, 5);
  CHECK(are_congruent(c, c, 1e-12));
  CHECK(are_congruent(c, fixture::rigid_motion(c, 0.0, {5.0, -3.0}), 1e-12));
  // Rotation by 30 degrees about the center.
  const Vec2 center = swarm_center(c);
  const Eigen::Rotation2Dd rot(std::numbers::pi / 6.0);
  std::vector<Vec2> rotated;
  for (const auto& p : c.positions()) rotated.push_back(center + rot * (p - center));
  const SwarmConfig r(rotated);
  CHECK(are_congruent(c, r, 1e-12));
  CHECK(are_congruent(r, c, 1e-12));

  CHECK_FALSE(are_congruent(fixture::triangle(), fixture::triangle(1.5), 1e-6));
  CHECK_THROWS_AS(are_congruent(fixture::triangle(), fixture::unit_square(), 1e-6), InvalidInput);
}

TEST_CASE("swarm center") {
  CHECK(swarm_center(SwarmConfig{{0, 0}, {2, 0}}) == Vec2(1, 0));
  CHECK(swarm_center(SwarmConfig{{3.5, -2}}) == Vec2(3.5, -2));
  const SwarmConfig tri = fixture::triangle();
  const Vec2 c = swarm_center(tri);
  const double d0 = (tri[0] - c).norm();
  CHECK((tri[1] - c).norm() == doctest::Approx(d0).epsilon(1e-14));
  CHECK((tri[2] - c).norm() == doctest::Approx(d0).epsilon(1e-14));
  CHECK_THROWS_AS(swarm_center(SwarmConfig{}), InvalidInput);
}

TEST_CASE("stacked round trip and finiteness") {
  const SwarmConfig c = fixture::random_config(7, 2.0, 1);
  CHECK(SwarmConfig::from_stacked(c.stacked()) == c);
  CHECK_THROWS_AS(SwarmConfig::from_stacked(Eigen::VectorXd(3)), InvalidInput);
  SwarmConfig bad = c;
  bad[2].x() = std::numeric_limits<double>::infinity();
  CHECK_FALSE(bad.all_finite());
  CHECK_THROWS_AS(bad.require_finite(), InvalidInput);
}

}  // TEST_SUITE
