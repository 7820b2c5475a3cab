#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "specround/error.hpp"
#include "specround/signing.hpp"

using namespace specround;
using linalg::Matrix;
using linalg::Vector;

namespace {

// w_i = x_i sqrt(c_i lambda / <c,x>) v_i, built directly from the definition.
std::vector<Vector> w_vectors(const VectorInstance& inst, double lambda) {
  double cx = 0.0;
  for (std::size_t i = 0; i < inst.x.size(); ++i) cx += inst.c[i] * inst.x[i];
  std::vector<Vector> w;
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.push_back(inst.x[k] * std::sqrt(inst.c[k] * lambda / cx) * inst.vectors.col(i));
  }
  return w;
}

double signed_sq_norm(const std::vector<Vector>& w, const std::vector<int>& s) {
  Vector acc = Vector::Zero(w.front().size());
  for (std::size_t i = 0; i < w.size(); ++i) acc += s[i] * w[i];
  return acc.squaredNorm();
}

}  // namespace

TEST_SUITE("signing") {
  TEST_CASE("single vector") {
    VectorInstance inst;
    inst.vectors = Matrix::Identity(2, 1);
    inst.x = {1.0};
    inst.c = {3.0};
    const auto aug = signing::derandomized_signing(inst, 2.0);
    CHECK(aug.signs == std::vector<int>{1});
    CHECK(aug.achieved_norm * aug.achieved_norm == doctest::Approx(2.0));
    CHECK(aug.achieved_norm <= aug.l * std::sqrt(aug.lambda) + 1e-12);
    CHECK(aug.augmented.rows() == 3);
    CHECK(aug.augmented(2, 0) == doctest::Approx(std::sqrt(3.0 * 2.0 / 3.0)));
  }

  TEST_CASE("identical vectors cancel") {
    VectorInstance inst;
    inst.vectors = Matrix::Ones(3, 2);
    inst.x = {0.5, 0.5};
    inst.c = {1.0, 1.0};
    const auto aug = signing::derandomized_signing(inst, 1.0);
    CHECK(aug.signs == std::vector<int>{1, -1});
    CHECK(aug.achieved_norm == doctest::Approx(0.0));
  }

  TEST_CASE("random m=20 against sampled signings") {
    const VectorInstance inst = testing::random_isotropic(5, 20, 99);
    const double lambda = 1.3;  // ||sum x v v^T|| = 1 for isotropic input
    const auto aug = signing::derandomized_signing(inst, lambda);
    const auto w = w_vectors(inst, lambda);
    double expect = 0.0, lmax = 0.0;
    for (Eigen::Index i = 0; i < inst.m(); ++i) lmax = std::max(lmax, inst.vectors.col(i).norm());
    for (const auto& wi : w) expect += wi.squaredNorm();
    const double achieved = signed_sq_norm(w, aug.signs);
    CHECK(achieved == doctest::Approx(aug.achieved_norm * aug.achieved_norm).epsilon(1e-10));
    CHECK(aug.expected_sq_norm == doctest::Approx(expect).epsilon(1e-12));
    CHECK(achieved <= expect + 1e-12);
    CHECK(achieved <= lmax * lmax * lambda + 1e-12);

    // uniform random signings: sample mean estimates the expectation and the
    // greedy result is no worse than it
    std::mt19937_64 gen(5);
    std::bernoulli_distribution coin(0.5);
    double mean = 0.0;
    const int samples = 10000;
    std::vector<int> s(20);
    for (int t = 0; t < samples; ++t) {
      for (auto& si : s) si = coin(gen) ? 1 : -1;
      mean += signed_sq_norm(w, s) / samples;
    }
    CHECK(mean == doctest::Approx(expect).epsilon(0.05));
    CHECK(achieved <= mean);

    REQUIRE(aug.conditional.size() == 21);
    CHECK(aug.conditional.front() == doctest::Approx(expect));
    for (std::size_t j = 1; j < aug.conditional.size(); ++j)
      CHECK(aug.conditional[j] <= aug.conditional[j - 1] * (1.0 + 1e-12) + 1e-15);
    CHECK(aug.conditional.back() == doctest::Approx(achieved).epsilon(1e-10));

    const double norm = signing::augmented_moment_norm(inst, aug);
    CHECK(norm <= lambda + aug.l * std::sqrt(lambda) + 1e-9);
  }

  TEST_CASE("augmented isotropy drift on many instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const VectorInstance inst = testing::random_isotropic(3 + static_cast<int>(seed % 4), 25, seed);
      const double lambda = 1.0 + 0.25 * static_cast<double>(seed % 7);
      const auto aug = signing::derandomized_signing(inst, lambda);
      CHECK(aug.achieved_norm <= aug.l * std::sqrt(lambda) + 1e-12);
      CHECK(signing::augmented_moment_norm(inst, aug) <= lambda + aug.l * std::sqrt(lambda) + 1e-9);
    }
  }

  TEST_CASE("signing errors") {
    VectorInstance inst = testing::random_isotropic(2, 4, 1);
    CHECK_THROWS_AS(signing::derandomized_signing(inst, 0.0), Error);
    inst.c.assign(4, 0.0);
    try {
      signing::derandomized_signing(inst, 1.0);
      FAIL("expected DegenerateCosts");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateCosts);
    }
  }

  TEST_CASE("two-sided verifier trivial cases") {
    VectorInstance inst;
    inst.vectors = Matrix::Identity(3, 5);
    inst.vectors.col(3) = Vector::Ones(3);
    inst.vectors.col(4) = Vector::Unit(3, 1);
    inst.x = {1, 1, 1, 0, 0};
    inst.c = {1, 2, 3, 4, 5};
    auto rep = signing::verify_two_sided(inst, {1, 1, 1, 0, 0}, 0.001);
    CHECK(rep.lambda_min == doctest::Approx(1.0));
    CHECK(rep.lambda_max == doctest::Approx(1.0));
    CHECK(rep.cost_ratio == doctest::Approx(1.0));
    CHECK(rep.pass);
    rep = signing::verify_two_sided(inst, {0, 0, 0, 0, 0}, 0.1);
    CHECK(rep.lambda_min == doctest::Approx(0.0));
    CHECK_FALSE(rep.pass);
  }

  TEST_CASE("two-sided verifier matches enumeration for n=2") {
    for (int m : {6, 9, 12}) {
      const VectorInstance inst = testing::planar_instance(m, static_cast<std::uint64_t>(m));
      oracle::Dense rows;
      for (int i = 0; i < m; ++i) rows.push_back({inst.vectors(0, i), inst.vectors(1, i)});
      double cx = 0.0;
      for (int i = 0; i < m; ++i) cx += inst.c[static_cast<std::size_t>(i)] * inst.x[static_cast<std::size_t>(i)];
      const double eps = 0.05;
      const double band = 8 * eps;
      int passes = 0;
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> z(static_cast<std::size_t>(m)), s;
        double cost = 0.0;
        for (int i = 0; i < m; ++i)
          if ((mask >> i) & 1) {
            z[static_cast<std::size_t>(i)] = 1;
            s.push_back(i);
            cost += inst.c[static_cast<std::size_t>(i)];
          }
        const auto ev = oracle::jacobi_eigenvalues(oracle::gram(rows, s));
        const double margin = std::min({std::abs(ev.front() - (1 - band)), std::abs(ev.back() - (1 + band)),
                                        std::abs(std::abs(cost - cx) - band * cx)});
        if (margin < 1e-8) continue;  // too close to a band edge to call
        const bool expect = ev.front() >= 1 - band && ev.back() <= 1 + band && std::abs(cost - cx) <= band * cx;
        const auto rep = signing::verify_two_sided(inst, z, eps);
        CHECK(rep.pass == expect);
        passes += expect;
      }
      MESSAGE("m=" << m << " feasible two-sided selections: " << passes);
    }
  }
}
