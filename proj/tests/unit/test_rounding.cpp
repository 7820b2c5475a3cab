#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "specround/error.hpp"
#include "specround/regret.hpp"
#include "specround/rounding.hpp"

using namespace specround;
using linalg::Matrix;

namespace {

oracle::Dense rows_of(const VectorInstance& inst) {
  oracle::Dense rows;
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    std::vector<double> r;
    for (Eigen::Index k = 0; k < inst.n(); ++k) r.push_back(inst.vectors(k, i));
    rows.push_back(r);
  }
  return rows;
}

double oracle_lambda_min(const VectorInstance& inst, const std::vector<int>& s) {
  return oracle::lambda_min(oracle::gram(rows_of(inst), s));
}

double oracle_cost(const VectorInstance& inst, const std::vector<int>& s) {
  double c = 0.0;
  for (int i : s) c += inst.c[static_cast<std::size_t>(i)];
  return c;
}

double cost_upper(const VectorInstance& inst, double eps) {
  double cx = 0.0, cinf = 0.0;
  for (std::size_t i = 0; i < inst.x.size(); ++i) {
    cx += inst.c[i] * inst.x[i];
    cinf = std::max(cinf, inst.c[i]);
  }
  return (1.0 + 6.0 * eps) * cx + 15.0 * inst.n() * cinf / eps;
}

VectorInstance identity_instance(int n) {
  VectorInstance inst;
  inst.vectors = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    inst.x.push_back(1.0);
    inst.c.push_back(1.0 + i);
  }
  return inst;
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;  // not reached in passing tests
}

}  // namespace

TEST_SUITE("rounding") {
  TEST_CASE("integral x never enters the loop") {
    VectorInstance inst = identity_instance(4);
    // extra vectors with x = 0 keep isotropy
    inst.vectors.conservativeResize(4, 6);
    inst.vectors.col(4) = linalg::Vector::Ones(4);
    inst.vectors.col(5) = linalg::Vector::Unit(4, 2);
    inst.x.insert(inst.x.end(), {0.0, 0.0});
    inst.c.insert(inst.c.end(), {5.0, 5.0});
    for (double eps : {0.05, 0.2, 0.45}) {
      rounding::SwapParams p;
      p.eps = eps;
      p.seed = 42;
      const auto cert = rounding::randomized_swap(inst, p);
      CHECK(cert.iterations == 0);
      CHECK(cert.selected == std::vector<int>{0, 1, 2, 3});
      CHECK(cert.lambda_min == doctest::Approx(1.0));
    }
  }

  TEST_CASE("identity instance selects everything") {
    const VectorInstance inst = identity_instance(5);
    rounding::SwapParams p;
    p.eps = 0.3;
    const auto cert = rounding::randomized_swap(inst, p);
    CHECK(cert.selected.size() == 5);
    CHECK(cert.cost == doctest::Approx(15.0));
  }

  TEST_CASE("random n=4 m=60 eps=0.25 seed=7") {
    const VectorInstance inst = testing::random_isotropic(4, 60, 2024);
    rounding::SwapParams p;
    p.eps = 0.25;
    p.seed = 7;
    const auto cert = rounding::randomized_swap(inst, p);
    const double lam = oracle_lambda_min(inst, cert.selected);
    CHECK(lam >= 0.5 - 1e-12);
    CHECK(cert.lambda_min == doctest::Approx(lam).epsilon(1e-9));
    CHECK(cert.regret_slack >= 0.0);
    CHECK(cert.cost == doctest::Approx(oracle_cost(inst, cert.selected)));
  }

  TEST_CASE("step distributions") {
    const VectorInstance inst = testing::random_isotropic(3, 20, 77);
    const double eps = 0.2;
    const double alpha = std::sqrt(3.0) / eps;
    const double k = 20 + 2.0 * 3 / eps;

    rounding::SwapState empty;
    empty.in_set.assign(20, 0);
    empty.z = linalg::SymMatrix::zero(3);
    auto am = regret::compute_action_matrix(empty.z, alpha);
    auto d = rounding::swap_step_distributions(empty, inst, am, alpha, k);
    CHECK(d.removal_empty == 1.0);

    rounding::SwapState some;
    some.in_set.assign(20, 0);
    for (int i = 0; i < 20; i += 3) some.in_set[static_cast<std::size_t>(i)] = 1;
    some.z = inst.selection_moment(some.selected());
    am = regret::compute_action_matrix(some.z, alpha);
    d = rounding::swap_step_distributions(some, inst, am, alpha, k);
    double rem = d.removal_empty, add = d.addition_empty;
    const Matrix half = am.half().matrix();
    for (int i = 0; i < 20; ++i) {
      const auto v = inst.vectors.col(i);
      const double ah = v.dot(half * v);  // brute-force quadratic form
      const double lev = 2.0 * alpha * ah;
      const double x = inst.x[static_cast<std::size_t>(i)];
      const double expect_rem = some.in_set[static_cast<std::size_t>(i)] && lev < 0.5 ? (1 - x) * (1 - lev) / k : 0.0;
      const double expect_add = some.in_set[static_cast<std::size_t>(i)] ? 0.0 : x * (1 + lev) / k;
      CHECK(d.removal[static_cast<std::size_t>(i)] == doctest::Approx(expect_rem).epsilon(1e-10));
      CHECK(d.addition[static_cast<std::size_t>(i)] == doctest::Approx(expect_add).epsilon(1e-10));
      CHECK(d.removal[static_cast<std::size_t>(i)] >= 0.0);
      rem += d.removal[static_cast<std::size_t>(i)];
      add += d.addition[static_cast<std::size_t>(i)];
    }
    CHECK(std::abs(rem - 1.0) <= 1e-12);
    CHECK(std::abs(add - 1.0) <= 1e-12);
    CHECK(d.full_addition_mass <= 1.0 + 1e-12);

    // x = 1 everywhere: removal weights vanish
    const VectorInstance ones = identity_instance(3);
    rounding::SwapState full;
    full.in_set.assign(3, 1);
    full.z = linalg::SymMatrix::identity(3);
    am = regret::compute_action_matrix(full.z, alpha);
    d = rounding::swap_step_distributions(full, ones, am, alpha, 3 + 2.0 * 3 / eps);
    for (double r : d.removal) CHECK(r == 0.0);
    CHECK(d.removal_empty == 1.0);
  }

  TEST_CASE("sample_index inverse CDF in index order") {
    const std::vector<double> probs{0.1, 0.0, 0.3};
    CHECK(rounding::sample_index(probs, 0.05) == 0);
    CHECK(rounding::sample_index(probs, 0.1) == 2);
    CHECK(rounding::sample_index(probs, 0.39) == 2);
    CHECK(rounding::sample_index(probs, 0.4) == rounding::kEmpty);
    CHECK(rounding::sample_index(probs, 0.99) == rounding::kEmpty);
  }

  TEST_CASE("per-run certificate invariants and reproducibility") {
    const VectorInstance inst = testing::random_isotropic(6, 90, 31);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      rounding::SwapParams p;
      p.eps = 0.1;
      p.seed = seed;
      const auto cert = rounding::randomized_swap(inst, p);
      const double lam = oracle_lambda_min(inst, cert.selected);
      CHECK(lam >= 1.0 - 2.0 * p.eps - 1e-12);
      double sum = 0.0;
      for (const auto& r : cert.history) {
        sum += r.delta_plus - r.delta_minus;
        if (r.removed != rounding::kEmpty) CHECK(r.removed_leverage < 0.5);
        CHECK(r.removal_mass >= 0.0);
        CHECK(r.removal_mass <= 1.0 + 1e-12);
        CHECK(r.addition_mass <= 1.0 + 1e-12);
      }
      CHECK(lam >= sum - 2.0 * std::sqrt(6.0) / cert.run.alpha - 1e-7);
      CHECK(cert.regret_slack >= -1e-7);

      const auto again = rounding::randomized_swap(inst, p);
      CHECK(again.selected == cert.selected);
      REQUIRE(again.history.size() == cert.history.size());
      for (std::size_t t = 0; t < cert.history.size(); ++t) {
        CHECK(again.history[t].removed == cert.history[t].removed);
        CHECK(again.history[t].added == cert.history[t].added);
        CHECK(again.history[t].delta_plus == cert.history[t].delta_plus);
        CHECK(again.history[t].delta_minus == cert.history[t].delta_minus);
        CHECK(again.history[t].lambda_min == cert.history[t].lambda_min);
      }
    }
  }

  TEST_CASE("randomized swap errors") {
    VectorInstance skew = identity_instance(3);
    skew.vectors(0, 0) = 2.0;
    CHECK(kind_of([&] { rounding::randomized_swap(skew, {}); }) == ErrorKind::NotIsotropic);
    rounding::SwapParams p;
    p.eps = 0.5;
    CHECK(kind_of([&] { rounding::randomized_swap(identity_instance(2), p); }) == ErrorKind::InvalidArgument);
    p.eps = 0.2;
    p.q_cap = 1.0;
    CHECK(kind_of([&] { rounding::randomized_swap(identity_instance(2), p); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("iteration cap carries the partial state") {
    const VectorInstance inst = testing::random_isotropic(8, 120, 3);
    rounding::SwapParams p;
    p.eps = 0.05;
    p.max_iterations = 1;
    int caps = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      p.seed = seed;
      try {
        rounding::randomized_swap(inst, p);
      } catch (const rounding::IterationCapExceeded& e) {
        ++caps;
        CHECK(e.kind() == ErrorKind::IterationCapExceeded);
        CHECK(e.partial().iterations == 1);
        CHECK(e.partial().history.size() == 1);
      }
    }
    CHECK(caps > 0);
  }

  TEST_CASE("exact rounding examples") {
    const VectorInstance ident = identity_instance(4);
    auto cert = rounding::exact_round(ident, {0.1, 5});
    CHECK(cert.selected == std::vector<int>{0, 1, 2, 3});
    CHECK(cert.lambda_min >= 1.0 - 1e-12);

    const VectorInstance tight = testing::tight_pairs(5, 0.2, 3.0);
    rounding::SwapParams p;
    p.eps = 0.05;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      p.seed = seed;
      cert = rounding::exact_round(tight, p);
      CHECK(cert.selected.size() == 10);
      CHECK(cert.cost == doctest::Approx(15.0));
    }

    const VectorInstance inst = testing::random_isotropic(5, 80, 555);
    p.eps = 0.2;
    p.seed = 3;
    cert = rounding::exact_round(inst, p);
    CHECK(oracle_lambda_min(inst, cert.selected) >= 1.0 - 1e-7);
    CHECK(oracle_cost(inst, cert.selected) <= cost_upper(inst, 0.2));
    CHECK(kind_of([&] { rounding::exact_round(inst, {0.25, 0}); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("exact rounding range collapse returns the forced set") {
    VectorInstance inst;
    inst.vectors = Matrix::Zero(2, 3);
    inst.vectors(0, 0) = 1.0;
    inst.vectors(1, 1) = 1.0;
    inst.x = {1.0, 1.0, 0.5};
    inst.c = {1.0, 1.0, 1.0};
    const auto cert = rounding::exact_round(inst, {0.1, 0});
    CHECK(cert.range_collapse);
    CHECK(cert.selected == std::vector<int>{0, 1});
  }

  TEST_CASE("exact rounding cost bound over 200 seeds") {
    const VectorInstance inst = testing::random_isotropic(10, 150, 1);
    const double bound = cost_upper(inst, 0.2);
    int violations = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      rounding::SwapParams p;
      p.eps = 0.2;
      p.seed = seed;
      p.record_history = false;
      const auto cert = rounding::exact_round(inst, p);
      if (cert.cost > bound) ++violations;
      if (cert.lambda_min < 1.0 - 1e-7) ++violations;
    }
    CHECK(violations == 0);
  }

  TEST_CASE("packing and covering residuals are reported, not enforced") {
    VectorInstance inst = testing::random_isotropic(3, 30, 12);
    inst.packing = LinearRows{{std::vector<double>(30, 1.0)}, {10.0}};
    inst.covering = LinearRows{{std::vector<double>(30, 1.0)}, {5.0}};
    const auto cert = rounding::exact_round(inst, {0.1, 1});
    REQUIRE(cert.packing.size() == 1);
    REQUIRE(cert.covering.size() == 1);
    CHECK(cert.packing[0].z_value == doctest::Approx(static_cast<double>(cert.selected.size())));
    double xs = 0.0;
    for (double x : inst.x) xs += x;
    CHECK(cert.covering[0].x_value == doctest::Approx(xs));
  }
}
