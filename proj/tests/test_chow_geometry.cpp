#include <gtest/gtest.h>

#include "chowid/chow_geometry.hpp"
#include "chowid/pipeline.hpp"
#include "oracles.hpp"

using namespace chowid;

namespace {

ResidueVector hv(const FfMatrix& h, const ResidueVector& v) { return mul_vec(h, v); }

bool all_zero(const ResidueVector& v) {
  return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

}  // namespace

TEST(ChowGeometry, Dimensions) {
  EXPECT_EQ(ambient_dimension(5), 56u);
  EXPECT_EQ(ambient_dimension(102), 187460u);
  EXPECT_EQ(cone_dimension(5), 16u);
  EXPECT_EQ(expected_tangent_rank(5, 3), 48u);
  EXPECT_EQ(expected_hessian_rank(5), 15u);
  EXPECT_EQ(expected_hessian_rank(2), 6u);
  EXPECT_EQ(expected_hessian_rank(102), 306u);
  EXPECT_THROW(expected_hessian_rank(1), ContractViolation);
}

TEST(ChowGeometry, MonomialPointTangentRank) {
  const PrimeModulus m(20201);
  const ChowPoint p(LinearForm::variable(2, 0, m), LinearForm::variable(2, 1, m), LinearForm::variable(2, 2, m));
  const FfMatrix t = tangent_basis(p).as_matrix();
  EXPECT_EQ(t.rows(), 9u);
  EXPECT_EQ(oracle::rank(t), 7u);
  EXPECT_EQ(rank(t), 7u);
}

TEST(ChowGeometry, VeronesePointTangentRank) {
  const PrimeModulus m(20201);
  const LinearForm l(m, {1, 1, 1});
  const ChowPoint p(l, l, l);
  EXPECT_EQ(rank(tangent_basis(p).as_matrix()), 3u);
}

TEST(ChowGeometry, TangentVectorsAreCofactorTimesVariable) {
  SeededRng rng(31);
  const PrimeModulus m(101);
  const ChowPoint p = sample_point(3, m, rng);
  const TangentBasis tb = tangent_basis(p);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i <= 3; ++i) {
      std::vector<LinearForm> f{LinearForm::variable(3, i, m)};
      for (std::size_t a = 0; a < 3; ++a) {
        if (a != k) f.push_back(p.forms[a]);
      }
      ASSERT_EQ(tb.at(k, i), expand_product(f));
    }
  }
}

TEST(ChowGeometry, TerraciniStacksPoints) {
  SeededRng rng(32);
  const PrimeModulus m(20201);
  std::vector<ChowPoint> pts{sample_point(4, m, rng), sample_point(4, m, rng)};
  const FfMatrix t = terracini_matrix(pts);
  ASSERT_EQ(t.rows(), 30u);
  ASSERT_EQ(t.cols(), 35u);
  const FfMatrix second = tangent_basis(pts[1]).as_matrix();
  for (std::size_t r = 0; r < 15; ++r) {
    ASSERT_TRUE(std::equal(second.row(r).begin(), second.row(r).end(), t.row(15 + r).begin()));
  }
  EXPECT_EQ(rank(t), 26u);
}

TEST(ChowGeometry, SamplingDeterministicAndNonzero) {
  const PrimeModulus m(7);
  SeededRng a(5), b(5);
  SamplingStats stats;
  for (int i = 0; i < 200; ++i) {
    const ChowPoint p = sample_point(1, m, a, &stats);
    ASSERT_EQ(p, sample_point(1, m, b));
    for (const auto& f : p.forms) ASSERT_FALSE(f.is_zero());
  }
  // With 49 vectors per form some zero draws are expected.
  EXPECT_GT(stats.zero_form_resamples, 0u);
}

TEST(ChowGeometry, HessianRejectsNonNormal) {
  SeededRng rng(33);
  const PrimeModulus m(20201);
  const ChowPoint p = sample_point(3, m, rng);
  Poly eta(MonomialBasis(3, 3), m);
  eta.coeffs()[0] = 1;
  EXPECT_THROW(hessian_at(p, eta), ContractViolation);
}

// Random certified instances; each property is checked exactly.
TEST(ChowGeometry, HessianPropertiesOnCertifiedInstances) {
  std::size_t instances = 0;
  for (std::uint64_t seed = 0; instances < 100; ++seed) {
    const std::size_t n = 2 + seed % 6;
    CertifyOptions o;
    o.n = n;
    o.seed = seed;
    const Certificate c = certify(o);
    ASSERT_TRUE(c.verdict);
    const PrimeModulus m(c.prime);
    const Replay rep = replay(m, n, c.r, c.points, c.f0, HessianScope::kFirstPoint);
    const Poly eta(MonomialBasis(n, 3), m, rep.eta);
    const ChowPoint& p = c.points.front();
    const HessianMatrix h = hessian_at(p, eta);

    ASSERT_TRUE(h.entries.is_symmetric());
    ASSERT_TRUE(h.diagonal_blocks_zero());
    ASSERT_EQ(rank(h.entries), expected_hessian_rank(n));

    const std::size_t w = n + 1;
    for (std::size_t k = 0; k < 3; ++k) {
      ResidueVector v(3 * w, 0);
      std::copy(p.forms[k].coords().begin(), p.forms[k].coords().end(), v.begin() + k * w);
      ASSERT_TRUE(all_zero(hv(h.entries, v)));
    }
    for (const auto& dir : scaling_fiber_directions(p)) ASSERT_TRUE(all_zero(hv(h.entries, dir)));

    // Entry oracle: <x_i x_j L_c, eta> with c the remaining factor.
    if (instances < 10) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 3; ++l) {
          if (k == l) continue;
          const std::size_t third = 3 - k - l;
          for (std::size_t i = 0; i < w; ++i) {
            for (std::size_t j = 0; j < w; ++j) {
              const std::vector<LinearForm> f{LinearForm::variable(n, i, m), LinearForm::variable(n, j, m),
                                              p.forms[third]};
              ASSERT_EQ(h.entries(k * w + i, l * w + j), contract(expand_product(f), eta).value());
            }
          }
        }
      }
    }
    ++instances;
  }
}
