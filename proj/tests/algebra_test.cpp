#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "holo/algebra.hpp"
#include "holo/tripod.hpp"

namespace holo {
namespace {

Operator4 random_operator(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator4 m;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

TEST(Algebra, FrobeniusDistanceExamples) {
  const Operator4 id = Operator4::identity();
  EXPECT_EQ(frobenius_distance(id, id), 0.0);
  EXPECT_DOUBLE_EQ(frobenius_distance(id, -id), 4.0);
  Operator4 e00;
  e00(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(frobenius_distance(e00, Operator4::zero()), 1.0);
}

TEST(Algebra, FrobeniusTriangleInequality) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Operator4 a = random_operator(rng), b = random_operator(rng), c = random_operator(rng);
    EXPECT_LE(frobenius_distance(a, c), frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12);
  }
}

TEST(Algebra, IsUnitary) {
  EXPECT_TRUE(is_unitary(Operator4::identity(), 1e-12));
  EXPECT_FALSE(is_unitary(Complex(2.0) * Operator4::identity(), 1e-12));
  EXPECT_TRUE(is_unitary(embed_block(exp_j_block({0.3, -1.2, 0.7}, 2.1)), 1e-12));
  EXPECT_THROW((void)is_unitary(Operator4::identity(), 0.0), std::invalid_argument);
}

TEST(Algebra, ProjectorExamples) {
  const Operator4 p0 = projector_from_vectors({basis_vector(0)});
  EXPECT_EQ(p0, Operator4::diagonal({1.0, 0.0, 0.0, 0.0}));

  const Operator4 p12 = projector_from_vectors({basis_vector(1), basis_vector(2)});
  EXPECT_EQ(p12, Operator4::diagonal({0.0, 1.0, 1.0, 0.0}));

  const double s = 1.0 / std::sqrt(2.0);
  const Operator4 p03 = projector_from_vectors({s * (basis_vector(0) + basis_vector(3))});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      EXPECT_NEAR(std::abs(p03(i, j) - Complex(corner ? 0.5 : 0.0)), 0.0, 1e-15);
    }
  }
}

TEST(Algebra, ProjectorRejectsNonOrthonormal) {
  EXPECT_THROW(projector_from_vectors({basis_vector(0), basis_vector(0)}), std::invalid_argument);
  EXPECT_THROW(projector_from_vectors({Complex(2.0) * basis_vector(1)}), std::invalid_argument);
}

// Random orthonormal k-frames via Gram-Schmidt.
TEST(Algebra, ProjectorIsIdempotentHermitianWithTraceK) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    for (std::size_t k = 1; k <= 4; ++k) {
      std::vector<CVector4> vs;
      while (vs.size() < k) {
        CVector4 v;
        for (auto& c : v) c = Complex(n(rng), n(rng));
        for (const auto& u : vs) v = v - dot(u, v) * u;
        v = Complex(1.0 / norm(v)) * v;
        vs.push_back(v);
      }
      const Operator4 p = projector_from_vectors(vs);
      EXPECT_LT(frobenius_distance(p * p, p), 1e-12);
      EXPECT_LT(frobenius_distance(p.adjoint(), p), 1e-12);
      EXPECT_NEAR(p.trace().real(), static_cast<double>(k), 1e-12);
    }
  }
}

}  // namespace
}  // namespace holo
