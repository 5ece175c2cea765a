#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vnlw/fft.hpp"
#include "vnlw/norms.hpp"
#include "vnlw/randomization.hpp"
#include "vnlw/seeding.hpp"

using namespace vnlw;

namespace {

StatePair smooth_pair(const Grid& g)
{
    const double L = g.side_length();
    const auto f = [L](double x, double y) {
        const double dx = x - 0.5 * L, dy = y - 0.4 * L;
        return std::exp(-(dx * dx + dy * dy) / 2.0) * (1.0 + 0.5 * std::cos(3.0 * x));
    };
    return StatePair(RealField::from_function(g, f),
                     RealField::from_function(g, [&](double x, double y) { return 0.5 * f(y, x); }));
}

}  // namespace

TEST(Seeding, SplitSeedIsStableAndDistinct)
{
    EXPECT_EQ(split_seed(7, 3), split_seed(7, 3));
    EXPECT_NE(split_seed(7, 3), split_seed(7, 4));
    EXPECT_NE(split_seed(7, 3), split_seed(8, 3));
    CounterStream s(42);
    double mean = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        mean += x;
        sq += x * x;
    }
    EXPECT_NEAR(mean / n, 0.0, 0.03);
    EXPECT_NEAR(sq / n, 1.0, 0.04);
}

TEST(Tent, PartitionOfUnity)
{
    CounterStream s(1);
    for (int i = 0; i < 200; ++i) {
        const Frequency xi{20.0 * (s.uniform() - 0.5), 20.0 * (s.uniform() - 0.5)};
        EXPECT_NEAR(bump_partition_sum(xi), 1.0, 1e-14);
    }
    EXPECT_EQ(tent_bump({0.0, 0.0}), 1.0);
    EXPECT_EQ(tent_bump({1.0, 0.2}), 0.0);
}

TEST(IndexSet, CanonicalHalf)
{
    EXPECT_TRUE(in_index_set({1, -5}));
    EXPECT_TRUE(in_index_set({0, 2}));
    EXPECT_FALSE(in_index_set({0, 0}));
    EXPECT_FALSE(in_index_set({0, -1}));
    EXPECT_FALSE(in_index_set({-1, 3}));
}

TEST(Decompose, PiecesSumToField)
{
    const Grid g(64, 16.0);
    const RealField f = smooth_pair(g).position;
    const auto pieces = unit_decompose(f);
    SpectralField sum(g);
    double energy = 0.0;
    for (const auto& [n, piece] : pieces) {
        sum += piece;
        const double e = sobolev_norm(piece, 0.0);
        energy += e * e;
    }
    const SpectralField F = forward_transform(f);
    double err = 0.0;
    for (std::size_t k = 0; k < F.coefficients().size(); ++k) {
        err = std::max(err, std::abs(F.coefficients()[k] - sum.coefficients()[k]));
    }
    EXPECT_LT(err, 1e-12);
    EXPECT_NEAR(decomposition_energy(f), energy, 1e-12 * energy);
    EXPECT_LE(decomposition_energy(f), std::pow(sobolev_norm(f, 0.0), 2) * (1 + 1e-12));
}

TEST(Coefficients, SymmetryAndDeterminism)
{
    for (auto kind : {DistributionKind::Gaussian, DistributionKind::Bernoulli}) {
        const CoefficientDraw draw(kind, 99);
        const Complex g = draw.coefficient({2, -3}, 0);
        EXPECT_EQ(draw.coefficient({-2, 3}, 0), std::conj(g));
        EXPECT_EQ(draw.coefficient({0, 0}, 1).imag(), 0.0);
        EXPECT_EQ(CoefficientDraw(kind, 99).coefficient({2, -3}, 0), g);
        EXPECT_NE(draw.coefficient({2, -3}, 1), g);
        EXPECT_THROW(draw.coefficient({1, 1}, 2), std::invalid_argument);
    }
    const CoefficientDraw b(DistributionKind::Bernoulli, 5);
    EXPECT_NEAR(std::abs(b.coefficient({4, 1}, 0)), 1.0, 1e-15);
    EXPECT_EQ(std::abs(b.coefficient({0, 0}, 0)), 1.0);
}

TEST(Coefficients, SecondMomentIsOne)
{
    double acc = 0.0;
    const int n = 4000;
    for (int r = 0; r < n; ++r) acc += std::norm(CoefficientDraw(DistributionKind::Gaussian, r).coefficient({3, 1}, 0));
    EXPECT_NEAR(acc / n, 1.0, 0.07);
}

TEST(Coefficients, ManifestRoundTrip)
{
    const CoefficientDraw draw(DistributionKind::Bernoulli, 123456789012345ULL);
    const CoefficientDraw back = CoefficientDraw::from_manifest(draw.manifest());
    EXPECT_EQ(back.seed(), draw.seed());
    EXPECT_EQ(back.kind(), draw.kind());
    EXPECT_EQ(back.coefficient({7, 2}, 1), draw.coefficient({7, 2}, 1));
    EXPECT_THROW(CoefficientDraw::from_manifest("seed=1\n"), std::invalid_argument);
    EXPECT_THROW(parse_distribution("cauchy"), std::invalid_argument);
}

TEST(Randomize, RealOutputOverSeeds)
{
    const Grid g(64, 32.0);
    const StatePair data = smooth_pair(g);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto kind = seed % 2 ? DistributionKind::Bernoulli : DistributionKind::Gaussian;
        const RandomizedPair r = randomize_pair(data, draw_coefficients(kind, seed));
        EXPECT_LE(r.imaginary_residue, 1e-12);
        EXPECT_EQ(r.seed, seed);
    }
}

TEST(Randomize, AllOnesReproducesData)
{
    const Grid g(64, 32.0);
    const StatePair data = smooth_pair(g);
    const RandomizedPair r = randomize_pair(data, [](const CubeIndex&, int) { return Complex(1.0, 0.0); });
    EXPECT_LT((r.data.position - data.position).max_abs(), 1e-12);
    EXPECT_LT((r.data.velocity - data.velocity).max_abs(), 1e-12);
    EXPECT_EQ(r.source_digest, digest(data));
}

TEST(Randomize, ZeroDataStaysZero)
{
    const Grid g(16, 8.0);
    const RandomizedPair r = randomize_pair(StatePair::zero(g), draw_coefficients(DistributionKind::Gaussian, 3));
    EXPECT_TRUE(r.data.is_zero());
}

TEST(Randomize, ExpectedEnergyMatchesDecomposition)
{
    const Grid g(32, 16.0);
    const StatePair data = smooth_pair(g);
    const double expected = decomposition_energy(data.position);
    const int n = 1000;
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < n; ++r) {
        const RandomizedPair p = randomize_pair(data, draw_coefficients(DistributionKind::Gaussian, split_seed(11, r)));
        const double e = std::pow(sobolev_norm(p.data.position, 0.0), 2);
        sum += e;
        sq += e * e;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean - expected), 3.0 * se);
}

TEST(Subgaussian, SecondMomentIdentityAndBounds)
{
    const std::vector<double> c{1.0, 0.5, 0.25, 2.0};
    const SubgaussianReport two = verify_subgaussian_moment(c, 2, DistributionKind::Gaussian, 4000, 9);
    EXPECT_LT(std::abs(two.empirical_norm - two.l2_norm), 3.0 * two.standard_error);
    for (int p : {4, 6}) {
        for (auto kind : {DistributionKind::Gaussian, DistributionKind::Bernoulli}) {
            const SubgaussianReport rep = verify_subgaussian_moment(c, p, kind, 4000, 10);
            EXPECT_LT(rep.ratio, 1.0);
            EXPECT_GT(rep.ratio, 0.0);
        }
    }
    EXPECT_THROW(verify_subgaussian_moment(c, 3, DistributionKind::Gaussian, 4000, 1), std::invalid_argument);
    EXPECT_THROW(verify_subgaussian_moment(c, 2, DistributionKind::Gaussian, 10, 1), std::invalid_argument);
}

TEST(Digest, SensitiveToData)
{
    const Grid g(16, 8.0);
    StatePair a = smooth_pair(g);
    const auto d0 = digest(a);
    a.velocity.mutable_samples()[3] += 1e-12;
    EXPECT_NE(digest(a), d0);
}
