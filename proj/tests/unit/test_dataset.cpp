#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "aivf/dataset.hpp"
#include "aivf/error.hpp"
#include "aivf/stats.hpp"
#include "support.hpp"

using namespace aivf;
using aivf::support::TempDir;

TEST(ConceptSizes, HarmonicSplitOfTwentyFive) {
  EXPECT_EQ(concept_sizes(25, 4, 1.0), (std::vector<std::size_t>{12, 6, 4, 3}));
}

TEST(ConceptSizes, SumAndMonotone) {
  for (double s : {0.0, 0.3, 1.0, 2.5}) {
    for (std::size_t n : {64u, 100u, 1000u, 50000u}) {
      const auto sizes = concept_sizes(n, 64, s);
      EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), n);
      for (std::size_t c = 1; c < sizes.size(); ++c) EXPECT_LE(sizes[c], sizes[c - 1]);
      EXPECT_GE(sizes.back(), 1u);
    }
  }
}

TEST(ConceptSizes, RejectsTooFewVectors) {
  EXPECT_THROW(concept_sizes(10, 20, 1.0), ConfigError);
}

TEST(Generate, SameSeedIsByteIdentical) {
  SynthConfig c;
  c.n = 2000;
  c.m_concepts = 16;
  c.dim = 16;
  c.seed = 7;
  const auto a = generate_synthetic(c);
  const auto b = generate_synthetic(c);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()), 0);
  EXPECT_TRUE(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin()));
  c.seed = 8;
  EXPECT_FALSE(generate_synthetic(c) == a);
}

TEST(Generate, RowsAreUnitAndLabelledBySize) {
  SynthConfig c;
  c.n = 3000;
  c.m_concepts = 20;
  c.dim = 24;
  const auto vs = generate_synthetic(c);
  const auto sizes = concept_sizes(c.n, c.m_concepts, c.zipf_exponent_sizes);
  std::vector<std::size_t> seen(c.m_concepts, 0);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    double norm = 0.0;
    for (float x : vs.row(i)) norm += double(x) * x;
    EXPECT_NEAR(norm, 1.0, 1e-5);
    ++seen[vs.labels()[i]];
  }
  EXPECT_EQ(seen, sizes);
}

TEST(Generate, PlantedExponentRecoveredOnLabels) {
  SynthConfig c;
  c.n = 20000;
  c.m_concepts = 64;
  c.alpha = 0.5;
  const auto vs = generate_synthetic(c);
  const auto st = compute_stats(vs, label_partition(vs));
  const auto fit = fit_power_law(st.frequency, st.coherence);
  EXPECT_GE(fit.alpha_hat, 0.35);
  EXPECT_LE(fit.alpha_hat, 0.65);
}

TEST(Generate, SizeAndCoherencePositivelyCorrelated) {
  for (std::uint64_t seed : {1u, 2u}) {
    SynthConfig c;
    c.n = 8000;
    c.m_concepts = 16;
    c.dim = 32;
    c.seed = seed;
    const auto vs = generate_synthetic(c);
    const auto st = compute_stats(vs, label_partition(vs));
    std::vector<double> x, y;
    for (std::size_t k = 0; k < st.num_clusters(); ++k) {
      x.push_back(std::log(double(st.frequency[k])));
      y.push_back(std::log(*st.coherence[k]));
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sxy += (x[k] - mx) * (y[k] - my);
    EXPECT_GT(sxy, 0.0) << "seed " << seed;
  }
}

TEST(Generate, RejectsBadConfig) {
  SynthConfig c;
  c.n = 10;
  c.m_concepts = 20;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
  c = SynthConfig{};
  c.alpha = 0.0;
  EXPECT_THROW(generate_synthetic(c), ConfigError);
}

TEST(Normalize, ThreeFourFive) {
  const auto out = normalize(VectorSet(2, {3.0f, 4.0f}));
  EXPECT_FLOAT_EQ(out.row(0)[0], 0.6f);
  EXPECT_FLOAT_EQ(out.row(0)[1], 0.8f);
}

TEST(Normalize, Idempotent) {
  const auto once = aivf::support::random_unit_set(50, 9, 3);
  const auto twice = normalize(once);
  for (std::size_t i = 0; i < once.data().size(); ++i) {
    EXPECT_NEAR(once.data()[i], twice.data()[i], 1e-7);
  }
}

TEST(Normalize, ZeroRowNamesId) {
  try {
    normalize(VectorSet(2, {1.0f, 0.0f, 0.0f, 0.0f}));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("id 1"), std::string::npos) << e.what();
  }
}

TEST(VectorSetCtor, Validates) {
  EXPECT_THROW(VectorSet(1, {1.0f}), DataError);
  EXPECT_THROW(VectorSet(2, {1.0f, 2.0f, 3.0f}), DataError);
  EXPECT_THROW(VectorSet(2, {1.0f, 2.0f}, std::vector<std::uint32_t>{0, 1}), DataError);
}

TEST(VectorFile, RoundTripThreeByTwo) {
  TempDir dir;
  const VectorSet vs(2, {0.5f, -1.25f, 3e-8f, 7.0f, -0.0f, 1e30f});
  save_vectors(vs, dir / "a.avf");
  EXPECT_EQ(load_vectors(dir / "a.avf"), vs);

  const VectorSet labelled(2, {1, 2, 3, 4}, std::vector<std::uint32_t>{9, 4});
  save_vectors(labelled, dir / "b.avf");
  EXPECT_EQ(load_vectors(dir / "b.avf"), labelled);
}

TEST(VectorFile, HeaderLayout) {
  TempDir dir;
  save_vectors(VectorSet(3, {1, 2, 3}), dir / "a.avf");
  const auto bytes = aivf::support::slurp(dir / "a.avf");
  ASSERT_EQ(bytes.size(), 16u + 12u);
  EXPECT_EQ(bytes.substr(0, 4), "AVF1");
  EXPECT_EQ(bytes[4], 1);   // n, little-endian
  EXPECT_EQ(bytes[8], 3);   // dim
  EXPECT_EQ(bytes[12], 0);  // no labels
}

TEST(VectorFile, BadMagic) {
  TempDir dir;
  save_vectors(VectorSet(2, {1, 2}), dir / "a.avf");
  auto bytes = aivf::support::slurp(dir / "a.avf");
  bytes[0] = 'X';
  aivf::support::spit(dir / "a.avf", bytes);
  EXPECT_THROW(load_vectors(dir / "a.avf"), FormatError);
}

TEST(VectorFile, HeaderClaimsMoreRowsThanPayload) {
  TempDir dir;
  std::vector<float> rows(9 * 4, 0.25f);
  save_vectors(VectorSet(4, rows), dir / "a.avf");
  auto bytes = aivf::support::slurp(dir / "a.avf");
  bytes[4] = 10;
  aivf::support::spit(dir / "a.avf", bytes);
  try {
    load_vectors(dir / "a.avf");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos) << e.what();
  }
}

TEST(VectorFile, DimensionDisagreesWithByteCount) {
  TempDir dir;
  save_vectors(VectorSet(4, std::vector<float>(8, 1.0f)), dir / "a.avf");
  auto bytes = aivf::support::slurp(dir / "a.avf");
  bytes[8] = 3;
  aivf::support::spit(dir / "a.avf", bytes);
  EXPECT_THROW(load_vectors(dir / "a.avf"), FormatError);
}

TEST(VectorFile, MissingFile) {
  TempDir dir;
  EXPECT_THROW(load_vectors(dir / "nope.avf"), DataError);
}
