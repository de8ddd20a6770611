#include "lpreg/instances.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>

using namespace lpreg;

TEST(Rng, StableStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(43);
  EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, UniformRange) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(GenRandomMatrix, DeterministicAndInRange) {
  const RandomMatrixSpec spec{20, 15, 123};
  const GeneralInstance a = gen_random_matrix(spec, 8.0);
  const GeneralInstance b = gen_random_matrix(spec, 8.0);
  EXPECT_TRUE(a.N.isApprox(b.N, 0.0));
  EXPECT_TRUE(a.v.isApprox(b.v, 0.0));
  EXPECT_GE(a.N.minCoeff(), 0.0);
  EXPECT_LT(a.N.maxCoeff(), 1.0);
  EXPECT_GE(a.v.minCoeff(), 0.0);
  EXPECT_LT(a.v.maxCoeff(), 1.0);
  EXPECT_EQ(a.N.rows(), 20);
  EXPECT_EQ(a.N.cols(), 15);
  EXPECT_EQ(a.A.rows(), 0);

  const GeneralInstance c = gen_random_matrix({20, 15, 124}, 8.0);
  EXPECT_FALSE(a.N.isApprox(c.N, 0.0));
}

TEST(GenRandomMatrix, PaperBenchmarkShape) {
  const GeneralInstance inst = gen_random_matrix({500, 400, 1}, 8.0);
  EXPECT_EQ(inst.N.rows(), 500);
  EXPECT_EQ(inst.N.cols(), 400);
}

TEST(GenRandomGraph, DeterministicShapeAndDegrees) {
  RandomGraphSpec spec;
  spec.n_nodes = 60;
  spec.n_labeled = 8;
  spec.p = 4.0;
  spec.seed = 5;
  const GeneralInstance a = gen_random_graph(spec);
  const GeneralInstance b = gen_random_graph(spec);
  EXPECT_TRUE(a.N.isApprox(b.N, 0.0));
  EXPECT_TRUE(a.v.isApprox(b.v, 0.0));

  // N has (#edges) rows and n_nodes - n_labeled columns
  EXPECT_EQ(a.N.cols(), 60 - 8);
  // symmetrized 10-NN: at least n*k/2 edges, at most n*k
  EXPECT_GE(a.N.rows(), 60 * 10 / 2);
  EXPECT_LE(a.N.rows(), 60 * 10);

  // every row has exactly two nonzero entries in the full incidence; the
  // unlabeled block plus v carry them with opposite signs per edge
  for (Index e = 0; e < a.N.rows(); ++e) {
    int nz = 0;
    for (Index j = 0; j < a.N.cols(); ++j)
      if (a.N(e, j) != 0.0) ++nz;
    EXPECT_LE(nz, 2);
  }
}

TEST(GenRandomGraph, EveryNodeTouchesKEdges) {
  RandomGraphSpec spec;
  spec.n_nodes = 40;
  spec.n_labeled = 5;
  spec.k_neighbors = 10;
  spec.p = 2.0;
  spec.seed = 9;
  const GeneralInstance inst = gen_random_graph(spec);
  // degree >= k before symmetrization implies >= k rows touching each
  // unlabeled column
  for (Index j = 0; j < inst.N.cols(); ++j) {
    int deg = 0;
    for (Index e = 0; e < inst.N.rows(); ++e)
      if (inst.N(e, j) != 0.0) ++deg;
    EXPECT_GE(deg, 10);
  }
}

namespace {

std::string write_temp_csv(const std::string& body) {
  static int counter = 0;
  std::string path =
      ::testing::TempDir() + "lpreg_csv_" + std::to_string(counter++) + ".csv";
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

TEST(LoadCsv, ExactSmallFixture) {
  const std::string path = write_temp_csv(
      "a,b,target\n"
      "1,2,3\n"
      "4,5,6\n"
      "7,8,9\n");
  CsvReport report;
  const GeneralInstance inst = load_csv(path, "target", 2.0, &report);
  EXPECT_EQ(report.rows_kept, 3);
  EXPECT_EQ(report.rows_dropped, 0);
  ASSERT_EQ(inst.N.rows(), 3);
  ASSERT_EQ(inst.N.cols(), 3);  // two features + intercept
  EXPECT_EQ(inst.N(0, 0), 1.0);
  EXPECT_EQ(inst.N(0, 1), 2.0);
  EXPECT_EQ(inst.N(0, 2), 1.0);  // intercept
  EXPECT_EQ(inst.v[0], 3.0);
  EXPECT_EQ(inst.v[2], 9.0);
  std::remove(path.c_str());
}

TEST(LoadCsv, DropsBadRows) {
  const std::string path = write_temp_csv(
      "a,target\n"
      "1,2\n"
      "oops,3\n"
      "4,5\n");
  CsvReport report;
  const GeneralInstance inst = load_csv(path, "target", 2.0, &report);
  EXPECT_EQ(report.rows_kept, 2);
  EXPECT_EQ(report.rows_dropped, 1);
  EXPECT_EQ(inst.N.rows(), 2);
  std::remove(path.c_str());
}

TEST(LoadCsv, MissingTargetColumn) {
  const std::string path = write_temp_csv("a,b\n1,2\n");
  try {
    load_csv(path, "target", 2.0);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("target"), std::string::npos);
  }
  std::remove(path.c_str());
}

TEST(LoadCsv, AllRowsBad) {
  const std::string path = write_temp_csv("a,t\nx,1\ny,2\n");
  EXPECT_THROW(load_csv(path, "t", 2.0), EmptyAfterCleaning);
  std::remove(path.c_str());
}

TEST(LoadCsv, QuotedCellsAndCrlf) {
  const std::string path = write_temp_csv("\"a\",t\r\n\"1\",2\r\n");
  const GeneralInstance inst = load_csv(path, "t", 2.0);
  EXPECT_EQ(inst.N(0, 0), 1.0);
  EXPECT_EQ(inst.v[0], 2.0);
  std::remove(path.c_str());
}
