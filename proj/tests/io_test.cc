#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "canon/errors.hpp"
#include "canon/io.hpp"
#include "test_util.hpp"

namespace canon {
namespace {

using namespace canon::testing;

// Through text, so number formatting is exercised too.
Json reparse(const Json& j) { return Json::parse(j.dump()); }

TEST(Matrix, RoundTripAndEmpty) {
  Rng rng(81);
  const Eigen::MatrixXd M = gaussian(rng, 3, 4);
  EXPECT_EQ(matrix_from_json(reparse(matrix_to_json(M))), M);
  const Eigen::MatrixXd empty = matrix_from_json(Json::array(), 0);
  EXPECT_EQ(empty.rows(), 0);
  EXPECT_EQ(matrix_from_json(Json::parse("[[], []]")).rows(), 2);
  EXPECT_EQ(matrix_from_json(Json::parse("[[], []]")).cols(), 0);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), ParseError);
  EXPECT_THROW(matrix_from_json(Json::parse("[1, 2]")), ParseError);
  EXPECT_THROW(matrix_from_json(Json::parse("{}")), ParseError);
}

TEST(Signal, RoundTrip) {
  Rng rng(82);
  for (int i = 0; i < 20; ++i) {
    const Signal z = random_signal(rng, i);
    EXPECT_EQ(signal_from_json(reparse(to_json(z))), z);
  }
  EXPECT_EQ(signal_from_json(Json::parse("[]")), Signal::zero());
  EXPECT_THROW(signal_from_json(Json::parse("[1, \"a\"]")), ParseError);
  EXPECT_THROW(signal_from_json(Json::parse("{\"z\": 1}")), ParseError);
}

TEST(LinearSystem, RoundTrip) {
  Rng rng(83);
  for (int i = 0; i < 20; ++i) {
    const LinearSystem sys = random_stable_system(rng, i % 6);
    const LinearSystem back = linear_system_from_json(reparse(to_json(sys)));
    EXPECT_EQ(back.A(), sys.A());
    EXPECT_EQ(back.C(), sys.C());
    EXPECT_EQ(back.W(), sys.W());
  }
  const LinearSystem zero = linear_system_from_json(Json::parse(R"({"A": [], "C": [], "W": []})"));
  EXPECT_EQ(zero.dim(), 0);
}

TEST(LinearSystem, ParseErrors) {
  for (const char* text : {
           R"({"A": [[0.5]], "C": [1]})",
           R"({"A": [[0.5, 0]], "C": [1], "W": [1]})",
           R"({"A": [[0.5]], "C": [1, 2], "W": [1]})",
           R"({"A": [[0.5]], "C": ["x"], "W": [1]})",
           R"({"A": 3, "C": [1], "W": [1]})",
           R"([1, 2])",
       }) {
    EXPECT_THROW(linear_system_from_json(Json::parse(text)), ParseError) << text;
  }
}

TEST(ImpulseResponse, RoundTripAndErrors) {
  const ImpulseResponse psi{{1.0, -0.5, 0.25}, 1e-3};
  const ImpulseResponse back = impulse_response_from_json(reparse(to_json(psi)));
  EXPECT_EQ(back.coefficients, psi.coefficients);
  EXPECT_EQ(back.tail_bound, psi.tail_bound);
  EXPECT_THROW(impulse_response_from_json(Json::parse(R"({"coefficients": [1], "tail_bound": -1})")),
               ParseError);
  EXPECT_THROW(impulse_response_from_json(Json::parse(R"({"tail_bound": 0})")), ParseError);
}

TEST(Subspace, RoundTrip) {
  Rng rng(84);
  Subspace s{random_orthogonal(rng, 4).leftCols(2), 1e-7};
  const Subspace back = subspace_from_json(reparse(to_json(s)));
  EXPECT_EQ(back.basis, s.basis);
  EXPECT_EQ(back.tol, s.tol);
  const Subspace z = subspace_from_json(reparse(to_json(Subspace::zero(3))));
  EXPECT_EQ(z.ambient_dim(), 3);
  EXPECT_EQ(z.dim(), 0);
  EXPECT_THROW(subspace_from_json(Json::parse(R"({"ambient_dim": 3, "basis": [[1]], "tol": 1e-9})")),
               ParseError);
}

TEST(ReducedRealization, RoundTripAndReadAsSystem) {
  Rng rng(85);
  for (int i = 0; i < 20; ++i) {
    const PlantedSystem p = planted_system(rng, 2 + i % 6);
    const ReducedRealization red = reduce(p.system);
    const Json j = reparse(to_json(red));
    EXPECT_EQ(document_kind(j), DocumentKind::kReducedRealization);
    const ReducedRealization back = reduced_realization_from_json(j);
    EXPECT_EQ(back.system.A(), red.system.A());
    EXPECT_EQ(back.projection, red.projection);
    EXPECT_EQ(back.section, red.section);
    EXPECT_EQ(back.original_dim, red.original_dim);
    EXPECT_EQ(linear_system_from_json(j).A(), red.system.A());
  }
}

TEST(ReducedRealization, ShapeMismatch) {
  const Json j = Json::parse(R"({"A": [[0.5]], "C": [1], "W": [1],
      "projection": [[1, 0, 0]], "section": [[1], [0]], "original_dim": 2})");
  EXPECT_THROW(reduced_realization_from_json(j), ParseError);
}

TEST(Filter, RoundTripAndErrors) {
  const FiniteMemoryFilter f{{2, -1, 3}};
  EXPECT_EQ(filter_from_json(reparse(to_json(f))).psi, f.psi);
  EXPECT_EQ(filter_from_json(Json::parse(R"({"psi": []})")).memory(), 0u);
  EXPECT_THROW(filter_from_json(Json::parse(R"({"psi": 1})")), ParseError);
}

TEST(FiniteSystem, RoundTripAndErrors) {
  Rng rng(86);
  const FiniteSystem s = random_finite_system(rng, 5, 3, 2, 3);
  EXPECT_EQ(finite_system_from_json(reparse(to_json(s))), s);
  EXPECT_THROW(finite_system_from_json(Json::parse(R"({"transition": [[0, 2]], "output": [0]})")),
               ParseError);
  EXPECT_THROW(finite_system_from_json(Json::parse(R"({"transition": [[-1]], "output": [0]})")),
               ParseError);
  EXPECT_THROW(finite_system_from_json(Json::parse(R"({"transition": [[0]]})")), ParseError);
}

TEST(LinearMap, RoundTrip) {
  Rng rng(87);
  const LinearMap f{gaussian(rng, 2, 3)};
  EXPECT_EQ(linear_map_from_json(reparse(to_json(f))).matrix, f.matrix);
}

TEST(DocumentKind, Classification) {
  EXPECT_EQ(document_kind(Json::parse("[1, 2]")), DocumentKind::kSignal);
  EXPECT_EQ(document_kind(Json::parse("[]")), DocumentKind::kSignal);
  EXPECT_EQ(document_kind(Json::parse("[[1]]")), DocumentKind::kUnknown);
  EXPECT_EQ(document_kind(Json::parse(R"({"A": [], "C": [], "W": []})")),
            DocumentKind::kLinearSystem);
  EXPECT_EQ(document_kind(Json::parse(R"({"transition": [[0]], "output": [0]})")),
            DocumentKind::kFiniteSystem);
  EXPECT_EQ(document_kind(Json::parse(R"({"psi": [1]})")), DocumentKind::kFilter);
  EXPECT_EQ(document_kind(Json::parse(R"({"coefficients": [1]})")),
            DocumentKind::kImpulseResponse);
  EXPECT_EQ(document_kind(Json::parse(R"({"basis": []})")), DocumentKind::kSubspace);
  EXPECT_EQ(document_kind(Json::parse(R"({"x": 1})")), DocumentKind::kUnknown);
  EXPECT_EQ(document_kind(Json::parse("3")), DocumentKind::kUnknown);
}

TEST(ReadJsonFile, Errors) {
  EXPECT_THROW(read_json_file("/nonexistent/canon.json"), ParseError);
  const auto path = std::filesystem::temp_directory_path() / "canon_io_test.json";
  {
    std::ofstream out(path);
    out << "{\"A\": [[0.5]";
  }
  EXPECT_THROW(read_json_file(path.string()), ParseError);
  {
    std::ofstream out(path);
    out << "{\"psi\": [1, 2]}";
  }
  EXPECT_EQ(filter_from_json(read_json_file(path.string())).psi, (std::vector<double>{1, 2}));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace canon
