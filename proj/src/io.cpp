#include "canon/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "canon/errors.hpp"

namespace canon {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) {
    throw ParseError(std::string("expected a number in ") + what);
  }
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  }
  return v;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// Library validation errors on parsed content are parse errors to callers.
template <typename F>
auto parsing(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& M) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows > 0) {
    if (!j[0].is_array()) throw ParseError("matrix rows must be arrays");
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(r, c) = number(row[static_cast<std::size_t>(c)], "matrix");
    }
  }
  return M;
}

Json to_json(const Signal& z) {
  return Json(std::vector<double>(z.window().begin(), z.window().end()));
}

Json to_json(const LinearSystem& sys) {
  return Json{{"A", matrix_to_json(sys.A())},
              {"C", vector_to_json(sys.C())},
              {"W", vector_to_json(sys.W().transpose())}};
}

Json to_json(const ImpulseResponse& psi) {
  return Json{{"coefficients", psi.coefficients},
              {"tail_bound", psi.tail_bound}};
}

Json to_json(const Subspace& s) {
  return Json{{"ambient_dim", s.ambient_dim()},
              {"basis", matrix_to_json(s.basis)},
              {"tol", s.tol}};
}

Json to_json(const ReducedRealization& red) {
  Json out = to_json(red.system);
  out["projection"] = matrix_to_json(red.projection);
  out["section"] = matrix_to_json(red.section);
  out["original_dim"] = red.original_dim;
  return out;
}

Json to_json(const FiniteMemoryFilter& f) { return Json{{"psi", f.psi}}; }

Json to_json(const FiniteSystem& sys) {
  return Json{{"transition", sys.transition()}, {"output", sys.outputs()}};
}

Json to_json(const LinearMap& f) { return matrix_to_json(f.matrix); }

Signal signal_from_json(const Json& j) {
  return parsing([&] {
    const Eigen::VectorXd v = vector_from_json(j, "signal");
    return Signal(std::vector<double>(v.data(), v.data() + v.size()));
  });
}

LinearSystem linear_system_from_json(const Json& j) {
  return parsing([&] {
    const Eigen::VectorXd C = vector_from_json(field(j, "C"), "C");
    const Eigen::VectorXd W = vector_from_json(field(j, "W"), "W");
    const Eigen::MatrixXd A = matrix_from_json(field(j, "A"), C.size());
    return LinearSystem(A, C, W.transpose());
  });
}

ImpulseResponse impulse_response_from_json(const Json& j) {
  return parsing([&] {
    const Eigen::VectorXd c =
        vector_from_json(field(j, "coefficients"), "coefficients");
    ImpulseResponse psi{std::vector<double>(c.data(), c.data() + c.size()),
                        number(field(j, "tail_bound"), "tail_bound")};
    if (!(psi.tail_bound >= 0.0) || !std::isfinite(psi.tail_bound)) {
      throw ParseError("tail_bound must be finite and nonnegative");
    }
    for (double x : psi.coefficients) {
      if (!std::isfinite(x)) throw ParseError("non-finite coefficient");
    }
    return psi;
  });
}

Subspace subspace_from_json(const Json& j) {
  return parsing([&] {
    const auto n = field(j, "ambient_dim").get<Eigen::Index>();
    Subspace s;
    s.basis = matrix_from_json(field(j, "basis"));
    if (s.basis.rows() == 0 && n > 0) s.basis.resize(n, 0);
    if (s.basis.rows() != n) throw ParseError("basis rows must equal ambient_dim");
    s.tol = number(field(j, "tol"), "tol");
    return s;
  });
}

ReducedRealization reduced_realization_from_json(const Json& j) {
  return parsing([&] {
    ReducedRealization red;
    red.system = linear_system_from_json(j);
    red.original_dim = field(j, "original_dim").get<Eigen::Index>();
    red.projection = matrix_from_json(field(j, "projection"), red.original_dim);
    red.section = matrix_from_json(field(j, "section"), red.system.dim());
    if (red.section.rows() == 0) red.section.resize(red.original_dim, 0);
    if (red.projection.rows() != red.system.dim() ||
        red.projection.cols() != red.original_dim ||
        red.section.rows() != red.original_dim ||
        red.section.cols() != red.system.dim()) {
      throw ParseError("projection/section shapes do not match the systems");
    }
    return red;
  });
}

FiniteMemoryFilter filter_from_json(const Json& j) {
  return parsing([&] {
    const Eigen::VectorXd v = vector_from_json(field(j, "psi"), "psi");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v(i))) throw ParseError("non-finite psi entry");
    }
    return FiniteMemoryFilter{std::vector<double>(v.data(), v.data() + v.size())};
  });
}

FiniteSystem finite_system_from_json(const Json& j) {
  return parsing([&] {
    return FiniteSystem(
        field(j, "transition").get<std::vector<std::vector<State>>>(),
        field(j, "output").get<std::vector<int>>());
  });
}

LinearMap linear_map_from_json(const Json& j) {
  return parsing([&] { return LinearMap{matrix_from_json(j)}; });
}

DocumentKind document_kind(const Json& j) {
  if (j.is_array()) {
    return !j.empty() && j[0].is_array() ? DocumentKind::kUnknown
                                         : DocumentKind::kSignal;
  }
  if (!j.is_object()) return DocumentKind::kUnknown;
  if (j.contains("projection")) return DocumentKind::kReducedRealization;
  if (j.contains("A")) return DocumentKind::kLinearSystem;
  if (j.contains("transition")) return DocumentKind::kFiniteSystem;
  if (j.contains("psi")) return DocumentKind::kFilter;
  if (j.contains("coefficients")) return DocumentKind::kImpulseResponse;
  if (j.contains("basis")) return DocumentKind::kSubspace;
  return DocumentKind::kUnknown;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace canon
