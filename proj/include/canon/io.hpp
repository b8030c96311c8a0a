#pragma once

// JSON documents for every value the toolkit reads or writes.
//
//   Signal              [z_{-L+1}, ..., z_0]
//   LinearSystem        {"A": [[...]], "C": [...], "W": [...]}
//   ImpulseResponse     {"coefficients": [...], "tail_bound": x}
//   Subspace            {"ambient_dim": N, "basis": [[...]], "tol": x}
//   ReducedRealization  the LinearSystem fields plus "projection": [[...]],
//                       "section": [[...]] and "original_dim": N
//   FiniteMemoryFilter  {"psi": [Psi_{-N+1}, ..., Psi_0]}
//   FiniteSystem        {"transition": [[...]], "output": [...]}
//   LinearMap           [[...]]
//
// Matrices are arrays of rows. Parsers throw ParseError.

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "canon/finite_system.hpp"
#include "canon/linear_system.hpp"
#include "canon/morphism.hpp"
#include "canon/realization.hpp"
#include "canon/reduction.hpp"
#include "canon/signal.hpp"
#include "canon/subspace.hpp"

namespace canon {

using Json = nlohmann::json;

Json matrix_to_json(const Eigen::MatrixXd& M);
/// `cols` fixes the width of matrices with no rows.
Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols = 0);

Json to_json(const Signal& z);
Json to_json(const LinearSystem& sys);
Json to_json(const ImpulseResponse& psi);
Json to_json(const Subspace& s);
Json to_json(const ReducedRealization& red);
Json to_json(const FiniteMemoryFilter& f);
Json to_json(const FiniteSystem& sys);
Json to_json(const LinearMap& f);

Signal signal_from_json(const Json& j);
LinearSystem linear_system_from_json(const Json& j);
ImpulseResponse impulse_response_from_json(const Json& j);
Subspace subspace_from_json(const Json& j);
ReducedRealization reduced_realization_from_json(const Json& j);
FiniteMemoryFilter filter_from_json(const Json& j);
FiniteSystem finite_system_from_json(const Json& j);
LinearMap linear_map_from_json(const Json& j);

enum class DocumentKind {
  kSignal,
  kLinearSystem,
  kImpulseResponse,
  kSubspace,
  kReducedRealization,
  kFilter,
  kFiniteSystem,
  kUnknown,
};

/// Classifies a document by its keys.
DocumentKind document_kind(const Json& j);

/// Reads and parses a JSON file; ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);

}  // namespace canon
