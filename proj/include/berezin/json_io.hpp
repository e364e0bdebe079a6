// json_io.hpp - file formats. Complex matrices are stored as
// {"dim": n, "entries": [[[re, im], ...], ...]}; POVMs as
// {"dim", "points", "weights", "states"}; point measures as
// {"dim", "points": [[[re, im], ...], ...], "masses"}.

#pragma once

#include <json.hpp>

#include "berezin/donaldson.hpp"
#include "berezin/groups.hpp"
#include "berezin/povm.hpp"

namespace berezin {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

nlohmann::json povm_to_json(const FinitePovm& povm);
/// Runs validate() and throws std::runtime_error on a failing file unless
/// force is set.
FinitePovm povm_from_json(const nlohmann::json& j, bool force = false,
                          double tol = kPovmDefaultTol);

nlohmann::json point_measure_to_json(const PointMeasure& nu);
PointMeasure point_measure_from_json(const nlohmann::json& j);

/// {"order": m, "mult": [[...]], "classes": [[...]]}; the classes entry is
/// optional and only cross-checked against the computed partition.
FiniteGroup group_from_json(const nlohmann::json& j);
/// A list of unitary matrices, one per element.
UnitaryRep rep_from_json(const FiniteGroup& group, const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace berezin
