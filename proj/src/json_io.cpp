#include "berezin/json_io.hpp"

#include <fstream>

namespace berezin {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    entries.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  const int n = j.at("dim").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != n)
    throw std::invalid_argument("matrix_from_json: row count mismatch");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = entries.at(i);
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix_from_json: column count mismatch");
    for (int k = 0; k < n; ++k)
      m(i, k) = cplx(row.at(k).at(0).get<double>(), row.at(k).at(1).get<double>());
  }
  return m;
}

json povm_to_json(const FinitePovm& povm) {
  json points = json::array(), weights = json::array(), states = json::array();
  for (int s = 0; s < povm.size(); ++s) {
    points.push_back(povm.label(s));
    weights.push_back(povm.weight(s));
    states.push_back(matrix_to_json(povm.state(s).matrix()));
  }
  return json{{"dim", povm.dim()},
              {"points", std::move(points)},
              {"weights", std::move(weights)},
              {"states", std::move(states)}};
}

FinitePovm povm_from_json(const json& j, bool force, double tol) {
  const int dim = j.at("dim").get<int>();
  std::vector<std::string> points;
  for (const auto& p : j.at("points")) points.push_back(p.get<std::string>());
  std::vector<double> weights = j.at("weights").get<std::vector<double>>();
  std::vector<DensityOperator> states;
  for (const auto& s : j.at("states"))
    states.push_back(DensityOperator(HermitianOperator(matrix_from_json(s))));
  FinitePovm povm(dim, std::move(points), std::move(weights), std::move(states));
  const auto report = validate(povm, tol);
  if (!report.passed() && !force)
    throw std::runtime_error("povm_from_json: resolution defect " +
                             std::to_string(report.resolution_defect) +
                             " exceeds tolerance " + std::to_string(tol));
  return povm;
}

json point_measure_to_json(const PointMeasure& nu) {
  json points = json::array();
  for (const auto& z : nu.points) {
    json vec = json::array();
    for (Eigen::Index i = 0; i < z.size(); ++i)
      vec.push_back({z[i].real(), z[i].imag()});
    points.push_back(std::move(vec));
  }
  return json{{"dim", nu.dim}, {"points", std::move(points)}, {"masses", nu.masses}};
}

PointMeasure point_measure_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<Eigen::VectorXcd> points;
  for (const auto& vec : j.at("points")) {
    Eigen::VectorXcd z(vec.size());
    for (size_t i = 0; i < vec.size(); ++i)
      z[i] = cplx(vec.at(i).at(0).get<double>(), vec.at(i).at(1).get<double>());
    points.push_back(std::move(z));
  }
  return PointMeasure(dim, std::move(points),
                      j.at("masses").get<std::vector<double>>());
}

FiniteGroup group_from_json(const json& j) {
  const int order = j.at("order").get<int>();
  auto mult = j.at("mult").get<std::vector<std::vector<int>>>();
  if (static_cast<int>(mult.size()) != order)
    throw std::invalid_argument("group_from_json: order/table mismatch");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  FiniteGroup group(std::move(mult), std::move(labels));
  if (j.contains("classes")) {
    auto declared = j.at("classes").get<std::vector<std::vector<int>>>();
    for (auto& cls : declared) std::sort(cls.begin(), cls.end());
    std::sort(declared.begin(), declared.end());
    auto computed = group.classes();
    std::sort(computed.begin(), computed.end());
    if (declared != computed)
      throw std::invalid_argument(
          "group_from_json: declared classes disagree with the computed partition");
  }
  return group;
}

UnitaryRep rep_from_json(const FiniteGroup& group, const json& j) {
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& m : j) mats.push_back(matrix_from_json(m));
  return UnitaryRep(group, std::move(mats));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace berezin
