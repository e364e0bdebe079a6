#include "berezin/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace berezin {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> mult,
                         std::vector<std::string> labels)
    : mult_(std::move(mult)), labels_(std::move(labels)) {
  const int n = static_cast<int>(mult_.size());
  detail::require(n > 0, "FiniteGroup: empty table");
  for (const auto& row : mult_) {
    detail::require(static_cast<int>(row.size()) == n,
                    "FiniteGroup: table not square");
    for (int v : row)
      detail::require(v >= 0 && v < n, "FiniteGroup: table entry out of range");
  }
  if (labels_.empty())
    for (int i = 0; i < n; ++i) labels_.push_back("g" + std::to_string(i));
  detail::require(static_cast<int>(labels_.size()) == n,
                  "FiniteGroup: labels size mismatch");

  // Identity and inverses.
  for (int s = 0; s < n; ++s)
    detail::require(mult_[0][s] == s && mult_[s][0] == s,
                    "FiniteGroup: element 0 is not the identity");
  inverse_.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t)
      if (mult_[s][t] == 0) {
        detail::require(mult_[t][s] == 0, "FiniteGroup: one-sided inverse");
        inverse_[s] = t;
        break;
      }
    detail::require(inverse_[s] >= 0, "FiniteGroup: missing inverse");
  }

  // Associativity, sampled when the group is large.
  const int step = n <= 12 ? 1 : 3;
  for (int a = 0; a < n; a += step)
    for (int b = 0; b < n; b += step)
      for (int c = 0; c < n; c += step)
        detail::require(mult_[mult_[a][b]][c] == mult_[a][mult_[b][c]],
                        "FiniteGroup: associativity violated");

  // Conjugacy classes as conjugation orbits.
  class_of_.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (class_of_[s] >= 0) continue;
    std::vector<int> cls;
    const int id = static_cast<int>(classes_.size());
    for (int g = 0; g < n; ++g) {
      const int c = mult_[mult_[g][s]][inverse_[g]];
      if (class_of_[c] < 0) {
        class_of_[c] = id;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes_.push_back(std::move(cls));
  }
}

std::vector<int> FiniteGroup::generated_subgroup(const std::vector<int>& generators) const {
  std::set<int> closure{0};
  for (int g : generators) closure.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> current(closure.begin(), closure.end());
    for (int a : current)
      for (int b : current)
        if (closure.insert(mult_[a][b]).second) grew = true;
  }
  return std::vector<int>(closure.begin(), closure.end());
}

bool FiniteGroup::is_normal(const std::vector<int>& subgroup) const {
  const std::set<int> sub(subgroup.begin(), subgroup.end());
  for (int g = 0; g < order(); ++g)
    for (int s : subgroup)
      if (!sub.count(mult_[mult_[g][s]][inverse_[g]])) return false;
  return true;
}

UnitaryRep::UnitaryRep(const FiniteGroup& group,
                       std::vector<Eigen::MatrixXcd> matrices, std::string name)
    : matrices_(std::move(matrices)), name_(std::move(name)) {
  const int n = group.order();
  detail::require(static_cast<int>(matrices_.size()) == n,
                  "UnitaryRep: one matrix per element required");
  const int d = static_cast<int>(matrices_[0].rows());
  for (const auto& m : matrices_)
    detail::require(m.rows() == d && m.cols() == d,
                    "UnitaryRep: inconsistent matrix sizes");
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(d, d);
  for (int s = 0; s < n; ++s)
    detail::require((matrices_[s] * matrices_[s].adjoint() - eye).norm() <= 1e-10,
                    "UnitaryRep: matrix not unitary");
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      detail::require(
          (matrices_[s] * matrices_[t] - matrices_[group.mult(s, t)]).norm() <= 1e-10,
          "UnitaryRep: homomorphism property violated");
}

std::vector<cplx> UnitaryRep::character() const {
  std::vector<cplx> chi;
  chi.reserve(matrices_.size());
  for (const auto& m : matrices_) chi.push_back(m.trace());
  return chi;
}

CharacterTable::CharacterTable(const FiniteGroup& group, std::vector<Row> rows)
    : rows_(std::move(rows)) {
  const int n = group.order();
  detail::require(!rows_.empty(), "CharacterTable: empty");
  int d2_sum = 0;
  for (const auto& r : rows_) {
    detail::require(static_cast<int>(r.values.size()) == n,
                    "CharacterTable: row length mismatch");
    detail::require(std::abs(r.values[0] - cplx(r.degree, 0)) <= 1e-10,
                    "CharacterTable: chi(1) != degree");
    d2_sum += r.degree * r.degree;
    // Characters are class functions.
    for (const auto& cls : group.classes())
      for (int s : cls)
        detail::require(std::abs(r.values[s] - r.values[cls[0]]) <= 1e-10,
                        "CharacterTable: character not constant on a class");
  }
  detail::require(d2_sum == n, "CharacterTable: sum of squared degrees != |G|");
  for (size_t a = 0; a < rows_.size(); ++a)
    for (size_t b = 0; b < rows_.size(); ++b) {
      cplx acc = 0;
      for (int s = 0; s < n; ++s)
        acc += rows_[a].values[s] * std::conj(rows_[b].values[s]);
      acc /= double(n);
      const cplx expect = a == b ? cplx(1, 0) : cplx(0, 0);
      detail::require(std::abs(acc - expect) <= 1e-8,
                      "CharacterTable: Schur orthogonality violated");
    }
}

FinitePovm rep_povm(const FiniteGroup& group, const UnitaryRep& rho) {
  const int n = group.order();
  const int d = rho.degree();
  const auto chi = rho.character();
  double chi2 = 0;
  for (const auto& c : chi) chi2 += std::norm(c);
  if (std::abs(chi2 / n - 1.0) > 1e-8)
    throw std::invalid_argument("rep_povm: representation is not irreducible");

  // States live in End(V) = C^{d^2}; column-major vectorization carries the
  // Hilbert-Schmidt product tr(C D*) to the standard one.
  std::vector<std::string> labels;
  std::vector<double> weights(n, 1.0 / n);
  std::vector<DensityOperator> states;
  for (int s = 0; s < n; ++s) {
    labels.push_back(group.label(s));
    Eigen::MatrixXcd f = rho.matrix(s) / std::sqrt(double(d));
    states.push_back(projector_onto(Eigen::Map<Eigen::VectorXcd>(f.data(), d * d)));
  }
  return FinitePovm(d * d, std::move(labels), std::move(weights), std::move(states));
}

Eigen::MatrixXd berezin_from_character(const FiniteGroup& group,
                                       const std::vector<cplx>& chi_rho) {
  const int n = group.order();
  detail::require(static_cast<int>(chi_rho.size()) == n,
                  "berezin_from_character: character length mismatch");
  Eigen::MatrixXd m(n, n);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s)
      m(t, s) = std::norm(chi_rho[group.mult(s, group.inverse(t))]) / n;
  return m;
}

std::vector<CharEigenvalue> eigenvalues_via_characters(
    const FiniteGroup& group, const CharacterTable& table,
    const std::vector<cplx>& chi_rho) {
  const int n = group.order();
  detail::require(static_cast<int>(chi_rho.size()) == n,
                  "eigenvalues_via_characters: character length mismatch");
  std::vector<CharEigenvalue> out;
  for (const auto& row : table.rows()) {
    cplx acc = 0;
    for (const auto& cls : group.classes()) {
      const int rep = cls[0];
      acc += double(cls.size()) * std::norm(chi_rho[rep]) * row.values[rep];
    }
    acc /= double(row.degree) * n;
    if (std::abs(acc.imag()) > 1e-9)
      throw std::runtime_error("eigenvalues_via_characters: non-real eigenvalue");
    out.push_back({row.label, acc.real(), row.degree * row.degree});
  }
  return out;
}

std::vector<int> vanishing_off_subgroup(const FiniteGroup& group,
                                        const std::vector<cplx>& chi_rho) {
  std::vector<int> support;
  for (int s = 0; s < group.order(); ++s)
    if (std::abs(chi_rho[s]) > 1e-9) support.push_back(s);
  auto subgroup = group.generated_subgroup(support);
  if (!group.is_normal(subgroup))
    throw std::runtime_error("vanishing_off_subgroup: subgroup not normal");
  return subgroup;
}

namespace {

bool is_trivial_row(const CharacterTable::Row& row) {
  if (row.degree != 1) return false;
  for (const auto& v : row.values)
    if (std::abs(v - cplx(1, 0)) > 1e-10) return false;
  return true;
}

}  // namespace

GapZeroReport gap_zero_predicate(const FiniteGroup& group,
                                 const CharacterTable& table,
                                 const std::vector<cplx>& chi_rho) {
  GapZeroReport r;
  r.vanishing_off_proper =
      static_cast<int>(vanishing_off_subgroup(group, chi_rho).size()) < group.order();
  // The trivial irrep always contributes exactly 1; the gap is zero iff a
  // non-trivial irrep reaches 1 as well.
  const auto eigs = eigenvalues_via_characters(group, table, chi_rho);
  double second = 0.0;
  for (size_t k = 0; k < eigs.size(); ++k)
    if (!is_trivial_row(table.row(static_cast<int>(k))))
      second = std::max(second, eigs[k].value);
  r.gap_zero = (1.0 - second) < 1e-8;
  return r;
}

GroupDiffusion group_diffusion(const FiniteGroup& group, const CharacterTable& table,
                               const std::vector<cplx>& chi_rho, double tau) {
  const int n = group.order();
  const auto eigs = eigenvalues_via_characters(group, table, chi_rho);

  // Pairwise distinct eigenvalues in the open interval (0,1), descending,
  // with the contributing irreps grouped per value.
  std::vector<double> betas;
  std::vector<std::vector<int>> groups_of;
  std::vector<size_t> order(eigs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return eigs[a].value > eigs[b].value; });
  for (size_t k : order) {
    const double v = eigs[k].value;
    if (v >= 1.0 - 1e-9) {
      if (!is_trivial_row(table.row(static_cast<int>(k))))
        throw std::runtime_error(
            "group_diffusion: zero spectral gap, scales do not separate");
      continue;
    }
    if (v <= 1e-9) continue;
    if (!betas.empty() && std::abs(betas.back() - v) <= 1e-9)
      groups_of.back().push_back(static_cast<int>(k));
    else {
      betas.push_back(v);
      groups_of.push_back({static_cast<int>(k)});
    }
  }

  GroupDiffusion out;
  out.partition_scales = betas;
  out.distances = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      double acc = 0.0;
      for (size_t j = 0; j < betas.size(); ++j) {
        double inner = 0.0;
        for (int k : groups_of[j]) {
          const auto& row = table.row(k);
          const cplx chi_st = row.values[group.mult(s, group.inverse(t))];
          inner += row.degree * 2.0 * (row.degree - chi_st.real());
        }
        acc += std::pow(betas[j], 2.0 * tau) * inner;
      }
      out.distances(s, t) = std::sqrt(std::max(0.0, acc));
    }

  // Normal series K_0 = G, K_m = intersection of kernels of the irreps
  // contributing to beta_1..beta_m.
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  out.kernel_series.push_back(all);
  std::set<int> current(all.begin(), all.end());
  for (size_t j = 0; j < betas.size(); ++j) {
    for (int k : groups_of[j]) {
      const auto& row = table.row(k);
      std::set<int> next;
      for (int s : current)
        if (std::abs(row.values[s] - cplx(row.degree, 0)) <= 1e-9) next.insert(s);
      current = std::move(next);
    }
    out.kernel_series.emplace_back(current.begin(), current.end());
  }

  out.scale_index = Eigen::MatrixXi::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      const int st = group.mult(s, group.inverse(t));
      int p = 0;
      for (size_t m = 0; m < out.kernel_series.size(); ++m)
        if (std::binary_search(out.kernel_series[m].begin(),
                               out.kernel_series[m].end(), st))
          p = static_cast<int>(m);
      out.scale_index(s, t) = p;
    }
  return out;
}

const UnitaryRep& GroupBundle::rep(const std::string& name) const {
  auto it = reps.find(name);
  if (it == reps.end())
    throw std::invalid_argument("GroupBundle: unknown representation '" + name + "'");
  return it->second;
}

}  // namespace berezin
