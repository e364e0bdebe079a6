// groups.hpp - POVMs from irreducible unitary representations of finite
// groups. The Berezin matrix of such a POVM is B_ts = u(st^{-1})/|G| with
// u = |chi_rho|^2, its eigenvalues come classwise from the character table,
// and the vanishing-off subgroup of chi_rho decides whether the gap is zero.

#pragma once

#include <map>

#include "berezin/povm.hpp"

namespace berezin {

/// Finite group as a verified multiplication table. Element 0 is the
/// identity. Conjugacy classes are computed, not supplied.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::vector<int>> mult, std::vector<std::string> labels = {});

  int order() const { return static_cast<int>(mult_.size()); }
  int mult(int s, int t) const { return mult_[s][t]; }
  int inverse(int s) const { return inverse_[s]; }
  const std::string& label(int s) const { return labels_[s]; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  int class_of(int s) const { return class_of_[s]; }

  /// Closure of a generating set under multiplication.
  std::vector<int> generated_subgroup(const std::vector<int>& generators) const;
  bool is_normal(const std::vector<int>& subgroup) const;

 private:
  std::vector<std::vector<int>> mult_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
};

/// Unitary representation given by one matrix per element; the homomorphism
/// property and unitarity are verified at construction (tolerance 1e-10).
class UnitaryRep {
 public:
  UnitaryRep(const FiniteGroup& group, std::vector<Eigen::MatrixXcd> matrices,
             std::string name = {});

  int degree() const { return static_cast<int>(matrices_[0].rows()); }
  const Eigen::MatrixXcd& matrix(int s) const { return matrices_[s]; }
  const std::string& name() const { return name_; }

  /// chi(s) = tr rho(s), element-wise.
  std::vector<cplx> character() const;

 private:
  std::vector<Eigen::MatrixXcd> matrices_;
  std::string name_;
};

/// Character table: one row per irrep (element-wise characters), verified
/// against Schur orthogonality and sum d^2 = |G| at construction.
class CharacterTable {
 public:
  struct Row {
    std::string label;
    int degree;
    std::vector<cplx> values;  // element-wise, length |G|
  };

  CharacterTable(const FiniteGroup& group, std::vector<Row> rows);

  int irrep_count() const { return static_cast<int>(rows_.size()); }
  const Row& row(int k) const { return rows_[k]; }
  const std::vector<Row>& rows() const { return rows_; }

  /// Classwise value of irrep k on the class of element s.
  cplx value(int k, int s) const { return rows_[k].values[s]; }

 private:
  std::vector<Row> rows_;
};

/// Tight-frame POVM of an irreducible rep: Omega = G, Hilbert space End(V)
/// of dimension d^2, states the projectors onto rho(s)/sqrt(d), uniform
/// weights 1/|G|. Throws if rho is reducible.
FinitePovm rep_povm(const FiniteGroup& group, const UnitaryRep& rho);

/// |G| x |G| matrix M[t][s] = |chi(st^{-1})|^2 / |G| from the character alone.
Eigen::MatrixXd berezin_from_character(const FiniteGroup& group,
                                       const std::vector<cplx>& chi_rho);

struct CharEigenvalue {
  std::string irrep;
  double value = 0.0;   // lambda_phi
  int multiplicity = 0; // d_phi^2
};

/// lambda_phi = (1/(d_phi |G|)) sum_s |chi_rho(s)|^2 chi_phi(s), classwise.
std::vector<CharEigenvalue> eigenvalues_via_characters(
    const FiniteGroup& group, const CharacterTable& table,
    const std::vector<cplx>& chi_rho);

/// Smallest subgroup containing the support of chi_rho; normal in G.
std::vector<int> vanishing_off_subgroup(const FiniteGroup& group,
                                        const std::vector<cplx>& chi_rho);

struct GapZeroReport {
  bool vanishing_off_proper = false;
  bool gap_zero = false;  // gap < 1e-8 via the character route
};

GapZeroReport gap_zero_predicate(const FiniteGroup& group,
                                 const CharacterTable& table,
                                 const std::vector<cplx>& chi_rho);

struct GroupDiffusion {
  Eigen::MatrixXd distances;                   // |G| x |G|
  std::vector<double> partition_scales;        // beta_1 > beta_2 > ... in (0,1)
  std::vector<std::vector<int>> kernel_series; // K_0 = G, K_1, ..., K_k
  Eigen::MatrixXi scale_index;                 // max p with s t^{-1} in K_p

  int scales() const { return static_cast<int>(partition_scales.size()); }
};

/// Multi-scale diffusion distance via eq. D_tau^2 = sum_j beta_j^{2 tau}
/// sum_{phi in R_j} 2 d_phi (d_phi - Re chi_phi(st^{-1})). Requires gap > 0.
GroupDiffusion group_diffusion(const FiniteGroup& group, const CharacterTable& table,
                               const std::vector<cplx>& chi_rho, double tau);

/// Built-in catalog: a group together with its character table, the unitary
/// irreps available as explicit matrices, and element-wise characters for
/// every irrep in the table.
struct GroupBundle {
  FiniteGroup group;
  CharacterTable table;
  std::map<std::string, UnitaryRep> reps;

  const UnitaryRep& rep(const std::string& name) const;
};

/// Names: "z2".."z24", "s3", "s4", "d4", "q8".
GroupBundle builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();

}  // namespace berezin
