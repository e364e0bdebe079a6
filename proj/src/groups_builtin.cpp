// Built-in catalog: cyclic groups Z_m (m <= 24), the symmetric groups S3 and
// S4 (with the standard permutation-restriction irreps), the dihedral group
// D4 and the quaternion group Q8 (with their 2-dimensional irreps).
// Character tables are entered element-wise and re-verified by the
// CharacterTable constructor rather than trusted.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "berezin/groups.hpp"

namespace berezin {

namespace {

using Perm = std::vector<int>;

std::vector<Perm> all_permutations(int m) {
  Perm base(m);
  std::iota(base.begin(), base.end(), 0);
  std::vector<Perm> perms;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return perms;  // lexicographic, identity first
}

Perm compose(const Perm& a, const Perm& b) {  // (a b)(x) = a(b(x))
  Perm c(a.size());
  for (size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

int perm_index(const std::vector<Perm>& perms, const Perm& p) {
  return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), p) -
                          perms.begin());
}

std::string perm_label(const Perm& p) {
  std::string s;
  for (int v : p) s += std::to_string(v);
  return s;
}

int sign_of(const Perm& p) {
  int inversions = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

int fixed_points(const Perm& p) {
  int f = 0;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] == static_cast<int>(i)) ++f;
  return f;
}

std::vector<int> cycle_type(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<int> type;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.begin(), type.end());
  return type;
}

// Orthonormal basis of the sum-zero subspace of C^m (Helmert columns).
Eigen::MatrixXd sum_zero_basis(int m) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m - 1);
  for (int k = 1; k < m; ++k) {
    const double norm = std::sqrt(double(k) * (k + 1));
    for (int i = 0; i < k; ++i) b(i, k - 1) = 1.0 / norm;
    b(k, k - 1) = -double(k) / norm;
  }
  return b;
}

GroupBundle make_symmetric(int m) {
  const auto perms = all_permutations(m);
  const int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    labels.push_back(perm_label(perms[i]));
    for (int j = 0; j < n; ++j)
      mult[i][j] = perm_index(perms, compose(perms[i], perms[j]));
  }
  FiniteGroup group(std::move(mult), std::move(labels));

  std::vector<CharacterTable::Row> rows;
  rows.push_back({"trivial", 1, std::vector<cplx>(n, 1.0)});
  {
    std::vector<cplx> chi(n);
    for (int s = 0; s < n; ++s) chi[s] = double(sign_of(perms[s]));
    rows.push_back({"sign", 1, std::move(chi)});
  }
  {
    std::vector<cplx> chi(n);
    for (int s = 0; s < n; ++s) chi[s] = double(fixed_points(perms[s]) - 1);
    rows.push_back({"standard", m - 1, std::move(chi)});
  }
  if (m == 4) {
    std::vector<cplx> chi2(n), chi3s(n);
    for (int s = 0; s < n; ++s) {
      const auto type = cycle_type(perms[s]);
      double v = 0;
      if (type == std::vector<int>{1, 1, 1, 1}) v = 2;
      else if (type == std::vector<int>{1, 1, 2}) v = 0;
      else if (type == std::vector<int>{2, 2}) v = 2;
      else if (type == std::vector<int>{1, 3}) v = -1;
      else v = 0;  // 4-cycles
      chi2[s] = v;
      chi3s[s] = double(sign_of(perms[s]) * (fixed_points(perms[s]) - 1));
    }
    rows.push_back({"dim2", 2, std::move(chi2)});
    rows.push_back({"standard_sign", 3, std::move(chi3s)});
  }
  CharacterTable table(group, std::move(rows));

  // Standard irrep: permutation matrices restricted to the sum-zero subspace.
  const Eigen::MatrixXd basis = sum_zero_basis(m);
  std::vector<Eigen::MatrixXcd> mats;
  for (int s = 0; s < n; ++s) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (int x = 0; x < m; ++x) p(perms[s][x], x) = 1.0;
    mats.push_back((basis.transpose() * p * basis).cast<cplx>());
  }
  GroupBundle bundle{std::move(group), std::move(table), {}};
  bundle.reps.emplace("standard", UnitaryRep(bundle.group, std::move(mats), "standard"));
  return bundle;
}

GroupBundle make_cyclic(int m) {
  std::vector<std::vector<int>> mult(m, std::vector<int>(m));
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) {
    labels.push_back(std::to_string(i));
    for (int j = 0; j < m; ++j) mult[i][j] = (i + j) % m;
  }
  FiniteGroup group(std::move(mult), std::move(labels));

  const double tau = 2.0 * std::numbers::pi / m;
  std::vector<CharacterTable::Row> rows;
  for (int k = 0; k < m; ++k) {
    std::vector<cplx> chi(m);
    for (int s = 0; s < m; ++s) chi[s] = std::polar(1.0, tau * k * s);
    rows.push_back({k == 0 ? "trivial" : "k" + std::to_string(k), 1, std::move(chi)});
  }
  CharacterTable table(group, std::move(rows));

  GroupBundle bundle{std::move(group), std::move(table), {}};
  for (int k = 1; k < m; ++k) {
    std::vector<Eigen::MatrixXcd> mats;
    for (int s = 0; s < m; ++s) {
      Eigen::MatrixXcd u(1, 1);
      u(0, 0) = std::polar(1.0, tau * k * s);
      mats.push_back(u);
    }
    const std::string name = "k" + std::to_string(k);
    bundle.reps.emplace(name, UnitaryRep(bundle.group, std::move(mats), name));
  }
  return bundle;
}

GroupBundle make_dihedral4() {
  // Elements r^a s^b indexed a + 4b; s r s^{-1} = r^{-1}.
  auto idx = [](int a, int b) { return ((a % 4) + 4) % 4 + 4 * (((b % 2) + 2) % 2); };
  std::vector<std::vector<int>> mult(8, std::vector<int>(8));
  std::vector<std::string> labels;
  for (int i = 0; i < 8; ++i) {
    const int a = i % 4, b = i / 4;
    labels.push_back("r" + std::to_string(a) + (b ? "s" : ""));
  }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const int a1 = i % 4, b1 = i / 4, a2 = j % 4, b2 = j / 4;
      // (r^{a1} s^{b1})(r^{a2} s^{b2}) = r^{a1 + (-1)^{b1} a2} s^{b1+b2}
      mult[i][j] = idx(a1 + (b1 ? -a2 : a2), b1 + b2);
    }
  FiniteGroup group(std::move(mult), std::move(labels));

  std::vector<CharacterTable::Row> rows;
  auto one_dim = [&](const std::string& name, int rsign, int ssign) {
    std::vector<cplx> chi(8);
    for (int i = 0; i < 8; ++i) {
      const int a = i % 4, b = i / 4;
      chi[i] = double((rsign < 0 && a % 2 ? -1 : 1) * (b && ssign < 0 ? -1 : 1));
    }
    rows.push_back({name, 1, std::move(chi)});
  };
  one_dim("trivial", 1, 1);
  one_dim("sign_s", 1, -1);
  one_dim("sign_r", -1, 1);
  one_dim("sign_rs", -1, -1);
  {
    std::vector<cplx> chi(8);
    for (int i = 0; i < 8; ++i) {
      const int a = i % 4, b = i / 4;
      chi[i] = b ? 0.0 : 2.0 * std::cos(std::numbers::pi * a / 2.0);
    }
    rows.push_back({"dim2", 2, std::move(chi)});
  }
  CharacterTable table(group, std::move(rows));

  Eigen::Matrix2cd r, s;
  r << 0, -1, 1, 0;
  s << 1, 0, 0, -1;
  std::vector<Eigen::MatrixXcd> mats;
  for (int i = 0; i < 8; ++i) {
    const int a = i % 4, b = i / 4;
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < a; ++k) m = m * r;
    if (b) m = m * s;
    mats.push_back(m);
  }
  GroupBundle bundle{std::move(group), std::move(table), {}};
  bundle.reps.emplace("dim2", UnitaryRep(bundle.group, std::move(mats), "dim2"));
  return bundle;
}

GroupBundle make_quaternion8() {
  // Elements: 1, -1, i, -i, j, -j, k, -k as (axis, sign) with axis 0..3.
  // Axis products with resulting sign: i*i = j*j = k*k = -1, i*j = k, etc.
  const int axis_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign_mul[4][4] = {{+1, +1, +1, +1},
                              {+1, -1, +1, -1},
                              {+1, -1, -1, +1},
                              {+1, +1, -1, -1}};
  // sign_mul[a][b]: sign of (axis a)(axis b); rows/cols 0..3 = 1, i, j, k.
  auto idx = [](int axis, int sign) { return 2 * axis + (sign > 0 ? 0 : 1); };
  std::vector<std::vector<int>> mult(8, std::vector<int>(8));
  const char* names[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  for (int p = 0; p < 8; ++p)
    for (int q = 0; q < 8; ++q) {
      const int ax1 = p / 2, sg1 = p % 2 ? -1 : 1;
      const int ax2 = q / 2, sg2 = q % 2 ? -1 : 1;
      mult[p][q] = idx(axis_mul[ax1][ax2], sg1 * sg2 * sign_mul[ax1][ax2]);
    }
  FiniteGroup group(std::move(mult),
                    std::vector<std::string>(names, names + 8));

  std::vector<CharacterTable::Row> rows;
  auto one_dim = [&](const std::string& name, int si, int sj) {
    std::vector<cplx> chi(8);
    const int vals[4] = {1, si, sj, si * sj};  // on 1, i, j, k
    for (int p = 0; p < 8; ++p) chi[p] = double(vals[p / 2]);
    rows.push_back({name, 1, std::move(chi)});
  };
  one_dim("trivial", 1, 1);
  one_dim("sign_i", 1, -1);
  one_dim("sign_j", -1, 1);
  one_dim("sign_k", -1, -1);
  {
    std::vector<cplx> chi(8, 0.0);
    chi[0] = 2.0;
    chi[1] = -2.0;
    rows.push_back({"dim2", 2, std::move(chi)});
  }
  CharacterTable table(group, std::move(rows));

  // Quaternion units as 2x2 unitaries: i -> i sigma_z, j -> i sigma_y,
  // k -> i sigma_x.
  const cplx I(0, 1);
  Eigen::Matrix2cd qi, qj, qk, one;
  one = Eigen::Matrix2cd::Identity();
  qi << I, 0, 0, -I;
  qj << 0, 1, -1, 0;
  qk << 0, I, I, 0;
  const Eigen::Matrix2cd units[4] = {one, qi, qj, qk};
  std::vector<Eigen::MatrixXcd> mats;
  for (int p = 0; p < 8; ++p)
    mats.push_back((p % 2 ? -1.0 : 1.0) * units[p / 2]);
  GroupBundle bundle{std::move(group), std::move(table), {}};
  bundle.reps.emplace("dim2", UnitaryRep(bundle.group, std::move(mats), "dim2"));
  return bundle;
}

}  // namespace

GroupBundle builtin_group(const std::string& name) {
  if (name == "s3") return make_symmetric(3);
  if (name == "s4") return make_symmetric(4);
  if (name == "d4") return make_dihedral4();
  if (name == "q8") return make_quaternion8();
  if (name.size() >= 2 && name[0] == 'z') {
    const int m = std::atoi(name.c_str() + 1);
    if (m >= 2 && m <= 24) return make_cyclic(m);
  }
  throw std::invalid_argument("builtin_group: unknown group '" + name + "'");
}

std::vector<std::string> builtin_group_names() {
  std::vector<std::string> names{"s3", "s4", "d4", "q8"};
  for (int m = 2; m <= 24; ++m) names.push_back("z" + std::to_string(m));
  return names;
}

}  // namespace berezin
