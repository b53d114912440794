#include "homvar/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homvar {

namespace {

Complex inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  // <x,y> linear in x
  return y.dot(x);
}

void require_dim(const UnitaryRep& rep, const Eigen::VectorXcd& v,
                 const char* what) {
  if (v.size() != rep.dim)
    throw std::invalid_argument(std::string(what) + ": vector length " +
                                std::to_string(v.size()) + " != rep dim " +
                                std::to_string(rep.dim));
}

}  // namespace

std::string check_group(const FiniteGroup& g) {
  const int n = g.order;
  if (n <= 0) return "order must be positive";
  if (g.cayley.rows() != n || g.cayley.cols() != n) return "cayley size mismatch";
  if ((int)g.inverse.size() != n) return "inverse size mismatch";
  // Latin square
  for (int r = 0; r < n; ++r) {
    std::vector<bool> seen_row(n, false), seen_col(n, false);
    for (int c = 0; c < n; ++c) {
      int rc = g.cayley(r, c), cr = g.cayley(c, r);
      if (rc < 0 || rc >= n || cr < 0 || cr >= n) return "entry out of range";
      if (seen_row[rc]) return "row not a permutation";
      if (seen_col[cr]) return "column not a permutation";
      seen_row[rc] = seen_col[cr] = true;
    }
  }
  for (int a = 0; a < n; ++a) {
    if (g.cayley(g.identity, a) != a || g.cayley(a, g.identity) != a)
      return "identity fails";
    if (g.cayley(a, g.inverse[a]) != g.identity) return "inverse fails";
  }
  if (n <= 32) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.cayley(g.cayley(a, b), c) != g.cayley(a, g.cayley(b, c)))
            return "associativity fails";
  }
  return {};
}

std::string check_rep(const UnitaryRep& rep, double tol) {
  if (!rep.group) return "no group";
  const FiniteGroup& g = *rep.group;
  if ((int)rep.matrices.size() != g.order) return "matrix count mismatch";
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
  for (int a = 0; a < g.order; ++a) {
    const auto& m = rep.matrices[a];
    if (m.rows() != rep.dim || m.cols() != rep.dim) return "matrix dim mismatch";
    if ((m.adjoint() * m - id).cwiseAbs().maxCoeff() > tol)
      return "not unitary: element " + std::to_string(a);
  }
  if ((rep.matrices[g.identity] - id).cwiseAbs().maxCoeff() > tol)
    return "identity not mapped to identity";
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      const auto prod = rep.matrices[a] * rep.matrices[b];
      if ((prod - rep.matrices[g.op(a, b)]).cwiseAbs().maxCoeff() > tol)
        return "homomorphism fails at (" + std::to_string(a) + "," +
               std::to_string(b) + ")";
    }
  return {};
}

Complex schur_bilinear_average(const UnitaryRep& rep,
                               const Eigen::VectorXcd& x,
                               const Eigen::VectorXcd& y,
                               const Eigen::VectorXcd& v,
                               const Eigen::VectorXcd& w) {
  require_dim(rep, x, "schur_bilinear_average x");
  require_dim(rep, y, "schur_bilinear_average y");
  require_dim(rep, v, "schur_bilinear_average v");
  require_dim(rep, w, "schur_bilinear_average w");
  Complex acc = 0;
  for (const auto& m : rep.matrices)
    acc += inner(m * x, y) * std::conj(inner(m * v, w));
  return acc / double(rep.group->order);
}

Complex cross_rep_average(const UnitaryRep& rep1, const UnitaryRep& rep2,
                          const Eigen::VectorXcd& v1, const Eigen::VectorXcd& w1,
                          const Eigen::VectorXcd& v2, const Eigen::VectorXcd& w2) {
  if (rep1.group != rep2.group)
    throw std::invalid_argument("cross_rep_average: different groups");
  require_dim(rep1, v1, "cross_rep_average v1");
  require_dim(rep1, w1, "cross_rep_average w1");
  require_dim(rep2, v2, "cross_rep_average v2");
  require_dim(rep2, w2, "cross_rep_average w2");
  Complex acc = 0;
  for (int a = 0; a < rep1.group->order; ++a)
    acc += inner(rep1.matrices[a] * v1, w1) *
           std::conj(inner(rep2.matrices[a] * v2, w2));
  return acc / double(rep1.group->order);
}

double character_norm(const UnitaryRep& rep) {
  double acc = 0;
  for (const auto& m : rep.matrices) acc += std::norm(m.trace());
  return acc;
}

Eigen::MatrixXcd corollary_coefficient_orthogonality(const UnitaryRep& rep,
                                                     const Eigen::VectorXcd& v) {
  require_dim(rep, v, "corollary_coefficient_orthogonality v");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (const auto& m : rep.matrices) {
    // <g v, b_i> is just the i-th component of g v
    Eigen::VectorXcd gv = m * v;
    out += gv * gv.adjoint();  // (i,j) = gv_i conj(gv_j)
  }
  return out;
}

bool check_irreducible(const UnitaryRep& rep, double rel_tol) {
  double n = character_norm(rep);
  double target = double(rep.group->order);
  return std::abs(n - target) <= rel_tol * target;
}

namespace {

FiniteGroup cyclic_group(int m) {
  FiniteGroup g;
  g.order = m;
  g.name = "Z" + std::to_string(m);
  g.cayley.resize(m, m);
  g.inverse.resize(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) g.cayley(a, b) = (a + b) % m;
    g.inverse[a] = (m - a) % m;
  }
  g.identity = 0;
  return g;
}

// D4 elements indexed r^a s^b -> a + 4b, a in 0..3, b in 0..1, with
// (r^a s^b)(r^c s^d) = r^{a + (-1)^b c mod 4} s^{b xor d}.
FiniteGroup dihedral4() {
  FiniteGroup g;
  g.order = 8;
  g.name = "D4";
  g.cayley.resize(8, 8);
  g.inverse.assign(8, 0);
  auto idx = [](int a, int b) { return ((a % 4) + 4) % 4 + 4 * (b & 1); };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 2; ++d)
          g.cayley(idx(a, b), idx(c, d)) = idx(a + (b ? -c : c), b ^ d);
  for (int e = 0; e < 8; ++e)
    for (int f = 0; f < 8; ++f)
      if (g.cayley(e, f) == 0) g.inverse[e] = f;
  g.identity = 0;
  return g;
}

}  // namespace

std::vector<CatalogEntry> builtin_group_catalog() {
  using std::numbers::pi;
  std::vector<CatalogEntry> catalog;

  for (int m : {2, 3, 4, 8}) {
    CatalogEntry entry;
    entry.group = std::make_shared<FiniteGroup>(cyclic_group(m));
    for (int j = 0; j < m; ++j) {
      UnitaryRep rep;
      rep.dim = 1;
      rep.label = j;
      rep.name = "chi" + std::to_string(j);
      rep.matrices.resize(m);
      for (int k = 0; k < m; ++k) {
        double ang = 2.0 * pi * j * k / m;
        rep.matrices[k] = Eigen::MatrixXcd::Constant(
            1, 1, Complex(std::cos(ang), std::sin(ang)));
      }
      entry.irreps.push_back(std::move(rep));
    }
    catalog.push_back(std::move(entry));
  }

  {
    CatalogEntry entry;
    entry.group = std::make_shared<FiniteGroup>(dihedral4());
    // four 1-dim characters chi(r^a s^b) = alpha^a beta^b
    int label = 0;
    for (int alpha : {1, -1})
      for (int beta : {1, -1}) {
        UnitaryRep rep;
        rep.dim = 1;
        rep.label = label++;
        rep.name = std::string("chi(") + (alpha > 0 ? "+" : "-") + "," +
                   (beta > 0 ? "+" : "-") + ")";
        rep.matrices.resize(8);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 2; ++b) {
            double val = std::pow(double(alpha), a) * (b ? beta : 1);
            rep.matrices[a + 4 * b] =
                Eigen::MatrixXcd::Constant(1, 1, Complex(val, 0));
          }
        entry.irreps.push_back(std::move(rep));
      }
    // the 2-dim irrep: r -> 90-degree rotation, s -> reflection
    UnitaryRep two;
    two.dim = 2;
    two.label = label;
    two.name = "standard2d";
    Eigen::Matrix2cd R, S;
    R << 0, -1, 1, 0;
    S << 1, 0, 0, -1;
    two.matrices.resize(8);
    for (int a = 0; a < 4; ++a) {
      Eigen::Matrix2cd Ra = Eigen::Matrix2cd::Identity();
      for (int i = 0; i < a; ++i) Ra = R * Ra;
      two.matrices[a] = Ra;
      two.matrices[a + 4] = Ra * S;
    }
    entry.irreps.push_back(std::move(two));
    catalog.push_back(std::move(entry));
  }

  for (auto& entry : catalog) {
    for (auto& rep : entry.irreps) rep.group = entry.group;
  }
  return catalog;
}

}  // namespace homvar
