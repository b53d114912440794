#pragma once
#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

// Finite-group representation checks. On a finite group the invariant
// integral is an exact sum, so the averaging identities hold to roundoff and
// make machine-precision test oracles.
//
// Inner products follow the convention <x,y> linear in the FIRST argument;
// with Eigen's a.dot(b) = a^H b that is <x,y> = y.dot(x).
namespace homvar {

using Complex = std::complex<double>;

struct FiniteGroup {
  int order = 0;
  std::string name;
  // cayley(a,b) = index of a*b
  Eigen::MatrixXi cayley;
  std::vector<int> inverse;
  int identity = 0;

  int op(int a, int b) const { return cayley(a, b); }
};

struct UnitaryRep {
  std::shared_ptr<const FiniteGroup> group;
  int dim = 0;
  int label = 0;  // unique within a catalog entry
  std::string name;
  std::vector<Eigen::MatrixXcd> matrices;  // one per element
};

// Structural validation (Latin square, identity, inverses, associativity for
// |G| <= 32, unitarity, homomorphism). Returns a diagnostic or empty string.
std::string check_group(const FiniteGroup& g);
std::string check_rep(const UnitaryRep& rep, double tol = 1e-12);

// (1/|G|) sum_g <g x, y> conj(<g v, w>); Lemma-1 left side.
Complex schur_bilinear_average(const UnitaryRep& rep,
                               const Eigen::VectorXcd& x,
                               const Eigen::VectorXcd& y,
                               const Eigen::VectorXcd& v,
                               const Eigen::VectorXcd& w);

// (1/|G|) sum_g <g v1, w1> conj(<g v2, w2>) across two reps of one group;
// vanishes when the reps are irreducible and non-isomorphic.
Complex cross_rep_average(const UnitaryRep& rep1, const UnitaryRep& rep2,
                          const Eigen::VectorXcd& v1, const Eigen::VectorXcd& w1,
                          const Eigen::VectorXcd& v2, const Eigen::VectorXcd& w2);

// sum_g |Tr rho(g)|^2; equals |G| for an irreducible rep, k|G| for k distinct
// multiplicity-free irreducible blocks.
double character_norm(const UnitaryRep& rep);

// Matrix with entries sum_g <g v, b_i> conj(<g v, b_j>) over the standard
// basis; equals (|G|/dim) |v|^2 I for an irreducible rep.
Eigen::MatrixXcd corollary_coefficient_orthogonality(const UnitaryRep& rep,
                                                     const Eigen::VectorXcd& v);

bool check_irreducible(const UnitaryRep& rep, double rel_tol = 1e-6);

struct CatalogEntry {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<UnitaryRep> irreps;
};

// Z/M for M in {2,3,4,8} with all M characters, and D4 with its five irreps
// (four 1-dim characters and one 2-dim).
std::vector<CatalogEntry> builtin_group_catalog();

}  // namespace homvar
