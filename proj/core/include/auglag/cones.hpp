#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace auglag {

enum class ConeKind { Zero, NonposOrthant, SecondOrder, NegSemidef, Product };

// Recursive description of a closed convex cone K.
//   Zero(m)          {0} in R^m
//   NonposOrthant(m) R^m_-
//   SecondOrder(d)   {(y0, ybar) : y0 >= |ybar|} in R^d, d = l + 1
//   NegSemidef(l)    l x l negative semidefinite matrices
class ConeSpec {
 public:
  static ConeSpec zero(int m);
  static ConeSpec nonpos(int m);
  static ConeSpec soc(int dim);
  static ConeSpec nsd(int order);
  static ConeSpec product(std::vector<ConeSpec> parts);

  ConeKind kind() const { return kind_; }
  // m for Zero/NonposOrthant, l+1 for SecondOrder, l for NegSemidef.
  int dim() const { return dim_; }
  const std::vector<ConeSpec>& parts() const { return parts_; }

  // Number of free coordinates (NegSemidef(l) counts l(l+1)/2).
  int ambient_dim() const;
  // Primitive (non-product) cones in block order.
  std::vector<ConeSpec> primitives() const;
  std::size_t num_blocks() const { return primitives().size(); }

  std::string describe() const;

  friend bool operator==(const ConeSpec& a, const ConeSpec& b);

 private:
  ConeSpec(ConeKind k, int d, std::vector<ConeSpec> p) : kind_(k), dim_(d), parts_(std::move(p)) {}
  ConeKind kind_ = ConeKind::Zero;
  int dim_ = 1;
  std::vector<ConeSpec> parts_;
};

// One block of a point of Y: a dense vector, or a symmetric matrix of the
// given order stored row-major in v (order*order entries).
struct Block {
  std::vector<double> v;
  int order = 0;

  bool is_matrix() const { return order > 0; }
  double& at(int i, int j) { return v[static_cast<std::size_t>(i * order + j)]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(i * order + j)]; }
};

// Block-structured point of Y (or of the dual space). Matrix blocks are
// symmetrized on construction.
class BlockVec {
 public:
  BlockVec() = default;
  explicit BlockVec(std::vector<Block> blocks);

  static BlockVec zeros(const ConeSpec& K);
  // Free coordinates in block order; matrix blocks take their upper
  // triangle row by row.
  static BlockVec from_flat(const ConeSpec& K, const std::vector<double>& flat);
  // Plain vector (single block); convenience for orthant problems.
  static BlockVec vec(std::vector<double> v);

  std::vector<double> to_flat() const;

  std::size_t size() const { return blocks_.size(); }
  Block& block(std::size_t i) { return blocks_[i]; }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  const std::vector<Block>& blocks() const { return blocks_; }

  // Coordinates of the underlying space (matrix blocks contribute l*l).
  std::size_t raw_size() const;
  double raw(std::size_t k) const;

  bool matches(const ConeSpec& K) const;

  BlockVec& operator+=(const BlockVec& o);
  BlockVec& operator-=(const BlockVec& o);
  BlockVec& operator*=(double s);
  friend BlockVec operator+(BlockVec a, const BlockVec& b) { return a += b; }
  friend BlockVec operator-(BlockVec a, const BlockVec& b) { return a -= b; }
  friend BlockVec operator*(double s, BlockVec a) { return a *= s; }
  friend BlockVec operator*(BlockVec a, double s) { return a *= s; }

 private:
  void symmetrize();
  std::vector<Block> blocks_;
};

// Euclidean/Frobenius inner product over all blocks.
double inner(const BlockVec& a, const BlockVec& b);
// Block norms.
double block_norm(const Block& b);
// Sum of block norms (product-space convention).
double norm(const BlockVec& y);
// Square root of the summed squares over every coordinate.
double euclid_norm(const BlockVec& y);

// Symmetric eigendecomposition: values ascending, vectors column-major
// (vectors[k*order + i] is component i of eigenvector k).
struct SymEig {
  std::vector<double> values;
  std::vector<double> vectors;
  int order = 0;
};
SymEig sym_eig(const Block& m);
// Rebuilds E diag(d) E^T.
Block sym_from_eig(const SymEig& e, const std::vector<double>& d);

BlockVec project(const BlockVec& y, const ConeSpec& K);
// Projection onto the polar cone K* (Moreau: y - project(y, K)).
BlockVec project_polar(const BlockVec& y, const ConeSpec& K);
double dist_to_cone(const BlockVec& y, const ConeSpec& K);
// Distance to K* under the same block-sum convention.
double dist_to_polar(const BlockVec& y, const ConeSpec& K);
bool in_polar(const BlockVec& lambda, const ConeSpec& K, double tol);
bool order_leq(const BlockVec& y1, const BlockVec& y2, const ConeSpec& K);

// Samplers used by tests and the axiom checker.
BlockVec random_gaussian(const ConeSpec& K, std::mt19937_64& rng, double scale = 1.0);
BlockVec random_in_cone(const ConeSpec& K, std::mt19937_64& rng, double radius);
BlockVec random_in_polar(const ConeSpec& K, std::mt19937_64& rng, double radius);
// Pair (y, lambda) with y in K, lambda in K*, <lambda, y> = 0, built blockwise.
void random_complementary(const ConeSpec& K, std::mt19937_64& rng, double radius, BlockVec& y,
                          BlockVec& lambda);
// A point strictly inside K of unit block-sum norm (deep interior rays).
BlockVec interior_direction(const ConeSpec& K, std::mt19937_64& rng);

}  // namespace auglag
