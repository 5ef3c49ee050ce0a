#include "auglag/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw StructuralError(what);
}

double sq(double x) { return x * x; }

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Block vector_block(std::vector<double> v) { return Block{std::move(v), 0}; }

Block matrix_block(int order) {
  return Block{std::vector<double>(static_cast<std::size_t>(order * order), 0.0), order};
}

bool block_matches(const Block& b, const ConeSpec& k) {
  if (k.kind() == ConeKind::NegSemidef) {
    return b.order == k.dim() && b.v.size() == static_cast<std::size_t>(k.dim() * k.dim());
  }
  return b.order == 0 && b.v.size() == static_cast<std::size_t>(k.dim());
}

Block project_block(const Block& b, const ConeSpec& k) {
  switch (k.kind()) {
    case ConeKind::Zero:
      return vector_block(std::vector<double>(b.v.size(), 0.0));
    case ConeKind::NonposOrthant: {
      Block r = b;
      for (double& x : r.v) x = std::min(x, 0.0);
      return r;
    }
    case ConeKind::SecondOrder: {
      const double y0 = b.v[0];
      double nb = 0.0;
      for (std::size_t i = 1; i < b.v.size(); ++i) nb += sq(b.v[i]);
      nb = std::sqrt(nb);
      if (nb <= y0) return b;
      if (nb <= -y0) return vector_block(std::vector<double>(b.v.size(), 0.0));
      const double a = 0.5 * (y0 + nb);
      Block r = b;
      r.v[0] = a;
      for (std::size_t i = 1; i < b.v.size(); ++i) r.v[i] = a * b.v[i] / nb;
      return r;
    }
    case ConeKind::NegSemidef: {
      SymEig e = sym_eig(b);
      std::vector<double> d(e.values.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::min(e.values[i], 0.0);
      return sym_from_eig(e, d);
    }
    case ConeKind::Product:
      break;
  }
  throw StructuralError("product cone has no single block");
}

bool block_in_polar(const Block& b, const ConeSpec& k, double tol) {
  switch (k.kind()) {
    case ConeKind::Zero:
      return true;
    case ConeKind::NonposOrthant:
      return std::all_of(b.v.begin(), b.v.end(), [tol](double x) { return x >= -tol; });
    case ConeKind::SecondOrder: {
      double nb = 0.0;
      for (std::size_t i = 1; i < b.v.size(); ++i) nb += sq(b.v[i]);
      return -b.v[0] >= std::sqrt(nb) - tol;
    }
    case ConeKind::NegSemidef:
      return sym_eig(b).values.front() >= -tol;
    case ConeKind::Product:
      break;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------- ConeSpec

ConeSpec ConeSpec::zero(int m) {
  require(m >= 1, "zero cone dimension must be >= 1");
  return ConeSpec(ConeKind::Zero, m, {});
}

ConeSpec ConeSpec::nonpos(int m) {
  require(m >= 1, "orthant dimension must be >= 1");
  return ConeSpec(ConeKind::NonposOrthant, m, {});
}

ConeSpec ConeSpec::soc(int dim) {
  require(dim >= 1, "second-order cone dimension must be >= 1");
  return ConeSpec(ConeKind::SecondOrder, dim, {});
}

ConeSpec ConeSpec::nsd(int order) {
  require(order >= 1, "semidefinite cone order must be >= 1");
  return ConeSpec(ConeKind::NegSemidef, order, {});
}

ConeSpec ConeSpec::product(std::vector<ConeSpec> parts) {
  require(!parts.empty(), "product cone needs at least one part");
  return ConeSpec(ConeKind::Product, 0, std::move(parts));
}

int ConeSpec::ambient_dim() const {
  switch (kind_) {
    case ConeKind::NegSemidef:
      return dim_ * (dim_ + 1) / 2;
    case ConeKind::Product: {
      int s = 0;
      for (const auto& p : parts_) s += p.ambient_dim();
      return s;
    }
    default:
      return dim_;
  }
}

std::vector<ConeSpec> ConeSpec::primitives() const {
  if (kind_ != ConeKind::Product) return {*this};
  std::vector<ConeSpec> out;
  for (const auto& p : parts_) {
    auto sub = p.primitives();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string ConeSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ConeKind::Zero:
      os << "{0}^" << dim_;
      break;
    case ConeKind::NonposOrthant:
      os << "R^" << dim_ << "_-";
      break;
    case ConeKind::SecondOrder:
      os << "SOC" << dim_;
      break;
    case ConeKind::NegSemidef:
      os << "S^" << dim_ << "_-";
      break;
    case ConeKind::Product:
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " x ";
        os << parts_[i].describe();
      }
      break;
  }
  return os.str();
}

bool operator==(const ConeSpec& a, const ConeSpec& b) {
  return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.parts_ == b.parts_;
}

// ---------------------------------------------------------------- BlockVec

BlockVec::BlockVec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.is_matrix()) {
      require(b.v.size() == static_cast<std::size_t>(b.order * b.order), "matrix block size");
    }
  }
  symmetrize();
}

void BlockVec::symmetrize() {
  for (auto& b : blocks_) {
    if (!b.is_matrix()) continue;
    for (int i = 0; i < b.order; ++i) {
      for (int j = i + 1; j < b.order; ++j) {
        const double m = 0.5 * (b.at(i, j) + b.at(j, i));
        b.at(i, j) = m;
        b.at(j, i) = m;
      }
    }
  }
}

BlockVec BlockVec::zeros(const ConeSpec& K) {
  std::vector<Block> blocks;
  for (const auto& k : K.primitives()) {
    if (k.kind() == ConeKind::NegSemidef) {
      blocks.push_back(matrix_block(k.dim()));
    } else {
      blocks.push_back(vector_block(std::vector<double>(static_cast<std::size_t>(k.dim()), 0.0)));
    }
  }
  return BlockVec(std::move(blocks));
}

BlockVec BlockVec::from_flat(const ConeSpec& K, const std::vector<double>& flat) {
  require(flat.size() == static_cast<std::size_t>(K.ambient_dim()), "flat vector length");
  BlockVec out = zeros(K);
  std::size_t k = 0;
  for (auto& b : out.blocks_) {
    if (b.is_matrix()) {
      for (int i = 0; i < b.order; ++i) {
        for (int j = i; j < b.order; ++j) {
          b.at(i, j) = flat[k];
          b.at(j, i) = flat[k];
          ++k;
        }
      }
    } else {
      for (double& x : b.v) x = flat[k++];
    }
  }
  return out;
}

BlockVec BlockVec::vec(std::vector<double> v) { return BlockVec({vector_block(std::move(v))}); }

std::vector<double> BlockVec::to_flat() const {
  std::vector<double> out;
  for (const auto& b : blocks_) {
    if (b.is_matrix()) {
      for (int i = 0; i < b.order; ++i) {
        for (int j = i; j < b.order; ++j) out.push_back(b.at(i, j));
      }
    } else {
      out.insert(out.end(), b.v.begin(), b.v.end());
    }
  }
  return out;
}

std::size_t BlockVec::raw_size() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.v.size();
  return n;
}

double BlockVec::raw(std::size_t k) const {
  for (const auto& b : blocks_) {
    if (k < b.v.size()) return b.v[k];
    k -= b.v.size();
  }
  throw StructuralError("raw index out of range");
}

bool BlockVec::matches(const ConeSpec& K) const {
  const auto prims = K.primitives();
  if (prims.size() != blocks_.size()) return false;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    if (!block_matches(blocks_[i], prims[i])) return false;
  }
  return true;
}

BlockVec& BlockVec::operator+=(const BlockVec& o) {
  require(o.blocks_.size() == blocks_.size(), "block count mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    require(o.blocks_[i].v.size() == blocks_[i].v.size(), "block size mismatch");
    for (std::size_t k = 0; k < blocks_[i].v.size(); ++k) blocks_[i].v[k] += o.blocks_[i].v[k];
  }
  return *this;
}

BlockVec& BlockVec::operator-=(const BlockVec& o) {
  require(o.blocks_.size() == blocks_.size(), "block count mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    require(o.blocks_[i].v.size() == blocks_[i].v.size(), "block size mismatch");
    for (std::size_t k = 0; k < blocks_[i].v.size(); ++k) blocks_[i].v[k] -= o.blocks_[i].v[k];
  }
  return *this;
}

BlockVec& BlockVec::operator*=(double s) {
  for (auto& b : blocks_) {
    for (double& x : b.v) x *= s;
  }
  return *this;
}

double inner(const BlockVec& a, const BlockVec& b) {
  require(a.size() == b.size(), "block count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& u = a.block(i).v;
    const auto& w = b.block(i).v;
    require(u.size() == w.size(), "block size mismatch");
    for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * w[k];
  }
  return s;
}

double block_norm(const Block& b) { return vec_norm(b.v); }

double norm(const BlockVec& y) {
  double s = 0.0;
  for (const auto& b : y.blocks()) s += block_norm(b);
  return s;
}

double euclid_norm(const BlockVec& y) {
  double s = 0.0;
  for (const auto& b : y.blocks()) {
    for (double x : b.v) s += x * x;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------- spectra

SymEig sym_eig(const Block& m) {
  require(m.is_matrix(), "eigendecomposition of a vector block");
  const int n = m.order;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = m.at(i, j);
  }
  SymEig out;
  out.order = n;
  if (n == 1) {
    out.values = {a(0, 0)};
    out.vectors = {1.0};
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  out.vectors.assign(es.eigenvectors().data(), es.eigenvectors().data() + n * n);
  return out;
}

Block sym_from_eig(const SymEig& e, const std::vector<double>& d) {
  const int n = e.order;
  Block r = matrix_block(n);
  for (int k = 0; k < n; ++k) {
    if (d[static_cast<std::size_t>(k)] == 0.0) continue;
    const double* q = e.vectors.data() + static_cast<std::ptrdiff_t>(k) * n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) r.at(i, j) += d[static_cast<std::size_t>(k)] * q[i] * q[j];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (r.at(i, j) + r.at(j, i));
      r.at(i, j) = s;
      r.at(j, i) = s;
    }
  }
  return r;
}

// ---------------------------------------------------------------- cone ops

BlockVec project(const BlockVec& y, const ConeSpec& K) {
  require(y.matches(K), "point does not match cone structure");
  const auto prims = K.primitives();
  std::vector<Block> out;
  out.reserve(prims.size());
  for (std::size_t i = 0; i < prims.size(); ++i) out.push_back(project_block(y.block(i), prims[i]));
  return BlockVec(std::move(out));
}

BlockVec project_polar(const BlockVec& y, const ConeSpec& K) { return y - project(y, K); }

double dist_to_cone(const BlockVec& y, const ConeSpec& K) { return norm(y - project(y, K)); }

double dist_to_polar(const BlockVec& y, const ConeSpec& K) { return norm(y - project_polar(y, K)); }

bool in_polar(const BlockVec& lambda, const ConeSpec& K, double tol) {
  require(lambda.matches(K), "multiplier does not match cone structure");
  const auto prims = K.primitives();
  for (std::size_t i = 0; i < prims.size(); ++i) {
    if (!block_in_polar(lambda.block(i), prims[i], tol)) return false;
  }
  return true;
}

bool order_leq(const BlockVec& y1, const BlockVec& y2, const ConeSpec& K) {
  return dist_to_cone(y1 - y2, K) <= 1e-12;
}

// ---------------------------------------------------------------- sampling

BlockVec random_gaussian(const ConeSpec& K, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  BlockVec y = BlockVec::zeros(K);
  std::vector<Block> blocks = y.blocks();
  for (auto& b : blocks) {
    for (double& x : b.v) x = scale * g(rng);
  }
  return BlockVec(std::move(blocks));
}

namespace {

BlockVec rescale_to(BlockVec y, double radius) {
  const double n = norm(y);
  if (n > 0.0) y *= radius / n;
  return y;
}

}  // namespace

namespace {

// Projection of a Gaussian sample, redrawn while it is rounding noise.
template <class Proj>
BlockVec projected_sample(const ConeSpec& K, std::mt19937_64& rng, double radius, Proj proj) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const BlockVec g = random_gaussian(K, rng);
    BlockVec p = proj(g);
    if (norm(p) > 1e-8 * norm(g)) return rescale_to(std::move(p), radius);
  }
  return BlockVec::zeros(K);
}

}  // namespace

BlockVec random_in_cone(const ConeSpec& K, std::mt19937_64& rng, double radius) {
  return projected_sample(K, rng, radius, [&K](const BlockVec& g) { return project(g, K); });
}

BlockVec random_in_polar(const ConeSpec& K, std::mt19937_64& rng, double radius) {
  return projected_sample(K, rng, radius, [&K](const BlockVec& g) { return project_polar(g, K); });
}

void random_complementary(const ConeSpec& K, std::mt19937_64& rng, double radius, BlockVec& y,
                          BlockVec& lambda) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto prims = K.primitives();
  std::vector<Block> yb;
  std::vector<Block> lb;
  for (const auto& k : prims) {
    const auto d = static_cast<std::size_t>(k.dim());
    switch (k.kind()) {
      case ConeKind::Zero: {
        Block l = vector_block(std::vector<double>(d));
        for (double& x : l.v) x = radius * g(rng);
        yb.push_back(vector_block(std::vector<double>(d, 0.0)));
        lb.push_back(std::move(l));
        break;
      }
      case ConeKind::NonposOrthant: {
        Block a = vector_block(std::vector<double>(d, 0.0));
        Block l = vector_block(std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i) {
          const double r = u(rng);
          if (r < 0.4) {
            a.v[i] = -radius * u(rng);
          } else if (r < 0.8) {
            l.v[i] = radius * u(rng);
          }
        }
        yb.push_back(std::move(a));
        lb.push_back(std::move(l));
        break;
      }
      case ConeKind::SecondOrder: {
        Block a = vector_block(std::vector<double>(d, 0.0));
        Block l = vector_block(std::vector<double>(d, 0.0));
        const double r = u(rng);
        if (d == 1) {
          if (r < 0.5) {
            a.v[0] = radius * u(rng);
          } else {
            l.v[0] = -radius * u(rng);
          }
        } else if (r < 0.25) {
          a = random_in_cone(ConeSpec::soc(k.dim()), rng, radius * u(rng)).block(0);
        } else if (r < 0.5) {
          l = random_in_polar(ConeSpec::soc(k.dim()), rng, radius * u(rng)).block(0);
        } else {
          std::vector<double> w(d - 1);
          for (double& x : w) x = g(rng);
          const double nw = vec_norm(w);
          const double s = radius * u(rng);
          const double t = radius * u(rng);
          a.v[0] = s;
          l.v[0] = -t;
          for (std::size_t i = 1; i < d; ++i) {
            a.v[i] = s * w[i - 1] / nw;
            l.v[i] = t * w[i - 1] / nw;
          }
        }
        yb.push_back(std::move(a));
        lb.push_back(std::move(l));
        break;
      }
      case ConeKind::NegSemidef: {
        const int n = k.dim();
        Block m = matrix_block(n);
        for (auto& x : m.v) x = g(rng);
        SymEig e = sym_eig(BlockVec({m}).block(0));
        std::vector<double> dy(static_cast<std::size_t>(n), 0.0);
        std::vector<double> dl(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
          const double r = u(rng);
          if (r < 0.4) {
            dy[static_cast<std::size_t>(i)] = -radius * u(rng);
          } else if (r < 0.8) {
            dl[static_cast<std::size_t>(i)] = radius * u(rng);
          }
        }
        yb.push_back(sym_from_eig(e, dy));
        lb.push_back(sym_from_eig(e, dl));
        break;
      }
      case ConeKind::Product:
        break;
    }
  }
  y = BlockVec(std::move(yb));
  lambda = BlockVec(std::move(lb));
}

BlockVec interior_direction(const ConeSpec& K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Block> out;
  for (const auto& k : K.primitives()) {
    const auto d = static_cast<std::size_t>(k.dim());
    switch (k.kind()) {
      case ConeKind::Zero:
        out.push_back(vector_block(std::vector<double>(d, 0.0)));
        break;
      case ConeKind::NonposOrthant: {
        Block b = vector_block(std::vector<double>(d));
        for (double& x : b.v) x = -u(rng);
        out.push_back(std::move(b));
        break;
      }
      case ConeKind::SecondOrder: {
        Block b = vector_block(std::vector<double>(d, 0.0));
        std::vector<double> w(d > 1 ? d - 1 : 0);
        for (double& x : w) x = g(rng);
        const double nw = vec_norm(w);
        const double frac = 0.5 * u(rng);
        b.v[0] = 1.0;
        for (std::size_t i = 1; i < d; ++i) b.v[i] = nw > 0 ? frac * w[i - 1] / nw : 0.0;
        out.push_back(std::move(b));
        break;
      }
      case ConeKind::NegSemidef: {
        const int n = k.dim();
        Block m = matrix_block(n);
        for (auto& x : m.v) x = g(rng);
        SymEig e = sym_eig(BlockVec({m}).block(0));
        std::vector<double> dv(static_cast<std::size_t>(n));
        for (double& x : dv) x = -u(rng);
        out.push_back(sym_from_eig(e, dv));
        break;
      }
      case ConeKind::Product:
        break;
    }
  }
  return rescale_to(BlockVec(std::move(out)), 1.0);
}

}  // namespace auglag
