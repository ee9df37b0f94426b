#include "k3pencil/cycmatrix.hpp"

#include <sstream>
#include <stdexcept>

namespace k3pencil {

CycMatrix::CycMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("CycMatrix: dimensions must be positive");
  a_.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
}

CycMatrix CycMatrix::identity(int n) {
  CycMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = CycNum::one();
  return m;
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("CycMatrix::mul: shape mismatch");
  CycMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const CycNum& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const CycNum& bkj = o.at(k, j);
        if (bkj.is_zero()) continue;
        r.at(i, j) += aik * bkj;
      }
    }
  return r;
}

CycVec CycMatrix::operator*(const CycVec& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::invalid_argument("CycMatrix::matvec: shape mismatch");
  CycVec r(static_cast<size_t>(rows_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const CycNum& aij = at(i, j);
      if (aij.is_zero() || v[static_cast<size_t>(j)].is_zero()) continue;
      r[static_cast<size_t>(i)] += aij * v[static_cast<size_t>(j)];
    }
  return r;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("CycMatrix::add: shape mismatch");
  CycMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("CycMatrix::sub: shape mismatch");
  CycMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

CycMatrix CycMatrix::mul_scalar(const CycNum& s) const {
  CycMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

CycMatrix CycMatrix::transpose() const {
  CycMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

CycNum CycMatrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("CycMatrix::trace: not square");
  CycNum t;
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

CycNum CycMatrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("CycMatrix::det: not square");
  const int n = rows_;
  // division-free formulas for the small sizes that dominate usage
  if (n == 1) return at(0, 0);
  if (n == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  if (n == 3) {
    CycNum d = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1));
    d -= at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0));
    d += at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    return d;
  }
  if (n == 4) {
    // Laplace expansion along the first two rows
    auto minor2 = [this](int r0, int r1, int c0, int c1) {
      return at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
    };
    CycNum d = minor2(0, 1, 0, 1) * minor2(2, 3, 2, 3);
    d -= minor2(0, 1, 0, 2) * minor2(2, 3, 1, 3);
    d += minor2(0, 1, 0, 3) * minor2(2, 3, 1, 2);
    d += minor2(0, 1, 1, 2) * minor2(2, 3, 0, 3);
    d -= minor2(0, 1, 1, 3) * minor2(2, 3, 0, 2);
    d += minor2(0, 1, 2, 3) * minor2(2, 3, 0, 1);
    return d;
  }
  CycMatrix w = *this;
  CycNum d = CycNum::one();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!w.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return CycNum::zero();
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(w.at(pivot, j), w.at(col, j));
      d = -d;
    }
    const CycNum p = w.at(col, col);
    d *= p;
    const CycNum pinv = p.inv();
    for (int r = col + 1; r < n; ++r) {
      if (w.at(r, col).is_zero()) continue;
      CycNum f = w.at(r, col) * pinv;
      for (int j = col; j < n; ++j) w.at(r, j) -= f * w.at(col, j);
    }
  }
  return d;
}

bool CycMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (i == j) {
        if (at(i, j) != CycNum::one()) return false;
      } else if (!at(i, j).is_zero()) {
        return false;
      }
    }
  return true;
}

std::uint64_t CycMatrix::fingerprint() const {
  std::uint64_t acc = modp::mul(static_cast<std::uint64_t>(rows_) * 131 + static_cast<std::uint64_t>(cols_), 0x9e3779b97f4a7c15ULL % modp::kP);
  for (const CycNum& x : a_) acc = modp::add(modp::mul(acc, 1099511628211ULL), x.fingerprint());
  return acc;
}

std::string CycMatrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << "[ ";
    for (int j = 0; j < cols_; ++j) {
      os << at(i, j).to_string();
      if (j + 1 < cols_) os << ", ";
    }
    os << " ]\n";
  }
  return os.str();
}

std::vector<CycVec> solve_kernel(const CycMatrix& m) {
  // fraction-free Gauss-Jordan: rows are updated by cross-multiplication
  // (p*row - f*pivot_row), so no field inversion happens anywhere and every
  // pivot test is an exact zero test
  const int nr = m.rows(), nc = m.cols();
  CycMatrix w = m;
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot_col(static_cast<size_t>(nc), false);
  int row = 0;
  for (int col = 0; col < nc && row < nr; ++col) {
    int pr = -1;
    for (int r = row; r < nr; ++r)
      if (!w.at(r, col).is_zero()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row)
      for (int j = 0; j < nc; ++j) std::swap(w.at(pr, j), w.at(row, j));
    const CycNum p = w.at(row, col);
    for (int r = 0; r < nr; ++r) {
      if (r == row || w.at(r, col).is_zero()) continue;
      const CycNum f = w.at(r, col);
      for (int j = 0; j < nc; ++j) w.at(r, j) = p * w.at(r, j) - f * w.at(row, j);
    }
    pivot_col_of_row.push_back(col);
    is_pivot_col[static_cast<size_t>(col)] = true;
    ++row;
  }
  // kernel vectors, scaled by pivot products to stay division-free:
  //   v[free] = prod of all pivots, v[pivot_col r] = -w(r,free) * prod of the
  //   other pivots
  const size_t np = pivot_col_of_row.size();
  std::vector<CycNum> prefix(np + 1, CycNum::one()), suffix(np + 1, CycNum::one());
  for (size_t r = 0; r < np; ++r)
    prefix[r + 1] = prefix[r] * w.at(static_cast<int>(r), pivot_col_of_row[r]);
  for (size_t r = np; r-- > 0;)
    suffix[r] = w.at(static_cast<int>(r), pivot_col_of_row[r]) * suffix[r + 1];
  std::vector<CycVec> basis;
  for (int free_col = 0; free_col < nc; ++free_col) {
    if (is_pivot_col[static_cast<size_t>(free_col)]) continue;
    CycVec v(static_cast<size_t>(nc));
    v[static_cast<size_t>(free_col)] = prefix[np];
    for (size_t r = 0; r < np; ++r)
      v[static_cast<size_t>(pivot_col_of_row[r])] =
          -(w.at(static_cast<int>(r), free_col) * (prefix[r] * suffix[r + 1]));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::pair<CycNum, CycNum> eigenvalues_finite_order(const CycMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2)
    throw std::invalid_argument("eigenvalues_finite_order: matrix must be 2x2");
  if (m.det() != CycNum::one())
    throw std::invalid_argument("eigenvalues_finite_order: determinant must be 1");
  const CycNum tr = m.trace();
  for (int k = 0; k <= CycNum::kRootOrder / 2; ++k) {
    CycNum z = CycNum::zeta_pow(k);
    CycNum zi = CycNum::zeta_pow(CycNum::kRootOrder - k);
    if (z + zi == tr) return {z, zi};
  }
  throw std::domain_error("eigenvalues_finite_order: trace matches no 120th root of unity");
}

}  // namespace k3pencil
