#ifndef HALLBRIDGE_FFALG_HPP
#define HALLBRIDGE_FFALG_HPP

// Exact linear algebra over a prime field F_q and exact arithmetic in the
// coefficient ring Q[t]/(t^2 - q).  Everything downstream counts with these.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hallbridge/errors.hpp"

namespace hallbridge {

// Prime field F_q, 2 <= q <= 13.  Elements are plain residues 0..q-1.
struct Field {
  unsigned q = 2;

  Field() = default;
  explicit Field(unsigned q_);

  unsigned add(unsigned a, unsigned b) const { return (a + b) % q; }
  unsigned sub(unsigned a, unsigned b) const { return (a + q - b % q) % q; }
  unsigned mul(unsigned a, unsigned b) const { return (a * b) % q; }
  unsigned neg(unsigned a) const { return (q - a % q) % q; }
  unsigned inv(unsigned a) const;
  unsigned reduce(long long a) const {
    long long r = a % static_cast<long long>(q);
    return static_cast<unsigned>(r < 0 ? r + q : r);
  }
  bool operator==(const Field& o) const { return q == o.q; }
};

bool is_small_prime(unsigned q);

// Dense matrix over F_q, row major.  Small by design; q rides along so the
// call sites stay uncluttered.
class Mat {
 public:
  Mat() = default;
  Mat(Field f, int rows, int cols)
      : f_(f), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

  static Mat identity(Field f, int n);

  Field field() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  unsigned at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  void set(int r, int c, unsigned v) { a_[static_cast<size_t>(r) * cols_ + c] = v % f_.q; }

  bool is_zero() const;
  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && f_.q == o.f_.q && a_ == o.a_;
  }

  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat scaled(unsigned c) const;
  Mat negated() const { return scaled(f_.neg(1)); }
  Mat transposed() const;

  Mat submatrix(int r0, int nrows, int c0, int ncols) const;
  static Mat hstack(const Mat& a, const Mat& b);
  static Mat vstack(const Mat& a, const Mat& b);
  // Block diagonal of a and b.
  static Mat diag_sum(const Mat& a, const Mat& b);

  // In-place row reduction to reduced row echelon form; returns pivot columns.
  std::vector<int> rref();
  int rank() const;
  // Columns span the kernel; empty matrix (n x 0) when the kernel is zero.
  Mat nullspace() const;
  // Echelonized basis of the column space (deterministic for a given input).
  Mat column_basis() const;
  bool is_invertible() const;
  Mat inverse() const;

  // Raw bytes: rows, cols, then entries.  Used for canonical encodings.
  void encode(std::string& out) const;

 private:
  Field f_;
  int rows_ = 0, cols_ = 0;
  std::vector<uint8_t> a_;
};

// Solve A X = B columnwise; nullopt when inconsistent.
std::optional<Mat> solve(const Mat& A, const Mat& B);

// Affine solution set of A x = b.
struct SolutionSpace {
  int dim = 0;                    // kernel dimension; |solutions| = q^dim when nonempty
  std::optional<Mat> particular;  // one solution, or nullopt when empty
  Mat basis;                      // kernel basis, one column per basis vector
};
SolutionSpace solution_space(const Mat& A, const Mat& b);

// Element a + b*t of Q[t]/(t^2 - q), t = sqrt(q).  Exact; q prime keeps this
// a field (a^2 - q b^2 = 0 forces a = b = 0).
class TCoeff {
 public:
  TCoeff() = default;
  TCoeff(unsigned q, mpq_class a, mpq_class b) : q_(q), a_(std::move(a)), b_(std::move(b)) {
    canon();
  }
  static TCoeff zero(unsigned q) { return TCoeff(q, 0, 0); }
  static TCoeff one(unsigned q) { return TCoeff(q, 1, 0); }
  static TCoeff t(unsigned q) { return TCoeff(q, 0, 1); }
  static TCoeff integer(unsigned q, long v) { return TCoeff(q, v, 0); }

  unsigned q() const { return q_; }
  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  TCoeff operator+(const TCoeff& o) const;
  TCoeff operator-(const TCoeff& o) const;
  TCoeff operator*(const TCoeff& o) const;
  TCoeff operator/(const TCoeff& o) const;
  TCoeff operator-() const { return TCoeff(q_, -a_, -b_); }
  TCoeff inverse() const;
  bool operator==(const TCoeff& o) const { return q_ == o.q_ && a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const TCoeff& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void canon() {
    a_.canonicalize();
    b_.canonicalize();
  }
  unsigned q_ = 2;
  mpq_class a_ = 0, b_ = 0;
};

// t^k, any integer k.  t^{2m} = q^m, t^{2m+1} = q^m t.
TCoeff tpow(unsigned q, long k);

}  // namespace hallbridge

#endif
