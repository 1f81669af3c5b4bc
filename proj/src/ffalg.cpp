#include "hallbridge/ffalg.hpp"

#include <sstream>

namespace hallbridge {

bool is_small_prime(unsigned q) {
  switch (q) {
    case 2: case 3: case 5: case 7: case 11: case 13: return true;
    default: return false;
  }
}

Field::Field(unsigned q_) : q(q_) {
  if (!is_small_prime(q)) {
    throw ParseError("field size must be a prime in [2,13], got " + std::to_string(q));
  }
}

unsigned Field::inv(unsigned a) const {
  a %= q;
  if (a == 0) throw DivisionByZero();
  // q is tiny; scan beats bookkeeping.
  for (unsigned x = 1; x < q; ++x)
    if ((a * x) % q == 1) return x;
  throw DivisionByZero();
}

Mat Mat::identity(Field f, int n) {
  Mat m(f, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

bool Mat::is_zero() const {
  for (uint8_t v : a_)
    if (v != 0) return false;
  return true;
}

Mat Mat::operator*(const Mat& o) const {
  Mat r(f_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      unsigned aik = at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.set(i, j, f_.add(r.at(i, j), f_.mul(aik, o.at(k, j))));
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.add(a_[i], o.a_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.sub(a_[i], o.a_[i]);
  return r;
}

Mat Mat::scaled(unsigned c) const {
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.mul(a_[i], c);
  return r;
}

Mat Mat::transposed() const {
  Mat r(f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

Mat Mat::submatrix(int r0, int nrows, int c0, int ncols) const {
  Mat r(f_, nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) r.set(i, j, at(r0 + i, c0 + j));
  return r;
}

Mat Mat::hstack(const Mat& a, const Mat& b) {
  Mat r(a.f_, a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) r.set(i, j, a.at(i, j));
    for (int j = 0; j < b.cols_; ++j) r.set(i, a.cols_ + j, b.at(i, j));
  }
  return r;
}

Mat Mat::vstack(const Mat& a, const Mat& b) {
  Mat r(a.f_, a.rows_ + b.rows_, a.cols_);
  for (int j = 0; j < a.cols_; ++j) {
    for (int i = 0; i < a.rows_; ++i) r.set(i, j, a.at(i, j));
    for (int i = 0; i < b.rows_; ++i) r.set(a.rows_ + i, j, b.at(i, j));
  }
  return r;
}

Mat Mat::diag_sum(const Mat& a, const Mat& b) {
  Mat r(a.f_, a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) r.set(i, j, a.at(i, j));
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) r.set(a.rows_ + i, a.cols_ + j, b.at(i, j));
  return r;
}

std::vector<int> Mat::rref() {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int sel = -1;
    for (int i = row; i < rows_; ++i)
      if (at(i, col) != 0) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < cols_; ++j) {
        unsigned tmp = at(sel, j);
        set(sel, j, at(row, j));
        set(row, j, tmp);
      }
    unsigned piv = f_.inv(at(row, col));
    for (int j = 0; j < cols_; ++j) set(row, j, f_.mul(at(row, j), piv));
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      unsigned v = at(i, col);
      if (v == 0) continue;
      for (int j = 0; j < cols_; ++j) set(i, j, f_.sub(at(i, j), f_.mul(v, at(row, j))));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int Mat::rank() const {
  Mat m = *this;
  return static_cast<int>(m.rref().size());
}

Mat Mat::nullspace() const {
  Mat m = *this;
  std::vector<int> pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat basis(f_, cols_, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    basis.set(fc, static_cast<int>(k), 1);
    for (size_t r = 0; r < pivots.size(); ++r)
      basis.set(pivots[r], static_cast<int>(k), f_.neg(m.at(static_cast<int>(r), fc)));
  }
  return basis;
}

Mat Mat::column_basis() const {
  Mat t = transposed();
  std::vector<int> pivots = t.rref();
  Mat basis(f_, rows_, static_cast<int>(pivots.size()));
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int c = 0; c < rows_; ++c) basis.set(c, static_cast<int>(r), t.at(static_cast<int>(r), c));
  return basis;
}

bool Mat::is_invertible() const { return rows_ == cols_ && rank() == rows_; }

Mat Mat::inverse() const {
  if (rows_ != cols_) throw Error("inverse of non-square matrix");
  Mat aug = hstack(*this, identity(f_, rows_));
  std::vector<int> pivots = aug.rref();
  if (static_cast<int>(pivots.size()) != rows_ || (rows_ > 0 && pivots.back() >= rows_))
    throw Error("matrix not invertible");
  return aug.submatrix(0, rows_, cols_, cols_);
}

void Mat::encode(std::string& out) const {
  out.push_back(static_cast<char>(rows_));
  out.push_back(static_cast<char>(cols_));
  for (uint8_t v : a_) out.push_back(static_cast<char>(v));
}

std::optional<Mat> solve(const Mat& A, const Mat& B) {
  Mat aug = Mat::hstack(A, B);
  std::vector<int> pivots = aug.rref();
  // Any pivot in the B block means inconsistency.
  for (int p : pivots)
    if (p >= A.cols()) return std::nullopt;
  Mat X(A.field(), A.cols(), B.cols());
  for (size_t r = 0; r < pivots.size(); ++r)
    for (int j = 0; j < B.cols(); ++j)
      X.set(pivots[r], j, aug.at(static_cast<int>(r), A.cols() + j));
  return X;
}

SolutionSpace solution_space(const Mat& A, const Mat& b) {
  SolutionSpace s;
  s.basis = A.nullspace();
  s.dim = s.basis.cols();
  auto x = solve(A, b);
  if (x) s.particular = *x;
  return s;
}

namespace {
void check_same_field(unsigned p, unsigned q) {
  if (p != q) throw Error("mixing coefficients over different fields");
}
}  // namespace

TCoeff TCoeff::operator+(const TCoeff& o) const {
  check_same_field(q_, o.q_);
  return TCoeff(q_, a_ + o.a_, b_ + o.b_);
}
TCoeff TCoeff::operator-(const TCoeff& o) const {
  check_same_field(q_, o.q_);
  return TCoeff(q_, a_ - o.a_, b_ - o.b_);
}

TCoeff TCoeff::operator*(const TCoeff& o) const {
  // (a + bt)(c + dt) = (ac + bdq) + (ad + bc)t
  check_same_field(q_, o.q_);
  return TCoeff(q_, a_ * o.a_ + b_ * o.b_ * static_cast<long>(q_), a_ * o.b_ + b_ * o.a_);
}

TCoeff TCoeff::inverse() const {
  if (is_zero()) throw DivisionByZero();
  mpq_class norm = a_ * a_ - b_ * b_ * static_cast<long>(q_);
  // norm == 0 would need sqrt(q) rational; impossible for prime q.
  return TCoeff(q_, a_ / norm, -b_ / norm);
}

TCoeff TCoeff::operator/(const TCoeff& o) const { return *this * o.inverse(); }

std::string TCoeff::str() const {
  std::ostringstream os;
  os << a_.get_str();
  if (b_ != 0) os << (sgn(b_) < 0 ? " - " : " + ") << mpq_class(abs(b_)).get_str() << "*t";
  return os.str();
}

TCoeff tpow(unsigned q, long k) {
  bool odd = (k % 2) != 0;
  long m = odd ? (k - 1) / 2 : k / 2;  // k = 2m or 2m+1, m may be negative
  mpq_class qm(1);
  if (m >= 0)
    for (long i = 0; i < m; ++i) qm *= static_cast<long>(q);
  else
    for (long i = 0; i < -m; ++i) qm /= static_cast<long>(q);
  return odd ? TCoeff(q, 0, qm) : TCoeff(q, qm, 0);
}

}  // namespace hallbridge
