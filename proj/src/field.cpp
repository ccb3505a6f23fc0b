#include "etx/field.hpp"

#include <sstream>
#include <stdexcept>

namespace etx {

Mat::Mat(int rows, int cols, int p) : rows_(rows), cols_(cols), p_(p) {
    if (rows < 0 || cols < 0 || p < 2)
        throw std::invalid_argument("Mat: bad shape or modulus");
    d_.assign(static_cast<size_t>(rows) * cols, 0);
}

Mat Mat::identity(int n, int p) {
    Mat m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool Mat::is_zero() const {
    for (uint8_t x : d_)
        if (x) return false;
    return true;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("Mat::mul: shape mismatch");
    Mat r(rows_, o.cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            int a = at(i, k);
            if (!a) continue;
            for (int j = 0; j < o.cols_; ++j)
                r.at(i, j) = static_cast<uint8_t>((r.at(i, j) + a * o.at(k, j)) % p_);
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_)
        throw std::invalid_argument("Mat::add: shape mismatch");
    Mat r = *this;
    for (size_t i = 0; i < d_.size(); ++i) r.d_[i] = static_cast<uint8_t>((d_[i] + o.d_[i]) % p_);
    return r;
}

Mat Mat::operator-(const Mat& o) const { return *this + o.scaled(p_ - 1); }

Mat Mat::scaled(int k) const {
    k = ((k % p_) + p_) % p_;
    Mat r = *this;
    for (auto& x : r.d_) x = static_cast<uint8_t>(x * k % p_);
    return r;
}

Mat Mat::direct_sum(const Mat& o) const {
    if (p_ != o.p_) throw std::invalid_argument("Mat::direct_sum: modulus mismatch");
    Mat r(rows_ + o.rows_, cols_ + o.cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) r.at(rows_ + i, cols_ + j) = o.at(i, j);
    return r;
}

Mat Mat::hconcat(const Mat& o) const {
    if (rows_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("Mat::hconcat: shape mismatch");
    Mat r(rows_, cols_ + o.cols_, p_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

Mat Mat::vconcat(const Mat& o) const {
    if (cols_ != o.cols_ || p_ != o.p_) throw std::invalid_argument("Mat::vconcat: shape mismatch");
    Mat r(rows_ + o.rows_, cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << int(at(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

int inv_mod(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (!a) throw std::invalid_argument("inv_mod: zero");
    int r = 1, e = p - 2;  // Fermat; p prime and small
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

std::vector<int> rref(Mat& m) {
    const int p = m.p();
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int sel = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m.at(i, col)) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
        int inv = inv_mod(m.at(row, col), p);
        for (int j = 0; j < m.cols(); ++j) m.at(row, j) = static_cast<uint8_t>(m.at(row, j) * inv % p);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || !m.at(i, col)) continue;
            int f = m.at(i, col);
            for (int j = 0; j < m.cols(); ++j)
                m.at(i, j) = static_cast<uint8_t>((m.at(i, j) + (p - f) * m.at(row, j)) % p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(Mat m) { return static_cast<int>(rref(m).size()); }

Mat null_space(const Mat& m) {
    Mat r = m;
    auto pivots = rref(r);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat ker(m.cols(), static_cast<int>(free_cols.size()), m.p());
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        ker.at(fc, static_cast<int>(k)) = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            ker.at(pivots[i], static_cast<int>(k)) =
                static_cast<uint8_t>((m.p() - r.at(static_cast<int>(i), fc)) % m.p());
    }
    return ker;
}

Mat column_space(const Mat& m) {
    Mat r = m;
    auto pivots = rref(r);
    Mat out(m.rows(), static_cast<int>(pivots.size()), m.p());
    for (size_t k = 0; k < pivots.size(); ++k)
        for (int i = 0; i < m.rows(); ++i) out.at(i, static_cast<int>(k)) = m.at(i, pivots[k]);
    return out;
}

std::optional<Mat> solve(const Mat& m, const Mat& b) {
    if (m.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
    Mat aug = m.hconcat(b);
    auto pivots = rref(aug);
    for (int c : pivots)
        if (c >= m.cols()) return std::nullopt;  // inconsistent
    Mat x(m.cols(), b.cols(), m.p());
    for (size_t i = 0; i < pivots.size(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            x.at(pivots[i], j) = aug.at(static_cast<int>(i), m.cols() + j);
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    auto x = solve(m, Mat::identity(m.rows(), m.p()));
    if (!x) return std::nullopt;
    if (!(m * *x == Mat::identity(m.rows(), m.p()))) return std::nullopt;
    return x;
}

std::optional<Mat> coords_in_basis(const Mat& basis, const Mat& v) { return solve(basis, v); }

}  // namespace etx
