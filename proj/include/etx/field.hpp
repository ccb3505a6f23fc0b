#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace etx {

// Dense matrix over the prime field F_p, p small (2..251).
// Entries are stored reduced, row-major.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, int p);

    static Mat identity(int n, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int p() const { return p_; }

    uint8_t& at(int r, int c) { return d_[static_cast<size_t>(r) * cols_ + c]; }
    uint8_t at(int r, int c) const { return d_[static_cast<size_t>(r) * cols_ + c]; }

    bool is_zero() const;
    bool operator==(const Mat& o) const = default;

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(int k) const;

    // Block diagonal [this 0; 0 o].
    Mat direct_sum(const Mat& o) const;
    // Horizontal / vertical concatenation.
    Mat hconcat(const Mat& o) const;
    Mat vconcat(const Mat& o) const;

    std::string to_string() const;

private:
    int rows_ = 0, cols_ = 0, p_ = 2;
    std::vector<uint8_t> d_;
};

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(Mat& m);

int rank(Mat m);

// Columns form a basis of {x : m x = 0}.
Mat null_space(const Mat& m);

// Column space basis (columns of the result).
Mat column_space(const Mat& m);

// Solve m x = b for all columns of b at once; nullopt if inconsistent.
std::optional<Mat> solve(const Mat& m, const Mat& b);

std::optional<Mat> inverse(const Mat& m);

// Coordinates of the columns of v in the column basis `basis`
// (basis columns must be independent); nullopt if v is not in the span.
std::optional<Mat> coords_in_basis(const Mat& basis, const Mat& v);

int inv_mod(int a, int p);

}  // namespace etx
