// Copyright 2026 The eaqmac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eaqmac/error.hpp"
#include "eaqmac/gf.hpp"

namespace eaqmac {

/// Dense row-major matrix over a finite field. A value type: copies are deep
/// and every operation returns a fresh matrix.
class MatF {
  public:
    MatF() = default;

    MatF(Field field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {}

    /// Entries are canonical integer encodings and must lie in [0, d).
    static MatF from_rows(Field field, const std::vector<std::vector<std::int64_t>> &rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        MatF out(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged row " + std::to_string(i));
            for (std::size_t j = 0; j < c; ++j) {
                if (rows[i][j] < 0) throw Error(ErrorKind::InvalidElement, "negative matrix entry");
                out(i, j) = field->elem(static_cast<std::uint64_t>(rows[i][j]));
            }
        }
        return out;
    }

    static MatF identity(Field field, std::size_t n) {
        MatF out(std::move(field), n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = FieldElem{1};
        return out;
    }

    static MatF diagonal(Field field, std::span<const FieldElem> diag) {
        MatF out(std::move(field), diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
        return out;
    }

    static MatF column(Field field, std::span<const FieldElem> values) {
        MatF out(std::move(field), values.size(), 1);
        for (std::size_t i = 0; i < values.size(); ++i) out(i, 0) = values[i];
        return out;
    }

    const Field &field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    FieldElem &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    FieldElem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const FieldElem> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<FieldElem> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    const std::vector<FieldElem> &entries() const noexcept { return data_; }

    bool is_zero() const {
        for (auto v : data_)
            if (v.value != 0) return false;
        return true;
    }

    std::vector<std::vector<std::int64_t>> to_rows() const {
        std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).value;
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).value;
            os << ']';
        }
        os << ']';
        return os.str();
    }

    friend bool operator==(const MatF &a, const MatF &b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        if (a.field_ && b.field_ && !a.field_->same_as(*b.field_)) return false;
        return a.data_ == b.data_;
    }

  private:
    Field field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FieldElem> data_;
};

namespace detail {

inline void require_conforming(const MatF &a, const MatF &b, bool same_shape, const char *what) {
    require_same_field(*a.field(), *b.field());
    const bool ok = same_shape ? (a.rows() == b.rows() && a.cols() == b.cols()) : (a.cols() == b.rows());
    if (!ok) {
        std::ostringstream os;
        os << what << ": " << a.rows() << 'x' << a.cols() << " vs " << b.rows() << 'x' << b.cols();
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
}

inline void swap_rows(MatF &m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(MatF &m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[dst] -= factor * row[src]
inline void axpy_row(MatF &m, std::size_t dst, std::size_t src, FieldElem factor) {
    const auto &f = *m.field();
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) = f.sub(m(dst, j), f.mul(factor, m(src, j)));
}

// col[dst] -= factor * col[src]
inline void axpy_col(MatF &m, std::size_t dst, std::size_t src, FieldElem factor) {
    const auto &f = *m.field();
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) = f.sub(m(i, dst), f.mul(factor, m(i, src)));
}

}  // namespace detail

inline MatF mat_add(const MatF &a, const MatF &b) {
    detail::require_conforming(a, b, true, "mat_add");
    MatF out(a.field(), a.rows(), a.cols());
    const auto &f = *a.field();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.add(a(i, j), b(i, j));
    return out;
}

inline MatF mat_neg(const MatF &a) {
    MatF out(a.field(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.field()->neg(a(i, j));
    return out;
}

inline MatF mat_sub(const MatF &a, const MatF &b) { return mat_add(a, mat_neg(b)); }

inline MatF mat_scale(const MatF &a, FieldElem s) {
    MatF out(a.field(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.field()->mul(s, a(i, j));
    return out;
}

inline MatF mat_mul(const MatF &a, const MatF &b) {
    detail::require_conforming(a, b, false, "mat_mul");
    const auto &f = *a.field();
    MatF out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const FieldElem aik = a(i, k);
            if (aik.value == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
        }
    return out;
}

inline MatF mat_transpose(const MatF &a) {
    MatF out(a.field(), a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

/// y = A x for a column vector given as a span.
inline std::vector<FieldElem> mat_apply(const MatF &a, std::span<const FieldElem> x) {
    if (x.size() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "mat_apply: vector length does not match columns");
    const auto &f = *a.field();
    std::vector<FieldElem> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] = f.add(y[i], f.mul(a(i, j), x[j]));
    return y;
}

inline MatF hstack(const MatF &a, const MatF &b) {
    require_same_field(*a.field(), *b.field());
    if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "hstack: row counts differ");
    MatF out(a.field(), a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

inline MatF vstack(const MatF &a, const MatF &b) {
    require_same_field(*a.field(), *b.field());
    if (a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "vstack: column counts differ");
    MatF out(a.field(), a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

inline MatF submatrix(const MatF &a, std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) {
    if (row0 + nrows > a.rows() || col0 + ncols > a.cols())
        throw Error(ErrorKind::DimensionMismatch, "submatrix window out of range");
    MatF out(a.field(), nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) out(i, j) = a(row0 + i, col0 + j);
    return out;
}

inline MatF blkdiag(const std::vector<MatF> &blocks) {
    if (blocks.empty()) throw Error(ErrorKind::DimensionMismatch, "blkdiag of no blocks");
    std::size_t rows = 0, cols = 0;
    for (const auto &b : blocks) {
        require_same_field(*blocks.front().field(), *b.field());
        rows += b.rows();
        cols += b.cols();
    }
    MatF out(blocks.front().field(), rows, cols);
    std::size_t r0 = 0, c0 = 0;
    for (const auto &b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return out;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref_in_place(MatF &m) {
    const auto &f = *m.field();
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
        std::size_t pr = lead;
        while (pr < m.rows() && m(pr, col).value == 0) ++pr;
        if (pr == m.rows()) continue;
        detail::swap_rows(m, lead, pr);
        const FieldElem scale = f.inv(m(lead, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m(lead, j) = f.mul(scale, m(lead, j));
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != lead && m(i, col).value != 0) detail::axpy_row(m, i, lead, m(i, col));
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

inline std::size_t mat_rank(const MatF &a) {
    if (a.empty()) return 0;
    MatF work = a;
    return rref_in_place(work).size();
}

inline bool is_invertible(const MatF &a) { return a.rows() == a.cols() && mat_rank(a) == a.rows(); }

/// Gauss-Jordan on [A | I]. Throws SingularMatrix when rank(A) < n.
inline MatF mat_inverse(const MatF &a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "mat_inverse: matrix is not square");
    const std::size_t n = a.rows();
    MatF aug = hstack(a, MatF::identity(a.field(), n));
    const auto pivots = rref_in_place(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
        throw Error(ErrorKind::SingularMatrix, "matrix of size " + std::to_string(n) + " is singular");
    return submatrix(aug, 0, n, n, n);
}

/// Rows form a basis of {v : A v = 0}.
inline MatF null_space(const MatF &a) {
    const auto &f = *a.field();
    MatF work = a;
    const auto pivots = rref_in_place(work);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    MatF basis(a.field(), a.cols() - pivots.size(), a.cols());
    std::size_t out_row = 0;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        basis(out_row, free) = f.one();
        for (std::size_t k = 0; k < pivots.size(); ++k) basis(out_row, pivots[k]) = f.neg(work(k, free));
        ++out_row;
    }
    return basis;
}

/// Invertible U1, U2 with U1 * A * U2 = Lambda, Lambda rectangular-diagonal
/// with its rank(A) nonzero entries at (i, i), i < rank.
struct RankNormalForm {
    MatF u1;
    MatF lambda;
    MatF u2;
    std::size_t rank = 0;
};

/// Pivots are taken at the first nonzero entry of the trailing submatrix,
/// scanning rows top to bottom and each row left to right. Pivots are not
/// normalized to one.
inline RankNormalForm rank_normal_form(const MatF &a) {
    const auto &f = *a.field();
    RankNormalForm out{MatF::identity(a.field(), a.rows()), a, MatF::identity(a.field(), a.cols()), 0};
    MatF &m = out.lambda;
    const std::size_t limit = std::min(a.rows(), a.cols());
    for (std::size_t t = 0; t < limit; ++t) {
        std::size_t pr = m.rows(), pc = m.cols();
        for (std::size_t i = t; i < m.rows() && pr == m.rows(); ++i)
            for (std::size_t j = t; j < m.cols(); ++j)
                if (m(i, j).value != 0) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == m.rows()) break;
        detail::swap_rows(m, t, pr);
        detail::swap_rows(out.u1, t, pr);
        detail::swap_cols(m, t, pc);
        detail::swap_cols(out.u2, t, pc);
        const FieldElem pivot_inv = f.inv(m(t, t));
        for (std::size_t i = t + 1; i < m.rows(); ++i) {
            if (m(i, t).value == 0) continue;
            const FieldElem factor = f.mul(m(i, t), pivot_inv);
            detail::axpy_row(m, i, t, factor);
            detail::axpy_row(out.u1, i, t, factor);
        }
        for (std::size_t j = t + 1; j < m.cols(); ++j) {
            if (m(t, j).value == 0) continue;
            const FieldElem factor = f.mul(m(t, j), pivot_inv);
            detail::axpy_col(m, j, t, factor);
            detail::axpy_col(out.u2, j, t, factor);
        }
        ++out.rank;
    }
    return out;
}

}  // namespace eaqmac
