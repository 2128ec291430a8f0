#pragma once

// Small dense exact linear algebra over a Field: reduced row echelon form,
// rank, residues against a row basis, and one-solution linear solving. All
// pivoting is positional (first nonzero), so results are deterministic.

#include <cstddef>
#include <optional>
#include <vector>

#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"

namespace pitkit {

using Vec = std::vector<FieldElement>;

struct RowBasis {
  std::vector<Vec> rows;           // RREF rows, zero rows dropped
  std::vector<std::size_t> pivots; // pivot column of each row, increasing
  std::size_t cols = 0;

  std::size_t rank() const { return rows.size(); }
};

// Reduced row echelon form of the given rows (each of equal length).
inline RowBasis row_reduce(std::vector<Vec> rows, std::size_t cols) {
  RowBasis out;
  out.cols = cols;
  for (Vec& candidate : rows) {
    if (candidate.size() != cols) raise(Errc::dimension_mismatch, "row length mismatch");
    // reduce against existing pivots (copy the multiplier: the pivot entry
    // itself is overwritten inside the loop)
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      const FieldElement c = candidate[out.pivots[r]];
      if (!c.is_zero()) {
        for (std::size_t j = 0; j < cols; ++j) {
          candidate[j] = candidate[j] - c * out.rows[r][j];
        }
      }
    }
    std::size_t lead = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (!candidate[j].is_zero()) {
        lead = j;
        break;
      }
    }
    if (lead == cols) continue;  // dependent row
    const FieldElement scale = candidate[lead].inv();
    for (std::size_t j = 0; j < cols; ++j) candidate[j] = candidate[j] * scale;
    // clear the new pivot column from earlier rows
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      const FieldElement c = out.rows[r][lead];
      if (!c.is_zero()) {
        for (std::size_t j = 0; j < cols; ++j) {
          out.rows[r][j] = out.rows[r][j] - c * candidate[j];
        }
      }
    }
    // keep rows ordered by pivot column
    std::size_t at = 0;
    while (at < out.pivots.size() && out.pivots[at] < lead) ++at;
    out.rows.insert(out.rows.begin() + at, std::move(candidate));
    out.pivots.insert(out.pivots.begin() + at, lead);
  }
  return out;
}

// Canonical residue of v modulo the row span; zero iff v lies in the span.
inline Vec reduce_against(const RowBasis& basis, Vec v) {
  if (v.size() != basis.cols) raise(Errc::dimension_mismatch, "vector length mismatch");
  for (std::size_t r = 0; r < basis.rows.size(); ++r) {
    const FieldElement c = v[basis.pivots[r]];
    if (!c.is_zero()) {
      for (std::size_t j = 0; j < basis.cols; ++j) {
        v[j] = v[j] - c * basis.rows[r][j];
      }
    }
  }
  return v;
}

inline bool is_zero_vec(const Vec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

inline bool in_row_span(const RowBasis& basis, Vec v) {
  return is_zero_vec(reduce_against(basis, std::move(v)));
}

inline std::size_t matrix_rank(std::vector<Vec> rows, std::size_t cols) {
  return row_reduce(std::move(rows), cols).rank();
}

// One solution x of sum_j x_j * cols[j] = b, or nullopt if inconsistent.
// Free variables are set to zero, so the solution is deterministic.
inline std::optional<Vec> solve_columns(const std::vector<Vec>& cols, const Vec& b,
                                        const Field& field) {
  const std::size_t ncols = cols.size();
  const std::size_t nrows = b.size();
  for (const auto& c : cols) {
    if (c.size() != nrows) raise(Errc::dimension_mismatch, "column length mismatch");
  }
  // Gauss-Jordan on the augmented matrix [A | b].
  std::vector<Vec> a(nrows, Vec());
  for (std::size_t i = 0; i < nrows; ++i) {
    a[i].reserve(ncols + 1);
    for (std::size_t j = 0; j < ncols; ++j) a[i].push_back(cols[j][i]);
    a[i].push_back(b[i]);
  }
  std::vector<std::size_t> pivot_row_of_col(ncols, static_cast<std::size_t>(-1));
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
    std::size_t sel = nrows;
    for (std::size_t i = row; i < nrows; ++i) {
      if (!a[i][col].is_zero()) {
        sel = i;
        break;
      }
    }
    if (sel == nrows) continue;
    std::swap(a[sel], a[row]);
    const FieldElement scale = a[row][col].inv();
    for (std::size_t j = col; j <= ncols; ++j) a[row][j] = a[row][j] * scale;
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == row) continue;
      const FieldElement c = a[i][col];
      if (!c.is_zero()) {
        for (std::size_t j = col; j <= ncols; ++j) {
          a[i][j] = a[i][j] - c * a[row][j];
        }
      }
    }
    pivot_row_of_col[col] = row;
    ++row;
  }
  for (std::size_t i = row; i < nrows; ++i) {
    if (!a[i][ncols].is_zero()) return std::nullopt;  // inconsistent
  }
  Vec x(ncols, field.zero());
  for (std::size_t col = 0; col < ncols; ++col) {
    if (pivot_row_of_col[col] != static_cast<std::size_t>(-1)) {
      x[col] = a[pivot_row_of_col[col]][ncols];
    }
  }
  return x;
}

}  // namespace pitkit
