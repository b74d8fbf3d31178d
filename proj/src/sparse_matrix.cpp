#include "cpg/sparse_matrix.hpp"

#include <algorithm>

#include "cpg/errors.hpp"

namespace cpg {

SparseMatrix::SparseMatrix(std::uint32_t order, std::vector<MatrixEntry> entries)
    : order_(order), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
        return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.row >= order_ || e.col >= order_)
            throw ValidationError("matrix entry (" + std::to_string(e.row) + "," +
                                  std::to_string(e.col) + ") outside order " +
                                  std::to_string(order_));
        if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col)
            throw ValidationError("duplicate entry at (" + std::to_string(e.row) + "," +
                                  std::to_string(e.col) + ")");
    }
}

SparseMatrix SparseMatrix::identity(std::uint32_t order) {
    std::vector<MatrixEntry> entries;
    entries.reserve(order);
    for (std::uint32_t i = 0; i < order; ++i) entries.push_back({i, i, Label::unit()});
    return SparseMatrix(order, std::move(entries));
}

std::span<const MatrixEntry> SparseMatrix::row(std::uint32_t r) const {
    const auto lo = std::lower_bound(
        entries_.begin(), entries_.end(), r,
        [](const MatrixEntry& e, std::uint32_t row) { return e.row < row; });
    auto hi = lo;
    while (hi != entries_.end() && hi->row == r) ++hi;
    return {lo, hi};
}

const Label* SparseMatrix::at(std::uint32_t r, std::uint32_t c) const {
    for (const auto& e : row(r))
        if (e.col == c) return &e.label;
    return nullptr;
}

}  // namespace cpg
