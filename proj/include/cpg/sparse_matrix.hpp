#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpg/label.hpp"

namespace cpg {

struct MatrixEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Label label;

    auto operator<=>(const MatrixEntry&) const = default;
};

// Explicit square adjacency matrix over labels, stored as (row, col, label)
// triples sorted by position. Zero entries are simply absent.
class SparseMatrix {
public:
    explicit SparseMatrix(std::uint32_t order) : order_(order) {}
    SparseMatrix(std::uint32_t order, std::vector<MatrixEntry> entries);

    static SparseMatrix zero(std::uint32_t order) { return SparseMatrix(order); }
    static SparseMatrix identity(std::uint32_t order);

    std::uint32_t order() const { return order_; }
    const std::vector<MatrixEntry>& entries() const { return entries_; }
    std::size_t entry_count() const { return entries_.size(); }

    // Entries of one row, in ascending column order.
    std::span<const MatrixEntry> row(std::uint32_t r) const;

    // nullptr when the position is zero.
    const Label* at(std::uint32_t r, std::uint32_t c) const;

    bool row_empty(std::uint32_t r) const { return row(r).empty(); }

    bool operator==(const SparseMatrix&) const = default;

private:
    std::uint32_t order_;
    std::vector<MatrixEntry> entries_;
};

}  // namespace cpg
