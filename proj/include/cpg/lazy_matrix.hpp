#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "cpg/label.hpp"
#include "cpg/numeric.hpp"
#include "cpg/sparse_matrix.hpp"

namespace cpg {

struct LazyEntry {
    BigIndex col = 0;
    Label label;

    bool operator==(const LazyEntry& other) const {
        return col == other.col && label == other.label;
    }
};

namespace detail {
class LazyNode;
}

// Row index of a composed matrix decomposed into per-component digits, most
// significant (leftmost operand) first, together with the component orders.
struct CompositeIndex {
    std::vector<std::uint32_t> digits;
    std::vector<std::uint32_t> radices;

    static CompositeIndex decompose(BigIndex linear, std::span<const std::uint32_t> radices);
    BigIndex linear() const;

    bool operator==(const CompositeIndex&) const = default;
    std::string str() const;
};

// Handle to an immutable matrix expression tree. Nothing is materialized:
// the tree answers order() and successors(row), recursing into operand rows
// on demand. Data lives only in the sparse leaves.
class LazyMatrix {
public:
    explicit LazyMatrix(SparseMatrix leaf);

    BigIndex order() const;

    // Non-zero entries of one row in ascending column order. Throws
    // std::out_of_range when row >= order(). Safe to call concurrently.
    std::vector<LazyEntry> successors(BigIndex row) const;

    // Number of successors() calls made through this handle. Copies of the
    // handle share the counter; freshly composed matrices start at zero.
    std::uint64_t rows_evaluated() const { return row_queries_->load(); }
    void reset_instrumentation() const { row_queries_->store(0); }

    // Caching wrapper; per-row results are computed once. Purely an
    // optimization, results are identical to the uncached matrix.
    LazyMatrix memoized() const;

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const;

private:
    explicit LazyMatrix(std::shared_ptr<const detail::LazyNode> node);

    std::shared_ptr<const detail::LazyNode> node_;
    std::shared_ptr<std::atomic<std::uint64_t>> row_queries_;

    friend LazyMatrix kron_product(const LazyMatrix&, const LazyMatrix&);
    friend LazyMatrix kron_sum(const LazyMatrix&, const LazyMatrix&);
    friend LazyMatrix selective_kron(const LazyMatrix&, const LazyMatrix&, LabelSet);
    friend LazyMatrix filtered(const LazyMatrix&, LabelSet);
    friend LazyMatrix identity_tensor_right(const LazyMatrix&, std::uint32_t);
    friend LazyMatrix lazy_plus(const LazyMatrix&, const LazyMatrix&);
};

// A (x) B: joint steps of both operands.
LazyMatrix kron_product(const LazyMatrix& a, const LazyMatrix& b);

// A (+) B = A (x) I + I (x) B: all interleavings of the operands.
LazyMatrix kron_sum(const LazyMatrix& a, const LazyMatrix& b);

// Left-associated folds. Throw on an empty list.
LazyMatrix kfold_sum(std::span<const LazyMatrix> ms);
LazyMatrix kfold_product(std::span<const LazyMatrix> ms);

// Kronecker product restricted to positions where both operands carry the
// same label from the given set.
LazyMatrix selective_kron(const LazyMatrix& a, const LazyMatrix& b, LabelSet labels);

// Keeps entries whose label lies in the set, zeros elsewhere.
LazyMatrix filtered(const LazyMatrix& m, LabelSet labels);

// inner (x) I_n without materializing the identity.
LazyMatrix identity_tensor_right(const LazyMatrix& inner, std::uint32_t n);

// Entry-wise union of equally sized matrices with disjoint support; a
// position occupied in both operands raises ValidationError on evaluation.
LazyMatrix lazy_plus(const LazyMatrix& a, const LazyMatrix& b);

// The program composition: selective product on semaphore-call labels plus
// the identity-tensored rest of T. S must carry only semaphore-call labels.
LazyMatrix merry(const LazyMatrix& threads, const LazyMatrix& semaphores,
                 const LabelPartition& partition);

// Test-scale dense extraction; refuses orders above max_order.
SparseMatrix materialize(const LazyMatrix& m, std::uint64_t max_order = 65536);

}  // namespace cpg
