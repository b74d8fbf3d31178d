#include "cpg/lazy_matrix.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "cpg/errors.hpp"

namespace cpg {

CompositeIndex CompositeIndex::decompose(BigIndex linear,
                                         std::span<const std::uint32_t> radices) {
    CompositeIndex idx;
    idx.radices.assign(radices.begin(), radices.end());
    idx.digits.resize(radices.size());
    for (std::size_t i = radices.size(); i-- > 0;) {
        idx.digits[i] = static_cast<std::uint32_t>(linear % radices[i]);
        linear /= radices[i];
    }
    if (linear != 0) throw std::out_of_range("composite index outside radix range");
    return idx;
}

BigIndex CompositeIndex::linear() const {
    BigIndex v = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) v = v * radices[i] + digits[i];
    return v;
}

std::string CompositeIndex::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(digits[i]);
    }
    return out + ")";
}

namespace detail {

class LazyNode {
public:
    virtual ~LazyNode() = default;
    virtual BigIndex order() const noexcept = 0;
    virtual void successors(BigIndex row, std::vector<LazyEntry>& out) const = 0;
    virtual void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const = 0;
};

using NodePtr = std::shared_ptr<const LazyNode>;

class LeafNode final : public LazyNode {
public:
    explicit LeafNode(SparseMatrix m) : matrix_(std::move(m)) {}

    BigIndex order() const noexcept override { return matrix_.order(); }

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        for (const auto& e : matrix_.row(static_cast<std::uint32_t>(row)))
            out.push_back({e.col, e.label});
    }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        fn(matrix_);
    }

private:
    SparseMatrix matrix_;
};

class BinaryNode : public LazyNode {
public:
    BinaryNode(NodePtr l, NodePtr r)
        : left_(std::move(l)),
          right_(std::move(r)),
          order_(checked_index_mul(left_->order(), right_->order())) {}

    BigIndex order() const noexcept override { return order_; }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        left_->for_each_leaf(fn);
        right_->for_each_leaf(fn);
    }

protected:
    NodePtr left_, right_;
    BigIndex order_;
};

class KronProductNode final : public BinaryNode {
public:
    using BinaryNode::BinaryNode;

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        const BigIndex ro = right_->order();
        std::vector<LazyEntry> ls, rs;
        left_->successors(row / ro, ls);
        if (ls.empty()) return;
        right_->successors(row % ro, rs);
        for (const auto& le : ls)
            for (const auto& re : rs)
                out.push_back({le.col * ro + re.col, label_mul(le.label, re.label)});
    }
};

class KronSumNode final : public BinaryNode {
public:
    using BinaryNode::BinaryNode;

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        const BigIndex ro = right_->order();
        const BigIndex i = row / ro;
        const BigIndex p = row % ro;
        std::vector<LazyEntry> ls, rs;
        left_->successors(i, ls);
        right_->successors(p, rs);
        // merge {(j.p, a)} and {(i.q, b)} keeping columns ascending
        std::size_t li = 0, ri = 0;
        while (li < ls.size() || ri < rs.size()) {
            const BigIndex lcol = li < ls.size() ? ls[li].col * ro + p : BigIndex(0);
            const BigIndex rcol = ri < rs.size() ? i * ro + rs[ri].col : BigIndex(0);
            if (li < ls.size() && ri < rs.size() && lcol == rcol)
                throw ValidationError(
                    "entry-wise sum with overlapping support (labels '" + ls[li].label.str() +
                    "' and '" + rs[ri].label.str() + "')");
            if (ri == rs.size() || (li < ls.size() && lcol < rcol)) {
                out.push_back({lcol, ls[li].label});
                ++li;
            } else {
                out.push_back({rcol, rs[ri].label});
                ++ri;
            }
        }
    }
};

class SelectiveKronNode final : public BinaryNode {
public:
    SelectiveKronNode(NodePtr l, NodePtr r, LabelSet labels)
        : BinaryNode(std::move(l), std::move(r)), labels_(std::move(labels)) {}

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        const BigIndex ro = right_->order();
        std::vector<LazyEntry> ls, rs;
        left_->successors(row / ro, ls);
        if (ls.empty()) return;
        bool right_done = false;
        for (const auto& le : ls) {
            if (!labels_.contains(le.label)) continue;
            if (!right_done) {
                right_->successors(row % ro, rs);
                right_done = true;
            }
            for (const auto& re : rs)
                if (re.label == le.label) out.push_back({le.col * ro + re.col, le.label});
        }
    }

private:
    LabelSet labels_;
};

class FilteredNode final : public LazyNode {
public:
    FilteredNode(NodePtr inner, LabelSet labels)
        : inner_(std::move(inner)), labels_(std::move(labels)) {}

    BigIndex order() const noexcept override { return inner_->order(); }

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        std::vector<LazyEntry> entries;
        inner_->successors(row, entries);
        for (auto& e : entries)
            if (labels_.contains(e.label)) out.push_back(std::move(e));
    }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        inner_->for_each_leaf(fn);
    }

private:
    NodePtr inner_;
    LabelSet labels_;
};

class IdentityTensorRightNode final : public LazyNode {
public:
    IdentityTensorRightNode(NodePtr inner, std::uint32_t n)
        : inner_(std::move(inner)), n_(n), order_(checked_index_mul(inner_->order(), n)) {
        if (n == 0) throw std::invalid_argument("identity factor must have positive order");
    }

    BigIndex order() const noexcept override { return order_; }

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        const BigIndex p = row % n_;
        std::vector<LazyEntry> entries;
        inner_->successors(row / n_, entries);
        for (auto& e : entries) out.push_back({e.col * n_ + p, std::move(e.label)});
    }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        inner_->for_each_leaf(fn);
    }

private:
    NodePtr inner_;
    std::uint32_t n_;
    BigIndex order_;
};

class PlusNode final : public LazyNode {
public:
    PlusNode(NodePtr l, NodePtr r) : left_(std::move(l)), right_(std::move(r)) {
        if (left_->order() != right_->order())
            throw ValidationError("entry-wise sum of matrices with different orders");
    }

    BigIndex order() const noexcept override { return left_->order(); }

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        std::vector<LazyEntry> ls, rs;
        left_->successors(row, ls);
        right_->successors(row, rs);
        std::size_t li = 0, ri = 0;
        while (li < ls.size() || ri < rs.size()) {
            if (li < ls.size() && ri < rs.size() && ls[li].col == rs[ri].col)
                throw ValidationError(
                    "entry-wise sum with overlapping support (labels '" + ls[li].label.str() +
                    "' and '" + rs[ri].label.str() + "')");
            if (ri == rs.size() || (li < ls.size() && ls[li].col < rs[ri].col))
                out.push_back(std::move(ls[li++]));
            else
                out.push_back(std::move(rs[ri++]));
        }
    }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        left_->for_each_leaf(fn);
        right_->for_each_leaf(fn);
    }

private:
    NodePtr left_, right_;
};

class MemoNode final : public LazyNode {
public:
    explicit MemoNode(NodePtr inner) : inner_(std::move(inner)) {}

    BigIndex order() const noexcept override { return inner_->order(); }

    void successors(BigIndex row, std::vector<LazyEntry>& out) const override {
        {
            std::lock_guard lock(mutex_);
            auto it = cache_.find(row);
            if (it != cache_.end()) {
                out.insert(out.end(), it->second.begin(), it->second.end());
                return;
            }
        }
        std::vector<LazyEntry> entries;
        inner_->successors(row, entries);
        {
            std::lock_guard lock(mutex_);
            auto [it, inserted] = cache_.emplace(row, std::move(entries));
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }

    void for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const override {
        inner_->for_each_leaf(fn);
    }

private:
    NodePtr inner_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<BigIndex, std::vector<LazyEntry>, BigIndexHash> cache_;
};

}  // namespace detail

LazyMatrix::LazyMatrix(SparseMatrix leaf)
    : node_(std::make_shared<detail::LeafNode>(std::move(leaf))),
      row_queries_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

LazyMatrix::LazyMatrix(std::shared_ptr<const detail::LazyNode> node)
    : node_(std::move(node)),
      row_queries_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

BigIndex LazyMatrix::order() const { return node_->order(); }

std::vector<LazyEntry> LazyMatrix::successors(BigIndex row) const {
    if (row >= node_->order())
        throw std::out_of_range("row " + to_decimal(row) + " outside matrix order " +
                                to_decimal(node_->order()));
    row_queries_->fetch_add(1, std::memory_order_relaxed);
    std::vector<LazyEntry> out;
    node_->successors(row, out);
    return out;
}

LazyMatrix LazyMatrix::memoized() const {
    return LazyMatrix(std::make_shared<detail::MemoNode>(node_));
}

void LazyMatrix::for_each_leaf(const std::function<void(const SparseMatrix&)>& fn) const {
    node_->for_each_leaf(fn);
}

LazyMatrix kron_product(const LazyMatrix& a, const LazyMatrix& b) {
    return LazyMatrix(std::make_shared<detail::KronProductNode>(a.node_, b.node_));
}

LazyMatrix kron_sum(const LazyMatrix& a, const LazyMatrix& b) {
    return LazyMatrix(std::make_shared<detail::KronSumNode>(a.node_, b.node_));
}

LazyMatrix kfold_sum(std::span<const LazyMatrix> ms) {
    if (ms.empty()) throw std::invalid_argument("k-fold sum of an empty list");
    LazyMatrix acc = ms.front();
    for (std::size_t i = 1; i < ms.size(); ++i) acc = kron_sum(acc, ms[i]);
    return acc;
}

LazyMatrix kfold_product(std::span<const LazyMatrix> ms) {
    if (ms.empty()) throw std::invalid_argument("k-fold product of an empty list");
    LazyMatrix acc = ms.front();
    for (std::size_t i = 1; i < ms.size(); ++i) acc = kron_product(acc, ms[i]);
    return acc;
}

LazyMatrix selective_kron(const LazyMatrix& a, const LazyMatrix& b, LabelSet labels) {
    return LazyMatrix(
        std::make_shared<detail::SelectiveKronNode>(a.node_, b.node_, std::move(labels)));
}

LazyMatrix filtered(const LazyMatrix& m, LabelSet labels) {
    return LazyMatrix(std::make_shared<detail::FilteredNode>(m.node_, std::move(labels)));
}

LazyMatrix identity_tensor_right(const LazyMatrix& inner, std::uint32_t n) {
    return LazyMatrix(std::make_shared<detail::IdentityTensorRightNode>(inner.node_, n));
}

LazyMatrix lazy_plus(const LazyMatrix& a, const LazyMatrix& b) {
    return LazyMatrix(std::make_shared<detail::PlusNode>(a.node_, b.node_));
}

LazyMatrix merry(const LazyMatrix& threads, const LazyMatrix& semaphores,
                 const LabelPartition& partition) {
    semaphores.for_each_leaf([](const SparseMatrix& m) {
        for (const auto& e : m.entries())
            if (!e.label.is_sync_atom())
                throw ValidationError("semaphore matrix carries non-call label '" +
                                      e.label.str() + "'");
    });
    const auto sem_order = semaphores.order();
    if (sem_order > std::numeric_limits<std::uint32_t>::max())
        throw std::overflow_error("semaphore composition order exceeds 32-bit range");
    return lazy_plus(
        selective_kron(threads, semaphores, partition.sync_labels()),
        identity_tensor_right(filtered(threads, partition.value_labels()),
                              static_cast<std::uint32_t>(sem_order)));
}

SparseMatrix materialize(const LazyMatrix& m, std::uint64_t max_order) {
    if (m.order() > max_order)
        throw ResourceLimitError("refusing to materialize order " + to_decimal(m.order()) +
                                 " (cap " + std::to_string(max_order) + ")");
    const auto order = static_cast<std::uint32_t>(m.order());
    std::vector<MatrixEntry> entries;
    for (std::uint32_t r = 0; r < order; ++r)
        for (const auto& e : m.successors(r))
            entries.push_back({r, static_cast<std::uint32_t>(e.col), e.label});
    return SparseMatrix(order, std::move(entries));
}

}  // namespace cpg
