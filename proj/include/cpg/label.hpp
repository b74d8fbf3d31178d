#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cpg {

// P/V are semaphore calls, SV marks a basic block touching a shared
// variable, NSV one that does not.
enum class LabelClass { P, V, SV, NSV };

std::string to_string(LabelClass cls);

struct LabelAtom {
    std::string name;
    LabelClass cls = LabelClass::NSV;
    std::string sem;  // non-empty exactly for P/V

    auto operator<=>(const LabelAtom&) const = default;
};

// An edge label. Almost always a single atom; the empty sequence is the
// multiplicative unit (diagonal of identity matrices), and longer sequences
// are formal products as produced by the plain Kronecker product.
class Label {
public:
    Label() = default;

    static Label unit() { return Label(); }
    static Label p_call(std::string sem);
    static Label v_call(std::string sem);
    static Label sv(std::string name);
    static Label nsv(std::string name);
    static Label atom(std::string name, LabelClass cls, std::string sem = {});

    bool is_unit() const { return !parts_ || parts_->empty(); }
    bool is_atom() const { return parts_ && parts_->size() == 1; }
    // Single P- or V-call atom; only these participate in synchronization.
    bool is_sync_atom() const {
        return is_atom() &&
               ((*parts_)[0].cls == LabelClass::P || (*parts_)[0].cls == LabelClass::V);
    }

    const LabelAtom& single() const;
    const std::vector<LabelAtom>& parts() const;

    // "1" for the unit, atom names joined with '.' otherwise.
    std::string str() const;

    // Value comparisons; the shared payload makes copies cheap and gives
    // equality a same-object fast path.
    bool operator==(const Label& other) const {
        return parts_ == other.parts_ || parts() == other.parts();
    }
    auto operator<=>(const Label& other) const { return parts() <=> other.parts(); }

private:
    explicit Label(std::vector<LabelAtom> parts);
    friend Label label_mul(const Label& a, const Label& b);

    std::shared_ptr<const std::vector<LabelAtom>> parts_;  // nullptr = unit
};

// Synchronization rule: p.p = p and v.v = v for identical semaphore calls,
// zero (absent) for every other pair. Zero is modelled as nullopt.
std::optional<Label> sync_product(const Label& a, const Label& b);

// Label product used by the plain Kronecker product: the formal
// concatenation, except that identical semaphore calls collapse per
// sync_product. The unit is the neutral element.
Label label_mul(const Label& a, const Label& b);

// Immutable shared label set, cheap to hand to lazy matrix nodes.
class LabelSet {
public:
    LabelSet() : labels_(std::make_shared<std::set<Label>>()) {}
    explicit LabelSet(std::set<Label> labels)
        : labels_(std::make_shared<std::set<Label>>(std::move(labels))) {}

    bool contains(const Label& l) const { return labels_->count(l) != 0; }
    bool empty() const { return labels_->empty(); }
    std::size_t size() const { return labels_->size(); }
    const std::set<Label>& values() const { return *labels_; }

private:
    std::shared_ptr<const std::set<Label>> labels_;
};

// The disjoint split of a system's labels: semaphore calls, shared-variable
// blocks, and the rest.
class LabelPartition {
public:
    LabelPartition() = default;
    LabelPartition(std::set<Label> sync, std::set<Label> sv, std::set<Label> nsv);

    const LabelSet& sync_labels() const { return sync_; }
    const LabelSet& sv_labels() const { return sv_; }
    const LabelSet& nsv_labels() const { return nsv_; }

    // sv + nsv, the non-synchronization labels.
    const LabelSet& value_labels() const { return value_; }
    LabelSet all_labels() const;

    bool contains(const Label& l) const {
        return sync_.contains(l) || sv_.contains(l) || nsv_.contains(l);
    }

private:
    LabelSet sync_, sv_, nsv_, value_;
};

// Throws UnknownLabelError when l occurs in no set of the partition.
LabelClass classify_entry(const Label& l, const LabelPartition& partition);

}  // namespace cpg
