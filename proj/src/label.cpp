#include "cpg/label.hpp"

#include <cassert>
#include <stdexcept>

#include "cpg/errors.hpp"

namespace cpg {

std::string to_string(LabelClass cls) {
    switch (cls) {
        case LabelClass::P: return "P";
        case LabelClass::V: return "V";
        case LabelClass::SV: return "SV";
        case LabelClass::NSV: return "NSV";
    }
    return "?";
}

Label Label::p_call(std::string sem) {
    std::string name = "p(" + sem + ")";
    return atom(std::move(name), LabelClass::P, std::move(sem));
}

Label Label::v_call(std::string sem) {
    std::string name = "v(" + sem + ")";
    return atom(std::move(name), LabelClass::V, std::move(sem));
}

Label Label::sv(std::string name) { return atom(std::move(name), LabelClass::SV); }

Label Label::nsv(std::string name) { return atom(std::move(name), LabelClass::NSV); }

Label::Label(std::vector<LabelAtom> parts)
    : parts_(std::make_shared<const std::vector<LabelAtom>>(std::move(parts))) {}

Label Label::atom(std::string name, LabelClass cls, std::string sem) {
    const bool is_call = cls == LabelClass::P || cls == LabelClass::V;
    if (is_call && sem.empty())
        throw std::invalid_argument("semaphore call label needs a semaphore id");
    if (!is_call && !sem.empty())
        throw std::invalid_argument("non-call label must not name a semaphore");
    return Label({LabelAtom{std::move(name), cls, std::move(sem)}});
}

const LabelAtom& Label::single() const {
    assert(is_atom());
    return parts_->front();
}

const std::vector<LabelAtom>& Label::parts() const {
    static const std::vector<LabelAtom> empty;
    return parts_ ? *parts_ : empty;
}

std::string Label::str() const {
    if (is_unit()) return "1";
    std::string out = parts_->front().name;
    for (std::size_t i = 1; i < parts_->size(); ++i) out += "." + (*parts_)[i].name;
    return out;
}

std::optional<Label> sync_product(const Label& a, const Label& b) {
    if (a == b && a.is_sync_atom()) return a;
    return std::nullopt;
}

Label label_mul(const Label& a, const Label& b) {
    if (auto collapsed = sync_product(a, b)) return *collapsed;
    std::vector<LabelAtom> parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    return Label(std::move(parts));
}

LabelPartition::LabelPartition(std::set<Label> sync, std::set<Label> sv, std::set<Label> nsv) {
    for (const auto& l : sv)
        if (sync.count(l)) throw ValidationError("label '" + l.str() + "' in both sync and SV sets");
    for (const auto& l : nsv) {
        if (sync.count(l)) throw ValidationError("label '" + l.str() + "' in both sync and NSV sets");
        if (sv.count(l)) throw ValidationError("label '" + l.str() + "' in both SV and NSV sets");
    }
    std::set<Label> value = sv;
    value.insert(nsv.begin(), nsv.end());
    sync_ = LabelSet(std::move(sync));
    sv_ = LabelSet(std::move(sv));
    nsv_ = LabelSet(std::move(nsv));
    value_ = LabelSet(std::move(value));
}

LabelSet LabelPartition::all_labels() const {
    std::set<Label> all = sync_.values();
    all.insert(sv_.values().begin(), sv_.values().end());
    all.insert(nsv_.values().begin(), nsv_.values().end());
    return LabelSet(std::move(all));
}

LabelClass classify_entry(const Label& l, const LabelPartition& partition) {
    if (partition.sync_labels().contains(l)) return l.single().cls;
    if (partition.sv_labels().contains(l)) return LabelClass::SV;
    if (partition.nsv_labels().contains(l)) return LabelClass::NSV;
    throw UnknownLabelError("label '" + l.str() + "' occurs in no partition set");
}

}  // namespace cpg
