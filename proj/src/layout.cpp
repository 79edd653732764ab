#include "csent/layout.hpp"

#include <algorithm>
#include <set>

#include "csent/types.hpp"

namespace csent {

int SubsystemLayout::dim() const {
    int d = 1;
    for (const auto& f : factors) d *= f.dim;
    return d;
}

std::vector<int> SubsystemLayout::dims() const {
    std::vector<int> d;
    d.reserve(factors.size());
    for (const auto& f : factors) d.push_back(f.dim);
    return d;
}

bool SubsystemLayout::has(const std::string& label) const {
    for (const auto& f : factors)
        if (f.label == label) return true;
    return false;
}

int SubsystemLayout::position(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (factors[i].label == label) return i;
    throw LabelError("unknown subsystem label '" + label + "'");
}

std::vector<int> SubsystemLayout::positions(const std::vector<std::string>& labels) const {
    std::vector<int> pos;
    pos.reserve(labels.size());
    for (const auto& l : labels) pos.push_back(position(l));
    return pos;
}

std::vector<int> SubsystemLayout::party_positions(Party p) const {
    std::vector<int> pos;
    for (int i = 0; i < size(); ++i)
        if (factors[i].party == p) pos.push_back(i);
    return pos;
}

int SubsystemLayout::party_dim(Party p) const {
    int d = 1;
    for (const auto& f : factors)
        if (f.party == p) d *= f.dim;
    return d;
}

SubsystemLayout SubsystemLayout::erased(const std::vector<std::string>& labels) const {
    SubsystemLayout out;
    for (const auto& f : factors) {
        if (std::find(labels.begin(), labels.end(), f.label) == labels.end())
            out.factors.push_back(f);
    }
    if (out.size() + static_cast<int>(labels.size()) != size())
        throw LabelError("erased: label not present in layout");
    return out;
}

SubsystemLayout SubsystemLayout::reordered(const std::vector<int>& order) const {
    if (static_cast<int>(order.size()) != size())
        throw ShapeError("reordered: permutation length mismatch");
    SubsystemLayout out;
    out.factors.reserve(factors.size());
    for (int p : order) out.factors.push_back(factors.at(p));
    return out;
}

bool SubsystemLayout::is_grouped() const {
    bool seen_b = false;
    for (const auto& f : factors) {
        if (f.party == Party::B) seen_b = true;
        else if (seen_b) return false;
    }
    return true;
}

void SubsystemLayout::validate() const {
    std::set<std::string> seen;
    long total = 1;
    for (const auto& f : factors) {
        if (f.dim < 1) throw ValidationError("layout: factor '" + f.label + "' has dim < 1");
        if (!seen.insert(f.label).second)
            throw ValidationError("layout: duplicate label '" + f.label + "'");
        total *= f.dim;
        if (total > kMaxTotalDim)
            throw ValidationError("layout: total dimension exceeds cap of " +
                                  std::to_string(kMaxTotalDim));
    }
}

SubsystemLayout bipartite_layout(int dim_a, int dim_b,
                                 const std::string& label_a,
                                 const std::string& label_b) {
    return SubsystemLayout{{Factor{label_a, dim_a, Party::A}, Factor{label_b, dim_b, Party::B}}};
}

} // namespace csent
