#pragma once

#include <string>
#include <vector>

#include "csent/errors.hpp"

namespace csent {

enum class Party { A, B };

inline Party other_party(Party p) { return p == Party::A ? Party::B : Party::A; }
inline char party_char(Party p) { return p == Party::A ? 'A' : 'B'; }

struct Factor {
    std::string label;
    int dim = 1;
    Party party = Party::A;
};

// Ordered tensor-factor layout. Factor 0 is the most significant index digit,
// matching the Kronecker-product convention index = i_0 * d_1 + i_1 for two
// factors.
struct SubsystemLayout {
    std::vector<Factor> factors;

    SubsystemLayout() = default;
    explicit SubsystemLayout(std::vector<Factor> f) : factors(std::move(f)) {}

    int size() const { return static_cast<int>(factors.size()); }
    int dim() const;
    std::vector<int> dims() const;

    bool has(const std::string& label) const;
    // Position in factor order; throws LabelError if absent.
    int position(const std::string& label) const;
    std::vector<int> positions(const std::vector<std::string>& labels) const;

    std::vector<int> party_positions(Party p) const;
    int party_dim(Party p) const;

    // Layout with the given labels removed, order preserved.
    SubsystemLayout erased(const std::vector<std::string>& labels) const;
    // Layout reordered so that new slot k holds factors[order[k]].
    SubsystemLayout reordered(const std::vector<int>& order) const;

    // True when every party-A factor precedes every party-B factor.
    bool is_grouped() const;

    // Unique labels, dims >= 1, total dimension within the dense cap.
    void validate() const;
};

// Two-factor bipartite layout, the default shape for original states.
SubsystemLayout bipartite_layout(int dim_a, int dim_b,
                                 const std::string& label_a = "a1",
                                 const std::string& label_b = "b1");

} // namespace csent
