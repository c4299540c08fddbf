#pragma once

#include <cstdint>
#include <vector>

#include "decomp/ddg.hpp"

namespace decomp::ddg {

// Rename-invariant digest of what a program prints. Computed bottom-up over
// the unfolded expression DAG, so copies, parameter bindings, and function
// boundaries do not change it: two programs are treated as equivalent when
// they compute the same goal values from the same inputs.
struct CanonicalForm {
    std::vector<std::uint64_t> goal_digests;   // in goal order
    std::vector<std::uint64_t> sorted_digests; // multiset view
    std::uint64_t program_digest = 0;

    bool equivalent_to(const CanonicalForm& other) const {
        return sorted_digests == other.sorted_digests;
    }
    bool operator==(const CanonicalForm& other) const { return equivalent_to(other); }
};

CanonicalForm canonical_form(const Ddg& graph);

}  // namespace decomp::ddg
