#pragma once

// Whether K, Ric and W extend across Σ, decided two independent ways.

#include <optional>
#include <string>
#include <vector>

#include "rlc/degeneracy/forms.hpp"

namespace rlc {

struct Flag {
    bool value = false;
    bool applicable = true;  // false when a prerequisite flag failed
    Evidence evidence = Evidence::Exact;
};

struct Classification {
    TransverseResult type_changing;
    Vector radical;
    TransversalityResult transversality;
    Flag II_flat, III_flat, conf_II_flat, conf_III_flat;
    std::optional<Expr> k_II, k_III;  // proportionality factors when they exist
};

struct Extendibility {
    Verdict K, Ric, W;
    bool asserted = true;  // false for a non-uniform radical
};

Extendibility extendibility_by_criteria(const Classification& c);

struct LaurentWitness {
    std::string tensor;
    std::vector<std::size_t> index;  // frame or coordinate slots, 0-based
    unsigned order = 0;
    Expr coefficient;                // leading Laurent coefficient, on Σ
};

struct LaurentResult {
    Extendibility verdicts;
    std::vector<LaurentWitness> witnesses;  // first failing component per tensor
    bool frame = false;                     // components taken in the adapted frame
};

// Throws PoleOrderTooHigh for poles beyond order 2.
LaurentResult extendibility_by_laurent(const MetricChart& M, const CurvatureBundle& B);

}  // namespace rlc
