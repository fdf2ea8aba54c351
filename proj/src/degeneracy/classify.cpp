#include "rlc/degeneracy/classify.hpp"

#include "rlc/conformal/conformal.hpp"

namespace rlc {

namespace {

Flag not_applicable() {
    Flag f;
    f.applicable = false;
    return f;
}

}  // namespace

Classification classify(const MetricChart& M) {
    Classification c;
    c.type_changing = is_transverse_type_changing(M);
    if (!c.type_changing.transverse) {
        c.II_flat = c.III_flat = c.conf_II_flat = c.conf_III_flat = not_applicable();
        return c;
    }
    c.radical = radical_field(M);
    c.transversality = radical_transversality(M, c.radical);

    const auto B = connection(M);
    const auto F = second_fundamental(M, B, c.radical);
    const auto P = proportional_to(M, F.II_sigma, F.g_sigma);
    c.II_flat = {P.zero, true, P.evidence};
    c.conf_II_flat = {P.proportional, true, P.evidence};
    if (P.proportional) c.k_II = P.k;

    if (P.zero) {
        const auto Q = proportional_to(M, third_fundamental(M, B, F), F.g_sigma);
        c.III_flat = {Q.zero, true, Q.evidence};
        c.conf_III_flat = {Q.proportional, true, Q.evidence};
        if (Q.proportional) c.k_III = Q.k;
        return c;
    }
    c.III_flat = not_applicable();
    if (!P.proportional) {
        c.conf_III_flat = {false, true, P.evidence};
        return c;
    }
    try {
        const MetricChart N = rescale(M, flatten_II(M));
        const auto Bn = connection(N);
        const auto Fn = second_fundamental(N, Bn, c.radical);
        const auto Q = proportional_to(N, third_fundamental(N, Bn, Fn), Fn.g_sigma);
        c.conf_III_flat = {Q.proportional, true, weaker(P.evidence, Q.evidence)};
    } catch (const ConformalUnsupported&) {
        c.conf_III_flat = not_applicable();
    }
    return c;
}

}  // namespace rlc
