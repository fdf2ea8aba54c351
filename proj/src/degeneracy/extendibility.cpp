#include "rlc/degeneracy/extendibility.hpp"

namespace rlc {

namespace {

Verdict both(const Verdict& a, const Verdict& b) {
    return {a.value && b.value, weaker(a.evidence, b.evidence)};
}

Verdict of(const Flag& f) { return {f.applicable && f.value, f.evidence}; }

struct ComponentResult {
    Verdict extends;
    LaurentForm form;
};

ComponentResult analyse(const MetricChart& M, const Expr& e) {
    ComponentResult r;
    r.form = M.sigma().laurent(e);
    if (r.form.order == 0) {
        r.extends = {true, Evidence::Exact};
        return r;
    }
    // the order is exact, but opaque constants may still vanish for the declared jets
    r.extends = {true, Evidence::Exact};
    for (const Expr* c : {&r.form.a2, &r.form.a1}) {
        const Verdict z = vanishes_on_sigma(M, *c);
        r.extends.evidence = weaker(r.extends.evidence, z.evidence);
        if (!z.value) {
            r.extends.value = false;
            return r;
        }
    }
    return r;
}

// components (i k j k) with i ≠ j and k tangent first, the rest in storage order
std::vector<std::size_t> scan_order(const Tensor& T, std::size_t mi) {
    std::vector<std::size_t> first, rest;
    for (std::size_t n = 0; n < T.components().size(); ++n) {
        const auto i = T.index_of(n);
        if (T.rank() == 4) {
            if (i[0] > i[1] || i[2] > i[3] || i[0] > i[2] || (i[0] == i[2] && i[1] > i[3])) continue;
            if (i[0] == i[1] || i[2] == i[3]) continue;
            const bool family = i[0] != i[2] && i[1] == i[3] && i[1] != mi;
            (family ? first : rest).push_back(n);
        } else {
            if (i[0] > i[1]) continue;
            rest.push_back(n);
        }
    }
    first.insert(first.end(), rest.begin(), rest.end());
    return first;
}

Verdict tensor_extends(const MetricChart& M, const Tensor& T, const std::string& name, std::vector<LaurentWitness>& w) {
    Verdict v{true, Evidence::Exact};
    std::optional<LaurentWitness> worst;
    for (const auto n : scan_order(T, M.dim() - 1)) {
        const auto r = analyse(M, T.components()[n]);
        v.evidence = weaker(v.evidence, r.extends.evidence);
        if (r.extends.value) continue;
        v.value = false;
        if (!worst || r.form.order > worst->order)
            worst = LaurentWitness{name, T.index_of(n), r.form.order, r.form.order == 2 ? r.form.a2 : r.form.a1};
    }
    if (worst) w.push_back(*worst);
    return v;
}

}  // namespace

Extendibility extendibility_by_criteria(const Classification& c) {
    Extendibility e;
    const Verdict transverse{c.type_changing.transverse && c.transversality.kind == Transversality::Transverse,
                             weaker(c.type_changing.evidence, c.transversality.evidence)};
    e.asserted = c.type_changing.transverse && c.transversality.kind != Transversality::NonUniform;
    e.K = both(transverse, of(c.II_flat));
    e.Ric = both(e.K, of(c.III_flat));
    e.W = both(transverse, of(c.conf_III_flat));
    return e;
}

LaurentResult extendibility_by_laurent(const MetricChart& M, const CurvatureBundle& B) {
    LaurentResult out;
    std::optional<Frame> F;
    try {
        F = build_adapted_frame(M);
        out.frame = true;
    } catch (const FrameUnsupported&) {
    }
    auto view = [&](const Tensor& T) { return F ? in_frame(T, F->E) : T; };
    out.verdicts.K = tensor_extends(M, view(B.K), "K", out.witnesses);
    out.verdicts.Ric = tensor_extends(M, view(B.Ric), "Ric", out.witnesses);
    if (M.dim() >= 4) out.verdicts.W = tensor_extends(M, view(B.W), "W", out.witnesses);
    return out;
}

}  // namespace rlc
