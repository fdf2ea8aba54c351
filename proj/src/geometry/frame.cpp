#include "rlc/geometry/frame.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace rlc {

namespace {

// Even powers of plain coordinates with positive coefficients, positive constant term.
bool positive_by_inspection(const Poly& p) {
    if (p.is_zero()) return false;
    if (p.constant_term() <= 0) return false;
    for (const auto& t : p.terms()) {
        if (t.coef <= 0) return false;
        for (const auto& [v, e] : t.mono.factors)
            if (e % 2 || atom_info(v).kind != AtomKind::Coordinate) return false;
    }
    return true;
}

// Sign of e if it is provably constant-signed: +1, -1, or 0 when unknown.
int definite_sign(const Expr& e) {
    int s = 1;
    Poly n = e.num();
    if (!n.is_zero() && n.constant_term() < 0) {
        n = -n;
        s = -1;
    }
    if (positive_by_inspection(n) && positive_by_inspection(e.den())) return s;
    return 0;
}

Eigen::MatrixXd numeric_metric(const MetricChart& M, const Valuation& p, bool restrict) {
    const std::size_t m = M.dim();
    Eigen::MatrixXd G(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                evaluate(restrict ? M.sigma().restrict(M.g(a, b)) : M.g(a, b), p);
    return G;
}

}  // namespace

TransverseResult is_transverse_type_changing(const MetricChart& M) {
    TransverseResult r;
    r.det = determinant(M.g());
    try {
        r.unit = M.sigma().divide(r.det);
    } catch (const NotDivisible&) {
        throw GeometryError("det g is not divisible by tau: the degeneracy locus is mis-declared");
    }
    Verdict any_nonzero{false, Evidence::Exact};
    for (std::size_t a = 0; a < M.dim(); ++a) {
        const Verdict v = vanishes_on_sigma(M, differentiate(r.det, M.coord(a)));
        if (!v.value) {
            any_nonzero = {true, v.evidence};
            r.witness = "d(det g)/d" + M.names()[a] + " is nonzero on the degeneracy locus";
            break;
        }
    }
    if (!any_nonzero.value) {
        r.witness = "d(det g) vanishes on the degeneracy locus";
        return r;
    }
    const Expr u0 = M.sigma().restrict(r.unit);
    Evidence unit_evidence = Evidence::Exact;
    if (definite_sign(u0) == 0) {
        unit_evidence = Evidence::Numeric;
        for (const auto& p : M.sigma_samples()) {
            if (std::abs(evaluate(u0, p)) < 1e-9) {
                r.witness = "det g / tau vanishes at a sample point of the degeneracy locus";
                r.evidence = Evidence::Numeric;
                return r;
            }
        }
    }
    r.transverse = true;
    r.evidence = weaker(any_nonzero.evidence, unit_evidence);
    return r;
}

Vector radical_field(const MetricChart& M) {
    const std::size_t m = M.dim();
    ExprMatrix A(m, std::vector<Expr>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) A[a][b] = M.sigma().restrict(M.g(a, b));

    // reduced row echelon form over the field of expressions
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m && rank < m; ++c) {
        std::size_t p = rank;
        while (p < m && A[p][c].is_zero()) ++p;
        if (p == m) continue;
        std::swap(A[p], A[rank]);
        const Expr inv = Expr(1) / A[rank][c];
        for (auto& x : A[rank]) x *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank || A[r][c].is_zero()) continue;
            const Expr f = A[r][c];
            for (std::size_t k = 0; k < m; ++k) A[r][k] -= f * A[rank][k];
        }
        pivots.push_back(c);
        ++rank;
    }
    if (rank != m - 1) throw GeometryError("metric kernel on the degeneracy locus is not one-dimensional");
    std::size_t free_col = 0;
    while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;

    Vector R(m);
    R[free_col] = Expr(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) R[pivots[i]] = -A[i][free_col];

    for (const auto& p : M.sigma_samples()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(numeric_metric(M, p, true));
        const auto& ev = es.eigenvalues();
        int small = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (std::abs(ev(i)) < 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff())) ++small;
        if (small != 1) throw GeometryError("metric kernel on the degeneracy locus is not one-dimensional at a sample");
    }
    return R;
}

const char* to_string(Transversality t) {
    switch (t) {
        case Transversality::Transverse: return "transverse";
        case Transversality::Tangent: return "tangent";
        case Transversality::NonUniform: return "non-uniform";
    }
    return "?";
}

TransversalityResult radical_transversality(const MetricChart& M, const Vector& R) {
    const Expr r0 = M.sigma().restrict(apply(M, R, M.tau()));
    if (r0.is_zero()) return {Transversality::Tangent, Evidence::Exact};
    if (definite_sign(r0) != 0) return {Transversality::Transverse, Evidence::Exact};
    std::size_t zeros = 0;
    const auto pts = M.sigma_samples();
    for (const auto& p : pts)
        if (std::abs(evaluate(r0, p)) < 1e-9) ++zeros;
    if (zeros == 0) return {Transversality::Transverse, Evidence::Numeric};
    if (zeros == pts.size()) return {Transversality::Tangent, Evidence::Numeric};
    return {Transversality::NonUniform, Evidence::Numeric};
}

Verdict tangent_to_sigma(const MetricChart& M, const Vector& X) { return vanishes_on_sigma(M, apply(M, X, M.tau())); }

Frame build_adapted_frame(const MetricChart& M) {
    const std::size_t m = M.dim(), r = M.radical_index();
    for (std::size_t i = 0; i < r; ++i)
        if (!M.g(i, r).is_zero())
            throw FrameUnsupported("metric is not block diagonal: g(d_" + M.names()[i] + ", d_" + M.names()[r] +
                                   ") != 0");
    Expr u;
    try {
        u = M.sigma().divide(M.g(r, r));
    } catch (const NotDivisible&) {
        throw FrameUnsupported("g_mm is not divisible by tau");
    }
    auto all_samples = M.sigma_samples();
    const auto off = M.off_sigma_samples();
    all_samples.insert(all_samples.end(), off.begin(), off.end());
    if (definite_sign(u) <= 0)
        for (const auto& p : all_samples)
            if (evaluate(u, p) <= 1e-12)
                throw FrameUnsupported("g_mm / tau is not positive; declare tau with the sign of g_mm");

    Frame F;
    F.E.assign(m, Vector(m));
    for (std::size_t i = 0; i < r; ++i) {
        Vector v = coordinate_field(M, i);
        for (std::size_t j = 0; j < i; ++j) {
            const Expr c = Expr(F.eps[j]) * inner(M, v, F.E[j]);
            if (c.is_zero()) continue;
            for (std::size_t a = 0; a < m; ++a) v[a] -= c * F.E[j][a];
        }
        const Expr n = inner(M, v, v);
        if (n.is_zero()) throw FrameUnsupported("Gram-Schmidt meets a null direction");
        int sign = definite_sign(n);
        if (sign == 0) {
            for (const auto& p : all_samples) {
                const double val = evaluate(n, p);
                const int s = val > 1e-12 ? 1 : (val < -1e-12 ? -1 : 0);
                if (s == 0 || (sign != 0 && s != sign))
                    throw FrameUnsupported("Gram-Schmidt meets a null or sign-changing direction");
                sign = s;
            }
        }
        const Expr norm = sqrt(Expr(sign) * n);
        for (std::size_t a = 0; a < m; ++a) v[a] /= norm;
        F.E[i] = std::move(v);
        F.eps.push_back(sign);
    }
    F.E[r][r] = Expr(1) / sqrt(u);
    F.adapted = true;
    F.completely_adapted = true;
    for (std::size_t i = 0; i < r; ++i)
        if (!tangent_to_sigma(M, F.E[i]).value) F.completely_adapted = false;
    return F;
}

Signature signature_at(const MetricChart& M, const Valuation& p, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(numeric_metric(M, p, false));
    Signature s;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > tol) ++s.positive;
        else if (ev < -tol) ++s.negative;
        else ++s.zero;
    }
    return s;
}

}  // namespace rlc
