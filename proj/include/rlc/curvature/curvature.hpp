#pragma once

// Connection and curvature in coordinates.
//
// Sign convention: K(X,Y,Z,T) = g(R(X,Y)T, Z) with
// R(X,Y) = [∇_X, ∇_Y] - ∇_[X,Y], so a round sphere has K = (1/2) g•g and
// Ric(Y,Z) = tr(X -> R(X,Y)Z) = g^{ac} K_{abcd} with (b,d) = (Y,Z).

#include "rlc/geometry/chart.hpp"
#include "rlc/geometry/frame.hpp"

namespace rlc {

class CurvatureError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// Γ_{ab,c} = ½(∂_a g_bc + ∂_b g_ac − ∂_c g_ab), stored at (a, b, c)
Tensor dual_connection(const MetricChart& M);
// Γ^c_{ab} = g^{cd} Γ_{ab,d}, stored at (a, b, c)
Tensor christoffel(const MetricChart& M, const Tensor& first, const ExprMatrix& ginv);

Tensor riemann(const MetricChart& M, const Tensor& first, const Tensor& second);
Tensor ricci(const Tensor& K, const ExprMatrix& ginv);
Expr scalar(const Tensor& Ric, const ExprMatrix& ginv);
Tensor schouten(const Tensor& Ric, const Expr& Sc, const ExprMatrix& g);
// θ•ω(x,y,z,t) = θ(x,z)ω(y,t) − ω(x,t)θ(y,z) + ω(x,z)θ(y,t) − θ(x,t)ω(y,z)
Tensor kulkarni_nomizu(const Tensor& theta, const Tensor& omega);
// W = K − h•g and its (1,3) form raised in the second slot, stored at (a, e, c, d)
Tensor weyl(const Tensor& K, const Tensor& h, const ExprMatrix& g);
Tensor raise_second(const Tensor& W, const ExprMatrix& ginv);

Tensor metric_tensor(const ExprMatrix& g);

struct Connection {
    ExprMatrix ginv;
    Tensor first;   // Γ_{ab,c}
    Tensor second;  // Γ^c_{ab}
};

struct CurvatureBundle : Connection {
    Tensor K, Ric, h, W, Wup;
    Expr Sc;
};

Connection connection(const MetricChart& M);

// Everything in one pass; h needs m ≥ 3 and W, Wup need m ≥ 4 (left empty otherwise).
CurvatureBundle curvature(const MetricChart& M);

// T(E_a, E_b, ...) for a covariant tensor
Tensor in_frame(const Tensor& T, const std::vector<Vector>& E);

// Symmetry checks; return the first offending index tuple description or "".
std::string check_curvature_symmetries(const Tensor& T);
std::string check_trace_free(const Tensor& W, const ExprMatrix& ginv);

}  // namespace rlc
