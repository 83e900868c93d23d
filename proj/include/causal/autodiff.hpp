#pragma once

#include "causal/diff_fn.hpp"
#include "causal/expr.hpp"
#include "causal/stream.hpp"

namespace causal {

/// A primal stream together with a tangent stream of the same dimension.
struct TangentPair {
  Stream primal;
  Stream tangent;
};

/// Forward-mode causal derivative: returns D e(s)(ds).
///
/// Each node applies its differentiation rule:
///   Input                  -> ds
///   ConstStream, XStream   -> zero
///   PointwiseSum, ScalarMul, Proj -> the node itself (linear)
///   Cauchy / Hadamard      -> da x b + a x db  /  da . b + a . db
///   Inverse                -> [-1] x s^-1 x s^-1 x ds
///   Map(h)                 -> entrywise Jh
///   Rec(g, i)              -> rec_jvp
///   Compose(g, f)          -> D g(f(s)) applied to D f(s)(ds)
///   Parallel / Pair        -> componentwise
Stream jvp_expr(const CausalExpr& e, const Stream& s, const Stream& ds);

/// As jvp_expr, also returning e(s).
TangentPair jvp_with_primal(const CausalExpr& e, const Stream& s, const Stream& ds);

/// Tangent of rec_init(prim) at s along ds, by the recurrence
///   tau_0   = g(s_0, init),        dtau_0   = Jg(s_0, init)(ds_0, 0)
///   tau_k+1 = g(s_k+1, tau_k),     dtau_k+1 = Jg(s_k+1, tau_k)(ds_k+1, dtau_k)
/// Entry k of the pair costs exactly one eval and one jvp of prim.
TangentPair rec_jvp(const DiffFn& prim, const Vec& init, const Stream& s, const Stream& ds);

}  // namespace causal
