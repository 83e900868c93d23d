#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "causal/diff_fn.hpp"
#include "causal/expr.hpp"
#include "causal/stream.hpp"

namespace causal {

/// Scalar Elman network
///   rho_k = act1(alpha s_k + beta rho_{k-1} + gamma),  rho_{-1} = 0
///   tau_k = act2(delta rho_k + epsilon)
struct ElmanParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.1;
  double delta = 1.0;
  double epsilon = -0.1;
  DiffFn act1 = prim::sigmoid();
  DiffFn act2 = prim::sigmoid();
};

enum class ElmanParam { kAlpha, kBeta, kGamma, kDelta, kEpsilon };

/// "alpha", "beta", ... Throws std::invalid_argument for other names.
ElmanParam parse_elman_param(std::string_view name);
std::string_view elman_param_name(ElmanParam which);

double get_param(const ElmanParams& p, ElmanParam which);
ElmanParams with_param(ElmanParams p, ElmanParam which, double value);

struct ElmanRun {
  Stream rho;
  Stream tau;
  std::optional<Stream> drho;
  std::optional<Stream> dtau;
};

/// map(g2) o rec_0(g1) with g1(x, y) = act1(alpha x + beta y + gamma) and g2(x) = act2(delta x + epsilon).
CausalExpr elman_expr(const ElmanParams& p);

/// Hidden and output streams computed directly from the recurrence.
ElmanRun elman_run(const ElmanParams& p, const Stream& input);

/// Derivative with respect to the input sequence:
///   drho_k = act1'(alpha s_k + beta rho_{k-1} + gamma) (alpha ds_k + beta drho_{k-1})
///   dtau_k = act2'(delta rho_k + epsilon) (delta drho_k)
ElmanRun elman_input_jvp(const ElmanParams& p, const Stream& input, const Stream& dinput);

/// Derivative with respect to one parameter, whose tangent is held constant
/// across the sequence. For alpha:
///   drho_k = act1'(alpha s_k + beta rho_{k-1} + gamma) (dalpha s_k + beta drho_{k-1})
/// and the same construction for the others.
ElmanRun elman_param_jvp(const ElmanParams& p, const Stream& input, ElmanParam which, double dparam);

/// The network with parameter `which` moved into a second input component.
/// Evaluated on zip(input, repeat(value)) it equals the network with that
/// parameter set to `value`.
CausalExpr elman_augmented_expr(const ElmanParams& p, ElmanParam which);

enum class ScaleRule {
  /// target / (largest observed per-entry change at the probe, rounded up to
  /// one significant digit)
  kRoundedBound,
  /// mean target change / mean predicted change at the probe
  kMeanRatio,
};

struct AdjustReport {
  ElmanParam which = ElmanParam::kAlpha;
  double param = 0.0;
  double probe = 0.0;
  int direction = 1;
  std::vector<double> base;            // E at the current parameter
  std::vector<double> desired_change;  // target - base
  std::vector<double> tangent;         // derivative applied to +probe

  double probe_param = 0.0;  // param + direction * probe
  std::vector<double> probe_predicted;
  std::vector<double> probe_actual;
  std::vector<double> probe_overshoot;  // actual change / predicted change

  double scale = 0.0;
  double new_param = 0.0;  // param + direction * scale * probe
  std::vector<double> predicted;
  std::vector<double> actual;
  std::vector<double> overshoot;  // actual change / predicted change
};

/// One linear-extrapolation step on a single parameter towards `target` over
/// the first `horizon` entries. The probe direction is flipped when the
/// derivative moves the output away from the target. Throws DomainError
/// ("gradient vanishes at probe") when the mean predicted change is below 1e-12.
AdjustReport adjust_step(const ElmanParams& p, const Stream& input, const Stream& target, ElmanParam which,
                         double probe, std::size_t horizon = 4, ScaleRule rule = ScaleRule::kRoundedBound);

/// As adjust_step, with the target given as a uniform shift of every entry.
AdjustReport adjust_step_by_shift(const ElmanParams& p, const Stream& input, double shift, ElmanParam which,
                                  double probe, std::size_t horizon = 4, ScaleRule rule = ScaleRule::kRoundedBound);

}  // namespace causal
