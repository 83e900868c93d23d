#include "causal/elman.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "causal/errors.hpp"

namespace causal {

ElmanParam parse_elman_param(std::string_view name) {
  if (name == "alpha") return ElmanParam::kAlpha;
  if (name == "beta") return ElmanParam::kBeta;
  if (name == "gamma") return ElmanParam::kGamma;
  if (name == "delta") return ElmanParam::kDelta;
  if (name == "epsilon") return ElmanParam::kEpsilon;
  throw std::invalid_argument("unknown Elman parameter '" + std::string(name) + "'");
}

std::string_view elman_param_name(ElmanParam which) {
  switch (which) {
    case ElmanParam::kAlpha: return "alpha";
    case ElmanParam::kBeta: return "beta";
    case ElmanParam::kGamma: return "gamma";
    case ElmanParam::kDelta: return "delta";
    case ElmanParam::kEpsilon: return "epsilon";
  }
  return "?";
}

double get_param(const ElmanParams& p, ElmanParam which) {
  switch (which) {
    case ElmanParam::kAlpha: return p.alpha;
    case ElmanParam::kBeta: return p.beta;
    case ElmanParam::kGamma: return p.gamma;
    case ElmanParam::kDelta: return p.delta;
    case ElmanParam::kEpsilon: return p.epsilon;
  }
  return 0.0;
}

ElmanParams with_param(ElmanParams p, ElmanParam which, double value) {
  switch (which) {
    case ElmanParam::kAlpha: p.alpha = value; break;
    case ElmanParam::kBeta: p.beta = value; break;
    case ElmanParam::kGamma: p.gamma = value; break;
    case ElmanParam::kDelta: p.delta = value; break;
    case ElmanParam::kEpsilon: p.epsilon = value; break;
  }
  return p;
}

CausalExpr elman_expr(const ElmanParams& p) {
  return CausalExpr::compose(CausalExpr::map(prim::elman_output(p.delta, p.epsilon, p.act2)),
                             CausalExpr::rec(prim::elman_cell(p.alpha, p.beta, p.gamma, p.act1), Vec{0.0}));
}

namespace {

double act(const DiffFn& f, double x) { return f.eval(std::span<const double>(&x, 1))[0]; }

double act_jvp(const DiffFn& f, double x, double dx) {
  return f.jvp(std::span<const double>(&x, 1), std::span<const double>(&dx, 1))[0];
}

// Tangent source terms of one recurrence step, given s_k, rho_{k-1}, rho_k.
// hidden: added to beta * drho_{k-1} inside act1'; output: added to delta * drho_k inside act2'.
struct TangentTerms {
  std::function<double(std::uint64_t k, double s, double rho_prev)> hidden;
  std::function<double(std::uint64_t k, double rho)> output;
};

// State entries are (rho, tau, drho, dtau).
ElmanRun run_recurrence(const ElmanParams& p, const Stream& input, std::optional<TangentTerms> terms) {
  if (input.dim() != 1) {
    throw DimensionError("Elman network takes a scalar input stream");
  }
  const std::size_t dim = terms ? 4 : 2;
  Stream state(dim, [p, input, terms](std::uint64_t k, std::span<const Vec> prev) {
    const double s = input.scalar(k);
    const double rho_prev = k == 0 ? 0.0 : prev[k - 1][0];
    const double pre = k == 0 ? p.alpha * s + p.gamma : p.alpha * s + p.beta * rho_prev + p.gamma;
    const double rho = act(p.act1, pre);
    const double out_pre = p.delta * rho + p.epsilon;
    const double tau = act(p.act2, out_pre);
    if (!terms) {
      return Vec{rho, tau};
    }
    const double hidden = terms->hidden(k, s, rho_prev);
    const double dpre = k == 0 ? hidden : hidden + p.beta * prev[k - 1][2];
    const double drho = act_jvp(p.act1, pre, dpre);
    const double dtau = act_jvp(p.act2, out_pre, p.delta * drho + terms->output(k, rho));
    return Vec{rho, tau, drho, dtau};
  });
  ElmanRun run{project(state, 0, 1), project(state, 1, 2), std::nullopt, std::nullopt};
  if (terms) {
    run.drho = project(state, 2, 3);
    run.dtau = project(state, 3, 4);
  }
  return run;
}

}  // namespace

ElmanRun elman_run(const ElmanParams& p, const Stream& input) { return run_recurrence(p, input, std::nullopt); }

ElmanRun elman_input_jvp(const ElmanParams& p, const Stream& input, const Stream& dinput) {
  if (dinput.dim() != 1) {
    throw DimensionError("Elman network takes a scalar tangent stream");
  }
  const double alpha = p.alpha;
  TangentTerms terms{[alpha, dinput](std::uint64_t k, double, double) { return alpha * dinput.scalar(k); },
                     [](std::uint64_t, double) { return 0.0; }};
  return run_recurrence(p, input, terms);
}

ElmanRun elman_param_jvp(const ElmanParams& p, const Stream& input, ElmanParam which, double dparam) {
  auto none_hidden = [](std::uint64_t, double, double) { return 0.0; };
  auto none_output = [](std::uint64_t, double) { return 0.0; };
  TangentTerms terms{none_hidden, none_output};
  switch (which) {
    case ElmanParam::kAlpha:
      terms.hidden = [dparam](std::uint64_t, double s, double) { return dparam * s; };
      break;
    case ElmanParam::kBeta:
      terms.hidden = [dparam](std::uint64_t, double, double rho_prev) { return dparam * rho_prev; };
      break;
    case ElmanParam::kGamma:
      terms.hidden = [dparam](std::uint64_t, double, double) { return dparam; };
      break;
    case ElmanParam::kDelta:
      terms.output = [dparam](std::uint64_t, double rho) { return dparam * rho; };
      break;
    case ElmanParam::kEpsilon:
      terms.output = [dparam](std::uint64_t, double) { return dparam; };
      break;
  }
  return run_recurrence(p, input, terms);
}

namespace {

// Hidden cell with one parameter read from its input: (x, theta, y) -> act1(...).
DiffFn augmented_cell(const ElmanParams& p, ElmanParam which) {
  const double a = p.alpha, b = p.beta, c = p.gamma;
  const DiffFn f = p.act1;
  // Returns (pre, dpre) for point (x, t, y) and tangent (dx, dt, dy).
  std::function<std::pair<double, double>(std::span<const double>, std::span<const double>)> lin;
  switch (which) {
    case ElmanParam::kAlpha:
      lin = [b, c](std::span<const double> v, std::span<const double> dv) {
        return std::pair{v[1] * v[0] + b * v[2] + c, dv[1] * v[0] + v[1] * dv[0] + b * dv[2]};
      };
      break;
    case ElmanParam::kBeta:
      lin = [a, c](std::span<const double> v, std::span<const double> dv) {
        return std::pair{a * v[0] + v[1] * v[2] + c, a * dv[0] + dv[1] * v[2] + v[1] * dv[2]};
      };
      break;
    case ElmanParam::kGamma:
      lin = [a, b](std::span<const double> v, std::span<const double> dv) {
        return std::pair{a * v[0] + b * v[2] + v[1], a * dv[0] + b * dv[2] + dv[1]};
      };
      break;
    default:
      throw std::logic_error("augmented_cell: parameter does not enter the hidden cell");
  }
  return DiffFn(
      "elman1_" + std::string(elman_param_name(which)) + "_input", {}, 3, 1,
      [f, lin](std::span<const double> v) {
        const Vec zero(3, 0.0);
        const double pre = lin(v, zero).first;
        return f.eval(std::span<const double>(&pre, 1));
      },
      [f, lin](std::span<const double> v, std::span<const double> dv) {
        const auto [pre, dpre] = lin(v, dv);
        return f.jvp(std::span<const double>(&pre, 1), std::span<const double>(&dpre, 1));
      });
}

// Output cell with one parameter read from its input: (r, theta) -> act2(...).
DiffFn augmented_output(const ElmanParams& p, ElmanParam which) {
  const double d = p.delta, e = p.epsilon;
  const DiffFn f = p.act2;
  const bool is_delta = which == ElmanParam::kDelta;
  auto lin = [d, e, is_delta](std::span<const double> v, std::span<const double> dv) {
    return is_delta ? std::pair{v[1] * v[0] + e, dv[1] * v[0] + v[1] * dv[0]}
                    : std::pair{d * v[0] + v[1], d * dv[0] + dv[1]};
  };
  return DiffFn(
      "elman2_" + std::string(elman_param_name(which)) + "_input", {}, 2, 1,
      [f, lin](std::span<const double> v) {
        const Vec zero(2, 0.0);
        const double pre = lin(v, zero).first;
        return f.eval(std::span<const double>(&pre, 1));
      },
      [f, lin](std::span<const double> v, std::span<const double> dv) {
        const auto [pre, dpre] = lin(v, dv);
        return f.jvp(std::span<const double>(&pre, 1), std::span<const double>(&dpre, 1));
      });
}

}  // namespace

CausalExpr elman_augmented_expr(const ElmanParams& p, ElmanParam which) {
  switch (which) {
    case ElmanParam::kAlpha:
    case ElmanParam::kBeta:
    case ElmanParam::kGamma:
      return CausalExpr::compose(CausalExpr::map(prim::elman_output(p.delta, p.epsilon, p.act2)),
                                 CausalExpr::rec(augmented_cell(p, which), Vec{0.0}));
    case ElmanParam::kDelta:
    case ElmanParam::kEpsilon: {
      const CausalExpr hidden =
          CausalExpr::compose(CausalExpr::rec(prim::elman_cell(p.alpha, p.beta, p.gamma, p.act1), Vec{0.0}),
                              CausalExpr::proj(0, 1, 2));
      return CausalExpr::compose(CausalExpr::map(augmented_output(p, which)),
                                 CausalExpr::pair(hidden, CausalExpr::proj(1, 2, 2)));
    }
  }
  throw std::logic_error("elman_augmented_expr: unknown parameter");
}

namespace {

std::vector<double> entries(const Stream& s, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = s.scalar(k);
  }
  return out;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// Smallest d * 10^e >= x with a single significant digit d.
double round_up_one_digit(double x) {
  const int e = static_cast<int>(std::floor(std::log10(x)));
  const double unit = e < 0 ? 1.0 / std::pow(10.0, -e) : std::pow(10.0, e);
  double digit = std::ceil(x / unit);
  if (digit * unit < x) {
    digit += 1.0;
  }
  return e < 0 ? digit / std::pow(10.0, -e) : digit * unit;
}

std::vector<double> ratios(const std::vector<double>& actual, const std::vector<double>& base,
                           const std::vector<double>& predicted_change) {
  std::vector<double> out(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    out[k] = (actual[k] - base[k]) / predicted_change[k];
  }
  return out;
}

AdjustReport adjust(const ElmanParams& p, const Stream& input, std::vector<double> base,
                    std::vector<double> desired, ElmanParam which, double probe, ScaleRule rule) {
  const std::size_t horizon = base.size();
  AdjustReport r;
  r.which = which;
  r.param = get_param(p, which);
  r.probe = probe;
  r.base = std::move(base);
  r.desired_change = std::move(desired);
  r.tangent = entries(*elman_param_jvp(p, input, which, probe).dtau, horizon);

  const double mean_pred = mean(r.tangent);
  if (!(std::abs(mean_pred) >= 1e-12)) {
    throw DomainError("gradient vanishes at probe");
  }
  const double mean_desired = mean(r.desired_change);
  r.direction = (mean_desired < 0.0) == (mean_pred < 0.0) ? 1 : -1;

  std::vector<double> probe_change(horizon);
  r.probe_param = r.param + r.direction * probe;
  r.probe_predicted.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    probe_change[k] = r.direction * r.tangent[k];
    r.probe_predicted[k] = r.base[k] + probe_change[k];
  }
  r.probe_actual = entries(elman_run(with_param(p, which, r.probe_param), input).tau, horizon);
  r.probe_overshoot = ratios(r.probe_actual, r.base, probe_change);

  if (rule == ScaleRule::kMeanRatio) {
    r.scale = std::abs(mean_desired) / std::abs(mean_pred);
  } else {
    double largest = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) {
      largest = std::max(largest, std::abs(r.probe_actual[k] - r.base[k]));
    }
    if (!(largest >= 1e-12)) {
      throw DomainError("gradient vanishes at probe");
    }
    r.scale = std::abs(mean_desired) / round_up_one_digit(largest);
  }

  r.new_param = r.param + r.direction * (r.scale * probe);
  std::vector<double> change(horizon);
  r.predicted.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    change[k] = r.direction * r.scale * r.tangent[k];
    r.predicted[k] = r.base[k] + change[k];
  }
  r.actual = entries(elman_run(with_param(p, which, r.new_param), input).tau, horizon);
  r.overshoot = ratios(r.actual, r.base, change);
  return r;
}

}  // namespace

AdjustReport adjust_step(const ElmanParams& p, const Stream& input, const Stream& target, ElmanParam which,
                         double probe, std::size_t horizon, ScaleRule rule) {
  if (horizon < 1) {
    throw std::invalid_argument("adjust_step: horizon must be at least 1");
  }
  std::vector<double> base = entries(elman_run(p, input).tau, horizon);
  std::vector<double> desired(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    desired[k] = target.scalar(k) - base[k];
  }
  return adjust(p, input, std::move(base), std::move(desired), which, probe, rule);
}

AdjustReport adjust_step_by_shift(const ElmanParams& p, const Stream& input, double shift, ElmanParam which,
                                  double probe, std::size_t horizon, ScaleRule rule) {
  if (horizon < 1) {
    throw std::invalid_argument("adjust_step: horizon must be at least 1");
  }
  std::vector<double> base = entries(elman_run(p, input).tau, horizon);
  return adjust(p, input, std::move(base), std::vector<double>(horizon, shift), which, probe, rule);
}

}  // namespace causal
