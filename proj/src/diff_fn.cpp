#include "causal/diff_fn.hpp"

#include <cmath>
#include <string>

#include "causal/errors.hpp"

namespace causal {

namespace {

thread_local PrimCounts* active_counts = nullptr;
thread_local int call_depth = 0;
thread_local KinkScope* active_kinks = nullptr;

struct CallGuard {
  CallGuard() { ++call_depth; }
  ~CallGuard() { --call_depth; }
};

void check_len(const std::string& name, std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(name + ": " + what + " has dimension " + std::to_string(v.size()) + ", expected " +
                         std::to_string(n));
  }
}

// R -> R primitive from a value and a derivative.
DiffFn scalar_fn(std::string name, std::vector<double> params, std::function<double(double)> f,
                 std::function<double(double)> df, DiffFn::KinkFn kink = {}) {
  return DiffFn(
      std::move(name), std::move(params), 1, 1, [f](std::span<const double> x) { return Vec{f(x[0])}; },
      [df](std::span<const double> x, std::span<const double> dx) { return Vec{df(x[0]) * dx[0]}; },
      std::move(kink));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

DiffFn::DiffFn(std::string name, std::vector<double> params, std::size_t in_dim, std::size_t out_dim, EvalFn eval,
               JvpFn jvp, KinkFn kink)
    : name_(std::move(name)),
      params_(std::move(params)),
      in_dim_(in_dim),
      out_dim_(out_dim),
      eval_(std::move(eval)),
      jvp_(std::move(jvp)),
      kink_(std::move(kink)) {}

Vec DiffFn::eval(std::span<const double> x) const {
  check_len(name_, x, in_dim_, "point");
  if (active_counts != nullptr && call_depth == 0) {
    ++active_counts->eval;
  }
  CallGuard guard;
  return eval_(x);
}

Vec DiffFn::jvp(std::span<const double> x, std::span<const double> dx) const {
  check_len(name_, x, in_dim_, "point");
  check_len(name_, dx, in_dim_, "tangent");
  if (active_counts != nullptr && call_depth == 0) {
    ++active_counts->jvp;
  }
  CallGuard guard;
  return jvp_(x, dx);
}

double DiffFn::derivative(double x) const {
  const double one = 1.0;
  return jvp(std::span<const double>(&x, 1), std::span<const double>(&one, 1)).at(0);
}

namespace prim {

DiffFn identity() {
  return scalar_fn("id", {}, [](double x) { return x; }, [](double) { return 1.0; });
}

DiffFn affine(double a, double b) {
  return scalar_fn("affine", {a, b}, [a, b](double x) { return a * x + b; }, [a](double) { return a; });
}

DiffFn sigmoid() {
  return scalar_fn("sigmoid", {}, logistic, [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
  });
}

DiffFn tanh() {
  return scalar_fn("tanh", {}, [](double x) { return std::tanh(x); }, [](double x) {
    const double t = std::tanh(x);
    return 1.0 - t * t;
  });
}

DiffFn exp() {
  return scalar_fn("exp", {}, [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); });
}

DiffFn square() {
  return scalar_fn("square", {}, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

DiffFn relu() {
  return scalar_fn("relu", {}, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x) { return x > 0.0 ? 1.0 : 0.0; },
                   [](std::span<const double> x, double tol) { return std::abs(x[0]) <= tol; });
}

DiffFn mul2() {
  return DiffFn(
      "mul2", {}, 2, 1, [](std::span<const double> x) { return Vec{x[0] * x[1]}; },
      [](std::span<const double> x, std::span<const double> dx) { return Vec{dx[0] * x[1] + x[0] * dx[1]}; });
}

DiffFn add2() {
  return DiffFn(
      "add2", {}, 2, 1, [](std::span<const double> x) { return Vec{x[0] + x[1]}; },
      [](std::span<const double>, std::span<const double> dx) { return Vec{dx[0] + dx[1]}; });
}

DiffFn elman_cell(double a, double b, double c, const DiffFn& act) {
  std::string name = act.name() == "sigmoid" ? "elman1" : "elman1_" + act.name();
  DiffFn::KinkFn kink;
  if (!act.smooth()) {
    kink = [act, a, b, c](std::span<const double> x, double tol) {
      const double pre = a * x[0] + b * x[1] + c;
      return act.near_kink(std::span<const double>(&pre, 1), tol);
    };
  }
  return DiffFn(
      std::move(name), {a, b, c}, 2, 1,
      [act, a, b, c](std::span<const double> x) {
        const double pre = a * x[0] + b * x[1] + c;
        return act.eval(std::span<const double>(&pre, 1));
      },
      [act, a, b, c](std::span<const double> x, std::span<const double> dx) {
        const double pre = a * x[0] + b * x[1] + c;
        const double dpre = a * dx[0] + b * dx[1];
        return act.jvp(std::span<const double>(&pre, 1), std::span<const double>(&dpre, 1));
      },
      std::move(kink));
}

DiffFn elman_output(double d, double e, const DiffFn& act) {
  std::string name = act.name() == "sigmoid" ? "elman2" : "elman2_" + act.name();
  DiffFn::KinkFn kink;
  if (!act.smooth()) {
    kink = [act, d, e](std::span<const double> x, double tol) {
      const double pre = d * x[0] + e;
      return act.near_kink(std::span<const double>(&pre, 1), tol);
    };
  }
  return DiffFn(
      std::move(name), {d, e}, 1, 1,
      [act, d, e](std::span<const double> x) {
        const double pre = d * x[0] + e;
        return act.eval(std::span<const double>(&pre, 1));
      },
      [act, d, e](std::span<const double> x, std::span<const double> dx) {
        const double pre = d * x[0] + e;
        const double dpre = d * dx[0];
        return act.jvp(std::span<const double>(&pre, 1), std::span<const double>(&dpre, 1));
      },
      std::move(kink));
}

DiffFn activation(std::string_view name) {
  if (name == "id") return identity();
  if (name == "sigmoid") return sigmoid();
  if (name == "tanh") return tanh();
  if (name == "exp") return exp();
  if (name == "square") return square();
  if (name == "relu") return relu();
  throw UnknownPrimitive("unknown activation '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::size_t>> registry() {
  return {{"id", 0},     {"sigmoid", 0}, {"tanh", 0}, {"exp", 0},    {"square", 0},
          {"relu", 0},   {"mul2", 0},    {"add2", 0}, {"affine", 2}, {"elman1", 3},
          {"elman2", 2}};
}

DiffFn lookup(std::string_view name, std::span<const double> args) {
  auto arity = [&](std::size_t n) {
    if (args.size() != n) {
      throw ArityError("primitive '" + std::string(name) + "' takes " + std::to_string(n) + " argument(s), got " +
                       std::to_string(args.size()));
    }
  };
  // elman1_<act> / elman2_<act> select a non-sigmoid activation.
  for (std::string_view cell : {"elman1", "elman2"}) {
    if (name.substr(0, cell.size()) != cell) {
      continue;
    }
    std::string_view rest = name.substr(cell.size());
    DiffFn act = sigmoid();
    if (!rest.empty()) {
      if (rest.front() != '_') {
        break;
      }
      act = activation(rest.substr(1));
    }
    if (cell == "elman1") {
      arity(3);
      return elman_cell(args[0], args[1], args[2], act);
    }
    arity(2);
    return elman_output(args[0], args[1], act);
  }
  if (name == "affine") {
    arity(2);
    return affine(args[0], args[1]);
  }
  if (name == "mul2") {
    arity(0);
    return mul2();
  }
  if (name == "add2") {
    arity(0);
    return add2();
  }
  DiffFn act = [&] {
    try {
      return activation(name);
    } catch (const UnknownPrimitive&) {
      throw UnknownPrimitive("unknown primitive '" + std::string(name) + "'");
    }
  }();
  arity(0);
  return act;
}

}  // namespace prim

PrimCountScope::PrimCountScope() : previous_(active_counts) { active_counts = &counts_; }

PrimCountScope::~PrimCountScope() {
  active_counts = previous_;
  if (previous_ != nullptr) {
    previous_->eval += counts_.eval;
    previous_->jvp += counts_.jvp;
  }
}

KinkScope::KinkScope(double tol) : tol_(tol), previous_(active_kinks) { active_kinks = this; }

KinkScope::~KinkScope() { active_kinks = previous_; }

void KinkScope::note(const DiffFn& f, std::span<const double> x, std::uint64_t index) {
  KinkScope* scope = active_kinks;
  if (scope == nullptr || f.smooth() || !f.near_kink(x, scope->tol_)) {
    return;
  }
  if (!scope->first_ || index < *scope->first_) {
    scope->first_ = index;
  }
}

}  // namespace causal
