#include "causal/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "causal/autodiff.hpp"
#include "causal/corpus.hpp"
#include "causal/diff_fn.hpp"
#include "causal/dsl.hpp"
#include "causal/elman.hpp"
#include "causal/errors.hpp"
#include "causal/jacobian.hpp"

namespace causal::cli {

using nlohmann::json;

std::string fixed5(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f", x);
  std::string out(buf);
  if (out == "-0.00000") {
    out.erase(0, 1);
  }
  return out;
}

namespace {

constexpr double kCheckAbsTol = 1e-5;
constexpr double kCheckRelTol = 1e-4;

std::map<std::string, dsl::StreamSpec> parse_bindings(const std::vector<std::string>& raw,
                                                      const std::vector<std::string>& inputs) {
  std::map<std::string, dsl::StreamSpec> out;
  for (const std::string& b : raw) {
    auto [name, spec] = dsl::parse_binding(b);
    if (std::find(inputs.begin(), inputs.end(), name) == inputs.end()) {
      throw std::invalid_argument("'" + name + "' is not an input of the expression");
    }
    out[name] = spec;
  }
  return out;
}

// Zips one scalar stream per program input, in input order.
Stream input_stream(const dsl::Program& prog, const std::map<std::string, dsl::StreamSpec>& bound,
                    const std::function<Stream(std::size_t, const std::string&)>& unbound) {
  if (prog.inputs.empty()) {
    return zero_stream(1);
  }
  std::vector<Stream> parts;
  for (std::size_t i = 0; i < prog.inputs.size(); ++i) {
    const auto it = bound.find(prog.inputs[i]);
    parts.push_back(it != bound.end() ? it->second.to_stream() : unbound(i, prog.inputs[i]));
  }
  Stream s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    s = zip(s, parts[i]);
  }
  return s;
}

std::string describe_location(const dsl::Program& prog, const DomainError& e) {
  const auto it = prog.locations.find(e.node());
  if (it == prog.locations.end()) {
    return "";
  }
  return " (at line " + std::to_string(it->second.line) + ", column " + std::to_string(it->second.column) + ")";
}

json vec_json(const Vec& v) { return json(v); }

// Shared error handling: maps exceptions to exit codes.
int guarded(std::ostream& err, const dsl::Program* prog, const std::function<int()>& body) {
  try {
    return body();
  } catch (const dsl::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const DomainError& e) {
    err << "domain error" << (prog ? describe_location(*prog, e) : "") << ": " << e.what() << '\n';
    return kDomainError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
}

void print_row(std::ostream& out, std::uint64_t k, const Vec& values, const Vec* tangents) {
  out << k;
  for (double x : values) out << '\t' << fixed5(x);
  if (tangents != nullptr) {
    out << "\t|";
    for (double x : *tangents) out << '\t' << fixed5(x);
  }
  out << '\n';
}

}  // namespace

int cmd_eval(const StreamOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<dsl::Program> prog;
  return guarded(err, nullptr, [&] {
    prog = dsl::parse(opt.expr);
    return guarded(err, &*prog, [&] {
      const auto bound = parse_bindings(opt.binds, prog->inputs);
      const Stream s = input_stream(*prog, bound, [](std::size_t, const std::string& name) -> Stream {
        throw std::invalid_argument("input '" + name + "' is not bound (use --bind " + name + "=spec)");
      });
      const Stream result = eval_expr(prog->expr, s);
      const Word rows = slice(result, 0, opt.depth);
      if (!opt.json) out << "k\tvalue\n";
      for (std::uint64_t k = 0; k < rows.size(); ++k) {
        if (opt.json) {
          out << json{{"index", k}, {"values", vec_json(rows[k])}}.dump() << '\n';
        } else {
          print_row(out, k, rows[k], nullptr);
        }
      }
      return static_cast<int>(kOk);
    });
  });
}

int cmd_diff(const StreamOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<dsl::Program> prog;
  return guarded(err, nullptr, [&] {
    prog = dsl::parse(opt.expr);
    return guarded(err, &*prog, [&] {
      const auto bound = parse_bindings(opt.binds, prog->inputs);
      const auto tangents = parse_bindings(opt.tangents, prog->inputs);
      const Stream s = input_stream(*prog, bound, [](std::size_t, const std::string& name) -> Stream {
        throw std::invalid_argument("input '" + name + "' is not bound (use --bind " + name + "=spec)");
      });
      const Stream ds = input_stream(*prog, tangents, [](std::size_t, const std::string&) { return zero_stream(1); });
      const TangentPair tp = jvp_with_primal(prog->expr, s, ds);
      if (!opt.json) out << "k\tvalue\t|\ttangent\n";
      for (std::uint64_t k = 0; k <= opt.depth; ++k) {
        const Vec v = tp.primal.at(k);
        const Vec t = tp.tangent.at(k);
        if (opt.json) {
          out << json{{"index", k}, {"values", vec_json(v)}, {"tangents", vec_json(t)}}.dump() << '\n';
        } else {
          print_row(out, k, v, &t);
        }
      }
      return static_cast<int>(kOk);
    });
  });
}

namespace {

struct CheckOutcome {
  JacobianComparison cmp;
  std::optional<std::uint64_t> kink;
};

CheckOutcome check_one(const CausalExpr& e, const Stream& s, std::uint64_t depth, double h) {
  CheckOutcome o;
  {
    KinkScope kinks;
    slice(eval_expr(e, s), 0, depth);
    o.kink = kinks.first_kink();
  }
  const TriJacobian rule = truncated_jacobian(e, s, depth);
  const TriJacobian fd = fd_jacobian(e, s, depth, h);
  o.cmp = compare_jacobians(rule, fd, kCheckAbsTol, kCheckRelTol, o.kink.value_or(UINT64_MAX));
  return o;
}

void report_check(std::ostream& out, std::ostream& err, const std::string& name, const CausalExpr& e,
                  const CheckOutcome& o, bool as_json) {
  const auto row = static_cast<std::uint64_t>(o.cmp.worst_row);
  const auto col = static_cast<std::uint64_t>(o.cmp.worst_col);
  const std::uint64_t bi = row / e.out_dim(), bj = col / e.in_dim();
  if (o.kink) {
    err << "warning: " << name << ": non-smooth primitive within 1e-3 of its kink at entry " << *o.kink
        << "; skipped " << o.cmp.skipped << " Jacobian entries in block rows >= " << *o.kink << '\n';
  }
  if (as_json) {
    json j{{"name", name},
           {"pass", o.cmp.within},
           {"max_abs_err", o.cmp.max_abs_err},
           {"worst", {{"block_row", bi}, {"block_col", bj}, {"rule", o.cmp.lhs}, {"fd", o.cmp.rhs}}},
           {"compared", o.cmp.compared},
           {"skipped", o.cmp.skipped}};
    out << j.dump() << '\n';
    return;
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-18s %s  max|rule-fd| = %.3e  worst at block (%llu,%llu): rule %.10g, fd %.10g",
                name.c_str(), o.cmp.within ? "PASS" : "FAIL", o.cmp.max_abs_err,
                static_cast<unsigned long long>(bi), static_cast<unsigned long long>(bj), o.cmp.lhs, o.cmp.rhs);
  out << buf;
  if (o.cmp.skipped > 0) out << "  (" << o.cmp.skipped << " skipped)";
  out << '\n';
}

}  // namespace

int cmd_check(const StreamOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.corpus) {
    return guarded(err, nullptr, [&] {
      bool all = true;
      std::uint64_t case_seed = opt.seed;
      for (const CorpusEntry& c : builtin_corpus()) {
        const Stream s = random_stream(c.expr.in_dim(), case_seed++);
        const CheckOutcome o = check_one(c.expr, s, opt.depth, opt.fd_step);
        report_check(out, err, c.name, c.expr, o, opt.json);
        all = all && o.cmp.within;
      }
      return static_cast<int>(all ? kOk : kCheckFailed);
    });
  }
  std::optional<dsl::Program> prog;
  return guarded(err, nullptr, [&] {
    prog = dsl::parse(opt.expr);
    return guarded(err, &*prog, [&] {
      const auto bound = parse_bindings(opt.binds, prog->inputs);
      const Stream s = input_stream(*prog, bound, [&](std::size_t i, const std::string&) {
        return random_stream(1, opt.seed + i);
      });
      const CheckOutcome o = check_one(prog->expr, s, opt.depth, opt.fd_step);
      report_check(out, err, opt.expr, prog->expr, o, opt.json);
      return static_cast<int>(o.cmp.within ? kOk : kCheckFailed);
    });
  });
}

namespace {

ElmanParams elman_params(const ElmanOptions& opt) {
  ElmanParams p;
  p.alpha = opt.alpha;
  p.beta = opt.beta;
  p.gamma = opt.gamma;
  p.delta = opt.delta;
  p.epsilon = opt.epsilon;
  p.act1 = prim::activation(opt.act1);
  p.act2 = prim::activation(opt.act2);
  return p;
}

void print_series(std::ostream& out, const std::string& label, const std::vector<double>& v) {
  out << label;
  for (double x : v) out << '\t' << fixed5(x);
  out << '\n';
}

}  // namespace

int cmd_elman_demo(const ElmanOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, nullptr, [&] {
    const ElmanParams p = elman_params(opt);
    const ElmanParam which = parse_elman_param(opt.param);
    const Stream input = dsl::parse_stream_spec(opt.input).to_stream();
    const ElmanRun run = elman_param_jvp(p, input, which, opt.probe);
    if (!opt.json) {
      out << "k\trho\ttau\td_rho\td_tau    (d" << elman_param_name(which) << " = " << opt.probe << ")\n";
    }
    for (std::uint64_t k = 0; k <= opt.depth; ++k) {
      const double rho = run.rho.scalar(k), tau = run.tau.scalar(k);
      const double drho = run.drho->scalar(k), dtau = run.dtau->scalar(k);
      if (opt.json) {
        out << json{{"index", k}, {"values", {rho, tau}}, {"tangents", {drho, dtau}}}.dump() << '\n';
      } else {
        out << k << '\t' << fixed5(rho) << '\t' << fixed5(tau) << '\t' << fixed5(drho) << '\t' << fixed5(dtau)
            << '\n';
      }
    }
    return static_cast<int>(kOk);
  });
}

int cmd_elman_adjust(const ElmanOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, nullptr, [&] {
    const ElmanParams p = elman_params(opt);
    const ElmanParam which = parse_elman_param(opt.param);
    const Stream input = dsl::parse_stream_spec(opt.input).to_stream();
    ScaleRule rule;
    if (opt.scale_rule == "bound") {
      rule = ScaleRule::kRoundedBound;
    } else if (opt.scale_rule == "mean") {
      rule = ScaleRule::kMeanRatio;
    } else {
      throw std::invalid_argument("unknown scale rule '" + opt.scale_rule + "' (bound | mean)");
    }
    const AdjustReport r =
        adjust_step_by_shift(p, input, opt.target_shift, which, opt.probe, static_cast<std::size_t>(opt.depth) + 1, rule);
    const std::string name(elman_param_name(which));
    if (opt.json) {
      json j{{"param", name},
             {"value", r.param},
             {"base", r.base},
             {"tangent", r.tangent},
             {"probe", {{"value", r.probe_param},
                        {"predicted", r.probe_predicted},
                        {"actual", r.probe_actual},
                        {"overshoot", r.probe_overshoot}}},
             {"step", {{"scale", r.scale},
                       {"value", r.new_param},
                       {"predicted", r.predicted},
                       {"actual", r.actual},
                       {"overshoot", r.overshoot}}}};
      out << j.dump() << '\n';
      return static_cast<int>(kOk);
    }
    out << name << " = " << r.param << ", target shift " << opt.target_shift << " per entry\n";
    print_series(out, "output    ", r.base);
    print_series(out, "tangent   ", r.tangent);
    out << "probe: " << name << " -> " << r.probe_param << '\n';
    print_series(out, "  predicted", r.probe_predicted);
    print_series(out, "  actual   ", r.probe_actual);
    print_series(out, "  overshoot", r.probe_overshoot);
    out << "step: scale " << r.scale << ", " << name << " -> " << r.new_param << '\n';
    print_series(out, "  predicted", r.predicted);
    print_series(out, "  actual   ", r.actual);
    print_series(out, "  overshoot", r.overshoot);
    return static_cast<int>(kOk);
  });
}

}  // namespace causal::cli
