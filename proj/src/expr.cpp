#include "causal/expr.hpp"

#include <bit>
#include <charconv>
#include <sstream>

#include "causal/calculus.hpp"
#include "causal/errors.hpp"

namespace causal {

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kInput: return "Input";
    case NodeKind::kConstStream: return "ConstStream";
    case NodeKind::kXStream: return "XStream";
    case NodeKind::kPointwiseSum: return "PointwiseSum";
    case NodeKind::kScalarMul: return "ScalarMul";
    case NodeKind::kCauchy: return "Cauchy";
    case NodeKind::kHadamard: return "Hadamard";
    case NodeKind::kInverse: return "Inverse";
    case NodeKind::kMap: return "Map";
    case NodeKind::kRec: return "Rec";
    case NodeKind::kCompose: return "Compose";
    case NodeKind::kParallel: return "Parallel";
    case NodeKind::kPair: return "Pair";
    case NodeKind::kProj: return "Proj";
  }
  return "?";
}

namespace {

void require_positive(std::size_t n, const char* what) {
  if (n == 0) {
    throw DimensionError(std::string(what) + ": dimension must be positive");
  }
}

}  // namespace

CausalExpr CausalExpr::make(Node node) { return CausalExpr(std::make_shared<const Node>(std::move(node))); }

CausalExpr CausalExpr::input(std::size_t n) {
  require_positive(n, "Input");
  return make({.kind = NodeKind::kInput, .in_dim = n, .out_dim = n});
}

CausalExpr CausalExpr::constant(double r, std::size_t in_dim) {
  require_positive(in_dim, "ConstStream");
  return make({.kind = NodeKind::kConstStream, .in_dim = in_dim, .out_dim = 1, .scalar = r});
}

CausalExpr CausalExpr::x(std::size_t in_dim) {
  require_positive(in_dim, "XStream");
  return make({.kind = NodeKind::kXStream, .in_dim = in_dim, .out_dim = 1});
}

CausalExpr CausalExpr::pointwise_sum(std::size_t n) {
  require_positive(n, "PointwiseSum");
  return make({.kind = NodeKind::kPointwiseSum, .in_dim = 2 * n, .out_dim = n});
}

CausalExpr CausalExpr::scalar_mul(double r, std::size_t n) {
  require_positive(n, "ScalarMul");
  return make({.kind = NodeKind::kScalarMul, .in_dim = n, .out_dim = n, .scalar = r});
}

CausalExpr CausalExpr::cauchy() { return make({.kind = NodeKind::kCauchy, .in_dim = 2, .out_dim = 1}); }

CausalExpr CausalExpr::hadamard() { return make({.kind = NodeKind::kHadamard, .in_dim = 2, .out_dim = 1}); }

CausalExpr CausalExpr::inverse() { return make({.kind = NodeKind::kInverse, .in_dim = 1, .out_dim = 1}); }

CausalExpr CausalExpr::map(DiffFn prim) {
  const std::size_t in = prim.in_dim();
  const std::size_t out = prim.out_dim();
  return make({.kind = NodeKind::kMap, .in_dim = in, .out_dim = out, .prim = std::move(prim)});
}

CausalExpr CausalExpr::rec(DiffFn prim, Vec init) {
  const std::size_t m = init.size();
  if (m == 0 || prim.out_dim() != m || prim.in_dim() <= m) {
    throw DimensionError("Rec: primitive " + prim.name() + " must map R^n x R^" + std::to_string(m) + " to R^" +
                         std::to_string(m));
  }
  const std::size_t n = prim.in_dim() - m;
  return make({.kind = NodeKind::kRec, .in_dim = n, .out_dim = m, .prim = std::move(prim), .init = std::move(init)});
}

CausalExpr CausalExpr::compose(CausalExpr g, CausalExpr f) {
  if (f.out_dim() != g.in_dim()) {
    throw DimensionError("Compose: inner output dimension " + std::to_string(f.out_dim()) +
                         " differs from outer input dimension " + std::to_string(g.in_dim()));
  }
  const std::size_t in = f.in_dim();
  const std::size_t out = g.out_dim();
  return make({.kind = NodeKind::kCompose, .in_dim = in, .out_dim = out, .children = {std::move(g), std::move(f)}});
}

CausalExpr CausalExpr::parallel(CausalExpr f, CausalExpr h) {
  const std::size_t in = f.in_dim() + h.in_dim();
  const std::size_t out = f.out_dim() + h.out_dim();
  return make({.kind = NodeKind::kParallel, .in_dim = in, .out_dim = out, .children = {std::move(f), std::move(h)}});
}

CausalExpr CausalExpr::pair(CausalExpr f, CausalExpr g) {
  if (f.in_dim() != g.in_dim()) {
    throw DimensionError("Pair: input dimensions " + std::to_string(f.in_dim()) + " and " +
                         std::to_string(g.in_dim()) + " differ");
  }
  const std::size_t in = f.in_dim();
  const std::size_t out = f.out_dim() + g.out_dim();
  return make({.kind = NodeKind::kPair, .in_dim = in, .out_dim = out, .children = {std::move(f), std::move(g)}});
}

CausalExpr CausalExpr::proj(std::size_t lo, std::size_t hi, std::size_t in_dim) {
  if (lo >= hi || hi > in_dim) {
    throw DimensionError("Proj: range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         ") invalid for dimension " + std::to_string(in_dim));
  }
  return make({.kind = NodeKind::kProj, .in_dim = in_dim, .out_dim = hi - lo, .lo = lo, .hi = hi});
}

bool operator==(const CausalExpr& a, const CausalExpr& b) {
  if (a.node_ == b.node_) {
    return true;
  }
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.in_dim != y.in_dim || x.out_dim != y.out_dim || x.lo != y.lo || x.hi != y.hi ||
      std::bit_cast<std::uint64_t>(x.scalar) != std::bit_cast<std::uint64_t>(y.scalar) ||
      x.init != y.init || x.prim.has_value() != y.prim.has_value() || x.children.size() != y.children.size()) {
    return false;
  }
  if (x.prim && !x.prim->same_as(*y.prim)) {
    return false;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) {
      return false;
    }
  }
  return true;
}

namespace build {

CausalExpr sum(const CausalExpr& f, const CausalExpr& g) {
  if (f.out_dim() != g.out_dim()) {
    throw DimensionError("sum: output dimensions differ");
  }
  return CausalExpr::compose(CausalExpr::pointwise_sum(f.out_dim()), CausalExpr::pair(f, g));
}

CausalExpr scale(double r, const CausalExpr& f) {
  return CausalExpr::compose(CausalExpr::scalar_mul(r, f.out_dim()), f);
}

CausalExpr cauchy(const CausalExpr& f, const CausalExpr& g) {
  return CausalExpr::compose(CausalExpr::cauchy(), CausalExpr::pair(f, g));
}

CausalExpr hadamard(const CausalExpr& f, const CausalExpr& g) {
  return CausalExpr::compose(CausalExpr::hadamard(), CausalExpr::pair(f, g));
}

CausalExpr inverse(const CausalExpr& f) { return CausalExpr::compose(CausalExpr::inverse(), f); }

CausalExpr quotient(const CausalExpr& f, const CausalExpr& g) { return cauchy(f, inverse(g)); }

CausalExpr map(const DiffFn& prim, const CausalExpr& f) { return CausalExpr::compose(CausalExpr::map(prim), f); }

CausalExpr rec(const DiffFn& prim, const Vec& init, const CausalExpr& f) {
  return CausalExpr::compose(CausalExpr::rec(prim, init), f);
}

CausalExpr pair(const CausalExpr& f, const CausalExpr& g) { return CausalExpr::pair(f, g); }

}  // namespace build

namespace {

Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Stream eval_expr(const CausalExpr& e, const Stream& s) {
  if (s.dim() != e.in_dim()) {
    throw DimensionError(std::string(kind_name(e.kind())) + ": input stream has dimension " +
                         std::to_string(s.dim()) + ", expected " + std::to_string(e.in_dim()));
  }
  switch (e.kind()) {
    case NodeKind::kInput:
      return s;
    case NodeKind::kConstStream:
      return const_stream(e.scalar());
    case NodeKind::kXStream:
      return x_stream();
    case NodeKind::kPointwiseSum: {
      auto [a, b] = unzip(s, e.out_dim());
      return pointwise_add(a, b);
    }
    case NodeKind::kScalarMul:
      return scalar_mul(e.scalar(), s);
    case NodeKind::kCauchy: {
      auto [a, b] = unzip(s, 1);
      return cauchy(a, b);
    }
    case NodeKind::kHadamard: {
      auto [a, b] = unzip(s, 1);
      return hadamard(a, b);
    }
    case NodeKind::kInverse:
      try {
        return inverse(s);
      } catch (const DomainError& err) {
        if (err.node() == nullptr) {
          throw DomainError(err.what(), e.id());
        }
        throw;
      }
    case NodeKind::kMap: {
      const DiffFn prim = e.prim();
      return Stream::from_index(e.out_dim(), [prim, s](std::uint64_t k) {
        const Vec x = s.at(k);
        KinkScope::note(prim, x, k);
        return prim.eval(x);
      });
    }
    case NodeKind::kRec: {
      const DiffFn prim = e.prim();
      const Vec init = e.init();
      return Stream(e.out_dim(), [prim, init, s](std::uint64_t k, std::span<const Vec> prev) {
        const Vec x = concat(s.at(k), k == 0 ? init : prev[k - 1]);
        KinkScope::note(prim, x, k);
        return prim.eval(x);
      });
    }
    case NodeKind::kCompose:
      return eval_expr(e.child(0), eval_expr(e.child(1), s));
    case NodeKind::kParallel: {
      auto [a, b] = unzip(s, e.child(0).in_dim());
      return zip(eval_expr(e.child(0), a), eval_expr(e.child(1), b));
    }
    case NodeKind::kPair:
      return zip(eval_expr(e.child(0), s), eval_expr(e.child(1), s));
    case NodeKind::kProj:
      return project(s, e.proj_lo(), e.proj_hi());
  }
  throw std::logic_error("eval_expr: unhandled node kind");
}

CausalFn to_causal_fn(const CausalExpr& e) {
  return CausalFn{e.in_dim(), e.out_dim(), [e](const Stream& s) { return eval_expr(e, s); }};
}

namespace {

std::string number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

void render(const CausalExpr& e, std::ostringstream& out) {
  out << kind_name(e.kind()) << '(';
  switch (e.kind()) {
    case NodeKind::kInput:
    case NodeKind::kPointwiseSum:
    case NodeKind::kXStream:
      out << e.in_dim();
      break;
    case NodeKind::kConstStream:
      out << number(e.scalar()) << ", " << e.in_dim();
      break;
    case NodeKind::kScalarMul:
      out << number(e.scalar()) << ", " << e.out_dim();
      break;
    case NodeKind::kCauchy:
    case NodeKind::kHadamard:
    case NodeKind::kInverse:
      break;
    case NodeKind::kMap:
    case NodeKind::kRec: {
      out << e.prim().name();
      if (!e.prim().params().empty()) {
        out << '(';
        for (std::size_t i = 0; i < e.prim().params().size(); ++i) {
          out << (i ? ", " : "") << number(e.prim().params()[i]);
        }
        out << ')';
      }
      if (e.kind() == NodeKind::kRec) {
        out << ", [";
        for (std::size_t i = 0; i < e.init().size(); ++i) {
          out << (i ? ", " : "") << number(e.init()[i]);
        }
        out << ']';
      }
      break;
    }
    case NodeKind::kCompose:
    case NodeKind::kParallel:
    case NodeKind::kPair:
      render(e.child(0), out);
      out << ", ";
      render(e.child(1), out);
      break;
    case NodeKind::kProj:
      out << e.proj_lo() << ", " << e.proj_hi() << ", " << e.in_dim();
      break;
  }
  out << ')';
}

}  // namespace

std::string to_string(const CausalExpr& e) {
  std::ostringstream out;
  render(e, out);
  return out.str();
}

}  // namespace causal
