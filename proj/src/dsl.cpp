#include "causal/dsl.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "causal/diff_fn.hpp"
#include "causal/errors.hpp"

namespace causal::dsl {

ParseError::ParseError(Kind kind, const std::string& message, Location where)
    : std::runtime_error("line " + std::to_string(where.line) + ", column " + std::to_string(where.column) + ": " +
                         message),
      kind_(kind),
      where_(where) {}

std::string format_number(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("non-finite number cannot be printed");
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

namespace {

enum class Tok { kIdent, kNumber, kSymbol, kEnd };

struct Token {
  Tok type;
  std::string text;
  double value = 0.0;
  Location where;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  Location loc;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const Location start = loc;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), 0.0, start});
      advance(j - i);
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == '.' && is_digit(src[j + 1])) {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          while (k < src.size() && is_digit(src[k])) ++k;
          j = k;
        }
      }
      Token t{Tok::kNumber, std::string(src.substr(i, j - i)), 0.0, start};
      auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, t.value);
      if (ec != std::errc() || ptr != src.data() + j) {
        throw ParseError(ParseError::Kind::kSyntax, "malformed number '" + t.text + "'", start);
      }
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::string_view("+-*.()[],").find(c) != std::string_view::npos) {
      out.push_back({Tok::kSymbol, std::string(1, c), 0.0, start});
      advance(1);
      continue;
    }
    throw ParseError(ParseError::Kind::kSyntax, std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::kEnd, "", 0.0, loc});
  return out;
}

bool is_keyword(const std::string& s) { return s == "inv" || s == "map" || s == "rec" || s == "X"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    // Identifiers in primitive position are not inputs.
    for (std::size_t t = 0; t < toks_.size(); ++t) {
      const Token& tk = toks_[t];
      if (tk.type != Tok::kIdent || is_keyword(tk.text)) continue;
      const bool prim_pos = t >= 2 && toks_[t - 1].text == "(" && toks_[t - 1].type == Tok::kSymbol &&
                            toks_[t - 2].type == Tok::kIdent &&
                            (toks_[t - 2].text == "map" || toks_[t - 2].text == "rec");
      if (!prim_pos && std::find(inputs_.begin(), inputs_.end(), tk.text) == inputs_.end()) {
        inputs_.push_back(tk.text);
      }
    }
    dim_ = std::max<std::size_t>(1, inputs_.size());
  }

  Program run(std::string_view source) {
    CausalExpr e = expr();
    if (peek().type != Tok::kEnd) {
      fail("unexpected '" + peek().text + "' after expression");
    }
    return Program{std::string(source), std::move(e), inputs_, std::move(locations_)};
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  bool at_symbol(char c) const { return peek().type == Tok::kSymbol && peek().text[0] == c; }

  [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::kSyntax) const {
    throw ParseError(kind, msg, peek().where);
  }

  void expect(char c) {
    if (!at_symbol(c)) {
      fail(std::string("expected '") + c + "'" + (peek().type == Tok::kEnd ? " before end of input" : ", found '" + peek().text + "'"));
    }
    next();
  }

  template <class F>
  CausalExpr guarded(Location where, F&& build) {
    try {
      return build();
    } catch (const DimensionError& e) {
      throw ParseError(ParseError::Kind::kDimension, e.what(), where);
    }
  }

  double number() {
    bool negative = false;
    if (at_symbol('-')) {
      next();
      negative = true;
    }
    if (peek().type != Tok::kNumber) {
      fail("expected a number");
    }
    const double v = next().value;
    return negative ? -v : v;
  }

  bool at_number() const {
    return peek().type == Tok::kNumber ||
           (at_symbol('-') && pos_ + 1 < toks_.size() && toks_[pos_ + 1].type == Tok::kNumber);
  }

  CausalExpr expr() {
    CausalExpr lhs = term();
    while (at_symbol('+') || at_symbol('-')) {
      const Location where = peek().where;
      const bool minus = next().text == "-";
      CausalExpr rhs = term();
      lhs = guarded(where, [&] { return build::sum(lhs, minus ? build::scale(-1.0, rhs) : rhs); });
    }
    return lhs;
  }

  CausalExpr term() {
    CausalExpr lhs = factor();
    while (at_symbol('*') || at_symbol('.')) {
      const Location where = peek().where;
      const bool is_cauchy = next().text == "*";
      CausalExpr rhs = factor();
      lhs = guarded(where, [&] { return is_cauchy ? build::cauchy(lhs, rhs) : build::hadamard(lhs, rhs); });
    }
    return lhs;
  }

  DiffFn primitive() {
    const Location where = peek().where;
    if (peek().type != Tok::kIdent) {
      fail("expected a primitive name");
    }
    const std::string name = next().text;
    std::vector<double> args;
    if (at_symbol('(')) {
      next();
      args.push_back(number());
      while (at_symbol(',')) {
        next();
        args.push_back(number());
      }
      expect(')');
    }
    try {
      return prim::lookup(name, args);
    } catch (const UnknownPrimitive& e) {
      throw ParseError(ParseError::Kind::kUnknownPrimitive, e.what(), where);
    } catch (const ArityError& e) {
      throw ParseError(ParseError::Kind::kArity, e.what(), where);
    }
  }

  CausalExpr factor() {
    const Token& tk = peek();
    const Location where = tk.where;
    if (at_number()) {
      const double r = number();
      if (at_symbol('+') || at_symbol('*') || at_symbol('.') || at_symbol(')') || at_symbol(',') ||
          peek().type == Tok::kEnd) {
        throw ParseError(ParseError::Kind::kSyntax, "a number must be followed by a factor (use [r] for constants)",
                         where);
      }
      CausalExpr f = factor();
      return build::scale(r, f);
    }
    if (tk.type == Tok::kIdent) {
      const std::string name = next().text;
      if (name == "inv") {
        expect('(');
        CausalExpr inner = expr();
        expect(')');
        return guarded(where, [&] {
          CausalExpr leaf = CausalExpr::inverse();
          locations_[leaf.id()] = where;
          return CausalExpr::compose(leaf, inner);
        });
      }
      if (name == "map") {
        expect('(');
        DiffFn p = primitive();
        expect(')');
        expect('(');
        CausalExpr inner = expr();
        expect(')');
        return guarded(where, [&] { return build::map(p, inner); });
      }
      if (name == "rec") {
        expect('(');
        DiffFn p = primitive();
        expect(',');
        Vec init;
        if (at_symbol('(')) {
          next();
          init.push_back(number());
          while (at_symbol(',')) {
            next();
            init.push_back(number());
          }
          expect(')');
        } else {
          init.push_back(number());
        }
        expect(')');
        expect('(');
        CausalExpr inner = expr();
        expect(')');
        return guarded(where, [&] { return build::rec(p, init, inner); });
      }
      if (name == "X") {
        return CausalExpr::x(dim_);
      }
      const auto it = std::find(inputs_.begin(), inputs_.end(), name);
      const std::size_t idx = static_cast<std::size_t>(it - inputs_.begin());
      return inputs_.size() == 1 ? CausalExpr::input(1) : CausalExpr::proj(idx, idx + 1, dim_);
    }
    if (at_symbol('[')) {
      next();
      const double r = number();
      expect(']');
      return CausalExpr::constant(r, dim_);
    }
    if (at_symbol('(')) {
      next();
      CausalExpr first = expr();
      if (at_symbol(',')) {
        next();
        CausalExpr second = expr();
        expect(')');
        return guarded(where, [&] { return build::pair(first, second); });
      }
      expect(')');
      return first;
    }
    if (tk.type == Tok::kEnd) {
      fail("unexpected end of input");
    }
    fail("unexpected '" + tk.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> inputs_;
  std::size_t dim_ = 1;
  std::map<const void*, Location> locations_;
};

// Recognizers for the applicative forms produced by `build`.

bool is_compose_of(const CausalExpr& e, NodeKind outer) {
  return e.kind() == NodeKind::kCompose && e.child(0).kind() == outer;
}

bool is_binary(const CausalExpr& e, NodeKind op) {
  return is_compose_of(e, op) && e.child(1).kind() == NodeKind::kPair;
}

bool is_sum(const CausalExpr& e) { return is_binary(e, NodeKind::kPointwiseSum) && e.child(0).out_dim() == 1; }

class Printer {
 public:
  explicit Printer(std::span<const std::string> inputs) : inputs_(inputs) {}

  // level 0: sum position, 1: product operand (left), 2: factor.
  std::string print(const CausalExpr& e, int level) {
    if (e.out_dim() != 1) {
      if (e.kind() == NodeKind::kPair) {
        return "(" + print(e.child(0), 0) + ", " + print(e.child(1), 0) + ")";
      }
      unsupported(e);
    }
    switch (e.kind()) {
      case NodeKind::kInput:
        if (inputs_.size() != 1) unsupported(e);
        return inputs_[0];
      case NodeKind::kProj:
        if (e.proj_hi() != e.proj_lo() + 1 || e.in_dim() != inputs_.size()) unsupported(e);
        return inputs_[e.proj_lo()];
      case NodeKind::kConstStream:
        return "[" + format_number(e.scalar()) + "]";
      case NodeKind::kXStream:
        return "X";
      case NodeKind::kCompose:
        return compose(e, level);
      default:
        unsupported(e);
    }
  }

 private:
  [[noreturn]] static void unsupported(const CausalExpr& e) {
    throw std::invalid_argument("expression has no surface syntax: " + to_string(e));
  }

  std::string compose(const CausalExpr& e, int level) {
    const CausalExpr& outer = e.child(0);
    const CausalExpr& inner = e.child(1);
    auto wrap = [&](std::string s, int needed) { return level > needed ? "(" + s + ")" : s; };
    if (is_sum(e)) {
      const CausalExpr& a = inner.child(0);
      const CausalExpr& b = inner.child(1);
      if (is_compose_of(b, NodeKind::kScalarMul) && std::bit_cast<std::uint64_t>(b.child(0).scalar()) ==
                                                        std::bit_cast<std::uint64_t>(-1.0)) {
        return wrap(print(a, 0) + " - " + print(b.child(1), 1), 0);
      }
      return wrap(print(a, 0) + " + " + print(b, 1), 0);
    }
    if (is_binary(e, NodeKind::kCauchy)) {
      return wrap(print(inner.child(0), 1) + " * " + print(inner.child(1), 2), 1);
    }
    if (is_binary(e, NodeKind::kHadamard)) {
      return wrap(print(inner.child(0), 1) + " . " + print(inner.child(1), 2), 1);
    }
    switch (outer.kind()) {
      case NodeKind::kScalarMul:
        return format_number(outer.scalar()) + " " + print(inner, 2);
      case NodeKind::kInverse:
        return "inv(" + print(inner, 0) + ")";
      case NodeKind::kMap:
        return "map(" + prim(outer.prim()) + ")(" + print(inner, 0) + ")";
      case NodeKind::kRec: {
        std::string init;
        if (outer.init().size() == 1) {
          init = format_number(outer.init()[0]);
        } else {
          init = "(";
          for (std::size_t i = 0; i < outer.init().size(); ++i) {
            init += (i ? ", " : "") + format_number(outer.init()[i]);
          }
          init += ")";
        }
        return "rec(" + prim(outer.prim()) + ", " + init + ")(" + print(inner, 0) + ")";
      }
      default:
        unsupported(e);
    }
  }

  static std::string prim(const DiffFn& f) {
    std::string out = f.name();
    if (!f.params().empty()) {
      out += "(";
      for (std::size_t i = 0; i < f.params().size(); ++i) {
        out += (i ? ", " : "") + format_number(f.params()[i]);
      }
      out += ")";
    }
    return out;
  }

  std::span<const std::string> inputs_;
};

}  // namespace

Program parse(std::string_view source) { return Parser(lex(source)).run(source); }

std::string print(const CausalExpr& e, std::span<const std::string> inputs) { return Printer(inputs).print(e, 0); }

Stream StreamSpec::to_stream() const {
  Word w;
  w.reserve(prefix.size());
  for (double x : prefix) {
    w.push_back(Vec{x});
  }
  return eventually(w, Vec{tail});
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view context) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed number '" + std::string(s) + "' in stream spec '" + std::string(context) +
                                "'");
  }
  return v;
}

}  // namespace

StreamSpec parse_stream_spec(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "zeros") return {{}, 0.0};
  if (s == "ones") return {{}, 1.0};
  if (s == "X") return {{0.0, 1.0}, 0.0};
  if (s.substr(0, 5) == "const") {
    std::string_view rest = trim(s.substr(5));
    if (!rest.empty() && rest.front() == '(' && rest.back() == ')') {
      rest = rest.substr(1, rest.size() - 2);
    }
    return {{parse_double(rest, text)}, 0.0};
  }
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw std::invalid_argument("stream spec '" + std::string(text) +
                                "' is not one of zeros, ones, X, const r, (a, b, ...; tail)");
  }
  std::string_view body = s.substr(1, s.size() - 2);
  StreamSpec spec;
  const std::size_t semi = body.find(';');
  std::string_view items = body;
  if (semi != std::string_view::npos) {
    spec.tail = parse_double(body.substr(semi + 1), text);
    items = body.substr(0, semi);
  }
  if (!trim(items).empty()) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = items.find(',', start);
      spec.prefix.push_back(parse_double(items.substr(start, comma - start), text));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return spec;
}

std::pair<std::string, StreamSpec> parse_binding(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty()) {
    throw std::invalid_argument("binding '" + std::string(text) + "' must look like name=spec");
  }
  return {std::string(trim(text.substr(0, eq))), parse_stream_spec(text.substr(eq + 1))};
}

}  // namespace causal::dsl
