#include "causal/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

namespace causal {

namespace {

struct Parser {
  const std::string& src;
  int n;
  size_t pos = 0;

  explicit Parser(const std::string& s, int dim) : src(s), n(dim) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }

  ExprPtr make(ExprKind k) {
    auto e = std::make_unique<Expression>();
    e->kind = k;
    return e;
  }

  ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) {
    auto e = make(k);
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (true) {
      if (accept('+')) e = binary(ExprKind::Add, std::move(e), parse_term());
      else if (accept('-')) e = binary(ExprKind::Sub, std::move(e), parse_term());
      else return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    while (true) {
      if (accept('*')) e = binary(ExprKind::Mul, std::move(e), parse_unary());
      else if (accept('/')) e = binary(ExprKind::Div, std::move(e), parse_unary());
      else return e;
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) {
      auto e = make(ExprKind::Neg);
      e->args.push_back(parse_unary());
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (accept('^')) {
      // Right-associative; the exponent may carry a unary minus.
      return binary(ExprKind::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr parse_number() {
    const size_t start = pos;
    const char* begin = src.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", start);
    pos += static_cast<size_t>(end - begin);
    auto e = make(ExprKind::Literal);
    e->literal = v;
    return e;
  }

  ExprPtr parse_ident() {
    const size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name = src.substr(start, pos - start);

    static const std::map<std::string, std::pair<Func, int>> funcs = {
        {"exp", {Func::Exp, 1}}, {"log", {Func::Log, 1}}, {"sqrt", {Func::Sqrt, 1}},
        {"sin", {Func::Sin, 1}}, {"cos", {Func::Cos, 1}}, {"pow", {Func::Pow, 2}}};

    auto fit = funcs.find(name);
    if (fit != funcs.end()) {
      if (peek() != '(') throw ParseError("function '" + name + "' needs an argument list", pos);
      ++pos;
      auto e = make(ExprKind::Call);
      e->func = fit->second.first;
      e->args.push_back(parse_expr());
      for (int i = 1; i < fit->second.second; ++i) {
        expect(',');
        e->args.push_back(parse_expr());
      }
      if (accept(',')) throw ParseError("too many arguments to '" + name + "'", pos - 1);
      expect(')');
      return e;
    }

    // Coordinates: x1..xn and v1..vn (1-based in the surface syntax).
    if ((name[0] == 'x' || name[0] == 'v') && name.size() > 1) {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        const int idx = std::atoi(name.c_str() + 1);
        if (idx < 1 || idx > n)
          throw ParseError("variable '" + name + "' out of range for dimension " +
                               std::to_string(n),
                           start);
        auto e = make(name[0] == 'x' ? ExprKind::VarX : ExprKind::VarV);
        e->var = idx - 1;
        return e;
      }
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

void print_rec(const Expression& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::Literal: {
      char buf[40];
      snprintf(buf, sizeof buf, "%.17g", e.literal);
      out += buf;
      return;
    }
    case ExprKind::VarX:
      out += "x" + std::to_string(e.var + 1);
      return;
    case ExprKind::VarV:
      out += "v" + std::to_string(e.var + 1);
      return;
    case ExprKind::Neg:
      out += "(-";
      print_rec(*e.args[0], out);
      out += ")";
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow: {
      const char* op = e.kind == ExprKind::Add   ? "+"
                       : e.kind == ExprKind::Sub ? "-"
                       : e.kind == ExprKind::Mul ? "*"
                       : e.kind == ExprKind::Div ? "/"
                                                 : "^";
      out += "(";
      print_rec(*e.args[0], out);
      out += op;
      print_rec(*e.args[1], out);
      out += ")";
      return;
    }
    case ExprKind::Call: {
      const char* name = e.func == Func::Exp    ? "exp"
                         : e.func == Func::Log  ? "log"
                         : e.func == Func::Sqrt ? "sqrt"
                         : e.func == Func::Sin  ? "sin"
                         : e.func == Func::Cos  ? "cos"
                                                : "pow";
      out += name;
      out += "(";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ",";
        print_rec(*e.args[i], out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& src, int n) {
  Parser p(src, n);
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != src.size()) throw ParseError("trailing input", p.pos);
  return e;
}

std::string pretty_print(const Expression& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

ScalarField expression_field(std::shared_ptr<const Expression> expr, int n,
                             std::vector<std::shared_ptr<const Expression>> domain) {
  ScalarField f;
  f.n = n;
  f.value = [expr](const Vec& x, const Vec& v) { return expr->eval(x, v); };
  f.jet_value = [expr](const std::vector<Jet>& x, const std::vector<Jet>& v) {
    return expr->eval(x, v);
  };
  if (!domain.empty()) {
    f.domain = [domain](const Vec& x, const Vec& v) {
      for (const auto& d : domain) {
        try {
          if (!(d->eval(x, v) > 0.0)) return false;
        } catch (const DomainError&) {
          return false;
        }
      }
      return true;
    };
  }
  return f;
}

}  // namespace causal
