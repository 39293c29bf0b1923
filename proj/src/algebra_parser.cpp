// Prefix text form of algebra expressions:
//
//   expr := NAME
//         | (const 'v')
//         | (select (= a b) expr) | (select (!= a b) expr)
//         | (project (j1 j2 ...) expr)
//         | (product expr expr) | (union expr expr)
//         | (diff expr expr) | (intersect expr expr)
//   a, b := column index | 'quoted constant'

#include <cctype>

#include "modalq/errors.hpp"
#include "modalq/relalg.hpp"

namespace modalq::relalg {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string quote(const Value& v) {
  std::string out = "'";
  for (char c : v) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string render_operand(const Operand& o) {
  return std::visit(overloaded{
                        [](const Column& c) { return std::to_string(c.index); },
                        [](const Constant& c) { return quote(c.value); },
                    },
                    o);
}

std::string binary(const char* op, const Expr& l, const Expr& r) {
  return std::string("(") + op + " " + render_algebra(l) + " " + render_algebra(r) + ")";
}

}  // namespace

std::string render_algebra(const Expr& e) {
  return std::visit(overloaded{
                        [](const BaseRelation& b) { return b.name; },
                        [](const SingletonConstant& s) { return "(const " + quote(s.value) + ")"; },
                        [](const Selection& s) {
                          return std::string("(select (") + (s.pred.op == CompareOp::Equal ? "=" : "!=") + " " +
                                 render_operand(s.pred.lhs) + " " + render_operand(s.pred.rhs) + ") " +
                                 render_algebra(s.child) + ")";
                        },
                        [](const Projection& p) {
                          std::string cols;
                          for (std::size_t i = 0; i < p.columns.size(); ++i) {
                            if (i) cols += ' ';
                            cols += std::to_string(p.columns[i]);
                          }
                          return "(project (" + cols + ") " + render_algebra(p.child) + ")";
                        },
                        [](const Product& p) { return binary("product", p.lhs, p.rhs); },
                        [](const Union& u) { return binary("union", u.lhs, u.rhs); },
                        [](const Difference& d) { return binary("diff", d.lhs, d.rhs); },
                        [](const Intersection& i) { return binary("intersect", i.lhs, i.rhs); },
                    },
                    e.node().v);
}

namespace {

class AlgebraReader {
 public:
  explicit AlgebraReader(std::string_view src) : src_(src) {}

  Expr read_all() {
    Expr e = expr();
    skip_space();
    if (at_ != src_.size()) fail({"end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = at_ < src_.size() ? "'" + std::string(1, src_[at_]) + "'" : "end of input";
    throw SyntaxError({1, at_ + 1}, found, std::move(expected));
  }

  void skip_space() {
    while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
  }

  bool peek(char c) {
    skip_space();
    return at_ < src_.size() && src_[at_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail({std::string("'") + c + "'"});
    ++at_;
  }

  std::string word() {
    skip_space();
    std::size_t start = at_;
    while (at_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_')) ++at_;
    if (start == at_) fail({"name"});
    return std::string(src_.substr(start, at_ - start));
  }

  std::size_t index() {
    std::string w = word();
    for (char c : w) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail({"column index"});
    }
    return std::stoul(w);
  }

  Value quoted() {
    expect('\'');
    Value v;
    for (;;) {
      if (at_ >= src_.size()) fail({"closing quote"});
      char c = src_[at_++];
      if (c == '\'') return v;
      if (c == '\\') {
        if (at_ >= src_.size()) fail({"escaped character"});
        c = src_[at_++];
      }
      v += c;
    }
  }

  Operand operand() {
    if (peek('\'')) return Constant{quoted()};
    return Column{index()};
  }

  Expr expr() {
    if (!peek('(')) return base(word());
    ++at_;
    std::string op = word();
    Expr result = [&] {
      if (op == "const") return singleton(quoted());
      if (op == "select") {
        expect('(');
        skip_space();
        CompareOp cmp;
        if (src_.substr(at_, 2) == "!=") {
          cmp = CompareOp::NotEqual;
          at_ += 2;
        } else if (peek('=')) {
          cmp = CompareOp::Equal;
          ++at_;
        } else {
          fail({"'='", "'!='"});
        }
        Operand lhs = operand();
        Operand rhs = operand();
        expect(')');
        return select({std::move(lhs), cmp, std::move(rhs)}, expr());
      }
      if (op == "project") {
        expect('(');
        std::vector<std::size_t> cols;
        while (!peek(')')) cols.push_back(index());
        ++at_;
        return project(std::move(cols), expr());
      }
      if (op == "product" || op == "union" || op == "diff" || op == "intersect") {
        Expr lhs = expr();
        Expr rhs = expr();
        if (op == "product") return product(std::move(lhs), std::move(rhs));
        if (op == "union") return unite(std::move(lhs), std::move(rhs));
        if (op == "diff") return difference(std::move(lhs), std::move(rhs));
        return intersect(std::move(lhs), std::move(rhs));
      }
      fail({"const", "select", "project", "product", "union", "diff", "intersect"});
    }();
    expect(')');
    return result;
  }

  std::string_view src_;
  std::size_t at_ = 0;
};

}  // namespace

Expr parse_algebra(std::string_view text) { return AlgebraReader(text).read_all(); }

}  // namespace modalq::relalg
