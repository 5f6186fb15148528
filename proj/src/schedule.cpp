#include "gibbslab/schedule.hpp"

#include <cctype>
#include <cmath>

#include <json.hpp>

namespace gibbslab {

struct Expression::Node {
  enum class Op { kNum, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kCall };
  Op op = Op::kNum;
  double num = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double num = 0.0, std::string name = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->num = num;
  n->name = std::move(name);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("expression '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (eat('+')) {
        lhs = make(Op::kAdd, {lhs, term()});
      } else if (eat('-')) {
        lhs = make(Op::kSub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (eat('*')) {
        lhs = make(Op::kMul, {lhs, unary()});
      } else if (eat('/')) {
        lhs = make(Op::kDiv, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Op::kNeg, {unary()});
    if (eat('+')) return unary();
    return power();
  }
  // Right-associative; binds tighter than unary minus on its left.
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::kPow, {base, unary()});
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return make(Op::kNum, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        std::vector<NodePtr> args;
        if (!eat(')')) {
          args.push_back(expr());
          while (eat(',')) args.push_back(expr());
          if (!eat(')')) fail("expected ')' after arguments");
        }
        check_call(name, args.size());
        return make(Op::kCall, std::move(args), 0.0, std::move(name));
      }
      if (name == "pi") return make(Op::kNum, {}, M_PI);
      return make(Op::kVar, {}, 0.0, std::move(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void check_call(const std::string& name, std::size_t argc) const {
    static const std::map<std::string, std::size_t> arity{
        {"exp", 1}, {"log", 1}, {"sqrt", 1}, {"abs", 1}, {"tanh", 1},
        {"sin", 1}, {"cos", 1}, {"min", 2},  {"max", 2}};
    const auto it = arity.find(name);
    if (it == arity.end()) fail("unknown function '" + name + "'");
    if (it->second != argc) fail("function '" + name + "' takes " + std::to_string(it->second) + " argument(s)");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const std::map<std::string, double>& vars) {
  auto arg = [&](std::size_t i) { return eval(*n.args[i], vars); };
  switch (n.op) {
    case Op::kNum: return n.num;
    case Op::kVar: {
      const auto it = vars.find(n.name);
      if (it == vars.end()) throw InvalidArgument("expression: unknown variable '" + n.name + "'");
      return it->second;
    }
    case Op::kAdd: return arg(0) + arg(1);
    case Op::kSub: return arg(0) - arg(1);
    case Op::kMul: return arg(0) * arg(1);
    case Op::kDiv: return arg(0) / arg(1);
    case Op::kPow: return std::pow(arg(0), arg(1));
    case Op::kNeg: return -arg(0);
    case Op::kCall: break;
  }
  const double a = arg(0);
  if (n.name == "exp") return std::exp(a);
  if (n.name == "log") return std::log(a);
  if (n.name == "sqrt") return std::sqrt(a);
  if (n.name == "abs") return std::abs(a);
  if (n.name == "tanh") return std::tanh(a);
  if (n.name == "sin") return std::sin(a);
  if (n.name == "cos") return std::cos(a);
  if (n.name == "min") return std::min(a, arg(1));
  return std::max(a, arg(1));
}

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}

double Expression::operator()(const std::map<std::string, double>& vars) const {
  return eval(*root_, vars);
}

ScheduleSpec::ScheduleSpec(std::string kind, std::vector<std::size_t> n_list)
    : name_(std::move(kind)), n_list_(std::move(n_list)) {
  if (n_list_.empty()) throw InvalidArgument("schedule: n_list is empty");
  for (std::size_t i = 0; i < n_list_.size(); ++i) {
    if (n_list_[i] == 0) throw InvalidArgument("schedule: n must be >= 1");
    if (i > 0 && n_list_[i] <= n_list_[i - 1]) throw InvalidArgument("schedule: n_list must be increasing");
  }
  if (name_ == "n") {
    kind_ = Kind::kLinear;
  } else if (name_ == "n^2") {
    kind_ = Kind::kSquare;
  } else if (name_ == "nlogn" || name_ == "n log n") {
    kind_ = Kind::kNLogN;
    name_ = "nlogn";
  } else {
    kind_ = Kind::kCustom;
    expr_ = std::make_shared<Expression>(name_);
  }
  double prev_ratio = 0.0;
  for (std::size_t i = 0; i < n_list_.size(); ++i) {
    const double b = beta(n_list_[i]);
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw InvalidArgument("schedule '" + name_ + "': beta_n must be positive at n = " + std::to_string(n_list_[i]));
    }
    const double ratio = b / static_cast<double>(n_list_[i]);
    if (kind_ != Kind::kLinear && i > 0 && !(ratio > prev_ratio)) {
      throw InvalidArgument("schedule '" + name_ + "': beta_n / n must increase along n_list");
    }
    prev_ratio = ratio;
  }
}

double ScheduleSpec::beta(std::size_t n) const {
  const double x = static_cast<double>(n);
  switch (kind_) {
    case Kind::kLinear: return x;
    case Kind::kSquare: return x * x;
    case Kind::kNLogN: return x * std::log(x);
    case Kind::kCustom: break;
  }
  return (*expr_)({{"n", x}});
}

std::vector<std::string> ScheduleSpec::named_kinds() { return {"n", "n^2", "nlogn"}; }

nlohmann::json to_json(const ScheduleSpec& s) {
  nlohmann::json betas = nlohmann::json::array();
  for (std::size_t n : s.n_list()) betas.push_back(s.beta(n));
  return {{"kind", s.name()}, {"n_list", s.n_list()}, {"beta", betas}};
}

}  // namespace gibbslab
