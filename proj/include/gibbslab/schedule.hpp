#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/core.hpp"

namespace gibbslab {

/// Arithmetic expression over named variables: + - * / ^, unary minus,
/// parentheses, numbers, and the functions exp log sqrt abs tanh sin cos
/// min max. Parsed once, evaluated many times.
class Expression {
 public:
  explicit Expression(const std::string& text);

  /// Variables are looked up by name; an unknown name throws.
  double operator()(const std::map<std::string, double>& vars) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// beta_n schedule. Named kinds "n", "n^2", "nlogn"; anything else is parsed
/// as an expression in the variable n.
class ScheduleSpec {
 public:
  enum class Kind { kLinear, kSquare, kNLogN, kCustom };

  ScheduleSpec(std::string kind, std::vector<std::size_t> n_list);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<std::size_t>& n_list() const { return n_list_; }
  double beta(std::size_t n) const;
  /// True for beta_n = n, the regime with the entropic rate function.
  bool is_linear() const { return kind_ == Kind::kLinear; }

  static std::vector<std::string> named_kinds();

 private:
  Kind kind_;
  std::string name_;
  std::vector<std::size_t> n_list_;
  std::shared_ptr<Expression> expr_;
};

nlohmann::json to_json(const ScheduleSpec& s);

}  // namespace gibbslab
