#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "rlab/manifold.hpp"
#include "rlab/mobius.hpp"

namespace rlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic expressions in u0..u3, named constants and pi; evaluable on doubles and jets.
// Grammar: + - * / ^ (constant exponent), unary minus, parentheses, and
// sin cos tan exp log sqrt sinh cosh.
class Expression {
 public:
  struct Node;
  Expression() = default;
  static Expression parse(const std::string& text, const std::map<std::string, double>& constants);

  template <class T>
  T eval(const T* u) const;
  int max_variable() const;  // largest u index used, -1 if none

 private:
  std::shared_ptr<const Node> root_;
};

// JSON shape document (see README): kind, params, body, vertices, patches, orientation, transforms.
ManifoldSpec spec_from_json_text(const std::string& text);
ManifoldSpec load_shape(const std::string& path);
MobiusMap map_from_json_text(const std::string& text, int n);

}  // namespace rlab
