#include "rlab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rlab/special.hpp"

namespace rlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// expressions

struct Expression::Node {
  enum Op { Const, Var, Add, Sub, Mul, Div, Neg, PowC, Func } op = Const;
  double value = 0.0;
  int var = 0;
  std::string fn;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;

template <class T>
T eval_node(const Expression::Node& n, const T* u);
int max_var(const Expression::Node* n);

class Parser {
 public:
  Parser(const std::string& s, const std::map<std::string, double>& c) : s_(s), c_(c) {}

  NodeP parse() {
    NodeP n = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return n;
  }

 private:
  const std::string& s_;
  const std::map<std::string, double>& c_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + s_ + "': " + msg + " at position " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char ch) {
    skip();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }
  static NodeP make(Expression::Node::Op op, NodeP a, NodeP b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodeP constant(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
  }

  NodeP sum() {
    NodeP l = product();
    for (;;) {
      if (eat('+'))
        l = make(Expression::Node::Add, l, product());
      else if (eat('-'))
        l = make(Expression::Node::Sub, l, product());
      else
        return l;
    }
  }
  NodeP product() {
    NodeP l = unary();
    for (;;) {
      if (eat('*'))
        l = make(Expression::Node::Mul, l, unary());
      else if (eat('/'))
        l = make(Expression::Node::Div, l, unary());
      else
        return l;
    }
  }
  NodeP unary() {
    if (eat('-')) return make(Expression::Node::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodeP power() {
    NodeP base = atom();
    if (eat('^')) {
      NodeP e = unary();
      // any variable-free exponent folds to a number
      if (max_var(e.get()) >= 0) fail("exponents must be constant");
      auto n = std::make_shared<Expression::Node>();
      n->op = Expression::Node::PowC;
      n->a = base;
      n->value = eval_node<double>(*e, nullptr);
      return n;
    }
    return base;
  }
  NodeP atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char ch = s_[i_];
    if (eat('(')) {
      NodeP n = sum();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(i_), &used);
      i_ += used;
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t st = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string id = s_.substr(st, i_ - st);
      static const std::set<std::string> fns{"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh"};
      if (fns.count(id)) {
        if (!eat('(')) fail("expected '(' after " + id);
        NodeP arg = sum();
        if (!eat(')')) fail("missing ')'");
        auto n = std::make_shared<Expression::Node>();
        n->op = Expression::Node::Func;
        n->fn = id;
        n->a = arg;
        return n;
      }
      if (id.size() == 2 && id[0] == 'u' && id[1] >= '0' && id[1] <= '3') {
        auto n = std::make_shared<Expression::Node>();
        n->op = Expression::Node::Var;
        n->var = id[1] - '0';
        return n;
      }
      if (id == "pi") return constant(kPi);
      auto it = c_.find(id);
      if (it == c_.end()) fail("unknown name '" + id + "'");
      return constant(it->second);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }
};

template <class T>
T eval_node(const Expression::Node& n, const T* u) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using Op = Expression::Node::Op;
  switch (n.op) {
    case Op::Const: return T(n.value);
    case Op::Var: return u[n.var];
    case Op::Add: return eval_node(*n.a, u) + eval_node(*n.b, u);
    case Op::Sub: return eval_node(*n.a, u) - eval_node(*n.b, u);
    case Op::Mul: return eval_node(*n.a, u) * eval_node(*n.b, u);
    case Op::Div: return eval_node(*n.a, u) / eval_node(*n.b, u);
    case Op::Neg: return -eval_node(*n.a, u);
    case Op::PowC: {
      T b = eval_node(*n.a, u);
      double e = n.value;
      if (e == std::floor(e) && std::abs(e) <= 16) {
        T r(1.0);
        for (int k = 0; k < std::abs(int(e)); ++k) r = r * b;
        return e < 0 ? T(1.0) / r : r;
      }
      using std::pow;
      return pow(b, e);
    }
    case Op::Func: {
      T a = eval_node(*n.a, u);
      if (n.fn == "sin") return sin(a);
      if (n.fn == "cos") return cos(a);
      if (n.fn == "tan") return tan(a);
      if (n.fn == "exp") return exp(a);
      if (n.fn == "log") return log(a);
      if (n.fn == "sqrt") return sqrt(a);
      if (n.fn == "sinh") return sinh(a);
      return cosh(a);
    }
  }
  return T(0.0);
}

int max_var(const Expression::Node* n) {
  if (!n) return -1;
  int v = n->op == Expression::Node::Var ? n->var : -1;
  return std::max({v, max_var(n->a.get()), max_var(n->b.get())});
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
  Expression e;
  Parser p(text, constants);
  e.root_ = p.parse();
  return e;
}

template <class T>
T Expression::eval(const T* u) const {
  return eval_node<T>(*root_, u);
}

int Expression::max_variable() const { return max_var(root_.get()); }

template double Expression::eval<double>(const double*) const;
template Jet<1> Expression::eval<Jet<1>>(const Jet<1>*) const;
template Jet<2> Expression::eval<Jet<2>>(const Jet<2>*) const;
template Jet<3> Expression::eval<Jet<3>>(const Jet<3>*) const;
template Jet<4> Expression::eval<Jet<4>>(const Jet<4>*) const;
template Jet<5> Expression::eval<Jet<5>>(const Jet<5>*) const;

// ---------------------------------------------------------------------------
// shape documents

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> numvec(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(num(e, where));
  return v;
}

Eigen::VectorXd vec(const json& j, const std::string& where) {
  auto v = numvec(j, where);
  return Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
}

// required and optional parameters per builtin kind
struct KindInfo {
  std::vector<std::string> required, optional;
};

const std::map<std::string, KindInfo>& kinds() {
  static const std::map<std::string, KindInfo> k{
      {"circle", {{"r"}, {}}},
      {"ellipse", {{"a", "b"}, {}}},
      {"sphere", {{"m", "r"}, {}}},
      {"ball", {{"n", "r"}, {}}},
      {"ellipsoid", {{"a0", "a1"}, {"a2", "a3", "a4"}}},
      {"spheroid", {{"a"}, {"m"}}},
      {"torus", {{"R", "r"}, {}}},
      {"clifford_torus", {{"r1", "r2"}, {}}},
      {"shell", {{"a0", "a1", "inner"}, {"a2", "a3", "a4"}}},
      {"polygon", {{}, {}}},
      {"custom", {{}, {}}},
  };
  return k;
}

int as_int(double v, const std::string& where) {
  if (v != std::floor(v)) throw ConfigError(where + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> axes_from(const std::map<std::string, double>& p) {
  std::vector<double> ax;
  for (int i = 0; i <= 4; ++i) {
    auto it = p.find("a" + std::to_string(i));
    if (it == p.end()) break;
    ax.push_back(it->second);
  }
  for (int i = static_cast<int>(ax.size()); i <= 4; ++i)
    if (p.count("a" + std::to_string(i))) throw ConfigError("params: axes must be a0, a1, ... without gaps");
  return ax;
}

ManifoldSpec custom_spec(const json& j, const std::map<std::string, double>& params) {
  if (!j.contains("patches")) throw ConfigError("custom shape needs 'patches'");
  if (!j.contains("m") || !j.contains("n")) throw ConfigError("custom shape needs 'm' and 'n'");
  ManifoldSpec s;
  s.kind = "custom";
  s.params = params;
  s.m = as_int(num(j["m"], "m"), "m");
  s.n = as_int(num(j["n"], "n"), "n");
  if (s.m < 1 || s.m > kMaxIntrinsic || s.n < s.m || s.n > kMaxAmbient)
    throw ConfigError("custom shape: need 1 <= m <= 4 and m <= n <= 8");
  s.closed = j.value("closed", true);
  s.is_body = j.value("body", false);
  if (s.is_body && !s.hypersurface()) throw ConfigError("a body needs n = m + 1");
  const json& ps = j["patches"];
  if (!ps.is_array() || ps.empty()) throw ConfigError("patches: expected a non-empty array");
  int idx = 0;
  for (const auto& pj : ps) {
    const std::string where = "patches[" + std::to_string(idx++) + "]";
    only_keys(pj, {"lo", "hi", "x", "orientation", "component"}, where);
    if (!pj.contains("lo") || !pj.contains("hi") || !pj.contains("x"))
      throw ConfigError(where + ": needs lo, hi and x");
    Patch p;
    p.lo = numvec(pj["lo"], where + ".lo");
    p.hi = numvec(pj["hi"], where + ".hi");
    if (static_cast<int>(p.lo.size()) != s.m || static_cast<int>(p.hi.size()) != s.m)
      throw ConfigError(where + ": lo and hi need m entries");
    for (int i = 0; i < s.m; ++i)
      if (!(p.hi[i] > p.lo[i])) throw ConfigError(where + ": empty parameter box");
    if (!pj["x"].is_array() || static_cast<int>(pj["x"].size()) != s.n)
      throw ConfigError(where + ".x: expected n expression strings");
    std::vector<Expression> ex;
    for (const auto& e : pj["x"]) {
      if (!e.is_string()) throw ConfigError(where + ".x: expected strings");
      ex.push_back(Expression::parse(e.get<std::string>(), params));
      if (ex.back().max_variable() >= s.m) throw ConfigError(where + ".x: uses u" + std::to_string(ex.back().max_variable()) + " but m = " + std::to_string(s.m));
    }
    const int n = s.n;
    p.map = make_patch_map(s.m, [ex, n](const auto* u, auto* x) {
      for (int a = 0; a < n; ++a) x[a] = ex[a].eval(u);
    });
    if (pj.contains("orientation")) {
      int o = as_int(num(pj["orientation"], where + ".orientation"), where + ".orientation");
      if (o != 1 && o != -1) throw ConfigError(where + ".orientation must be 1 or -1");
      p.orientation = o;
    }
    if (pj.contains("component")) p.component = as_int(num(pj["component"], where), where + ".component");
    s.patches.push_back(std::move(p));
  }
  return s;
}

}  // namespace

MobiusMap map_from_json(const json& arr, int n) {
  if (!arr.is_array()) throw ConfigError("transforms: expected an array");
  MobiusMap map;
  int idx = 0;
  for (const auto& t : arr) {
    const std::string where = "transforms[" + std::to_string(idx++) + "]";
    if (!t.is_object() || !t.contains("type") || !t["type"].is_string()) throw ConfigError(where + ": needs a 'type'");
    const std::string type = t["type"];
    try {
      if (type == "inversion") {
        only_keys(t, {"type", "center", "radius"}, where);
        if (!t.contains("center")) throw ConfigError(where + ": needs 'center'");
        Eigen::VectorXd c = vec(t["center"], where + ".center");
        if (c.size() != n) throw ConfigError(where + ".center: expected " + std::to_string(n) + " entries");
        map = map.then(MobiusMap::inversion(c, t.contains("radius") ? num(t["radius"], where) : 1.0));
      } else if (type == "similarity") {
        only_keys(t, {"type", "scale", "rotation", "translation"}, where);
        Eigen::MatrixXd Q;
        if (t.contains("rotation")) {
          const json& r = t["rotation"];
          if (!r.is_array() || static_cast<int>(r.size()) != n) throw ConfigError(where + ".rotation: expected n rows");
          Q.resize(n, n);
          for (int i = 0; i < n; ++i) {
            auto row = numvec(r[i], where + ".rotation");
            if (static_cast<int>(row.size()) != n) throw ConfigError(where + ".rotation: expected n columns");
            for (int k = 0; k < n; ++k) Q(i, k) = row[k];
          }
        }
        Eigen::VectorXd tr;
        if (t.contains("translation")) {
          tr = vec(t["translation"], where + ".translation");
          if (tr.size() != n) throw ConfigError(where + ".translation: expected n entries");
        }
        map = map.then(MobiusMap::similarity(t.contains("scale") ? num(t["scale"], where) : 1.0, Q, tr));
      } else {
        throw ConfigError(where + ": unknown type '" + type + "' (inversion, similarity)");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return map;
}

MobiusMap map_from_json_text(const std::string& text, int n) {
  try {
    return map_from_json(json::parse(text), n);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("transforms: ") + e.what());
  }
}

namespace {

ManifoldSpec spec_from_json(const json& j) {
  only_keys(j, {"kind", "params", "body", "vertices", "patches", "m", "n", "closed", "orientation", "transforms"},
            "shape");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("shape: 'kind' is required");
  const std::string kind = j["kind"];
  auto kit = kinds().find(kind);
  if (kit == kinds().end()) {
    std::string list;
    for (const auto& [k, v] : kinds()) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("shape: unknown kind '" + kind + "' (" + list + ")");
  }
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("params: expected an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      params[it.key()] = num(it.value(), "params." + it.key());
  }
  if (kind != "custom") {
    std::set<std::string> allowed(kit->second.required.begin(), kit->second.required.end());
    allowed.insert(kit->second.optional.begin(), kit->second.optional.end());
    for (const auto& [k, v] : params)
      if (!allowed.count(k)) throw ConfigError("params: unknown parameter '" + k + "' for kind " + kind);
    for (const auto& r : kit->second.required)
      if (!params.count(r)) throw ConfigError("params: kind " + kind + " needs '" + r + "'");
    for (const char* k : {"patches", "m", "n", "closed"})
      if (j.contains(k)) throw ConfigError(std::string("shape: '") + k + "' is only allowed for kind custom");
  }
  if (j.contains("vertices") && kind != "polygon") throw ConfigError("shape: 'vertices' is only allowed for kind polygon");
  if (j.contains("body") && !j["body"].is_boolean()) throw ConfigError("body: expected true or false");
  const bool body = j.contains("body") ? j["body"].get<bool>() : false;
  if (body && !(kind == "ellipse" || kind == "ellipsoid" || kind == "custom"))
    throw ConfigError("body: only for ellipse, ellipsoid and custom (ball and shell are bodies already)");

  ManifoldSpec s;
  try {
    auto P = [&](const char* k) { return params.at(k); };
    if (kind == "circle") s = make_circle(P("r"));
    else if (kind == "ellipse") s = make_ellipse(P("a"), P("b"), body);
    else if (kind == "sphere") s = make_sphere(as_int(P("m"), "params.m"), P("r"));
    else if (kind == "ball") s = make_ball(as_int(P("n"), "params.n"), P("r"));
    else if (kind == "ellipsoid") s = make_ellipsoid(axes_from(params), body);
    else if (kind == "spheroid") s = make_spheroid(P("a"), params.count("m") ? as_int(P("m"), "params.m") : 4);
    else if (kind == "torus") s = make_torus(P("R"), P("r"));
    else if (kind == "clifford_torus") s = make_clifford_torus(P("r1"), P("r2"));
    else if (kind == "shell") s = make_shell(axes_from(params), P("inner"));
    else if (kind == "polygon") {
      if (!j.contains("vertices") || !j["vertices"].is_array()) throw ConfigError("polygon needs 'vertices'");
      std::vector<Eigen::VectorXd> v;
      for (const auto& e : j["vertices"]) {
        v.push_back(vec(e, "vertices"));
        if (v.back().size() != 3) throw ConfigError("vertices: expected points in R^3");
      }
      s = make_polygon_knot(v);
    } else {
      s = custom_spec(j, params);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("shape: ") + e.what());
  }
  if (j.contains("orientation")) {
    const json& o = j["orientation"];
    if (o.is_string() && o.get<std::string>() == "outward") {
      if (s.hypersurface() && s.closed && !s.is_polygon() && enclosed_volume(s, s.m >= 3 ? 8 : 16) < 0)
        s = with_orientation(s, -1);
    } else if (o.is_number()) {
      int v = as_int(o.get<double>(), "orientation");
      if (v != 1 && v != -1) throw ConfigError("orientation must be 1, -1 or \"outward\"");
      s = with_orientation(s, v);
    } else {
      throw ConfigError("orientation must be 1, -1 or \"outward\"");
    }
  } else if (kind == "custom" && s.hypersurface() && s.closed && enclosed_volume(s, s.m >= 3 ? 8 : 16) < 0) {
    s = with_orientation(s, -1);
  }
  if (j.contains("transforms")) s = transform_spec(s, map_from_json(j["transforms"], s.n));
  return s;
}

}  // namespace

ManifoldSpec spec_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("shape config is not valid JSON: ") + e.what());
  }
  try {
    return spec_from_json(j);
  } catch (const json::exception& e) {
    // wrong value types surface here
    throw ConfigError(std::string("shape config: ") + e.what());
  }
}

ManifoldSpec load_shape(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open shape config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return spec_from_json_text(ss.str());
}

}  // namespace rlab
