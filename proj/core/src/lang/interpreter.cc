// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policyforge/lang/interpreter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "lang/value.h"

namespace policyforge::lang {
namespace {

constexpr std::size_t kMaxVectorLength = std::size_t{1} << 20;

[[noreturn]] void Fault(FaultKind kind, const std::string& message) {
  throw PolicyFault(kind, message);
}

bool Truthy(const Value& v) {
  if (v.is_vector() && v.size() != 1) {
    Fault(FaultKind::kType, "truth value of a vector of length " +
                                std::to_string(v.size()) + " is ambiguous");
  }
  return v.scalar() != 0.0;
}

// Broadcasts a binary elementwise function over scalars and vectors.
template <typename F>
Value Broadcast(const Value& a, const Value& b, F f, bool bool_result) {
  const Value::Kind scalar_kind = bool_result ? Value::Kind::kBool
                                              : Value::Kind::kReal;
  if (!a.is_vector() && !b.is_vector()) {
    const double r = f(a.scalar(), b.scalar());
    return scalar_kind == Value::Kind::kBool ? Value::Bool(r != 0.0)
                                             : Value::Real(r);
  }
  Value::Storage out;
  if (a.is_vector() && b.is_vector()) {
    if (a.size() != b.size()) {
      Fault(FaultKind::kLengthMismatch,
            "operands of length " + std::to_string(a.size()) + " and " +
                std::to_string(b.size()));
    }
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
  } else if (a.is_vector()) {
    const double s = b.scalar();
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], s);
  } else {
    const double s = a.scalar();
    out.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = f(s, b[i]);
  }
  return bool_result ? Value::BoolVector(std::move(out))
                     : Value::RealVector(std::move(out));
}

template <typename F>
Value Map(const Value& a, F f) {
  if (!a.is_vector()) return Value::Real(f(a.scalar()));
  Value::Storage out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return Value::RealVector(std::move(out));
}

double PyMod(double a, double b) {
  double r = std::fmod(a, b);
  if (r != 0.0 && ((r < 0.0) != (b < 0.0))) r += b;
  return r;
}

double Sign(double x) {
  if (std::isnan(x)) return x;
  return static_cast<double>((x > 0.0) - (x < 0.0));
}

// NaN-propagating min/max (numpy semantics).
double NanMin(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::min(a, b);
}
double NanMax(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::max(a, b);
}

Value ApplyBinary(BinaryOp op, const Value& a, const Value& b) {
  switch (op) {
    case BinaryOp::kAdd:
      return Broadcast(a, b, [](double x, double y) { return x + y; }, false);
    case BinaryOp::kSub:
      return Broadcast(a, b, [](double x, double y) { return x - y; }, false);
    case BinaryOp::kMul:
      return Broadcast(a, b, [](double x, double y) { return x * y; }, false);
    case BinaryOp::kDiv:
      return Broadcast(a, b, [](double x, double y) { return x / y; }, false);
    case BinaryOp::kFloorDiv:
      return Broadcast(a, b, [](double x, double y) { return std::floor(x / y); },
                       false);
    case BinaryOp::kMod:
      return Broadcast(a, b, PyMod, false);
    case BinaryOp::kPow:
      return Broadcast(a, b, [](double x, double y) { return std::pow(x, y); },
                       false);
  }
  Fault(FaultKind::kType, "unknown operator");
}

Value ApplyCompare(CompareOp op, const Value& a, const Value& b) {
  switch (op) {
    case CompareOp::kLt:
      return Broadcast(a, b, [](double x, double y) { return double(x < y); }, true);
    case CompareOp::kLe:
      return Broadcast(a, b, [](double x, double y) { return double(x <= y); }, true);
    case CompareOp::kGt:
      return Broadcast(a, b, [](double x, double y) { return double(x > y); }, true);
    case CompareOp::kGe:
      return Broadcast(a, b, [](double x, double y) { return double(x >= y); }, true);
    case CompareOp::kEq:
      return Broadcast(a, b, [](double x, double y) { return double(x == y); }, true);
    case CompareOp::kNe:
      return Broadcast(a, b, [](double x, double y) { return double(x != y); }, true);
  }
  Fault(FaultKind::kType, "unknown comparison");
}

// Converts an index value to a position in a vector of length n.
std::size_t ResolveIndex(const Value& index, std::size_t n) {
  if (index.is_vector() || index.is_bool()) {
    Fault(FaultKind::kType, "index must be an integer scalar");
  }
  const double v = index.scalar();
  if (!std::isfinite(v) || v != std::floor(v)) {
    Fault(FaultKind::kType, "index must be an integer scalar");
  }
  const double len = static_cast<double>(n);
  const double pos = v < 0 ? v + len : v;
  if (pos < 0 || pos >= len) {
    Fault(FaultKind::kIndex, "index " + std::to_string(static_cast<long long>(v)) +
                                 " out of range for length " + std::to_string(n));
  }
  return static_cast<std::size_t>(pos);
}

struct SliceRange {
  long long start;
  long long step;
  std::size_t count;
  long long At(std::size_t i) const {
    return start + static_cast<long long>(i) * step;
  }
};

std::optional<long long> SliceBound(const std::optional<Value>& v) {
  if (!v) return std::nullopt;
  if (v->is_vector() || v->is_bool()) {
    Fault(FaultKind::kType, "slice bounds must be integer scalars");
  }
  const double d = v->scalar();
  if (std::isnan(d) || d != std::floor(d)) {
    Fault(FaultKind::kType, "slice bounds must be integer scalars");
  }
  const double limit = 1e15;
  return static_cast<long long>(std::clamp(d, -limit, limit));
}

// Python slice semantics (PySlice_AdjustIndices).
SliceRange ResolveSlice(const std::optional<Value>& start_v,
                        const std::optional<Value>& stop_v,
                        const std::optional<Value>& step_v, std::size_t n) {
  const long long len = static_cast<long long>(n);
  const long long step = SliceBound(step_v).value_or(1);
  if (step == 0) Fault(FaultKind::kType, "slice step cannot be zero");
  const std::optional<long long> start_opt = SliceBound(start_v);
  const std::optional<long long> stop_opt = SliceBound(stop_v);
  long long start;
  long long stop;
  if (step > 0) {
    start = start_opt.value_or(0);
    stop = stop_opt.value_or(len);
    if (start < 0) start = std::max(0LL, start + len);
    if (stop < 0) stop = std::max(0LL, stop + len);
    start = std::min(start, len);
    stop = std::min(stop, len);
  } else {
    start = start_opt.value_or(len - 1);
    stop = stop_opt.value_or(-len - 1);
    if (start < 0) start = std::max(-1LL, start + len);
    if (stop < 0) stop = std::max(-1LL, stop + len);
    start = std::min(start, len - 1);
    stop = std::min(stop, len - 1);
  }
  long long count = 0;
  if (step > 0 && start < stop) count = (stop - start + step - 1) / step;
  if (step < 0 && start > stop) count = (start - stop - step - 1) / (-step);
  return SliceRange{start, step, static_cast<std::size_t>(count)};
}

std::size_t ShapeLength(const Value& v) {
  if (v.is_bool() || (v.is_vector() && v.size() != 1)) {
    Fault(FaultKind::kType, "shape must be an integer or a 1-tuple");
  }
  const double d = v.scalar();
  if (!std::isfinite(d) || d != std::floor(d) || d < 0) {
    Fault(FaultKind::kType, "shape must be a non-negative integer");
  }
  if (d > static_cast<double>(kMaxVectorLength)) {
    Fault(FaultKind::kLengthMismatch, "vector too large");
  }
  return static_cast<std::size_t>(d);
}

}  // namespace

std::string_view FaultKindName(FaultKind kind) {
  switch (kind) {
    case FaultKind::kIndex:
      return "index";
    case FaultKind::kLengthMismatch:
      return "length_mismatch";
    case FaultKind::kType:
      return "type";
    case FaultKind::kUnbound:
      return "unbound";
    case FaultKind::kNoReturn:
      return "no_return";
    case FaultKind::kNonFinite:
      return "non_finite";
    case FaultKind::kBudget:
      return "budget";
  }
  return "unknown";
}

class Interpreter::Impl {
 public:
  Impl(const PolicyAst& ast, EvalOptions options)
      : ast_(&ast), options_(options) {
    vars_.resize(ast.variables.size());
    bound_.resize(ast.variables.size());
  }

  void Run(std::span<const double> params, std::span<const double> obs,
           Rng& rng, std::vector<double>& out) {
    params_ = params;
    rng_ = &rng;
    nodes_ = 0;
    std::fill(bound_.begin(), bound_.end(), false);
    vars_[0] = Value::RealVector(obs);
    bound_[0] = true;
    std::optional<Value> result = ExecBlock(ast_->body);
    if (!result) Fault(FaultKind::kNoReturn, "policy did not return a value");
    const std::span<const double> data = result->data();
    out.assign(data.begin(), data.end());
    for (double x : out) {
      if (!std::isfinite(x)) Fault(FaultKind::kNonFinite, "non-finite action");
    }
  }

 private:
  void Tick() {
    if (++nodes_ > options_.node_budget) {
      Fault(FaultKind::kBudget, "evaluation node budget of " +
                                    std::to_string(options_.node_budget) +
                                    " exceeded");
    }
  }

  std::optional<Value> ExecBlock(const std::vector<Stmt>& block) {
    for (const Stmt& s : block) {
      Tick();
      switch (s.kind) {
        case StmtKind::kPass:
          break;
        case StmtKind::kReturn:
          return Eval(s.value);
        case StmtKind::kIf: {
          const bool taken = Truthy(Eval(s.value));
          std::optional<Value> r = ExecBlock(taken ? s.body : s.orelse);
          if (r) return r;
          break;
        }
        case StmtKind::kAssign:
          Assign(s.target, Eval(s.value), nullptr);
          break;
        case StmtKind::kAugAssign: {
          Value rhs = Eval(s.value);
          Assign(s.target, std::move(rhs), &s.aug_op);
          break;
        }
      }
    }
    return std::nullopt;
  }

  Value& Variable(const Expr& name) {
    const std::size_t slot = static_cast<std::size_t>(name.index);
    if (!bound_[slot]) {
      Fault(FaultKind::kUnbound, "variable '" + name.name + "' is unbound");
    }
    return vars_[slot];
  }

  void Assign(const Expr& target, Value value, const BinaryOp* aug) {
    if (target.kind == ExprKind::kName) {
      const std::size_t slot = static_cast<std::size_t>(target.index);
      if (aug != nullptr) {
        vars_[slot] = ApplyBinary(*aug, Variable(target), value);
      } else {
        vars_[slot] = std::move(value);
        bound_[slot] = true;
      }
      return;
    }
    Value& base = Variable(target.args[0]);
    if (!base.is_vector()) Fault(FaultKind::kType, "subscript assignment to a scalar");
    const bool bool_base = base.kind() == Value::Kind::kBoolVector;
    auto store = [bool_base](double x) {
      return bool_base ? static_cast<double>(x != 0.0) : x;
    };
    if (target.kind == ExprKind::kIndex) {
      const std::size_t pos = ResolveIndex(Eval(target.args[1]), base.size());
      if (value.is_vector() && value.size() != 1) {
        Fault(FaultKind::kLengthMismatch, "cannot assign a vector to an element");
      }
      double x = value.scalar();
      if (aug != nullptr) {
        x = ApplyBinary(*aug, Value::Real(base[pos]), Value::Real(x)).scalar();
      }
      base.storage()[pos] = store(x);
      return;
    }
    const SliceRange range = EvalSlice(target, base.size());
    Value::Storage current(range.count);
    for (std::size_t i = 0; i < range.count; ++i) {
      current[i] = base[static_cast<std::size_t>(range.At(i))];
    }
    if (aug != nullptr) {
      value = ApplyBinary(*aug, Value::RealVector(std::move(current)), value);
    }
    if (value.is_vector() && value.size() != range.count) {
      Fault(FaultKind::kLengthMismatch,
            "cannot assign " + std::to_string(value.size()) +
                " values to a slice of length " + std::to_string(range.count));
    }
    for (std::size_t i = 0; i < range.count; ++i) {
      const double x = value.is_vector() ? value[i] : value.scalar();
      base.storage()[static_cast<std::size_t>(range.At(i))] = store(x);
    }
  }

  SliceRange EvalSlice(const Expr& e, std::size_t n) {
    std::optional<Value> parts[3];
    for (int i = 0; i < 3; ++i) {
      const Expr& p = e.args[static_cast<std::size_t>(i) + 1];
      if (p.kind != ExprKind::kAbsent) parts[i] = Eval(p);
    }
    return ResolveSlice(parts[0], parts[1], parts[2], n);
  }

  // Evaluates the base of a subscript without copying named variables.
  const Value& EvalBase(const Expr& base, Value& scratch) {
    if (base.kind == ExprKind::kName) {
      Tick();
      return Variable(base);
    }
    scratch = Eval(base);
    return scratch;
  }

  Value Eval(const Expr& e) {
    Tick();
    switch (e.kind) {
      case ExprKind::kFloat:
      case ExprKind::kInt:
        return Value::Real(e.number);
      case ExprKind::kBool:
        return Value::Bool(e.number != 0.0);
      case ExprKind::kParamSlot:
        return Value::Real(params_[static_cast<std::size_t>(e.index)]);
      case ExprKind::kConstant:
        return Value::Real(std::numbers::pi);
      case ExprKind::kName:
        return Variable(e);
      case ExprKind::kUnary: {
        Value v = Eval(e.args[0]);
        switch (e.unary_op()) {
          case UnaryOp::kNeg:
            return Map(v, [](double x) { return -x; });
          case UnaryOp::kPos:
            return Map(v, [](double x) { return x; });
          case UnaryOp::kNot:
            return Value::Bool(!Truthy(v));
        }
        break;
      }
      case ExprKind::kBinary:
        return ApplyBinary(e.binary_op(), Eval(e.args[0]), Eval(e.args[1]));
      case ExprKind::kCompare:
        return EvalCompare(e);
      case ExprKind::kBoolOp: {
        Value lhs = Eval(e.args[0]);
        const bool t = Truthy(lhs);
        if (e.bool_op() == BoolOp::kAnd ? !t : t) return lhs;
        return Eval(e.args[1]);
      }
      case ExprKind::kConditional:
        return Truthy(Eval(e.args[1])) ? Eval(e.args[0]) : Eval(e.args[2]);
      case ExprKind::kCall:
        return EvalCall(e);
      case ExprKind::kVector:
        return EvalVector(e);
      case ExprKind::kIndex: {
        Value scratch;
        const Value& base = EvalBase(e.args[0], scratch);
        if (!base.is_vector()) Fault(FaultKind::kType, "cannot index a scalar");
        const std::size_t pos = ResolveIndex(Eval(e.args[1]), base.size());
        return base.kind() == Value::Kind::kBoolVector
                   ? Value::Bool(base[pos] != 0.0)
                   : Value::Real(base[pos]);
      }
      case ExprKind::kSlice: {
        Value scratch;
        const Value& base = EvalBase(e.args[0], scratch);
        if (!base.is_vector()) Fault(FaultKind::kType, "cannot slice a scalar");
        const SliceRange range = EvalSlice(e, base.size());
        Value::Storage out(range.count);
        for (std::size_t i = 0; i < range.count; ++i) {
          out[i] = base[static_cast<std::size_t>(range.At(i))];
        }
        return base.kind() == Value::Kind::kBoolVector
                   ? Value::BoolVector(std::move(out))
                   : Value::RealVector(std::move(out));
      }
      case ExprKind::kAbsent:
        break;
    }
    Fault(FaultKind::kType, "malformed expression");
  }

  Value EvalCompare(const Expr& e) {
    Value lhs = Eval(e.args[0]);
    if (e.compare_ops.size() == 1) {
      return ApplyCompare(e.compare_ops[0], lhs, Eval(e.args[1]));
    }
    for (std::size_t i = 0; i < e.compare_ops.size(); ++i) {
      Value rhs = Eval(e.args[i + 1]);
      Value r = ApplyCompare(e.compare_ops[i], lhs, rhs);
      if (!Truthy(r)) return Value::Bool(false);
      lhs = std::move(rhs);
    }
    return Value::Bool(true);
  }

  Value EvalVector(const Expr& e) {
    Value::Storage out;
    out.reserve(e.args.size());
    bool all_bool = !e.args.empty();
    for (const Expr& element : e.args) {
      Value v = Eval(element);
      if (v.is_vector()) Fault(FaultKind::kType, "nested vectors are not supported");
      all_bool = all_bool && v.is_bool();
      out.push_back(v.scalar());
    }
    return all_bool ? Value::BoolVector(std::move(out))
                    : Value::RealVector(std::move(out));
  }

  // Argument bound to parameter `pos` of a builtin, or nullptr.
  const Expr* Argument(const Expr& call, std::size_t pos) const {
    const BuiltinInfo& info = GetBuiltinInfo(call.builtin());
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      if (call.keywords[i].empty()) {
        if (i == pos) return &call.args[i];
      } else if (pos < info.keywords.size() && call.keywords[i] == info.keywords[pos]) {
        return &call.args[i];
      }
    }
    return nullptr;
  }

  Value EvalCall(const Expr& e) {
    const std::vector<Expr>& args = e.args;
    switch (e.builtin()) {
      case Builtin::kAbs:
        return Map(Eval(args[0]), [](double x) { return std::fabs(x); });
      case Builtin::kSign:
        return Map(Eval(args[0]), Sign);
      case Builtin::kSin:
        return Map(Eval(args[0]), [](double x) { return std::sin(x); });
      case Builtin::kCos:
        return Map(Eval(args[0]), [](double x) { return std::cos(x); });
      case Builtin::kTan:
        return Map(Eval(args[0]), [](double x) { return std::tan(x); });
      case Builtin::kExp:
        return Map(Eval(args[0]), [](double x) { return std::exp(x); });
      case Builtin::kLog:
        return Map(Eval(args[0]), [](double x) { return std::log(x); });
      case Builtin::kSqrt:
        return Map(Eval(args[0]), [](double x) { return std::sqrt(x); });
      case Builtin::kAtan2:
        return Broadcast(Eval(args[0]), Eval(args[1]),
                         [](double y, double x) { return std::atan2(y, x); },
                         false);
      case Builtin::kMin:
      case Builtin::kMax:
        return EvalMinMax(e);
      case Builtin::kClip: {
        Value a = Eval(*Argument(e, 0));
        Value lo = Eval(*Argument(e, 1));
        Value hi = Eval(*Argument(e, 2));
        return Broadcast(Broadcast(a, lo, NanMax, false), hi, NanMin, false);
      }
      case Builtin::kZeros:
        return Value::RealVector(Value::Storage(ShapeLength(Eval(args[0])), 0.0));
      case Builtin::kArray:
      case Builtin::kCopy:
        return Eval(args[0]);
      case Builtin::kAny:
      case Builtin::kAll: {
        const Value v = Eval(args[0]);
        const std::span<const double> d = v.data();
        const bool any = e.builtin() == Builtin::kAny;
        const bool r = any ? std::any_of(d.begin(), d.end(), [](double x) { return x != 0.0; })
                           : std::all_of(d.begin(), d.end(), [](double x) { return x != 0.0; });
        return Value::Bool(r);
      }
      case Builtin::kNormal:
        return EvalNormal(e);
    }
    Fault(FaultKind::kType, "unknown builtin");
  }

  Value EvalMinMax(const Expr& e) {
    const bool is_min = e.builtin() == Builtin::kMin;
    if (e.args.size() == 1) {
      const Value v = Eval(e.args[0]);
      if (!v.is_vector()) return Value::Real(v.scalar());
      if (v.size() == 0) {
        Fault(FaultKind::kLengthMismatch, "reduction of an empty vector");
      }
      double r = v[0];
      for (std::size_t i = 1; i < v.size(); ++i) {
        r = is_min ? NanMin(r, v[i]) : NanMax(r, v[i]);
      }
      return Value::Real(r);
    }
    Value acc = Eval(e.args[0]);
    for (std::size_t i = 1; i < e.args.size(); ++i) {
      acc = Broadcast(acc, Eval(e.args[i]), is_min ? NanMin : NanMax, false);
    }
    return acc;
  }

  Value EvalNormal(const Expr& e) {
    auto scalar_arg = [&](std::size_t pos, double fallback) {
      const Expr* a = Argument(e, pos);
      if (a == nullptr) return fallback;
      const Value v = Eval(*a);
      if (v.is_vector()) Fault(FaultKind::kType, "normal() loc/scale must be scalars");
      return v.scalar();
    };
    const double loc = scalar_arg(0, 0.0);
    const double scale = scalar_arg(1, 1.0);
    const Expr* size_arg = Argument(e, 2);
    if (size_arg == nullptr) return Value::Real(rng_->Normal(loc, scale));
    const std::size_t n = ShapeLength(Eval(*size_arg));
    Value::Storage out(n);
    for (double& x : out) x = rng_->Normal(loc, scale);
    return Value::RealVector(std::move(out));
  }

  const PolicyAst* ast_;
  EvalOptions options_;
  std::vector<Value> vars_;
  std::vector<bool> bound_;
  std::span<const double> params_;
  Rng* rng_ = nullptr;
  std::size_t nodes_ = 0;
};

Interpreter::Interpreter(const PolicyAst& ast, EvalOptions options)
    : impl_(std::make_unique<Impl>(ast, options)) {}
Interpreter::~Interpreter() = default;
Interpreter::Interpreter(Interpreter&&) noexcept = default;
Interpreter& Interpreter::operator=(Interpreter&&) noexcept = default;

std::vector<double> Interpreter::Run(std::span<const double> params,
                                     std::span<const double> obs, Rng& rng) {
  std::vector<double> out;
  impl_->Run(params, obs, rng, out);
  return out;
}

void Interpreter::RunInto(std::span<const double> params,
                          std::span<const double> obs, Rng& rng,
                          std::vector<double>& out) {
  impl_->Run(params, obs, rng, out);
}

std::vector<double> Evaluate(const PolicyAst& ast, std::span<const double> obs,
                             Rng& rng, EvalOptions options) {
  return Interpreter(ast, options).Run({}, obs, rng);
}

}  // namespace policyforge::lang
