#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "igi/tree.hpp"

namespace igi {

using InputEnv = std::vector<Value>;

namespace detail {

using i64 = std::int64_t;

inline i64 floor_div(i64 a, i64 d) {
  i64 q = a / d;
  if ((a % d != 0) && ((a < 0) != (d < 0))) --q;
  return q;
}

template <typename F>
Value map_checked(const IntArray& x, F&& f) {
  IntArray out;
  out.reserve(x.size());
  for (i64 v : x) {
    i64 r;
    if (!f(v, r)) return Value::null();
    out.push_back(r);
  }
  return Value(std::move(out));
}

template <typename P>
IntArray filter(const IntArray& x, P&& pred) {
  IntArray out;
  for (i64 v : x)
    if (pred(v)) out.push_back(v);
  return out;
}

template <typename P>
i64 count(const IntArray& x, P&& pred) {
  return static_cast<i64>(std::count_if(x.begin(), x.end(), pred));
}

template <typename F>
Value zip_checked(const IntArray& x, const IntArray& y, F&& f) {
  std::size_t n = std::min(x.size(), y.size());
  IntArray out(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!f(x[i], y[i], out[i])) return Value::null();
  return Value(std::move(out));
}

template <typename F>
Value scan_checked(const IntArray& x, F&& f) {
  IntArray out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == 0) {
      out[0] = x[0];
    } else if (!f(out[i - 1], x[i], out[i])) {
      return Value::null();
    }
  }
  return Value(std::move(out));
}

inline bool add_ok(i64 a, i64 b, i64& r) { return !__builtin_add_overflow(a, b, &r); }
inline bool sub_ok(i64 a, i64 b, i64& r) { return !__builtin_sub_overflow(a, b, &r); }
inline bool mul_ok(i64 a, i64 b, i64& r) { return !__builtin_mul_overflow(a, b, &r); }

inline i64 wrap_add(i64 a, i64 b) { return static_cast<i64>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b)); }
inline i64 wrap_sub(i64 a, i64 b) { return static_cast<i64>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b)); }

inline std::string replace_first(const std::string& s, const std::string& t, const std::string& r) {
  auto at = s.find(t);
  if (at == std::string::npos) return s;
  std::string out = s;
  out.replace(at, t.size(), r);
  return out;
}

inline i64 string_to_int(const std::string& s) {
  if (s.empty()) return -1;
  for (char c : s)
    if (c < '0' || c > '9') return -1;
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return -1;
  return v;
}

class Evaluator {
 public:
  Evaluator(std::span<const Node> nodes, const PrimitiveSet& ps, std::span<const Value> inputs)
      : nodes_(nodes), ps_(ps), inputs_(inputs) {}

  Value run() {
    pos_ = 0;
    return eval();
  }

 private:
  Value eval() {
    const Node& n = nodes_[pos_++];
    const Primitive& p = ps_[n.prim];
    switch (p.op) {
      case Op::Constant:
        return p.constant;
      case Op::Input:
        return inputs_[static_cast<std::size_t>(p.input_index)];
      default:
        break;
    }
    Value args[3];
    bool any_null = false;
    for (std::size_t i = 0; i < n.arity; ++i) {
      args[i] = eval();
      any_null = any_null || args[i].is_null();
    }
    if (any_null) return Value::null();
    return apply(p.op, args);
  }

  static Value apply(Op op, const Value* a) {
    switch (op) {
      // toy
      case Op::Add: {
        i64 r;
        return add_ok(a[0].as_int(), a[1].as_int(), r) ? Value(r) : Value::null();
      }
      case Op::Sub: {
        i64 r;
        return sub_ok(a[0].as_int(), a[1].as_int(), r) ? Value(r) : Value::null();
      }
      case Op::Eq:
      case Op::StEq:
        return Value(a[0].as_int() == a[1].as_int());
      case Op::Ite:
      case Op::Iite:
      case Op::Site:
        return a[0].as_bool() ? a[1] : a[2];

      // DSL-LM
      case Op::Head: {
        const auto& x = a[0].as_array();
        return x.empty() ? Value::null() : Value(x.front());
      }
      case Op::Last: {
        const auto& x = a[0].as_array();
        return x.empty() ? Value::null() : Value(x.back());
      }
      case Op::Take: {
        i64 n = std::max<i64>(a[0].as_int(), 0);
        const auto& x = a[1].as_array();
        if (static_cast<std::uint64_t>(n) >= x.size()) return a[1];
        return Value(IntArray(x.begin(), x.begin() + n));
      }
      case Op::Drop: {
        i64 n = std::max<i64>(a[0].as_int(), 0);
        const auto& x = a[1].as_array();
        if (static_cast<std::uint64_t>(n) >= x.size()) return Value(IntArray{});
        return Value(IntArray(x.begin() + n, x.end()));
      }
      case Op::Access: {
        i64 n = a[0].as_int();
        const auto& x = a[1].as_array();
        if (n < 0 || static_cast<std::uint64_t>(n) >= x.size()) return Value::null();
        return Value(x[static_cast<std::size_t>(n)]);
      }
      case Op::Minimum: {
        const auto& x = a[0].as_array();
        return x.empty() ? Value::null() : Value(*std::min_element(x.begin(), x.end()));
      }
      case Op::Maximum: {
        const auto& x = a[0].as_array();
        return x.empty() ? Value::null() : Value(*std::max_element(x.begin(), x.end()));
      }
      case Op::Reverse: {
        IntArray x = a[0].as_array();
        std::reverse(x.begin(), x.end());
        return Value(std::move(x));
      }
      case Op::Sort: {
        IntArray x = a[0].as_array();
        std::sort(x.begin(), x.end());
        return Value(std::move(x));
      }
      case Op::Sum: {
        i64 s = 0;
        for (i64 v : a[0].as_array())
          if (!add_ok(s, v, s)) return Value::null();
        return Value(s);
      }
      case Op::MapA1:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return add_ok(v, 1, r); });
      case Op::MapM1:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return sub_ok(v, 1, r); });
      case Op::MapT2:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return mul_ok(v, 2, r); });
      case Op::MapT3:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return mul_ok(v, 3, r); });
      case Op::MapT4:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return mul_ok(v, 4, r); });
      case Op::MapD2:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return r = floor_div(v, 2), true; });
      case Op::MapD3:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return r = floor_div(v, 3), true; });
      case Op::MapD4:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return r = floor_div(v, 4), true; });
      case Op::MapV1:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return mul_ok(v, -1, r); });
      case Op::MapP2:
        return map_checked(a[0].as_array(), [](i64 v, i64& r) { return mul_ok(v, v, r); });
      case Op::FilG0:
        return Value(filter(a[0].as_array(), [](i64 v) { return v > 0; }));
      case Op::FilL0:
        return Value(filter(a[0].as_array(), [](i64 v) { return v < 0; }));
      case Op::FilEv:
        return Value(filter(a[0].as_array(), [](i64 v) { return v % 2 == 0; }));
      case Op::FilOd:
        return Value(filter(a[0].as_array(), [](i64 v) { return v % 2 != 0; }));
      case Op::CouG0:
        return Value(count(a[0].as_array(), [](i64 v) { return v > 0; }));
      case Op::CouL0:
        return Value(count(a[0].as_array(), [](i64 v) { return v < 0; }));
      case Op::CouEv:
        return Value(count(a[0].as_array(), [](i64 v) { return v % 2 == 0; }));
      case Op::CouOd:
        return Value(count(a[0].as_array(), [](i64 v) { return v % 2 != 0; }));
      case Op::ZipSum:
        return zip_checked(a[0].as_array(), a[1].as_array(), add_ok);
      case Op::ZipDif:
        return zip_checked(a[0].as_array(), a[1].as_array(), sub_ok);
      case Op::ZipMul:
        return zip_checked(a[0].as_array(), a[1].as_array(), mul_ok);
      case Op::ZipMax:
        return zip_checked(a[0].as_array(), a[1].as_array(), [](i64 x, i64 y, i64& r) { return r = std::max(x, y), true; });
      case Op::ZipMin:
        return zip_checked(a[0].as_array(), a[1].as_array(), [](i64 x, i64 y, i64& r) { return r = std::min(x, y), true; });
      case Op::ScanSum:
        return scan_checked(a[0].as_array(), add_ok);
      case Op::ScanDif:
        return scan_checked(a[0].as_array(), sub_ok);
      case Op::ScanMul:
        return scan_checked(a[0].as_array(), mul_ok);
      case Op::ScanMax:
        return scan_checked(a[0].as_array(), [](i64 p, i64 v, i64& r) { return r = std::max(p, v), true; });
      case Op::ScanMin:
        return scan_checked(a[0].as_array(), [](i64 p, i64 v, i64& r) { return r = std::min(p, v), true; });

      // DSL-ST
      case Op::Cat:
        return Value(a[0].as_string() + a[1].as_string());
      case Op::Rep:
        return Value(replace_first(a[0].as_string(), a[1].as_string(), a[2].as_string()));
      case Op::At: {
        const auto& s = a[0].as_string();
        i64 i = a[1].as_int();
        if (i < 0 || static_cast<std::uint64_t>(i) >= s.size()) return Value(std::string());
        return Value(std::string(1, s[static_cast<std::size_t>(i)]));
      }
      case Op::Its: {
        i64 x = a[0].as_int();
        return x < 0 ? Value(std::string()) : Value(std::to_string(x));
      }
      case Op::Substr: {
        const auto& s = a[0].as_string();
        i64 i = a[1].as_int();
        i64 j = a[2].as_int();
        i64 n = static_cast<i64>(s.size());
        if (i < 0 || j < 0 || i >= n) return Value(std::string());
        i64 end = (j > n - i) ? n : i + j;
        return Value(s.substr(static_cast<std::size_t>(i), static_cast<std::size_t>(end - i)));
      }
      case Op::StAdd:
        return Value(wrap_add(a[0].as_int(), a[1].as_int()));
      case Op::StSub:
        return Value(wrap_sub(a[0].as_int(), a[1].as_int()));
      case Op::Len:
        return Value(static_cast<i64>(a[0].as_string().size()));
      case Op::Sti:
        return Value(string_to_int(a[0].as_string()));
      case Op::Ind: {
        const auto& s = a[0].as_string();
        const auto& t = a[1].as_string();
        i64 i = a[2].as_int();
        if (i < 0 || static_cast<std::uint64_t>(i) >= s.size()) return Value(i64{-1});
        auto at = s.find(t, static_cast<std::size_t>(i));
        return Value(at == std::string::npos ? i64{-1} : static_cast<i64>(at));
      }
      case Op::Prf: {
        const auto& s = a[0].as_string();
        const auto& t = a[1].as_string();
        return Value(t.size() >= s.size() && t.compare(0, s.size(), s) == 0);
      }
      case Op::Suf: {
        const auto& s = a[0].as_string();
        const auto& t = a[1].as_string();
        return Value(t.size() >= s.size() && t.compare(t.size() - s.size(), s.size(), s) == 0);
      }
      case Op::Cont:
        return Value(a[0].as_string().find(a[1].as_string()) != std::string::npos);

      case Op::Constant:
      case Op::Input:
        break;
    }
    return Value::null();
  }

  std::span<const Node> nodes_;
  const PrimitiveSet& ps_;
  std::span<const Value> inputs_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Evaluates a well-typed tree bottom-up. Total: partial DSL-LM functions and
// integer overflow yield Null, which propagates through every function;
// DSL-ST functions return their sentinels instead.
inline Value evaluate(const ProgramTree& tree, const PrimitiveSet& ps, std::span<const Value> inputs) {
  return detail::Evaluator(tree.nodes(), ps, inputs).run();
}

inline Value evaluate_nodes(std::span<const Node> nodes, const PrimitiveSet& ps, std::span<const Value> inputs) {
  return detail::Evaluator(nodes, ps, inputs).run();
}

}  // namespace igi
