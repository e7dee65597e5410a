#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "igi/value.hpp"

namespace igi {

enum class Op : std::uint8_t {
  Constant,
  Input,
  // toy DSL
  Add,
  Sub,
  Eq,
  Ite,
  // DSL-LM
  Head,
  Last,
  Take,
  Drop,
  Access,
  Minimum,
  Maximum,
  Reverse,
  Sort,
  Sum,
  MapA1,
  MapM1,
  MapT2,
  MapT3,
  MapT4,
  MapD2,
  MapD3,
  MapD4,
  MapV1,
  MapP2,
  FilG0,
  FilL0,
  FilEv,
  FilOd,
  CouG0,
  CouL0,
  CouEv,
  CouOd,
  ZipSum,
  ZipDif,
  ZipMul,
  ZipMax,
  ZipMin,
  ScanSum,
  ScanDif,
  ScanMul,
  ScanMax,
  ScanMin,
  // DSL-ST
  Cat,
  Rep,
  At,
  Its,
  Site,
  Substr,
  StAdd,
  StSub,
  Len,
  Sti,
  Iite,
  Ind,
  StEq,
  Prf,
  Suf,
  Cont,
};

struct Primitive {
  std::string symbol;
  std::vector<SemType> arg_types;
  SemType return_type = SemType::Integer;
  Op op = Op::Constant;
  Value constant;       // Op::Constant only
  int input_index = -1;  // Op::Input only

  std::size_t arity() const { return arg_types.size(); }
  bool is_terminal() const { return arg_types.empty(); }
};

class PrimitiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// The typed primitive set of a DSL: functions first, then constants, then
// external inputs. Immutable once built.
class PrimitiveSet {
 public:
  PrimitiveSet() = default;

  PrimitiveSet(std::string name, std::vector<Primitive> prims) : name_(std::move(name)), prims_(std::move(prims)) {
    if (prims_.size() > std::numeric_limits<std::uint16_t>::max())
      throw PrimitiveError("too many primitives");
    for (std::size_t i = 0; i < prims_.size(); ++i) {
      const auto& p = prims_[i];
      if (!by_symbol_.emplace(p.symbol, static_cast<std::uint16_t>(i)).second)
        throw PrimitiveError("duplicate symbol '" + p.symbol + "' in primitive set " + name_);
      if ((p.op == Op::Constant || p.op == Op::Input) && !p.arg_types.empty())
        throw PrimitiveError("terminal '" + p.symbol + "' has arguments");
      auto& bucket = p.is_terminal() ? terminals_[type_index(p.return_type)] : functions_[type_index(p.return_type)];
      bucket.push_back(static_cast<std::uint16_t>(i));
      if (p.op == Op::Input) ++num_inputs_;
    }
    compute_minima();
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return prims_.size(); }
  const Primitive& operator[](std::size_t i) const { return prims_[i]; }
  const std::vector<Primitive>& primitives() const { return prims_; }
  std::size_t num_inputs() const { return num_inputs_; }

  std::optional<std::uint16_t> find(std::string_view symbol) const {
    auto it = by_symbol_.find(std::string(symbol));
    if (it == by_symbol_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::uint16_t>& terminals_of(SemType t) const { return terminals_[type_index(t)]; }
  const std::vector<std::uint16_t>& functions_returning(SemType t) const { return functions_[type_index(t)]; }
  bool has_terminal(SemType t) const { return !terminals_[type_index(t)].empty(); }

  // Smallest node count / depth of any tree of type t (kUnreachable if none).
  std::size_t min_size(SemType t) const { return min_size_[type_index(t)]; }
  std::size_t min_depth(SemType t) const { return min_depth_[type_index(t)]; }

  std::size_t min_completion_size(std::uint16_t prim) const {
    std::size_t s = 1;
    for (SemType a : prims_[prim].arg_types) {
      if (min_size(a) == kUnreachable) return kUnreachable;
      s += min_size(a);
    }
    return s;
  }

  std::size_t min_completion_depth(std::uint16_t prim) const {
    std::size_t d = 0;
    for (SemType a : prims_[prim].arg_types) {
      if (min_depth(a) == kUnreachable) return kUnreachable;
      d = std::max(d, min_depth(a));
    }
    return d + 1;
  }

  // A copy of this set with one Input terminal per signature position.
  PrimitiveSet with_inputs(const std::vector<SemType>& signature) const {
    std::vector<Primitive> prims = prims_;
    for (std::size_t i = 0; i < signature.size(); ++i) {
      Primitive p;
      p.symbol = "IN" + std::to_string(i);
      p.return_type = signature[i];
      p.op = Op::Input;
      p.input_index = static_cast<int>(i);
      prims.push_back(std::move(p));
    }
    return PrimitiveSet(name_, std::move(prims));
  }

 private:
  void compute_minima() {
    min_size_.fill(kUnreachable);
    min_depth_.fill(kUnreachable);
    for (std::size_t t = 0; t < kNumSemTypes; ++t) {
      if (!terminals_[t].empty()) {
        min_size_[t] = 1;
        min_depth_[t] = 1;
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < prims_.size(); ++i) {
        if (prims_[i].is_terminal()) continue;
        auto t = type_index(prims_[i].return_type);
        auto s = min_completion_size(static_cast<std::uint16_t>(i));
        auto d = min_completion_depth(static_cast<std::uint16_t>(i));
        if (s < min_size_[t]) {
          min_size_[t] = s;
          changed = true;
        }
        if (d < min_depth_[t]) {
          min_depth_[t] = d;
          changed = true;
        }
      }
    }
  }

  std::string name_;
  std::vector<Primitive> prims_;
  std::unordered_map<std::string, std::uint16_t> by_symbol_;
  std::array<std::vector<std::uint16_t>, kNumSemTypes> terminals_;
  std::array<std::vector<std::uint16_t>, kNumSemTypes> functions_;
  std::array<std::size_t, kNumSemTypes> min_size_{};
  std::array<std::size_t, kNumSemTypes> min_depth_{};
  std::size_t num_inputs_ = 0;
};

namespace detail {

inline Primitive fn(std::string symbol, std::vector<SemType> args, SemType ret, Op op) {
  Primitive p;
  p.symbol = std::move(symbol);
  p.arg_types = std::move(args);
  p.return_type = ret;
  p.op = op;
  return p;
}

inline std::vector<Primitive> toy_functions() {
  using enum SemType;
  return {
      fn("ADD", {Integer, Integer}, Integer, Op::Add),
      fn("SUB", {Integer, Integer}, Integer, Op::Sub),
      fn("EQ", {Integer, Integer}, Boolean, Op::Eq),
      fn("ITE", {Boolean, Integer, Integer}, Integer, Op::Ite),
  };
}

inline std::vector<Primitive> list_functions() {
  using enum SemType;
  return {
      fn("HEAD", {IntArray}, Integer, Op::Head),
      fn("LAST", {IntArray}, Integer, Op::Last),
      fn("TAKE", {Integer, IntArray}, IntArray, Op::Take),
      fn("DROP", {Integer, IntArray}, IntArray, Op::Drop),
      fn("ACCESS", {Integer, IntArray}, Integer, Op::Access),
      fn("MINIMUM", {IntArray}, Integer, Op::Minimum),
      fn("MAXIMUM", {IntArray}, Integer, Op::Maximum),
      fn("REVERSE", {IntArray}, IntArray, Op::Reverse),
      fn("SORT", {IntArray}, IntArray, Op::Sort),
      fn("SUM", {IntArray}, Integer, Op::Sum),
      fn("MAPA1", {IntArray}, IntArray, Op::MapA1),
      fn("MAPM1", {IntArray}, IntArray, Op::MapM1),
      fn("MAPT2", {IntArray}, IntArray, Op::MapT2),
      fn("MAPT3", {IntArray}, IntArray, Op::MapT3),
      fn("MAPT4", {IntArray}, IntArray, Op::MapT4),
      fn("MAPD2", {IntArray}, IntArray, Op::MapD2),
      fn("MAPD3", {IntArray}, IntArray, Op::MapD3),
      fn("MAPD4", {IntArray}, IntArray, Op::MapD4),
      fn("MAPV1", {IntArray}, IntArray, Op::MapV1),
      fn("MAPP2", {IntArray}, IntArray, Op::MapP2),
      fn("FILG0", {IntArray}, IntArray, Op::FilG0),
      fn("FILL0", {IntArray}, IntArray, Op::FilL0),
      fn("FILEV", {IntArray}, IntArray, Op::FilEv),
      fn("FILOD", {IntArray}, IntArray, Op::FilOd),
      fn("COUG0", {IntArray}, Integer, Op::CouG0),
      fn("COUL0", {IntArray}, Integer, Op::CouL0),
      fn("COUEV", {IntArray}, Integer, Op::CouEv),
      fn("COUOD", {IntArray}, Integer, Op::CouOd),
      fn("ZIPSUM", {IntArray, IntArray}, IntArray, Op::ZipSum),
      fn("ZIPDIF", {IntArray, IntArray}, IntArray, Op::ZipDif),
      fn("ZIPMUL", {IntArray, IntArray}, IntArray, Op::ZipMul),
      fn("ZIPMAX", {IntArray, IntArray}, IntArray, Op::ZipMax),
      fn("ZIPMIN", {IntArray, IntArray}, IntArray, Op::ZipMin),
      fn("SCANSUM", {IntArray}, IntArray, Op::ScanSum),
      fn("SCANDIF", {IntArray}, IntArray, Op::ScanDif),
      fn("SCANMUL", {IntArray}, IntArray, Op::ScanMul),
      fn("SCANMAX", {IntArray}, IntArray, Op::ScanMax),
      fn("SCANMIN", {IntArray}, IntArray, Op::ScanMin),
  };
}

inline std::vector<Primitive> string_functions() {
  using enum SemType;
  return {
      fn("CAT", {String, String}, String, Op::Cat),
      fn("REP", {String, String, String}, String, Op::Rep),
      fn("AT", {String, Integer}, String, Op::At),
      fn("ITS", {Integer}, String, Op::Its),
      fn("SITE", {Boolean, String, String}, String, Op::Site),
      fn("SUBSTR", {String, Integer, Integer}, String, Op::Substr),
      fn("ADD", {Integer, Integer}, Integer, Op::StAdd),
      fn("SUB", {Integer, Integer}, Integer, Op::StSub),
      fn("LEN", {String}, Integer, Op::Len),
      fn("STI", {String}, Integer, Op::Sti),
      fn("IITE", {Boolean, Integer, Integer}, Integer, Op::Iite),
      fn("IND", {String, String, Integer}, Integer, Op::Ind),
      fn("EQ", {Integer, Integer}, Boolean, Op::StEq),
      fn("PRF", {String, String}, Boolean, Op::Prf),
      fn("SUF", {String, String}, Boolean, Op::Suf),
      fn("CONT", {String, String}, Boolean, Op::Cont),
  };
}

}  // namespace detail

inline bool is_known_dsl(std::string_view name) { return name == "toy" || name == "dsl-lm" || name == "dsl-st"; }

// Terminal symbol used for a constant in program text.
inline std::string constant_symbol(const Value& v) { return to_string(v); }

inline PrimitiveSet builtin_primitive_set(std::string_view name, const std::vector<Value>& constants = {},
                                          const std::optional<std::vector<std::string>>& allowed = std::nullopt) {
  std::vector<Primitive> functions;
  if (name == "toy") {
    functions = detail::toy_functions();
  } else if (name == "dsl-lm") {
    functions = detail::list_functions();
  } else if (name == "dsl-st") {
    functions = detail::string_functions();
  } else {
    throw PrimitiveError("unknown DSL '" + std::string(name) + "'");
  }

  std::vector<Primitive> prims;
  if (allowed) {
    for (const auto& sym : *allowed) {
      auto it = std::find_if(functions.begin(), functions.end(), [&](const Primitive& p) { return p.symbol == sym; });
      if (it == functions.end())
        throw PrimitiveError("unknown symbol '" + sym + "' for DSL " + std::string(name));
      if (std::none_of(prims.begin(), prims.end(), [&](const Primitive& p) { return p.symbol == sym; }))
        prims.push_back(*it);
    }
    // keep the table order regardless of how the allow-list is ordered
    std::stable_sort(prims.begin(), prims.end(), [&](const Primitive& a, const Primitive& b) { return a.op < b.op; });
  } else {
    prims = std::move(functions);
  }

  for (const auto& c : constants) {
    if (c.is_null()) throw PrimitiveError("constant of unsupported type (NULL)");
    Primitive p;
    p.symbol = constant_symbol(c);
    p.return_type = *c.type();
    p.op = Op::Constant;
    p.constant = c;
    prims.push_back(std::move(p));
  }
  return PrimitiveSet(std::string(name), std::move(prims));
}

}  // namespace igi
