#pragma once

// First-order unification over sort trees with holes. Rigid variables stand
// for degree variables and only unify with themselves.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace twosig::detail {

struct UType {
  enum class Kind { Rigid, Con, Hole };

  Kind kind = Kind::Con;
  std::size_t id = 0;  // rigid index or hole id
  std::string name;
  std::vector<UType> args;

  static UType rigid(std::size_t i) { return {Kind::Rigid, i, {}, {}}; }
  static UType hole(std::size_t i) { return {Kind::Hole, i, {}, {}}; }
  static UType con(std::string n, std::vector<UType> a = {}) {
    return {Kind::Con, 0, std::move(n), std::move(a)};
  }
};

class Unifier {
 public:
  UType fresh() {
    bindings_.emplace_back();
    return UType::hole(bindings_.size() - 1);
  }

  bool unify(const UType& a, const UType& b) {
    UType x = walk(a);
    UType y = walk(b);
    if (x.kind == UType::Kind::Hole && y.kind == UType::Kind::Hole && x.id == y.id) return true;
    if (x.kind == UType::Kind::Hole) return bind(x.id, y);
    if (y.kind == UType::Kind::Hole) return bind(y.id, x);
    if (x.kind != y.kind) return false;
    if (x.kind == UType::Kind::Rigid) return x.id == y.id;
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      if (!unify(x.args[i], y.args[i])) return false;
    }
    return true;
  }

  /// Fully applies the current bindings.
  UType zonk(const UType& t) const {
    UType w = walk(t);
    if (w.kind != UType::Kind::Con) return w;
    for (auto& a : w.args) a = zonk(a);
    return w;
  }

  static bool has_holes(const UType& t) {
    if (t.kind == UType::Kind::Hole) return true;
    for (const auto& a : t.args) {
      if (has_holes(a)) return true;
    }
    return false;
  }

 private:
  UType walk(const UType& t) const {
    const UType* cur = &t;
    while (cur->kind == UType::Kind::Hole && bindings_[cur->id]) cur = &*bindings_[cur->id];
    return *cur;
  }

  bool occurs(std::size_t hole, const UType& t) const {
    UType w = walk(t);
    if (w.kind == UType::Kind::Hole) return w.id == hole;
    for (const auto& a : w.args) {
      if (occurs(hole, a)) return true;
    }
    return false;
  }

  bool bind(std::size_t hole, const UType& t) {
    if (occurs(hole, t)) return false;
    bindings_[hole] = t;
    return true;
  }

  std::vector<std::optional<UType>> bindings_;
};

}  // namespace twosig::detail
