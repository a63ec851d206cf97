// Compiled evaluator for the FO dialect over an abstract position structure
// with every quantifier relativized to [0, bound).
//
// The Model type supplies:
//   int64_t letter_id(uint64_t pos) const;
//   std::optional<int64_t> resolve_letter(const std::string& name) const;
//   static constexpr bool has_sim;
//   bool sim(uint64_t i, uint64_t j) const;   // only used when has_sim
//
// The compiler assigns every binder a unique slot (recycled variable names
// shadow correctly), collects per-node free slots for memoization, turns
// disjunctions of letter atoms into hashed letter sets, and derives candidate
// ranges for each quantifier from its top-level guard atoms. All of this
// preserves the naive relativized semantics exactly.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ocmc/formula.hpp"

namespace ocmc {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Views a core-form formula as a disjunction list (or(a,b) is encoded as
// not(and(not a, not b))).
inline void flatten_or(const Fo& f, std::vector<Fo>& out) {
  if (f->kind == FoKind::Not && f->a->kind == FoKind::And) {
    auto neg = [](const Fo& g) {
      return g->kind == FoKind::Not ? g->a : fo_not(g);
    };
    flatten_or(neg(f->a->a), out);
    flatten_or(neg(f->a->b), out);
    return;
  }
  out.push_back(f);
}

inline void flatten_and(const Fo& f, std::vector<Fo>& out) {
  if (f->kind == FoKind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
    return;
  }
  out.push_back(f);
}

}  // namespace detail

template <class Model>
class FoEvaluator {
 public:
  FoEvaluator(const Fo& formula, const Model& model, uint64_t bound)
      : model_(model), bound_(bound) {
    std::vector<std::pair<std::string, int>> env;
    root_ = compile(formula, env);
    slot_val_.assign(num_slots_, 0);
    slot_def_.assign(num_slots_, 0);
    finish_free_slots();
  }

  uint64_t bound() const { return bound_; }

  // Memo entries are keyed by every slot a node depends on, so they stay
  // valid across calls with different valuations.
  bool eval(const std::map<std::string, uint64_t>& valuation = {}) {
    for (auto& [name, slot] : free_by_name_) {
      auto it = valuation.find(name);
      if (it != valuation.end()) {
        slot_val_[slot] = it->second;
        slot_def_[slot] = 1;
      } else {
        slot_def_[slot] = 0;
      }
    }
    return eval_node(root_);
  }

 private:
  enum class Op : uint8_t {
    True, Letter, LetterSet, LetterPairSet, Sim, Lt, Succ, DistLt, PosLt,
    Not, And, Exists
  };

  struct Guard {
    // candidate range for the bound slot derived from one conjunct
    enum class Kind : uint8_t { EqPlus, EqMinus, LtOther, GtOther, LoDist, HiDist, HiConst } kind;
    int other = -1;
    uint64_t c = 0;
  };

  struct Node {
    Op op = Op::True;
    int64_t letter = 0;
    int xs = -1, ys = -1;   // slots; Exists: xs = the bound slot
    uint64_t c = 0;
    int a = -1, b = -1;
    std::vector<int> free_slots;
    std::vector<Guard> guards;                    // Exists only
    std::unordered_set<int64_t> letter_set;       // LetterSet
    std::unordered_set<uint64_t> letter_pairs;    // LetterPairSet (packed)
    mutable std::unordered_map<uint64_t, bool> memo;
    bool memoizable = false;
  };

  static uint64_t pack_pair(int64_t i, int64_t j) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(j));
  }

  int64_t resolve(const std::string& name) const {
    auto id = model_.resolve_letter(name);
    return id ? *id : kNoLetter;
  }

  int slot_of(const std::string& name, std::vector<std::pair<std::string, int>>& env) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = free_by_name_.find(name);
    if (it != free_by_name_.end()) return it->second;
    int slot = num_slots_++;
    free_by_name_.emplace(name, slot);
    return slot;
  }

  int add_node(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Tries to compile f as a disjunction of letter atoms over one or two
  // fixed variables.
  std::optional<int> try_letter_disjunction(const Fo& f,
                                            std::vector<std::pair<std::string, int>>& env) {
    if (!(f->kind == FoKind::Not && f->a->kind == FoKind::And)) return std::nullopt;
    std::vector<Fo> items;
    detail::flatten_or(f, items);
    if (items.size() < 4) return std::nullopt;
    auto is_pair = [](const Fo& it) {
      return it->kind == FoKind::And && it->a && it->b &&
             it->a->kind == FoKind::Letter && it->b->kind == FoKind::Letter;
    };
    if (items[0]->kind == FoKind::Letter) {
      for (const Fo& it : items)
        if (!(it->kind == FoKind::Letter && it->x == items[0]->x))
          return std::nullopt;
      Node n;
      n.op = Op::LetterSet;
      n.xs = slot_of(items[0]->x, env);
      for (const Fo& it : items) n.letter_set.insert(resolve(it->atom));
      return add_node(std::move(n));
    }
    if (!is_pair(items[0]) || items[0]->a->x == items[0]->b->x) return std::nullopt;
    for (const Fo& it : items)
      if (!(is_pair(it) && it->a->x == items[0]->a->x && it->b->x == items[0]->b->x))
        return std::nullopt;
    Node n;
    n.op = Op::LetterPairSet;
    n.xs = slot_of(items[0]->a->x, env);
    n.ys = slot_of(items[0]->b->x, env);
    for (const Fo& it : items)
      n.letter_pairs.insert(pack_pair(resolve(it->a->atom), resolve(it->b->atom)));
    return add_node(std::move(n));
  }

  int compile(const Fo& f, std::vector<std::pair<std::string, int>>& env) {
    if (!f) throw EvalError("null formula");
    switch (f->kind) {
      case FoKind::True: {
        Node n;
        n.op = Op::True;
        return add_node(std::move(n));
      }
      case FoKind::Letter: {
        Node n;
        n.op = Op::Letter;
        n.letter = resolve(f->atom);
        n.xs = slot_of(f->x, env);
        return add_node(std::move(n));
      }
      case FoKind::Sim: {
        if constexpr (!Model::has_sim)
          throw EvalError("sim atom not supported over this word");
        Node n;
        n.op = Op::Sim;
        n.xs = slot_of(f->x, env);
        n.ys = slot_of(f->y, env);
        return add_node(std::move(n));
      }
      case FoKind::Lt:
      case FoKind::Succ:
      case FoKind::DistLt: {
        Node n;
        n.op = f->kind == FoKind::Lt      ? Op::Lt
               : f->kind == FoKind::Succ ? Op::Succ
                                         : Op::DistLt;
        n.xs = slot_of(f->x, env);
        n.ys = slot_of(f->y, env);
        n.c = f->c;
        return add_node(std::move(n));
      }
      case FoKind::PosLt: {
        Node n;
        n.op = Op::PosLt;
        n.xs = slot_of(f->x, env);
        n.c = f->c;
        return add_node(std::move(n));
      }
      case FoKind::Not: {
        if (auto sp = try_letter_disjunction(f, env)) return *sp;
        int a = compile(f->a, env);
        Node n;
        n.op = Op::Not;
        n.a = a;
        return add_node(std::move(n));
      }
      case FoKind::And: {
        int a = compile(f->a, env);
        int b = compile(f->b, env);
        Node n;
        n.op = Op::And;
        n.a = a;
        n.b = b;
        return add_node(std::move(n));
      }
      case FoKind::Exists: {
        int slot = num_slots_++;
        env.emplace_back(f->x, slot);
        int body = compile(f->a, env);
        env.pop_back();
        Node n;
        n.op = Op::Exists;
        n.xs = slot;
        n.a = body;
        collect_guards(f->a, f->x, env, n.guards);
        return add_node(std::move(n));
      }
    }
    throw EvalError("bad FO node");
  }

  // Range restrictions on the bound variable from top-level conjuncts of the
  // quantifier body. Re-evaluating the conjuncts afterwards is still exact;
  // the guards only skip positions that would fail them anyway.
  void collect_guards(const Fo& body, const std::string& var,
                      std::vector<std::pair<std::string, int>>& env,
                      std::vector<Guard>& out) {
    std::vector<Fo> cs;
    detail::flatten_and(body, cs);
    for (const Fo& g : cs) {
      switch (g->kind) {
        case FoKind::Succ:
          if (g->x == var && g->y != var)
            out.push_back({Guard::Kind::EqPlus, slot_of(g->y, env), g->c});
          else if (g->y == var && g->x != var)
            out.push_back({Guard::Kind::EqMinus, slot_of(g->x, env), g->c});
          break;
        case FoKind::Lt:
          if (g->x == var && g->y != var)
            out.push_back({Guard::Kind::LtOther, slot_of(g->y, env), 0});
          else if (g->y == var && g->x != var)
            out.push_back({Guard::Kind::GtOther, slot_of(g->x, env), 0});
          break;
        case FoKind::DistLt:
          // DistLt(x, y, c) holds iff u(y) < u(x) + c
          if (g->x == var && g->y != var)
            out.push_back({Guard::Kind::LoDist, slot_of(g->y, env), g->c});
          else if (g->y == var && g->x != var)
            out.push_back({Guard::Kind::HiDist, slot_of(g->x, env), g->c});
          break;
        case FoKind::PosLt:
          if (g->x == var) out.push_back({Guard::Kind::HiConst, -1, g->c});
          break;
        default:
          break;
      }
    }
  }

  void finish_free_slots() {
    // free_slots bottom-up; nodes_ is in post-order (children precede parents)
    for (Node& n : nodes_) {
      std::vector<int> fs;
      switch (n.op) {
        case Op::True:
          break;
        case Op::Letter:
        case Op::LetterSet:
        case Op::PosLt:
          fs.push_back(n.xs);
          break;
        case Op::LetterPairSet:
        case Op::Sim:
        case Op::Lt:
        case Op::Succ:
        case Op::DistLt:
          fs.push_back(n.xs);
          fs.push_back(n.ys);
          break;
        case Op::Not:
          fs = nodes_[n.a].free_slots;
          break;
        case Op::And: {
          fs = nodes_[n.a].free_slots;
          fs.insert(fs.end(), nodes_[n.b].free_slots.begin(),
                    nodes_[n.b].free_slots.end());
          break;
        }
        case Op::Exists: {
          fs = nodes_[n.a].free_slots;
          std::erase(fs, n.xs);
          break;
        }
      }
      std::sort(fs.begin(), fs.end());
      fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
      n.free_slots = std::move(fs);
      bool compound = n.op == Op::Not || n.op == Op::And || n.op == Op::Exists;
      n.memoizable = compound && n.free_slots.size() <= 3 &&
                     bound_ + 1 < (uint64_t(1) << 21);
    }
  }

  bool eval_node(int idx) {
    const Node& n = nodes_[idx];
    switch (n.op) {
      case Op::True:
        return true;
      case Op::Letter:
        return slot_def_[n.xs] && model_.letter_id(slot_val_[n.xs]) == n.letter;
      case Op::LetterSet:
        return slot_def_[n.xs] &&
               n.letter_set.count(model_.letter_id(slot_val_[n.xs])) > 0;
      case Op::LetterPairSet:
        return slot_def_[n.xs] && slot_def_[n.ys] &&
               n.letter_pairs.count(pack_pair(model_.letter_id(slot_val_[n.xs]),
                                              model_.letter_id(slot_val_[n.ys]))) > 0;
      case Op::Sim:
        if constexpr (Model::has_sim)
          return slot_def_[n.xs] && slot_def_[n.ys] &&
                 model_.sim(slot_val_[n.xs], slot_val_[n.ys]);
        return false;
      case Op::Lt:
        return slot_def_[n.xs] && slot_def_[n.ys] &&
               slot_val_[n.xs] < slot_val_[n.ys];
      case Op::Succ:
        return slot_def_[n.xs] && slot_def_[n.ys] &&
               slot_val_[n.xs] == slot_val_[n.ys] + n.c;
      case Op::DistLt:
        return slot_def_[n.xs] && slot_def_[n.ys] &&
               slot_val_[n.ys] < slot_val_[n.xs] + n.c;
      case Op::PosLt:
        return slot_def_[n.xs] && slot_val_[n.xs] < n.c;
      case Op::Not:
      case Op::And:
      case Op::Exists:
        break;
    }

    uint64_t key = 0;
    if (n.memoizable) {
      // values fit in 21 bits, at most three slots: key < 2^63
      for (int s : n.free_slots)
        key = (key << 21) | (slot_def_[s] ? slot_val_[s] + 1 : 0);
      auto it = n.memo.find(key);
      if (it != n.memo.end()) return it->second;
    }

    bool r = false;
    switch (n.op) {
      case Op::Not:
        r = !eval_node(n.a);
        break;
      case Op::And:
        r = eval_node(n.a) && eval_node(n.b);
        break;
      case Op::Exists: {
        uint64_t lo = 0;
        uint64_t hi = bound_ == 0 ? 0 : bound_ - 1;
        bool empty = bound_ == 0;
        for (const Guard& g : n.guards) {
          if (empty) break;
          if (g.other >= 0 && !slot_def_[g.other]) continue;
          uint64_t ov = g.other >= 0 ? slot_val_[g.other] : 0;
          switch (g.kind) {
            case Guard::Kind::EqPlus:
              lo = std::max(lo, ov + g.c);
              hi = std::min(hi, ov + g.c);
              break;
            case Guard::Kind::EqMinus:
              if (ov < g.c) empty = true;
              else {
                lo = std::max(lo, ov - g.c);
                hi = std::min(hi, ov - g.c);
              }
              break;
            case Guard::Kind::LtOther:
              if (ov == 0) empty = true;
              else hi = std::min(hi, ov - 1);
              break;
            case Guard::Kind::GtOther:
              lo = std::max(lo, ov + 1);
              break;
            case Guard::Kind::LoDist:
              lo = std::max(lo, ov >= g.c ? ov - g.c + 1 : 0);
              break;
            case Guard::Kind::HiDist:
              if (ov + g.c == 0) empty = true;
              else hi = std::min(hi, ov + g.c - 1);
              break;
            case Guard::Kind::HiConst:
              if (g.c == 0) empty = true;
              else hi = std::min(hi, g.c - 1);
              break;
          }
          if (lo > hi) empty = true;
        }
        if (!empty) {
          slot_def_[n.xs] = 1;
          for (uint64_t v = lo; v <= hi; ++v) {
            slot_val_[n.xs] = v;
            if (eval_node(n.a)) {
              r = true;
              break;
            }
          }
          slot_def_[n.xs] = 0;
        }
        break;
      }
      default:
        break;
    }
    if (n.memoizable) n.memo.emplace(key, r);
    return r;
  }

  // Models hand out letter ids in [-1, 2^31); -2 marks a name the model does
  // not know, which then matches no position.
  static constexpr int64_t kNoLetter = -2;

  const Model& model_;
  uint64_t bound_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int num_slots_ = 0;
  std::unordered_map<std::string, int> free_by_name_;
  std::vector<uint64_t> slot_val_;
  std::vector<uint8_t> slot_def_;
};

}  // namespace ocmc
