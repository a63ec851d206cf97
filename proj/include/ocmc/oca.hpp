// One-counter automata: data model, textual format, validation, determinism
// checks and one-step transition semantics.

#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ocmc {

enum class Instr : uint8_t { Inc, Dec, Ifzero };

inline const char* instr_name(Instr in) {
  switch (in) {
    case Instr::Inc: return "inc";
    case Instr::Dec: return "dec";
    case Instr::Ifzero: return "ifzero";
  }
  return "?";
}

inline std::optional<Instr> instr_from_name(std::string_view s) {
  if (s == "inc") return Instr::Inc;
  if (s == "dec") return Instr::Dec;
  if (s == "ifzero") return Instr::Ifzero;
  return std::nullopt;
}

using StateId = uint32_t;

struct Transition {
  StateId src;
  Instr instr;
  StateId dst;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// A configuration of the induced transition system. Counters never go below
// zero; dec is disabled at zero.
struct Config {
  StateId state;
  uint64_t counter;

  friend bool operator==(const Config&, const Config&) = default;
};

struct OcaError : std::runtime_error {
  explicit OcaError(const std::string& what) : std::runtime_error(what) {}
};

// State ids are interned in declaration order, which gives every construction
// in this library a stable total order on states.
class Oca {
 public:
  StateId add_state(const std::string& name) {
    if (name.empty() || !valid_state_name(name))
      throw OcaError("invalid state id '" + name + "'");
    if (index_.count(name)) throw OcaError("duplicate state '" + name + "'");
    StateId id = static_cast<StateId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    accepting_.push_back(false);
    return id;
  }

  void set_initial(StateId q) {
    check_state(q);
    if (initial_set_) throw OcaError("duplicate initial state");
    initial_ = q;
    initial_set_ = true;
  }

  void mark_accepting(StateId q) {
    check_state(q);
    accepting_[q] = true;
  }

  void add_transition(StateId src, Instr in, StateId dst) {
    check_state(src);
    check_state(dst);
    Transition t{src, in, dst};
    for (const Transition& u : transitions_)
      if (u == t)
        throw OcaError("duplicate transition " + names_[src] + " " +
                       instr_name(in) + " " + names_[dst]);
    transitions_.push_back(t);
  }

  size_t state_count() const { return names_.size(); }
  StateId initial() const {
    if (!initial_set_) throw OcaError("no initial state");
    return initial_;
  }
  bool has_initial() const { return initial_set_; }
  bool is_accepting(StateId q) const { return accepting_.at(q); }
  const std::string& state_name(StateId q) const { return names_.at(q); }
  const std::vector<Transition>& transitions() const { return transitions_; }

  std::optional<StateId> find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<StateId> accepting_states() const {
    std::vector<StateId> out;
    for (StateId q = 0; q < names_.size(); ++q)
      if (accepting_[q]) out.push_back(q);
    return out;
  }

  std::vector<Transition> outgoing(StateId q) const {
    std::vector<Transition> out;
    for (const Transition& t : transitions_)
      if (t.src == q) out.push_back(t);
    return out;
  }

  void validate() const {
    if (names_.empty()) throw OcaError("automaton has no states");
    if (!initial_set_) throw OcaError("no initial state");
  }

  static bool valid_state_name(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
      return false;
    for (char c : s.substr(1))
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
        return false;
    return true;
  }

 private:
  void check_state(StateId q) const {
    if (q >= names_.size()) throw OcaError("state id out of range");
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
  std::vector<bool> accepting_;
  std::vector<Transition> transitions_;
  StateId initial_ = 0;
  bool initial_set_ = false;
};

struct ParseError : OcaError {
  int line;
  ParseError(int ln, const std::string& what)
      : OcaError("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

namespace detail {
inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}
}  // namespace detail

// Line-oriented OCA format:
//   states <id> <id> ...
//   init <id>
//   accept <id> ...        (may list nothing)
//   <src> <inc|dec|ifzero> <dst>
// '#' starts a comment.
inline Oca parse_oca(std::string_view text) {
  Oca a;
  std::vector<std::pair<int, std::vector<std::string>>> accept_lines;
  std::vector<std::pair<int, std::vector<std::string>>> trans_lines;
  int ln = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++ln;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    if (size_t h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    std::vector<std::string> tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "states") {
      for (size_t i = 1; i < tok.size(); ++i) {
        if (!Oca::valid_state_name(tok[i]))
          throw ParseError(ln, "invalid state id '" + tok[i] + "'");
        if (a.find_state(tok[i]))
          throw ParseError(ln, "duplicate state '" + tok[i] + "'");
        a.add_state(tok[i]);
      }
    } else if (tok[0] == "init") {
      if (tok.size() != 2) throw ParseError(ln, "init expects one state id");
      auto q = a.find_state(tok[1]);
      if (!q) throw ParseError(ln, "undeclared state '" + tok[1] + "'");
      if (a.has_initial()) throw ParseError(ln, "duplicate initial");
      a.set_initial(*q);
    } else if (tok[0] == "accept") {
      accept_lines.emplace_back(ln, std::vector<std::string>(tok.begin() + 1, tok.end()));
    } else if (tok.size() == 3) {
      trans_lines.emplace_back(ln, tok);
    } else {
      throw ParseError(ln, "cannot parse '" + std::string(line) + "'");
    }
  }
  for (const auto& [l, ids] : accept_lines)
    for (const std::string& id : ids) {
      auto q = a.find_state(id);
      if (!q) throw ParseError(l, "undeclared state '" + id + "'");
      a.mark_accepting(*q);
    }
  for (const auto& [l, tok] : trans_lines) {
    auto src = a.find_state(tok[0]);
    if (!src) throw ParseError(l, "undeclared state '" + tok[0] + "'");
    auto in = instr_from_name(tok[1]);
    if (!in) throw ParseError(l, "unknown instruction '" + tok[1] + "'");
    auto dst = a.find_state(tok[2]);
    if (!dst) throw ParseError(l, "undeclared state '" + tok[2] + "'");
    try {
      a.add_transition(*src, *in, *dst);
    } catch (const OcaError& e) {
      throw ParseError(l, e.what());
    }
  }
  a.validate();
  return a;
}

inline std::string render_oca(const Oca& a) {
  std::string out = "states";
  for (StateId q = 0; q < a.state_count(); ++q)
    out += " " + a.state_name(q);
  out += "\ninit " + a.state_name(a.initial()) + "\naccept";
  for (StateId q : a.accepting_states()) out += " " + a.state_name(q);
  out += "\n";
  for (const Transition& t : a.transitions())
    out += a.state_name(t.src) + " " + std::string(instr_name(t.instr)) + " " +
           a.state_name(t.dst) + "\n";
  return out;
}

inline bool oca_equal(const Oca& x, const Oca& y) {
  if (x.state_count() != y.state_count()) return false;
  for (StateId q = 0; q < x.state_count(); ++q) {
    if (x.state_name(q) != y.state_name(q)) return false;
    if (x.is_accepting(q) != y.is_accepting(q)) return false;
  }
  return x.initial() == y.initial() && x.transitions() == y.transitions();
}

// One-step successors: inc adds 1, dec fires only at counter >= 1,
// ifzero fires only at counter 0 and leaves it 0.
inline std::vector<Config> successors(const Oca& a, const Config& c) {
  std::vector<Config> out;
  for (const Transition& t : a.transitions()) {
    if (t.src != c.state) continue;
    switch (t.instr) {
      case Instr::Inc:
        out.push_back({t.dst, c.counter + 1});
        break;
      case Instr::Dec:
        if (c.counter >= 1) out.push_back({t.dst, c.counter - 1});
        break;
      case Instr::Ifzero:
        if (c.counter == 0) out.push_back({t.dst, 0});
        break;
    }
  }
  return out;
}

// Deterministic shape: each state has either a single inc transition, or an
// ifzero/dec pair, or no transition at all.
inline bool is_deterministic(const Oca& a) {
  for (StateId q = 0; q < a.state_count(); ++q) {
    int inc = 0, dec = 0, ifz = 0;
    for (const Transition& t : a.transitions())
      if (t.src == q) {
        if (t.instr == Instr::Inc) ++inc;
        if (t.instr == Instr::Dec) ++dec;
        if (t.instr == Instr::Ifzero) ++ifz;
      }
    int total = inc + dec + ifz;
    bool ok = (total == 0) || (total == 1 && inc == 1) ||
              (total == 2 && ifz == 1 && dec == 1);
    if (!ok) return false;
  }
  return true;
}

// Weak determinism: no state has two transitions with the same instruction
// and different targets (duplicates are rejected at construction, so this is
// simply "at most one transition per (state, instruction)").
inline bool is_weakly_deterministic(const Oca& a) {
  for (StateId q = 0; q < a.state_count(); ++q) {
    int cnt[3] = {0, 0, 0};
    for (const Transition& t : a.transitions())
      if (t.src == q) ++cnt[static_cast<int>(t.instr)];
    if (cnt[0] > 1 || cnt[1] > 1 || cnt[2] > 1) return false;
  }
  return true;
}

inline std::optional<Config> step_deterministic(const Oca& a, const Config& c) {
  for (const Transition& t : a.transitions()) {
    if (t.src != c.state) continue;
    switch (t.instr) {
      case Instr::Inc:
        return Config{t.dst, c.counter + 1};
      case Instr::Dec:
        if (c.counter >= 1) return Config{t.dst, c.counter - 1};
        break;
      case Instr::Ifzero:
        if (c.counter == 0) return Config{t.dst, 0};
        break;
    }
  }
  return std::nullopt;
}

// First min(len, run length) configurations of the unique run from
// (initial, 0). Shorter than len only if the run is stuck.
inline std::vector<Config> run_prefix(const Oca& a, size_t len) {
  std::vector<Config> out;
  if (len == 0) return out;
  Config c{a.initial(), 0};
  out.push_back(c);
  while (out.size() < len) {
    auto next = step_deterministic(a, c);
    if (!next) break;
    c = *next;
    out.push_back(c);
  }
  return out;
}

}  // namespace ocmc
