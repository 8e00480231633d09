#pragma once

// Set systems over [m], exact argument complexity c(F) and decision trees.

#include "hexatope/budget.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexatope {

using Mask = std::uint32_t;

inline constexpr int kMaxGround = 24;

class SetFamily {
 public:
  SetFamily() : SetFamily(0) {}
  explicit SetFamily(int m) : m_(m) {
    if (m < 0 || m > kMaxGround) throw std::invalid_argument("ground set size must lie in [0, 24]");
    bits_.assign(((std::size_t{1} << m) + 63) / 64, 0);
  }

  static SetFamily power_set(int m) {
    SetFamily f(m);
    for (Mask a = 0; a < f.universe(); ++a) f.insert(a);
    return f;
  }
  static SetFamily only_empty(int m) {
    SetFamily f(m);
    f.insert(0);
    return f;
  }
  static SetFamily from_members(int m, const std::vector<Mask>& members) {
    SetFamily f(m);
    for (Mask a : members) f.insert(a);
    return f;
  }
  template <typename Pred>
  static SetFamily from_predicate(int m, Pred&& pred) {
    SetFamily f(m);
    for (Mask a = 0; a < f.universe(); ++a)
      if (pred(a)) f.insert(a);
    return f;
  }

  int m() const { return m_; }
  Mask universe() const { return Mask{1} << m_; }
  Mask full_mask() const { return universe() - 1; }

  bool contains(Mask a) const {
    check(a);
    return (bits_[a >> 6] >> (a & 63)) & 1U;
  }
  void insert(Mask a) {
    check(a);
    bits_[a >> 6] |= std::uint64_t{1} << (a & 63);
  }
  void erase(Mask a) {
    check(a);
    bits_[a >> 6] &= ~(std::uint64_t{1} << (a & 63));
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::vector<Mask> members() const {
    std::vector<Mask> out;
    for (Mask a = 0; a < universe(); ++a)
      if (contains(a)) out.push_back(a);
    return out;
  }

  bool is_trivial() const {
    const std::size_t n = size();
    return n == 0 || n == universe();
  }

  bool is_downward_closed() const {
    for (Mask a = 0; a < universe(); ++a) {
      if (!contains(a)) continue;
      for (Mask rest = a; rest; rest &= rest - 1)
        if (!contains(a & ~(rest & (~rest + 1)))) return false;
    }
    return true;
  }

  bool is_monotone_increasing() const {
    for (Mask a = 0; a < universe(); ++a) {
      if (!contains(a)) continue;
      for (int e = 0; e < m_; ++e)
        if (!contains(a | (Mask{1} << e))) return false;
    }
    return true;
  }

  /// Family of {A ∖ {e} : e ∈ A ∈ F} (answer yes) or {A ∈ F : e ∉ A} (answer no), on m−1 elements.
  SetFamily restrict(int e, bool answer) const {
    if (e < 0 || e >= m_) throw std::out_of_range("element out of range");
    SetFamily out(m_ - 1);
    const Mask low = (Mask{1} << e) - 1;
    for (Mask b = 0; b < out.universe(); ++b) {
      Mask a = (b & low) | ((b & ~low) << 1);
      if (answer) a |= Mask{1} << e;
      if (contains(a)) out.insert(b);
    }
    return out;
  }

  friend bool operator==(const SetFamily&, const SetFamily&) = default;

 private:
  void check(Mask a) const {
    if (a >= universe()) throw std::out_of_range("subset mask outside the ground set");
  }

  int m_;
  std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// decision trees

struct DecisionTree {
  struct Node {
    int element = -1;  // -1 marks a leaf
    int no = -1;
    int yes = -1;
    bool label = false;
  };

  int m = 0;
  std::vector<Node> nodes;  // nodes[0] is the root

  static DecisionTree leaf(int m, bool label) {
    DecisionTree t;
    t.m = m;
    t.nodes.push_back({-1, -1, -1, label});
    return t;
  }

  bool evaluate(Mask a) const {
    if (nodes.empty()) throw std::invalid_argument("empty decision tree");
    Mask asked = 0;
    int cur = 0;
    while (nodes[cur].element >= 0) {
      const Node& n = nodes[cur];
      if (n.element >= m) throw std::invalid_argument("query outside the ground set");
      const Mask bit = Mask{1} << n.element;
      if (asked & bit) throw std::invalid_argument("element queried twice on one path");
      asked |= bit;
      cur = (a & bit) ? n.yes : n.no;
    }
    return nodes[cur].label;
  }

  int depth() const { return nodes.empty() ? 0 : depth_from(0); }

  void validate() const {
    if (nodes.empty()) throw std::invalid_argument("empty decision tree");
    validate_from(0, 0);
  }

  /// Nested form: a leaf is YES or NO, an inner node is "(e <no-subtree> <yes-subtree>)".
  std::string serialize() const {
    std::string out;
    serialize_from(0, out);
    return out;
  }

  static DecisionTree parse(int m, const std::string& text) {
    DecisionTree t;
    t.m = m;
    std::size_t pos = 0;
    t.parse_node(text, pos);
    t.skip_space(text, pos);
    if (pos != text.size()) throw std::invalid_argument("trailing text after decision tree");
    t.validate();
    return t;
  }

 private:
  int depth_from(int i) const {
    const Node& n = nodes[i];
    if (n.element < 0) return 0;
    return 1 + std::max(depth_from(n.no), depth_from(n.yes));
  }

  void validate_from(int i, Mask asked) const {
    const Node& n = nodes.at(i);
    if (n.element < 0) return;
    if (n.element >= m) throw std::invalid_argument("query outside the ground set");
    const Mask bit = Mask{1} << n.element;
    if (asked & bit) throw std::invalid_argument("element queried twice on one path");
    validate_from(n.no, asked | bit);
    validate_from(n.yes, asked | bit);
  }

  void serialize_from(int i, std::string& out) const {
    const Node& n = nodes[i];
    if (n.element < 0) {
      out += n.label ? "YES" : "NO";
      return;
    }
    out += "(" + std::to_string(n.element) + " ";
    serialize_from(n.no, out);
    out += " ";
    serialize_from(n.yes, out);
    out += ")";
  }

  static void skip_space(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  int parse_node(const std::string& s, std::size_t& pos) {
    skip_space(s, pos);
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (s.compare(pos, 3, "YES") == 0) {
      nodes[id].label = true;
      pos += 3;
      return id;
    }
    if (s.compare(pos, 2, "NO") == 0) {
      pos += 2;
      return id;
    }
    if (pos >= s.size() || s[pos] != '(') throw std::invalid_argument("malformed decision tree");
    ++pos;
    skip_space(s, pos);
    std::size_t used = 0;
    const int e = std::stoi(s.substr(pos), &used);
    pos += used;
    const int no = parse_node(s, pos);
    const int yes = parse_node(s, pos);
    skip_space(s, pos);
    if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("malformed decision tree");
    ++pos;
    nodes[id].element = e;
    nodes[id].no = no;
    nodes[id].yes = yes;
    return id;
  }
};

// ---------------------------------------------------------------------------
// exact argument complexity

/// Bottom-up table over partial answers: digit j of a state (base 3) is 0 = no, 1 = yes, 2 = unknown.
class ComplexityTable {
 public:
  static constexpr int kDefaultCap = 15;

  explicit ComplexityTable(const SetFamily& f, int cap = kDefaultCap) : m_(f.m()) {
    if (m_ > cap || m_ > kMaxGround)
      throw BudgetExceeded("argument complexity for m=" + std::to_string(m_) +
                           " exceeds the state cap (m <= " + std::to_string(cap) + ")");
    pow3_.assign(m_ + 1, 1);
    for (int j = 1; j <= m_; ++j) pow3_[j] = pow3_[j - 1] * 3;
    table_.assign(pow3_[m_], 0);
    std::vector<std::uint8_t> digit(m_, 0);
    for (std::uint64_t s = 0; s < pow3_[m_]; ++s) {
      if (s > 0) {
        int j = 0;
        while (digit[j] == 2) digit[j++] = 0;
        ++digit[j];
      }
      int first_unknown = -1;
      Mask yes = 0;
      for (int j = 0; j < m_; ++j) {
        if (digit[j] == 2) {
          if (first_unknown < 0) first_unknown = j;
        } else if (digit[j] == 1) {
          yes |= Mask{1} << j;
        }
      }
      if (first_unknown < 0) {
        table_[s] = f.contains(yes) ? kAllIn : kAllOut;
        continue;
      }
      const std::uint8_t lo = table_[s - 2 * pow3_[first_unknown]];
      const std::uint8_t hi = table_[s - pow3_[first_unknown]];
      const std::uint8_t flags = lo & hi & (kAllIn | kAllOut);
      if (flags) {
        table_[s] = flags;
        continue;
      }
      int best = 64;
      for (int j = 0; j < m_; ++j) {
        if (digit[j] != 2) continue;
        const int cn = table_[s - 2 * pow3_[j]] & kCost;
        const int cy = table_[s - pow3_[j]] & kCost;
        best = std::min(best, std::max(cn, cy));
      }
      table_[s] = static_cast<std::uint8_t>(best + 1);
    }
  }

  int m() const { return m_; }
  std::uint64_t root() const { return pow3_[m_] - 1; }
  int complexity() const { return cost(root()); }
  int cost(std::uint64_t state) const { return table_[state] & kCost; }
  std::size_t states() const { return table_.size(); }

  DecisionTree optimal_tree() const {
    DecisionTree t;
    t.m = m_;
    build(root(), t);
    return t;
  }

 private:
  static constexpr std::uint8_t kCost = 0x1F;
  static constexpr std::uint8_t kAllIn = 0x20;
  static constexpr std::uint8_t kAllOut = 0x40;

  int build(std::uint64_t s, DecisionTree& t) const {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    const std::uint8_t v = table_[s];
    if (v & (kAllIn | kAllOut)) {
      t.nodes[id].label = (v & kAllIn) != 0;
      return id;
    }
    const int target = (v & kCost) - 1;
    for (int j = 0; j < m_; ++j) {
      if ((s / pow3_[j]) % 3 != 2) continue;
      const std::uint64_t no = s - 2 * pow3_[j], yes = s - pow3_[j];
      if (std::max(cost(no), cost(yes)) != target) continue;
      t.nodes[id].element = j;
      const int a = build(no, t);
      const int b = build(yes, t);
      t.nodes[id].no = a;
      t.nodes[id].yes = b;
      return id;
    }
    throw std::logic_error("complexity table is inconsistent");
  }

  int m_;
  std::vector<std::uint64_t> pow3_;
  std::vector<std::uint8_t> table_;
};

inline int argument_complexity(const SetFamily& f, int cap = ComplexityTable::kDefaultCap) {
  if (f.is_trivial()) return 0;
  return ComplexityTable(f, cap).complexity();
}

inline bool is_evasive(const SetFamily& f, int cap = ComplexityTable::kDefaultCap) {
  return argument_complexity(f, cap) == f.m();
}

inline DecisionTree optimal_tree(const SetFamily& f, int cap = ComplexityTable::kDefaultCap) {
  if (f.is_trivial()) return DecisionTree::leaf(f.m(), f.size() != 0);
  return ComplexityTable(f, cap).optimal_tree();
}

inline bool evaluate_tree(const DecisionTree& t, Mask a) { return t.evaluate(a); }

struct IntervalCell {
  Mask yes_set = 0;
  Mask no_set = 0;
  bool label = false;

  std::uint64_t size(int m) const {
    return std::uint64_t{1} << (m - std::popcount(yes_set) - std::popcount(no_set));
  }
  bool contains(Mask a) const { return (a & yes_set) == yes_set && (a & no_set) == 0; }
};

inline std::vector<IntervalCell> interval_partition(const DecisionTree& t) {
  t.validate();
  std::vector<IntervalCell> cells;
  auto walk = [&](auto&& self, int i, Mask yes, Mask no) -> void {
    const auto& n = t.nodes[i];
    if (n.element < 0) {
      cells.push_back({yes, no, n.label});
      return;
    }
    const Mask bit = Mask{1} << n.element;
    self(self, n.no, yes, no | bit);
    self(self, n.yes, yes | bit, no);
  };
  walk(walk, 0, 0, 0);
  return cells;
}

// ---------------------------------------------------------------------------
// counting certificates

using IntPoly = std::vector<long long>;  // coefficient k belongs to t^k

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IntPoly generating_polynomial(const SetFamily& f) {
  IntPoly p(f.m() + 1, 0);
  for (Mask a = 0; a < f.universe(); ++a)
    if (f.contains(a)) ++p[std::popcount(a)];
  trim(p);
  return p;
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

inline IntPoly one_plus_t_pow(int k) {
  IntPoly p{1};
  for (int i = 0; i < k; ++i) p = poly_mul(p, IntPoly{1, 1});
  return p;
}

/// Exact quotient p / (1+t)^k, or nullopt if a nonzero remainder appears.
inline std::optional<IntPoly> divide_by_one_plus_t(IntPoly p, int k) {
  trim(p);
  for (int step = 0; step < k; ++step) {
    if (p.empty()) return IntPoly{};
    const std::size_t n = p.size() - 1;
    if (n == 0) return std::nullopt;
    IntPoly q(n, 0);
    q[n - 1] = p[n];
    for (std::size_t i = n - 1; i > 0; --i) q[i - 1] = p[i] - q[i];
    if (p[0] - q[0] != 0) return std::nullopt;
    p = std::move(q);
  }
  return p;
}

struct DivisibilityCertificate {
  int complexity = 0;
  int exponent = 0;  // m − c(F)
  std::optional<IntPoly> quotient;
  IntPoly polynomial;
};

inline DivisibilityCertificate divisibility_certificate(const SetFamily& f,
                                                        int cap = ComplexityTable::kDefaultCap) {
  DivisibilityCertificate cert;
  cert.complexity = argument_complexity(f, cap);
  cert.exponent = f.m() - cert.complexity;
  cert.polynomial = generating_polynomial(f);
  cert.quotient = divide_by_one_plus_t(cert.polynomial, cert.exponent);
  return cert;
}

/// Σ_{A∈F} (−1)^{|A|} = p_F(−1), i.e. #even members minus #odd members.
inline long long euler_count(const SetFamily& f) {
  long long s = 0;
  for (Mask a = 0; a < f.universe(); ++a)
    if (f.contains(a)) s += (std::popcount(a) % 2 == 0) ? 1 : -1;
  return s;
}

// ---------------------------------------------------------------------------
// text interchange

inline std::string format_family(const SetFamily& f, bool complex_flag = false) {
  std::ostringstream out;
  if (complex_flag) out << "complex\n";
  out << "m=" << f.m() << "\n";
  for (Mask a : f.members()) {
    if (a == 0) {
      out << "-\n";
      continue;
    }
    bool first = true;
    for (int e = 0; e < f.m(); ++e) {
      if (!(a >> e & 1U)) continue;
      out << (first ? "" : " ") << e;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

struct ParsedFamily {
  SetFamily family;
  bool complex_flag = false;
};

inline ParsedFamily parse_family(std::istream& in) {
  ParsedFamily parsed;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!have_header) {
      if (tok == "complex") {
        parsed.complex_flag = true;
        continue;
      }
      if (tok.rfind("m=", 0) != 0) throw std::invalid_argument("family file must start with m=<int>");
      parsed.family = SetFamily(std::stoi(tok.substr(2)));
      have_header = true;
      continue;
    }
    Mask a = 0;
    if (tok != "-") {
      do {
        const int e = std::stoi(tok);
        if (e < 0 || e >= parsed.family.m()) throw std::invalid_argument("element out of range: " + tok);
        a |= Mask{1} << e;
      } while (ls >> tok);
    }
    parsed.family.insert(a);
  }
  if (!have_header) throw std::invalid_argument("missing m=<int> header");
  return parsed;
}

inline ParsedFamily parse_family(const std::string& text) {
  std::istringstream in(text);
  return parse_family(in);
}

}  // namespace hexatope
