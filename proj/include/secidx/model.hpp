#pragma once

// Secure index-coding instances, access structures, and the directed
// bipartite receiver/eavesdropper/message graph.
//
// Message and receiver indices are 1-based everywhere in this header.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "secidx/errors.hpp"
#include "secidx/gf.hpp"

namespace secidx {

/// Sorted, duplicate-free set of 1-based indices.
using IndexSet = std::vector<std::size_t>;

inline IndexSet make_set(std::vector<std::size_t> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

inline bool contains(const IndexSet& s, std::size_t x) { return std::binary_search(s.begin(), s.end(), x); }

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// [m] \ a
inline IndexSet complement(const IndexSet& a, std::size_t m) {
  IndexSet out;
  for (std::size_t j = 1; j <= m; ++j) {
    if (!contains(a, j)) out.push_back(j);
  }
  return out;
}

inline IndexSet full_set(std::size_t m) { return complement({}, m); }

inline std::string format_set(const IndexSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

struct Receiver {
  IndexSet knows;
  IndexSet wants;

  friend bool operator==(const Receiver&, const Receiver&) = default;
};

/// A classical index-coding instance over GF(q).
struct Instance {
  Symbol q = 2;
  std::size_t m = 0;
  std::vector<Receiver> receivers;

  std::size_t n() const { return receivers.size(); }
  const Receiver& receiver(std::size_t i) const {
    if (i < 1 || i > receivers.size()) {
      throw StructuralError("receiver " + std::to_string(i) + " out of range [1," + std::to_string(receivers.size()) +
                            "]");
    }
    return receivers[i - 1];
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// The eavesdropper's possible side-information sets. A t-level structure
/// stays symbolic until expanded.
class AccessStructure {
 public:
  struct Explicit {
    std::vector<IndexSet> sets;
  };
  struct TLevel {
    std::size_t t;
  };

  static AccessStructure t_level(std::size_t t) { return AccessStructure(TLevel{t}); }

  /// Members are canonicalized and deduplicated, first occurrence wins.
  static AccessStructure explicit_sets(std::vector<IndexSet> sets) {
    std::vector<IndexSet> unique;
    for (auto& s : sets) {
      IndexSet c = make_set(std::move(s));
      if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(std::move(c));
    }
    return AccessStructure(Explicit{std::move(unique)});
  }

  /// The classical setting: the eavesdropper already knows every message.
  static AccessStructure classical(std::size_t m) { return explicit_sets({full_set(m)}); }

  bool is_t_level() const { return std::holds_alternative<TLevel>(kind_); }
  std::size_t level() const { return std::get<TLevel>(kind_).t; }
  const std::vector<IndexSet>& sets() const { return std::get<Explicit>(kind_).sets; }

 private:
  explicit AccessStructure(std::variant<Explicit, TLevel> kind) : kind_(std::move(kind)) {}

  std::variant<Explicit, TLevel> kind_;
};

/// One human-readable line per violated instance invariant; empty iff valid.
inline std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  if (!is_prime(inst.q)) out.push_back("q=" + std::to_string(inst.q) + " is not prime");
  if (inst.m < 1) out.push_back("m must be at least 1");
  if (inst.receivers.empty()) out.push_back("instance has no receivers");
  for (std::size_t i = 0; i < inst.receivers.size(); ++i) {
    const Receiver& r = inst.receivers[i];
    const std::string who = "receiver " + std::to_string(i + 1);
    for (std::size_t j : r.knows) {
      if (j < 1 || j > inst.m) out.push_back(who + ": knows index " + std::to_string(j) + " out of range [1," + std::to_string(inst.m) + "]");
    }
    for (std::size_t j : r.wants) {
      if (j < 1 || j > inst.m) out.push_back(who + ": wants index " + std::to_string(j) + " out of range [1," + std::to_string(inst.m) + "]");
    }
    if (set_minus(r.wants, r.knows).empty()) out.push_back(who + ": wants ⊆ knows");
  }
  return out;
}

inline void require_valid_indices(const Instance& inst) {
  for (const std::string& v : validate(inst)) {
    if (v.find("out of range") != std::string::npos || v.find("not prime") != std::string::npos ||
        v.find("m must be") != std::string::npos) {
      throw StructuralError(v);
    }
  }
}

/// Drops receivers that want nothing they do not already know.
/// Messages wanted by nobody are kept: they can act as keys.
inline Instance normalize(const Instance& inst) {
  Instance out{inst.q, inst.m, {}};
  for (const Receiver& r : inst.receivers) {
    if (!set_minus(r.wants, r.knows).empty()) out.receivers.push_back(r);
  }
  return out;
}

/// Removes messages that no receiver wants and renumbers the rest.
/// Contrast with `normalize`, which never does this.
inline Instance strip_unwanted(const Instance& inst) {
  std::vector<bool> wanted(inst.m + 1, false);
  for (const Receiver& r : inst.receivers)
    for (std::size_t j : r.wants) wanted.at(j) = true;
  std::vector<std::size_t> relabel(inst.m + 1, 0);
  std::size_t next = 0;
  for (std::size_t j = 1; j <= inst.m; ++j) {
    if (wanted[j]) relabel[j] = ++next;
  }
  Instance out{inst.q, next, {}};
  for (const Receiver& r : inst.receivers) {
    Receiver nr;
    for (std::size_t j : r.knows)
      if (wanted[j]) nr.knows.push_back(relabel[j]);
    for (std::size_t j : r.wants) nr.wants.push_back(relabel[j]);
    out.receivers.push_back(std::move(nr));
  }
  return out;
}

/// min_i |K_i|. A receiver-less instance is treated as K_min = m.
inline std::size_t k_min(const Instance& inst) {
  std::size_t best = inst.m;
  for (const Receiver& r : inst.receivers) best = std::min(best, r.knows.size());
  return best;
}

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

/// Largest member size; t for a t-level structure, 0 for an empty structure.
inline std::size_t a_max(const AccessStructure& acc) {
  if (acc.is_t_level()) return acc.level();
  std::size_t best = 0;
  for (const IndexSet& a : acc.sets()) best = std::max(best, a.size());
  return best;
}

/// All k-subsets of `base`, in lexicographic order.
inline std::vector<IndexSet> combinations(const IndexSet& base, std::size_t k) {
  std::vector<IndexSet> out;
  if (k > base.size()) return out;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  const std::size_t n = base.size();
  while (true) {
    IndexSet cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = base[pos[i]];
    out.push_back(std::move(cur));
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

/// Explicit structures pass through (already deduplicated); t-level expands to
/// all t-subsets of [m] in lexicographic order.
inline std::vector<IndexSet> expand_access(const AccessStructure& acc, std::size_t m) {
  if (!acc.is_t_level()) {
    for (const IndexSet& a : acc.sets()) {
      for (std::size_t j : a) {
        if (j < 1 || j > m) throw StructuralError("access set " + format_set(a) + " has index outside [1," + std::to_string(m) + "]");
      }
    }
    return acc.sets();
  }
  const std::size_t t = acc.level();
  if (m == 0 || t >= m) {
    throw InvalidLevel("t-level " + std::to_string(t) + " outside [0," + std::to_string(m == 0 ? 0 : m - 1) + "]");
  }
  return combinations(full_set(m), t);
}

inline bool every_message_wanted(const Instance& inst) {
  std::vector<bool> wanted(inst.m + 1, false);
  for (const Receiver& r : inst.receivers)
    for (std::size_t j : r.wants)
      if (j <= inst.m) wanted[j] = true;
  return std::all_of(wanted.begin() + 1, wanted.end(), [](bool b) { return b; });
}

/// Receivers i and j share side information: both end up knowing K_i ∪ K_j.
inline Instance cooperate(const Instance& inst, std::size_t i, std::size_t j) {
  if (i == j) throw StructuralError("cooperate: receiver " + std::to_string(i) + " cannot cooperate with itself");
  const IndexSet shared = set_union(inst.receiver(i).knows, inst.receiver(j).knows);
  Instance out = inst;
  out.receivers[i - 1].knows = shared;
  out.receivers[j - 1].knows = shared;
  return out;
}

// ---------------------------------------------------------------------------
// Directed bipartite graph
// ---------------------------------------------------------------------------

struct Vertex {
  enum class Kind { receiver, eavesdropper, message };
  Kind kind;
  std::size_t index;  // 1-based within its kind

  std::string label() const {
    switch (kind) {
      case Kind::receiver: return "r" + std::to_string(index);
      case Kind::eavesdropper: return "v" + std::to_string(index);
      case Kind::message: return std::to_string(index);
    }
    return "?";
  }

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Arc {
  Vertex from;
  Vertex to;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Arcs r_i -> j for j in K_i, j -> r_i for j in W_i, v_a -> j for j in A.
struct BipartiteGraph {
  std::size_t receivers = 0;
  std::size_t eavesdroppers = 0;
  std::size_t messages = 0;
  std::vector<Arc> arcs;

  std::size_t vertex_count() const { return receivers + eavesdroppers + messages; }

  /// Dense id: receivers, then eavesdroppers, then messages.
  std::size_t id(const Vertex& v) const {
    switch (v.kind) {
      case Vertex::Kind::receiver: return v.index - 1;
      case Vertex::Kind::eavesdropper: return receivers + v.index - 1;
      case Vertex::Kind::message: return receivers + eavesdroppers + v.index - 1;
    }
    return 0;
  }

  Vertex vertex(std::size_t id) const {
    if (id < receivers) return {Vertex::Kind::receiver, id + 1};
    if (id < receivers + eavesdroppers) return {Vertex::Kind::eavesdropper, id - receivers + 1};
    return {Vertex::Kind::message, id - receivers - eavesdroppers + 1};
  }

  IndexSet out_neighbourhood(const Vertex& v) const {
    IndexSet out;
    for (const Arc& a : arcs)
      if (a.from == v && a.to.kind == Vertex::Kind::message) out.push_back(a.to.index);
    return make_set(std::move(out));
  }
};

inline BipartiteGraph build_graph(const Instance& inst, const AccessStructure& acc) {
  BipartiteGraph g;
  g.receivers = inst.n();
  g.messages = inst.m;
  for (std::size_t i = 1; i <= inst.n(); ++i) {
    const Receiver& r = inst.receivers[i - 1];
    for (std::size_t j : r.knows) g.arcs.push_back({{Vertex::Kind::receiver, i}, {Vertex::Kind::message, j}});
    for (std::size_t j : r.wants) g.arcs.push_back({{Vertex::Kind::message, j}, {Vertex::Kind::receiver, i}});
  }
  const std::vector<IndexSet> sets = expand_access(acc, inst.m);
  g.eavesdroppers = sets.size();
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t j : sets[a]) g.arcs.push_back({{Vertex::Kind::eavesdropper, a + 1}, {Vertex::Kind::message, j}});
  return g;
}

/// A topological order of all vertices (Kahn's algorithm, lowest id first),
/// or nullopt if the graph has a directed cycle.
inline std::optional<std::vector<Vertex>> topological_order(const BipartiteGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const Arc& a : g.arcs) {
    succ[g.id(a.from)].push_back(g.id(a.to));
    ++indeg[g.id(a.to)];
  }
  std::vector<Vertex> order;
  std::vector<bool> done(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick == n) return std::nullopt;
    done[pick] = true;
    order.push_back(g.vertex(pick));
    for (std::size_t w : succ[pick]) --indeg[w];
  }
  return order;
}

/// Eavesdropper vertices have no incoming arcs, so this equals acyclicity of
/// the receiver/message subgraph.
inline bool is_acyclic(const BipartiteGraph& g) { return topological_order(g).has_value(); }

/// Graphviz rendering; receivers `rN`, eavesdroppers `vN`, messages bare integers.
inline std::string to_dot(const BipartiteGraph& g) {
  std::ostringstream os;
  os << "digraph secure_index_coding {\n";
  for (std::size_t i = 1; i <= g.receivers; ++i) os << "  r" << i << " [shape=box];\n";
  for (std::size_t i = 1; i <= g.eavesdroppers; ++i) os << "  v" << i << " [shape=diamond];\n";
  for (std::size_t j = 1; j <= g.messages; ++j) os << "  " << j << " [shape=circle];\n";
  for (const Arc& a : g.arcs) os << "  " << a.from.label() << " -> " << a.to.label() << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace secidx
