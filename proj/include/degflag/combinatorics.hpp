#pragma once

// Root combinatorics of the desingularized degenerate flag variety of type
// A_{n-1}: the beta ordering of positive roots, admissible collections of
// index sets S_{i,j} labeling torus fixed points and cells, the 0/1 rules for
// cell dimension and relative dimension over the base, and a bitmask census
// engine that streams all 2^{n(n-1)/2} collections to decide smallness /
// semismallness of the resolution.
//
// Conventions used throughout:
//   * slots are pairs (i,j), 1 <= i <= j <= n-1, identified with the positive
//     roots alpha_{i,j}; slot storage order IS the beta order (antidiagonals
//     j-i descending, i ascending within an antidiagonal);
//   * an IndexSet at slot (i,j) has exactly i elements drawn from
//     {1..i} u {j+1..n};
//   * boundary conventions: S_{0,j} is empty, and at j = n-1 the candidate
//     pool "S_{i,n} u {n}" means the full support {1..i} u {n};
//   * wrap(x) = x if x > 0 else x + n (cyclic position relative to a column).

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace degflag {

struct RootIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const RootIndex&, const RootIndex&) = default;
  friend auto operator<=>(const RootIndex&, const RootIndex&) = default;
};

inline int wrap_positive(int x, int n) { return x > 0 ? x : x + n; }

/// Slot layout for rank n.  Slot ids follow the beta order, so id 0 is
/// (1, n-1) and the last n-1 ids are the diagonal (1,1) .. (n-1,n-1).
class SlotTable {
 public:
  explicit SlotTable(int n) : n_(n) {
    if (n < 2) throw precondition_error("rank must be at least 2");
    for (int level = n - 2; level >= 0; --level)
      for (int i = 1; i + level <= n - 1; ++i) slots_.push_back({i, i + level});
  }

  int n() const { return n_; }
  int size() const { return static_cast<int>(slots_.size()); }
  RootIndex slot(int id) const { return slots_[id]; }

  int id(int i, int j) const {
    int level = j - i;
    if (i < 1 || j > n_ - 1 || level < 0) throw structural_error("slot out of range");
    int before = (n_ - 2 - level) * (n_ - 1 - level) / 2;
    return before + (i - 1);
  }
  int id(RootIndex r) const { return id(r.i, r.j); }

  int diagonal_id(int i) const { return id(i, i); }

 private:
  int n_;
  std::vector<RootIndex> slots_;
};

struct BetaOrder {
  int n = 0;
  std::vector<RootIndex> order;
};

/// Positive roots in the order the fibration tower peels them off.
inline BetaOrder beta_order(int n) {
  SlotTable table(n);
  BetaOrder b{n, {}};
  for (int id = 0; id < table.size(); ++id) b.order.push_back(table.slot(id));
  return b;
}

/// Subset of {1..n} stored as a bitmask (element k <-> bit k-1).
struct IndexSet {
  int n = 0;
  std::uint64_t bits = 0;

  IndexSet() = default;
  IndexSet(int n_, std::uint64_t bits_) : n(n_), bits(bits_) {
    if (n_ < 1 || n_ > 64) throw structural_error("IndexSet universe must have 1..64 elements");
  }
  static IndexSet of(int n, std::initializer_list<int> elems) {
    std::uint64_t b = 0;
    for (int e : elems) b |= std::uint64_t{1} << (e - 1);
    return IndexSet(n, b);
  }

  int size() const { return std::popcount(bits); }
  bool contains(int k) const { return (bits >> (k - 1)) & 1; }
  bool subset_of(const IndexSet& o) const { return (bits & ~o.bits) == 0; }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (std::uint64_t b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  /// The unique element, for singleton sets.
  int single() const {
    if (std::popcount(bits) != 1) throw structural_error("expected a singleton set");
    return std::countr_zero(bits) + 1;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

inline std::uint64_t low_bits(int k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

/// Bitmask of the support {1..i} u {j+1..n} of slot (i,j).
inline std::uint64_t support_mask(int n, int i, int j) {
  return low_bits(i) | (low_bits(n) & ~low_bits(j));
}

/// A (possibly partial) collection of index sets, one per slot.  Full
/// collections have every slot present; parabolic ones only the slots of P_d.
struct Collection {
  int n = 0;
  std::vector<IndexSet> sets;    // indexed by slot id
  std::vector<char> present;

  explicit Collection(int n_) : n(n_) {
    SlotTable t(n_);
    sets.assign(t.size(), IndexSet(n_, 0));
    present.assign(t.size(), 0);
  }

  const IndexSet& at(const SlotTable& t, int i, int j) const { return sets[t.id(i, j)]; }
  void set(const SlotTable& t, int i, int j, IndexSet s) {
    int id = t.id(i, j);
    sets[id] = s;
    present[id] = 1;
  }
  bool has(const SlotTable& t, int i, int j) const { return present[t.id(i, j)]; }
};

using AdmissibleCollection = Collection;

/// lambda = omega_{d_1} + ... + omega_{d_k} with strictly increasing d's.
struct ParabolicShape {
  int n = 0;
  std::vector<int> d;

  ParabolicShape(int n_, std::vector<int> d_) : n(n_), d(std::move(d_)) {
    if (n < 2) throw precondition_error("rank must be at least 2");
    if (d.empty()) throw structural_error("shape must be nonempty");
    for (std::size_t t = 0; t < d.size(); ++t) {
      if (d[t] < 1 || d[t] > n - 1) throw structural_error("shape entry out of range");
      if (t > 0 && d[t] <= d[t - 1]) throw structural_error("shape must be strictly increasing");
    }
  }

  /// Does [i, j] contain some d_l?  (Equivalently (alpha_{i,j}, omega_{d_l}) > 0.)
  bool contains_slot(int i, int j) const {
    for (int dl : d)
      if (i <= dl && dl <= j) return true;
    return false;
  }

  /// Slot ids of P_d in beta order.
  std::vector<int> slot_ids(const SlotTable& t) const {
    std::vector<int> ids;
    for (int id = 0; id < t.size(); ++id) {
      auto [i, j] = t.slot(id);
      if (contains_slot(i, j)) ids.push_back(id);
    }
    return ids;
  }
};

struct ABPair {
  int a = 0;
  int b = 0;
};

namespace detail {

inline void check_slot_entry(const Collection& c, const SlotTable& t, int id) {
  auto [i, j] = t.slot(id);
  const IndexSet& s = c.sets[id];
  if (s.n != c.n || s.size() != i || (s.bits & ~support_mask(c.n, i, j)) != 0)
    throw structural_error("slot (" + std::to_string(i) + "," + std::to_string(j) +
                           ") has wrong size or support");
}

/// Candidate pool (two-element mask) for the entry at `id`, from the already
/// fixed up-neighbor (i-1,j) and right-neighbor (i,j+1).
inline std::uint64_t candidate_mask(const Collection& c, const SlotTable& t, int id) {
  auto [i, j] = t.slot(id);
  int n = c.n;
  std::uint64_t base = i > 1 ? c.sets[t.id(i - 1, j)].bits : 0;
  std::uint64_t pool = j < n - 1 ? (c.sets[t.id(i, j + 1)].bits | (std::uint64_t{1} << j))
                                 : support_mask(n, i, n - 1);
  std::uint64_t cand = pool & ~base;
  if (std::popcount(cand) != 2) throw structural_error("candidate pool is not a pair");
  return cand;
}

}  // namespace detail

/// The pair {a, b} = (S_{i,j+1} u {j+1}) \ S_{i-1,j} at a slot, with a the
/// member that actually lies in S_{i,j}.
inline ABPair ab_pair(const Collection& c, const SlotTable& t, RootIndex slot) {
  int id = t.id(slot);
  if (!c.present[id]) throw structural_error("slot entry missing");
  detail::check_slot_entry(c, t, id);
  std::uint64_t cand = detail::candidate_mask(c, t, id);
  std::uint64_t base = slot.i > 1 ? c.sets[t.id(slot.i - 1, slot.j)].bits : 0;
  int lo = std::countr_zero(cand) + 1;
  int hi = 63 - std::countl_zero(cand) + 1;
  std::uint64_t s = c.sets[id].bits;
  if (s == (base | (cand & -cand))) return {lo, hi};
  if (s == (base | (cand ^ (cand & -cand)))) return {hi, lo};
  throw structural_error("slot entry inconsistent with both candidates");
}

inline ABPair ab_pair(const Collection& c, RootIndex slot) {
  return ab_pair(c, SlotTable(c.n), slot);
}

/// Chain conditions S_{i-1,j} <= S_{i,j} <= S_{i,j+1} u {j+1}, restricted to
/// the present slots.  Structure (sizes, supports) is validated first and
/// raises rather than returning false.
inline bool is_admissible(const Collection& c) {
  SlotTable t(c.n);
  for (int id = 0; id < t.size(); ++id) {
    if (!c.present[id]) continue;
    detail::check_slot_entry(c, t, id);
  }
  for (int id = 0; id < t.size(); ++id) {
    if (!c.present[id]) continue;
    auto [i, j] = t.slot(id);
    if (i > 1 && c.has(t, i - 1, j) && !c.at(t, i - 1, j).subset_of(c.sets[id])) return false;
    if (j < c.n - 1 && c.has(t, i, j + 1)) {
      std::uint64_t allowed = c.at(t, i, j + 1).bits | (std::uint64_t{1} << j);
      if ((c.sets[id].bits & ~allowed) != 0) return false;
    }
  }
  return true;
}

inline bool is_admissible_parabolic(const Collection& c, const ParabolicShape& shape) {
  SlotTable t(c.n);
  for (int id = 0; id < t.size(); ++id) {
    auto [i, j] = t.slot(id);
    bool in_p = shape.contains_slot(i, j);
    if (in_p && !c.present[id]) throw structural_error("missing entry on a P_d slot");
    if (!in_p && c.present[id]) throw structural_error("entry outside P_d");
  }
  return is_admissible(c);
}

// ---------------------------------------------------------------------------
// Enumeration.  Depth-first along the beta order; at every slot the candidate
// pair admits exactly two extensions and the smaller candidate is tried
// first, which makes the all-{1..i} collection the first one produced.
// ---------------------------------------------------------------------------

struct ChoicePrefix {
  int depth = 0;
  std::uint64_t bits = 0;  // bit t = 1 means take the larger candidate at step t
};

namespace detail {

template <typename Fn>
void enumerate_over(Collection& c, const SlotTable& t, const std::vector<int>& ids,
                    std::size_t pos, ChoicePrefix prefix, Fn&& fn) {
  if (pos == ids.size()) {
    fn(const_cast<const Collection&>(c));
    return;
  }
  int id = ids[pos];
  auto [i, j] = t.slot(id);
  std::uint64_t base = i > 1 ? c.sets[t.id(i - 1, j)].bits : 0;
  std::uint64_t cand = candidate_mask(c, t, id);
  std::uint64_t lo = cand & -cand, hi = cand ^ lo;
  bool forced = static_cast<int>(pos) < prefix.depth;
  for (int which = 0; which < 2; ++which) {
    if (forced && which != static_cast<int>((prefix.bits >> pos) & 1)) continue;
    c.sets[id] = IndexSet(c.n, base | (which == 0 ? lo : hi));
    c.present[id] = 1;
    enumerate_over(c, t, ids, pos + 1, prefix, fn);
  }
  c.present[id] = 0;
}

}  // namespace detail

template <typename Fn>
void for_each_admissible(int n, Fn&& fn, ChoicePrefix prefix = {}) {
  SlotTable t(n);
  std::vector<int> ids(t.size());
  for (int id = 0; id < t.size(); ++id) ids[id] = id;
  Collection c(n);
  detail::enumerate_over(c, t, ids, 0, prefix, fn);
}

template <typename Fn>
void for_each_admissible_parabolic(const ParabolicShape& shape, Fn&& fn,
                                   ChoicePrefix prefix = {}) {
  SlotTable t(shape.n);
  std::vector<int> ids = shape.slot_ids(t);
  Collection c(shape.n);
  detail::enumerate_over(c, t, ids, 0, prefix, fn);
}

inline std::vector<Collection> enumerate_admissible(int n) {
  std::vector<Collection> out;
  for_each_admissible(n, [&](const Collection& c) { out.push_back(c); });
  return out;
}

inline std::vector<Collection> enumerate_admissible_parabolic(const ParabolicShape& shape) {
  std::vector<Collection> out;
  for_each_admissible_parabolic(shape, [&](const Collection& c) { out.push_back(c); });
  return out;
}

// ---------------------------------------------------------------------------
// Dimension rules.
// ---------------------------------------------------------------------------

namespace detail {

/// 0/1 coordinate count of the slot in the cell coordinate construction
/// (outermost antidiagonal inward).
inline int g_term(const Collection& c, const SlotTable& t, int i, int j) {
  int n = c.n;
  const IndexSet& s = c.at(t, i, j);
  if (i == 1 && j == n - 1) return s.contains(1) ? 1 : 0;
  if (i == 1) return s.single() != j + 1 ? 1 : 0;
  const IndexSet& up = c.at(t, i - 1, j);
  if (j == n - 1) {
    int l = IndexSet(n, s.bits & ~up.bits).single();
    return l == i ? 1 : 0;
  }
  if (!s.contains(j + 1)) return 1;
  int l = IndexSet(n, s.bits & ~up.bits).single();
  int m = IndexSet(n, c.at(t, i, j + 1).bits & ~s.bits).single();
  return wrap_positive(l - j, n) > wrap_positive(m - j, n) ? 1 : 0;
}

/// 0/1 fiber coordinate count of an off-diagonal slot over the base cell:
/// nonzero exactly when the new horizontal element l of S_{i,j} over
/// S_{i,j-1} can deform towards the new vertical element m of S_{i+1,j}
/// inside the cell, i.e. when j lies in S_{i,j-1} and m precedes l in the
/// cyclic order anchored at column j.
inline int h_term(const Collection& c, const SlotTable& t, int i, int j) {
  int n = c.n;
  const IndexSet& left = c.at(t, i, j - 1);
  if (!left.contains(j)) return 0;
  const IndexSet& s = c.at(t, i, j);
  int l = IndexSet(n, s.bits & ~left.bits).single();
  int m = IndexSet(n, c.at(t, i + 1, j).bits & ~s.bits).single();
  return wrap_positive(m - j, n) < wrap_positive(l - j, n) ? 1 : 0;
}

inline int count_bits_below(std::uint64_t mask, int j, int anchor_wrap, int n) {
  // #{m in mask : wrap(m - j) < anchor_wrap}
  int count = 0;
  for (std::uint64_t b = mask; b; b &= b - 1) {
    int m = std::countr_zero(b) + 1;
    if (wrap_positive(m - j, n) < anchor_wrap) ++count;
  }
  return count;
}

}  // namespace detail

/// Contribution of a single slot to the cell dimension.
inline int cell_dimension_term(const Collection& c, RootIndex slot) {
  SlotTable t(c.n);
  return detail::g_term(c, t, slot.i, slot.j);
}

/// Sum of the per-slot terms over the present slots.  For complete
/// collections this is the dimension of the cell C(S); for d-admissible
/// collections, of the corresponding cell of R_d.
inline int cell_dimension(const Collection& c) {
  SlotTable t(c.n);
  int dim = 0;
  for (int id = 0; id < t.size(); ++id) {
    if (!c.present[id]) continue;
    auto [i, j] = t.slot(id);
    dim += detail::g_term(c, t, i, j);
  }
  return dim;
}

/// dim C(S) - dim C(diagonal), as a sum of 0/1 terms over off-diagonal slots.
inline int relative_dimension(const Collection& c) {
  SlotTable t(c.n);
  int rel = 0;
  for (int i = 1; i <= c.n - 1; ++i)
    for (int j = i + 1; j <= c.n - 1; ++j) rel += detail::h_term(c, t, i, j);
  return rel;
}

/// Parabolic fiber dimension over Fl^a_d.  At slots whose left or upper
/// neighbor falls outside P_d the step is a point of a bigger Grassmannian
/// and contributes a count of admissible deformation directions rather than
/// a 0/1 term; both neighbors missing cannot happen for i < j.
inline int relative_dimension_parabolic(const Collection& c, const ParabolicShape& shape) {
  SlotTable t(c.n);
  int n = c.n;
  int rel = 0;
  for (int id = 0; id < t.size(); ++id) {
    if (!c.present[id]) continue;
    auto [i, j] = t.slot(id);
    if (i == j) continue;
    bool left_in = shape.contains_slot(i, j - 1);
    bool up_in = shape.contains_slot(i + 1, j);
    const IndexSet& s = c.sets[id];
    if (left_in && up_in) {
      rel += detail::h_term(c, t, i, j);
    } else if (left_in) {
      const IndexSet& left = c.at(t, i, j - 1);
      if (!left.contains(j)) continue;
      int l = IndexSet(n, s.bits & ~left.bits).single();
      std::uint64_t free = support_mask(n, i, j) & ~s.bits;
      rel += detail::count_bits_below(free, j, wrap_positive(l - j, n), n);
    } else if (up_in) {
      int m = IndexSet(n, c.at(t, i + 1, j).bits & ~s.bits).single();
      if (m == i + 1) continue;
      rel += detail::count_bits_below(s.bits, j, wrap_positive(m - j, n), n);
    } else {
      throw consistency_error("slot with both neighbors outside P_d");
    }
  }
  return rel;
}

// ---------------------------------------------------------------------------
// Base cells of the degenerate flag variety.
// ---------------------------------------------------------------------------

/// Chain S_1, .., S_{n-1} with |S_i| = i and S_i <= S_{i+1} u {i+1}; the
/// label of a cell of Fl^a_n.
struct BaseCellLabel {
  int n = 0;
  std::vector<IndexSet> sets;  // sets[i-1] = S_i
};

inline bool is_valid_base_label(const BaseCellLabel& b) {
  if (static_cast<int>(b.sets.size()) != b.n - 1) return false;
  for (int i = 1; i <= b.n - 1; ++i) {
    if (b.sets[i - 1].size() != i || (b.sets[i - 1].bits & ~low_bits(b.n)) != 0) return false;
    if (i < b.n - 1) {
      std::uint64_t allowed = b.sets[i].bits | (std::uint64_t{1} << i);
      if ((b.sets[i - 1].bits & ~allowed) != 0) return false;
    }
  }
  return true;
}

inline BaseCellLabel diagonal_of(const Collection& c) {
  SlotTable t(c.n);
  BaseCellLabel b{c.n, {}};
  for (int i = 1; i <= c.n - 1; ++i) b.sets.push_back(c.at(t, i, i));
  return b;
}

template <typename Fn>
void for_each_base_cell(int n, Fn&& fn) {
  if (n < 2) throw precondition_error("rank must be at least 2");
  BaseCellLabel label{n, std::vector<IndexSet>(n - 1, IndexSet(n, 0))};
  // Choose S_{n-1} first, then S_i inside S_{i+1} u {i+1}; subsets are tried
  // in increasing bitmask order.
  std::function<void(int)> rec = [&](int i) {
    if (i == 0) {
      fn(const_cast<const BaseCellLabel&>(label));
      return;
    }
    std::uint64_t universe =
        i == n - 1 ? low_bits(n) : (label.sets[i].bits | (std::uint64_t{1} << i));
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = universe;; m = (m - 1) & universe) {
      if (std::popcount(m) == i) masks.push_back(m);
      if (m == 0) break;
    }
    for (auto it = masks.rbegin(); it != masks.rend(); ++it) {
      label.sets[i - 1] = IndexSet(n, *it);
      rec(i - 1);
    }
  };
  rec(n - 1);
}

inline std::vector<BaseCellLabel> enumerate_base_cells(int n) {
  std::vector<BaseCellLabel> out;
  for_each_base_cell(n, [&](const BaseCellLabel& b) { out.push_back(b); });
  return out;
}

/// First admissible collection (in enumeration order) whose diagonal is the
/// given chain.
inline Collection first_completion(const BaseCellLabel& label) {
  if (!is_valid_base_label(label)) throw structural_error("invalid base cell label");
  SlotTable t(label.n);
  Collection c(label.n);
  Collection found(label.n);
  bool done = false;
  std::function<void(int)> rec = [&](int id) {
    if (done) return;
    if (id == t.size()) {
      found = c;
      done = true;
      return;
    }
    auto [i, j] = t.slot(id);
    std::uint64_t base = i > 1 ? c.sets[t.id(i - 1, j)].bits : 0;
    std::uint64_t cand = detail::candidate_mask(c, t, id);
    std::uint64_t lo = cand & -cand, hi = cand ^ lo;
    for (std::uint64_t choice : {lo, hi}) {
      std::uint64_t bits = base | choice;
      if (i == j && bits != label.sets[i - 1].bits) continue;
      c.sets[id] = IndexSet(label.n, bits);
      c.present[id] = 1;
      rec(id + 1);
      if (done) return;
    }
    c.present[id] = 0;
  };
  rec(0);
  if (!done) throw structural_error("base cell label admits no completion");
  return found;
}

/// Dimension of the cell of Fl^a_n labeled by the chain; computed as
/// cell_dimension - relative_dimension of a completion (the value does not
/// depend on which completion is used).
inline int base_cell_dimension(const BaseCellLabel& label) {
  Collection c = first_completion(label);
  return cell_dimension(c) - relative_dimension(c);
}

/// The codimension-one cells: for each pair 1 <= a <= b <= n-1 the collection
/// with S_{i,j} = {1..i} outside the rectangle [a,..] x [..,b] and
/// {1..i} \ {a} u {b+1} inside it.
inline std::vector<Collection> codim_one_cells(int n) {
  SlotTable t(n);
  std::vector<Collection> out;
  for (int a = 1; a <= n - 1; ++a)
    for (int b = a; b <= n - 1; ++b) {
      Collection c(n);
      for (int id = 0; id < t.size(); ++id) {
        auto [i, j] = t.slot(id);
        std::uint64_t bits = low_bits(i);
        if (i >= a && j <= b) bits = (bits & ~(std::uint64_t{1} << (a - 1))) | (std::uint64_t{1} << b);
        c.sets[id] = IndexSet(n, bits);
        c.present[id] = 1;
      }
      out.push_back(std::move(c));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Smallness census.  A tight bitmask re-implementation of the enumeration
// (validated against the Collection path in tests) that streams every
// admissible collection, accumulates per-base-cell fiber data keyed by the
// packed diagonal, and decides small / semismall / not-semismall.
// ---------------------------------------------------------------------------

struct BaseCellStats {
  int base_dim = 0;
  int max_fiber = 0;
  std::uint64_t completions = 0;
};

struct CensusResult {
  int n = 0;
  int M = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> dim_histogram;  // by cell dimension
  std::unordered_map<std::uint64_t, BaseCellStats> base_cells;
};

enum class SmallnessVerdict { kSmall, kSemismall, kNotSemismall };

inline const char* to_string(SmallnessVerdict v) {
  switch (v) {
    case SmallnessVerdict::kSmall: return "small";
    case SmallnessVerdict::kSemismall: return "semismall";
    case SmallnessVerdict::kNotSemismall: return "not-semismall";
  }
  return "?";
}

struct SmallnessWitness {
  BaseCellLabel label;
  int base_dim = 0;
  int fiber_dim = 0;
  int defect = 0;  // base_dim + 2*fiber_dim - M
};

struct SmallnessReport {
  int n = 0;
  int M = 0;
  SmallnessVerdict verdict = SmallnessVerdict::kSmall;
  std::uint64_t admissible_count = 0;
  std::uint64_t base_cell_count = 0;
  std::vector<std::uint64_t> dim_histogram;
  std::vector<SmallnessWitness> witnesses;  // semismallness violations, or the
                                            // strata blocking smallness
};

namespace detail {

class CensusEngine {
 public:
  explicit CensusEngine(int n) : n_(n), table_(n), M_(table_.size()) {
    if (n > 8) throw capacity_error("census supports n <= 8 (diagonal key packing)");
    slot_i_.resize(M_);
    slot_j_.resize(M_);
    up_id_.resize(M_, -1);
    right_id_.resize(M_, -1);
    left_of_up_id_.resize(M_, -1);
    full_pool_.resize(M_, 0);
    for (int id = 0; id < M_; ++id) {
      auto [i, j] = table_.slot(id);
      slot_i_[id] = i;
      slot_j_[id] = j;
      if (i > 1) up_id_[id] = table_.id(i - 1, j);
      if (j < n - 1) right_id_[id] = table_.id(i, j + 1);
      if (i > 1) left_of_up_id_[id] = table_.id(i - 1, j - 1);
      if (j == n - 1)
        full_pool_[id] = static_cast<std::uint32_t>(low_bits(i) | (std::uint64_t{1} << (n - 1)));
    }
  }

  CensusResult run(int threads) {
    int prefix_depth = std::max(0, std::min(M_ - 6, 12));
    std::uint64_t chunks = std::uint64_t{1} << prefix_depth;
    threads = std::max(1, threads);
    std::atomic<std::uint64_t> next{0};
    std::mutex merge_mutex;
    CensusResult result;
    result.n = n_;
    result.M = M_;
    result.dim_histogram.assign(M_ + 1, 0);

    auto worker = [&]() {
      Local local;
      local.S.assign(M_, 0);
      local.hist.assign(M_ + 1, 0);
      for (;;) {
        std::uint64_t chunk = next.fetch_add(1);
        if (chunk >= chunks) break;
        descend(local, 0, prefix_depth, chunk, 0, 0);
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      result.total += local.total;
      for (int d = 0; d <= M_; ++d) result.dim_histogram[d] += local.hist[d];
      for (const auto& [key, stats] : local.cells) {
        auto [it, inserted] = result.base_cells.try_emplace(key, stats);
        if (!inserted) {
          if (it->second.base_dim != stats.base_dim)
            throw consistency_error("base cell dimension disagreed across completions");
          it->second.max_fiber = std::max(it->second.max_fiber, stats.max_fiber);
          it->second.completions += stats.completions;
        }
      }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return result;
  }

  std::uint64_t pack_diagonal(const std::vector<std::uint32_t>& S) const {
    std::uint64_t key = 0;
    int base = M_ - (n_ - 1);
    for (int t = 0; t < n_ - 1; ++t)
      key |= static_cast<std::uint64_t>(S[base + t]) << (t * n_);
    return key;
  }

  BaseCellLabel unpack_diagonal(std::uint64_t key) const {
    BaseCellLabel label{n_, {}};
    std::uint64_t mask = low_bits(n_);
    for (int t = 0; t < n_ - 1; ++t)
      label.sets.push_back(IndexSet(n_, (key >> (t * n_)) & mask));
    return label;
  }

 private:
  struct Local {
    std::vector<std::uint32_t> S;
    std::vector<std::uint64_t> hist;
    std::uint64_t total = 0;
    std::unordered_map<std::uint64_t, BaseCellStats> cells;
  };

  void descend(Local& local, int level, int prefix_depth, std::uint64_t prefix, int gsum,
               int hsum) {
    if (level == M_) {
      ++local.total;
      ++local.hist[gsum];
      std::uint64_t key = pack_diagonal(local.S);
      auto [it, inserted] = local.cells.try_emplace(key, BaseCellStats{gsum - hsum, hsum, 1});
      if (!inserted) {
        if (it->second.base_dim != gsum - hsum)
          throw consistency_error("base cell dimension disagreed across completions");
        it->second.max_fiber = std::max(it->second.max_fiber, hsum);
        ++it->second.completions;
      }
      return;
    }
    std::uint32_t base = up_id_[level] >= 0 ? local.S[up_id_[level]] : 0;
    std::uint32_t pool = right_id_[level] >= 0
                             ? (local.S[right_id_[level]] | (1u << (slot_j_[level])))
                             : full_pool_[level];
    std::uint32_t cand = pool & ~base;
    std::uint32_t lo = cand & (~cand + 1), hi = cand ^ lo;
    bool forced = level < prefix_depth;
    int forced_which = static_cast<int>((prefix >> level) & 1);
    for (int which = 0; which < 2; ++which) {
      if (forced && which != forced_which) continue;
      local.S[level] = base | (which == 0 ? lo : hi);
      descend(local, level + 1, prefix_depth, prefix, gsum + g_term(local, level),
              hsum + h_above(local, level));
    }
  }

  // Mirrors detail::g_term on raw masks; element k <-> bit k-1.
  int g_term(const Local& local, int id) const {
    int i = slot_i_[id], j = slot_j_[id];
    std::uint32_t s = local.S[id];
    if (i == 1 && j == n_ - 1) return (s & 1u) ? 1 : 0;
    if (i == 1) return s != (1u << j) ? 1 : 0;
    std::uint32_t up = local.S[up_id_[id]];
    if (j == n_ - 1) return (s & ~up) == (1u << (i - 1)) ? 1 : 0;
    if (!(s & (1u << j))) return 1;
    int l = std::countr_zero(s & ~up) + 1;
    int m = std::countr_zero(local.S[right_id_[id]] & ~s) + 1;
    return wrap_positive(l - j, n_) > wrap_positive(m - j, n_) ? 1 : 0;
  }

  // Fiber term of the slot just above (i-1, j), which becomes computable once
  // S_{i,j} is fixed; every off-diagonal slot is charged exactly once.
  int h_above(const Local& local, int id) const {
    int i = slot_i_[id], j = slot_j_[id];
    if (i < 2) return 0;
    std::uint32_t pq = local.S[up_id_[id]];
    std::uint32_t left = local.S[left_of_up_id_[id]];
    if (!(left & (1u << (j - 1)))) return 0;
    int l = std::countr_zero(pq & ~left) + 1;
    int m = std::countr_zero(local.S[id] & ~pq) + 1;
    return wrap_positive(m - j, n_) < wrap_positive(l - j, n_) ? 1 : 0;
  }

  int n_;
  SlotTable table_;
  int M_;
  std::vector<int> slot_i_, slot_j_, up_id_, right_id_, left_of_up_id_;
  std::vector<std::uint32_t> full_pool_;
};

}  // namespace detail

inline CensusResult run_census(int n, int threads) {
  return detail::CensusEngine(n).run(threads);
}

/// Streams every admissible collection, aggregates fiber dimensions per base
/// cell, and classifies the resolution.  Semismall means
/// base_dim + 2*max_fiber <= M for every base cell; small additionally needs
/// strict inequality whenever the fiber is positive-dimensional.
inline SmallnessReport smallness_report(int n, int threads) {
  detail::CensusEngine engine(n);
  CensusResult census = engine.run(threads);
  SmallnessReport report;
  report.n = n;
  report.M = census.M;
  report.admissible_count = census.total;
  report.base_cell_count = census.base_cells.size();
  report.dim_histogram = census.dim_histogram;

  bool semismall = true, small = true;
  std::vector<std::pair<std::uint64_t, SmallnessWitness>> bad;
  for (const auto& [key, stats] : census.base_cells) {
    int lhs = stats.base_dim + 2 * stats.max_fiber;
    if (lhs > census.M) {
      semismall = false;
      bad.emplace_back(key, SmallnessWitness{engine.unpack_diagonal(key), stats.base_dim,
                                             stats.max_fiber, lhs - census.M});
    } else if (stats.max_fiber > 0 && lhs == census.M) {
      small = false;
      bad.emplace_back(key, SmallnessWitness{engine.unpack_diagonal(key), stats.base_dim,
                                             stats.max_fiber, 0});
    }
  }
  if (!semismall) {
    report.verdict = SmallnessVerdict::kNotSemismall;
    std::erase_if(bad, [&](const auto& kv) { return kv.second.defect <= 0; });
  } else {
    report.verdict = small ? SmallnessVerdict::kSmall : SmallnessVerdict::kSemismall;
  }
  std::sort(bad.begin(), bad.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, w] : bad) report.witnesses.push_back(std::move(w));
  return report;
}

}  // namespace degflag
