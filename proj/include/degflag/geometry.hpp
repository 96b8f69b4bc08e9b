#pragma once

// Exact-rational models of points of the degenerate flag variety, its
// desingularization, and the quiver realization.  Subspaces of W = k^n are
// row spaces kept in reduced row echelon form, so equality of subspaces is
// equality of matrices.

#include <optional>
#include <vector>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace degflag {

/// Coordinate-deletion projector pr_d (kills coordinate d) applied to row
/// vectors / row spaces.
inline QMatrix projection_pr(const QMatrix& m, int d) {
  QMatrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r) out.at(r, d - 1) = 0;
  return out;
}

/// pr_{p,q}: kills coordinates p..q-1 (so pr_{p,p} is the identity).
inline QMatrix projection_pr_range(const QMatrix& m, int p, int q) {
  if (p < 1 || q < p || q > static_cast<int>(m.cols()) + 1)
    throw structural_error("projection range out of bounds");
  QMatrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (int c = p; c < q; ++c) out.at(r, c - 1) = 0;
  return out;
}

inline QVector projection_pr(const QVector& v, int d) {
  QVector out = v;
  out[d - 1] = 0;
  return out;
}

inline QVector projection_pr_range(const QVector& v, int p, int q) {
  if (p < 1 || q < p || q > static_cast<int>(v.size()) + 1)
    throw structural_error("projection range out of bounds");
  QVector out = v;
  for (int c = p; c < q; ++c) out[c - 1] = 0;
  return out;
}

/// A subspace of W or of W_{i,j}, stored as a canonical RREF basis matrix
/// with n columns; columns outside the ambient support must vanish.
struct SubspacePoint {
  int n = 0;
  std::optional<RootIndex> ambient;  // W_{i,j} when set, full W otherwise
  QMatrix basis;

  static SubspacePoint in_full(int n, QMatrix rows) {
    SubspacePoint p{n, std::nullopt, std::move(rows)};
    p.canonicalize();
    return p;
  }
  static SubspacePoint in_window(int n, RootIndex ij, QMatrix rows) {
    SubspacePoint p{n, ij, std::move(rows)};
    p.canonicalize();
    std::uint64_t support = support_mask(n, ij.i, ij.j);
    for (std::size_t r = 0; r < p.basis.rows(); ++r)
      for (int c = 1; c <= n; ++c)
        if (!((support >> (c - 1)) & 1) && p.basis.at(r, c - 1) != 0)
          throw structural_error("basis leaves the ambient coordinate support");
    return p;
  }

  void canonicalize() {
    if (static_cast<int>(basis.cols()) != n) throw structural_error("basis has wrong width");
    std::size_t before = basis.rows();
    if (basis.rref() != before) throw structural_error("basis rows are dependent");
  }

  int dim() const { return static_cast<int>(basis.rows()); }
  friend bool operator==(const SubspacePoint&, const SubspacePoint&) = default;
};

/// Point of the degenerate complete flag variety: V_1 .. V_{n-1} in W.
struct FlagPoint {
  int n = 0;
  std::vector<QMatrix> V;  // V[d-1] has d rows, n columns, RREF

  friend bool operator==(const FlagPoint&, const FlagPoint&) = default;
};

/// Point of the resolution (or of one of its truncations): one subspace per
/// slot, stored in beta order like Collection.
struct RPoint {
  int n = 0;
  std::vector<QMatrix> slots;
  std::vector<char> present;

  explicit RPoint(int n_) : n(n_) {
    SlotTable t(n_);
    slots.assign(t.size(), QMatrix());
    present.assign(t.size(), 0);
  }

  const QMatrix& at(const SlotTable& t, int i, int j) const { return slots[t.id(i, j)]; }
  void set(const SlotTable& t, int i, int j, QMatrix m) {
    int id = t.id(i, j);
    slots[id] = std::move(m);
    present[id] = 1;
  }

  friend bool operator==(const RPoint&, const RPoint&) = default;
};

namespace detail {

inline QMatrix coordinate_rows(int n, const IndexSet& s) {
  QMatrix m(s.size(), n);
  int r = 0;
  for (int e : s.elements()) m.at(r++, e - 1) = 1;
  return m;
}

inline bool within_support(const QMatrix& m, std::uint64_t support, int n) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (int c = 1; c <= n; ++c)
      if (!((support >> (c - 1)) & 1) && m.at(r, c - 1) != 0) return false;
  return true;
}

inline bool subspace_in(const QMatrix& small, const QMatrix& big) {
  return big.row_space_contains_all(small);
}

}  // namespace detail

/// pr_{d+1} V_d <= V_{d+1} for all d, after checking the dimension ladder.
inline bool is_degenerate_flag(const FlagPoint& x) {
  if (static_cast<int>(x.V.size()) != x.n - 1) throw structural_error("wrong number of subspaces");
  for (int d = 1; d <= x.n - 1; ++d) {
    if (static_cast<int>(x.V[d - 1].rows()) != d ||
        static_cast<int>(x.V[d - 1].cols()) != x.n)
      throw structural_error("V_" + std::to_string(d) + " has the wrong shape");
    if (x.V[d - 1].rank() != static_cast<std::size_t>(d))
      throw structural_error("V_" + std::to_string(d) + " basis is degenerate");
  }
  for (int d = 1; d <= x.n - 2; ++d)
    if (!detail::subspace_in(projection_pr(x.V[d - 1], d + 1), x.V[d])) return false;
  return true;
}

/// Parabolic variant: the step from V_{d_i} to V_{d_{i+1}} projects away the
/// coordinates d_i+1 .. d_{i+1} (the composition pr_{d_i+1} ... pr_{d_{i+1}}).
inline bool is_degenerate_flag_parabolic(const std::vector<QMatrix>& V,
                                         const ParabolicShape& shape) {
  if (V.size() != shape.d.size()) throw structural_error("wrong number of subspaces");
  for (std::size_t t = 0; t < V.size(); ++t)
    if (static_cast<int>(V[t].rows()) != shape.d[t] ||
        static_cast<int>(V[t].cols()) != shape.n ||
        V[t].rank() != static_cast<std::size_t>(shape.d[t]))
      throw structural_error("subspace has the wrong shape");
  for (std::size_t t = 0; t + 1 < V.size(); ++t)
    if (!detail::subspace_in(projection_pr_range(V[t], shape.d[t] + 1, shape.d[t + 1] + 1),
                             V[t + 1]))
      return false;
  return true;
}

/// Conditions of the resolution on the present slots: dimensions, ambient
/// supports, pr_{j+1} V_{i,j} <= V_{i,j+1} <= V_{i+1,j+1}.
inline bool is_R_point(const RPoint& p, bool require_all_slots = true) {
  SlotTable t(p.n);
  for (int id = 0; id < t.size(); ++id) {
    if (!p.present[id]) {
      if (require_all_slots) throw structural_error("missing slot entry");
      continue;
    }
    auto [i, j] = t.slot(id);
    const QMatrix& m = p.slots[id];
    if (static_cast<int>(m.rows()) != i || static_cast<int>(m.cols()) != p.n)
      throw structural_error("slot has the wrong shape");
    if (m.rank() != static_cast<std::size_t>(i)) throw structural_error("degenerate slot basis");
    if (!detail::within_support(m, support_mask(p.n, i, j), p.n)) return false;
  }
  for (int id = 0; id < t.size(); ++id) {
    if (!p.present[id]) continue;
    auto [i, j] = t.slot(id);
    if (j < p.n - 1 && p.present[t.id(i, j + 1)] &&
        !detail::subspace_in(projection_pr(p.slots[id], j + 1), p.at(t, i, j + 1)))
      return false;
    if (i > 1 && p.present[t.id(i - 1, j)] &&
        !detail::subspace_in(p.at(t, i - 1, j), p.slots[id]))
      return false;
  }
  return true;
}

/// Diagonal extraction.
inline FlagPoint project_pi(const RPoint& p) {
  SlotTable t(p.n);
  FlagPoint x{p.n, {}};
  for (int i = 1; i <= p.n - 1; ++i) {
    if (!p.present[t.id(i, i)]) throw structural_error("missing diagonal slot");
    x.V.push_back(p.at(t, i, i));
  }
  return x;
}

/// Inductive section of the projection: walk outward from the diagonal, at
/// each step taking pr_{j} of the previous slot and, when the projection
/// drops rank, restoring it with w_m for the minimal m in {1..i} whose
/// coordinate vector is missing.
inline RPoint lift(const FlagPoint& x) {
  if (!is_degenerate_flag(x)) throw precondition_error("not a degenerate flag point");
  SlotTable t(x.n);
  RPoint p(x.n);
  for (int i = 1; i <= x.n - 1; ++i) {
    QMatrix m = x.V[i - 1];
    m.rref();
    p.set(t, i, i, std::move(m));
  }
  for (int level = 1; level <= x.n - 2; ++level)
    for (int i = 1; i + level <= x.n - 1; ++i) {
      int j = i + level;
      QMatrix m = projection_pr(p.at(t, i, j - 1), j);
      m.rref();
      if (static_cast<int>(m.rows()) < i) {
        int chosen = 0;
        for (int cand = 1; cand <= i; ++cand) {
          QVector e(x.n, Rational(0));
          e[cand - 1] = 1;
          if (!m.row_space_contains(e)) {
            chosen = cand;
            break;
          }
        }
        if (chosen == 0) throw consistency_error("no coordinate vector completes the lift");
        QVector e(x.n, Rational(0));
        e[chosen - 1] = 1;
        m.append_row(e);
        m.rref();
      }
      p.set(t, i, j, std::move(m));
    }
  return p;
}

/// The torus fixed point of an admissible collection: every slot is the
/// coordinate subspace of its index set.
inline RPoint fixed_point(const Collection& c) {
  if (!is_admissible(c)) throw precondition_error("collection is not admissible");
  SlotTable t(c.n);
  RPoint p(c.n);
  for (int id = 0; id < t.size(); ++id) {
    if (!c.present[id]) continue;
    auto [i, j] = t.slot(id);
    p.set(t, i, j, detail::coordinate_rows(c.n, c.sets[id]));
  }
  return p;
}

/// Label of the cell of Gr(i, W_{i,j}) containing the subspace: echelon
/// pivots taken in the rotated coordinate order (j+1..n, 1..i), i.e. the
/// jump positions of the filtration by rotated coordinate prefixes.
inline IndexSet cell_label(const QMatrix& basis, RootIndex slot, int n) {
  // Trailing pivots with respect to the rotated order = forward pivots with
  // respect to the reversed order (i..1, n..j+1).
  std::vector<std::size_t> order;
  for (int c = slot.i; c >= 1; --c) order.push_back(c - 1);
  for (int c = n; c >= slot.j + 1; --c) order.push_back(c - 1);
  std::vector<std::size_t> pivots = basis.pivot_columns(order);
  std::uint64_t bits = 0;
  for (std::size_t c : pivots) bits |= std::uint64_t{1} << c;
  return IndexSet(n, bits);
}

inline IndexSet cell_label(const SubspacePoint& s) {
  if (!s.ambient) throw structural_error("cell labels live in a Grassmannian window");
  return cell_label(s.basis, *s.ambient, s.n);
}

/// Collection of slotwise cell labels of a point of the resolution.
inline Collection cell_labels(const RPoint& p) {
  SlotTable t(p.n);
  Collection c(p.n);
  for (int id = 0; id < t.size(); ++id) {
    if (!p.present[id]) continue;
    auto [i, j] = t.slot(id);
    c.sets[id] = cell_label(p.slots[id], {i, j}, p.n);
    c.present[id] = 1;
  }
  return c;
}

/// Value of the distinguished section at a slot, computed from the earlier
/// (in beta order) slots of the partial point.
inline QMatrix section_value(const RPoint& p, RootIndex slot) {
  SlotTable t(p.n);
  int n = p.n;
  if (slot.i == 1) {
    QMatrix m(1, n);
    m.at(0, slot.j) = 1;  // w_{j+1}
    return m;
  }
  if (slot.j == n - 1) {
    QMatrix m(slot.i, n);
    for (int r = 0; r < slot.i - 1; ++r) m.at(r, r) = 1;  // w_1 .. w_{i-1}
    m.at(slot.i - 1, n - 1) = 1;                          // w_n
    return m;
  }
  if (!p.present[t.id(slot.i - 1, slot.j + 1)])
    throw structural_error("section needs the slot one step up-right");
  QMatrix m = p.at(t, slot.i - 1, slot.j + 1);
  QVector e(n, Rational(0));
  e[slot.j] = 1;
  m.append_row(e);
  m.rref();
  return m;
}

/// Extends a partial point over beta_1..beta_{l-1} by the section value at
/// beta_l.  Forgetting the new slot recovers the input.
inline RPoint section_s(int l, const RPoint& p) {
  SlotTable t(p.n);
  if (l < 1 || l > t.size()) throw structural_error("section index out of range");
  for (int id = 0; id < l - 1; ++id)
    if (!p.present[id]) throw structural_error("partial point missing an earlier slot");
  RPoint out = p;
  RootIndex slot = t.slot(l - 1);
  out.set(t, slot.i, slot.j, section_value(p, slot));
  return out;
}

/// Is the slot component of the point equal to the section value there?
inline bool z_divisor_membership(const RPoint& p, RootIndex slot) {
  SlotTable t(p.n);
  int id = t.id(slot);
  if (!p.present[id]) throw structural_error("slot entry missing");
  return p.slots[id] == section_value(p, slot);
}

// ---------------------------------------------------------------------------
// Quiver realization.
// ---------------------------------------------------------------------------

/// Maps A_i : W_i -> W_n (n x i) and B_i : W_i -> W_{i+1} ((i+1) x i),
/// subject to A_{i+1} B_i = pr_{i+1} A_i.
struct QuiverPoint {
  int n = 0;
  std::vector<QMatrix> A;  // A[i-1]: n x i
  std::vector<QMatrix> B;  // B[i-1]: (i+1) x i
};

inline QMatrix kill_row(const QMatrix& m, int row) {
  QMatrix out = m;
  for (std::size_t c = 0; c < out.cols(); ++c) out.at(row - 1, c) = 0;
  return out;
}

inline bool is_quiver_point(const QuiverPoint& p) {
  if (static_cast<int>(p.A.size()) != p.n - 1 || static_cast<int>(p.B.size()) != p.n - 2)
    throw structural_error("wrong number of maps");
  for (int i = 1; i <= p.n - 1; ++i)
    if (static_cast<int>(p.A[i - 1].rows()) != p.n || static_cast<int>(p.A[i - 1].cols()) != i)
      throw structural_error("A_" + std::to_string(i) + " has the wrong shape");
  for (int i = 1; i <= p.n - 2; ++i)
    if (static_cast<int>(p.B[i - 1].rows()) != i + 1 || static_cast<int>(p.B[i - 1].cols()) != i)
      throw structural_error("B_" + std::to_string(i) + " has the wrong shape");
  for (int i = 1; i <= p.n - 2; ++i)
    if (!(p.A[i] * p.B[i - 1] == kill_row(p.A[i - 1], i + 1))) return false;
  return true;
}

/// Column-span representative of a flag: A_i holds a basis of V_i as columns,
/// B_i the unique solution of A_{i+1} B_i = pr_{i+1} A_i (well defined since
/// pr_{i+1} V_i <= V_{i+1} and A_{i+1} is injective).
inline QuiverPoint quiver_from_flag(const FlagPoint& x) {
  if (!is_degenerate_flag(x)) throw precondition_error("not a degenerate flag point");
  QuiverPoint p;
  p.n = x.n;
  for (int i = 1; i <= x.n - 1; ++i) {
    QMatrix a(x.n, i);
    for (int r = 0; r < i; ++r)
      for (int c = 0; c < x.n; ++c) a.at(c, r) = x.V[i - 1].at(r, c);
    p.A.push_back(std::move(a));
  }
  for (int i = 1; i <= x.n - 2; ++i)
    p.B.push_back(solve_columns(p.A[i], kill_row(p.A[i - 1], i + 1)));
  return p;
}

struct QuiverDimensionReport {
  int n = 0;
  int samples = 0;
  int ambient_dim = 0;
  int equation_count = 0;       // also the expected Jacobian rank
  int expected_dim = 0;         // n(n-1)/2 + 1^2 + .. + (n-1)^2
  bool all_full_rank = true;
  std::vector<int> ranks;       // one per sample
};

/// Jacobian of the bilinear relation map at a point, as a block matrix over
/// the entries of all A_i and B_i.
inline std::size_t quiver_jacobian_rank(const QuiverPoint& p) {
  int n = p.n;
  std::vector<int> a_offset(n), b_offset(n);
  int vars = 0;
  for (int i = 1; i <= n - 1; ++i) {
    a_offset[i] = vars;
    vars += n * i;
  }
  for (int i = 1; i <= n - 2; ++i) {
    b_offset[i] = vars;
    vars += (i + 1) * i;
  }
  int eqs = 0;
  for (int i = 1; i <= n - 2; ++i) eqs += n * i;

  QMatrix jac(eqs, vars);
  int eq = 0;
  for (int i = 1; i <= n - 2; ++i) {
    // Relation block Phi_i[r,c] = (A_{i+1} B_i)[r,c] - (pr_{i+1} A_i)[r,c].
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < i; ++c, ++eq) {
        for (int k = 0; k < i + 1; ++k) {
          jac.at(eq, a_offset[i + 1] + r * (i + 1) + k) += p.B[i - 1].at(k, c);
          jac.at(eq, b_offset[i] + k * i + c) += p.A[i].at(r, k);
        }
        if (r != i) jac.at(eq, a_offset[i] + r * i + c) -= 1;  // row i+1 is killed
      }
  }
  return jac.rank();
}

/// Random valid degenerate flag point with small rational entries.
inline FlagPoint random_flag_point(int n, SmallRationalSampler& sampler) {
  for (;;) {
    FlagPoint x{n, {}};
    bool ok = true;
    QMatrix prev;
    for (int d = 1; d <= n - 1 && ok; ++d) {
      QMatrix m = d == 1 ? QMatrix() : projection_pr(prev, d);
      m = [&] {
        QMatrix c = m;
        if (c.cols() == 0) c = QMatrix(0, n);
        c.rref();
        return c;
      }();
      int guard = 0;
      while (static_cast<int>(m.rows()) < d) {
        QVector v(n);
        for (int c = 0; c < n; ++c) v[c] = sampler();
        m.append_row(v);
        m.rref();
        if (++guard > 64) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      x.V.push_back(m);
      prev = x.V.back();
    }
    if (ok && is_degenerate_flag(x)) return x;
  }
}

inline QuiverDimensionReport quiver_dimension_check(int n, int samples,
                                                    SmallRationalSampler& sampler) {
  QuiverDimensionReport report;
  report.n = n;
  report.samples = samples;
  for (int i = 1; i <= n - 1; ++i) report.ambient_dim += n * i;
  for (int i = 1; i <= n - 2; ++i) report.ambient_dim += (i + 1) * i;
  for (int i = 1; i <= n - 2; ++i) report.equation_count += n * i;
  report.expected_dim = n * (n - 1) / 2;
  for (int i = 1; i <= n - 1; ++i) report.expected_dim += i * i;
  for (int s = 0; s < samples; ++s) {
    FlagPoint x = random_flag_point(n, sampler);
    QuiverPoint p = quiver_from_flag(x);
    int rank = static_cast<int>(quiver_jacobian_rank(p));
    report.ranks.push_back(rank);
    if (rank != report.equation_count) report.all_full_rank = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// The refined parabolic resolution.
// ---------------------------------------------------------------------------

/// Point of Y_d: subspaces V_{d_i,d_j} for 1 <= i <= j <= k, indexed here by
/// the pair position (i,j) in the shape.
struct YPoint {
  ParabolicShape shape;
  // entries[t] for t = pair index in row-major order over 1<=i<=j<=k
  std::vector<QMatrix> entries;

  static std::size_t pair_index(const ParabolicShape& shape, int i, int j) {
    int k = static_cast<int>(shape.d.size());
    return static_cast<std::size_t>((i - 1) * k - (i - 1) * (i - 2) / 2 + (j - i));
  }
  const QMatrix& at(int i, int j) const { return entries[pair_index(shape, i, j)]; }
};

inline bool is_Y_point(const YPoint& y) {
  const ParabolicShape& shape = y.shape;
  int k = static_cast<int>(shape.d.size());
  int n = shape.n;
  if (y.entries.size() != static_cast<std::size_t>(k * (k + 1) / 2))
    throw structural_error("wrong number of entries");
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) {
      const QMatrix& m = y.at(i, j);
      if (static_cast<int>(m.rows()) != shape.d[i - 1] || static_cast<int>(m.cols()) != n)
        throw structural_error("entry has the wrong shape");
      if (m.rank() != static_cast<std::size_t>(shape.d[i - 1]))
        throw structural_error("degenerate entry basis");
      if (!detail::within_support(m, support_mask(n, shape.d[i - 1], shape.d[j - 1]), n))
        return false;
    }
  for (int i = 1; i <= k; ++i)
    for (int j = i; j <= k; ++j) {
      if (j + 1 <= k &&
          !detail::subspace_in(
              projection_pr_range(y.at(i, j), shape.d[j - 1] + 1, shape.d[j] + 1), y.at(i, j + 1)))
        return false;
      if (i + 1 <= j && !detail::subspace_in(y.at(i, j), y.at(i + 1, j))) return false;
    }
  return true;
}

}  // namespace degflag
