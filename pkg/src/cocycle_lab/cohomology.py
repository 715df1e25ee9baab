"""2-cocycles, coboundaries, and decision procedures on their classes.

A cocycle is stored either exactly (integer exponents over a fixed root
of unity) or as float phases in turns. Exact mode is primary: class
decisions (`is_trivial`, `classes_equal`) reduce to finding a 1-dim
block in the twisted regular representation, which is discrete data, so
they are reliable even when the cocycle arrived through float phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import GroupMismatch, GroupTooLarge, NonCommutingPair
from .groups import FiniteGroup, klein_four
from .numkernel import _snf_tracked, int_matmul

_FLOAT_AXIOM_TOL = 1e-8


def _unit_from_exponent(k: int, m: int) -> complex:
    """exp(2*pi*i*k/m) computed from the reduced fraction.

    Reducing first makes equal classes of (k, m) pairs produce bit-equal
    floats, which the exact-mode invariants rely on.
    """
    k %= m
    if k == 0:
        return 1.0 + 0.0j
    g = gcd(k, m)
    return complex(np.exp(2j * np.pi * ((k // g) / (m // g))))


@dataclass(frozen=True, eq=False)
class Cocycle:
    """A normalized T-valued 2-cochain satisfying the cocycle axiom.

    ``root_order`` is a positive integer m (values are m-th roots of
    unity, held as integer exponents) or None for float mode (values
    held as phases in turns). Construct via :func:`make_cocycle`,
    :func:`coboundary`, or :func:`trivial_cocycle`; those enforce the
    axiom. Equality of cocycles as *classes* is never decided by value
    comparison; use :func:`classes_equal`.
    """

    group: FiniteGroup
    root_order: int | None
    exponents: tuple | None = field(default=None, repr=False)
    phases: tuple | None = field(default=None, repr=False)

    @property
    def is_exact(self) -> bool:
        return self.root_order is not None

    def value(self, g: int, h: int) -> complex:
        if self.is_exact:
            return _unit_from_exponent(self.exponents[g][h], self.root_order)
        return complex(np.exp(2j * np.pi * self.phases[g][h]))

    def values(self) -> np.ndarray:
        n = self.group.order
        return np.array(
            [[self.value(g, h) for h in range(n)] for g in range(n)], dtype=complex
        )

    def phase_turns(self) -> np.ndarray:
        n = self.group.order
        if self.is_exact:
            return np.array(
                [
                    [(self.exponents[g][h] % self.root_order) / self.root_order
                     for h in range(n)]
                    for g in range(n)
                ]
            )
        return np.array(self.phases, dtype=float)


@dataclass(frozen=True)
class CocycleReport:
    """Outcome of check_cocycle: every violated triple, or a clean bill."""

    valid: bool
    identity_violations: tuple
    triple_violations: tuple


@dataclass(frozen=True, eq=False)
class CohomologyClassHandle:
    """Handle to an H^2 class, carried by a representative cocycle.

    Handle equality is a mathematical decision (`equals`), never a value
    comparison of representatives.
    """

    representative: Cocycle

    @property
    def group(self) -> FiniteGroup:
        return self.representative.group

    def equals(self, other: "CohomologyClassHandle") -> bool:
        return classes_equal(self.representative, other.representative)

    def is_trivial(self) -> bool:
        return is_trivial(self.representative)


def make_cocycle(group: FiniteGroup, root_order=None, exponents=None, phases=None) -> Cocycle:
    """Build a cocycle from exponents (exact) or turns (float) and verify it."""
    if (exponents is None) == (phases is None):
        raise ValueError("provide exactly one of exponents / phases")
    if exponents is not None:
        if root_order is None or root_order < 1:
            raise ValueError("exact mode needs a positive root_order")
        exp = tuple(
            tuple(int(x) % root_order for x in row) for row in exponents
        )
        c = Cocycle(group=group, root_order=root_order, exponents=exp)
    else:
        ph = tuple(tuple(float(x) % 1.0 for x in row) for row in phases)
        c = Cocycle(group=group, root_order=None, phases=ph)
    n = group.order
    shape_ok = len(c.exponents or c.phases) == n and all(
        len(row) == n for row in (c.exponents or c.phases)
    )
    if not shape_ok:
        raise ValueError(f"cocycle values must form an {n}x{n} table")
    report = check_cocycle(c)
    if not report.valid:
        raise ValueError(
            f"not a cocycle: identity violations {report.identity_violations}, "
            f"first triples {report.triple_violations[:3]}"
        )
    return c


def trivial_cocycle(group: FiniteGroup, root_order: int = 1) -> Cocycle:
    n = group.order
    return Cocycle(
        group=group,
        root_order=root_order,
        exponents=tuple(tuple(0 for _ in range(n)) for _ in range(n)),
    )


def pauli_cocycle() -> Cocycle:
    """The nontrivial class of Z2 x Z2, read off products of sigma_x, sigma_z.

    With elements (e, x, z, w=xz) the -1 entries sit at (z,x), (z,w),
    (w,x), (w,w).
    """
    exps = [
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [0, 1, 0, 1],
        [0, 1, 0, 1],
    ]
    return make_cocycle(klein_four(), root_order=2, exponents=exps)


def check_cocycle(c: Cocycle) -> CocycleReport:
    """Report every violated axiom instance (never raises)."""
    grp = c.group
    n = grp.order
    idv = []
    triples = []
    if c.is_exact:
        m = c.root_order
        e = c.exponents
        for g in range(n):
            if e[g][0] % m != 0 or e[0][g] % m != 0:
                idv.append(g)
        for g in range(n):
            for h in range(n):
                gh = grp.mul(g, h)
                for k in range(n):
                    lhs = e[g][h] + e[gh][k]
                    rhs = e[h][k] + e[g][grp.mul(h, k)]
                    if (lhs - rhs) % m != 0:
                        triples.append((g, h, k))
    else:
        vals = c.values()
        for g in range(n):
            if abs(vals[g][0] - 1.0) > _FLOAT_AXIOM_TOL or abs(vals[0][g] - 1.0) > _FLOAT_AXIOM_TOL:
                idv.append(g)
        for g in range(n):
            for h in range(n):
                gh = grp.mul(g, h)
                for k in range(n):
                    lhs = vals[g][h] * vals[gh][k]
                    rhs = vals[h][k] * vals[g][grp.mul(h, k)]
                    if abs(lhs - rhs) > _FLOAT_AXIOM_TOL:
                        triples.append((g, h, k))
    return CocycleReport(
        valid=not idv and not triples,
        identity_violations=tuple(idv),
        triple_violations=tuple(triples),
    )


def coboundary(group: FiniteGroup, b, root_order: int | None = None) -> Cocycle:
    """The cocycle sigma_b(g,h) = b(gh)^{-1} b(g) b(h) of a phase function b.

    ``b`` is either a sequence of integer exponents over ``root_order``
    (exact mode) or a sequence of unimodular complex numbers (float
    mode). b(e) must be 1.
    """
    n = group.order
    if len(b) != n:
        raise ValueError(f"b must assign a phase to each of the {n} elements")
    if root_order is not None:
        exps = [int(x) % root_order for x in b]
        if exps[0] != 0:
            raise ValueError("b(e) must be 1 (exponent 0)")
        table = [
            [
                (exps[g] + exps[h] - exps[group.mul(g, h)]) % root_order
                for h in range(n)
            ]
            for g in range(n)
        ]
        return Cocycle(group=group, root_order=root_order, exponents=tuple(map(tuple, table)))
    vals = np.asarray(b, dtype=complex)
    if np.max(np.abs(np.abs(vals) - 1.0)) > 1e-8:
        raise ValueError("b must be unimodular")
    if abs(vals[0] - 1.0) > 1e-12:
        raise ValueError("b(e) must be 1")
    turns = np.angle(vals) / (2 * np.pi)
    table = [
        [float((turns[g] + turns[h] - turns[group.mul(g, h)]) % 1.0) for h in range(n)]
        for g in range(n)
    ]
    return Cocycle(group=group, root_order=None, phases=tuple(map(tuple, table)))


def _require_same_group(c1: Cocycle, c2: Cocycle):
    if c1.group != c2.group:
        raise GroupMismatch("cocycles live on different groups")


def combine(c1: Cocycle, c2: Cocycle | None = None, op: str = "product") -> Cocycle:
    """Pointwise product / inverse / conjugate of cocycles.

    For unary ops pass the single cocycle as ``c1``. Conjugation equals
    pointwise inversion on T-valued data and represents the inverse
    class. Exact operands combine exactly over the lcm root order.
    """
    n = c1.group.order
    if op == "product":
        if c2 is None:
            raise ValueError("product needs two cocycles")
        _require_same_group(c1, c2)
        if c1.is_exact and c2.is_exact:
            m1, m2 = c1.root_order, c2.root_order
            m = m1 * m2 // gcd(m1, m2)
            exps = [
                [
                    (c1.exponents[g][h] * (m // m1) + c2.exponents[g][h] * (m // m2)) % m
                    for h in range(n)
                ]
                for g in range(n)
            ]
            return Cocycle(group=c1.group, root_order=m, exponents=tuple(map(tuple, exps)))
        t1, t2 = c1.phase_turns(), c2.phase_turns()
        ph = (t1 + t2) % 1.0
        return Cocycle(group=c1.group, root_order=None, phases=tuple(map(tuple, ph.tolist())))
    if op in ("inverse", "conjugate"):
        if c2 is not None:
            raise ValueError(f"{op} is unary")
        if c1.is_exact:
            m = c1.root_order
            exps = [[(-c1.exponents[g][h]) % m for h in range(n)] for g in range(n)]
            return Cocycle(group=c1.group, root_order=m, exponents=tuple(map(tuple, exps)))
        ph = (-c1.phase_turns()) % 1.0
        return Cocycle(group=c1.group, root_order=None, phases=tuple(map(tuple, ph.tolist())))
    raise ValueError(f"unknown op {op!r}")


def conjugate(c: Cocycle) -> Cocycle:
    return combine(c, op="conjugate")


def is_trivial(c: Cocycle) -> bool:
    """True iff c is a coboundary.

    Decided by decomposing the c-twisted regular representation and
    looking for a 1-dimensional block: a 1-dim c-projective rep is
    precisely a trivializing phase function b.
    """
    from .projrep import irreps  # deferred: projrep builds on this module

    table = irreps(c)
    return any(entry.dim == 1 for entry in table.entries)


def classes_equal(c1: Cocycle, c2: Cocycle) -> bool:
    """Decide [c1] = [c2] in H^2(G,T) via triviality of c1 * conj(c2)."""
    _require_same_group(c1, c2)
    return is_trivial(combine(c1, conjugate(c2), op="product"))


def commutator_invariant(c: Cocycle, g: int, h: int) -> complex:
    """sigma(g,h)/sigma(h,g) for commuting g,h; coboundary-invariant."""
    grp = c.group
    if grp.mul(g, h) != grp.mul(h, g):
        raise NonCommutingPair(f"elements {g} and {h} do not commute")
    if c.is_exact:
        m = c.root_order
        return _unit_from_exponent(c.exponents[g][h] - c.exponents[h][g], m)
    return complex(
        np.exp(2j * np.pi * (c.phases[g][h] - c.phases[h][g]))
    )


def snap_to_roots(turns, root_order: int, soft_tol: float = 1e-6, hard_tol: float = 1e-4):
    """Snap float phases (turns) onto the root_order grid.

    Returns (exponents, max_displacement). Displacement is circular
    distance in turns. Raises ValueError past hard_tol; callers convert
    that into their domain error.
    """
    t = np.asarray(turns, dtype=float) % 1.0
    k = np.rint(t * root_order).astype(int) % root_order
    disp = np.abs(t - np.rint(t * root_order) / root_order)
    disp = np.minimum(disp, 1.0 - disp)
    worst = float(np.max(disp)) if disp.size else 0.0
    if worst > hard_tol:
        raise ValueError(
            f"phase {worst:.3e} turns away from the nearest root of unity "
            f"(grid {root_order}, hard tolerance {hard_tol:g})"
        )
    return k, worst


# ---------------------------------------------------------------------------
# Enumeration of H^2(G, Z_m) and its T-classes.
# ---------------------------------------------------------------------------

_ENUMERATION_ORDER_CAP = 8


def enumerate_classes(group: FiniteGroup, m: int | None = None):
    """One handle per element of H^2(G,T) reachable through Z_m exponents.

    Computes H^2(G, Z_m) on normalized cochains by Smith reduction of the
    degree-2 boundary map, then dedupes the representatives into T-classes
    with classes_equal. With m a multiple of |G| (default m = |G|) this
    reaches every T-class. Scope limit: |G| <= 8.
    """
    n = group.order
    if n > _ENUMERATION_ORDER_CAP:
        raise GroupTooLarge(f"enumeration is limited to |G| <= {_ENUMERATION_ORDER_CAP}")
    if m is None:
        m = n
    if m < 1:
        raise ValueError("root order m must be positive")

    nn = n * n
    idx = lambda g, h: g * n + h

    # Rows of the boundary map d2 on 2-cochains, plus normalization rows.
    rows = []
    for g in range(n):
        for h in range(n):
            gh = group.mul(g, h)
            for k in range(n):
                row = [0] * nn
                row[idx(h, k)] += 1
                row[idx(gh, k)] -= 1
                row[idx(g, group.mul(h, k))] += 1
                row[idx(g, h)] -= 1
                rows.append(row)
    for g in range(n):
        for pos in ((0, g), (g, 0)):
            row = [0] * nn
            row[idx(*pos)] = 1
            rows.append(row)

    s, _, v, _, vinv = _snf_tracked(rows)
    diag = [s[i][i] if i < len(s) else 0 for i in range(nn)]
    orders = [gcd(d, m) if d != 0 else m for d in diag]
    kept = [i for i in range(nn) if orders[i] > 1]

    # Coboundary generators (b = indicator of one non-identity element),
    # expressed in Smith coordinates of the kernel.
    cob_cols = []
    for gnz in range(1, n):
        col = [0] * nn
        for g in range(n):
            for h in range(n):
                val = (g == gnz) + (h == gnz) - (group.mul(g, h) == gnz)
                col[idx(g, h)] = val
        y = int_matmul(vinv, [[x] for x in col])
        coords = []
        for i in kept:
            step = m // orders[i]
            yi = y[i][0] % m
            if yi % step != 0:
                raise AssertionError("coboundary fell outside the cocycle kernel")
            coords.append((yi // step) % orders[i])
        cob_cols.append(coords)

    r = len(kept)
    handles = []
    if r == 0:
        reps = [trivial_cocycle(group, root_order=m)]
    else:
        rel = [[0] * (r + len(cob_cols)) for _ in range(r)]
        for i in range(r):
            rel[i][i] = orders[kept[i]]
        for j, col in enumerate(cob_cols):
            for i in range(r):
                rel[i][r + j] = col[i]
        s2, _, _, u2inv, _ = _snf_tracked(rel)
        divisors = [s2[i][i] for i in range(r)]
        if any(d == 0 for d in divisors):
            raise AssertionError("H^2 quotient came out infinite")

        free = [i for i in range(r) if divisors[i] > 1]
        tuples = [[]]
        for i in free:
            tuples = [t + [c] for t in tuples for c in range(divisors[i])]
        reps = []
        for t in tuples:
            tfull = [0] * r
            for pos, i in enumerate(free):
                tfull[i] = t[pos]
            z = int_matmul(u2inv, [[x] for x in tfull])
            exps = [0] * nn
            for i in range(r):
                ci = z[i][0] % orders[kept[i]]
                step = m // orders[kept[i]]
                gen = [v[row][kept[i]] for row in range(nn)]
                for row in range(nn):
                    exps[row] = (exps[row] + ci * step * gen[row]) % m
            table = [exps[g * n:(g + 1) * n] for g in range(n)]
            reps.append(make_cocycle(group, root_order=m, exponents=table))

    # Dedupe Z_m representatives into T-classes; lexicographically least
    # exponent table becomes the class representative.
    reps.sort(key=lambda c: c.exponents)
    for cand in reps:
        if not any(classes_equal(cand, h.representative) for h in handles):
            handles.append(CohomologyClassHandle(representative=cand))
    return handles
