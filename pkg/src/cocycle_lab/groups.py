"""Finite groups as validated Cayley tables, and on-site unitary reps.

Elements are plain indices 0..n-1 with 0 the identity; symbolic names
exist only in the JSON layer. An on-site representation is a genuine
unitary representation that is scalar only at the identity, which is the
faithfulness condition every bound in this package leans on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    NoIdentity,
    NotAssociative,
    NotBijectiveRows,
    NotHomomorphism,
    NotUnitary,
    ScalarAtNonIdentity,
)
from .numkernel import as_cmatrix, dagger, fro


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[g][h]`` is the index of g·h; element 0 is the identity.
    Construct through :func:`validate_group`, which checks the axioms and
    fills in the cached inverses and element orders.
    """

    order: int
    table: tuple
    inverses: tuple
    element_orders: tuple
    names: tuple | None = None

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def exponent(self) -> int:
        e = 1
        for k in self.element_orders:
            e = e * k // gcd(e, k)
        return e

    def is_abelian(self) -> bool:
        return all(
            self.table[g][h] == self.table[h][g]
            for g in self.elements
            for h in self.elements
        )

    def name_of(self, g: int) -> str:
        if self.names is not None:
            return self.names[g]
        return str(g)


def validate_group(table, names=None) -> FiniteGroup:
    """Validate a Cayley table and return the group.

    Checks: squareness, identity at index 0, rows/columns are
    permutations, associativity on all triples, two-sided inverses.
    Errors name the offending row or triple.
    """
    rows = [list(map(int, row)) for row in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotBijectiveRows(f"table must be square and nonempty, got {n} rows")
    full = set(range(n))
    for g in range(n):
        if set(rows[g]) != full:
            raise NotBijectiveRows(f"row {g} is not a permutation of 0..{n - 1}")
        if {rows[h][g] for h in range(n)} != full:
            raise NotBijectiveRows(f"column {g} is not a permutation of 0..{n - 1}")
    for g in range(n):
        if rows[0][g] != g or rows[g][0] != g:
            raise NoIdentity(f"element 0 is not a two-sided identity at g={g}")
    for g in range(n):
        for h in range(n):
            gh = rows[g][h]
            for k in range(n):
                if rows[gh][k] != rows[g][rows[h][k]]:
                    raise NotAssociative(f"associativity fails at triple ({g},{h},{k})")
    inverses = []
    for g in range(n):
        inv = rows[g].index(0)
        if rows[inv][g] != 0:
            raise NoIdentity(f"element {g} has no two-sided inverse")
        inverses.append(inv)
    orders = []
    for g in range(n):
        k, h = 1, g
        while h != 0:
            h = rows[h][g]
            k += 1
        orders.append(k)
    return FiniteGroup(
        order=n,
        table=tuple(tuple(r) for r in rows),
        inverses=tuple(inverses),
        element_orders=tuple(orders),
        names=tuple(names) if names is not None else None,
    )


def conjugacy_classes(group: FiniteGroup):
    """Partition of the elements into conjugacy classes.

    Deterministic ordering: classes sorted by their least element, each
    class sorted ascending.
    """
    seen = set()
    classes = []
    for h in group.elements:
        if h in seen:
            continue
        cls = {group.mul(group.mul(x, h), group.inv(x)) for x in group.elements}
        seen |= cls
        classes.append(tuple(sorted(cls)))
    classes.sort(key=lambda c: c[0])
    return classes


@dataclass(frozen=True, eq=False)
class OnsiteRep:
    """A genuine unitary representation U with U(g) scalar only at g=e."""

    group: FiniteGroup
    dim: int
    matrices: tuple = field(repr=False)

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character(self) -> np.ndarray:
        return np.array([np.trace(m) for m in self.matrices])


def validate_onsite_rep(group: FiniteGroup, matrices) -> OnsiteRep:
    """Check unitarity, the homomorphism law, and non-scalarity off e."""
    mats = [as_cmatrix(m) for m in matrices]
    if len(mats) != group.order:
        raise NotUnitary(
            f"need one matrix per element, got {len(mats)} for order {group.order}"
        )
    d = mats[0].shape[0]
    for g, m in enumerate(mats):
        if m.shape != (d, d):
            raise NotUnitary(f"matrix for g={g} has shape {m.shape}, expected ({d},{d})")
        if fro(dagger(m) @ m - np.eye(d)) > 1e-10 * max(1.0, fro(m)):
            raise NotUnitary(f"matrix for g={g} is not unitary to 1e-10")
    if fro(mats[0] - np.eye(d)) > 1e-10:
        raise NotHomomorphism("U(e) differs from the identity")
    for g in group.elements:
        for h in group.elements:
            if fro(mats[g] @ mats[h] - mats[group.mul(g, h)]) > 1e-10 * d:
                raise NotHomomorphism(f"U({g})U({h}) != U({group.mul(g, h)})")
    for g in range(1, group.order):
        scalar = np.trace(mats[g]) / d
        if fro(mats[g] - scalar * np.eye(d)) <= 1e-8:
            raise ScalarAtNonIdentity(f"U({g}) is a scalar multiple of the identity")
    return OnsiteRep(group=group, dim=d, matrices=tuple(m.copy() for m in mats))


# ---------------------------------------------------------------------------
# Standard small groups and reps used by fixtures and tests.
# ---------------------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    return validate_group([[(i + j) % n for j in range(n)] for i in range(n)])


def klein_four() -> FiniteGroup:
    """Z2 x Z2 with elements (e, x, z, w=xz); multiplication is index xor."""
    return validate_group(
        [[i ^ j for j in range(4)] for i in range(4)], names=["e", "x", "z", "w"]
    )


def symmetric3() -> FiniteGroup:
    perms = [
        (0, 1, 2),
        (1, 2, 0),
        (2, 0, 1),
        (0, 2, 1),
        (2, 1, 0),
        (1, 0, 2),
    ]
    compose = lambda p, q: tuple(p[q[i]] for i in range(3))
    table = [[perms.index(compose(p, q)) for q in perms] for p in perms]
    return validate_group(table)


def dihedral4() -> FiniteGroup:
    """Symmetries of the square; element a+4b stands for r^a s^b."""

    def mul(i, j):
        a, b = i % 4, i // 4
        c, d = j % 4, j // 4
        return (a + (c if b == 0 else -c)) % 4 + 4 * ((b + d) % 2)

    return validate_group([[mul(i, j) for j in range(8)] for i in range(8)])


def quaternion8() -> FiniteGroup:
    """Unit quaternions {±1, ±i, ±j, ±k}; index 2t+s stands for (-1)^s * u_t."""
    # units ordered (1, i, j, k); u_a u_b = sign * u_c via the quaternion table
    prod = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(i, j):
        sa, ua = i & 1, i >> 1
        sb, ub = j & 1, j >> 1
        sign, uc = prod[(ua, ub)]
        s = (sa + sb + (1 if sign < 0 else 0)) % 2
        return (uc << 1) | s

    return validate_group([[mul(i, j) for j in range(8)] for i in range(8)])


def standard_group(name: str) -> FiniteGroup:
    builders = {
        "z2": lambda: cyclic(2),
        "z3": lambda: cyclic(3),
        "z4": lambda: cyclic(4),
        "z2z2": klein_four,
        "s3": symmetric3,
        "d4": dihedral4,
        "q8": quaternion8,
    }
    if name not in builders:
        raise KeyError(f"unknown group name {name!r}; choose from {sorted(builders)}")
    return builders[name]()


def klein_spin1_rep() -> OnsiteRep:
    """Spin-1 pi-rotations about the x, y, z axes as a rep of Z2 x Z2.

    In the Sz eigenbasis (+,0,-) the three rotations are exact integer
    matrices with character (3,-1,-1,-1); x and z rotations generate,
    the w slot carries the y rotation.
    """
    g = klein_four()
    ux = np.array([[0, 0, -1], [0, -1, 0], [-1, 0, 0]], dtype=complex)
    uz = np.diag([-1.0, 1.0, -1.0]).astype(complex)
    uw = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=complex)
    return validate_onsite_rep(g, [np.eye(3, dtype=complex), ux, uz, uw])


def z2_sign_rep() -> OnsiteRep:
    """U = (I, diag(1,-1)) on C^2 for Z2."""
    return validate_onsite_rep(
        cyclic(2), [np.eye(2, dtype=complex), np.diag([1.0, -1.0]).astype(complex)]
    )
