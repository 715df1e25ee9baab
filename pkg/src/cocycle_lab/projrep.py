"""Projective unitary representations and their irreducible decomposition.

The decomposition engine is the workhorse of the whole package: the
twisted regular representation is split with a random Hermitian element
of its commutant (deterministically seeded), blocks are grouped by
character, and arbitrary representations are then reduced against that
table with projection operators built from matrix elements. Triviality
of a cocycle class is exactly the presence of a 1-dim block here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import Cocycle, coboundary, combine, conjugate, trivial_cocycle, pauli_cocycle
from .errors import (
    CocycleMismatch,
    CocycleValueMismatch,
    DegenerateSplit,
    DimensionOverflow,
    NonIntegerMultiplicity,
)
from .groups import FiniteGroup, OnsiteRep, klein_four
from .numkernel import as_cmatrix, dagger, fro, hermitian_eig, kron, kron_power

#: Seed for the random commutant element drawn inside irreps().
COMMUTANT_SEED = 0xC0CC1E

#: Largest carrier dimension tensor_with_onsite will build explicitly.
DEFAULT_DIM_CAP = 4096

_SPLIT_RETRIES = 5


@dataclass(frozen=True, eq=False)
class ProjectiveRep:
    """Unitaries V with V(g)V(h) = sigma(g,h) V(gh)."""

    group: FiniteGroup
    cocycle: Cocycle
    dim: int
    matrices: tuple = field(repr=False)

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character_vector(self) -> np.ndarray:
        return np.array([np.trace(m) for m in self.matrices])


@dataclass(frozen=True)
class IrrepEntry:
    rep: ProjectiveRep
    dim: int


@dataclass(frozen=True, eq=False)
class IrrepTable:
    """One representative per unitary-equivalence class at fixed cocycle."""

    cocycle: Cocycle
    entries: tuple

    def dims(self):
        return tuple(e.dim for e in self.entries)


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    """Block basis and multiplicities of a rep against an IrrepTable.

    ``basis @ V(g) @ basis^dagger`` is block diagonal, blocks ordered as
    ``table.entries`` with layout V_alpha(g) (x) I_{mult}. ``block_slices``
    give each entry's index range (empty slices for multiplicity 0).
    """

    table: IrrepTable
    multiplicities: tuple
    basis: np.ndarray = field(repr=False)
    block_slices: tuple
    deviation: float


def _cocycle_values_match(c1: Cocycle, c2: Cocycle, tol: float = 1e-8) -> bool:
    if c1.group != c2.group:
        return False
    return bool(np.max(np.abs(c1.values() - c2.values())) <= tol)


def validate_projrep(group: FiniteGroup, cocycle: Cocycle, matrices) -> ProjectiveRep:
    """Check unitarity and the twisted multiplication law."""
    if cocycle.group != group:
        raise CocycleMismatch("cocycle is defined on a different group")
    mats = [as_cmatrix(m) for m in matrices]
    if len(mats) != group.order:
        raise CocycleMismatch(
            f"need one matrix per element, got {len(mats)} for order {group.order}"
        )
    d = mats[0].shape[0]
    for g, m in enumerate(mats):
        if m.shape != (d, d):
            raise CocycleMismatch(f"matrix for g={g} has shape {m.shape}")
        if fro(dagger(m) @ m - np.eye(d)) > 1e-10 * max(1.0, fro(m)):
            raise CocycleMismatch(f"matrix for g={g} is not unitary to 1e-10")
    if fro(mats[0] - np.eye(d)) > 1e-8:
        raise CocycleMismatch("V(e) differs from the identity")
    for g in group.elements:
        for h in group.elements:
            gh = group.mul(g, h)
            want = cocycle.value(g, h)
            dev = fro(mats[g] @ mats[h] - want * mats[gh])
            if dev > 1e-8 * d:
                measured = np.trace(dagger(mats[gh]) @ mats[g] @ mats[h]) / d
                raise CocycleMismatch(
                    f"V({g})V({h}) carries phase {measured:.6f} but the declared "
                    f"cocycle says {want:.6f}"
                )
    return ProjectiveRep(group=group, cocycle=cocycle, dim=d,
                         matrices=tuple(m.copy() for m in mats))


def from_onsite(u: OnsiteRep) -> ProjectiveRep:
    """View a genuine representation as a projective one (trivial cocycle)."""
    return ProjectiveRep(
        group=u.group,
        cocycle=trivial_cocycle(u.group),
        dim=u.dim,
        matrices=u.matrices,
    )


def pauli_rep() -> ProjectiveRep:
    """The 2-dim projective rep {I, sx, sz, sx sz} of Z2 x Z2."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    return validate_projrep(
        klein_four(), pauli_cocycle(), [np.eye(2, dtype=complex), sx, sz, sx @ sz]
    )


def character(v: ProjectiveRep) -> dict:
    """Pointwise trace, as a map from element index to complex."""
    return {g: complex(np.trace(v.matrices[g])) for g in v.group.elements}


def multiplicity(irrep: ProjectiveRep, v: ProjectiveRep) -> int:
    """Multiplicity of ``irrep`` inside ``v`` by character orthogonality."""
    if irrep.group != v.group:
        raise CocycleValueMismatch("representations live on different groups")
    if not _cocycle_values_match(irrep.cocycle, v.cocycle):
        raise CocycleValueMismatch(
            "multiplicity needs value-wise equal cocycles, not merely equal classes"
        )
    n = v.group.order
    acc = sum(
        np.conj(np.trace(irrep.matrices[g])) * np.trace(v.matrices[g])
        for g in v.group.elements
    ) / n
    nearest = round(acc.real)
    if abs(acc - nearest) > 1e-6 or nearest < 0:
        raise NonIntegerMultiplicity(
            f"character sum {acc:.8f} is not a nonnegative integer; inputs inconsistent"
        )
    return int(nearest)


def regular_rep(c: Cocycle) -> ProjectiveRep:
    """The sigma-twisted regular representation on functions over G."""
    grp = c.group
    n = grp.order
    mats = []
    for g in grp.elements:
        m = np.zeros((n, n), dtype=complex)
        ginv = grp.inv(g)
        for h in grp.elements:
            src = grp.mul(ginv, h)
            m[h, src] = c.value(g, src)
        mats.append(m)
    return ProjectiveRep(group=grp, cocycle=c, dim=n, matrices=tuple(mats))


def twist(v: ProjectiveRep, b, root_order: int | None = None) -> ProjectiveRep:
    """Scale V pointwise by b; the cocycle picks up the coboundary of b."""
    sb = coboundary(v.group, b, root_order=root_order)
    if root_order is not None:
        bvals = [np.exp(2j * np.pi * (int(x) % root_order) / root_order) for x in b]
    else:
        bvals = [complex(x) for x in b]
    mats = tuple(bvals[g] * v.matrices[g] for g in v.group.elements)
    return ProjectiveRep(
        group=v.group,
        cocycle=combine(v.cocycle, sb, op="product"),
        dim=v.dim,
        matrices=mats,
    )


def conjugate_rep(v: ProjectiveRep) -> ProjectiveRep:
    """Entrywise conjugate; carries the conjugate cocycle."""
    return ProjectiveRep(
        group=v.group,
        cocycle=conjugate(v.cocycle),
        dim=v.dim,
        matrices=tuple(np.conj(m) for m in v.matrices),
    )


def direct_sum(reps) -> ProjectiveRep:
    """Block-diagonal sum of reps sharing group and cocycle values."""
    reps = list(reps)
    base = reps[0]
    for r in reps[1:]:
        if not _cocycle_values_match(base.cocycle, r.cocycle):
            raise CocycleValueMismatch("direct sum needs value-wise equal cocycles")
    total = sum(r.dim for r in reps)
    mats = []
    for g in base.group.elements:
        m = np.zeros((total, total), dtype=complex)
        off = 0
        for r in reps:
            m[off:off + r.dim, off:off + r.dim] = r.matrices[g]
            off += r.dim
        mats.append(m)
    return ProjectiveRep(group=base.group, cocycle=base.cocycle, dim=total,
                         matrices=tuple(mats))


def tensor_with_onsite(v: ProjectiveRep, u: OnsiteRep, l: int,
                       dim_cap: int = DEFAULT_DIM_CAP) -> ProjectiveRep:
    """The rep g -> U(g)^{(x)l} (x) V(g); cocycle unchanged."""
    if v.group != u.group:
        raise CocycleValueMismatch("rep and on-site rep live on different groups")
    if l < 0:
        raise ValueError("l must be nonnegative")
    new_dim = (u.dim ** l) * v.dim
    if new_dim > dim_cap:
        raise DimensionOverflow(
            f"carrier dimension {new_dim} exceeds the cap {dim_cap}"
        )
    if l == 0:
        return v
    mats = tuple(
        kron(kron_power(u.matrices[g], l), v.matrices[g]) for g in v.group.elements
    )
    return ProjectiveRep(group=v.group, cocycle=v.cocycle, dim=new_dim, matrices=mats)


# ---------------------------------------------------------------------------
# Irreducible decomposition.
# ---------------------------------------------------------------------------


def _cluster_eigenvalues(evals, gap: float):
    """Split a sorted eigenvalue list into clusters at gaps above ``gap``."""
    clusters = []
    start = 0
    for i in range(1, len(evals)):
        if evals[i] - evals[i - 1] > gap:
            clusters.append((start, i))
            start = i
    clusters.append((start, len(evals)))
    return clusters


def _char_key(chi):
    return tuple((round(float(x.real), 6), round(float(x.imag), 6)) for x in chi)


def irreps(c: Cocycle, seed: int | None = None) -> IrrepTable:
    """All irreducibles with cocycle c, from the twisted regular rep.

    A seeded random Hermitian element of the commutant splits the regular
    representation into irreducible eigenspaces; blocks are grouped into
    unitary-equivalence classes by character. Retries with a fresh random
    element if the split degenerates, then raises DegenerateSplit.
    """
    if seed is None:
        seed = COMMUTANT_SEED
    reg = regular_rep(c)
    grp = c.group
    n = grp.order
    rng = np.random.default_rng(seed)

    last_err = None
    for _ in range(_SPLIT_RETRIES):
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (h + dagger(h)) / 2.0
        hc = sum(reg.matrices[g] @ h @ dagger(reg.matrices[g]) for g in grp.elements) / n
        hc = (hc + dagger(hc)) / 2.0
        evals, vecs = hermitian_eig(hc)
        spread = max(evals[-1] - evals[0], 1.0)
        clusters = _cluster_eigenvalues(evals, gap=1e-6 * spread)
        try:
            blocks = []
            for lo, hi in clusters:
                w = vecs[:, lo:hi]
                block = [dagger(w) @ reg.matrices[g] @ w for g in grp.elements]
                # invariance of the eigenspace under the rep
                dev = max(
                    fro(reg.matrices[g] @ w - w @ block[g]) for g in grp.elements
                )
                if dev > 1e-7 * n:
                    raise DegenerateSplit(f"eigenspace not invariant (dev {dev:.2e})")
                norm2 = sum(abs(np.trace(b)) ** 2 for b in block) / n
                if abs(norm2 - 1.0) > 1e-6:
                    raise DegenerateSplit(
                        f"block of size {hi - lo} is not irreducible "
                        f"(character norm {norm2:.6f})"
                    )
                blocks.append(block)
            by_char = {}
            for block in blocks:
                chi = [np.trace(b) for b in block]
                key = _char_key(chi)
                by_char.setdefault(key, []).append(block)
            entries = []
            for key, members in by_char.items():
                block = members[0]
                dim = block[0].shape[0]
                if len(members) != dim:
                    raise DegenerateSplit(
                        f"regular rep carries a {dim}-dim block {len(members)} times, "
                        f"expected {dim}"
                    )
                rep = ProjectiveRep(group=grp, cocycle=c, dim=dim,
                                    matrices=tuple(np.ascontiguousarray(b) for b in block))
                entries.append(IrrepEntry(rep=rep, dim=dim))
            if sum(e.dim ** 2 for e in entries) != n:
                raise DegenerateSplit("dimension count does not sum to |G|")
            entries.sort(key=lambda e: (e.dim, _char_key(e.rep.character_vector())))
            table = IrrepTable(cocycle=c, entries=tuple(entries))
            _check_orthogonality(table)
            return table
        except DegenerateSplit as err:
            last_err = err
            continue
    raise DegenerateSplit(f"no clean split after {_SPLIT_RETRIES} attempts: {last_err}")


def _check_orthogonality(table: IrrepTable, tol: float = 1e-8):
    """Matrix-element orthogonality across the whole table."""
    grp = table.cocycle.group
    n = grp.order
    ents = table.entries
    for a, ea in enumerate(ents):
        for b, eb in enumerate(ents):
            va, vb = ea.rep.matrices, eb.rep.matrices
            acc = sum(
                va[g][:, :, None, None] * np.conj(vb[g][None, None, :, :])
                for g in grp.elements
            ) / n
            want = np.zeros_like(acc)
            if a == b:
                for k in range(ea.dim):
                    for j in range(ea.dim):
                        want[k, j, k, j] = 1.0 / ea.dim
            if np.max(np.abs(acc - want)) > tol:
                raise DegenerateSplit(
                    f"orthogonality fails between table entries {a} and {b}"
                )


def decompose(v: ProjectiveRep, table: IrrepTable) -> DecompositionReport:
    """Block basis realizing v = (+)_alpha V_alpha (x) I_{mult}.

    Built from the projection operators P_{kj} = (n_a/|G|) sum_g
    conj((V_a)_{kj}(g)) v(g), whose images are the matrix units on the
    alpha-component.
    """
    if not _cocycle_values_match(v.cocycle, table.cocycle):
        raise CocycleValueMismatch("rep and table must share cocycle values")
    grp = v.group
    n = grp.order
    mults = []
    for entry in table.entries:
        mults.append(multiplicity(entry.rep, v))
    if sum(m * e.dim for m, e in zip(mults, table.entries)) != v.dim:
        raise CocycleValueMismatch(
            "multiplicities do not exhaust the carrier; cocycle values inconsistent"
        )

    cols = []
    slices = []
    offset = 0
    for entry, mult in zip(table.entries, mults):
        na = entry.dim
        if mult == 0:
            slices.append(slice(offset, offset))
            continue
        valpha = entry.rep.matrices
        projs = []
        for k in range(na):
            p = sum(
                np.conj(valpha[g][k, 0]) * v.matrices[g] for g in grp.elements
            ) * (na / n)
            projs.append(p)
        p00 = projs[0]
        p00 = (p00 + dagger(p00)) / 2.0
        evals, vecs = hermitian_eig(p00)
        sel = [i for i, ev in enumerate(evals) if ev > 0.5]
        if len(sel) != mult:
            raise CocycleValueMismatch(
                f"projection rank {len(sel)} != multiplicity {mult}; inputs inconsistent"
            )
        w = vecs[:, sel]
        for k in range(na):
            for i in range(mult):
                cols.append(projs[k] @ w[:, i])
        slices.append(slice(offset, offset + na * mult))
        offset += na * mult

    b = np.stack(cols, axis=1)
    basis = dagger(b)

    deviation = 0.0
    for g in grp.elements:
        blocked = basis @ v.matrices[g] @ b
        want = np.zeros((v.dim, v.dim), dtype=complex)
        for entry, mult, sl in zip(table.entries, mults, slices):
            if mult == 0:
                continue
            want[sl, sl] = kron(entry.rep.matrices[g], np.eye(mult))
        deviation = max(deviation, fro(blocked - want))
    if deviation > 1e-7 * max(1.0, v.dim):
        raise CocycleValueMismatch(
            f"block reduction deviates by {deviation:.2e}; cocycle values inconsistent"
        )
    return DecompositionReport(
        table=table,
        multiplicities=tuple(mults),
        basis=basis,
        block_slices=tuple(slices),
        deviation=float(deviation),
    )
