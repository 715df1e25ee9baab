"""Bond-space symmetry data of injective matrix product states.

For a right-canonical injective MPS that is symmetric under an on-site
rep, each group element acts on the bond space through the leading
eigenvector of a mixed transfer operator. Those unitaries close up to
phases, the phases snap onto an exact root-of-unity grid, and the
resulting cohomology class is the phase invariant: two symmetric states
are in the same phase exactly when their classes agree.

The bridge from the operator-algebraic invariant to the bond cocycle is
standard for injective MPS (unique gapped transfer fixed point); that
injectivity certificate is enforced, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import (
    Cocycle,
    CohomologyClassHandle,
    check_cocycle,
    combine,
    is_trivial,
    make_cocycle,
    snap_to_roots,
)
from .errors import (
    DegenerateLeadingEigenvalue,
    NotInjective,
    NotProjectivelyConsistent,
    NotSymmetric,
    UnknownName,
)
from .groups import OnsiteRep, klein_spin1_rep, validate_onsite_rep, z2_sign_rep
from .numkernel import as_cmatrix, dagger, fro, hermitian_eig, kron, leading_eigenpair

_INJECTIVITY_MARGIN = 1e-6
_SYMMETRY_TOL = 1e-6
_SNAP_SOFT = 1e-6
_SNAP_HARD = 1e-4


@dataclass(frozen=True, eq=False)
class MpsState:
    """Right-canonical injective MPS: sum_i A^i A^i{dagger} = 1."""

    phys_dim: int
    bond_dim: int
    tensors: tuple = field(repr=False)

    def tensor(self, i: int) -> np.ndarray:
        return self.tensors[i]


@dataclass(frozen=True, eq=False)
class SymmetryCertificate:
    """Bond representation and snapped cocycle extracted from a state.

    ``thetas`` are the per-element phases in turns; ``bond_rep`` holds the
    gauge-fixed bond unitaries (largest entry positive real). Only the
    class is contractual; the representative data is for inspection.
    """

    group_order: int
    thetas: tuple
    bond_rep: tuple = field(repr=False)
    cocycle: Cocycle
    handle: CohomologyClassHandle
    snap_displacement: float


@dataclass(frozen=True, eq=False)
class PhaseVerdict:
    equivalent: bool
    certificates: tuple


@dataclass(frozen=True, eq=False)
class LeftRightReport:
    consistent: bool
    right: SymmetryCertificate
    left_cocycle: Cocycle
    left_handle: CohomologyClassHandle
    product_trivial: bool


def transfer_matrix(tensors) -> np.ndarray:
    """E(X) = sum_i A^i X A^i{dagger} as a D^2 x D^2 matrix."""
    return sum(kron(a, np.conj(a)) for a in tensors)


def mixed_transfer(tensors, ug: np.ndarray) -> np.ndarray:
    """E_g(X) = sum_{ij} U(g)_{ij} A^j X A^i{dagger}."""
    d = len(tensors)
    out = np.zeros_like(kron(tensors[0], np.conj(tensors[0])))
    for i in range(d):
        for j in range(d):
            if ug[i, j] != 0:
                out += ug[i, j] * kron(tensors[j], np.conj(tensors[i]))
    return out


def left_mixed_transfer(tensors, ug: np.ndarray) -> np.ndarray:
    """E^L_g(X) = sum_{ij} U(g)_{ij} A^i{dagger} X A^j."""
    d = len(tensors)
    out = np.zeros_like(kron(tensors[0], np.conj(tensors[0])))
    for i in range(d):
        for j in range(d):
            if ug[i, j] != 0:
                out += ug[i, j] * kron(dagger(tensors[i]), tensors[j].T)
    return out


def _subleading_modulus(e: np.ndarray, tol: float) -> float:
    """Second-largest eigenvalue modulus, via one-step deflation."""
    lam, v = leading_eigenpair(e, tol)
    lam_l, w = leading_eigenpair(dagger(e), tol)
    v = v.ravel()
    w = w.ravel()
    overlap = np.vdot(w, v)
    if abs(overlap) < 1e-12:
        raise DegenerateLeadingEigenvalue("left/right leading eigenvectors orthogonal")
    deflated = e - lam * np.outer(v, np.conj(w)) / overlap
    lam2, _ = leading_eigenpair(deflated, tol)
    return abs(lam2)


def canonicalize(tensors, tol: float = 1e-8) -> MpsState:
    """Rescale and gauge raw tensors into right-canonical injective form.

    Raises NotInjective when the transfer operator has a degenerate
    leading eigenvalue, a gap below the margin, or a fixed point that is
    not positive definite.
    """
    mats = [as_cmatrix(t) for t in tensors]
    d = len(mats)
    dim = mats[0].shape[0]
    if any(m.shape != (dim, dim) for m in mats):
        raise ValueError("all tensors must be square matrices of one bond dimension")
    e = transfer_matrix(mats)
    try:
        lam, vec = leading_eigenpair(e, tol)
    except DegenerateLeadingEigenvalue as err:
        raise NotInjective(f"transfer operator: {err}") from err
    if lam.real <= 0 or abs(lam.imag) > tol * abs(lam):
        raise NotInjective(f"leading transfer eigenvalue {lam:.6f} is not positive")
    scale = 1.0 / np.sqrt(lam.real)
    mats = [scale * m for m in mats]

    x = vec.reshape(dim, dim)
    ph = np.trace(x)
    if abs(ph) < 1e-12:
        raise NotInjective("transfer fixed point is traceless, not positive definite")
    x = x / (ph / abs(ph))
    x = (x + dagger(x)) / 2.0
    evals, q = hermitian_eig(x)
    if evals[0] <= _INJECTIVITY_MARGIN * evals[-1]:
        raise NotInjective(
            f"transfer fixed point has near-zero eigenvalue {evals[0]:.3e}"
        )
    root = q @ np.diag(np.sqrt(np.array(evals))) @ dagger(q)
    root_inv = q @ np.diag(1.0 / np.sqrt(np.array(evals))) @ dagger(q)
    mats = [root_inv @ m @ root for m in mats]

    e = transfer_matrix(mats)
    try:
        gap_top = _subleading_modulus(e, tol)
    except DegenerateLeadingEigenvalue as err:
        raise NotInjective(f"transfer spectrum: {err}") from err
    if gap_top > 1.0 - _INJECTIVITY_MARGIN:
        raise NotInjective(
            f"subleading transfer eigenvalue modulus {gap_top:.8f} closes the gap"
        )
    state = MpsState(phys_dim=d, bond_dim=dim, tensors=tuple(mats))
    residual = fro(sum(m @ dagger(m) for m in mats) - np.eye(dim))
    if residual > 1e-8 * dim:
        raise NotInjective(f"right-canonical residual {residual:.2e}")
    return state


def _polar_unitary(y: np.ndarray) -> np.ndarray:
    h2 = dagger(y) @ y
    evals, q = hermitian_eig(h2)
    if evals[0] <= 1e-12 * max(evals[-1], 1e-300):
        raise ValueError("matrix is singular; no unitary polar factor")
    hinv = q @ np.diag(1.0 / np.sqrt(np.array(evals))) @ dagger(q)
    v = y @ hinv
    return v


def _gauge_fix(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    entry = v.flat[idx]
    return v * (np.conj(entry) / abs(entry))


def extract_symmetry(state: MpsState, u: OnsiteRep, g: int, tol: float = _SYMMETRY_TOL):
    """Phase and bond unitary for one group element.

    Returns (theta_turns, V). Raises NotSymmetric when the mixed transfer
    has no modulus-one leading eigenvalue or the reconstruction identity
    fails.
    """
    if u.dim != state.phys_dim:
        raise NotSymmetric(
            f"on-site rep dimension {u.dim} != physical dimension {state.phys_dim}"
        )
    ug = u.matrices[g]
    eg = mixed_transfer(state.tensors, ug)
    try:
        lam, vec = leading_eigenpair(eg, 1e-10)
    except DegenerateLeadingEigenvalue as err:
        raise NotSymmetric(f"element {g}: {err}") from err
    if abs(abs(lam) - 1.0) > tol:
        raise NotSymmetric(
            f"element {g}: leading mixed-transfer modulus {abs(lam):.8f} is not 1"
        )
    y = vec.reshape(state.bond_dim, state.bond_dim)
    try:
        v = _polar_unitary(y)
    except ValueError as err:
        raise NotSymmetric(f"element {g}: {err}") from err
    v = _gauge_fix(v)
    scale = np.sqrt(sum(fro(a) ** 2 for a in state.tensors))
    worst = 0.0
    for i in range(state.phys_dim):
        lhs = sum(ug[i, j] * state.tensors[j] for j in range(state.phys_dim))
        rhs = lam * (v @ state.tensors[i] @ dagger(v))
        worst = max(worst, fro(lhs - rhs))
    if worst > tol * scale:
        raise NotSymmetric(
            f"element {g}: reconstruction residual {worst:.2e} exceeds {tol:g}"
        )
    theta = float((np.angle(lam) / (2 * np.pi)) % 1.0)
    return theta, v


def _cocycle_from_bond_rep(group, vs, bond_dim: int) -> tuple:
    """Snap the bond-rep multiplication phases onto the exact grid."""
    n = group.order
    raw = np.zeros((n, n), dtype=complex)
    for g in range(n):
        for h in range(n):
            gh = group.mul(g, h)
            m = vs[g] @ vs[h] @ dagger(vs[gh])
            s = np.trace(m) / bond_dim
            if abs(abs(s) - 1.0) > _SYMMETRY_TOL:
                raise NotProjectivelyConsistent(
                    f"V({g})V({h})V({gh})^* has non-unimodular scalar {s:.6f}"
                )
            if fro(m - s * np.eye(bond_dim)) / np.sqrt(bond_dim) > 1e-5:
                raise NotProjectivelyConsistent(
                    f"V({g})V({h})V({gh})^* deviates from a scalar"
                )
            raw[g, h] = s
    grid = 2 * group.order * group.exponent
    turns = (np.angle(raw) / (2 * np.pi)) % 1.0
    try:
        exps, disp = snap_to_roots(turns, grid, soft_tol=_SNAP_SOFT, hard_tol=_SNAP_HARD)
    except ValueError as err:
        raise NotProjectivelyConsistent(str(err)) from err
    try:
        c = make_cocycle(group, root_order=grid, exponents=exps.tolist())
    except ValueError as err:
        raise NotProjectivelyConsistent(
            f"snapped phases violate the cocycle axiom: {err}"
        ) from err
    assert check_cocycle(c).valid
    return c, float(disp)


def extract_cocycle(state: MpsState, u: OnsiteRep) -> SymmetryCertificate:
    """Full certificate: phases, bond rep, snapped cocycle, class handle."""
    grp = u.group
    thetas = []
    vs = []
    for g in grp.elements:
        theta, v = extract_symmetry(state, u, g)
        thetas.append(theta)
        vs.append(v)
    c, disp = _cocycle_from_bond_rep(grp, vs, state.bond_dim)
    return SymmetryCertificate(
        group_order=grp.order,
        thetas=tuple(thetas),
        bond_rep=tuple(vs),
        cocycle=c,
        handle=CohomologyClassHandle(representative=c),
        snap_displacement=disp,
    )


def compare_phases(s0: MpsState, s1: MpsState, u: OnsiteRep) -> PhaseVerdict:
    """Theorem-style decision: equivalent iff the classes agree."""
    certs = []
    for label, s in (("state0", s0), ("state1", s1)):
        try:
            certs.append(extract_cocycle(s, u))
        except NotSymmetric as err:
            raise NotSymmetric(f"{label}: {err}") from err
    eq = certs[0].handle.equals(certs[1].handle)
    return PhaseVerdict(equivalent=bool(eq), certificates=tuple(certs))


def left_right_check(state: MpsState, u: OnsiteRep) -> LeftRightReport:
    """Extract the left-edge cocycle and verify it inverts the right one."""
    right = extract_cocycle(state, u)
    grp = u.group
    vs = []
    for g in grp.elements:
        eg = left_mixed_transfer(state.tensors, u.matrices[g])
        try:
            lam, vec = leading_eigenpair(eg, 1e-10)
        except DegenerateLeadingEigenvalue as err:
            raise NotSymmetric(f"left action, element {g}: {err}") from err
        if abs(abs(lam) - 1.0) > _SYMMETRY_TOL:
            raise NotSymmetric(
                f"left action, element {g}: leading modulus {abs(lam):.8f} is not 1"
            )
        y = vec.reshape(state.bond_dim, state.bond_dim)
        try:
            v = _polar_unitary(y)
        except ValueError as err:
            raise NotSymmetric(f"left action, element {g}: {err}") from err
        vs.append(_gauge_fix(v))
    left_c, _ = _cocycle_from_bond_rep(grp, vs, state.bond_dim)
    product = combine(left_c, right.cocycle, op="product")
    ok = is_trivial(product)
    return LeftRightReport(
        consistent=bool(ok),
        right=right,
        left_cocycle=left_c,
        left_handle=CohomologyClassHandle(representative=left_c),
        product_trivial=bool(ok),
    )


def gauge_transform(state: MpsState, w) -> MpsState:
    """Conjugate every tensor by a bond unitary; the class is unchanged."""
    w = as_cmatrix(w)
    if fro(dagger(w) @ w - np.eye(state.bond_dim)) > 1e-10 * state.bond_dim:
        raise ValueError("gauge must be unitary")
    return MpsState(
        phys_dim=state.phys_dim,
        bond_dim=state.bond_dim,
        tensors=tuple(w @ a @ dagger(w) for a in state.tensors),
    )


# ---------------------------------------------------------------------------
# Fixture states.
# ---------------------------------------------------------------------------


def aklt_tensors():
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = np.array([[0, 0], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    return [
        np.sqrt(2.0 / 3.0) * sp,
        -np.sqrt(1.0 / 3.0) * sz,
        -np.sqrt(2.0 / 3.0) * sm,
    ]


def builtin_states(name: str):
    """Documented fixtures: (canonical state, its symmetry rep)."""
    if name == "aklt":
        return canonicalize(aklt_tensors()), klein_spin1_rep()
    if name == "product_m0":
        tensors = [np.zeros((1, 1), dtype=complex) for _ in range(3)]
        tensors[1] = np.eye(1, dtype=complex)
        return canonicalize(tensors), klein_spin1_rep()
    if name == "product_up_z2":
        tensors = [np.eye(1, dtype=complex), np.zeros((1, 1), dtype=complex)]
        return canonicalize(tensors), z2_sign_rep()
    if name == "blocked_aklt":
        base = aklt_tensors()
        blocked = [a @ b for a in base for b in base]
        rep = klein_spin1_rep()
        mats = [kron(m, m) for m in rep.matrices]
        return canonicalize(blocked), validate_onsite_rep(rep.group, mats)
    raise UnknownName(f"unknown builtin state {name!r}")
