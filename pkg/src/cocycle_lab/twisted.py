"""The twisted crossed product over finite chain windows.

Elements are matrix-valued functions on the group; the product twists
the convolution by the cocycle and by the on-site action. Everything
here is dimension-independent mathematics verified on small windows
(carrier capped at 64 by default), which is all the identities need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import Cocycle
from .errors import (
    DimensionOverflow,
    IndexOutOfRange,
    Mismatch,
    NotSubWindow,
)
from .groups import OnsiteRep
from .numkernel import as_cmatrix, dagger, fro, hermitian_eig, kron, kron_power
from .projrep import IrrepTable, ProjectiveRep, decompose, irreps, regular_rep

DEFAULT_WINDOW_CAP = 64


@dataclass(frozen=True)
class ChainWindow:
    """A finite set of chain sites with a local dimension."""

    sites: tuple
    local_dim: int

    @property
    def size(self) -> int:
        return len(self.sites)

    @property
    def algebra_dim(self) -> int:
        return self.local_dim ** self.size


def make_window(sites, local_dim: int, cap: int = DEFAULT_WINDOW_CAP) -> ChainWindow:
    sites = tuple(int(s) for s in sites)
    if not sites or any(b <= a for a, b in zip(sites, sites[1:])):
        raise Mismatch("window sites must be nonempty and strictly increasing")
    if local_dim ** len(sites) > cap:
        raise DimensionOverflow(
            f"window carrier {local_dim ** len(sites)} exceeds cap {cap}"
        )
    return ChainWindow(sites=sites, local_dim=local_dim)


def window_unitaries(onsite: OnsiteRep, nsites: int):
    """U(g)^{(x) nsites} for every g."""
    return [kron_power(onsite.matrices[g], nsites) for g in onsite.group.elements]


def onsite_action(a: np.ndarray, g: int, onsite: OnsiteRep, nsites: int) -> np.ndarray:
    ug = kron_power(onsite.matrices[g], nsites)
    return ug @ a @ dagger(ug)


@dataclass(frozen=True, eq=False)
class TwistedElement:
    """A function g -> matrix over the window algebra."""

    window: ChainWindow
    cocycle: Cocycle
    onsite: OnsiteRep
    values: tuple = field(repr=False)

    def value(self, g: int) -> np.ndarray:
        return self.values[g]


def _same_onsite(u1: OnsiteRep, u2: OnsiteRep) -> bool:
    if u1 is u2:
        return True
    if u1.group != u2.group or u1.dim != u2.dim:
        return False
    return all(np.array_equal(a, b) for a, b in zip(u1.matrices, u2.matrices))


def _check_compatible(f1: TwistedElement, f2: TwistedElement):
    if f1.window != f2.window:
        raise Mismatch("elements live on different windows")
    if f1.cocycle.group != f2.cocycle.group or np.max(
        np.abs(f1.cocycle.values() - f2.cocycle.values())
    ) > 1e-12:
        raise Mismatch("elements carry different cocycles")
    if not _same_onsite(f1.onsite, f2.onsite):
        raise Mismatch("elements carry different on-site actions")


def make_element(window: ChainWindow, cocycle: Cocycle, onsite: OnsiteRep, values) -> TwistedElement:
    grp = cocycle.group
    if onsite.group != grp:
        raise Mismatch("cocycle and on-site action disagree on the group")
    vals = [as_cmatrix(v) for v in values]
    if len(vals) != grp.order:
        raise Mismatch(f"need one matrix per group element, got {len(vals)}")
    dim = window.algebra_dim
    for g, v in enumerate(vals):
        if v.shape != (dim, dim):
            raise Mismatch(f"value at g={g} has shape {v.shape}, expected ({dim},{dim})")
    return TwistedElement(window=window, cocycle=cocycle, onsite=onsite,
                          values=tuple(vals))


def lambda_element(window: ChainWindow, cocycle: Cocycle, onsite: OnsiteRep, g: int) -> TwistedElement:
    """The unitary generator lambda_g."""
    dim = window.algebra_dim
    vals = [np.zeros((dim, dim), dtype=complex) for _ in cocycle.group.elements]
    vals[g] = np.eye(dim, dtype=complex)
    return make_element(window, cocycle, onsite, vals)


def embed_element(window: ChainWindow, cocycle: Cocycle, onsite: OnsiteRep, a) -> TwistedElement:
    """xi_a: the window algebra sitting inside the crossed product."""
    a = as_cmatrix(a)
    dim = window.algebra_dim
    vals = [np.zeros((dim, dim), dtype=complex) for _ in cocycle.group.elements]
    vals[0] = a
    return make_element(window, cocycle, onsite, vals)


def star_product(f1: TwistedElement, f2: TwistedElement) -> TwistedElement:
    """Twisted convolution: the crossed-product multiplication."""
    _check_compatible(f1, f2)
    grp = f1.cocycle.group
    n = f1.window.size
    us = window_unitaries(f1.onsite, n)
    dim = f1.window.algebra_dim
    out = [np.zeros((dim, dim), dtype=complex) for _ in grp.elements]
    for h in grp.elements:
        acc = np.zeros((dim, dim), dtype=complex)
        for g in grp.elements:
            rest = grp.mul(grp.inv(g), h)
            acc += f1.cocycle.value(g, rest) * (
                f1.values[g] @ (us[g] @ f2.values[rest] @ dagger(us[g]))
            )
        out[h] = acc
    return TwistedElement(window=f1.window, cocycle=f1.cocycle, onsite=f1.onsite,
                          values=tuple(out))


def involution(f: TwistedElement) -> TwistedElement:
    """f*(h) = conj(sigma(h^-1,h)) tau_h(f(h^-1)^dagger)."""
    grp = f.cocycle.group
    n = f.window.size
    us = window_unitaries(f.onsite, n)
    out = []
    for h in grp.elements:
        hinv = grp.inv(h)
        out.append(
            np.conj(f.cocycle.value(hinv, h))
            * (us[h] @ dagger(f.values[hinv]) @ dagger(us[h]))
        )
    return TwistedElement(window=f.window, cocycle=f.cocycle, onsite=f.onsite,
                          values=tuple(out))


def ad_lambda(f: TwistedElement, g: int) -> TwistedElement:
    """Ad(lambda_g)(f): conjugation by the group unitary."""
    lam = lambda_element(f.window, f.cocycle, f.onsite, g)
    return star_product(star_product(lam, f), involution(lam))


# ---------------------------------------------------------------------------
# Covariant representations.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CovariantRep:
    """A joint (pi, u) with u(g) pi(a) u(g)* = pi(tau_g(a))."""

    window: ChainWindow
    onsite: OnsiteRep
    u: ProjectiveRep
    pi: object = field(repr=False)  # callable: window matrix -> carrier matrix
    dim: int

    @property
    def cocycle(self) -> Cocycle:
        return self.u.cocycle


def validate_covariant(r: CovariantRep, tol: float = 1e-8, n_probes: int = 4,
                       seed: int = 0xC0CC1E) -> float:
    """Check the covariance identity on random window matrices; returns worst deviation."""
    rng = np.random.default_rng(seed)
    dim = r.window.algebra_dim
    us = window_unitaries(r.onsite, r.window.size)
    worst = 0.0
    for _ in range(n_probes):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        pa = r.pi(a)
        for g in r.u.group.elements:
            lhs = r.u.matrices[g] @ pa @ dagger(r.u.matrices[g])
            rhs = r.pi(us[g] @ a @ dagger(us[g]))
            worst = max(worst, fro(lhs - rhs) / max(1.0, fro(pa)))
    if worst > tol:
        raise Mismatch(f"covariance identity fails by {worst:.2e}")
    return worst


def identity_covariant(window: ChainWindow, onsite: OnsiteRep, cocycle: Cocycle) -> CovariantRep:
    """The window algebra acting on itself, u(g) = U(g)^{(x)|window|}.

    Valid only when the cocycle is (value-wise) trivial, since the tensor
    power of a genuine rep is genuine.
    """
    if np.max(np.abs(cocycle.values() - 1.0)) > 1e-12:
        raise Mismatch("identity covariant rep needs the value-wise trivial cocycle")
    us = window_unitaries(onsite, window.size)
    u = ProjectiveRep(group=onsite.group, cocycle=cocycle, dim=window.algebra_dim,
                      matrices=tuple(us))
    return CovariantRep(window=window, onsite=onsite, u=u, pi=lambda a: as_cmatrix(a),
                        dim=window.algebra_dim)


def regular_covariant(window: ChainWindow, cocycle: Cocycle, onsite: OnsiteRep,
                      pi0=None, dim0: int | None = None) -> CovariantRep:
    """The induced covariant rep on l2(G) (x) carrier(pi0).

    pi0 defaults to the identity representation of the window algebra.
    Blocks are ordered group-major: block g carries pi0(tau_{g^-1}(a)),
    and u = u_r^sigma (x) 1.
    """
    grp = cocycle.group
    if onsite.group != grp:
        raise Mismatch("cocycle and on-site action disagree on the group")
    adim = window.algebra_dim
    if pi0 is None:
        pi0 = lambda a: a
        dim0 = adim
    if dim0 is None:
        raise Mismatch("dim0 must accompany a custom pi0")
    us = window_unitaries(onsite, window.size)
    ng = grp.order

    def pi(a):
        a = as_cmatrix(a)
        out = np.zeros((ng * dim0, ng * dim0), dtype=complex)
        for g in grp.elements:
            ginv = grp.inv(g)
            block = pi0(us[ginv] @ a @ dagger(us[ginv]))
            out[g * dim0:(g + 1) * dim0, g * dim0:(g + 1) * dim0] = block
        return out

    ureg = regular_rep(cocycle)
    umats = tuple(kron(ureg.matrices[g], np.eye(dim0)) for g in grp.elements)
    u = ProjectiveRep(group=grp, cocycle=cocycle, dim=ng * dim0, matrices=umats)
    return CovariantRep(window=window, onsite=onsite, u=u, pi=pi, dim=ng * dim0)


def pi_times_u(f: TwistedElement, r: CovariantRep) -> np.ndarray:
    """(pi x u)(f) = sum_g pi(f(g)) u(g)."""
    if f.window != r.window:
        raise Mismatch("element and covariant rep live on different windows")
    if np.max(np.abs(f.cocycle.values() - r.cocycle.values())) > 1e-10:
        raise Mismatch("element and covariant rep carry different cocycles")
    out = np.zeros((r.dim, r.dim), dtype=complex)
    for g in f.cocycle.group.elements:
        out += r.pi(f.values[g]) @ r.u.matrices[g]
    return out


def operator_norm(x) -> float:
    x = as_cmatrix(x)
    evals, _ = hermitian_eig(dagger(x) @ x)
    return float(np.sqrt(max(evals[-1], 0.0)))


def reduced_norm(f: TwistedElement) -> float:
    """Norm of f in the regular covariant representation."""
    r = regular_covariant(f.window, f.cocycle, f.onsite)
    return operator_norm(pi_times_u(f, r))


# ---------------------------------------------------------------------------
# The algebraic ingredients of the homogeneity argument.
# ---------------------------------------------------------------------------


def q_element(alpha: ProjectiveRep, k: int, j: int, window: ChainWindow,
              onsite: OnsiteRep) -> TwistedElement:
    """Q_{k,j} = (n_a/|G|) sum_g conj(<psi_k|V_a(g)|psi_j>) lambda_g.

    Under any covariant rep whose u contains alpha, its image is the
    matrix unit |psi_k><psi_j| (x) 1 on the alpha-component and 0
    elsewhere. Indices are 0-based.
    """
    na = alpha.dim
    if not (0 <= k < na and 0 <= j < na):
        raise IndexOutOfRange(f"indices ({k},{j}) outside 0..{na - 1}")
    grp = alpha.group
    dim = window.algebra_dim
    eye = np.eye(dim, dtype=complex)
    vals = [
        (na / grp.order) * np.conj(alpha.matrices[g][k, j]) * eye
        for g in grp.elements
    ]
    return make_element(window, alpha.cocycle, onsite, vals)


@dataclass(frozen=True, eq=False)
class AmplifiedElement:
    """An element of B(H_alpha) (x) C(Sigma): a sum of coeff (x) element terms."""

    block_dim: int
    terms: tuple  # of (coeff matrix on H_alpha, TwistedElement)

    def image(self, r: CovariantRep) -> np.ndarray:
        out = np.zeros((self.block_dim * r.dim, self.block_dim * r.dim), dtype=complex)
        for coeff, f in self.terms:
            out += kron(coeff, pi_times_u(f, r))
        return out


def r_element(alpha: ProjectiveRep, window: ChainWindow, onsite: OnsiteRep) -> AmplifiedElement:
    """R = (1/n_a) sum_{k,j} |psi_k><psi_j| (x) Q_{k,j}; a projection.

    Its image under id (x) (pi x u) is the rank-one-per-fiber projection
    onto the maximally entangled vector on the alpha-component.
    """
    na = alpha.dim
    terms = []
    for k in range(na):
        for j in range(na):
            coeff = np.zeros((na, na), dtype=complex)
            coeff[k, j] = 1.0 / na
            terms.append((coeff, q_element(alpha, k, j, window, onsite)))
    return AmplifiedElement(block_dim=na, terms=tuple(terms))


def entangled_vector(n: int) -> np.ndarray:
    """(1/sqrt n) sum_k e_k (x) e_k in C^n (x) C^n."""
    v = np.zeros(n * n, dtype=complex)
    for k in range(n):
        v[k * n + k] = 1.0
    return v / np.sqrt(n)


def _multi_indices(d: int, n: int):
    out = [()]
    for _ in range(n):
        out = [t + (i,) for t in out for i in range(d)]
    return out


def matrix_unit(d: int, nsites: int, row, col) -> np.ndarray:
    """E_{I,J} on the window: product of per-site matrix units."""
    m = np.eye(1, dtype=complex)
    for i, j in zip(row, col):
        e = np.zeros((d, d), dtype=complex)
        e[i, j] = 1.0
        m = kron(m, e)
    return m


def g_lambda_family(window: ChainWindow, alpha: ProjectiveRep, onsite: OnsiteRep,
                    cap: int = DEFAULT_WINDOW_CAP) -> list:
    """The finite family whose images resolve the identity: sum x x* = 1.

    Members are (1/sqrt|G|) |psi_j><psi_0| (x) lambda_g E_{I,I0} over all
    j, g and window multi-indices I.
    """
    d = window.local_dim
    if d ** window.size > cap:
        raise DimensionOverflow(f"window carrier exceeds cap {cap}")
    grp = alpha.group
    na = alpha.dim
    i0 = tuple(0 for _ in range(window.size))
    family = []
    for j in range(na):
        coeff = np.zeros((na, na), dtype=complex)
        coeff[j, 0] = 1.0 / np.sqrt(grp.order)
        for g in grp.elements:
            lam = lambda_element(window, alpha.cocycle, onsite, g)
            for idx in _multi_indices(d, window.size):
                e = embed_element(window, alpha.cocycle, onsite,
                                  matrix_unit(d, window.size, idx, i0))
                f = star_product(lam, e)
                family.append(AmplifiedElement(block_dim=na, terms=((coeff, f),)))
    return family


def symmetrize(a, onsite: OnsiteRep, nsites: int) -> np.ndarray:
    """Group-average a window matrix into the fixed-point subalgebra."""
    a = as_cmatrix(a)
    us = window_unitaries(onsite, nsites)
    return sum(u @ a @ dagger(u) for u in us) / onsite.group.order


def is_fixed(f: TwistedElement, tol: float = 1e-8) -> bool:
    """Whether Ad(lambda_g)(f) = f for every g."""
    scale = max(1.0, max(fro(v) for v in f.values))
    for g in f.cocycle.group.elements:
        conj_f = ad_lambda(f, g)
        dev = max(fro(a - b) for a, b in zip(conj_f.values, f.values))
        if dev > tol * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# Window factorization and the fixed-point block structure.
# ---------------------------------------------------------------------------


def embed_sites(op, op_sites, window: ChainWindow) -> np.ndarray:
    """Embed an operator on a site subset into the full window algebra."""
    op = as_cmatrix(op)
    d = window.local_dim
    op_sites = tuple(op_sites)
    rest = [s for s in window.sites if s not in op_sites]
    n = window.size
    full = kron(op, np.eye(d ** len(rest), dtype=complex))
    order = list(op_sites) + rest
    perm = [order.index(s) for s in window.sites]
    t = full.reshape((d,) * n + (d,) * n)
    t = t.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(t.reshape(d ** n, d ** n))


def factorize(r: CovariantRep, sub: ChainWindow):
    """Split an irreducible covariant rep into sub-window x remainder.

    Returns (W, remainder) with W unitary, W pi(a) W* = (id (x) pi~)(a)
    and W u(g) W* = U(g)^{(x)|sub|} (x) u~(g); the remainder is a
    covariant rep of the complement window with the same cocycle.
    """
    if not set(sub.sites) <= set(r.window.sites) or sub.local_dim != r.window.local_dim:
        raise NotSubWindow("sub must be a sub-window with the same local dimension")
    d = r.window.local_dim
    nsub = sub.size
    rest_sites = tuple(s for s in r.window.sites if s not in sub.sites)
    if not rest_sites:
        raise NotSubWindow("complement window must be nonempty")
    i0 = tuple(0 for _ in range(nsub))

    proj = r.pi(embed_sites(matrix_unit(d, nsub, i0, i0), sub.sites, r.window))
    proj = (proj + dagger(proj)) / 2.0
    evals, vecs = hermitian_eig(proj)
    sel = [i for i, ev in enumerate(evals) if ev > 0.5]
    tdim = len(sel)
    if tdim * (d ** nsub) != r.dim:
        raise NotSubWindow(
            f"carrier {r.dim} does not factor through the sub-window "
            f"(corner rank {tdim}); the rep is not irreducible"
        )
    basis = vecs[:, sel]  # orthonormal basis of the corner subspace

    blocks = []
    for idx in _multi_indices(d, nsub):
        e = embed_sites(matrix_unit(d, nsub, i0, idx), sub.sites, r.window)
        blocks.append(dagger(basis) @ r.pi(e))
    w = np.vstack(blocks)
    if fro(w @ dagger(w) - np.eye(r.dim)) > 1e-10 * r.dim:
        raise NotSubWindow("factorization map is not unitary; rep is not irreducible")

    usub = window_unitaries(r.onsite, nsub)
    rest_window = ChainWindow(sites=rest_sites, local_dim=d)
    grp = r.u.group
    tail_mats = []
    for g in grp.elements:
        m = w @ r.u.matrices[g] @ dagger(w)
        x = kron(dagger(usub[g]), np.eye(tdim)) @ m
        tail = x[:tdim, :tdim]
        if fro(x - kron(np.eye(d ** nsub), tail)) > 1e-8 * r.dim:
            raise NotSubWindow(f"u({g}) does not factor over the sub-window")
        tail_mats.append(tail)
    tail_u = ProjectiveRep(group=grp, cocycle=r.cocycle, dim=tdim,
                           matrices=tuple(tail_mats))

    def tail_pi(a, _basis=basis, _rw=rest_window, _r=r):
        full = embed_sites(a, _rw.sites, _r.window)
        return dagger(_basis) @ _r.pi(full) @ _basis

    remainder = CovariantRep(window=rest_window, onsite=r.onsite, u=tail_u,
                             pi=tail_pi, dim=tdim)
    return w, remainder


@dataclass(frozen=True, eq=False)
class FixedPointReport:
    """Block structure of pi restricted to the fixed-point subalgebra."""

    table: IrrepTable
    multiplicities: tuple
    basis: np.ndarray = field(repr=False)
    blocks: tuple = field(repr=False)  # per probe: tuple of per-entry block matrices
    probes: tuple = field(repr=False)
    deviation: float


def fixed_point_decompose(r: CovariantRep, probes=None) -> FixedPointReport:
    """In the basis splitting u, symmetrized pi(a) is I_{n_g} (x) pi_g(a).

    Probes default to the symmetrized window matrix units (zeros dropped).
    Returns the extracted blocks pi_g(a) per probe and the worst deviation
    from the advertised block form.
    """
    table = irreps(r.cocycle)
    rep_report = decompose(r.u, table)
    w = rep_report.basis

    d = r.window.local_dim
    nsites = r.window.size
    if probes is None:
        probes = []
        seen = set()
        for row in _multi_indices(d, nsites):
            for col in _multi_indices(d, nsites):
                a = symmetrize(matrix_unit(d, nsites, row, col), r.onsite, nsites)
                if fro(a) < 1e-12:
                    continue
                key = tuple(np.round(a, 9).ravel().tolist())
                if key in seen:
                    continue
                seen.add(key)
                probes.append(a)
    probes = tuple(as_cmatrix(p) for p in probes)

    deviation = 0.0
    all_blocks = []
    for a in probes:
        m = w @ r.pi(a) @ dagger(w)
        blocks = []
        recon = np.zeros_like(m)
        for entry, mult, sl in zip(table.entries, rep_report.multiplicities,
                                   rep_report.block_slices):
            if mult == 0:
                blocks.append(np.zeros((0, 0), dtype=complex))
                continue
            na = entry.dim
            sub = m[sl, sl]
            avg = np.zeros((mult, mult), dtype=complex)
            for k in range(na):
                avg += sub[k * mult:(k + 1) * mult, k * mult:(k + 1) * mult]
            avg /= na
            blocks.append(avg)
            recon[sl, sl] = kron(np.eye(na), avg)
        deviation = max(deviation, fro(m - recon))
        all_blocks.append(tuple(blocks))
    if deviation > 1e-8 * max(1.0, r.dim):
        raise Mismatch(
            f"fixed-point image is not of the advertised block form "
            f"(deviation {deviation:.2e})"
        )
    return FixedPointReport(
        table=table,
        multiplicities=rep_report.multiplicities,
        basis=w,
        blocks=tuple(all_blocks),
        probes=probes,
        deviation=float(deviation),
    )
