"""Dense complex linear-algebra kernels and integer normal forms.

Complex matrices are plain ``numpy`` arrays (``complex128``); integer
matrices are nested lists of Python ints so arithmetic is exact at any
size. The eigensolvers are hand-rolled for deterministic, platform-stable
output: a cyclic Jacobi sweep for Hermitian matrices and a seeded power
iteration for leading eigenpairs. Both are ample for the small dense
operators this package works with.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DegenerateLeadingEigenvalue,
    DidNotConverge,
    NotHermitian,
)

#: Default numerical tolerance used across the package.
DEFAULT_TOL = 1e-8

#: Fixed seed for the power-iteration starting vector.
POWER_SEED = 0xC0CC1E

_JACOBI_MAX_SWEEPS = 100
_POWER_MAX_ITERS = 100_000


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def fro(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ((i,k),(j,l)) is a[i,j]*b[k,l]."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def kron_power(a, n: int) -> np.ndarray:
    """n-fold Kronecker power; n=0 gives the 1x1 identity."""
    out = np.eye(1, dtype=complex)
    for _ in range(n):
        out = kron(out, a)
    return out


def hermitian_eig(m, tol: float = DEFAULT_TOL):
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Returns ``(eigenvalues, vectors)`` with eigenvalues ascending (a list
    of floats) and ``vectors`` unitary, columns matching the eigenvalues.
    Raises NotHermitian if the input deviates from self-adjointness by
    more than 1e-10 relative, DidNotConverge if the sweep cap is hit.
    """
    a = as_cmatrix(m)
    n, nc = a.shape
    if n != nc:
        raise NotHermitian(f"matrix is {n}x{nc}, not square")
    scale = fro(a)
    if fro(a - dagger(a)) > 1e-10 * max(scale, 1e-300):
        raise NotHermitian(
            f"deviation from self-adjointness {fro(a - dagger(a)):.3e} "
            f"exceeds 1e-10 relative"
        )
    a = (a + dagger(a)) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1:
        return [float(a[0, 0].real)], v

    # Off-diagonal mass we drive to zero; threshold relative to input size.
    stop = 1e-14 * max(scale, 1e-300)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= stop / n:
                    continue
                w = apq / r  # unimodular phase of the pivot
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Unitary J acting on the (p,q) plane: col p = (c, conj(w)·s),
                # col q = (−s, conj(w)·c). Apply A ← J†AJ, V ← VJ.
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + (np.conj(w) * s) * col_q
                a[:, q] = -s * col_p + (np.conj(w) * c) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + (w * s) * row_q
                a[q, :] = -s * row_p + (w * c) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p + (np.conj(w) * s) * col_q
                v[:, q] = -s * col_p + (np.conj(w) * c) * col_q
    else:
        raise DidNotConverge(
            f"Jacobi sweep cap {_JACOBI_MAX_SWEEPS} exceeded at off-norm {off:.3e}"
        )

    evals = np.diag(a).real
    order = np.argsort(evals, kind="stable")
    return [float(evals[k]) for k in order], v[:, order]


def leading_eigenpair(m, tol: float = DEFAULT_TOL):
    """Dominant eigenpair of a square matrix by seeded power iteration.

    The leading eigenvalue must be unique in modulus; otherwise the
    residual never settles and DegenerateLeadingEigenvalue is raised.
    Returns ``(eigenvalue, vector)`` with the vector normalized.
    """
    a = as_cmatrix(m)
    n, nc = a.shape
    if n != nc:
        raise ValueError(f"matrix is {n}x{nc}, not square")
    scale = fro(a)
    rng = np.random.default_rng(POWER_SEED)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = x / np.sqrt(np.vdot(x, x).real)
    for _ in range(_POWER_MAX_ITERS):
        y = a @ x
        lam = complex(np.vdot(x, y))
        if np.sqrt(np.vdot(y - lam * x, y - lam * x).real) <= tol * max(scale, 1e-300):
            return lam, x.reshape(n, 1)
        ny = np.sqrt(np.vdot(y, y).real)
        if ny == 0.0:
            return 0.0 + 0.0j, x.reshape(n, 1)
        x = y / ny
    raise DegenerateLeadingEigenvalue(
        f"power iteration did not converge within {_POWER_MAX_ITERS} steps; "
        "leading eigenvalue is likely degenerate in modulus"
    )


# ---------------------------------------------------------------------------
# Exact integer matrices (nested lists of Python ints).
# ---------------------------------------------------------------------------


def int_identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_matmul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            ait = ai[t]
            if ait == 0:
                continue
            bt = b[t]
            for j in range(m):
                oi[j] += ait * bt[j]
    return out


def int_det(a) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _snf_tracked(mat):
    """Smith normal form with tracked transforms and their inverses.

    Returns (S, U, V, Uinv, Vinv) with U·mat·V = S, all unimodular,
    diagonal entries of S nonnegative with d_i | d_{i+1}.
    """
    a = [[int(x) for x in row] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = int_identity(rows)
    uinv = int_identity(rows)
    v = int_identity(cols)
    vinv = int_identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        # (row swap)^-1 = same swap, applied on the other side of Uinv
        for r in range(rows):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k == 0:
            return
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]
        for r in range(rows):
            uinv[r][src] -= k * uinv[r][dst]

    def add_col(src, dst, k):
        # col_dst += k * col_src
        if k == 0:
            return
        for r in range(rows):
            a[r][dst] += k * a[r][src]
        for r in range(cols):
            v[r][dst] += k * v[r][src]
        vinv[src] = [x - k * y for x, y in zip(vinv[src], vinv[dst])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in range(rows):
            uinv[r][i] = -uinv[r][i]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Pick the smallest-magnitude nonzero pivot in the trailing block.
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])

        while True:
            # Clear column t by euclidean row steps.
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            # Clear row t by euclidean column steps.
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # Pivot must divide the whole trailing block for the chain.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    s = [[0] * cols for _ in range(rows)]
    for i in range(min(rows, cols)):
        s[i][i] = a[i][i]
    return s, u, v, uinv, vinv


def smith_normal_form(mat):
    """Smith normal form: returns (S, U, V) with U·mat·V = S.

    U and V are unimodular; the diagonal of S is nonnegative with each
    entry dividing the next. Input entries may be arbitrary Python ints.
    """
    s, u, v, _, _ = _snf_tracked(mat)
    return s, u, v
