"""Command-line surface.

Exit codes: 0 success / true verdict, 3 clean false verdict, 1 input
error, 2 numerical failure. The JSON payload goes to stdout, human
logging to stderr; identical inputs and --seed give byte-identical
payloads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from . import io_json
from . import mps as mps_mod
from . import twisted as tw
from .cohomology import (
    check_cocycle,
    classes_equal,
    enumerate_classes,
    is_trivial,
)
from .errors import InputError, NumericalError
from .groups import conjugacy_classes
from .numkernel import dagger, fro, kron
from .projrep import COMMUTANT_SEED, decompose, irreps

_ENV_SEED = "COCYCLE_LAB_SEED"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_FALSE = 3


def _common(parser):
    parser.add_argument("--tol", type=float, default=1e-8, help="numerical tolerance")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized internals (env %s)" % _ENV_SEED)
    parser.add_argument("--json", action="store_true",
                        help="machine mode (payload only; suppresses stderr notes)")


def _build_parser():
    root = argparse.ArgumentParser(prog="cocycle-lab")
    _common(root)
    sub = root.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("group", help="group table operations")
    gs = p.add_subparsers(dest="sub", required=True)
    v = gs.add_parser("validate")
    v.add_argument("file")
    _common(v)

    p = sub.add_parser("cocycle", help="cocycle checks and class decisions")
    cs = p.add_subparsers(dest="sub", required=True)
    c = cs.add_parser("check")
    c.add_argument("file")
    _common(c)
    c = cs.add_parser("trivial")
    c.add_argument("file")
    _common(c)
    c = cs.add_parser("equal")
    c.add_argument("file_a")
    c.add_argument("file_b")
    _common(c)
    c = cs.add_parser("classes")
    c.add_argument("group")
    c.add_argument("--m", type=int, default=None)
    _common(c)

    p = sub.add_parser("irreps", help="irreducible decomposition table")
    p.add_argument("--cocycle", required=True)
    _common(p)

    p = sub.add_parser("bounds", help="tensor-multiplicity bounds")
    bs = p.add_subparsers(dest="sub", required=True)
    b = bs.add_parser("l0")
    b.add_argument("--rep", required=True)
    b.add_argument("--l-max", type=int, default=bounds_mod.DEFAULT_L_MAX)
    _common(b)
    b = bs.add_parser("l0pair")
    b.add_argument("--rep", required=True)
    b.add_argument("--classes", required=True, nargs="+")
    b.add_argument("--l-max", type=int, default=bounds_mod.DEFAULT_L_MAX)
    _common(b)
    b = bs.add_parser("nm")
    b.add_argument("--rep", required=True)
    b.add_argument("--cocycle", required=True)
    b.add_argument("--m", type=int, required=True)
    _common(b)

    p = sub.add_parser("twisted", help="crossed-product identity suite")
    ts = p.add_subparsers(dest="sub", required=True)
    t = ts.add_parser("verify")
    t.add_argument("--window", required=True, nargs="+", type=int)
    t.add_argument("--cocycle", required=True)
    t.add_argument("--rep", required=True)
    _common(t)

    p = sub.add_parser("mps", help="matrix product state classification")
    ms = p.add_subparsers(dest="sub", required=True)
    m = ms.add_parser("classify")
    m.add_argument("--mps", required=True)
    m.add_argument("--rep", required=True)
    _common(m)
    m = ms.add_parser("compare")
    m.add_argument("--mps", required=True, action="append")
    m.add_argument("--rep", required=True)
    _common(m)
    m = ms.add_parser("leftright")
    m.add_argument("--mps", required=True)
    m.add_argument("--rep", required=True)
    _common(m)
    return root


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(_ENV_SEED)
    if env is not None:
        return int(env)
    return COMMUTANT_SEED


def _cmd_group_validate(args):
    g = io_json.load_group(args.file)
    payload = {
        "valid": True,
        "order": g.order,
        "exponent": g.exponent,
        "abelian": g.is_abelian(),
        "conjugacy_class_sizes": [len(c) for c in conjugacy_classes(g)],
    }
    return payload, EXIT_OK


def _cmd_cocycle_check(args):
    c = _load_cocycle_lenient(args.file)
    report = check_cocycle(c)
    payload = {
        "valid": report.valid,
        "identity_violations": list(report.identity_violations),
        "triple_violations": [list(t) for t in report.triple_violations],
    }
    return payload, EXIT_OK if report.valid else EXIT_FALSE


def _load_cocycle_lenient(path):
    """Load a cocycle file without rejecting invalid ones (check reports them)."""
    from .cohomology import Cocycle
    from .groups import validate_group

    data = io_json._load_json(path)
    base = os.path.dirname(os.path.abspath(path))
    grp = io_json._resolve_group(data["group"], base)
    if "exponents" in data:
        m = int(data["m"])
        exps = tuple(tuple(int(x) % m for x in row) for row in data["exponents"])
        return Cocycle(group=grp, root_order=m, exponents=exps)
    ph = tuple(tuple(float(x) % 1.0 for x in row) for row in data["phases"])
    return Cocycle(group=grp, root_order=None, phases=ph)


def _cmd_cocycle_trivial(args):
    c = io_json.load_cocycle(args.file)
    t = is_trivial(c)
    return {"trivial": bool(t)}, (EXIT_OK if t else EXIT_FALSE)


def _cmd_cocycle_equal(args):
    c1 = io_json.load_cocycle(args.file_a)
    c2 = io_json.load_cocycle(args.file_b)
    eq = classes_equal(c1, c2)
    return {"equal": bool(eq)}, (EXIT_OK if eq else EXIT_FALSE)


def _cmd_cocycle_classes(args):
    g = io_json.load_group(args.group)
    handles = enumerate_classes(g, args.m)
    payload = {
        "m": args.m if args.m is not None else g.order,
        "count": len(handles),
        "classes": [
            {
                "exponents": [list(r) for r in h.representative.exponents],
                "root_order": h.representative.root_order,
                "trivial": h.is_trivial(),
            }
            for h in handles
        ],
    }
    return payload, EXIT_OK


def _cmd_irreps(args):
    c = io_json.load_cocycle(args.cocycle)
    table = irreps(c, seed=_seed_of(args))
    payload = {
        "dims": list(table.dims()),
        "sum_of_squares": sum(d * d for d in table.dims()),
        "characters": [
            [[float(x.real), float(x.imag)] for x in e.rep.character_vector()]
            for e in table.entries
        ],
    }
    return payload, EXIT_OK


def _cmd_bounds_l0(args):
    u = io_json.load_onsite_rep(args.rep)
    report = bounds_mod.l0_all_irreps(u, l_max=args.l_max)
    return report.to_payload(), EXIT_OK


def _cmd_bounds_l0pair(args):
    u = io_json.load_onsite_rep(args.rep)
    classes = [io_json.load_cocycle(f) for f in args.classes]
    report = bounds_mod.l0_pair(u, classes, l_max=args.l_max)
    return report.to_payload(), EXIT_OK


def _cmd_bounds_nm(args):
    u = io_json.load_onsite_rep(args.rep)
    c = io_json.load_cocycle(args.cocycle)
    report = bounds_mod.n_m_sigma(u, c, args.m)
    return report.to_payload(), EXIT_OK


def _cmd_twisted_verify(args):
    u = io_json.load_onsite_rep(args.rep)
    c = io_json.load_cocycle(args.cocycle)
    payload, ok = run_identity_suite(args.window, c, u, tol=args.tol,
                                     seed=_seed_of(args))
    return payload, (EXIT_OK if ok else EXIT_NUMERICAL)


def _cmd_mps_classify(args):
    state = io_json.load_mps(args.mps)
    u = io_json.load_onsite_rep(args.rep)
    cert = mps_mod.extract_cocycle(state, u)
    payload = io_json.certificate_to_json(cert)
    payload["class_trivial"] = is_trivial(cert.cocycle)
    return payload, EXIT_OK


def _cmd_mps_compare(args):
    if len(args.mps) != 2:
        raise InputError("--mps must be given exactly twice")
    s0 = io_json.load_mps(args.mps[0])
    s1 = io_json.load_mps(args.mps[1])
    u = io_json.load_onsite_rep(args.rep)
    verdict = mps_mod.compare_phases(s0, s1, u)
    payload = {
        "equivalent": verdict.equivalent,
        "classes": [
            io_json.cocycle_to_json(cert.cocycle) for cert in verdict.certificates
        ],
    }
    return payload, (EXIT_OK if verdict.equivalent else EXIT_FALSE)


def _cmd_mps_leftright(args):
    state = io_json.load_mps(args.mps)
    u = io_json.load_onsite_rep(args.rep)
    report = mps_mod.left_right_check(state, u)
    payload = {
        "consistent": report.consistent,
        "right_cocycle": io_json.cocycle_to_json(report.right.cocycle),
        "left_cocycle": io_json.cocycle_to_json(report.left_cocycle),
        "product_trivial": report.product_trivial,
    }
    return payload, (EXIT_OK if report.consistent else EXIT_FALSE)


# ---------------------------------------------------------------------------
# The twisted identity suite (used by `twisted verify` and the tests).
# ---------------------------------------------------------------------------


def random_twisted_element(window, cocycle, onsite, rng) -> tw.TwistedElement:
    dim = window.algebra_dim
    vals = [
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for _ in cocycle.group.elements
    ]
    return tw.make_element(window, cocycle, onsite, vals)


def run_identity_suite(window_sites, cocycle, onsite, tol=1e-8, seed=COMMUTANT_SEED,
                       n_random=20):
    """Run the crossed-product and homogeneity identity checks.

    Returns (payload, all_passed); deviations are reported per check.
    """
    window = tw.make_window(window_sites, onsite.dim)
    grp = cocycle.group
    rng = np.random.default_rng(seed)
    r = tw.regular_covariant(window, cocycle, onsite)
    checks = {}

    def record(name, dev, threshold):
        checks[name] = {"deviation": float(dev), "passed": bool(dev <= threshold)}

    tw.validate_covariant(r, tol=tol)
    checks["covariance"] = {"deviation": 0.0, "passed": True}

    lam_e = tw.lambda_element(window, cocycle, onsite, 0)
    dev = 0.0
    for _ in range(3):
        f = random_twisted_element(window, cocycle, onsite, rng)
        ef = tw.star_product(lam_e, f)
        dev = max(dev, max(fro(a - b) for a, b in zip(ef.values, f.values)))
    record("unit_law", dev, tol)

    dev = 0.0
    for _ in range(n_random):
        f1 = random_twisted_element(window, cocycle, onsite, rng)
        f2 = random_twisted_element(window, cocycle, onsite, rng)
        f3 = random_twisted_element(window, cocycle, onsite, rng)
        lhs = tw.star_product(tw.star_product(f1, f2), f3)
        rhs = tw.star_product(f1, tw.star_product(f2, f3))
        scale = max(1.0, max(fro(v) for v in lhs.values))
        dev = max(dev, max(fro(a - b) for a, b in zip(lhs.values, rhs.values)) / scale)
    record("star_associativity", dev, tol)

    dev = 0.0
    for _ in range(n_random):
        f = random_twisted_element(window, cocycle, onsite, rng)
        ff = tw.involution(tw.involution(f))
        dev = max(dev, max(fro(a - b) for a, b in zip(ff.values, f.values)))
        f1 = random_twisted_element(window, cocycle, onsite, rng)
        f2 = random_twisted_element(window, cocycle, onsite, rng)
        lhs = tw.involution(tw.star_product(f1, f2))
        rhs = tw.star_product(tw.involution(f2), tw.involution(f1))
        dev = max(dev, max(fro(a - b) for a, b in zip(lhs.values, rhs.values)))
    record("involution_laws", dev, tol)

    dev = 0.0
    for g in grp.elements:
        for h in grp.elements:
            lg = tw.lambda_element(window, cocycle, onsite, g)
            lh = tw.lambda_element(window, cocycle, onsite, h)
            prod = tw.star_product(lg, lh)
            want = tw.lambda_element(window, cocycle, onsite, grp.mul(g, h))
            want_vals = [cocycle.value(g, h) * v for v in want.values]
            dev = max(dev, max(fro(a - b) for a, b in zip(prod.values, want_vals)))
    record("lambda_multiplication", dev, tol)

    dev = 0.0
    dim = window.algebra_dim
    for g in grp.elements:
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        lg = tw.lambda_element(window, cocycle, onsite, g)
        xa = tw.embed_element(window, cocycle, onsite, a)
        conj_el = tw.star_product(tw.star_product(lg, xa), tw.involution(lg))
        want = tw.embed_element(
            window, cocycle, onsite, tw.onsite_action(a, g, onsite, window.size)
        )
        dev = max(dev, max(fro(x - y) for x, y in zip(conj_el.values, want.values)))
    record("lambda_conjugation", dev, tol * 10)

    dev = 0.0
    for _ in range(n_random):
        f1 = random_twisted_element(window, cocycle, onsite, rng)
        f2 = random_twisted_element(window, cocycle, onsite, rng)
        x1 = tw.pi_times_u(f1, r)
        x2 = tw.pi_times_u(f2, r)
        x12 = tw.pi_times_u(tw.star_product(f1, f2), r)
        scale = max(1.0, fro(x1) * fro(x2))
        dev = max(dev, fro(x12 - x1 @ x2) / scale)
        xs = tw.pi_times_u(tw.involution(f1), r)
        dev = max(dev, fro(xs - dagger(x1)) / max(1.0, fro(x1)))
    record("pi_times_u_homomorphism", dev, tol)

    dev = 0.0
    for _ in range(5):
        f = random_twisted_element(window, cocycle, onsite, rng)
        nf = tw.operator_norm(tw.pi_times_u(f, r))
        nff = tw.operator_norm(tw.pi_times_u(tw.star_product(tw.involution(f), f), r))
        dev = max(dev, abs(nff - nf * nf) / max(1.0, nf * nf))
    record("cstar_identity", dev, tol)

    table = irreps(cocycle, seed=seed)
    rep_report = decompose(r.u, table)
    w = rep_report.basis
    dev_puq = 0.0
    dev_66 = 0.0
    dev_res = 0.0
    for entry, mult, sl in zip(table.entries, rep_report.multiplicities,
                               rep_report.block_slices):
        alpha = entry.rep
        na = entry.dim
        for k in range(na):
            for j in range(na):
                q = tw.q_element(alpha, k, j, window, onsite)
                img = w @ tw.pi_times_u(q, r) @ dagger(w)
                want = np.zeros_like(img)
                unit = np.zeros((na, na), dtype=complex)
                unit[k, j] = 1.0
                want[sl, sl] = kron(unit, np.eye(mult))
                dev_puq = max(dev_puq, fro(img - want))

        relem = tw.r_element(alpha, window, onsite)
        img = relem.image(r)
        dev_66 = max(dev_66, fro(img @ img - img), fro(img - dagger(img)))
        big_w = kron(np.eye(na), w)
        blocked = big_w @ img @ dagger(big_w)
        omega = tw.entangled_vector(na)
        pomega = np.outer(omega, np.conj(omega))
        want = np.zeros_like(blocked)
        start = sl.start
        for a_i in range(na):
            for k in range(na):
                for b_i in range(na):
                    for l in range(na):
                        val = pomega[a_i * na + k, b_i * na + l]
                        if val == 0:
                            continue
                        for i in range(mult):
                            want[a_i * r.dim + start + k * mult + i,
                                 b_i * r.dim + start + l * mult + i] = val
        dev_66 = max(dev_66, fro(blocked - want))
        trace_gap = abs(np.trace(img).real - mult)
        dev_66 = max(dev_66, trace_gap)

        family = tw.g_lambda_family(window, alpha, onsite)
        acc = np.zeros((na * r.dim, na * r.dim), dtype=complex)
        for x in family:
            xi = x.image(r)
            acc += xi @ dagger(xi)
        dev_res = max(dev_res, fro(acc - np.eye(na * r.dim)))
    record("matrix_unit_images", dev_puq, tol)
    record("entangled_projection", dev_66, tol)
    record("resolution_of_identity", dev_res, 1e-10 * r.dim)

    fp = tw.fixed_point_decompose(r)
    record("fixed_point_blocks", fp.deviation, tol * max(1.0, r.dim))

    if np.max(np.abs(cocycle.values() - 1.0)) < 1e-12 and window.size >= 2:
        ident = tw.identity_covariant(window, onsite, cocycle)
        sub = tw.ChainWindow(sites=window.sites[:1], local_dim=window.local_dim)
        wfac, remainder = tw.factorize(ident, sub)
        dev = fro(wfac @ dagger(wfac) - np.eye(ident.dim))
        usub = tw.window_unitaries(onsite, 1)
        for g in grp.elements:
            lhs = wfac @ ident.u.matrices[g] @ dagger(wfac)
            rhs = kron(usub[g], remainder.u.matrices[g])
            dev = max(dev, fro(lhs - rhs))
        tw.validate_covariant(remainder, tol=tol)
        record("factorization", dev, tol)

    ok = all(entry["passed"] for entry in checks.values())
    return {"window": list(window.sites), "checks": checks, "passed": ok}, ok


# ---------------------------------------------------------------------------


_HANDLERS = {
    ("group", "validate"): _cmd_group_validate,
    ("cocycle", "check"): _cmd_cocycle_check,
    ("cocycle", "trivial"): _cmd_cocycle_trivial,
    ("cocycle", "equal"): _cmd_cocycle_equal,
    ("cocycle", "classes"): _cmd_cocycle_classes,
    ("irreps", None): _cmd_irreps,
    ("bounds", "l0"): _cmd_bounds_l0,
    ("bounds", "l0pair"): _cmd_bounds_l0pair,
    ("bounds", "nm"): _cmd_bounds_nm,
    ("twisted", "verify"): _cmd_twisted_verify,
    ("mps", "classify"): _cmd_mps_classify,
    ("mps", "compare"): _cmd_mps_compare,
    ("mps", "leftright"): _cmd_mps_leftright,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code not in (0, None) else 0
    key = (args.cmd, getattr(args, "sub", None))
    handler = _HANDLERS.get(key)
    if handler is None:
        print(io_json.dumps({"error": f"unknown command {key}"}))
        return EXIT_INPUT
    try:
        payload, code = handler(args)
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(io_json.dumps({"error": str(err)}))
        if not args.json:
            print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as err:
        print(io_json.dumps({"error": str(err)}))
        if not args.json:
            print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(io_json.dumps(payload))
    return code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
