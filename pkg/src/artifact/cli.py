"""Command-line front end.

Every subcommand prints one JSON report ``{command, version, seed,
tolerances, wall_time, passed, result}``.  Exit status is 0 on success,
1 when a check misses its tolerance and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__

log = logging.getLogger("artifact")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()] if text else []


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.generic):
        return x.item()
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return str(x)
    return x


def _weight(fd, text: str) -> tuple[int, ...]:
    """Base fundamental-weight coordinates; ``l`` entries are spread over the tau-orbits."""
    w = _ints(text)
    if len(w) == fd.base.rank:
        return tuple(w)
    orbs = fd.auto.orbits
    if len(w) == len(orbs):
        out = [0] * fd.base.rank
        for c, orb in zip(w, orbs):
            for i in orb:
                out[i] = c
        return tuple(out)
    raise ValueError(f"weight needs {fd.base.rank} or {len(orbs)} entries")


def _point(fd, text: str) -> np.ndarray:
    """Ambient point from orthonormal LS0 coordinates (or ambient coordinates)."""
    p = np.array(_floats(text), dtype=float)
    if p.size == fd.l:
        return fd.embed(p)
    if p.size == fd.base.ambient_dim:
        return p
    raise ValueError(f"point needs {fd.l} (LS0) or {fd.base.ambient_dim} (ambient) entries")


def _model(fd):
    from .grouprep import MatrixGroupModel

    if fd.base.type_tag != "A":
        raise ValueError("matrix checks need a type A algebra")
    return MatrixGroupModel.su(fd.base.rank + 1, fd.order)


# --- subcommands ----------------------------------------------------------------------

def cmd_fold(args) -> tuple[dict, bool]:
    from .folding import fold_tag, weyl_group_orders

    tag = args.algebra or (f"{args.type}{args.rank}" + (f"^{args.order}" if args.order > 1 else ""))
    fd = fold_tag(tag)
    res = {"base": fd.base.name, "order": fd.order, "folded_type": fd.folded_type, "r1": fd.r1.name, "l": fd.l,
           "a0": fd.a0, "tau_orbits": [list(o) for o in fd.auto.orbits], "rho_tau": [str(x) for x in fd.rho_tau],
           "dim_T_mod_S0": fd.dim_T_mod_S0, **weyl_group_orders(fd)}
    return res, True


def cmd_char(args) -> tuple[dict, bool]:
    from . import charform
    from .folding import fold_tag

    fd = fold_tag(args.algebra)
    lam = _weight(fd, args.weight)
    h = _point(fd, args.point)
    if args.tau:
        v = charform.twisted_character(fd, lam, h)
        dim = charform.twisted_dimension(fd, lam)
    else:
        v = charform.classical_character(fd.base, lam, h)
        dim = charform.weyl_dimension(fd.base, lam)
    return {"weight": list(lam), "point": h, "value": complex(v), "dimension": dim, "twisted": args.tau}, True


def cmd_affchar(args) -> tuple[dict, bool]:
    from . import affine

    alg = affine.AffineAlgebraTag.parse(args.algebra)
    lam = affine.HighestWeight(args.level, _weight(alg.fd, args.weight) if args.weight else (0,) * alg.fd.base.rank)
    K = np.array(_floats(args.point) or [0.0] * alg.l, dtype=complex)
    if args.compact:
        K = 2j * np.pi * K
    v = affine.character_value(alg, lam, -1j * args.sigma, K)
    return {"level": lam.level, "weight": list(lam.finite), "sigma": args.sigma, "K": K, "value": complex(v),
            "dual_coxeter": alg.dual_coxeter}, True


def cmd_denominator(args) -> tuple[dict, bool]:
    from . import charform
    from .folding import fold_tag

    rng = np.random.default_rng(args.seed)
    fd = fold_tag(args.algebra)
    H = rng.uniform(0, 1, size=(args.points, fd.l)) @ np.array(fd.torus_lattice, dtype=float)
    d = charform.denominator(fd, H)
    A = charform.alternating_sum(charform.weyl_table(fd.r1), fd.r1.weight_coords(fd.rho_tau), H)
    err = float(np.max(np.abs(d - A) / np.maximum(np.abs(A), 1e-300)))
    return {"points": args.points, "max_rel_err": err}, err <= args.tol


def cmd_poisson(args) -> tuple[dict, bool]:
    from . import affine

    rng = np.random.default_rng(args.seed)
    alg = affine.AffineAlgebraTag.parse(args.algebra)
    rows = []
    for t in _floats(args.t):
        for _ in range(args.points):
            h = rng.normal(size=alg.l)
            k = rng.normal(size=alg.l)
            r = affine.poisson_check(alg, t, h, k)
            rows.append({"t": t, "h": h, "k": k, "rel_err": r["rel_err"]})
    worst = max(r["rel_err"] for r in rows)
    return {"max_rel_err": worst, "rows": rows}, worst <= args.tol


def cmd_heat(args) -> tuple[dict, bool]:
    from . import affine, grouprep

    alg = affine.AffineAlgebraTag.parse(args.algebra)
    h = _floats(args.h) or [0.0] * alg.l
    k = _floats(args.k) or [0.0] * alg.l
    r = grouprep.heatprop_check(alg, args.t, h, k, args.n_mc, seed=args.seed)
    return r, r["rel_err"] <= args.tol and r["n_sigma"] <= 3


def cmd_integral(args) -> tuple[dict, bool]:
    from . import grouprep
    from .folding import fold_tag

    fd = fold_tag(args.algebra)
    model = _model(fd)
    if args.weight:
        rep = grouprep.RepModel(model, _weight(fd, args.weight))
        T = grouprep.solve_intertwiner(model, rep)

        def f(g):
            return np.abs(np.einsum("pij,ji->p", rep.matrix(g), T)) ** 2
    else:
        def f(g):
            return np.ones(len(g))
    r = grouprep.weyl_integral_check(model, fd, f, args.n_mc, args.grid, seed=args.seed)
    sig = r["mc_sigma"]
    diff = abs(r["mc_value"] - r["torus_value"])
    ok = diff <= max(3 * sig, 1e-10)
    return {**r, "n_sigma": diff / sig if sig > 0 else 0.0}, ok


def cmd_conv(args) -> tuple[dict, bool]:
    from . import grouprep
    from .folding import fold_tag

    fd = fold_tag(args.algebra)
    model = _model(fd)
    rep = grouprep.RepModel(model, _weight(fd, args.weight))
    rng = np.random.default_rng(args.seed)
    g1, g2 = grouprep.haar_sample(model, rng), grouprep.haar_sample(model, rng)
    r = grouprep.twisted_convolution_check(model, rep, g1, g2, args.n_mc, seed=args.seed + 1)
    diff = abs(r["lhs"] - r["rhs"])
    return {**r, "n_sigma": diff / r["sigma"] if r["sigma"] > 0 else 0.0}, diff <= max(3 * r["sigma"], 1e-10)


def cmd_orbit(args) -> tuple[dict, bool]:
    from . import orbits
    from .grouprep import MatrixGroupModel

    if args.action == "construct":
        model = MatrixGroupModel.su(args.n, args.r)
        fd = orbits.folded_data(model)
        rng = np.random.default_rng(args.seed)
        mu = np.array(_floats(args.alcove)) if args.alcove else orbits.random_alcove_point(fd, rng)
        if mu.shape != (fd.l,):
            raise ValueError(f"--alcove needs {fd.l} coordinates, got {mu.size}")
        mu = orbits.fold_to_alcove(fd, mu)
        loop = orbits.TwistedLoop.from_alcove(model, mu, args.b, args.grid, args.a)
        if args.gauge:
            loop = orbits.gauge_action(orbits.random_gauge(model, args.grid, rng), loop)
        Path(args.loop).write_text(loop.to_json())
        return {"loop": args.loop, "alcove": mu, "shell": orbits.shell_invariant(loop)}, True
    loop = orbits.TwistedLoop.from_json(Path(args.loop).read_text())
    M = orbits.monodromy(loop)
    c = orbits.classify_monodromy(loop.model, M, args.tol)
    checks = orbits.character_checks(loop.model, M, c.coords)
    return {"alcove": c.coords, "boundary": c.boundary, "residual": c.residual, "candidates": c.candidates,
            "shell": orbits.shell_invariant(loop), "character_checks": checks}, c.residual <= args.tol


def cmd_wiener(args) -> tuple[dict, bool]:
    from . import wiener
    from .grouprep import MatrixGroupModel

    if args.test == "endpoint":
        r = wiener.endpoint_law_check(args.s, args.depth, args.n_paths, seed=args.seed)
        return r, r["p_value"] > 0.01
    model = MatrixGroupModel.su(2, 1)
    Y = args.y * np.diag([1j, -1j])
    if args.test == "quasi":
        r = wiener.quasi_invariance_check(model, args.s, wiener.exp_path(Y), wiener.real_trace, args.n_paths,
                                          args.depth, args.seed)
    else:
        r = wiener.smoothed_berechnung_check(model, Y, args.s, wiener.real_trace, args.n_paths, args.depth,
                                             args.seed)
    diff = abs(r["lhs"] - r["rhs"])
    return r, diff <= 3 * r["sigma"] and diff <= args.tol * abs(r["rhs"])


def cmd_acceptance(args) -> tuple[dict, bool]:
    from . import acceptance

    only = set(_ints(args.only)) or None
    nums = [c[0] for c in acceptance.CRITERIA if only is None or c[0] in only]
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        recs = list(pool.map(lambda n: acceptance.run_one(n, args.seed), nums))
    for r in recs:
        if args.no_timing:
            r["wall_time"] = 0.0
        log.info("criterion %d %s: %s", r["criterion"], r["title"], "PASS" if r["passed"] else "FAIL")
    return {"criteria": recs}, all(r["passed"] for r in recs)


# --- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override the default tolerance")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--no-timing", action="store_true", help="report wall_time as 0 for byte-stable output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, tol, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn, default_tol=tol)
        return sp

    sp = add("fold", cmd_fold, None, help="folded root data of a diagram automorphism")
    sp.add_argument("--algebra")
    sp.add_argument("--type", default="A")
    sp.add_argument("--rank", type=int, default=3)
    sp.add_argument("--order", type=int, default=1)

    sp = add("char", cmd_char, None, help="classical or twining character at a torus point")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--point", required=True, help="orthonormal LS0 or ambient coordinates")
    sp.add_argument("--tau", action="store_true")

    sp = add("affchar", cmd_affchar, None, help="affine character at b = -i sigma")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--weight", default="")
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--point", default="", help="K in orthonormal LS0 coordinates")
    sp.add_argument("--compact", action="store_true", help="use K = 2 pi i * point")

    sp = add("denominator-check", cmd_denominator, 1e-10)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--points", type=int, default=1000)

    sp = add("poisson-check", cmd_poisson, 1e-8)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--t", default="0.5,1,2")
    sp.add_argument("--points", type=int, default=20)

    sp = add("heat-check", cmd_heat, 2e-2)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--h", default="", help="theta_h (h = 2 pi i theta_h) in LS0 coordinates")
    sp.add_argument("--k", default="", help="theta_k in LS0 coordinates")
    sp.add_argument("--n-mc", type=int, default=200_000)

    sp = add("integral-check", cmd_integral, None)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--weight", default="", help="f = |chi~_weight|^2; f = 1 when omitted")
    sp.add_argument("--n-mc", type=int, default=100_000)
    sp.add_argument("--grid", type=int, default=16)

    sp = add("conv-check", cmd_conv, None)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--n-mc", type=int, default=100_000)

    sp = add("orbit", cmd_orbit, 1e-6, help="classify (or construct) a twisted loop")
    sp.add_argument("action", choices=["classify", "construct"])
    sp.add_argument("--loop", required=True, help="loop JSON file")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--grid", type=int, default=128)
    sp.add_argument("--alcove", default="")
    sp.add_argument("--gauge", action="store_true", help="apply a random twisted-periodic gauge")

    sp = add("wiener-check", cmd_wiener, 5e-2)
    sp.add_argument("--test", choices=["endpoint", "quasi", "berechnung"], required=True)
    sp.add_argument("--n-paths", type=int, default=100_000)
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--y", type=float, default=0.7, help="Y = y diag(i, -i)")

    sp = add("acceptance-all", cmd_acceptance, None)
    sp.add_argument("--only", default="", help="comma-separated criterion numbers")
    return p


def _csv(result: dict) -> str:
    """Scalar fields as one row; list-of-dict fields as extra tables."""
    buf = io.StringIO()
    scalars = {k: v for k, v in result.items() if not isinstance(v, (list, dict))}
    w = csv.writer(buf)
    w.writerow(scalars.keys())
    w.writerow(scalars.values())
    for k, v in result.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            buf.write(f"\n# {k}\n")
            keys = [c for c in v[0] if not isinstance(v[0][c], (list, dict))]
            w.writerow(keys)
            for row in v:
                w.writerow([row.get(c) for c in keys])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.tol is None:
        args.tol = args.default_tol if args.default_tol is not None else 0.0
    t0 = time.perf_counter()
    try:
        result, ok = args.fn(args)
    except (ValueError, KeyError, ArithmeticError, OSError) as exc:
        print(f"artifact {args.command}: error: {exc}", file=sys.stderr)
        return 2
    wall = 0.0 if args.no_timing else time.perf_counter() - t0
    report = _jsonable({"command": args.command, "version": __version__, "seed": args.seed,
                        "tolerances": {"tol": args.tol}, "wall_time": wall, "passed": bool(ok), "result": result})
    text = _csv({**report, **report["result"]}) if args.format == "csv" else json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
