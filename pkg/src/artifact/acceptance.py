"""The acceptance suite: eleven checks with fixed tolerances and runtime budgets.

Each check takes a master seed and returns a record with ``passed``,
``wall_time``, ``limit`` and the measured quantities.  ``run_all`` is used by
both the CLI and the test suite.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from . import affine, charform, grouprep, orbits, wiener
from .folding import fold_tag

CRITERIA: list[tuple[int, str, float, Callable]] = []


def criterion(number: int, title: str, limit: float):
    def wrap(fn):
        CRITERIA.append((number, title, limit, fn))
        return fn
    return wrap


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng([seed, number])


def _torus_points(fd, rng, n):
    B = np.array(fd.torus_lattice, dtype=float)
    return rng.uniform(0, 1, size=(n, fd.l)) @ B


@criterion(1, "folding table", 1.0)
def folding_table(seed: int = 0) -> dict:
    rows = {
        "A3^2": ("C2", "B2"), "A5^2": ("C3", "B3"), "A7^2": ("C4", "B4"),
        "A2^2": ("BC1", "C1"), "A4^2": ("BC2", "C2"), "A6^2": ("BC3", "C3"),
        "D4^2": ("B3", "C3"), "D5^2": ("B4", "C4"), "D6^2": ("B5", "C5"),
        "D4^3": ("G2", "G2"), "E6^2": ("F4", "F4"),
    }
    got = {}
    for tag in rows:
        fd = fold_tag(tag)
        got[tag] = (fd.folded_type, fd.r1.name)
    bad = [t for t in rows if got[t] != rows[t]]
    return {"passed": not bad, "mismatches": bad, "rows": {t: list(v) for t, v in got.items()}}


@criterion(2, "denominator identity", 10.0)
def denominator_identity(seed: int = 0, n_points: int = 1000) -> dict:
    rng = _rng(seed, 2)
    worst = {}
    for tag in ("A3^2", "A4^2", "D4^3", "D5^2", "E6^2"):
        fd = fold_tag(tag)
        H = _torus_points(fd, rng, n_points)
        d = charform.denominator(fd, H)
        A = charform.alternating_sum(charform.weyl_table(fd.r1), fd.r1.weight_coords(fd.rho_tau), H)
        worst[tag] = float(np.max(np.abs(d - A) / np.maximum(np.abs(A), 1e-300)))
    return {"passed": max(worst.values()) <= 1e-10, "max_rel_err": worst, "tol": 1e-10}


@criterion(3, "twisted orthonormality", 30.0)
def twisted_orthonormality(seed: int = 0) -> dict:
    worst = {}
    for tag in ("A3^2", "A4^2"):
        fd = fold_tag(tag)
        lams = charform.tau_invariant_dominant(fd, 10)
        G = np.array([[charform.twisted_inner_product(fd, a, b) for b in lams] for a in lams])
        worst[tag] = float(np.max(np.abs(G - np.eye(len(lams)))))
    return {"passed": max(worst.values()) <= 1e-9, "max_err": worst, "tol": 1e-9}


@criterion(4, "character oracle", 30.0)
def character_oracle(seed: int = 0, n_points: int = 100) -> dict:
    rng = _rng(seed, 4)
    out = {}
    ok = True
    for n, lam in ((3, (1, 1)), (4, (0, 1, 0)), (4, (1, 0, 1))):
        model = grouprep.MatrixGroupModel.su(n)
        fd = fold_tag(f"A{n - 1}^2")
        rep = grouprep.RepModel(model, lam)
        T = grouprep.solve_intertwiner(model, rep)
        H = _torus_points(fd, rng, n_points)
        mat = np.array([np.trace(rep.matrix(model.torus(h)) @ T) for h in H])
        cf = charform.twisted_character(fd, lam, H)
        err = float(np.max(np.abs(mat - cf)))
        dim0 = complex(charform.twisted_character(fd, lam, np.zeros(fd.base.ambient_dim)))
        trT = complex(np.trace(T))
        integral = abs(dim0 - round(dim0.real)) < 1e-12 and abs(dim0 - trT) < 1e-9
        ok &= err <= 1e-8 and integral
        out[f"A{n - 1}:{lam}"] = {"max_err": err, "twining_dim": round(dim0.real), "trace_T": trT.real}
    return {"passed": ok, "cases": out, "tol": 1e-8}


@criterion(5, "Poisson identity", 300.0)
def poisson_identity(seed: int = 0, n_points: int = 20) -> dict:
    rng = _rng(seed, 5)
    worst = {}
    for tag in ("A1", "A2^2", "A3^2", "A4^2", "D4^3"):
        alg = affine.AffineAlgebraTag.parse(tag)
        w = 0.0
        for t in (0.5, 1.0, 2.0):
            for _ in range(n_points):
                h = rng.normal(size=alg.l)
                k = rng.normal(size=alg.l)
                h *= rng.uniform(0.5, 1.5) / np.linalg.norm(h)
                k *= rng.uniform(0.5, 1.5) / np.linalg.norm(k)
                w = max(w, affine.poisson_check(alg, t, h, k)["rel_err"])
        worst[tag] = w
    return {"passed": max(worst.values()) <= 1e-8, "max_rel_err": worst, "tol": 1e-8}


HEAT_POINTS = {
    "A2^2": [((0.13,), (-0.21,)), ((0.31,), (0.07,))],
    "A1": [((0.17,), (0.29,)), ((-0.09,), (0.41,))],
}


@criterion(6, "heat-kernel route", 600.0)
def heat_route(seed: int = 0, n_mc: int = 200_000) -> dict:
    cases = {}
    ok = True
    for tag, pts in HEAT_POINTS.items():
        alg = affine.AffineAlgebraTag.parse(tag)
        for i, (th, tk) in enumerate(pts):
            r = grouprep.heatprop_check(alg, 1.0, th, tk, n_mc, seed=seed * 100 + i)
            good = r["rel_err"] <= 2e-2 and r["n_sigma"] <= 3
            ok &= good
            cases[f"{tag}#{i}"] = {"rel_err": r["rel_err"], "n_sigma": r["n_sigma"], "passed": good}
    # scaling: RMS error over independent seeds at n and 4n
    alg = affine.AffineAlgebraTag.parse("A1")
    th, tk = HEAT_POINTS["A1"][0]
    exact = grouprep.heatprop_check(alg, 1.0, th, tk, 10, seed=0)["lhs"]
    rms = []
    for n in (10_000, 40_000):
        errs = [abs(grouprep.heatprop_rhs(alg, 1.0, th, tk, n, seed=seed * 1000 + j)["integral"] - exact)
                for j in range(100)]
        rms.append(math.sqrt(np.mean(np.square(errs))))
    ratio = rms[0] / rms[1]
    scaling = 1.5 <= ratio <= 2.6
    return {"passed": ok and scaling, "cases": cases, "rms_err": rms, "ratio": ratio, "scaling_passed": scaling,
            "n_mc": n_mc}


@criterion(7, "Weyl integral formula", 120.0)
def weyl_integral(seed: int = 0, n_mc: int = 100_000) -> dict:
    model = grouprep.MatrixGroupModel.su(4)
    fd = fold_tag("A3^2")
    one = grouprep.weyl_integral_check(model, fd, lambda g: np.ones(len(g)), 2000, 16, seed=seed)
    lam = (0, 1, 0)
    rep = grouprep.RepModel(model, lam)
    T = grouprep.solve_intertwiner(model, rep)

    def sq(g):
        return np.abs(np.einsum("pij,ji->p", rep.matrix(g), T)) ** 2

    r = grouprep.weyl_integral_check(model, fd, sq, n_mc, 16, seed=seed + 1)
    ok_one = abs(one["torus_value"] - 1) <= 1e-10 and abs(one["mc_value"] - 1) <= 1e-10
    nsig = abs(r["mc_value"] - 1) / r["mc_sigma"]
    ok_sq = nsig <= 3 and abs(r["torus_value"] - 1) <= 1e-10
    return {"passed": bool(ok_one and ok_sq), "one": {"torus": one["torus_value"], "mc": one["mc_value"]},
            "chi_sq": {"mc": r["mc_value"], "sigma": r["mc_sigma"], "torus": r["torus_value"], "n_sigma": nsig},
            "n_mc": n_mc}


@criterion(8, "orbit classification", 300.0)
def orbit_round_trip(seed: int = 0, n_points: int = 100, N: int = 128) -> dict:
    rng = _rng(seed, 8)
    out = {}
    ok = True
    for n in (3, 4):
        model = grouprep.MatrixGroupModel.su(n)
        fd = orbits.folded_data(model)
        worst = eq = shell = 0.0
        for _ in range(n_points):
            mu = orbits.random_alcove_point(fd, rng)
            b = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
            L = orbits.TwistedLoop.from_alcove(model, mu, b, N, a=rng.normal())
            g = orbits.random_gauge(model, N, rng)
            Lg = orbits.gauge_action(g, L)
            worst = max(worst, float(np.linalg.norm(orbits.classify(Lg).coords - mu)))
            shell = max(shell, abs(orbits.shell_invariant(Lg)["a"] - orbits.shell_invariant(L)["a"]))
        for _ in range(5):
            L = orbits.gauge_action(orbits.random_gauge(model, N, rng),
                                    orbits.TwistedLoop.from_alcove(model, orbits.random_alcove_point(fd, rng), 1.1, N))
            g = orbits.random_gauge(model, N, rng)
            M, Mg = orbits.monodromy(L), orbits.monodromy(orbits.gauge_action(g, L))
            eq = max(eq, float(np.max(np.abs(Mg - g.g[0] @ M @ model.tau_inv(g.g[0])))))
        good = worst <= 1e-6 and eq <= 1e-6 and shell <= 1e-8
        ok &= good
        out[f"SU({n})"] = {"max_alcove_err": worst, "equivariance": eq, "shell": shell}
    # order: gauged constant loop against its closed form
    model = grouprep.MatrixGroupModel.su(3)
    fd = orbits.folded_data(model)
    mu, b = orbits.random_alcove_point(fd, rng), 0.9
    x0 = model.r * b * 2j * np.pi * np.diag(fd.embed(mu))
    gseed = int(rng.integers(2**31))
    errs = []
    for steps in (32, 64, 128):
        g = orbits.random_gauge(model, steps, np.random.default_rng(gseed))
        L = orbits.gauge_action(g, orbits.TwistedLoop.constant(model, x0, 0.0, b, steps))
        z = orbits.cf4_monodromy(L)
        exact = g.g[0] @ orbits.expm(x0 / (b * model.r)) @ np.linalg.inv(g.g[-1])
        errs.append(float(np.max(np.abs(z - exact))))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    order_ok = min(ratios) >= 8
    return {"passed": bool(ok and order_ok), "groups": out, "order_errors": errs, "order_ratios": ratios}


@criterion(9, "radial Laplacian", 10.0)
def radial_laplacian(seed: int = 0) -> dict:
    rng = _rng(seed, 9)
    fd = fold_tag("A3^2")
    pool = charform.tau_invariant_dominant(fd, 30)
    pick = [pool[i] for i in rng.choice(len(pool), 5, replace=False)]
    recs = [charform.radial_laplacian_check(fd, lam, seed=seed) for lam in pick]
    a = max(r["analytic_residual"] for r in recs)
    f = max(r["fd_residual"] for r in recs)
    return {"passed": a <= 1e-12 and f <= 1e-4, "weights": pick, "analytic_residual": a, "fd_residual": f}


@criterion(10, "Wiener checks", 600.0)
def wiener_checks(seed: int = 0, n_paths: int = 100_000, depth: int = 10) -> dict:
    model = grouprep.MatrixGroupModel.su(2, 1)
    Y = 0.7 * np.diag([1j, -1j])
    e = wiener.endpoint_law_check(1.0, depth, n_paths, seed=seed)
    q = wiener.quasi_invariance_check(model, 1.0, wiener.exp_path(Y), wiener.real_trace, n_paths, depth, seed + 1)
    b = wiener.smoothed_berechnung_check(model, Y, 1.0, wiener.real_trace, n_paths, depth, seed + 2)

    def within(r):
        return abs(r["lhs"] - r["rhs"]) <= 3 * r["sigma"] and abs(r["lhs"] - r["rhs"]) <= 5e-2 * abs(r["rhs"])

    return {"passed": bool(e["p_value"] > 0.01 and within(q) and within(b)), "endpoint": e,
            "quasi": {k: q[k] for k in ("lhs", "rhs", "sigma")}, "berechnung": {k: b[k] for k in ("lhs", "rhs", "sigma")}}


@criterion(11, "end-to-end character", 600.0)
def end_to_end(seed: int = 0, n_mc: int = 200_000) -> dict:
    alg = affine.AffineAlgebraTag.parse("A2^2")
    sigma, K = 0.5, np.array([0.4])
    lam = affine.HighestWeight(1, (0, 0))
    direct = affine.character_value(alg, lam, -1j * sigma, K.astype(complex))
    asm = grouprep.assembled_character(alg, lam, sigma, K, n_mc, seed=seed)
    rel = abs(asm["value"] - direct) / abs(direct)
    zero = affine.HighestWeight(0, (0, 0))
    z = affine.character_value(alg, zero, -1j * sigma, K.astype(complex))
    return {"passed": bool(rel <= 2e-2 and abs(z - 1) <= 1e-10), "direct": [direct.real, direct.imag],
            "assembled": [asm["value"].real, asm["value"].imag], "rel_err": rel, "mc_sigma": asm["sigma"],
            "zero_weight_err": abs(z - 1)}


def run_one(number: int, seed: int = 0) -> dict:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            rec = fn(seed)
            wall = time.perf_counter() - t0
            rec.update(criterion=num, title=title, limit=limit, wall_time=wall, seed=seed,
                       passed=bool(rec["passed"] and wall < limit))
            return rec
    raise KeyError(number)


def run_all(seed: int = 0, only=None) -> list[dict]:
    return [run_one(num, seed) for num, _, _, _ in CRITERIA if only is None or num in only]
