"""The twelve acceptance criteria, each a function returning a :class:`Criterion`.

Shared by ``tests/test_acceptance.py`` and the ``selftest`` subcommand.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import conformal as cf
from . import dirac, periodicity, twistor
from .clifford import (
    Multivector,
    Signature,
    commutator,
    conjugation,
    grade_project,
    inverse,
    metric_pairing,
    random_multivector,
)


@dataclass
class Criterion:
    number: int
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.ok else "FAIL"
        bits = ", ".join(f"{k}={_fmt(v)}" for k, v in self.detail.items())
        return f"[{flag}] {self.number:2d} {self.name}: {bits}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _para(rng, spread=1.0):
    return cf.paravector(rng.uniform(-spread, spread, 4))


def periodicity_check(seed=0) -> Criterion:
    built = transported = 0
    failures = []
    for n in range(1, 5):
        for p in range(n + 1):
            q = n - p
            for variant in periodicity.VARIANTS:
                try:
                    periodicity.build_isomorphism(p, q, variant, tol=1e-9)
                    built += 1
                except periodicity.StructureMismatch as err:
                    failures.append(f"{variant}({p},{q}): {err}")
                for eps in (1, -1):
                    r = periodicity.verify_involution_transport(p, q, eps, variant, tol=1e-9, seed=seed)
                    transported += r.ok
                    if not r.ok:
                        failures.append(f"transport {variant}({p},{q}) eps={eps}")
    return Criterion(1, "periodicity", not failures,
                     {"isomorphisms": built, "transports": transported, "failures": len(failures)})


def klein_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed)
    maps = [cf.random_map(rng, k) for k in cf.TABLE_KINDS]
    maps += [cf.random_composition(rng) for _ in range(50)]
    worst_in = worst_out = 0.0
    for _ in range(1000):
        q = cf.compactify(_para(rng))
        worst_in = max(worst_in, abs(q.klein_defect()))
        for g in maps:
            worst_out = max(worst_out, abs(cf.twisted_adjoint(g, q).klein_defect()))
    ok = worst_in < 1e-9 and worst_out < 1e-9
    return Criterion(2, "klein absolute", ok,
                     {"max_defect_compactify": worst_in, "max_defect_transformed": worst_out,
                      "maps": len(maps)})


def _regular(rng, g, min_delta=0.1, spread=1.0):
    while True:
        x = _para(rng, spread)
        try:
            _, delta = cf.apply_conformal(g, x, with_delta=True)
        except cf.PointAtInfinity:
            continue
        if abs(delta) >= min_delta:
            return x


def consistency_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for k in range(500):
        g = cf.random_map(rng) if k % 2 else cf.random_composition(rng)
        x = _regular(rng, g)
        lhs = cf.project(cf.twisted_adjoint(g, cf.compactify(x)))
        worst = max(worst, (lhs - cf.apply_conformal(g, x)).max_abs())
    return Criterion(3, "model consistency", worst < 1e-8, {"pairs": 500, "max_error": worst})


def table_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 2)
    err = {"translation": 0.0, "dilation": 0.0, "rotation": 0.0,
           "inversion": 0.0, "inversion_quadric": 0.0, "transvection": 0.0}
    for _ in range(100):
        x = _para(rng)
        h = _para(rng)
        g = cf.make_map(cf.ConformalMapKind.translation(h))
        err["translation"] = max(err["translation"], (cf.apply_conformal(g, x) - (x + h)).max_abs())
        rho = float(np.exp(rng.uniform(-1, 1)))
        g = cf.make_map(cf.ConformalMapKind.dilation(rho))
        err["dilation"] = max(err["dilation"], (cf.apply_conformal(g, x) - x * rho).max_abs())
        g = cf.random_map(rng, cf.Kind.ROTATION)
        err["rotation"] = max(err["rotation"], abs(cf.para_norm(cf.apply_conformal(g, x)) - cf.para_norm(x)))
        g = cf.make_map(cf.ConformalMapKind.inversion())
        y = _regular(rng, g)
        err["inversion"] = max(err["inversion"],
                               (cf.apply_conformal(g, y) + conjugation(y) / cf.para_norm(y)).max_abs())
        q = cf.QuadricPoint(y, rng.uniform(-1, 1), rng.uniform(-1, 1))
        r = cf.twisted_adjoint(g, q)
        err["inversion_quadric"] = max(err["inversion_quadric"], (r.x + conjugation(y)).max_abs(),
                                       abs(r.lam - q.mu), abs(r.mu - q.lam))
        g = cf.random_map(rng, cf.Kind.TRANSVECTION)
        z = _regular(rng, g)
        h = g.m.b
        expect = z * inverse(h * z + 1.0)
        err["transvection"] = max(err["transvection"], (cf.apply_conformal(g, z) - expect).max_abs())
    ok = (err["translation"] == 0.0 and err["dilation"] < 1e-12 and err["rotation"] < 1e-10
          and err["inversion"] < 1e-10 and err["inversion_quadric"] < 1e-10
          and err["transvection"] < 1e-10)
    return Criterion(4, "conformal table", ok, err)


def pin_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    passed = 0
    mats = [cf.random_map(rng, k).m for k in cf.TABLE_KINDS]
    for _ in range(100):
        m = mats[rng.integers(5)]
        for _ in range(int(rng.integers(1, 4))):
            m = cf.random_map(rng).m @ m
        mats.append(m)
    for m in mats:
        r = cf.verify_pin_conditions(m, tol=1e-9, seed=int(rng.integers(1 << 31)))
        passed += r.ok
        worst = max(worst, max(r.residuals.values()))
    bad = cf.verify_pin_conditions(cf.ClMat2.from_scalars(1.0, 0.0, 0.0, 2.0))
    ok = passed == len(mats) and not bad.conditions["vi"]
    return Criterion(5, "pin conditions", ok,
                     {"passed": passed, "total": len(mats), "max_residual": worst,
                      "diag12_vi_fails": not bad.conditions["vi"]})


def center_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 4)
    worst = 0.0
    elems = cf.center_elements()
    for _ in range(100):
        x = _para(rng)
        for g in elems:
            worst = max(worst, (cf.apply_conformal(g, x) - x).max_abs())
    return Criterion(6, "center", worst < 1e-12, {"elements": len(elems), "max_error": worst})


def mobius_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 5)
    worst_z = worst_w = 0.0
    done = 0
    while done < 200:
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        z = complex(rng.normal(), rng.normal())
        (a, c), (b, d) = A
        if abs(b * z + d) < 0.1:
            continue
        zp, omega = cf.mobius_plane_apply(A, z)
        worst_z = max(worst_z, abs(zp - (a * z + c) / (b * z + d)))
        worst_w = max(worst_w, abs(omega - abs(b * z + d) ** 2))
        done += 1
    return Criterion(7, "moebius plane", max(worst_z, worst_w) < 1e-10,
                     {"cases": done, "max_error_z": worst_z, "max_error_omega": worst_w})


def lie_check(seed=0) -> Criterion:
    detail = {}
    ok = True
    for v in dirac.Variant:
        t = dirac.commutator_table(v)
        d = dirac.duality_check(v)
        detail[f"{v.value}_residual"] = t.max_residual
        detail[f"{v.value}_duality"] = d.max_deviation
        ok &= t.ok(1e-9) and d.ok
    rng = np.random.default_rng(seed + 6)
    sig = Signature(1, 3)
    worst = 0.0
    for _ in range(100):
        B = random_multivector(sig, rng, grades=(2,))
        C = random_multivector(sig, rng, grades=(2,))
        worst = max(worst, (commutator(B, C) - 2.0 * grade_project(B * C, 2)).max_abs())
    detail["bivector_bracket"] = worst
    ok &= worst < 1e-12
    return Criterion(8, "lie algebra", ok, detail)


def spin_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 7)
    sig = Signature(1, 3)
    unit = grade1 = isom = adad = 0.0
    for _ in range(100):
        B = random_multivector(sig, rng, grades=(2,))
        t = float(rng.uniform(-1, 1))
        v = random_multivector(sig, rng, grades=(1,))
        R = dirac.spin_exp(B, t)
        unit = max(unit, dirac.rotor_check(R))
        w = dirac.adjoint_action(R, v)
        grade1 = max(grade1, (w - grade_project(w, 1)).max_abs())
        isom = max(isom, abs(metric_pairing(w, w) - metric_pairing(v, v)))
        adad = max(adad, (w - dirac.exp_ad(B, v, t)).max_abs())
    ok = unit < 1e-10 and grade1 < 1e-8 and isom < 1e-8 and adad < 1e-8
    return Criterion(9, "spin exponentials", ok,
                     {"R_revR": unit, "grade1": grade1, "isometry": isom, "Ad_vs_exp_ad": adad})


def twistor_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 8)
    equiv = chain = closed = lower = 0.0
    for v in dirac.Variant:
        for _ in range(100):
            xm = rng.uniform(-1, 1, 4)
            xi = rng.normal(size=2) + 1j * rng.normal(size=2)
            U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            U[2:, 0] = xi
            x = twistor.NullParavector5.from_minkowski(xm, v)
            t_id = twistor.twistor_from_ideal(x, U, v)
            t_ref = twistor.reference_twistor(xm, xi, v)
            equiv = max(equiv, np.abs(t_id.components - t_ref.components).max())
            chain = max(chain, twistor.chain_defect(x, xi, v))
            closed = max(closed, np.abs(t_ref.components - twistor.closed_form(xm, xi, v)).max())
            lower = max(lower, np.abs(t_id.components[2:] - xi).max())
    ok = max(equiv, chain, closed, lower) < 1e-10
    return Criterion(10, "twistor equivalence", ok,
                     {"ideal_vs_reference": equiv, "chain": chain, "closed_forms": closed,
                      "lower_block": lower})


def random_null(rng) -> twistor.NullParavector5:
    """Null paravector with random scalar and E0..E3, E4 solved from the constraint."""
    while True:
        s = rng.uniform(-1, 1)
        e = rng.uniform(-1, 1, 4)
        rest = s ** 2 + e[0] ** 2 - e[1:] @ e[1:]
        if rest > 1e-3:
            e4 = math.sqrt(rest) * rng.choice((-1.0, 1.0))
            return twistor.NullParavector5(s, [*e, e4])


def incidence_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 9)
    xs = [random_null(rng) for _ in range(50)]
    Us = [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(20)]
    self_max = 0.0
    for x in xs:
        for U in Us:
            self_max = max(self_max, np.abs(twistor.incidence(x, x, U)).max())
    distinct_min = math.inf
    for k in range(50):
        x, y = xs[k], xs[(k + 1) % 50]
        distinct_min = min(distinct_min, np.abs(twistor.incidence(x, y, Us[k % 20])).max())
    scan = twistor.robinson_scan(xs[0], Us[0], [xs[0], xs[0].scaled(2.0), xs[0].scaled(-0.5), xs[1]])
    flags = [r[1] for r in scan]
    ok = self_max < 1e-9 and distinct_min > 1e-6 and flags == [True, True, True, False]
    return Criterion(11, "incidence", ok,
                     {"self_max": self_max, "distinct_min": distinct_min, "scan": flags})


def conformality_check(seed=0) -> Criterion:
    rng = np.random.default_rng(seed + 10)
    worst_j = worst_fit = 0.0
    for kind in cf.TABLE_KINDS:
        g = cf.random_map(rng, kind)
        for _ in range(20):
            x = _regular(rng, g, min_delta=0.2)
            worst_j = max(worst_j, cf.conformality_deviation(cf.jacobian(g, x)))
        for _ in range(3):
            s = cf.QuasiSphere(rng.uniform(-1, 1), rng.uniform(-1, 1, 4), rng.uniform(-1, 1))
            pts = []
            for p in cf.sample_quasi_sphere(s, rng, 16):
                try:
                    _, delta = cf.apply_conformal(g, p, with_delta=True)
                except cf.PointAtInfinity:
                    continue
                if abs(delta) > 0.05:
                    pts.append(cf.apply_conformal(g, p))
                if len(pts) == 8:
                    break
            worst_fit = max(worst_fit, cf.quasi_sphere_fit(pts)[1])
    ok = worst_j < 1e-4 and worst_fit < 1e-6
    return Criterion(12, "conformality", ok, {"jacobian_deviation": worst_j, "sphere_fit_residual": worst_fit})


CRITERIA = (periodicity_check, klein_check, consistency_check, table_check, pin_check,
            center_check, mobius_check, lie_check, spin_check, twistor_check,
            incidence_check, conformality_check)


def run(fn, seed=0) -> Criterion:
    t0 = time.perf_counter()
    c = fn(seed)
    c.seconds = time.perf_counter() - t0
    return c


def run_all(seed=0) -> list[Criterion]:
    return [run(fn, seed) for fn in CRITERIA]
