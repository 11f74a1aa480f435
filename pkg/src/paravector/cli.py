"""Command line entry point: ``paravector <group> <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 numeric domain error (point at infinity, non-null input).
"""
from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import acceptance, conformal as cf, dirac, periodicity, twistor
from . import clifford as cl
from .jsonio import (
    clmat_from_json,
    clmat_to_json,
    complex_to_json,
    dumps,
    mat4_from_json,
    mv_from_json,
    mv_to_json,
    parse_floats,
)

OK, USAGE, VERIFY, DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, payload):
        super().__init__(str(payload))
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise UsageError(f"malformed JSON in {path}: {err}") from None


def _load_lines(path):
    try:
        fh = sys.stdin if path == "-" else open(path)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    with fh:
        out = []
        for n, line in enumerate(fh, 1):
            if line.strip():
                try:
                    out.append(json.loads(line))
                except json.JSONDecodeError as err:
                    raise UsageError(f"malformed JSON on line {n} of {path}: {err}") from None
        return out


def _emit(obj):
    sys.stdout.write(dumps(obj) + "\n")


# -- mv -------------------------------------------------------------------------

_UNARY = {
    "rev": cl.reversion,
    "hat": cl.grade_involution,
    "bar": cl.conjugation,
    "inverse": cl.inverse,
}
_BINARY = {
    "mul": cl.geometric_product,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "wedge": cl.wedge,
    "commutator": cl.commutator,
}


def cmd_mv(args):
    if args.op in _BINARY:
        if len(args.inputs) != 2:
            raise UsageError(f"mv {args.op} takes two multivector files")
        a, b = (mv_from_json(_load(p)) for p in args.inputs)
        _emit(mv_to_json(_BINARY[args.op](a, b)))
        return OK
    if len(args.inputs) != 1:
        raise UsageError(f"mv {args.op} takes one multivector file")
    a = mv_from_json(_load(args.inputs[0]))
    if args.op == "grade":
        if args.k is None:
            raise UsageError("mv grade needs --k")
        out = cl.grade_project(a, args.k)
    elif args.op == "exp":
        out = cl.mv_exp(a)
    elif args.op == "inverse":
        try:
            out = cl.inverse(a)
        except ZeroDivisionError as err:
            raise DomainError({"error": str(err)}) from None
    else:
        out = _UNARY[args.op](a)
    _emit(mv_to_json(out))
    return OK


# -- periodicity ----------------------------------------------------------------------

def cmd_periodicity(args):
    tol = args.tolerance
    report = {"p": args.p, "q": args.q, "variant": args.variant}
    ok = True
    try:
        table = periodicity.build_isomorphism(args.p, args.q, args.variant, tol=tol)
        report["source"] = [table.source.p, table.source.q]
        report["relations"] = table.checked
    except periodicity.StructureMismatch as err:
        ok = False
        report["relations"] = {"error": str(err), "pair": err.pair}
    eps = [args.epsilon] if args.epsilon is not None else [1, -1]
    report["transport"] = []
    for e in eps:
        r = periodicity.verify_involution_transport(args.p, args.q, e, args.variant, tol=tol, seed=args.seed)
        report["transport"].append(r.to_dict())
        ok &= r.ok
    report["ok"] = ok
    _emit(report)
    return OK if ok else VERIFY


# -- conf -------------------------------------------------------------------------

def _pin_json(g: cf.PinElement):
    d = clmat_to_json(g.m)
    d["validated"] = True
    return d


def _load_pin(path, tol):
    m = clmat_from_json(_load(path))
    return cf.PinElement.validate(m, tol)


def cmd_conf(args):
    tol = args.tolerance
    if args.op == "make":
        kind = cf.Kind(args.kind)
        if kind in (cf.Kind.TRANSLATION, cf.Kind.TRANSVECTION):
            if args.h is None:
                raise UsageError(f"--kind {kind.value} needs --h")
            spec = cf.ConformalMapKind(kind, h=cf.paravector(parse_floats(args.h, 4)))
        elif kind is cf.Kind.DILATION:
            if args.rho is None:
                raise UsageError("--kind dilation needs --rho")
            spec = cf.ConformalMapKind.dilation(args.rho)
        elif kind is cf.Kind.ROTATION:
            if args.g is None:
                raise UsageError("--kind rotation needs --g (multivector JSON file)")
            spec = cf.ConformalMapKind.rotation(mv_from_json(_load(args.g)))
        else:
            spec = cf.ConformalMapKind.inversion()
        _emit(_pin_json(cf.make_map(spec, tol)))
        return OK
    if args.op == "verify":
        m = clmat_from_json(_load(args.files[0]))
        r = cf.verify_pin_conditions(m, tol=tol, seed=args.seed)
        _emit(r.to_dict())
        return OK if r.ok else VERIFY
    if args.op == "compose":
        if len(args.files) != 2:
            raise UsageError("conf compose takes two map files")
        g1, g2 = (_load_pin(p, tol) for p in args.files)
        _emit(_pin_json(cf.compose(g1, g2, tol)))
        return OK
    if args.op == "apply":
        if args.map is None or args.x is None:
            raise UsageError("conf apply needs --map and --x")
        g = _load_pin(args.map, tol)
        try:
            xp, delta = cf.apply_conformal(g, parse_floats(args.x, 4), with_delta=True)
        except cf.PointAtInfinity:
            raise DomainError({"at_infinity": True}) from None
        _emit({"x'": cf.coords(xp).tolist(), "delta": delta})
        return OK
    if args.op == "mobius":
        if args.A is None or args.z is None:
            raise UsageError("conf mobius needs --A and --z")
        vals = _parse_complex(args.A)
        if len(vals) != 4:
            raise UsageError("--A takes a,c,b,d")
        z = _parse_complex(args.z)
        if len(z) != 1:
            raise UsageError("--z takes one complex number")
        A = np.array([[vals[0], vals[1]], [vals[2], vals[3]]])
        try:
            zp, omega = cf.mobius_plane_apply(A, z[0])
        except cf.PointAtInfinity:
            raise DomainError({"at_infinity": True}) from None
        _emit({"z'": complex_to_json(zp), "omega": omega})
        return OK
    raise UsageError(f"unknown conf command {args.op}")


# -- lie ----------------------------------------------------------------------------

def cmd_lie(args):
    if args.op == "table":
        t = dirac.commutator_table(args.variant)
        labels = dirac.LABELS
        rows = []
        for (a, b), e in t.entries.items():
            coeffs = {labels[i]: float(c) for i, c in enumerate(e.coefficients) if abs(c) > 1e-12}
            rows.append({"pair": [a, b], "coefficients": coeffs,
                         "residual": max(e.residual, e.deviation)})
        ok = t.ok(args.tolerance)
        d = dirac.duality_check(args.variant, args.tolerance)
        _emit({"variant": t.variant.value, "max_residual": t.max_residual, "ok": ok and d.ok,
               "duality": d.to_dict(), "commutators": rows})
        return OK if ok and d.ok else VERIFY
    if args.op == "gen":
        if args.label is None:
            raise UsageError("lie gen needs a label such as P0, K3, D or M12")
        g = dirac.generator(args.label, args.variant)
        _emit({"label": g.label, "variant": dirac.as_variant(args.variant).value,
               "matrix": complex_to_json(g.matrix)})
        return OK
    raise UsageError(f"unknown lie command {args.op}")


# -- twistor -----------------------------------------------------------------------

def _parse_complex(text):
    out = []
    for tok in text.split(","):
        t = tok.strip().replace(" ", "")
        t = re.sub(r"(?<![0-9.])i", "1i", t).replace("i", "j")
        try:
            out.append(complex(t))
        except ValueError:
            raise UsageError(f"cannot parse complex number {tok!r}") from None
    return out


def _null_from_json(d, variant):
    try:
        if "minkowski" in d:
            return twistor.NullParavector5.from_minkowski(parse_floats(",".join(map(str, d["minkowski"])), 4),
                                                         variant)
        return twistor.NullParavector5(float(d["scalar"]), d["E"])
    except (KeyError, TypeError) as err:
        raise UsageError(f"malformed null paravector: {err}") from None


def cmd_twistor(args):
    v = args.rep
    if args.op == "build":
        if args.x is None or args.xi is None:
            raise UsageError("twistor build needs --x and --xi")
        x = parse_floats(args.x, 4)
        xi = _parse_complex(args.xi)
        if len(xi) != 2:
            raise UsageError("--xi takes two complex numbers")
        ref = twistor.reference_twistor(x, xi, v)
        point = twistor.NullParavector5.from_minkowski(x, v)
        U = np.eye(4, dtype=complex)
        U[2:, 0] = xi
        ideal = twistor.twistor_from_ideal(point, U, v)
        agree = float(np.abs(ideal.components - ref.components).max())
        out = ref.to_dict()
        out["ideal_agreement"] = agree
        _emit(out)
        return OK if agree < args.tolerance else VERIFY
    if args.op == "incidence":
        if None in (args.x, args.xp, args.U):
            raise UsageError("twistor incidence needs --x, --xp and --U")
        x, xp = (_null_from_json(_load(p), v) for p in (args.x, args.xp))
        U = mat4_from_json(_load(args.U))
        try:
            J = twistor.incidence(x, xp, U, v)
        except twistor.NotNull as err:
            raise DomainError({"error": str(err)}) from None
        _emit({"J": complex_to_json(J), "incident": bool(np.abs(J).max() < args.tolerance)})
        return OK
    if args.op == "scan":
        if args.x is None or args.samples is None:
            raise UsageError("twistor scan needs --x and --samples")
        x = _null_from_json(_load(args.x), v)
        U = mat4_from_json(_load(args.U)) if args.U else np.eye(4, dtype=complex)
        samples = [_null_from_json(d, v) for d in _load_lines(args.samples)]
        try:
            verdicts = twistor.robinson_scan(x, U, samples, v, tol=args.tolerance)
        except twistor.NotNull as err:
            raise DomainError({"error": str(err)}) from None
        for k, (s, flag) in enumerate(verdicts):
            rec = {"index": k, "sample": s.to_dict()}
            if isinstance(flag, Exception):
                rec["error"] = str(flag)
            else:
                rec["incident"] = flag
            _emit(rec)
        return OK
    raise UsageError(f"unknown twistor command {args.op}")


# -- selftest ------------------------------------------------------------------------

def cmd_selftest(args):
    results = acceptance.run_all(args.seed)
    for c in results:
        sys.stdout.write(c.line() + f" ({c.seconds:.2f}s)\n")
    passed = sum(c.ok for c in results)
    sys.stdout.write(f"{passed}/{len(results)} criteria passed\n")
    return OK if passed == len(results) else VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="paravector", description=__doc__.splitlines()[0])
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    mv = sub.add_parser("mv", help="multivector arithmetic on JSON files")
    mv.add_argument("op", choices=sorted([*_BINARY, *_UNARY, "grade", "exp"]))
    mv.add_argument("inputs", nargs="+")
    mv.add_argument("--k", type=int)
    mv.set_defaults(func=cmd_mv)

    per = sub.add_parser("periodicity", help="verify a periodicity isomorphism")
    per.add_argument("op", choices=["verify"])
    per.add_argument("--p", type=int, required=True)
    per.add_argument("--q", type=int, required=True)
    per.add_argument("--variant", choices=sorted(periodicity.VARIANTS), default="per1")
    per.add_argument("--epsilon", type=int, choices=[1, -1])
    per.set_defaults(func=cmd_periodicity)

    conf = sub.add_parser("conf", help="conformal maps as Vahlen matrices")
    conf.add_argument("op", choices=["make", "apply", "verify", "compose", "mobius"])
    conf.add_argument("files", nargs="*")
    conf.add_argument("--kind", choices=[k.value for k in cf.Kind], default="translation")
    conf.add_argument("--h")
    conf.add_argument("--rho", type=float)
    conf.add_argument("--g")
    conf.add_argument("--map")
    conf.add_argument("--x")
    conf.add_argument("--A")
    conf.add_argument("--z")
    conf.set_defaults(func=cmd_conf)

    lie = sub.add_parser("lie", help="conformal Lie algebra in Dirac matrices")
    lie.add_argument("op", choices=["table", "gen"])
    lie.add_argument("label", nargs="?")
    lie.add_argument("--variant", choices=[v.value for v in dirac.Variant], default="weyl")
    lie.set_defaults(func=cmd_lie)

    tw = sub.add_parser("twistor", help="twistors, incidence and Robinson scans")
    tw.add_argument("op", choices=["build", "incidence", "scan"])
    tw.add_argument("--x")
    tw.add_argument("--xp")
    tw.add_argument("--xi")
    tw.add_argument("--U")
    tw.add_argument("--samples")
    tw.add_argument("--rep", choices=[v.value for v in dirac.Variant], default="weyl")
    tw.set_defaults(func=cmd_twistor)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.group == "conf" and args.op == "verify" and len(args.files) != 1:
            raise UsageError("conf verify takes one map file")
        return args.func(args)
    except UsageError as err:
        sys.stderr.write(f"error: {err}\n")
        return USAGE
    except DomainError as err:
        _emit(err.payload)
        return DOMAIN
    except cf.PinValidationError as err:
        _emit({"ok": False, **err.report.to_dict()})
        return VERIFY
    except (cl.SignatureMismatch, ValueError) as err:
        sys.stderr.write(f"error: {err}\n")
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
