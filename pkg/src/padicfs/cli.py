"""Command line front end: ``padicfs <subcommand> [flags]``.

Series are given with --spec as a JSON file ({"p", "a", "b", "x0"?}, or
{"series": [...]} for a product) or as a preset such as ``chi:3`` or
``chi:q``. Repeat --spec to multiply series. Frames (--frame) and
evaluation maps (--eval) are JSON files or inline ``D0:inf,D1:3`` and
``q=3`` strings.

Exit codes: 0 ok, 1 a check failed, 2 bad configuration, 3 breakdown,
4 arithmetic guard.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from .padic import PAdicInt, DualElement, DigitOutOfRange
from .scalars import (to_string, parse_scalar, DivisionByZero, DenominatorVanishes,
                      RamifiedPlace, Cyclotomic, SymbolicScalar)
from .sbfourier import FourierTable, dual_tree, LevelTooLarge
from .series import SpecError, SingularComposite, AffineFamily, AlphaVanishes, FSeriesSpec
from .products import (ProductSpec, TransformLattice, BreakdownHit, LatticeCapExceeded,
                       MultiIndex, checkProductFunctionalEquation, measureNormCheck,
                       momentSequence)
from .frames import (DigitalFrame, EvaluationMap, FrameError, NonUniqueSolutionIdeal, Place,
                     applyEvaluation, convergenceDemo)
from .inversion import OnBreakdownVariety, breakdownScan
from . import hydra as hy
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BREAKDOWN, EXIT_GUARD = 0, 1, 2, 3, 4


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# reading configuration


def _load_json_or_inline(text):
    if os.path.exists(text):
        try:
            with open(text) as fh:
                return json.load(fh), True
        except json.JSONDecodeError as exc:
            raise ConfigError("%s: %s" % (text, exc))
    return text, False


def _preset(name):
    kind, _, arg = name.partition(":")
    if kind == "chi" and arg:
        q = parse_scalar(arg)
        return FSeriesSpec(2, [Fraction(1, 2), q * Fraction(1, 2)], [0, Fraction(1, 2)])
    raise ConfigError("%r is neither a file nor a known preset (try chi:3 or chi:q)" % name)


def load_series(items):
    specs = []
    for item in items or []:
        data, from_file = _load_json_or_inline(item)
        if not from_file:
            specs.append(_preset(data))
            continue
        rows = data.get("series", [data]) if isinstance(data, dict) else data
        for row in rows:
            try:
                specs.append(FSeriesSpec.from_json(row))
            except (KeyError, TypeError) as exc:
                raise ConfigError("bad series entry %r: %s" % (row, exc))
    if not specs:
        raise ConfigError("this subcommand needs --spec")
    return specs


def load_frame(text, p):
    if text is None:
        return None
    data, from_file = _load_json_or_inline(text)
    if from_file:
        return DigitalFrame.from_json(data)
    classes = {}
    for part in data.split(","):
        k, _, v = part.partition(":")
        if not v:
            raise ConfigError("frame entries look like D0:inf or D1:3, got %r" % part)
        classes[k.strip()] = v.strip()
    return DigitalFrame(p, classes)


def load_eval(text):
    if text is None:
        return EvaluationMap()
    data, from_file = _load_json_or_inline(text)
    if from_file:
        return EvaluationMap.from_json(data)
    values = {}
    for part in data.split(","):
        k, _, v = part.partition("=")
        if not v:
            raise ConfigError("evaluation entries look like q=3, got %r" % part)
        values[k.strip()] = parse_scalar(v.strip())
    return EvaluationMap(values)


def parse_index(text, d):
    if text is None:
        return MultiIndex((1,) * d)
    parts = [s for s in text.strip("()[] ").replace(";", ",").split(",") if s.strip()]
    try:
        idx = tuple(int(s) for s in parts)
    except ValueError:
        raise ConfigError("index must be integers, got %r" % text)
    if len(idx) != d or any(v < 0 for v in idx):
        raise ConfigError("index %r does not match %d series" % (text, d))
    return MultiIndex(idx)


# ---------------------------------------------------------------------------
# output


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return "inf" if x == math.inf else x
    if isinstance(x, (Fraction, Cyclotomic, SymbolicScalar)):
        return to_string(x)
    return str(x)


def dump_json(doc):
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def reemit(text):
    """Parse emitted JSON and re-emit it; the result is byte-identical."""
    doc = json.loads(text)
    if (isinstance(doc, dict) and "p" in doc and "table" in doc
            and all("value" in r for r in doc["table"])):
        table = FourierTable.from_json(doc["p"], doc["table"])
        rows = {r["t"]: r for r in doc["table"]}
        doc["table"] = [dict(rows[str(t)], value=to_string(table.coeff(t))) for t in
                        (DualElement.parse(doc["p"], r["t"]) for r in doc["table"])]
    return dump_json(doc)


def _flatten(row, prefix=""):
    out = {}
    for k, v in row.items():
        key = prefix + str(k)
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(c, float) for c in v):
            out[key + "_interval_lo"] = v[0]
            out[key + "_interval_hi"] = v[1]
        elif isinstance(v, list):
            out[key] = " ".join(str(c) for c in jsonable(v))
        else:
            out[key] = jsonable(v)
    return out


def dump_csv(rows):
    flat = [_flatten(r) for r in rows]
    cols = []
    for r in flat:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in flat:
        w.writerow(r)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands; each returns (document, csv rows, exit code)


def _nmax(args, default):
    return default if args.nmax is None else args.nmax


def _table_rows(ct, p, tmax):
    return [{"t": str(t), "value": to_string(ct.coeff(t))} for t in dual_tree(p, tmax)]


def _product_spec(args):
    specs = load_series(args.spec)
    e = load_eval(args.eval)
    specs = [applyEvaluation(e, s) for s in specs]
    return ProductSpec(specs)


def cmd_transform(args):
    P = _product_spec(args)
    n = parse_index(args.index, P.d)
    lat = TransformLattice(P, n)
    # X-hat of the zero index is the indicator of t = 0, supported at level 0
    rows = _table_rows(lat[n], P.p, args.tmax if n.sigma else 0)
    doc = {"p": P.p, "index": str(n), "tmax": args.tmax,
           "series": [s.to_json() for s in P.specs], "manifest": lat.manifest, "table": rows}
    return doc, rows, EXIT_OK


def cmd_product(args):
    P = _product_spec(args)
    n = parse_index(args.index, P.d)
    lat = TransformLattice(P, n)
    rows = []
    for t in dual_tree(P.p, args.tmax):
        rows.append({"t": str(t), "X_hat": to_string(lat[n].coeff(t)),
                     "f_hat": to_string(lat.fhat(n).coeff(t)) if n.sigma else "0",
                     "g_hat": to_string(lat.g[n].coeff(t)) if n.sigma else "0"})
    fe = checkProductFunctionalEquation(P, n, min(args.tmax + 1, 4))
    doc = {"p": P.p, "index": str(n), "tmax": args.tmax, "manifest": lat.manifest,
           "functional_equation": fe, "table": rows}
    code = EXIT_OK if fe["status"] == "exact-equal" else EXIT_FAIL
    if args.nmax is not None:
        if P.d != 1:
            raise ConfigError("moments are listed for a single series only")
        doc["moments"] = momentSequence(P, args.nmax)
    if args.place and n.sigma:
        doc["measure"] = measureNormCheck(P, n, "inf" if Place.parse(args.place).archimedean
                                          else Place.parse(args.place).ell)
    return doc, rows, code


def cmd_verify(args):
    specs = load_series(args.spec) if args.spec else None
    if specs:
        e = load_eval(args.eval)
        specs = [applyEvaluation(e, s) for s in specs]
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(name, args.seed, specs) for name in names]
    rows = []
    for res in results:
        for r in res["reports"]:
            rows.append(dict(r, suite=res["suite"]))
    failed = [r for r in rows if r.get("status") not in ("exact-equal", "bound-holds",
                                                          "pass-as-expected")]
    for r in failed:
        sys.stderr.write("counterexample in %s: %s\n" % (r["suite"], json.dumps(jsonable(r))))
    doc = {"seed": args.seed, "suites": [{k: v for k, v in res.items()} for res in results],
           "passed": not failed}
    return doc, rows, EXIT_FAIL if failed else EXIT_OK


def cmd_breakdown(args):
    P = _product_spec(args)
    deg = _nmax(args, 4)
    rows = breakdownScan(P, deg)
    doc = {"p": P.p, "max_degree": deg, "rows": rows,
           "on_variety": [r["index"] for r in rows if r["verdict"] == "on-variety"]}
    return doc, rows, EXIT_OK


def cmd_converge(args):
    specs = load_series(args.spec)
    e = load_eval(args.eval)
    spec = applyEvaluation(e, specs[0])
    if args.point is None:
        raise ConfigError("converge needs --point")
    frame = load_frame(args.frame, spec.p)
    if frame is None:
        if args.place is None:
            raise ConfigError("converge needs --frame or --place")
        frame = DigitalFrame(spec.p, {k: args.place for k in range(spec.p)})
    rep = convergenceDemo(spec, frame, PAdicInt.parse(spec.p, args.point), _nmax(args, 12),
                          precisionBits=args.precision)
    code = EXIT_OK if all(r.get("direct_agrees", True) for r in rep["rows"]) else EXIT_FAIL
    return rep, rep["rows"], code


def _hydra_map(args):
    name = (args.spec or ["T:3"])[0]
    if name == "sqrt7":
        return hy.QuadHydra.sqrt7()
    data, from_file = _load_json_or_inline(name)
    if from_file:
        return hy.HydraMapZ(int(data["p"]), data["branches"], name=data.get("name"))
    kind, _, arg = name.partition(":")
    if kind == "T" and arg:
        return hy.HydraMapZ.T(int(arg))
    raise ConfigError("hydra maps: T:q, sqrt7, or a JSON file with p and branches")


def cmd_hydra(args):
    H = _hydra_map(args)
    if args.action == "orbit":
        if args.point is None:
            raise ConfigError("hydra orbit needs --point")
        if isinstance(H, hy.QuadHydra):
            a, _, b = args.point.partition(",")
            start, show = (int(a), int(b or 0)), hy.fmt_quad
        else:
            start, show = parse_scalar(args.point), to_string
            if isinstance(start, Fraction) and start.denominator == 1:
                start = int(start)
        rec = hy.iterate(H, start, maxSteps=_nmax(args, 10 ** 5))
        doc = rec.to_json(show)
        return doc, [{"step": i, "value": v} for i, v in enumerate(doc["steps"])], EXIT_OK
    if args.action == "numen":
        if isinstance(H, hy.QuadHydra):
            raise ConfigError("numen is only built for hydra maps on Z")
        spec = hy.numen(H)
        from .series import evalAtNat
        rows = [{"n": m, "value": to_string(evalAtNat(spec, m))} for m in range(_nmax(args, 16))]
        doc = {"map": H.name, "numen": spec.to_json(), "values": rows}
        code = EXIT_OK
        if args.point:
            doc["correspondence"] = hy.correspondenceCheck(H, args.point)
            code = EXIT_OK if doc["correspondence"]["status"] == "exact-equal" else EXIT_FAIL
        return doc, rows, code
    e = load_eval(args.eval)
    q = e.values.get("q")
    doc = hy.poleReport(q, tmax=args.tmax)
    return doc, doc["transform"], EXIT_OK


COMMANDS = {"transform": cmd_transform, "product": cmd_product, "verify": cmd_verify,
            "breakdown": cmd_breakdown, "converge": cmd_converge, "hydra": cmd_hydra}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", action="append", help="series file or preset; repeat for products")
    common.add_argument("--frame", help="frame file or inline D0:inf,D1:3")
    common.add_argument("--eval", help="evaluation file or inline q=3")
    common.add_argument("--index", help="multi-index such as 2 or 1,1")
    common.add_argument("--tmax", type=int, default=2)
    common.add_argument("--nmax", type=int, help="degree, N or step bound (per subcommand)")
    common.add_argument("--point", help="p-adic point such as 7, -1/3 or pre:1;per:01")
    common.add_argument("--place", help="inf or prime:ell")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", type=int, default=128, help="interval bits")

    ap = argparse.ArgumentParser(prog="padicfs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("transform", parents=[common], help="closed transform table")
    sub.add_parser("product", parents=[common], help="product lattice with f-hat and g-hat")
    v = sub.add_parser("verify", parents=[common], help="run an exact identity suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    sub.add_parser("breakdown", parents=[common], help="alpha_n(0) scan up to degree --nmax")
    sub.add_parser("converge", parents=[common], help="Delta_N at a point, sized at its place")
    h = sub.add_parser("hydra", parents=[common], help="hydra orbits, numens, pole report")
    h.add_argument("action", choices=["orbit", "numen", "poles"])
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        doc, rows, code = COMMANDS[args.command](args)
    except (DivisionByZero, DenominatorVanishes, AlphaVanishes, NonUniqueSolutionIdeal,
            ZeroDivisionError) as exc:
        sys.stderr.write("arithmetic guard: %s\n" % exc)
        return EXIT_GUARD
    except (BreakdownHit, OnBreakdownVariety, SingularComposite, AffineFamily) as exc:
        sys.stderr.write("breakdown: %s\n" % exc)
        return EXIT_BREAKDOWN
    except (ConfigError, SpecError, FrameError, LatticeCapExceeded, LevelTooLarge,
            DigitOutOfRange, RamifiedPlace, ValueError, KeyError) as exc:
        sys.stderr.write("configuration error: %s\n" % exc)
        return EXIT_CONFIG
    out.write(dump_json(doc) if args.format == "json" else dump_csv(rows))
    return code


if __name__ == "__main__":
    sys.exit(main())
