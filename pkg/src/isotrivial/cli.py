"""Command-line front end.

    isotrivial classify surface.json [--format json|table]
    isotrivial verify e2_law|embed_ordinary|embed_supersingular|fixed_points|calcoli
    isotrivial ramify action.json
    isotrivial example plane --p 5 --r 1 --roots 0,1,2,3,4
    isotrivial example space --p 5 --n 1 [--a 15,16,3,21]
    isotrivial suite [--q-max 8] [--seed 0]

Exit codes: 0 success, 1 parse or schema errors (and failed checks),
2 data that violates a constraint of the theory.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path
from typing import Any

from . import acceptance
from . import examples as ex
from .algebra import DEFAULT_PRECISION, GF, TruncatedAlgebra
from .errors import IsotrivialError, SchemaError
from .groupscheme import e2_group_law, group_from_json
from .invariants import (
    E_TYPES,
    X_HINTS,
    OrbitDatum,
    SurfaceData,
    compute_report,
    format_details,
    format_table,
)
from .pgl2 import (
    embed_ordinary,
    embed_supersingular,
    mu2_algebra,
    ordinary_group_mul,
    scan_fixed_points,
    supersingular_homomorphism_witness,
)
from .ramification import LocalAction, artin_a, hurwitz_wild, i_x, is_tame, rotation, translation_at_infinity

SCHEMA_VERSION = 1
SURFACE_KEYS = {"schema", "p", "group", "gY", "orbits", "e_type", "x_hint", "hom_rank"}
SURFACE_REQUIRED = {"p", "group", "gY"}
ORBIT_KEYS = {"n", "weight", "stab", "label", "artin"}
RAMIFY_KEYS = {"schema", "p", "group_order", "stab_order", "series", "preset", "n", "gY", "fixed_orbits"}
CHECKS = ("e2_law", "embed_ordinary", "embed_supersingular", "fixed_points", "calcoli")

EXIT_OK, EXIT_PARSE, EXIT_DATA = 0, 1, 2


# ---------------------------------------------------------------------------
# JSON <-> SurfaceData


def _int(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{where}.{key} must be an integer, got {v!r}")
    return v


def _check_keys(obj: Any, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"{where}: unknown field {unknown[0]!r} (allowed: {', '.join(sorted(allowed))})")
    missing = sorted(required - set(obj))
    if missing:
        raise SchemaError(f"{where}: missing field {missing[0]!r}")


def _check_schema(obj: dict, where: str) -> None:
    if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise SchemaError(f"{where}.schema must be {SCHEMA_VERSION}, got {obj['schema']!r}")


def surface_from_json(obj: Any, where: str = "input") -> SurfaceData:
    _check_keys(obj, SURFACE_KEYS, SURFACE_REQUIRED, where)
    _check_schema(obj, where)
    p = _int(obj, "p", where)
    if not isinstance(obj["group"], list):
        raise SchemaError(f"{where}.group must be a list of atoms")
    G = group_from_json(p, obj["group"])
    orbits = []
    for i, o in enumerate(obj.get("orbits", [])):
        ow = f"{where}.orbits[{i}]"
        _check_keys(o, ORBIT_KEYS, {"n"}, ow)
        weight = None
        if o.get("weight") is not None:
            if not isinstance(o["weight"], list):
                raise SchemaError(f"{ow}.weight must be a list of residues")
            weight = G.character(o["weight"])
        stab = tuple(o["stab"]) if o.get("stab") is not None else None
        artin = _int(o, "artin", ow) if o.get("artin") is not None else None
        orbits.append(OrbitDatum(_int(o, "n", ow), weight, stab, o.get("label"), artin))
    e_type = obj.get("e_type", "ordinary")
    x_hint = obj.get("x_hint", "unknown")
    if e_type not in E_TYPES:
        raise SchemaError(f"{where}.e_type must be one of {', '.join(E_TYPES)}")
    if x_hint not in X_HINTS:
        raise SchemaError(f"{where}.x_hint must be one of {', '.join(X_HINTS)}")
    hom_rank = _int(obj, "hom_rank", where) if "hom_rank" in obj else 0
    return SurfaceData(p, G, _int(obj, "gY", where), tuple(orbits), e_type, x_hint, hom_rank)


def surface_to_json(d: SurfaceData) -> dict:
    orbits = []
    for o in d.orbits:
        entry: dict[str, Any] = {"n": o.n}
        if o.weight is not None:
            entry["weight"] = list(o.weight.residues)
        if o.stab is not None:
            entry["stab"] = list(o.stab)
        if o.label is not None:
            entry["label"] = o.label
        if o.artin is not None:
            entry["artin"] = o.artin
        orbits.append(entry)
    return {
        "schema": SCHEMA_VERSION,
        "p": d.p,
        "group": d.G.to_json(),
        "gY": d.gY,
        "e_type": d.e_type,
        "orbits": orbits,
        "x_hint": d.x_hint,
        "hom_rank": d.hom_rank,
    }


def load_json(source: str) -> Any:
    """A path, ``-`` for stdin, or inline JSON."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read {source}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None


def dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# subcommands


def run_classify(args) -> int:
    raw = load_json(args.input)
    items = raw if isinstance(raw, list) else [raw]
    surfaces = [surface_from_json(o, f"input[{i}]" if isinstance(raw, list) else "input") for i, o in enumerate(items)]
    reports = [compute_report(d) for d in surfaces]
    if args.format == "json":
        out = [r.to_json() for r in reports]
        print(dump(out if isinstance(raw, list) else out[0]))
    else:
        print(format_table(reports))
        if len(reports) == 1:
            print()
            print(format_details(reports[0]))
    return EXIT_OK


def _verify_e2_law(args) -> tuple[bool, str]:
    A = TruncatedAlgebra(GF(2), ("t", "s", "r"), (4, 4, 4))
    t, s, r = A.gens()
    add = e2_group_law
    lhs, rhs = add(add(t, s), r), add(t, add(s, r))
    checks = [
        ("identity", add(t, A.zero()) == t, f"t + 0 = {add(t, A.zero())}"),
        ("2-torsion", add(t, t).is_zero(), f"t + t = {add(t, t)}"),
        ("commutativity", add(t, s) == add(s, t), f"{add(t, s)} vs {add(s, t)}"),
        ("associativity", lhs == rhs, f"{lhs} vs {rhs}"),
    ]
    lines = [f"  {name}: {'ok' if ok else 'FAILED ' + witness}" for name, ok, witness in checks]
    return all(ok for _, ok, _ in checks), "\n".join(lines)


def _verify_embed_ordinary(args) -> tuple[bool, str]:
    A = mu2_algebra(("e", "f"))
    e, f = A.gens()
    failures = []
    pairs = itertools.product(
        [(eps, u) for eps in (0, 1) for u in (A.one(), 1 + e)],
        [(eps, u) for eps in (0, 1) for u in (A.one(), 1 + f)],
    )
    n = 0
    for g, h in pairs:
        n += 1
        lhs = embed_ordinary(*g) * embed_ordinary(*h)
        rhs = embed_ordinary(*ordinary_group_mul(g, h))
        if lhs != rhs:
            failures.append(f"  ({g[0]}, {g[1]}) * ({h[0]}, {h[1]}): {lhs} vs {rhs}")
    return not failures, "\n".join(failures) or f"  {n} pairs over {A!r}"


def _verify_embed_supersingular(args) -> tuple[bool, str]:
    B = TruncatedAlgebra(GF(2), ("t", "s"), (4, 4))
    t, s = B.gens()
    w = supersingular_homomorphism_witness(t, s)
    text = [
        f"  product           {w['product']}",
        f"  scaled by 1+t^2s  {w['scaled_product']}",
        f"  image of t + s    {w['image_of_sum']}",
    ]
    return w["equal"], "\n".join(text)


def _verify_fixed_points(args) -> tuple[bool, str]:
    q_max = args.q_max or 8
    A = mu2_algebra(("e",))
    (e,) = A.gens()
    T = TruncatedAlgebra(GF(2), ("t",), (4,))
    (t,) = T.gens()
    sets = {
        "Z/2 x mu_2": [embed_ordinary(0, 1 + e), embed_ordinary(1, A.one())],
        "supersingular E[2]": [embed_supersingular(t)],
    }
    ok, lines = True, []
    for name, mats in sets.items():
        pts = scan_fixed_points(mats, q_max)
        ok &= not pts
        lines.append(f"  {name}: " + (", ".join(pt.render() for pt in pts) if pts else f"no fixed point for q <= {q_max}"))
    if q_max < acceptance.FULL_CONFIDENCE_Q:
        lines.append(f"  note: reduced confidence, scan stops at q = {q_max}")
    return ok, "\n".join(lines)


def _verify_calcoli(args) -> tuple[bool, str]:
    rng = random.Random(args.seed)
    lines, ok = [], True
    for p in (5, 7, 11):
        bad = 0
        for _ in range(100):
            if not ex.verify_calcoli(ex.random_space_family(p, rng)):
                bad += 1
        ok &= bad == 0
        lines.append(f"  p={p}: {100 - bad}/100 random families satisfy both identities")
    fam = acceptance.concrete_space_family()
    v = ex.calcoli_values(fam)
    lines.append(f"  concrete family a={list(fam.a)} over {fam.field}: values {v.plus}, {v.minus}")
    return ok and v.holds, "\n".join(lines)


VERIFIERS = {
    "e2_law": _verify_e2_law,
    "embed_ordinary": _verify_embed_ordinary,
    "embed_supersingular": _verify_embed_supersingular,
    "fixed_points": _verify_fixed_points,
    "calcoli": _verify_calcoli,
}


def run_verify(args) -> int:
    names = list(CHECKS) if args.check == "all" else [args.check]
    if any(n not in VERIFIERS for n in names):
        print(f"unknown check {args.check!r}; choose from {', '.join(CHECKS)} or all", file=sys.stderr)
        return EXIT_PARSE
    all_ok = True
    for name in names:
        ok, witness = VERIFIERS[name](args)
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if witness and (not ok or name in ("embed_supersingular", "fixed_points") or args.verbose):
            print(witness)
    return EXIT_OK if all_ok else EXIT_PARSE


def action_from_json(obj: Any) -> tuple[LocalAction, int, int]:
    """``(action, gY, number of fixed orbits)``."""
    _check_keys(obj, RAMIFY_KEYS, {"p"}, "input")
    _check_schema(obj, "input")
    p = _int(obj, "p", "input")
    preset = obj.get("preset")
    if preset is not None:
        if "series" in obj:
            raise SchemaError("input: give either 'preset' or 'series', not both")
        if preset == "translation":
            act = translation_at_infinity(p)
        elif preset == "rotation":
            if "n" not in obj:
                raise SchemaError("input: the rotation preset needs 'n'")
            act = rotation(p, _int(obj, "n", "input"))
        else:
            raise SchemaError(f"input.preset must be 'translation' or 'rotation', got {preset!r}")
    else:
        if "series" not in obj or "stab_order" not in obj:
            raise SchemaError("input: need 'series' and 'stab_order' (or a 'preset')")
        series = obj["series"]
        if not isinstance(series, list) or not all(isinstance(c, list) for c in series):
            raise SchemaError("input.series must be a list of coefficient lists")
        H = _int(obj, "stab_order", "input")
        order = _int(obj, "group_order", "input") if "group_order" in obj else H
        act = LocalAction.from_coefficients(p, order, H, series)
    gY = _int(obj, "gY", "input") if "gY" in obj else 0
    fixed = _int(obj, "fixed_orbits", "input") if "fixed_orbits" in obj else (1 if preset == "translation" else 2 if preset == "rotation" else 1)
    return act, gY, fixed


def run_ramify(args) -> int:
    act, gY, fixed = action_from_json(load_json(args.input))
    act.check(args.precision)
    ivals = [i_x(act, k, args.precision) for k in range(act.stab_order - 1)]
    a = artin_a(act, args.precision)
    result = {
        "p": act.p,
        "group_order": act.group_order,
        "stab_order": act.stab_order,
        "i_x": ivals,
        "artin": a,
        "tame": is_tame(act, args.precision),
        "gY": gY,
        "fixed_orbits": fixed,
        "deg_omega_X": hurwitz_wild(act.group_order, gY, [a] * fixed),
    }
    if args.format == "json":
        print(dump(result))
    else:
        for key in ("p", "group_order", "stab_order", "i_x", "artin", "tame", "gY", "fixed_orbits", "deg_omega_X"):
            print(f"{key:<13}{result[key]}")
    return EXIT_OK


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def run_example(args) -> int:
    if args.family == "plane":
        if args.p is None or args.r is None or args.roots is None:
            raise SchemaError("example plane needs --p, --r and --roots")
        field = GF(args.p, args.k)
        roots = [t if t == "inf" else int(t) for t in _csv(args.roots)]
        fam = ex.plane_family(args.p, args.r, roots, args.group_order, field)
        d = ex.plane_family_to_surface(fam)
    else:
        if args.p is None or args.n is None:
            raise SchemaError("example space needs --p and --n")
        if args.a is None:
            fam = ex.random_space_family(args.p, random.Random(args.seed), args.n, None if args.k == 1 else args.k)
        else:
            k = args.k if args.k > 1 else 2
            fam = ex.SpaceCurveFamily(args.p, args.n, tuple(int(t) for t in _csv(args.a)), GF(args.p, k))
        d = ex.space_family_to_surface(fam)
    print(dump(surface_to_json(d)))
    return EXIT_OK


def run_suite(args) -> int:
    q_max = args.q_max or acceptance.DEFAULT_Q_MAX
    print(f"acceptance suite: seed {args.seed}, q_max {q_max}")
    results = acceptance.run_all(q_max, args.seed, args.golden_dir)
    for r in sorted(results, key=lambda r: r.number):
        print(r.line())
        if not r.passed and r.detail:
            for line in r.detail.splitlines():
                print(f"    {line}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_PARSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isotrivial", description="Invariants of isotrivial elliptic surfaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        if fmt:
            sp.add_argument("--format", choices=("json", "table"), default="table")
        sp.add_argument("--q-max", type=int, default=None, help="largest field size to scan (default p^3)")
        sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="power-series precision")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("classify", help="classify a surface from SurfaceData JSON")
    sp.add_argument("input", help="path, '-' for stdin, or inline JSON")
    common(sp)
    sp.set_defaults(func=run_classify)

    sp = sub.add_parser("verify", help="run a symbolic verification")
    sp.add_argument("check", help=f"one of {', '.join(CHECKS)}, or all")
    sp.add_argument("-v", "--verbose", action="store_true")
    common(sp, fmt=False)
    sp.set_defaults(func=run_verify)

    sp = sub.add_parser("ramify", help="ramification data of a local action")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=run_ramify)

    sp = sub.add_parser("example", help="emit SurfaceData for an explicit curve family")
    sp.add_argument("family", choices=("plane", "space"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int, default=1, help="coefficient field F_{p^k}")
    sp.add_argument("--roots")
    sp.add_argument("--group-order", type=int)
    sp.add_argument("--a", help="raw F_{p^k} elements; sampled from --seed when omitted")
    common(sp, fmt=False)
    sp.set_defaults(func=run_example)

    sp = sub.add_parser("suite", help="run every acceptance criterion")
    sp.add_argument("--golden-dir", default=None)
    common(sp, fmt=False)
    sp.set_defaults(func=run_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IsotrivialError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
