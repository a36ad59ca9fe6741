"""Command-line front end.

Manifests are JSON objects ``{"space": {...}, "word": "D1 D2 D1", "seed": [...]}``
with optional ``"q"``, ``"cartan"`` (a type name such as ``"A2"`` or
``{"matrix": [[...]]}``) and ``"lambda"`` (highest weight in alpha
coordinates).  A degenerated pipeline may carry ``"original": {"space",
"word", "seed"}`` and ``"groups"``; ``check`` then also compares the
projected character against the original pipeline.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from .chain import Chain, indicator, support_points
from .characters import LaurentPolynomial, apply_T_word, chi, project_blocks
from .errors import DemazureError, DimensionUnsupported, WordError
from .operators import D, apply_word, format_word, parse_word
from .polytope import hull_mesh_3d
from .roots import CartanData, cartan_type, dominant_conjugate, freudenthal_multiplicities, weyl_dimension
from .string_space import StringSpace, fraction_json, to_fraction, weight

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNDEFINED = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _encode(obj, level=0) -> str:
    """JSON with one item per line, except lists of scalars which stay inline."""
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj)
        items = [pad + _encode(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def _dump(obj) -> str:
    return _encode(obj) + "\n"


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _vector(text: str) -> list[Fraction]:
    try:
        return [to_fraction(v) for v in text.replace(" ", "").split(",") if v != ""]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc


def _cartan(spec) -> CartanData:
    if isinstance(spec, str):
        return cartan_type(spec)
    if "name" in spec and "matrix" not in spec:
        return cartan_type(spec["name"])
    return CartanData(tuple(tuple(r) for r in spec["matrix"]), spec.get("name", ""))


def _cartan_json(c: CartanData):
    return {"name": c.name, "matrix": [list(r) for r in c.matrix]}


def _manifest(space: StringSpace, word, seed, **extra) -> dict:
    out = {
        "space": space.to_json(),
        "word": " ".join(format_word(parse_word(word))),
        "seed": [fraction_json(v) for v in seed],
    }
    for k, v in extra.items():
        if v is not None:
            out[k] = v
    return out


class Run:
    """A parsed manifest, with command-line overrides applied."""

    def __init__(self, data: dict, word=None, seed=None):
        try:
            self.space = StringSpace.from_json(data["space"])
            self.word = parse_word(word if word is not None else data.get("word", ""))
            self.seed = tuple(seed if seed is not None else (to_fraction(v) for v in data["seed"]))
        except KeyError as exc:
            raise UsageError(f"manifest is missing {exc}") from exc
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad manifest: {exc}") from exc
        if len(self.seed) != self.space.dim:
            raise UsageError(f"seed has dimension {len(self.seed)}, space has {self.space.dim}")
        self.q = data.get("q")
        self.cartan = _cartan(data["cartan"]) if data.get("cartan") else None
        self.lam = tuple(to_fraction(v) for v in data["lambda"]) if data.get("lambda") is not None else None
        self.original = data.get("original")
        self.groups = data.get("groups")

    def apply(self, trace=False):
        return apply_word(self.space, self.word, self.seed, q=self.q, trace=trace)

    def oracle(self) -> LaurentPolynomial:
        start = chi(indicator(self.space, self.seed))
        f = start
        for t in reversed(self.word):
            if isinstance(t, D):
                f = apply_T_word(self.space, [t.block], f)
            else:
                f = f * LaurentPolynomial.monomial(weight(self.space, t.shift))
        return f


def _chain_payload(chain: Chain) -> dict:
    out = chain.to_json()
    out["lattice_points"] = len(support_points(chain, on_standard_lattice=True))
    return out


# -- commands ----------------------------------------------------------------

def cmd_space_validate(args) -> int:
    data = _load_json(args.file)
    if "space" in data:
        data = data["space"]
    try:
        space = StringSpace.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"not a string space: {exc}") from exc
    _write(_dump({"valid": True, "rank": space.rank, "dim": space.dim, **space.to_json()}), args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    run = Run(_load_json(args.manifest), args.word, _vector(args.seed) if args.seed else None)
    if args.trace:
        final, steps = run.apply(trace=True)
        payload = {"final": _chain_payload(final), "intermediates": [_chain_payload(c) for c in steps]}
    else:
        final = run.apply()
        payload = {"final": _chain_payload(final)}
    if args.oracle:
        ok = chi(final) == run.oracle()
        payload["oracle_agrees"] = ok
    _write(_dump(payload), args.out)
    if args.oracle and not payload["oracle_agrees"]:
        return EXIT_MISMATCH
    return EXIT_OK


def _poly_report(f: LaurentPolynomial) -> dict:
    return {"terms": len(f), "total": f.total(), "text": str(f), "json": f.to_json()}


def cmd_check(args) -> int:
    run = Run(_load_json(args.manifest), args.word, _vector(args.seed) if args.seed else None)
    if args.chain:
        try:
            chain = Chain.from_json(_load_json(args.chain))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad chain file: {exc}") from exc
    else:
        chain = run.apply()
    geo = chi(chain)
    alg = run.oracle()
    checks = {"oracle": geo == alg}
    report = {"geometric": _poly_report(geo), "oracle": _poly_report(alg)}
    diffs = []
    d = geo.first_difference(alg)
    if d is not None:
        diffs.append(("oracle", d))
    if run.lam is not None and run.cartan is not None:
        mult = freudenthal_multiplicities(run.cartan, run.lam)
        freud = LaurentPolynomial.from_fraction_terms(run.cartan.rank, mult)
        dim = weyl_dimension(run.cartan, run.lam)
        report["weyl_dimension"] = dim
        checks["freudenthal"] = geo.nvars == freud.nvars and geo == freud
        checks["weyl_dimension"] = geo.total() == dim
        if geo.nvars == freud.nvars:
            d = geo.first_difference(freud)
            if d is not None:
                diffs.append(("freudenthal", d))
    if run.original is not None and run.groups is not None:
        orig = Run(run.original)
        projected = project_blocks(geo, [tuple(g) for g in run.groups])
        target = chi(orig.apply())
        checks["projection"] = projected == target
        d = projected.first_difference(target)
        if d is not None:
            diffs.append(("projection", d))
    ok = all(checks.values())
    report["checks"] = checks
    report["result"] = "PASS" if ok else "FAIL"
    if diffs:
        name, (e, a, b) = diffs[0]
        report["first_difference"] = {"against": name, "exp": [fraction_json(v) for v in e], "chain": a, "other": b}
    _write(_dump(report), args.out)
    if ok:
        print(f"PASS: {len(geo)} terms, value {geo.total()} at t=1", file=sys.stderr)
        return EXIT_OK
    if diffs:
        name, (e, a, b) = diffs[0]
        mono = " ".join(f"t_{k + 1}^{fraction_json(v)}" for k, v in enumerate(e)) or "1"
        print(f"FAIL ({name}): coefficient of {mono} is {a} in the chain, {b} expected", file=sys.stderr)
    else:
        print("FAIL", file=sys.stderr)
    return EXIT_MISMATCH


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else repr(float(v))


def _off_text(pieces, q: int, coords) -> str:
    verts_all, faces_all, notes = [], [], []
    for idx, points in pieces:
        proj = sorted({tuple(p[c] for c in coords) for p in points})
        verts, faces = hull_mesh_3d(proj)
        base = len(verts_all)
        notes.append(f"# piece {idx}: vertices {base}..{base + len(verts) - 1}, {len(faces)} faces")
        verts_all.extend(verts)
        faces_all.extend(tuple(base + i for i in f) for f in faces)
    lines = ["OFF", *notes, f"{len(verts_all)} {len(faces_all)} 0"]
    lines += [" ".join(_fmt(Fraction(c, q)) for c in v) for v in verts_all]
    lines += ["3 " + " ".join(str(i) for i in f) for f in faces_all]
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    run = Run(_load_json(args.manifest), args.word, _vector(args.seed) if args.seed else None)
    chain = run.apply()
    fmt = args.format
    if fmt == "json":
        _write(_dump(_chain_payload(chain)), args.out)
        return EXIT_OK
    if fmt == "points":
        q = chain.q
        pts = [
            {"x": [fraction_json(Fraction(c, q)) for c in p], "value": v}
            for p, v in sorted(chain.pointwise().items())
            if chain.on_character_lattice(p)
        ]
        _write(_dump({"q": q, "shift": [fraction_json(s) for s in chain.shift], "points": pts}), args.out)
        return EXIT_OK
    d = chain.space.dim
    if args.project:
        coords = tuple(int(v) for v in args.project.split(","))
        if len(coords) != 3 or any(not 0 <= c < d for c in coords):
            raise UsageError(f"--project needs three coordinates in 0..{d - 1}")
    elif d == 3:
        coords = (0, 1, 2)
    else:
        raise DimensionUnsupported(f"off export needs dimension 3 or --project (dimension is {d})")
    if not args.out:
        raise UsageError("off export needs --out")
    pos = [(k, p.points) for k, (c, p) in enumerate(chain.terms) if c > 0]
    neg = [(k, p.points) for k, (c, p) in enumerate(chain.terms) if c < 0]
    out = Path(args.out)
    out.write_text(_off_text(pos, chain.q, coords))
    if neg:
        out.with_name(out.stem + ".neg.off").write_text(_off_text(neg, chain.q, coords))
    return EXIT_OK


# -- builders ----------------------------------------------------------------

def cmd_gz(args) -> int:
    lam = _vector(args.lam)
    n = len(lam)
    cons.gz_direct(lam)  # validates ordering
    space = cons.gz_space(n)
    seed = cons.gz_seed(lam)
    cartan = cartan_type(f"A{n - 1}")
    top = dominant_conjugate(cartan, weight(space, seed))
    out = _manifest(space, cons.gz_word(n), seed, cartan=_cartan_json(cartan), **{"lambda": [fraction_json(v) for v in top]})
    if args.direct:
        out["direct"] = cons.gz_direct(lam).to_json()
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_sp4(args) -> int:
    if args.seed:
        seed = tuple(_vector(args.seed))
        if len(seed) != 4:
            raise UsageError("--seed needs four coordinates a,b,c,d")
    elif args.lam:
        lam = _vector(args.lam)
        if len(lam) != 2:
            raise UsageError("--lambda needs two Dynkin labels")
        # a_1 omega_1 + a_2 omega_2 with alpha_1 short
        seed = cons.sp4_seed(lam[0] / 2, lam[1])
    else:
        raise UsageError("sp4 needs --seed or --lambda")
    l1, l2 = cons.sp4_lambdas(*seed)
    if l1 < 0 or l2 < 0:
        raise cons.NotDominant(f"lambda_1={l1}, lambda_2={l2} must be nonnegative")
    space = cons.sp4_space()
    cartan = cartan_type("C2")
    top = dominant_conjugate(cartan, weight(space, seed))
    out = _manifest(space, cons.SP4_WORD, seed, cartan=_cartan_json(cartan), **{"lambda": [fraction_json(v) for v in top]})
    out["inequalities"] = cons.sp4_polytope(*seed).to_json()
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_twisted_cube(args) -> int:
    seed = tuple(_vector(args.seed))
    if len(seed) != 3:
        raise UsageError("--seed needs three coordinates a,b,c")
    base = cons.sl3_space()
    space, groups = cons.full_degeneration(base)
    _, flat = cons.tilde_word("D1 D2 D1", base.dims)
    P, Q = cons.twisted_cube_polytopes(*seed)
    out = _manifest(space, flat, seed)
    out["original"] = _manifest(base, "D1 D2 D1", seed)
    out["groups"] = [list(g) for g in groups]
    out["P"] = P.to_json()
    out["Q"] = Q.to_json()
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_degenerate(args) -> int:
    data = _load_json(args.manifest)
    run = Run(data)
    if args.block is not None:
        space = cons.degenerate(run.space, args.block)
        _write(_dump({"space": space.to_json()}), args.out)
        return EXIT_OK
    space, groups = cons.full_degeneration(run.space)
    pairs, flat = cons.tilde_word(run.word, run.space.dims)
    out = _manifest(space, flat, run.seed)
    out["original"] = _manifest(run.space, run.word, run.seed)
    out["groups"] = [list(g) for g in groups]
    out["tilde"] = [[k, s] for k, s in pairs]
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_bott_tower(args) -> int:
    try:
        B = json.loads(args.matrix)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--matrix is not JSON: {exc}") from exc
    space = cons.bott_tower_space(B)
    seed = _vector(args.seed) if args.seed else [0] * space.dim
    if len(seed) != space.dim:
        raise UsageError(f"seed needs {space.dim} coordinates")
    _write(_dump(_manifest(space, cons.bott_tower_word(space.dim), seed)), args.out)
    return EXIT_OK


def cmd_bott_samelson(args) -> int:
    cartan = _cartan(json.loads(args.cartan) if args.cartan.startswith("{") else args.cartan)
    letters = [int(v) for v in args.letters.split(",")]
    shifts = None
    if args.shifts:
        shifts = [None if s.strip() in ("", "0") else _vector(s) for s in args.shifts.split(";")]
    space, word = cons.bott_samelson(cartan, letters, shifts)
    seed = _vector(args.seed) if args.seed else [0] * space.dim
    if len(seed) != space.dim:
        raise UsageError(f"seed needs {space.dim} coordinates")
    out = _manifest(space, word, seed, cartan=_cartan_json(cartan))
    _write(_dump(out), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="convex-demazure", description="Convex-geometric Demazure operators on string spaces")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("space", help="string space utilities")
    ssub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = ssub.add_parser("validate", help="check a string space (or manifest) file")
    v.add_argument("file")
    v.add_argument("--out")
    v.set_defaults(func=cmd_space_validate)

    def run_args(q):
        q.add_argument("manifest")
        q.add_argument("--word", help="override the manifest word, e.g. 'D1 D2 D1'")
        q.add_argument("--seed", help="override the seed, e.g. --seed=0,-3,-3")
        q.add_argument("--out")

    a = sub.add_parser("apply", help="run an operator word on a seed")
    run_args(a)
    a.add_argument("--trace", action="store_true", help="also write every intermediate chain")
    a.add_argument("--oracle", action="store_true", help="compare with the symbolic operators")
    a.set_defaults(func=cmd_apply)

    c = sub.add_parser("check", help="compare the character two ways")
    run_args(c)
    c.add_argument("--chain", help="check this chain file instead of recomputing it")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("export", help="write points, chain JSON or OFF meshes")
    run_args(e)
    e.add_argument("--format", choices=("json", "points", "off"), default="json")
    e.add_argument("--project", help="three 0-based coordinates for off export, e.g. 0,2,5")
    e.set_defaults(func=cmd_export)

    g = sub.add_parser("gz", help="Gelfand-Zetlin manifest")
    g.add_argument("--lambda", dest="lam", required=True, help="non-increasing entries, e.g. --lambda=3,0,-3")
    g.add_argument("--direct", action="store_true", help="include the interlacing inequalities")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gz)

    s4 = sub.add_parser("sp4", help="Sp(4) manifest")
    s4.add_argument("--seed", help="a,b,c,d")
    s4.add_argument("--lambda", dest="lam", help="Dynkin labels a_1,a_2; 1,1 is omega_1 + omega_2")
    s4.add_argument("--out")
    s4.set_defaults(func=cmd_sp4)

    t = sub.add_parser("twisted-cube", help="SL(3) twisted cube manifest")
    t.add_argument("--seed", required=True, help="a,b,c, e.g. --seed=0,-3,-3")
    t.add_argument("--out")
    t.set_defaults(func=cmd_twisted_cube)

    dg = sub.add_parser("degenerate", help="degenerate a manifest's space")
    dg.add_argument("manifest")
    dg.add_argument("--block", type=int, help="split only this block (default: full degeneration with the tilde word)")
    dg.add_argument("--out")
    dg.set_defaults(func=cmd_degenerate)

    bt = sub.add_parser("bott-tower", help="Bott tower manifest")
    bt.add_argument("--matrix", required=True, help="strictly upper triangular JSON matrix, e.g. '[[0,1],[0,0]]'")
    bt.add_argument("--seed")
    bt.add_argument("--out")
    bt.set_defaults(func=cmd_bott_tower)

    bs = sub.add_parser("bott-samelson", help="Bott-Samelson manifest")
    bs.add_argument("--cartan", required=True, help="type name (A2, C2, ...) or JSON {\"matrix\": ...}")
    bs.add_argument("--letters", required=True, help="simple roots, e.g. 1,2,1")
    bs.add_argument("--shifts", help="';'-separated translation vectors, one per letter (0 for none)")
    bs.add_argument("--seed")
    bs.add_argument("--out")
    bs.set_defaults(func=cmd_bott_samelson)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WordError as exc:
        print(f"error: operator undefined at token {exc.token_index} ({exc.token}): {exc.cause}", file=sys.stderr)
        return EXIT_UNDEFINED
    except DemazureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
