"""Command line front end: ``schreier <module> <action> [options]``.

Every command prints one JSON document (``"schema": "v1"``) or, with
``--format csv``, a flat table.  Exit status: 0 success, 1 a check failed or a
computation could not finish, 2 bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import acceptance
from .audit import DEFAULT_GRID, AuditConfig, SeqSample, gamma_lower_search, gamma_profile, goodness_constant, stability_constant
from .blocks import convex_block, measure_sequence, random_prefix, set_mass, verify_axioms
from .config import DEFAULT_TOL, default_budget
from .descriptors import (
    BLOCK_GRAMMAR,
    FAMILY_GRAMMAR,
    SPACE_GRAMMAR,
    parse_block,
    parse_family,
    parse_prefix_text,
    parse_space,
)
from .errors import DescriptorError, OrdinalParseError, SchreierError
from .families import (
    as_set,
    contains,
    decompose,
    initial_segment,
    is_maximal,
    materialize,
    tree_rank,
)
from .kernels import BACKEND
from .norms import (
    DominationByBasis,
    DominationByLp,
    DualOf,
    Lp,
    SeqNormSpec,
    Tsirelson,
    domination_constant,
    dual_norm,
    evaluate,
    norming_set,
)
from .ordinals import parse_index
from .sequences import Prefix
from .vectors import Vec, format_scalar, to_scalar
from .witnesses import (
    NestedChain,
    diagonal_inclusion_check,
    diagonalize,
    star_witness,
    validate_cover,
    validate_star,
    veryeasy_cover,
    veryeasy_thin,
)

SCHEMA = "v1"

CITATIONS = {
    "family": ["Schreier families", "fine Schreier families", "regular families"],
    "block": ["repeated averages", "probability blocks"],
    "norm": ["sequence space norms", "domination constants"],
    "audit": ["good sets", "stability", "truncation constants"],
    "witness": ["diagonal sets", "index-matching witness", "thinned block covers"],
}


class UsageError(Exception):
    pass


# input parsing


def _set(text: str | None) -> tuple[int, ...]:
    if text is None or not text.strip():
        return ()
    try:
        return as_set(int(p) for p in text.replace(" ", "").strip("(){}[]").split(",") if p)
    except ValueError as exc:
        raise UsageError(f"bad set {text!r}; expected comma-separated positive integers") from exc


def _vec(text: str) -> Vec:
    """``"1:1/2,3:-1"`` or a JSON object ``{"1": "1/2"}``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return Vec({int(k): to_scalar(str(v)) for k, v in json.loads(text).items()})
        pairs = [p.split(":") for p in text.split(",") if p.strip()]
        return Vec({int(i): to_scalar(v) for i, v in pairs})
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad vector {text!r}; expected index:value pairs like 1:1/2,3:-1") from exc


def _vecs(text: str | None, path: str | None) -> list[Vec]:
    if path:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise UsageError("a sample file holds a JSON list of {index: coefficient} objects")
        return [Vec({int(k): to_scalar(str(v)) for k, v in item.items()}) for item in data]
    if text:
        return [_vec(part) for part in text.split(";")]
    raise UsageError("give vectors with --vecs 'i:a,...;i:a,...' or --sample file.json")


def _target(text: str):
    """``p`` for the l_p basis (``inf`` for c_0) or ``basis:<space>``."""
    if text.startswith("basis:"):
        return DominationByBasis(parse_space(text[len("basis:") :]))
    return DominationByLp(text)


# output


def _rows(obj) -> list[dict]:
    if isinstance(obj, dict) and isinstance(obj.get("rows"), list):
        return obj["rows"]
    flat = []
    for k, v in obj.items():
        flat.append({"key": k, "value": v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v)})
    return flat


def emit(obj: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv":
        rows = _rows(obj)
        cols: list[str] = []
        for r in rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(obj, indent=2, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, Fraction):
        return format_scalar(o)
    if isinstance(o, (tuple, set, frozenset)):
        return list(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    return str(o)


def _doc(module: str, **body) -> dict:
    return {"schema": SCHEMA, **body, "citations": CITATIONS.get(module, [])}


# commands


def cmd_family(a) -> tuple[dict, int]:
    fam = parse_family(a.fam)
    act = a.action
    if act == "contains":
        return _doc("family", result=contains(fam, _set(a.set))), 0
    if act == "maximal":
        F = _set(a.set)
        if not contains(fam, F):
            return _doc("family", result=False, witness={"reason": "not a member"}), 0
        return _doc("family", result=is_maximal(fam, F)), 0
    if act == "segment":
        return _doc("family", result=list(initial_segment(fam, parse_prefix_text(_need(a.prefix, "--prefix"))))), 0
    if act == "decompose":
        return _doc("family", result=[list(b) for b in decompose(fam, _set(a.set))]), 0
    if act == "materialize":
        ex = materialize(fam, _need(a.N, "--N"), a.budget)
        return _doc("family", result=[list(s) for s in ex], count=len(ex)), 0
    if act == "rank":
        return _doc("family", result=tree_rank(materialize(fam, _need(a.N, "--N"), a.budget))), 0
    raise UsageError(f"unknown family action {act}")


def cmd_block(a) -> tuple[dict, int]:
    block = parse_block(a.block)
    act = a.action
    if act == "measure":
        M = parse_prefix_text(_need(a.prefix, "--prefix"))
        mu = measure_sequence(block, M, a.n)[-1]
        return _doc("block", result=mu.to_json(), total=str(sum(mu.values()))), 0
    if act == "convex":
        seq = _vecs(a.vecs, a.sample)
        target = _set(a.set) if a.set else parse_prefix_text(_need(a.prefix, "--prefix or --set"))
        out = convex_block(block, target, seq, a.count)
        return _doc("block", result=[v.to_json() for v in out]), 0
    if act == "mass":
        M = parse_prefix_text(_need(a.prefix, "--prefix"))
        return _doc("block", result=str(set_mass(block, M, _set(a.set)))), 0
    if act == "verify":
        import random

        rng = random.Random(a.seed)
        samples = [(random_prefix(rng, rng.randint(1, 4), 10), rng.randint(1, 2)) for _ in range(a.count or 20)]
        rep = verify_axioms(block, samples, seed=a.seed)
        return _doc("block", result=rep.to_json()), 0 if rep.ok else 1
    raise UsageError(f"unknown block action {act}")


def cmd_norm(a) -> tuple[dict, int]:
    act = a.action
    if act == "eval":
        space = parse_space(_need(a.space, "--space"))
        return _doc("norm", **evaluate(space, _vec(_need(a.vec, "--vec")), a.budget).to_json()), 0
    if act == "dual":
        space = parse_space(_need(a.space, "--space"))
        if not isinstance(space, DualOf):
            raise UsageError("norm dual needs a space of the form dual(T(...),N=..)")
        return _doc("norm", **dual_norm(space, _vec(_need(a.vec, "--vec")), a.budget, tol=a.tol if a.tol != DEFAULT_TOL else 1e-6).to_json()), 0
    if act == "dominate":
        ground = parse_space(_need(a.space, "--space"))
        spec = SeqNormSpec(ground, _target(a.target), a.shift)
        res = domination_constant(_vecs(a.vecs, a.sample), spec, seed=a.seed, budget=a.budget)
        return _doc("norm", **res.to_json()), 0
    if act == "normingset":
        space = parse_space(_need(a.space, "--space"))
        if not isinstance(space, Tsirelson):
            raise UsageError("norming sets are built for T(mu=..,theta=..)")
        K = norming_set(space, _need(a.N, "--N"), a.budget)
        return _doc("norm", result=[f.to_json() for f in K], count=len(K)), 0
    raise UsageError(f"unknown norm action {act}")


def _audit_cfg(a) -> tuple[AuditConfig, SeqSample]:
    ground = parse_space(a.space) if a.space else Lp(2)
    spec = SeqNormSpec(ground, _target(a.target))
    sample = SeqSample(_vecs(a.vecs, a.sample), ground=ground)
    M = parse_prefix_text(a.prefix) if a.prefix else Prefix(tuple(range(1, len(sample) + 1)))
    cfg = AuditConfig(parse_block(a.block), a.zeta, a.shift, spec, M, budget=a.budget)
    return cfg, sample


def cmd_audit(a) -> tuple[dict, int]:
    cfg, sample = _audit_cfg(a)
    act = a.action
    if act == "goodness":
        ev = goodness_constant(_set(_need(a.set, "--set")), cfg, sample)
        return _doc("audit", result=ev.to_json()), 0
    if act == "stability":
        return _doc("audit", result=stability_constant(cfg, sample).to_json(), kind="truncation constant"), 0
    if act == "search":
        res = gamma_lower_search(cfg, sample, to_scalar(_need(a.D, "--D")))
        return _doc("audit", result=res.to_json()), 0
    if act == "profile":
        grid = a.grid.split(";") if a.grid else DEFAULT_GRID
        ks = tuple(int(k) for k in a.ks.split(",")) if a.ks else (0, 1, 2)
        prof = gamma_profile(cfg, sample, grid, ks)
        return _doc("audit", result=prof.to_json()), 0 if prof.ok else 1
    raise UsageError(f"unknown audit action {act}")


def cmd_witness(a) -> tuple[dict, int]:
    act = a.action
    if act == "diag":
        if a.chain:
            chain = NestedChain(tuple(parse_prefix_text(p) for p in a.chain.split(";")))
        else:
            chain = NestedChain.from_function(lambda n: Prefix.naturals(n), _need(a.N, "--N"))
        M = diagonalize(chain)
        body = {"result": list(M.elements)}
        code = 0
        if a.zeta:
            rep = diagonal_inclusion_check(chain, a.zeta, parse_family(a.fam or "S(1)"), _need(a.N, "--N"), a.budget)
            body["inclusion"] = rep.to_json()
            code = 0 if rep.ok else 1
        return _doc("witness", **body), code
    if act == "star":
        P, Q = parse_family(_need(a.P, "--P")), parse_family(_need(a.Q, "--Q"))
        M, L, K = (parse_prefix_text(_need(x, n)) for x, n in ((a.M, "--M"), (a.L, "--L"), (a.K, "--K")))
        w = star_witness(P, Q, M, L, K, a.m)
        val = validate_star(w, P, Q, M, L, K, a.m)
        replay = [
            f'family maximal --fam "{Q}" --set {",".join(map(str, w.F))}',
            f'family contains --fam "{P}" --set {",".join(map(str, w.E))}',
        ]
        return _doc("witness", result=w.to_json(), validation=val.to_json(), replay=replay), 0 if val.ok else 1
    if act == "veryeasy":
        M = parse_prefix_text(_need(a.M, "--M"))
        if a.set is not None:
            F = _set(a.set)
        else:
            T = veryeasy_thin(a.xi, M)
            i = _need(a.i, "--set or --i")
            F = tuple(T.get(j) for j in range(i, i + T.get(i)))
        cover = veryeasy_cover(a.xi, a.mu, M, F)
        val = validate_cover(cover, a.xi, F)
        replay = [f'block measure --block "RA({a.xi})" --prefix "{cover.N.describe()}" --n {n}' for n in cover.H]
        return _doc("witness", result=cover.to_json(), validation=val.to_json(), replay=replay), 0 if val.ok else 1
    raise UsageError(f"unknown witness action {act}")


def cmd_selftest(a) -> tuple[dict, int]:
    only = {int(x) for x in a.only.split(",")} if a.only else None
    results = acceptance.run_all(only)
    ok = all(r.status != "fail" for r in results)
    body = {
        "backend": BACKEND,
        "ok": ok,
        "rows": [r.to_json() for r in results],
    }
    if a.verbose:
        for r in results:
            print(r.line(), file=sys.stderr)
    return {"schema": SCHEMA, **body}, 0 if ok else 1


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"missing {flag}")
    return value


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (default: $SCHREIER_BUDGET or 10^7)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = argparse.ArgumentParser(prog="schreier", description="Schreier families, repeated averages and sequence-space norms.")
    sub = p.add_subparsers(dest="module", required=True)

    f = sub.add_parser("family", parents=[common], help=FAMILY_GRAMMAR)
    f.add_argument("action", choices=("contains", "maximal", "segment", "decompose", "materialize", "rank"))
    f.add_argument("--fam", required=True, help=FAMILY_GRAMMAR)
    f.add_argument("--set")
    f.add_argument("--prefix")
    f.add_argument("--N", type=int)

    b = sub.add_parser("block", parents=[common], help=BLOCK_GRAMMAR)
    b.add_argument("action", choices=("measure", "convex", "mass", "verify"))
    b.add_argument("--block", required=True, help=BLOCK_GRAMMAR)
    b.add_argument("--prefix")
    b.add_argument("--set")
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--count", type=int)
    b.add_argument("--vecs")
    b.add_argument("--sample")

    n = sub.add_parser("norm", parents=[common], help=SPACE_GRAMMAR)
    n.add_argument("action", choices=("eval", "dual", "dominate", "normingset"))
    n.add_argument("--space", help=SPACE_GRAMMAR)
    n.add_argument("--vec")
    n.add_argument("--vecs")
    n.add_argument("--sample")
    n.add_argument("--target", default="inf", help="p for the l_p basis, or basis:<space>")
    n.add_argument("--shift", type=int, default=0)
    n.add_argument("--N", type=int)

    au = sub.add_parser("audit", parents=[common])
    au.add_argument("action", choices=("goodness", "stability", "search", "profile"))
    au.add_argument("--block", default="dirac", help=BLOCK_GRAMMAR)
    au.add_argument("--zeta", default="1")
    au.add_argument("--shift", type=int, default=0, help="the shift k of the target basis")
    au.add_argument("--space", help="ground space (default l2)")
    au.add_argument("--target", default="inf")
    au.add_argument("--sample")
    au.add_argument("--vecs")
    au.add_argument("--prefix")
    au.add_argument("--set")
    au.add_argument("--D")
    au.add_argument("--grid", help="ordinals separated by ';'")
    au.add_argument("--ks")

    w = sub.add_parser("witness", parents=[common])
    w.add_argument("action", choices=("diag", "star", "veryeasy"))
    w.add_argument("--chain", help="prefixes separated by ';'")
    w.add_argument("--zeta")
    w.add_argument("--fam")
    w.add_argument("--N", type=int)
    w.add_argument("--P")
    w.add_argument("--Q")
    w.add_argument("--M")
    w.add_argument("--L")
    w.add_argument("--K")
    w.add_argument("--m", type=int, default=0)
    w.add_argument("--xi", default="1")
    w.add_argument("--mu", default="1")
    w.add_argument("--set")
    w.add_argument("--i", type=int)

    s = sub.add_parser("selftest", parents=[common])
    s.add_argument("--only", help="comma-separated check ids")
    s.add_argument("--verbose", action="store_true")
    return p


COMMANDS = {
    "family": cmd_family,
    "block": cmd_block,
    "norm": cmd_norm,
    "audit": cmd_audit,
    "witness": cmd_witness,
    "selftest": cmd_selftest,
}


def run(argv: list[str] | None = None, out=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.budget is not None:
        if a.budget <= 0:
            parser.print_usage(sys.stderr)
            return 2
        os.environ["SCHREIER_BUDGET"] = str(a.budget)
    a.budget = default_budget()
    try:
        if getattr(a, "zeta", None) and a.module == "audit":
            a.zeta = parse_index(a.zeta)
        doc, code = COMMANDS[a.module](a)
    except (UsageError, DescriptorError, OrdinalParseError) as exc:
        emit({"schema": SCHEMA, "error": str(exc), "kind": "usage"}, a.format, out)
        return 2
    except SchreierError as exc:
        emit({"schema": SCHEMA, "error": str(exc), "kind": type(exc).__name__}, a.format, out)
        return 1
    except ValueError as exc:
        emit({"schema": SCHEMA, "error": str(exc), "kind": "usage"}, a.format, out)
        return 2
    emit(doc, a.format, out)
    return code


def main() -> None:
    sys.exit(run())
