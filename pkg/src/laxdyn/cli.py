"""Command-line front end.

Exit status: 0 success, 1 a checked law fails, 2 usage or input error,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import fixtures as fx
from ._order import ssorted, thaw
from .connectivity import four_structures
from .control import realization_to_solution, to_control_system, validate_control_system, verify_solution
from .dynamics import OpenDynamic, validate_open_dynamic
from .errors import LaxDynError, SearchBudgetExceeded, UnknownFixture
from .globaldyn import demanded, iso_check, j_global, opaque, responsible, transparent
from .interaction import InteractiveFamily, check_synchronization, classify_relation, classify_request
from .realization import default_cap, enumerate_realizations
from .serialize import (
    ParseError,
    control_system_to_json,
    dumps,
    dynamic_from_json,
    dynamic_to_json,
    family_from_json,
    family_to_json,
    realization_set_to_json,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 0
MODES = ("transparent", "demanded", "responsible", "opaque", "j")


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    mode: str | None = None
    j: str | None = None
    cap: int | None = None
    seed: int = DEFAULT_SEED
    format: str = "table"
    method: str = "search"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# loading


def load(ref: str):
    """An ``OpenDynamic`` or ``InteractiveFamily`` from a path or ``examples:<name>``."""
    if ref.startswith("examples:"):
        try:
            return fx.fixture(ref.split(":", 1)[1]).payload
        except UnknownFixture as e:
            raise ParseError(str(e.args[0])) from None
    try:
        with open(ref, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {ref}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{ref} is not valid JSON: {e}") from None
    if isinstance(doc, dict) and "members" in doc:
        return family_from_json(doc, resolve=_resolve_member)
    return dynamic_from_json(doc)


def _resolve_member(ref):
    obj = load(ref)
    if not isinstance(obj, OpenDynamic):
        raise ParseError(f"{ref} is not an open dynamic")
    return obj


def _dynamic(ref) -> OpenDynamic:
    obj = load(ref)
    if not isinstance(obj, OpenDynamic):
        raise UsageError(f"{ref} is a family; this command needs a single dynamic")
    return obj


def _family(ref) -> InteractiveFamily:
    obj = load(ref)
    if not isinstance(obj, InteractiveFamily):
        raise UsageError(f"{ref} is a single dynamic; this command needs an interactive family")
    return obj


# ---------------------------------------------------------------------------
# output helpers


def _fmt(x) -> str:
    return json.dumps(thaw(x), ensure_ascii=False)


def _table(rows: list, header: list) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[k]) for r in rows]) for k, h in enumerate(header)]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]) + "\n"


def _dynamic_table(A: OpenDynamic) -> str:
    rows = []
    for arr in A.engine.arrows:
        for l in A.params:
            for u, v in A.alpha(arr.name, l).pairs():
                rows.append([arr.name, _fmt(l), _fmt(u), _fmt(v)])
    return _table(rows, ["arrow", "param", "from", "to"])


def _emit(cfg: RunConfig, doc: dict, text: str, out) -> None:
    out.write(dumps(doc) if cfg.format == "json" else text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(cfg, out):
    obj = load(cfg.inputs[0])
    if isinstance(obj, InteractiveFamily):
        reports = {}
        bad = False
        for i in obj.index:
            r = validate_open_dynamic(obj.family.members[i])
            reports[str(i)] = str(r)
            bad = bad or not r.ok
        s = check_synchronization(obj.sync, obj.family)
        doc = {
            "kind": "family",
            "members": reports,
            "sync": str(s),
            "rigid": {str(k): v for k, v in s.info.get("rigid", {}).items()},
            "admissible": True,
            "ok": not bad and s.ok,
        }
        text = "".join(f"member {k}: {v}\n" for k, v in reports.items())
        text += f"synchronization: {s}\nrigid: {', '.join(f'{k}={v}' for k, v in doc['rigid'].items())}\n"
        text += "request: admissible\n"
        _emit(cfg, doc, text, out)
        return EXIT_OK if doc["ok"] else EXIT_VIOLATION
    r = validate_open_dynamic(obj)
    if r.ok:
        summary = "functorial (strict)" if r.info["strict"] else "lax, not strict"
    else:
        summary = "invalid"
    offside = {_fmt(s): ssorted(thaw(l) for l in ls) for s, ls in sorted(r.info["offside"].items(), key=lambda kv: _fmt(kv[0]))}
    doc = {
        "kind": "dynamic",
        "ok": r.ok,
        "summary": summary,
        "violation": str(r.first) if r.first else None,
        "classification": r.info["classification"],
        "offside": offside,
    }
    text = f"{'ok' if r.ok else 'violation: ' + str(r.first)}\n{summary}\nclassification: {r.info['classification']}\n"
    for s, ls in offside.items():
        text += f"offside: {s} for {', '.join(_fmt(l) for l in ls)}\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK if r.ok else EXIT_VIOLATION


def cmd_realize(cfg, out):
    A = _dynamic(cfg.inputs[0])
    r = validate_open_dynamic(A)
    if not r.ok:
        out.write(f"violation: {r.first}\n")
        return EXIT_VIOLATION
    rs = enumerate_realizations(A, cap=cfg.cap, method=cfg.method)
    doc = realization_set_to_json(rs)
    rows = [[_fmt(x.lam), _fmt(ssorted(x.defined)), _fmt(x.sigma)] for x in rs.all]
    text = _table(rows, ["lambda", "Def", "sigma"])
    text += f"realizations: {len(rs.all)}\noutgoing: {len(rs.outgoing)}\nnonempty outgoing: {len(rs.nonempty)}\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK


def cmd_classify_request(cfg, out):
    F = _family(cfg.inputs[0])
    req = classify_request(F.request)
    rel = classify_relation(F.coherent)
    doc = {"request": req, "coherent_part": rel, "sizes": {"request": len(F.request), "coherent": len(F.coherent), "M": len(F.M)}}
    text = "request:\n" + "".join(f"  {k}: {v}\n" for k, v in req.items())
    text += "coherent part:\n" + "".join(f"  {k}: {v}\n" for k, v in rel.items())
    text += f"|Q| = {len(F.request)}, |coherent part| = {len(F.coherent)}, |M| = {len(F.M)}\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK


def cmd_connectivity(cfg, out):
    F = _family(cfg.inputs[0])
    fs = four_structures(F)
    doc, text = {}, ""
    for name, K in fs.as_dict().items():
        sets = [thaw(k) for k in K.sorted_sets()]
        doc[name] = {"connected": sets, "classification": K.classify()}
        text += f"{name}: {K.classify()}\n  " + " ".join(_fmt(k) for k in sets) + "\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK


def cmd_global(cfg, out):
    F = _family(cfg.inputs[0])
    mode = cfg.mode or "transparent"
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}")
    if mode == "transparent":
        G = transparent(F)
    elif mode == "demanded":
        G = demanded(F)
    elif mode == "responsible":
        G = responsible(F)
    elif mode == "opaque":
        G = opaque(F)
    else:
        if cfg.j is None:
            raise UsageError("--mode j needs --j")
        J = [int(x) if x.strip().lstrip("-").isdigit() else x.strip() for x in cfg.j.split(",") if x.strip()]
        G = j_global(F, J)
    doc = dynamic_to_json(G)
    text = f"parameters: {len(G.params)}\n"
    text += "".join(f"states of {x}: {len(G.states[x])}\n" for x in G.engine.objects)
    text += _dynamic_table(G)
    _emit(cfg, doc, text, out)
    return EXIT_OK


def cmd_control_system(cfg, out):
    A = _dynamic(cfg.inputs[0])
    cs = to_control_system(A)
    rep = validate_control_system(cs)
    doc = control_system_to_json(cs)
    text = (
        f"H: {len(cs.H.objects)} objects, {len(cs.H.arrows)} arrows\n"
        f"G: {len(cs.G.objects)} objects, {len(cs.G.arrows)} arrows\n"
        f"laws: {rep}\n"
    )
    bad = 0
    for r in enumerate_realizations(A, cap=cfg.cap).all:
        if not verify_solution(cs, realization_to_solution(A, r, cs)).ok:
            bad += 1
    text += f"solutions from realizations failing verification: {bad}\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK if rep.ok and not bad else EXIT_VIOLATION


def cmd_examples(cfg, out):
    if not cfg.inputs:
        rows = [[n, fx.fixture(n).description] for n in fx.NAMES]
        if cfg.format == "json":
            out.write(dumps({n: d for n, d in rows}))
        else:
            out.write(_table(rows, ["name", "description"]))
        return EXIT_OK
    try:
        f = fx.fixture(cfg.inputs[0])
    except UnknownFixture as e:
        raise UsageError(str(e.args[0])) from None
    if isinstance(f.payload, InteractiveFamily):
        doc = family_to_json(f.payload)
    else:
        doc = dynamic_to_json(f.payload)
    out.write(dumps(doc))
    return EXIT_OK


def cmd_iso_check(cfg, out):
    if len(cfg.inputs) != 2:
        raise UsageError("iso-check needs two inputs")
    Gs = []
    for ref in cfg.inputs:
        obj = load(ref)
        Gs.append(demanded(obj) if isinstance(obj, InteractiveFamily) else obj)
    res = iso_check(Gs[0], Gs[1], cap=cfg.cap or 10**5)
    doc = {"isomorphic": res.found, "reason": res.reason}
    if res.found:
        doc["witness"] = {k: _pairs_sorted(v) for k, v in res.witness.items()}
    text = f"isomorphic: {res.found}\n"
    if res.found:
        for kind, m in doc["witness"].items():
            text += f"{kind}:\n" + "".join(f"  {_fmt(a)} -> {_fmt(b)}\n" for a, b in m)
    else:
        text += f"reason: {res.reason}\n"
    _emit(cfg, doc, text, out)
    return EXIT_OK if res.found else EXIT_VIOLATION


def _pairs_sorted(m):
    return [[thaw(a), thaw(b)] for a, b in sorted(m.items(), key=lambda kv: _fmt(kv[0]))]


COMMANDS = {
    "validate": (cmd_validate, 1),
    "realize": (cmd_realize, 1),
    "classify-request": (cmd_classify_request, 1),
    "connectivity": (cmd_connectivity, 1),
    "global": (cmd_global, 1),
    "control-system": (cmd_control_system, 1),
    "examples": (cmd_examples, None),
    "iso-check": (cmd_iso_check, 2),
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.cap is not None and cfg.cap <= 0:
        raise UsageError("--cap must be positive")
    fn, arity = COMMANDS[cfg.command]
    if arity is not None and len(cfg.inputs) != arity:
        raise UsageError(f"{cfg.command} takes {arity} input(s)")
    if cfg.cap is None:
        cfg.cap = default_cap()
    return fn(cfg, out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="search budget (default from LAXDYN_CAP or 10^6)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("--format", choices=("json", "table"), default="table")
    p = argparse.ArgumentParser(prog="laxdyn", description="Finite open dynamics, interactions and global dynamics.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "classify-request", "connectivity", "control-system"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("input")
    s = sub.add_parser("realize", parents=[common])
    s.add_argument("input")
    s.add_argument("--method", choices=("search", "brute"), default="search")
    s = sub.add_parser("global", parents=[common])
    s.add_argument("input")
    s.add_argument("--mode", choices=MODES, default="transparent")
    s.add_argument("--j", default=None, help="comma-separated members for --mode j")
    s = sub.add_parser("examples", parents=[common])
    s.add_argument("input", nargs="?")
    s = sub.add_parser("iso-check", parents=[common])
    s.add_argument("inputs", nargs=2)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    inputs = ns.inputs if hasattr(ns, "inputs") else ([ns.input] if getattr(ns, "input", None) else [])
    cfg = RunConfig(
        command=ns.command,
        inputs=list(inputs),
        mode=getattr(ns, "mode", None),
        j=getattr(ns, "j", None),
        cap=ns.cap,
        seed=ns.seed,
        format=ns.format,
        method=getattr(ns, "method", "search"),
    )
    try:
        return run(cfg)
    except SearchBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LaxDynError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
