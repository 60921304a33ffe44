"""Command line entry point: ``nauslander <command> <instance> [options]``.

Exit codes: 0 when every verdict passes, 1 on a failed verdict, 2 on an
invalid instance or an internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from ..austransform import InvariantViolation, verify_higher_auslander
from ..exactfield import ContractViolation
from ..nabelian import check_axioms
from ..quivrep import ext_dims
from ..subcategory import SubcategoryError, SubcategorySpec
from ..tilting import ExtTable, IncompleteEnumeration, is_n_cluster_tilting, search_cluster_tilting
from .cache import DiskCache, cached_ext_dims
from .instance import Instance, InstanceError, parse_instance

REPORT_SCHEMA = "nauslander.report/1"
COMMANDS = ("check-axioms", "find-ct", "verify-auslander", "report")

log = logging.getLogger("nauslander")


@dataclass
class Options:
    n: Optional[int] = None
    seed: int = 0
    cache: bool = True
    fmt: str = "text"
    subcategory: str = "auto"
    cache_dir: Optional[str] = None
    spot_check: float = 0.1


class VerdictFailure(Exception):
    """Raised when a pipeline cannot produce its object (e.g. no subcategory found)."""


class Session:
    """Shared state of one run: instance, enumeration, Ext table and cache."""

    def __init__(self, inst: Instance, opts: Options):
        self.inst = inst
        self.opts = opts
        self.n = opts.n if opts.n is not None else inst.n
        self.cache = (DiskCache(opts.cache_dir, spot_check=opts.spot_check, seed=opts.seed)
                      if opts.cache else None)
        self.enum = inst.enumeration(rng=opts.seed)
        compute = (lambda M, N, k: cached_ext_dims(self.cache, ext_dims, M, N, k))
        self.table = ExtTable(self.enum.modules, max(self.n - 1, 1), compute)
        self._ct = None

    def ct_subcategories(self):
        if self._ct is None:
            self._ct = search_cluster_tilting(self.inst.algebra, self.n, self.enum,
                                              rng=self.opts.seed, ext_table=self.table)
        return self._ct

    def subcategory(self) -> SubcategorySpec:
        sel = self.opts.subcategory
        alg = self.inst.algebra
        if sel == "all":
            return SubcategorySpec(alg, self.enum.modules, name="all", rng=self.opts.seed)
        if sel == "auto":
            found = self.ct_subcategories()
            if not found:
                raise VerdictFailure(f"no {self.n}-cluster tilting subcategory found")
            return found[0]
        return SubcategorySpec(alg, self.inst.subcategory_modules(sel), name=sel,
                               rng=self.opts.seed)


def _header(s: Session, command: str) -> dict:
    return {"schema": REPORT_SCHEMA, "command": command, "instance": s.inst.name,
            "n": s.n, "seed": s.opts.seed, "subcategory_selector": s.opts.subcategory,
            "ambient": {"indecomposables": [X.name for X in s.enum.modules],
                        "complete": s.enum.complete, "dim_bound": s.enum.dim_bound}}


def cmd_find_ct(s: Session) -> Tuple[bool, dict]:
    found = s.ct_subcategories()
    certs = [is_n_cluster_tilting(M, s.n, s.enum, s.table).to_dict() for M in found]
    out = _header(s, "find-ct")
    out["subcategories"] = [M.describe() for M in found]
    out["certificates"] = certs
    out["count"] = len(found)
    return bool(found), out


def cmd_check_axioms(s: Session) -> Tuple[bool, dict]:
    M = s.subcategory()
    rep = check_axioms(M, s.n, seed=s.opts.seed)
    out = _header(s, "check-axioms")
    out["subcategory"] = M.describe()
    out["axioms"] = rep.to_dict()
    return rep.passed, out


def cmd_verify(s: Session) -> Tuple[bool, dict]:
    M = s.subcategory()
    cert = is_n_cluster_tilting(M, s.n, s.enum, s.table)
    rep = verify_higher_auslander(s.inst.algebra, M, s.n, s.enum,
                                  gamma_dim_bound=s.inst.corpus["gamma_dim_bound"],
                                  seed=s.opts.seed, ct_certificate=cert, instance=s.inst.name)
    out = _header(s, "verify-auslander")
    out["subcategory"] = M.describe()
    out["theorem"] = rep.to_dict()
    return rep.passed, out


def cmd_report(s: Session) -> Tuple[bool, dict]:
    out = _header(s, "report")
    ok_ct, ct = cmd_find_ct(s)
    out["find_ct"] = {"count": ct["count"], "subcategories": ct["subcategories"]}
    ok = ok_ct
    try:
        ok_ax, ax = cmd_check_axioms(s)
        ok_v, v = cmd_verify(s)
        out["check_axioms"] = ax["axioms"]
        out["verify_auslander"] = v["theorem"]
        ok = ok and ok_ax and ok_v
    except VerdictFailure as exc:
        out["error"] = str(exc)
        ok = False
    return ok, out


PIPELINES = {"check-axioms": cmd_check_axioms, "find-ct": cmd_find_ct,
             "verify-auslander": cmd_verify, "report": cmd_report}


def canonical_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def render_text(report: dict) -> str:
    cmd = report.get("command", "?")
    if "instance" not in report:
        return f"{cmd}: error: {report.get('error')}\n  verdict: FAIL\n"
    lines = [f"{cmd}: instance {report['instance']} n={report['n']} seed={report['seed']}"]
    amb = report.get("ambient", {})
    if amb:
        lines.append(f"  ambient indecomposables ({'complete' if amb['complete'] else 'partial'}): "
                     + ", ".join(amb["indecomposables"]))
    if "subcategory" in report:
        lines.append("  subcategory: " + ", ".join(m["name"] for m in
                                                     report["subcategory"]["members"]))
    if "count" in report:
        lines.append(f"  cluster tilting subcategories: {report['count']}")
        for sub in report["subcategories"]:
            lines.append("    - " + ", ".join(m["name"] for m in sub["members"]))
    ax = report.get("axioms") or report.get("check_axioms")
    if ax:
        for k, v in sorted(ax["verdicts"].items()):
            lines.append(f"  {k}: {'pass' if v else 'FAIL'}")
        lines.append(f"  morphisms tested: {ax['counts']['morphisms']}")
        for f in ax["failures"][:3]:
            lines.append(f"  witness {f['axiom']}: {f.get('morphism')} {f['detail']}")
    th = report.get("theorem") or report.get("verify_auslander")
    if th:
        for k, v in th["groups"].items():
            lines.append(f"  {k}: {'pass' if v else 'FAIL'}")
        sm = th["summary"]
        lines.append(f"  dim Γ = {sm['gamma_dimension']}, effaceable simples = "
                     f"{sm['effaceable_simples']}, non-effaceable = {sm['non_effaceable_simples']}")
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    lines.append(f"  verdict: {'PASS' if report.get('pass') else 'FAIL'}")
    return "\n".join(lines) + "\n"


def run(command: str, instance, opts: Options) -> Tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    if command not in PIPELINES:
        raise ValueError(f"unknown command {command!r}")
    try:
        inst = instance if isinstance(instance, Instance) else parse_instance(instance)
        s = Session(inst, opts)
        try:
            ok, report = PIPELINES[command](s)
        except VerdictFailure as exc:
            ok, report = False, {**_header(s, command), "error": str(exc)}
    except (InstanceError, SubcategoryError, IncompleteEnumeration) as exc:
        return 2, {"schema": REPORT_SCHEMA, "command": command, "error": str(exc),
                   "kind": getattr(exc, "kind", type(exc).__name__), "pass": False}
    except (InvariantViolation, ContractViolation) as exc:
        return 2, {"schema": REPORT_SCHEMA, "command": command, "pass": False,
                   "error": f"invariant violation: {exc}", "kind": "invariant-violation"}
    report["pass"] = bool(ok)
    if s.cache is not None:
        log.info("cache %s", s.cache.stats())
    return (0 if ok else 1), report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nauslander",
                                 description="n-abelian categories, cluster tilting and the "
                                             "higher Auslander formula on bound quiver algebras")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("instance", help="instance JSON file, or the name of a bundled one")
    ap.add_argument("--n", type=int, default=None, help="override the instance's n")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-cache", action="store_true", help="do not read or write the disk cache")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--subcategory", default="auto",
                    help="named subcategory of the instance, 'all', or 'auto' (first found)")
    ap.add_argument("--out", default=None,
                    help="also write <out>.json and <out>.txt")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    opts = Options(n=args.n, seed=args.seed, cache=not args.no_cache, fmt=args.format,
                   subcategory=args.subcategory)
    if opts.n is not None and opts.n < 1:
        print("--n must be >= 1", file=sys.stderr)
        return 2
    code, report = run(args.command, args.instance, opts)
    text = canonical_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(text)
    if args.out:
        Path(f"{args.out}.json").write_text(canonical_json(report))
        Path(f"{args.out}.txt").write_text(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
