"""Command-line surface.

Subcommands: ``presets`` (catalog), ``weights``, ``recurrence``, ``reparam``,
``verify``, ``moments``, and ``job`` (run every artifact a JobSpec file
selects).  All numeric output is rendered as decimal strings at working
precision, so artifacts are deterministic and re-runnable bit-identically.

Exit codes: 0 success; 1 bad input; 2 verification failure; 3 convergence
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from . import connection, presets, reparam, verify, weights
from .errors import (
    DegenerateNorm,
    InsufficientNodes,
    NoConvergence,
    QOrthoError,
)
from .lattice import FamilyParameters, build_sequences
from .qnum import QContext

ARTIFACTS = ("weights", "recurrence", "reparam", "verify", "moments")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _dec(x: Any, ctx: QContext) -> str:
    """Decimal-string rendering at full working precision."""
    if ctx.is_double:
        return repr(float(x))
    return mpmath.nstr(x, ctx.precision, strip_zeros=True)


@dataclass(frozen=True)
class JobSpec:
    """Declarative job description loadable from JSON.

    family is either {"preset": name, "args": [...numbers]} or
    {"params": [a1, a2, b0, b1, b2, s1, s2], "finite_n": optional int}.
    Serialization is canonical (sorted keys, numbers as decimal strings),
    so parse -> serialize is a fixed point.
    """

    family: Dict[str, Any]
    q: str
    precision: int = 50
    tol: Optional[str] = None
    nmax: int = 8
    max_nodes: int = 120
    outputs: Tuple[str, ...] = ()

    @classmethod
    def from_json(cls, text: str) -> "JobSpec":
        raw = json.loads(text)
        if not isinstance(raw, dict) or "family" not in raw or "q" not in raw:
            raise UsageError("job spec must be a JSON object with 'family' and 'q'")
        outputs = tuple(raw.get("outputs", ()))
        for sel in outputs:
            if sel not in ARTIFACTS:
                raise UsageError(f"unknown artifact selector {sel!r}")
        return cls(
            family=raw["family"],
            q=str(raw["q"]),
            precision=int(raw.get("precision", 50)),
            tol=None if raw.get("tol") is None else str(raw["tol"]),
            nmax=int(raw.get("nmax", 8)),
            max_nodes=int(raw.get("max_nodes", 120)),
            outputs=outputs,
        )

    def to_json(self) -> str:
        obj: Dict[str, Any] = {
            "family": self.family,
            "max_nodes": self.max_nodes,
            "nmax": self.nmax,
            "outputs": list(self.outputs),
            "precision": self.precision,
            "q": self.q,
        }
        if self.tol is not None:
            obj["tol"] = self.tol
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _add_family_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="preset family name (see `presets list`)")
    p.add_argument("--args", default="", help="comma-separated preset arguments")
    p.add_argument(
        "--params",
        help="raw vector a1,a2,b0,b1,b2,s1,s2 (non-preset families)",
    )
    p.add_argument(
        "--finite-n",
        type=int,
        default=None,
        help="declare the family finite with termination index N (raw vectors)",
    )
    p.add_argument("--job", help="JobSpec JSON file supplying family/q/precision")
    p.add_argument("--q", help="base q (required unless supplied by --job)")
    p.add_argument("--precision", type=int, default=None, help="working digits")
    p.add_argument("--tol", default=None, help="series truncation tolerance")
    p.add_argument("--max-terms", type=int, default=5000)
    p.add_argument("-o", "--output", help="write the artifact to this file")
    p.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="artifact format (default: csv for tables, json for reports)",
    )


def _parse_numbers(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip() != ""]


def _resolve_family(
    ns: argparse.Namespace, job: Optional[JobSpec]
) -> Tuple[FamilyParameters, QContext]:
    q = ns.q if ns.q is not None else (job.q if job else None)
    if q is None:
        raise UsageError("--q is required (or supply it via --job)")
    precision = ns.precision if ns.precision is not None else (
        job.precision if job else 50
    )
    tol = ns.tol if ns.tol is not None else (job.tol if job else None)
    ctx = QContext(q, precision=precision, tol=tol, max_terms=ns.max_terms)
    if ns.params:
        vals = _parse_numbers(ns.params)
        if len(vals) != 7:
            raise UsageError("--params needs exactly 7 comma-separated values")
        return (
            FamilyParameters(*[ctx.real(v) for v in vals], ctx.q, ns.finite_n),
            ctx,
        )
    if ns.preset:
        args = [ctx.real(v) for v in _parse_numbers(ns.args)]
        return presets.instantiate(ns.preset, args, ctx.q, ctx), ctx
    if job is not None:
        fam = job.family
        if "preset" in fam:
            args = [ctx.real(v) for v in fam.get("args", [])]
            return presets.instantiate(fam["preset"], args, ctx.q, ctx), ctx
        if "params" in fam:
            vals = fam["params"]
            if len(vals) != 7:
                raise UsageError("job family.params needs exactly 7 values")
            return (
                FamilyParameters(
                    *[ctx.real(v) for v in vals], ctx.q, fam.get("finite_n")
                ),
                ctx,
            )
        raise UsageError("job family must contain 'preset' or 'params'")
    raise UsageError("specify a family via --preset, --params, or --job")


def _ensure_summable(
    params: FamilyParameters, ctx: QContext
) -> Tuple[FamilyParameters, QContext, bool]:
    """Apply the q -> 1/q inversion when |q| > 1 (weights are invariant)."""
    if abs(ctx.q) > 1:
        return reparam.invert_q(params), ctx.invert(), True
    return params, ctx, False


def _emit(text: str, ns: argparse.Namespace) -> None:
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _weights_artifact(
    params: FamilyParameters, ctx: QContext, nodes: int, fmt: str
) -> str:
    params, ctx, inverted = _ensure_summable(params, ctx)
    gen = weights.generator_for(params, ctx)
    table = weights.weight_table(params, nodes, ctx)
    if fmt == "csv":
        lines = ["k,x_k,r_k,terms_used,tail_bound"]
        for k in range(len(table.nodes)):
            d = table.diagnostics[k]
            lines.append(
                f"{k},{_dec(table.nodes[k], ctx)},{_dec(table.weights[k], ctx)},"
                f"{d.terms_used},{_dec(d.tail_bound, ctx)}"
            )
        return "\n".join(lines) + "\n"
    obj = {
        "case": gen.canonical.case,
        "finite": table.finite,
        "finite_node_count": table.finite_node_count,
        "inverted_q": inverted,
        "nodes": [_dec(v, ctx) for v in table.nodes],
        "weights": [_dec(v, ctx) for v in table.weights],
        "diagnostics": [
            {
                "terms_used": d.terms_used,
                "tail_bound": _dec(d.tail_bound, ctx),
                "terminated": d.terminated,
            }
            for d in table.diagnostics
        ],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _recurrence_artifact(
    params: FamilyParameters, ctx: QContext, nmax: int, route: str, fmt: str
) -> str:
    rc = connection.recurrence_coefficients(params, nmax, route, ctx)
    if fmt == "csv":
        lines = ["n,alpha_n,beta_n"]
        for n in range(nmax + 1):
            alpha = "" if n == 0 else _dec(rc.alpha(n), ctx)
            lines.append(f"{n},{alpha},{_dec(rc.beta(n), ctx)}")
        return "\n".join(lines) + "\n"
    obj = {
        "route": rc.route,
        "nmax": nmax,
        "alpha": {str(n): _dec(rc.alpha(n), ctx) for n in range(1, nmax + 1)},
        "beta": {str(n): _dec(rc.beta(n), ctx) for n in range(nmax + 1)},
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _reparam_artifact(params: FamilyParameters, ctx: QContext) -> str:
    c = reparam.canonicalize(params, ctx)
    gen = weights.rho_generator(c, params.finite_n)
    obj = {
        "case": c.case,
        "e1": _dec(c.e1, ctx),
        "e2": _dec(c.e2, ctx),
        "e3": _dec(c.e3, ctx),
        "z1": _dec(c.z1, ctx),
        "z2": _dec(c.z2, ctx),
        "p": None if c.p is None else _dec(c.p, ctx),
        "pe1": _dec(c.pe1, ctx),
        "pe2": _dec(c.pe2, ctx),
        "b0": _dec(c.b0, ctx),
        "b1": _dec(c.b1, ctx),
        "b2": _dec(c.b2, ctx),
        "q": _dec(c.q, ctx),
        "termination_index": gen.termination_index,
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _moments_artifact(
    params: FamilyParameters, ctx: QContext, nmax: int, fmt: str
) -> str:
    seq = build_sequences(params, nmax, ctx)
    mk = connection.moments(seq, nmax, ctx)
    if fmt == "csv":
        lines = ["k,m_k"]
        for k, v in enumerate(mk):
            lines.append(f"{k},{_dec(v, ctx)}")
        return "\n".join(lines) + "\n"
    obj = {"moments": [_dec(v, ctx) for v in mk]}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _verify_artifact(
    params: FamilyParameters,
    ctx: QContext,
    nmax: int,
    max_nodes: int,
    gram_tol: Any,
    moment_tol: Any,
) -> Tuple[str, bool]:
    params, ctx, inverted = _ensure_summable(params, ctx)
    gen = weights.generator_for(params, ctx)
    table = weights.weight_table(params, max_nodes, ctx)
    failed = False
    try:
        report = verify.gram_matrix(params, table, nmax, ctx)
    except DegenerateNorm as exc:
        obj = {
            "ok": False,
            "error": "degenerate-norm",
            "detail": str(exc),
            "inverted_q": inverted,
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n", True
    gram_fail = report.max_offdiag_residual > ctx.real(gram_tol)
    moment_fail = any(r > ctx.real(moment_tol) for r in report.moment_residuals)
    failed = gram_fail or moment_fail or not report.favard_ok
    obj = {
        "ok": not failed,
        "case": gen.canonical.case,
        "inverted_q": inverted,
        "nmax": report.nmax,
        "node_count_used": report.node_count_used,
        "finite": table.finite,
        "max_offdiag_residual": _dec(report.max_offdiag_residual, ctx),
        "max_offdiag_norm_residual": _dec(report.max_offdiag_norm_residual, ctx),
        "gram_tolerance": _dec(ctx.real(gram_tol), ctx),
        "moment_tolerance": _dec(ctx.real(moment_tol), ctx),
        "K": [_dec(v, ctx) for v in report.K],
        "moment_residuals": [_dec(v, ctx) for v in report.moment_residuals],
        "favard_ok": report.favard_ok,
        "gram": [[_dec(v, ctx) for v in row] for row in report.gram],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n", failed


def _build_parser() -> _Parser:
    parser = _Parser(prog="qortho", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_presets = sub.add_parser("presets", help="catalog operations")
    p_presets.add_argument("action", choices=("list",))
    p_presets.add_argument("--format", choices=("csv", "json"), default="csv")
    p_presets.add_argument("-o", "--output")

    p_weights = sub.add_parser("weights", help="weight table")
    _add_family_options(p_weights)
    p_weights.add_argument("--nodes", type=int, default=20, help="highest node index K")

    p_rec = sub.add_parser("recurrence", help="three-term recurrence table")
    _add_family_options(p_rec)
    p_rec.add_argument("--nmax", type=int, default=10)
    p_rec.add_argument(
        "--route",
        default="direct",
        choices=("direct", "abs-form", "yz-form", "abs", "yz"),
    )

    p_rep = sub.add_parser("reparam", help="canonical form and case tag")
    _add_family_options(p_rep)

    p_ver = sub.add_parser("verify", help="orthogonality report")
    _add_family_options(p_ver)
    p_ver.add_argument("--nmax", type=int, default=None)
    p_ver.add_argument("--max-nodes", type=int, default=None)
    p_ver.add_argument("--gram-tol", default=None)
    p_ver.add_argument("--moment-tol", default="1e-10")

    p_mom = sub.add_parser("moments", help="generalized moment table")
    _add_family_options(p_mom)
    p_mom.add_argument("--nmax", type=int, default=10)

    p_job = sub.add_parser("job", help="run every artifact a JobSpec selects")
    p_job.add_argument("path", help="JobSpec JSON file")
    p_job.add_argument("-o", "--output", help="write artifacts to this file")

    return parser


def _load_job(ns: argparse.Namespace) -> Optional[JobSpec]:
    path = getattr(ns, "job", None)
    if not path:
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return JobSpec.from_json(fh.read())


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Execute one CLI invocation; returns the exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command == "presets":
            if ns.format == "json":
                obj = [
                    {
                        "name": d.name,
                        "args": [list(a) for a in d.free_args],
                        "optional_args": [[a, c, str(v)] for a, c, v in d.optional_args],
                        "citation": d.citation,
                    }
                    for d in presets.list_presets()
                ]
                text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
            else:
                buf = io.StringIO()
                writer = csv.writer(buf, lineterminator="\n")
                writer.writerow(["name", "args", "optional_args", "citation"])
                for d in presets.list_presets():
                    args = ";".join(a for a, _ in d.free_args)
                    opts = ";".join(f"{a}={v}" for a, _, v in d.optional_args)
                    writer.writerow([d.name, args, opts, d.citation])
                text = buf.getvalue()
            _emit(text, ns)
            return 0

        if ns.command == "job":
            with open(ns.path, "r", encoding="utf-8") as fh:
                job = JobSpec.from_json(fh.read())
            if not job.outputs:
                raise UsageError("job spec selects no outputs")
            fake = argparse.Namespace(
                preset=None, args="", params=None, finite_n=None,
                job=None, q=None, precision=None, tol=None, max_terms=5000,
            )
            params, ctx = _resolve_family(fake, job)
            failed = False
            sections: List[str] = []
            for sel in job.outputs:
                if sel == "weights":
                    body = _weights_artifact(params, ctx, job.max_nodes, "csv")
                elif sel == "recurrence":
                    body = _recurrence_artifact(params, ctx, job.nmax, "direct", "csv")
                elif sel == "reparam":
                    body = _reparam_artifact(params, ctx)
                elif sel == "moments":
                    body = _moments_artifact(params, ctx, job.nmax, "csv")
                else:
                    gram_tol = "1e-8" if ctx.is_double else "1e-24"
                    body, bad = _verify_artifact(
                        params, ctx, job.nmax, job.max_nodes, gram_tol, "1e-10"
                    )
                    failed = failed or bad
                sections.append(f"# artifact: {sel}\n{body}")
            text = "".join(sections)
            if ns.output:
                with open(ns.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 2 if failed else 0

        job = _load_job(ns)
        params, ctx = _resolve_family(ns, job)

        if ns.command == "weights":
            fmt = ns.format or "csv"
            _emit(_weights_artifact(params, ctx, ns.nodes, fmt), ns)
            return 0
        if ns.command == "recurrence":
            fmt = ns.format or "csv"
            _emit(_recurrence_artifact(params, ctx, ns.nmax, ns.route, fmt), ns)
            return 0
        if ns.command == "reparam":
            _emit(_reparam_artifact(params, ctx), ns)
            return 0
        if ns.command == "moments":
            fmt = ns.format or "csv"
            _emit(_moments_artifact(params, ctx, ns.nmax, fmt), ns)
            return 0
        if ns.command == "verify":
            nmax = ns.nmax if ns.nmax is not None else (job.nmax if job else 8)
            max_nodes = ns.max_nodes if ns.max_nodes is not None else (
                job.max_nodes if job else 120
            )
            gram_tol = ns.gram_tol or ("1e-8" if ctx.is_double else "1e-24")
            text, failed = _verify_artifact(
                params, ctx, nmax, max_nodes, gram_tol, ns.moment_tol
            )
            _emit(text, ns)
            return 2 if failed else 0
        raise UsageError(f"unknown command {ns.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NoConvergence, InsufficientNodes) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3
    except (QOrthoError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
