"""Command-line entry point: ``cosmero <subcommand> [options]``.

Successful runs print one JSON document (sorted keys) on stdout and exit 0.
Invalid input prints ``{"error": {"code", "message"}}`` on stderr and exits
1; bad usage exits 2 the same way.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .cohomology import (FIXTURE_NERVES, ChainComplex, CoefficientSystem, LieAlgebra, Nerve,
                         abelian, ce_complex, cech_complex, heisenberg, sl2)
from .cohomology.double import DoubleComplex
from .elliptic import c_coeff, p0, p_function, verify_expansion_identities
from .errors import CosmeroError, ValidationError
from .mero_model import (Cochain, ModelAlgebra, check_kg_property, check_pole_bounds,
                         check_tg_property, shuffle_complement, shuffle_sum)
from .necklace import EdgeParams, amatrices, necklace_sum
from .quasimodular import eisenstein_eval, eisenstein_q

# options that steer the run but are not part of the computation
_META = {"manifest", "record", "threads", "command"}

# checked after a manifest is applied, so replays need not repeat them
_REQUIRED = {
    "eisenstein": ("k",),
    "pk": ("k",),
    "cmatrix": ("kmax",),
    "amatrix": ("size",),
    "necklace-sum": ("m", "ends", "cutoff"),
    "axioms-check": ("input",),
    "ce-cohomology": ("algebra",),
    "cech-cohomology": ("nerve",),
    "d2check": ("model",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise ValidationError(f"cannot read {text!r} as RE,IM") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise ValidationError(f"cannot read {text!r} as RE,IM")
    return complex(*parts)


def _pair_arg(text: str) -> tuple:
    try:
        k, l = (int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"expected two integers K,L, got {text!r}") from None
    return k, l


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        err = ValidationError(f"malformed JSON in {path}: {exc}")
        err.code = "malformed_json"
        raise err from None


def _float_json(x) -> dict:
    x = complex(x)
    return {"re": repr(x.real), "im": repr(x.imag)}


def _require_numeric(args, *flags):
    used = [f for f in flags if getattr(args, f, None) is not None]
    if used and not args.numeric:
        raise ValidationError(f"--{used[0]} needs --numeric")


def _cohomology_json(h: dict) -> dict:
    return {f"H{n}": d for n, d in sorted(h.items())}


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, truncation orders, csv rows or None)


def cmd_eisenstein(args):
    _require_numeric(args, "tau")
    if args.order < 1:
        raise ValidationError("--order must be >= 1")
    if args.numeric:
        if args.tau is None:
            raise ValidationError("numeric evaluation needs --tau")
        v = eisenstein_eval(args.k, _complex_arg(args.tau), args.order)
        return {"value": _float_json(v), "tail_bound": repr(v.tail_bound)}, {"q": args.order}, None
    s = eisenstein_q(args.k, args.order)
    out = {}
    for n in range(args.order):
        out["constant" if n == 0 else f"q{n}"] = str(s.coefficient(n))
    rows = [["n", "coefficient"]] + [[n, str(s.coefficient(n))] for n in range(args.order)]
    return out, {"q": args.order}, rows


def cmd_pk(args):
    if args.k < 0:
        raise ValidationError("--k must be >= 0")
    p = p0(args.z_order, args.q_order) if args.k == 0 else p_function(args.k, args.z_order, args.q_order)
    return p.to_json(), {"z": args.z_order, "q": args.q_order}, None


def cmd_cmatrix(args):
    if args.kmax < 1:
        raise ValidationError("--kmax must be >= 1")
    out = {}
    rows = [["k", "l", "n", "coefficient"]]
    for k in range(1, args.kmax + 1):
        for l in range(1, args.kmax + 1):
            s = c_coeff(k, l, args.q_order)
            out[f"{k},{l}"] = s.to_json()["coefficients"]
            rows += [[k, l, n, str(v)] for n, v in s.items()]
    return out, {"q": args.q_order}, rows


def _edge_params(args):
    _require_numeric(args, "tau", "eps", "tau2", "eps2")
    if not args.numeric:
        return None
    tau = _complex_arg(args.tau or "0,1")
    eps = _complex_arg(args.eps or "1")
    p1 = EdgeParams(tau, eps)
    if args.tau2 is None and args.eps2 is None:
        return p1
    p2 = EdgeParams(_complex_arg(args.tau2) if args.tau2 else tau, _complex_arg(args.eps2) if args.eps2 else eps)
    return {1: p1, 2: p2}


def _entry_json(x):
    return _float_json(x) if isinstance(x, complex) else x.to_json()


def cmd_amatrix(args):
    params = _edge_params(args)
    mats = amatrices(args.size, params, args.q_order)
    out = {}
    rows = [["label", "k", "l", "entry"]]
    for a in (1, 2):
        m = mats[a]
        out[str(a)] = [[_entry_json(x) for x in row] for row in m.entries]
        for k, row in enumerate(m.entries, 1):
            for l, x in enumerate(row, 1):
                rows.append([a, k, l, repr(x) if isinstance(x, complex) else repr(x)])
    return out, {"size": args.size, "q": args.q_order if args.numeric else None}, rows


def cmd_verify_identities(args):
    rep = verify_expansion_identities(args.z_order, args.q_order, args.kmax)
    return rep, {"z": args.z_order, "q": args.q_order}, None


def cmd_necklace_sum(args):
    ends = _pair_arg(args.ends)
    params = _edge_params(args)
    mats = amatrices(args.cutoff, params, args.q_order)
    res = necklace_sum(args.m, ends, args.cutoff, mats, args.first_edge, args.threads)
    out = {"direct": _entry_json(res.direct), "transfer": _entry_json(res.transfer),
           "necklaces": res.necklaces, "agree": True}
    return out, {"cutoff": args.cutoff, "q": args.q_order if args.numeric else None}, None


def cmd_axioms_check(args):
    F = Cochain.from_json(_load_json(args.input))
    model = ModelAlgebra(F.degree)
    tg = check_tg_property(F, model)
    kg = check_kg_property(F, args.weight if args.weight is not None else 0, args.z_scaling)
    if args.weight is None:
        # no target weight: homogeneity alone
        ok = len(kg.details["weights"]) <= 1
        kg_json = {"ok": ok, "checked": kg.checked, "weights": kg.details["weights"], "violations": []}
    else:
        kg_json = kg.to_json()
    poles = check_pole_bounds(F)
    shuffle = {"ok": True, "checked": 0, "violations": []}
    for p in range(1, F.l):
        shuffle["checked"] += 1
        if shuffle_complement(F, p) != shuffle_sum(F, F.l - p):
            shuffle["ok"] = False
            shuffle["violations"].append({"p": p})
    out = {"tg": tg.to_json(), "kg": kg_json, "pole_bounds": poles.to_json(), "shuffle": shuffle}
    out["ok"] = all(v["ok"] for v in out.values())
    return out, {"degree": F.degree}, None


_ALGEBRAS = {"sl2": sl2, "heisenberg": heisenberg}


def _algebra(spec: str) -> LieAlgebra:
    if spec in _ALGEBRAS:
        return _ALGEBRAS[spec]()
    if spec.startswith("abelian") and spec[7:].isdigit():
        return abelian(int(spec[7:]))
    return LieAlgebra.from_json(_load_json(spec))


def cmd_ce_cohomology(args):
    g = _algebra(args.algebra)
    c = ce_complex(g, args.pbw_cutoff, args.pmax, args.window, not args.trivial, args.threads)
    h = c.cohomology()
    rows = [["degree", "dim"]] + [[n, d] for n, d in sorted(h.items())]
    return _cohomology_json(h), {"pbw_cutoff": args.pbw_cutoff, "pmax": args.pmax}, rows


def _nerve(spec: str) -> tuple:
    if spec in FIXTURE_NERVES:
        return Nerve(FIXTURE_NERVES[spec]), None
    data = _load_json(spec)
    return Nerve.from_json(data), data.get("coefficients")


def cmd_cech_cohomology(args):
    nerve, coeff_data = _nerve(args.nerve)
    if args.coefficients:
        coeff_data = _load_json(args.coefficients)
    coeffs = CoefficientSystem.from_json(nerve, coeff_data) if coeff_data else None
    c = cech_complex(nerve, coeffs, args.convention, args.threads)
    h = c.cohomology()
    rows = [["degree", "dim"]] + [[n, d] for n, d in sorted(h.items())]
    return _cohomology_json(h), {}, rows


def _model(args) -> ModelAlgebra:
    if args.model != "poly":
        raise ValidationError(f"unknown model {args.model!r}; only 'poly' is built in")
    return ModelAlgebra(args.degree)


def cmd_d2check(args):
    dc = DoubleComplex(_model(args), args.lmax, args.kmax, threads=args.threads)
    return dc.d2check(), {"degree": args.degree, "lmax": args.lmax, "kmax": args.kmax}, None


def cmd_cohomology(args):
    if (args.input is None) == (args.model is None):
        raise ValidationError("give exactly one of --input or --model")
    if args.input is not None:
        c = ChainComplex.from_json(_load_json(args.input))
        h = c.cohomology()
        rows = [["degree", "dim"]] + [[n, d] for n, d in sorted(h.items())]
        return _cohomology_json(h), {}, rows
    dc = DoubleComplex(_model(args), args.lmax, args.kmax, threads=args.threads)
    h = dc.cohomology()
    rows = [["l", "k", "dim"]] + [[l, k, d] for (l, k), d in sorted(h.items())]
    return ({f"H{l}_{k}": d for (l, k), d in sorted(h.items())},
            {"degree": args.degree, "lmax": args.lmax, "kmax": args.kmax}, rows)


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--manifest", metavar="PATH", help="replay the run recorded in PATH")
    common.add_argument("--record", metavar="PATH", help="write a run manifest to PATH")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default $COSMERO_THREADS or 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--numeric", action="store_true", help="floating-point evaluation")

    p = _Parser(prog="cosmero", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("eisenstein", cmd_eisenstein, "q-expansion or value of E_k")
    s.add_argument("--k", type=int)
    s.add_argument("--order", type=int, default=10)
    s.add_argument("--tau", help="RE,IM (numeric mode)")

    s = add("pk", cmd_pk, "expansion of P_k in z and q")
    s.add_argument("--k", type=int)
    s.add_argument("--z-order", type=int, default=8)
    s.add_argument("--q-order", type=int, default=8)

    s = add("cmatrix", cmd_cmatrix, "C(k,l) coefficients as q-series")
    s.add_argument("--kmax", type=int)
    s.add_argument("--q-order", type=int, default=8)

    def edge_flags(s):
        s.add_argument("--tau", help="RE,IM (numeric mode)")
        s.add_argument("--eps", help="RE,IM (numeric mode)")
        s.add_argument("--tau2", help="tau for label-2 edges")
        s.add_argument("--eps2", help="eps for label-2 edges")
        s.add_argument("--q-order", type=int, default=40)

    s = add("amatrix", cmd_amatrix, "truncated A-matrices for both edge labels")
    s.add_argument("--size", type=int)
    edge_flags(s)

    s = add("verify-identities", cmd_verify_identities, "exact checks of the P_k expansion identities")
    s.add_argument("--z-order", type=int, default=8)
    s.add_argument("--q-order", type=int, default=12)
    s.add_argument("--kmax", type=int, default=5)

    s = add("necklace-sum", cmd_necklace_sum, "necklace sum by enumeration and by matrix product")
    s.add_argument("--m", type=int)
    s.add_argument("--ends", help="K,L")
    s.add_argument("--cutoff", type=int)
    s.add_argument("--first-edge", type=int, choices=(1, 2), default=1)
    edge_flags(s)

    s = add("axioms-check", cmd_axioms_check, "axiom checks on a serialized cochain")
    s.add_argument("--input")
    s.add_argument("--weight", type=int)
    s.add_argument("--z-scaling", type=int, default=ModelAlgebra.kg_z_scaling)

    s = add("ce-cohomology", cmd_ce_cohomology, "Chevalley-Eilenberg homology dimensions")
    s.add_argument("--algebra", help="JSON file, or sl2, heisenberg, abelianN")
    s.add_argument("--pmax", type=int)
    s.add_argument("--pbw-cutoff", type=int, default=0)
    s.add_argument("--window", choices=("total", "pbw"), default="total")
    s.add_argument("--trivial", action="store_true", help="ignore an attached module")

    s = add("cech-cohomology", cmd_cech_cohomology, "cohomology of a nerve with coefficients")
    s.add_argument("--nerve", help="JSON file or a built-in nerve name")
    s.add_argument("--coefficients", help="coefficient system JSON (default constant Q)")
    s.add_argument("--convention", choices=("chains", "simplicial"), default="chains")

    def model_flags(s):
        s.add_argument("--model", help="only 'poly'")
        s.add_argument("--degree", type=int, default=4)
        s.add_argument("--lmax", type=int, default=2)
        s.add_argument("--kmax", type=int, default=3)

    s = add("d2check", cmd_d2check, "exact D∘D = 0 check on the model double complex")
    model_flags(s)

    s = add("cohomology", cmd_cohomology, "cohomology of a serialized complex or the model double complex")
    s.add_argument("--input", help="ChainComplex JSON")
    model_flags(s)
    return p


# ---------------------------------------------------------------------------
# manifests


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _META and k != "func"}


def _render(payload, fmt: str, rows) -> str:
    if fmt == "csv":
        if rows is None:
            raise ValidationError("this subcommand has no tabular output; use --format json")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str) + "\n"


def _apply_manifest(parser, args):
    path = Path(args.manifest)
    data = _load_json(str(path))
    if not isinstance(data, dict) or "subcommand" not in data or "params" not in data:
        raise ValidationError("manifest needs 'subcommand' and 'params'")
    if data["subcommand"] != args.command:
        raise ValidationError(f"manifest is for {data['subcommand']!r}, not {args.command!r}")
    known = _params(args)
    for k, v in data["params"].items():
        if k not in known:
            raise ValidationError(f"manifest parameter {k!r} is not an option of {args.command}")
        # file inputs are stored relative to the manifest
        if k in ("input", "nerve", "algebra", "coefficients") and isinstance(v, str):
            cand = path.parent / v
            if cand.exists():
                v = str(cand)
        setattr(args, k, v)
    return data


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    try:
        if args.threads is None:
            env = os.environ.get("COSMERO_THREADS", "1")
            try:
                args.threads = max(1, int(env))
            except ValueError:
                raise ValidationError(f"COSMERO_THREADS must be an integer, got {env!r}") from None
        if args.threads < 1:
            raise ValidationError("--threads must be >= 1")
        recorded = _apply_manifest(parser, args) if args.manifest else None
        missing = [n for n in _REQUIRED.get(args.command, ()) if getattr(args, n) is None]
        if missing:
            flag = "--" + missing[0].replace("_", "-")
            _emit_error("usage", f"{args.command}: the argument {flag} is required")
            return 2
        start = time.perf_counter()
        payload, orders, rows = args.func(args)
        text = _render(payload, args.format, rows)
        duration = time.perf_counter() - start
        digest = hashlib.sha256(text.encode()).hexdigest()
        if recorded and recorded.get("digest") and recorded.get("format", "json") == args.format \
                and recorded["digest"] != digest:
            raise ValidationError("replayed output differs from the recorded digest")
        if args.record:
            manifest = {"subcommand": args.command, "params": _params(args), "version": __version__,
                        "orders": orders, "format": args.format, "duration": duration, "digest": digest}
            with open(args.record, "w", encoding="utf-8") as fh:
                json.dump(manifest, fh, sort_keys=True, indent=2, default=str)
                fh.write("\n")
        sys.stdout.write(text)
        return 0 if payload.get("ok", True) is not False else 1
    except CosmeroError as exc:
        _emit_error(exc.code, str(exc), exc)
        return 1
    except OSError as exc:
        _emit_error("io", str(exc))
        return 1


def _emit_error(code: str, message: str, exc=None):
    err = {"code": code, "message": message}
    for attr in ("degree", "column"):
        if exc is not None and getattr(exc, attr, None) is not None:
            err[attr] = getattr(exc, attr)
    sys.stderr.write(json.dumps({"error": err}, sort_keys=True, default=str) + "\n")


if __name__ == "__main__":
    sys.exit(main())
