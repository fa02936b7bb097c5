"""Command-line interface.

Every command prints one JSON document (``"schema": 1``, sorted keys) unless
``--text`` is given.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import classify, deform
from .errors import LrqError
from .exactmath import matrix_from_json
from .groups import FiniteMatrixGroup, close
from .lrgs import (
    LrRepresentation,
    ad_character,
    check_characteristic,
    det_character,
    lambda_character_sum,
    lambda_invariant,
    make_scheme,
    predicates,
)
from .singularity import (
    CyclicType,
    LrqSingularity,
    ade_graph,
    canonical_toric_form,
    hilbert_basis,
    hilbert_kunz,
    hj_fraction,
    invariants,
    is_f_regular_graph,
    parse_cyclic_type,
    rdp_group_for,
)

SCHEMA = 1


class UsageError(Exception):
    pass


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _load_json(text: str):
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--params expects key=value pairs, got {item!r}")
        out[key.strip()] = val.strip()
    return out


# group and representation specs


def group_from_spec(spec) -> FiniteMatrixGroup:
    """{"generators": [...]} (optionally with "dimension") or {"family": ..., "params": {...}}."""
    if not isinstance(spec, dict):
        raise UsageError("a group spec must be a JSON object")
    if "generators" in spec:
        gens = [matrix_from_json(g) for g in spec["generators"]]
        return close(gens, dimension=spec.get("dimension"))
    if "family" in spec:
        return classify.build_group(spec["family"], spec.get("params", {}))
    raise UsageError('a group spec needs "generators" or "family"')


def representation_from_spec(spec, char: int | None) -> LrRepresentation:
    if isinstance(spec, dict) and "scheme" in spec:
        sch = spec["scheme"]
        if not isinstance(sch, dict) or "group" not in sch:
            raise UsageError('"scheme" needs "char" and "group"')
        p = sch.get("char", char if char is not None else 0)
        scheme = make_scheme(check_characteristic(p), group_from_spec(sch["group"]))
        if "images" in spec:
            return LrRepresentation(scheme, [matrix_from_json(m) for m in spec["images"]])
        return LrRepresentation.natural(scheme)
    p = 0 if char is None else char
    scheme = make_scheme(check_characteristic(p), group_from_spec(spec))
    return LrRepresentation.natural(scheme)


# commands


def cmd_classify(args) -> dict:
    L = args.max_length
    if L < 1:
        raise UsageError("--max-length must be positive")
    if args.group == "sl2":
        entries = classify.sl2_catalog(args.char, L)
    elif args.group == "gl2":
        entries = classify.gl2_catalog(args.char, L)
    elif args.group == "sl3":
        entries = classify.sl3_catalog(args.char, L)
    else:
        entries = classify.gl3_catalog(args.char, L, L)
    return {"group": args.group, "char": args.char, "max_length": L,
            "entries": [e.to_json() for e in entries]}


def cmd_lambda(args) -> dict:
    rep = representation_from_spec(_load_json(args.spec), args.char)
    lam = lambda_invariant(rep)
    doc = {
        "length": rep.scheme.length,
        "char": rep.scheme.p,
        "dimension": rep.dimension,
        "lambda": lam,
        "lambda_traces": lambda_character_sum(rep),
    }
    doc.update(predicates(rep, lam).as_dict())
    if args.characters:
        doc["det_character"] = det_character(rep).to_json()
        doc["ad_character"] = ad_character(rep.scheme).to_json()
    return doc


def cmd_invariants(args) -> dict:
    if args.spec is not None:
        if args.family is not None:
            raise UsageError("give either --spec or --family, not both")
        rep = representation_from_spec(_load_json(args.spec), args.char)
        label = {}
    elif args.family is not None:
        G = classify.build_group(args.family, _parse_params(args.params))
        rep = LrRepresentation.natural(make_scheme(args.char, G))
        label = {"family": args.family, "params": classify.validate(args.family, _parse_params(args.params))}
    else:
        raise UsageError("invariants needs --family or --spec")
    X = LrqSingularity(rep)
    doc = invariants(X).to_json()
    doc.update(label)
    doc["char"] = rep.scheme.p
    if args.hilbert_kunz:
        doc["e_hk"] = _frac(hilbert_kunz(X))
    return doc


def cmd_toric(args) -> dict:
    weights = _int_list(args.q, "--q")
    if args.n < 1 or not weights:
        raise UsageError("--n must be positive and --q nonempty")
    n = args.n
    t = CyclicType(n, tuple(w % n if n > 1 else 1 for w in weights))
    doc = {
        "type": str(t),
        "canonical_form": list(canonical_toric_form(n, t.weights)),
        "hilbert_basis": [list(b) for b in hilbert_basis(t)],
        "e_hk": _frac(hilbert_kunz(t)),
        "class_group": [n] if n > 1 else [],
    }
    if t.dimension == 2:
        a, b = t.weights
        q = b * pow(a, -1, n) % n if n > 1 else 0
        hj = hj_fraction(n, q) if n > 1 else []
        doc["hj"] = hj
        doc["chain"] = [-x for x in hj]
    return doc


def _threefold(args):
    if (args.type is None) == (args.metacyclic is None):
        raise UsageError("rigidity needs exactly one of --type and --metacyclic")
    if args.type is not None:
        t = parse_cyclic_type(args.type)
        return t
    vals = _int_list(args.metacyclic, "--metacyclic")
    if len(vals) != 4:
        raise UsageError("--metacyclic expects m,f,N,r")
    return deform.Metacyclic(*vals)


def cmd_rigidity(args) -> dict:
    p = check_characteristic(args.char)
    t = _threefold(args)
    if isinstance(t, CyclicType):
        if t.dimension >= 4:
            return {"type": str(t.canonical()), "dimension": t.dimension,
                    "rigid": deform.rigidity_dim_ge_4(t.dimension)}
        if t.dimension < 3:
            deform.rigidity_dim_ge_4(t.dimension)
        t = deform.cyclic_from_weights(t.n, t.weights)
    doc = {"type": str(t), "char": p}
    choice = args.cube_root
    candidates = deform.non_rigid_candidates(t, p) if isinstance(t, deform.Metacyclic) else None
    if candidates is not None and choice is None and not args.text:
        roots = sorted(z for z in range(2, p) if pow(z, 3, p) == 1)
        doc["rigid"] = None
        doc["choiceDependent"] = True
        doc["nonRigidIf"] = f"cube_root_choice = {candidates[0]} (r mod p)"
        doc["answers"] = {str(z): deform.deformation_space(t, p, z).to_json() for z in roots}
        return doc
    doc.update(deform.deformation_space(t, p, choice).to_json())
    return doc


def cmd_deform_rdp(args) -> dict:
    return deform.length_monotonic_check(args.gamma).to_json()


def cmd_hj_dominate(args) -> dict:
    res = deform.cyclic_deformation_dominance(_int_list(args.a, "--a"), _int_list(args.aprime, "--aprime"))
    return res.to_json()


def cmd_rdp(args) -> dict:
    real = rdp_group_for(args.type, args.char)
    ok, reason = is_f_regular_graph(ade_graph(args.type), args.char)
    doc = real.to_json()
    doc.update({"char": args.char, "f_regular": ok, "reason": reason})
    return doc


COMMANDS = {
    "classify": cmd_classify,
    "lambda": cmd_lambda,
    "invariants": cmd_invariants,
    "toric": cmd_toric,
    "rigidity": cmd_rigidity,
    "deform-rdp": cmd_deform_rdp,
    "hj-dominate": cmd_hj_dominate,
    "rdp": cmd_rdp,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrq", description="Exact computations with linearly reductive quotient singularities.")
    parser.add_argument("--seed-tests", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--json", action="store_true", help="JSON output (the default)")
        mode.add_argument("--text", action="store_true", help="human-readable output")
        return sp

    sp = add("classify", "catalog of very small subgroup schemes")
    sp.add_argument("group", choices=["sl2", "gl2", "sl3", "gl3"])
    sp.add_argument("--char", type=int, required=True)
    sp.add_argument("--max-length", type=int, required=True)

    sp = add("lambda", "lambda invariant of a representation")
    sp.add_argument("--spec", required=True, help="JSON group or representation spec, @file or - for stdin")
    sp.add_argument("--char", type=int)
    sp.add_argument("--characters", action="store_true", help="also report det and ad characters")

    sp = add("invariants", "invariants of an lrq singularity")
    sp.add_argument("--family")
    sp.add_argument("--params", help="key=value pairs, comma separated")
    sp.add_argument("--spec")
    sp.add_argument("--char", type=int, default=0)
    sp.add_argument("--hilbert-kunz", action="store_true")

    sp = add("toric", "cyclic quotient singularity 1/n(q1,...,qd)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", required=True)

    sp = add("rigidity", "infinitesimal rigidity of a threefold quotient")
    sp.add_argument("--char", type=int, required=True)
    sp.add_argument("--type")
    sp.add_argument("--metacyclic")
    sp.add_argument("--cube-root", type=int)

    sp = add("deform-rdp", "root-subsystem specializations of an ADE type")
    sp.add_argument("--gamma", required=True)

    sp = add("hj-dominate", "compare two Hirzebruch-Jung sequences")
    sp.add_argument("--a", required=True)
    sp.add_argument("--aprime", required=True)

    sp = add("rdp", "group scheme realizing a rational double point")
    sp.add_argument("--type", required=True)
    sp.add_argument("--char", type=int, required=True)
    return parser


def _text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(val, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val, sort_keys=True)}")
    return "\n".join(lines)


def _emit(out, doc):
    out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")


def seed_tests(out) -> int:
    from .acceptance import run_all

    results = run_all()
    _emit(out, {"schema": SCHEMA, "criteria": [
        {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]})
    return 0 if all(r.passed for r in results) else 1


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    if args.seed_tests:
        return seed_tests(out)
    if args.command is None:
        err.write("usage error: a command is required\n")
        return 2
    text = args.text
    try:
        doc = COMMANDS[args.command](args)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except LrqError as exc:
        if text:
            err.write(f"error: {exc.name}: {exc}\n")
        else:
            _emit(out, {"schema": SCHEMA, "error": exc.name, "detail": str(exc)})
        return 1
    if text:
        out.write(_text(doc) + "\n")
    else:
        _emit(out, {"schema": SCHEMA, **doc})
    return 0


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
