"""Command-line surface: validate, evolve, factorize, complete, torus, oracle.

Exit codes are a stable contract: 0 success / positive verdict, 1 negative
domain verdict (invalid automaton, non-maximal generator, not invertible),
2 usage or parse errors.  All document arguments accept inline text or
``@path`` to read from a file.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import automaton as am
from . import factorize as fz
from . import oracle
from . import torus as tr
from .errors import CqcaError, DomainError, GuardrailError, PolyParseError, StructureError
from .phasespace import PauliProduct, PhaseVector, isotropy_verdict, pauli_to_vector
from .ring import LaurentPoly


class UsageError(Exception):
    """Malformed input documents; mapped to exit code 2."""


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc}") from exc
    return text


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("expected a JSON object")
    return doc


def _load_matrix(text: str, default_p: int = 2):
    """Parse an automaton argument into (matrix, doc) without validating.

    Accepts either the JSON document or a generator listing ('G <poly>' /
    'F <int>' lines, interpreted with the global --p).
    """
    raw = _read_arg(text).strip()
    if not raw.startswith("{"):
        from .factorize import GeneratorSeq

        seq = GeneratorSeq.parse_lines(raw, default_p)
        m = seq.matrix()
        return m, {"p": default_p, "s": 1}
    doc = _load_json(raw)
    try:
        p = int(doc["p"])
        s = int(doc.get("s", 1))
        rows = doc["entries"]
        entries = [LaurentPoly.parse(str(rows[i][j]), p, s) for i in range(2) for j in range(2)]
    except (KeyError, IndexError, TypeError) as exc:
        raise UsageError(f"malformed automaton document: {exc}") from exc
    return am.ScaMatrix(*entries), doc


def _load_cqca(text: str, default_p: int = 2) -> am.Cqca:
    m, doc = _load_matrix(text, default_p)
    return am.Cqca(m, doc.get("base_phase_X"), doc.get("base_phase_Z"))


def _load_lattice(text: str, default_p: int) -> tuple[tr.TorusLattice, int]:
    raw = _read_arg(text).strip()
    if raw.lstrip("-").isdigit():
        return tr.TorusLattice.line(int(raw)), default_p
    doc = _load_json(raw)
    p = int(doc.get("p", default_p))
    if "N" in doc:
        return tr.TorusLattice.line(int(doc["N"])), p
    try:
        return tr.TorusLattice(doc["basis"]), p
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed torus document: {exc}") from exc


def _parse_vector(text: str, p: int, s: int) -> PhaseVector:
    parts = _read_arg(text).split(",")
    if len(parts) != 2:
        raise UsageError("vector must be two comma-separated polynomials: 'plus, minus'")
    return PhaseVector(LaurentPoly.parse(parts[0], p, s), LaurentPoly.parse(parts[1], p, s))


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=False))
    else:
        for line in lines:
            print(line)


# -- subcommands --------------------------------------------------------------


def cmd_validate(args) -> int:
    m, _doc = _load_matrix(args.automaton, args.p)
    rep = am.validate(m)
    lines = []
    if rep.ok:
        a = rep.center
        center_str = str(a[0]) if len(a) == 1 else str(list(a))
        lines.append(f"valid: center={center_str} det={rep.det}")
    else:
        lines.append(f"invalid: {rep.failure}")
    for name, value in rep.conditions.items():
        lines.append(f"  {name}: {'pass' if value else 'FAIL'}")
    payload = {
        "ok": rep.ok,
        "center": list(rep.center) if rep.center is not None else None,
        "det": str(rep.det),
        "conditions": rep.conditions,
        "failure": rep.failure,
    }
    _emit(args, lines, payload)
    return 0 if rep.ok else 1


def cmd_center(args) -> int:
    c = _load_cqca(args.automaton, args.p)
    doc = c.center().to_doc()
    _emit(args, [json.dumps(doc)], doc)
    return 0


def cmd_compose(args) -> int:
    a = _load_cqca(args.left, args.p)
    b = _load_cqca(args.right, args.p)
    doc = a.compose(b).to_doc()
    _emit(args, [json.dumps(doc)], doc)
    return 0


def cmd_invert(args) -> int:
    c = _load_cqca(args.automaton, args.p)
    doc = c.inverse().to_doc()
    _emit(args, [json.dumps(doc)], doc)
    return 0


def cmd_evolve(args) -> int:
    c = _load_cqca(args.automaton, args.p)
    pauli = PauliProduct.parse(_read_arg(args.pauli), c.p, c.rank)
    steps = args.steps
    if steps < 0:
        c = c.inverse()
        steps = -steps
    out = pauli
    for _ in range(steps):
        out = c.apply_pauli(out)
    _emit(args, [str(out)], {"pauli": str(out)})
    return 0


def cmd_factorize(args) -> int:
    m, _doc = _load_matrix(args.automaton, args.p)
    seq = fz.decompose(m)
    verified = seq.matrix() == m
    if not verified:
        raise DomainError("re-multiplication of the factorization failed")
    lines = [str(g) for g in seq]
    lines.append(f"verified: product of {len(seq)} factors equals input")
    payload = {
        "factors": [str(g) for g in seq],
        "length": len(seq),
        "verified": verified,
    }
    _emit(args, lines, payload)
    return 0


def _stabilizer_infinite(args, xi: PhaseVector) -> int:
    if xi.rank != 1:
        raise UsageError(
            "infinite-lattice verdicts are definitive only for rank 1; use --torus"
        )
    verdict = isotropy_verdict(xi)
    center = verdict.reflection_center
    center_str = None if center is None else str(center[0])
    cond4 = verdict.reflection_center is not None and verdict.common_divisor is None
    completed = None
    completion_error = None
    try:
        completed = am.complete_generator(xi)
    except DomainError as exc:
        completion_error = str(exc)
    maximal = verdict.maximal
    lines = []
    ok = bool(maximal)
    lines.append(f"unique translation-invariant stabilizer state: {'pass' if ok else 'FAIL'}")
    lines.append(f"maximally isotropic translate span: {'pass' if ok else 'FAIL'}"
                 + ("" if verdict.isotropic else " (not even isotropic)"))
    if completed is not None:
        lines.append("automaton completion: pass")
        if args.complete:
            doc = am.Cqca(completed).to_doc()
            lines.append(json.dumps(doc))
    else:
        lines.append(f"automaton completion: FAIL ({completion_error})")
    detail = f"center={center_str}"
    if verdict.common_divisor is not None:
        detail += f", common divisor {verdict.common_divisor}"
    lines.append(
        f"reflection invariant with coprime components: {'pass' if cond4 else 'FAIL'} ({detail})"
    )
    payload = {
        "isotropic": verdict.isotropic,
        "maximal": maximal,
        "reflection_center": center_str,
        "common_divisor": (
            None if verdict.common_divisor is None else str(verdict.common_divisor)
        ),
        "completion": None if completed is None else am.Cqca(completed).to_doc(),
    }
    _emit(args, lines, payload)
    return 0 if ok else 1


def _stabilizer_torus(args, xi: PhaseVector) -> int:
    lattice, p = _load_lattice(args.torus, args.p)
    if p != xi.p:
        raise UsageError(f"torus modulus {p} does not match vector modulus {xi.p}")
    tv = tr.vector_to_torus(xi.plus, xi.minus, lattice)
    verdict = tr.torus_stabilizer_verdict(tv, max_sites=args.guard)
    lines = [
        f"torus sites: {verdict.sites}",
        f"translate span rank: {verdict.rank}",
        f"maximally isotropic: {'pass' if verdict.maximal else 'FAIL'}",
    ]
    payload = {
        "sites": verdict.sites,
        "rank": verdict.rank,
        "maximal": verdict.maximal,
    }
    if args.complete and verdict.maximal:
        t = tr.torus_complete(tv, max_sites=args.guard)
        entries = [[str(t.t11), str(t.t12)], [str(t.t21), str(t.t22)]]
        lines.append(f"completion: {json.dumps(entries)}")
        payload["completion"] = entries
    if args.oracle:
        dim = oracle.joint_eigenspace_dim(
            tr.stabilizer_generators(tv), lattice.sites, guardrail=args.guard
        )
        lines.append(f"oracle joint +1 eigenspace dimension: {dim}")
        payload["oracle_dim"] = dim
        if (dim == 1) != verdict.maximal:
            raise DomainError(
                f"oracle dimension {dim} contradicts symbolic verdict {verdict.maximal}"
            )
    _emit(args, lines, payload)
    return 0 if verdict.maximal else 1


def cmd_stabilizer(args) -> int:
    if args.vector is not None:
        xi = _parse_vector(args.vector, args.p, args.s)
    elif args.pauli is not None:
        pauli = PauliProduct.parse(_read_arg(args.pauli), args.p, args.s)
        xi = pauli_to_vector(pauli)
    else:
        raise UsageError("provide a Pauli string or --vector")
    if xi.is_zero():
        raise UsageError("the zero vector is not a stabilizer generator")
    if args.torus is not None:
        return _stabilizer_torus(args, xi)
    return _stabilizer_infinite(args, xi)


def cmd_torus_invert(args) -> int:
    lattice, p = _load_lattice(args.torus, args.p)
    f = tr.TorusPoly.parse(_read_arg(args.poly), p, lattice)
    inv = tr.torus_invert(f, max_sites=args.guard)
    if inv is None:
        _emit(args, ["not invertible"], {"invertible": False})
        return 1
    _emit(args, [str(inv)], {"invertible": True, "inverse": str(inv)})
    return 0


def cmd_graph_state(args) -> int:
    lattice, p = _load_lattice(args.torus, args.p)
    if args.gamma is not None:
        gamma = tr.TorusPoly.parse(_read_arg(args.gamma), p, lattice)
    elif args.adjacency is not None:
        rows = json.loads(_read_arg(args.adjacency))
        gamma = tr.gamma_from_adjacency(rows, lattice, p)
    else:
        raise UsageError("provide --gamma or --adjacency")
    t = tr.graph_state_automaton(gamma)
    entries = [[str(t.t11), str(t.t12)], [str(t.t21), str(t.t22)]]
    lines = [f"gamma: {gamma}", f"automaton: {json.dumps(entries)}", "valid: true"]
    payload = {"gamma": str(gamma), "entries": entries, "valid": True}
    _emit(args, lines, payload)
    return 0


def cmd_oracle_eigdim(args) -> int:
    lattice, p = _load_lattice(args.torus, args.p)
    if args.vector is not None:
        xi = _parse_vector(args.vector, p, lattice.s)
    elif args.pauli is not None:
        pauli = PauliProduct.parse(_read_arg(args.pauli), p, lattice.s)
        xi = pauli_to_vector(pauli)
    else:
        raise UsageError("provide a Pauli string or --vector")
    tv = tr.vector_to_torus(xi.plus, xi.minus, lattice)
    dim = oracle.joint_eigenspace_dim(
        tr.stabilizer_generators(tv), lattice.sites, guardrail=args.guard
    )
    _emit(args, [f"dim={dim}"], {"dim": dim})
    return 0 if dim == 1 else 1


# -- argument plumbing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqca",
        description="Exact toolkit for Clifford quantum cellular automata",
    )
    parser.add_argument("--p", type=int, default=2, help="prime cell dimension (default 2)")
    parser.add_argument("--s", type=int, default=1, help="lattice rank (default 1)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check the two symplectic characterizations")
    sp.add_argument("automaton")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("center", help="shift a valid automaton to center 0")
    sp.add_argument("automaton")
    sp.set_defaults(func=cmd_center)

    sp = sub.add_parser("compose", help="matrix/phase composition (right factor first)")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("invert", help="adjugate inverse with exact phases")
    sp.add_argument("automaton")
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("evolve", help="apply T^steps to a Pauli product")
    sp.add_argument("automaton")
    sp.add_argument("pauli")
    sp.add_argument("steps", type=int)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("factorize", help="shear/Fourier factorization of a centered 1D automaton")
    sp.add_argument("automaton")
    sp.set_defaults(func=cmd_factorize)

    sp = sub.add_parser("stabilizer", help="stabilizer-generator verdicts and completion")
    sp.add_argument("pauli", nargs="?", default=None)
    sp.add_argument("--vector", help="'plus, minus' polynomial pair")
    sp.add_argument("--torus", help="torus size N or JSON document")
    sp.add_argument("--complete", action="store_true", help="emit a completing automaton")
    sp.add_argument("--oracle", action="store_true", help="cross-check with the dense oracle")
    sp.add_argument("--guard", type=int, default=tr.DEFAULT_MAX_SITES)
    sp.set_defaults(func=cmd_stabilizer)

    sp = sub.add_parser("torus-invert", help="inverse in the quotient ring")
    sp.add_argument("poly")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--guard", type=int, default=tr.DEFAULT_MAX_SITES)
    sp.set_defaults(func=cmd_torus_invert)

    sp = sub.add_parser("graph-state", help="automaton preparing a translation-invariant graph state")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--gamma", help="adjacency polynomial")
    sp.add_argument("--adjacency", help="JSON 0/1 matrix (usually @file)")
    sp.set_defaults(func=cmd_graph_state)

    sp = sub.add_parser("oracle-eigdim", help="dense joint +1 eigenspace dimension of translates")
    sp.add_argument("pauli", nargs="?", default=None)
    sp.add_argument("--vector", help="'plus, minus' polynomial pair")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--guard", type=int, default=oracle.DEFAULT_GUARDRAIL)
    sp.set_defaults(func=cmd_oracle_eigdim)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PolyParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, StructureError, GuardrailError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CqcaError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
