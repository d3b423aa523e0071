"""Command-line interface and the JSON workspace file format.

A workspace file is UTF-8 JSON with one field for the whole file and named
algebras, maps, actions and extensions:

    {
      "field": {"kind": "Q"} or {"kind": "GF", "p": 3},
      "algebras": {name: {"dim": n, "labels": [...],
                          "brackets": [{"i": i, "j": j, "coeffs": {"k": "p/q"}}]}},
      "maps":     {name: {"from": alg, "to": alg, "matrix": [["p/q", ...], ...]}},
      "actions":  {name: {"B": alg, "A": alg, "rho": [matrix, ...]}},
      "extensions": {name: {"L": alg, "inj": map, "proj": map, "sect": map?}
                     or {"from_cocycle": {"action": name,
                                          "mu": [{"i": i, "j": j, "value": [...]}]}}}
    }

Brackets are stored for i < j only and mirrored by antisymmetry on load.
All scalars are strings ("p/q" over Q, integer strings over GF(p)), never
JSON numbers, so exactness survives any JSON parser. Indices are 0-based.

Exit codes are a stable contract: 0 ok, 10 obstructed, 11 incompatible,
1 invariant failure, 2 usage or resolution failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dfield
from typing import Optional

from .exactlin import GF, QQ, FieldSpec, Matrix
from .liealg import AlgebraMap, LieAlgebra, check_algebra, index_pairs
from .modact import MalformedExtensionError, ModuleAction, check_action, induced_action
from .cohom import NotACocycleError, class_of, cochain_from_values, cohomology
from .extension import (
    ExtensionData,
    check_extension,
    extension_from_cocycle,
    extract_cocycle,
    make_section,
    semidirect,
)
from .lifting import (
    AutPair,
    EnumerationGuardError,
    FiniteFieldRequiredError,
    aut_fixing_both,
    enumerate_aut_A,
    enumerate_compatible_pairs,
    tau,
    try_lift,
    wells,
)
from .freenil import build as build_freenil, inducible_nil2

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_OBSTRUCTED = 10
EXIT_INCOMPATIBLE = 11


class WorkspaceParseError(Exception):
    """Unreadable file, schema problem or dangling reference."""


@dataclass
class WorkspaceDocument:
    field: FieldSpec
    algebras: dict = dfield(default_factory=dict)
    maps: dict = dfield(default_factory=dict)
    map_specs: dict = dfield(default_factory=dict)  # name -> (from, to)
    actions: dict = dfield(default_factory=dict)
    action_specs: dict = dfield(default_factory=dict)  # name -> (B, A)
    extensions: dict = dfield(default_factory=dict)
    extension_stanzas: dict = dfield(default_factory=dict)
    violations: list = dfield(default_factory=list)


def parse_field(spec) -> FieldSpec:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise WorkspaceParseError('field must be {"kind": "Q"} or {"kind": "GF", "p": prime}')
    if spec["kind"] == "Q":
        return QQ
    if spec["kind"] == "GF":
        try:
            return GF(int(spec["p"]))
        except (KeyError, ValueError) as exc:
            raise WorkspaceParseError(f"bad prime field: {exc}") from exc
    raise WorkspaceParseError(f'unknown field kind {spec["kind"]!r}')


def field_to_json(field: FieldSpec) -> dict:
    return {"kind": "Q"} if field.p is None else {"kind": "GF", "p": field.p}


def _parse_matrix(rows, field: FieldSpec, where: str) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise WorkspaceParseError(f"{where}: matrix must be a list of rows")
    try:
        return Matrix.from_rows(rows, field)
    except Exception as exc:
        raise WorkspaceParseError(f"{where}: {exc}") from exc


def matrix_to_json(m: Matrix) -> list:
    return [[m.field.format(x) for x in row] for row in m.entries]


def load_workspace(path: str) -> WorkspaceDocument:
    """Parse and build every named object, collecting invariant violations.

    Schema and reference problems raise; invariant failures (Jacobi, action
    compatibility, extension exactness, non-cocycle data) are collected in
    ``doc.violations`` so `check` can report all of them at once.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise WorkspaceParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise WorkspaceParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(raw, dict) or "field" not in raw:
        raise WorkspaceParseError(f'{path}: top level must be an object with a "field" key')
    doc = WorkspaceDocument(field=parse_field(raw["field"]))
    f = doc.field

    for name, spec in sorted(raw.get("algebras", {}).items()):
        where = f"algebras/{name}"
        try:
            dim = int(spec["dim"])
            labels = spec.get("labels")
            brackets = {}
            for entry in spec.get("brackets", []):
                i, j = int(entry["i"]), int(entry["j"])
                if not 0 <= i < j < dim:
                    raise WorkspaceParseError(f"{where}: bracket pair ({i},{j}) needs 0 <= i < j < dim")
                brackets[(i, j)] = {int(k): v for k, v in entry.get("coeffs", {}).items()}
            alg = LieAlgebra.from_brackets(dim, f, brackets, labels=labels)
        except WorkspaceParseError:
            raise
        except Exception as exc:
            raise WorkspaceParseError(f"{where}: {exc}") from exc
        for v in check_algebra(alg):
            doc.violations.append(f"{where}: jacobi fails at {v.indices}")
        doc.algebras[name] = alg

    def resolve_algebra(name, where):
        if name not in doc.algebras:
            raise WorkspaceParseError(f"{where}: unknown algebra {name!r}")
        return doc.algebras[name]

    for name, spec in sorted(raw.get("maps", {}).items()):
        where = f"maps/{name}"
        src = resolve_algebra(spec.get("from"), where)
        dst = resolve_algebra(spec.get("to"), where)
        m = _parse_matrix(spec.get("matrix"), f, where)
        try:
            doc.maps[name] = AlgebraMap(src, dst, m)
        except Exception as exc:
            raise WorkspaceParseError(f"{where}: {exc}") from exc
        doc.map_specs[name] = (spec["from"], spec["to"])

    for name, spec in sorted(raw.get("actions", {}).items()):
        where = f"actions/{name}"
        B = resolve_algebra(spec.get("B"), where)
        A = resolve_algebra(spec.get("A"), where)
        rho = tuple(_parse_matrix(m, f, where) for m in spec.get("rho", []))
        try:
            act = ModuleAction(B, A, rho)
        except Exception as exc:
            raise WorkspaceParseError(f"{where}: {exc}") from exc
        for v in check_action(act):
            doc.violations.append(f"{where}: bracket compatibility fails at pair {v.pair}")
        doc.actions[name] = act
        doc.action_specs[name] = (spec["B"], spec["A"])

    for name, spec in sorted(raw.get("extensions", {}).items()):
        where = f"extensions/{name}"
        if "from_cocycle" in spec:
            inner = spec["from_cocycle"]
            act_name = inner.get("action")
            if act_name not in doc.actions:
                raise WorkspaceParseError(f"{where}: unknown action {act_name!r}")
            act = doc.actions[act_name]
            vals = {}
            for entry in inner.get("mu", []):
                i, j = int(entry["i"]), int(entry["j"])
                if not 0 <= i < j < act.B.dim:
                    raise WorkspaceParseError(f"{where}: mu pair ({i},{j}) needs 0 <= i < j < dim B")
                vals[(i, j)] = entry.get("value", [])
            try:
                mu = cochain_from_values(act, 2, vals)
                doc.extensions[name] = extension_from_cocycle(act, mu)
            except NotACocycleError:
                doc.violations.append(f"{where}: not a 2-cocycle")
            except Exception as exc:
                raise WorkspaceParseError(f"{where}: {exc}") from exc
            doc.extension_stanzas[name] = {"from_cocycle": {"action": act_name, "mu": inner.get("mu", [])}}
        else:
            for key in ("L", "inj", "proj"):
                if key not in spec:
                    raise WorkspaceParseError(f"{where}: missing key {key!r}")
            L = resolve_algebra(spec["L"], where)
            for key in ("inj", "proj", "sect"):
                if key in spec and spec[key] not in doc.maps:
                    raise WorkspaceParseError(f"{where}: unknown map {spec[key]!r}")
            inj = doc.maps[spec["inj"]]
            proj = doc.maps[spec["proj"]]
            A, B = inj.source, proj.target
            if inj.target != L or proj.source != L:
                doc.violations.append(f"{where}: inj/proj do not go through L")
                continue
            try:
                sect = doc.maps[spec["sect"]] if "sect" in spec else make_section(inj, proj)
            except MalformedExtensionError as exc:
                doc.violations.append(f"{where}: {exc}")
                continue
            ext = ExtensionData(A, L, B, inj, proj, sect)
            problems = check_extension(ext)
            if problems:
                doc.violations.extend(f"{where}: {p}" for p in problems)
            else:
                try:
                    extract_cocycle(ext)
                    doc.extensions[name] = ext
                except MalformedExtensionError as exc:
                    doc.violations.append(f"{where}: {exc}")
            doc.extension_stanzas[name] = {
                k: spec[k] for k in ("L", "inj", "proj", "sect") if k in spec
            }
    return doc


# -- canonical serializer ----------------------------------------------------


def algebra_to_json(alg: LieAlgebra) -> dict:
    f = alg.field
    brackets = []
    for i, j in index_pairs(alg.dim):
        v = alg.structure(i, j)
        coeffs = {str(k): f.format(c) for k, c in enumerate(v) if c != 0}
        if coeffs:
            brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": alg.dim, "labels": list(alg.labels), "brackets": brackets}


def emit_workspace(doc: WorkspaceDocument) -> str:
    out = {
        "field": field_to_json(doc.field),
        "algebras": {n: algebra_to_json(a) for n, a in doc.algebras.items()},
        "maps": {
            n: {"from": doc.map_specs[n][0], "to": doc.map_specs[n][1], "matrix": matrix_to_json(m.matrix)}
            for n, m in doc.maps.items()
        },
        "actions": {
            n: {
                "B": doc.action_specs[n][0],
                "A": doc.action_specs[n][1],
                "rho": [matrix_to_json(m) for m in act.rho],
            }
            for n, act in doc.actions.items()
        },
        "extensions": {n: _canonical_stanza(doc, n) for n in doc.extension_stanzas},
    }
    return canonical_json(out)


def _canonical_stanza(doc: WorkspaceDocument, name: str) -> dict:
    stanza = doc.extension_stanzas[name]
    if "from_cocycle" not in stanza:
        return dict(stanza)
    inner = stanza["from_cocycle"]
    act = doc.actions[inner["action"]]
    f = act.field
    mu = []
    for entry in inner["mu"]:
        vals = [f.format(f.coerce(x)) for x in entry["value"]]
        mu.append({"i": int(entry["i"]), "j": int(entry["j"]), "value": vals})
    return {"from_cocycle": {"action": inner["action"], "mu": mu}}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- reports -----------------------------------------------------------------


def _emit(report: dict, output: str, stream) -> None:
    if output == "json":
        stream.write(canonical_json(report))
        return
    for line in _text_lines(report):
        stream.write(line + "\n")


def _text_lines(report, prefix=""):
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_text_lines(val, prefix + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            lines.append(f"{prefix}{key}:")
            for item in val:
                if isinstance(item, dict):
                    lines.extend(_text_lines(item, prefix + "  "))
                else:
                    lines.append(f"{prefix}  {item}")
        else:
            if isinstance(val, list):
                val = " ".join(str(x) for x in val)
            lines.append(f"{prefix}{key}: {val}")
    return lines


def _need(doc: WorkspaceDocument, table: str, name: str):
    objs = getattr(doc, table)
    if name not in objs:
        raise WorkspaceParseError(f"unknown {table[:-1]} {name!r}")
    return objs[name]


# -- commands ----------------------------------------------------------------


def cmd_check(args, stream) -> int:
    doc = load_workspace(args.file)
    report = {
        "command": "check",
        "ok": not doc.violations,
        "violations": list(doc.violations),
        "counts": {
            "algebras": len(doc.algebras),
            "maps": len(doc.maps),
            "actions": len(doc.actions),
            "extensions": len(doc.extensions),
        },
    }
    _emit(report, args.output, stream)
    return EXIT_OK if not doc.violations else EXIT_INVARIANT


def _loaded(args) -> WorkspaceDocument:
    doc = load_workspace(args.file)
    if doc.violations:
        raise WorkspaceParseError("; ".join(doc.violations))
    return doc


def cmd_cohomology(args, stream) -> int:
    doc = _loaded(args)
    act = _need(doc, "actions", args.action)
    k = args.degree
    if not 0 <= k <= act.B.dim:
        raise WorkspaceParseError(f"degree {k} outside 0..dim B = {act.B.dim}")
    space = cohomology(act, k)
    report = {
        "command": "cohomology",
        "action": args.action,
        "degree": k,
        "dim_C": act.A.dim * _n_tuples(act, k),
        "dim_Z": len(space.cocycle_basis),
        "dim_B": len(space.coboundary_basis),
        "dim_H": space.dim_H,
    }
    if args.representatives:
        reps = []
        for c in space.class_representatives:
            reps.append(
                [
                    {"tuple": list(t), "value": [act.field.format(x) for x in c.value_on(t)]}
                    for t in c.basis.tuples
                ]
            )
        report["representatives"] = reps
    _emit(report, args.output, stream)
    return EXIT_OK


def _n_tuples(act: ModuleAction, k: int) -> int:
    from math import comb

    return comb(act.B.dim, k)


def cmd_cocycle(args, stream) -> int:
    doc = _loaded(args)
    ext = _need(doc, "extensions", args.extension)
    mu = extract_cocycle(ext)
    f = ext.L.field
    entries = [
        {"i": i, "j": j, "value": [f.format(x) for x in mu.value_on((i, j))]}
        for i, j in index_pairs(ext.B.dim)
    ]
    report = {"command": "cocycle", "extension": args.extension, "mu": entries}
    _emit(report, args.output, stream)
    return EXIT_OK


def cmd_lift(args, stream) -> int:
    doc = _loaded(args)
    ext = _need(doc, "extensions", args.extension)
    theta = _need(doc, "maps", args.theta)
    phi = _need(doc, "maps", args.phi)
    if theta.source != ext.A or theta.target != ext.A:
        raise WorkspaceParseError(f"map {args.theta!r} is not an endomorphism of the kernel")
    if phi.source != ext.B or phi.target != ext.B:
        raise WorkspaceParseError(f"map {args.phi!r} is not an endomorphism of the quotient")
    try:
        pair = AutPair(theta, phi)
    except ValueError as exc:
        raise WorkspaceParseError(str(exc)) from exc
    out = try_lift(pair, ext)
    f = ext.L.field
    report = {
        "command": "lift",
        "extension": args.extension,
        "theta": args.theta,
        "phi": args.phi,
    }
    if out.inducible:
        report["verdict"] = "INDUCIBLE"
        report["gamma"] = matrix_to_json(out.witness.gamma.matrix)
        report["lambda"] = matrix_to_json(out.witness.lam.matrix)
        code = EXIT_OK
    elif out.reason == "obstructed":
        report["verdict"] = "OBSTRUCTED"
        report["obstruction_class"] = [f.format(x) for x in out.obstruction.coords]
        code = EXIT_OBSTRUCTED
    else:
        report["verdict"] = "INCOMPATIBLE"
        report["failing_basis_index"] = out.failing_index
        code = EXIT_INCOMPATIBLE
    _emit(report, args.output, stream)
    return code


def _load_map_file(path: str) -> Matrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise WorkspaceParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise WorkspaceParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    if not isinstance(raw, dict) or "field" not in raw or "matrix" not in raw:
        raise WorkspaceParseError(f'{path}: expected {{"field": ..., "matrix": [[...]]}}')
    return _parse_matrix(raw["matrix"], parse_field(raw["field"]), path)


def cmd_freenil(args, stream) -> int:
    if args.n < 2:
        raise WorkspaceParseError("rank must be at least 2")
    if (args.theta is None) != (args.phi is None):
        raise WorkspaceParseError("provide both --theta and --phi, or neither")
    if args.theta is None:
        fn = build_freenil(args.n)
        doc = _freenil_document(fn)
        stream.write(emit_workspace(doc))
        return EXIT_OK
    theta_m = _load_map_file(args.theta)
    phi_m = _load_map_file(args.phi)
    if theta_m.field != phi_m.field:
        raise WorkspaceParseError("theta and phi files use different fields")
    nz = args.n * (args.n - 1) // 2
    if phi_m.rows != args.n or phi_m.cols != args.n or theta_m.rows != nz or theta_m.cols != nz:
        raise WorkspaceParseError(f"need phi {args.n}x{args.n} and theta {nz}x{nz}")
    if theta_m.invert() is None:
        raise WorkspaceParseError("theta is not invertible")
    if phi_m.invert() is None:
        raise WorkspaceParseError("phi is not invertible")
    fn = build_freenil(args.n, theta_m.field)
    ext = fn.extension
    closed = inducible_nil2(theta_m, phi_m, args.n)
    pair = AutPair(AlgebraMap(ext.A, ext.A, theta_m), AlgebraMap(ext.B, ext.B, phi_m))
    engine = try_lift(pair, ext)
    report = {
        "command": "freenil",
        "n": args.n,
        "closed_form": "INDUCIBLE" if closed else "OBSTRUCTED",
        "engine": "INDUCIBLE" if engine.inducible else "OBSTRUCTED",
        "agreement": closed == engine.inducible,
    }
    _emit(report, args.output, stream)
    if not report["agreement"]:
        return EXIT_INVARIANT
    return EXIT_OK if closed else EXIT_OBSTRUCTED


def _freenil_document(fn) -> WorkspaceDocument:
    n = fn.n
    base = f"L_{n}_2"
    ext = fn.extension
    doc = WorkspaceDocument(field=ext.L.field)
    doc.algebras[base] = ext.L
    doc.algebras[f"{base}_derived"] = ext.A
    doc.algebras[f"{base}_abelianized"] = ext.B
    doc.maps[f"{base}_inj"] = ext.inj
    doc.map_specs[f"{base}_inj"] = (f"{base}_derived", base)
    doc.maps[f"{base}_proj"] = ext.proj
    doc.map_specs[f"{base}_proj"] = (base, f"{base}_abelianized")
    doc.maps[f"{base}_sect"] = ext.sect
    doc.map_specs[f"{base}_sect"] = (f"{base}_abelianized", base)
    doc.extensions[f"{base}_central"] = ext
    doc.extension_stanzas[f"{base}_central"] = {
        "L": base,
        "inj": f"{base}_inj",
        "proj": f"{base}_proj",
        "sect": f"{base}_sect",
    }
    return doc


def cmd_enumerate(args, stream) -> int:
    doc = _loaded(args)
    ext = _need(doc, "extensions", args.extension)
    try:
        aut_a = enumerate_aut_A(ext)
        pairs = enumerate_compatible_pairs(ext)
    except (FiniteFieldRequiredError, EnumerationGuardError) as exc:
        raise WorkspaceParseError(str(exc)) from exc
    fix = aut_fixing_both(ext)
    images = {
        (p.theta.matrix.entries, p.phi.matrix.entries) for p in (tau(g, ext) for g in aut_a)
    }
    kernel = {
        (p.theta.matrix.entries, p.phi.matrix.entries)
        for p in pairs
        if wells(p, ext).is_zero
    }
    order_ok = len(aut_a) == fix.order() * len(images)
    exact_ok = kernel == images
    report = {
        "command": "enumerate",
        "extension": args.extension,
        "aut_A_order": len(aut_a),
        "z1_order": fix.order(),
        "image_tau_order": len(images),
        "compatible_pairs": len(pairs),
        "kernel_wells_order": len(kernel),
        "order_identity": "pass" if order_ok else "fail",
        "image_equals_kernel": "pass" if exact_ok else "fail",
    }
    _emit(report, args.output, stream)
    return EXIT_OK if order_ok and exact_ok else EXIT_INVARIANT


def cmd_semidirect(args, stream) -> int:
    doc = _loaded(args)
    act = _need(doc, "actions", args.action)
    ext = semidirect(act)
    b_name, a_name = doc.action_specs[args.action]
    base = f"{args.action}_semidirect"
    out = WorkspaceDocument(field=doc.field)
    out.algebras[a_name] = act.A
    out.algebras[b_name] = act.B
    out.algebras[base] = ext.L
    out.maps[f"{base}_inj"] = ext.inj
    out.map_specs[f"{base}_inj"] = (a_name, base)
    out.maps[f"{base}_proj"] = ext.proj
    out.map_specs[f"{base}_proj"] = (base, b_name)
    out.maps[f"{base}_sect"] = ext.sect
    out.map_specs[f"{base}_sect"] = (b_name, base)
    out.actions[args.action] = act
    out.action_specs[args.action] = (b_name, a_name)
    out.extensions[base] = ext
    out.extension_stanzas[base] = {
        "L": base,
        "inj": f"{base}_inj",
        "proj": f"{base}_proj",
        "sect": f"{base}_sect",
    }
    stream.write(emit_workspace(out))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lielift",
        description="Exact cohomology and automorphism lifting for abelian Lie algebra extensions.",
    )
    parser.add_argument("--output", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate every object in a workspace file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cohomology", help="dimensions of Z^k, B^k, H^k for a named action")
    p.add_argument("file")
    p.add_argument("action")
    p.add_argument("degree", type=int)
    p.add_argument("--representatives", action="store_true")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("cocycle", help="extract the 2-cocycle of a named extension")
    p.add_argument("file")
    p.add_argument("extension")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("lift", help="decide whether a pair of automorphisms lifts")
    p.add_argument("file")
    p.add_argument("extension")
    p.add_argument("theta")
    p.add_argument("phi")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("freenil", help="free 2-step nilpotent workspace or closed-form lifting test")
    p.add_argument("n", type=int)
    p.add_argument("--theta", help="JSON file with the derived-subalgebra matrix")
    p.add_argument("--phi", help="JSON file with the abelianization matrix")
    p.set_defaults(func=cmd_freenil)

    p = sub.add_parser("enumerate", help="audit the exact sequence by brute force over GF(p)")
    p.add_argument("file")
    p.add_argument("extension")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("semidirect", help="emit the semidirect-product workspace of a named action")
    p.add_argument("file")
    p.add_argument("action")
    p.set_defaults(func=cmd_semidirect)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except WorkspaceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
