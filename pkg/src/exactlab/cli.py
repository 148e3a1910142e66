"""exactlab command line.

    exactlab --spec FILE indecs
    exactlab --spec FILE ar [--dot]
    exactlab --spec FILE enumerate
    exactlab --spec FILE generate --conflation FILE
    exactlab --spec FILE relext --structure IDS [--csv]
    exactlab --spec FILE ideal EXPR
    exactlab --spec FILE verify SUITE
    exactlab --spec FILE kron closedset|hom|tau|radc|almostexact ...

Output is JSON with sorted keys (DOT or CSV where asked).  Exit codes: 0 ok,
1 verification mismatch, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .arknit import ARData, NotDynkin, ar_dot, dynkin_type, knit
from .exstruct import (
    e_bot,
    e_top,
    enumerate_all,
    generate,
    injectivity_ideal,
    oracle_enumerate,
    projectivity_ideal,
    rel_ext,
    structure_from_U,
)
from .idealcalc import (
    Ideal,
    OrdinalExpr,
    all_ideal,
    ideal_from_add,
    ideal_generate,
    is_fp_idempotent,
    ordinal_power,
    radical_ideal,
    zero_ideal,
)
from .kronsym import (
    KPoint,
    KronConfig,
    R,
    family_closed_set,
    hom_table,
    k_rep,
    normalize_label,
    parse_family,
    rad_c_omega_membership,
    tau_point,
    verify_almost_exact_p1,
    verify_tau,
)
from .linalg import Mat, q
from .repcore import Conflation, MorphismRep, Quiver, Rep, combine, ext_space, hom_basis, hom_dim
from .suites import DYNKIN_SUITES, suite_kronecker56


class CliError(Exception):
    """A usage or input error, reported as JSON with exit code 2."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def to_json_obj(self) -> dict:
        out = {"error": str(self)}
        if self.line is not None:
            out["line"] = self.line
        return out


@dataclass
class AlgebraSpec:
    kind: str
    vertices: int = 0
    arrows: list = field(default_factory=list)
    labels: tuple = ("0", "1", "inf")
    bound: int = 6

    def quiver(self) -> Quiver:
        return Quiver(self.vertices, self.arrows)

    def kron_config(self) -> KronConfig:
        return KronConfig(self.labels, self.bound)


def parse_spec(text: str) -> AlgebraSpec:
    spec = None
    names = set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, args = words[0], words[1:]
        if head == "algebra":
            if spec is not None:
                raise CliError("algebra declared twice", no)
            if len(args) != 1 or args[0] not in ("dynkin", "kronecker"):
                raise CliError("expected 'algebra dynkin' or 'algebra kronecker'", no)
            spec = AlgebraSpec(args[0])
            continue
        if spec is None:
            raise CliError("the first statement must be an 'algebra' line", no)
        try:
            if head == "vertices" and spec.kind == "dynkin":
                if len(args) != 1 or int(args[0]) < 1:
                    raise CliError("expected 'vertices N' with N >= 1", no)
                spec.vertices = int(args[0])
            elif head == "arrow" and spec.kind == "dynkin":
                if len(args) != 3:
                    raise CliError("expected 'arrow NAME SRC TGT'", no)
                name, s, t = args[0], int(args[1]), int(args[2])
                if name in names:
                    raise CliError(f"duplicate arrow name {name}", no)
                if not (1 <= s <= spec.vertices and 1 <= t <= spec.vertices):
                    raise CliError(f"arrow {name} uses a vertex outside 1..{spec.vertices}", no)
                names.add(name)
                spec.arrows.append((name, s, t))
            elif head == "labels" and spec.kind == "kronecker":
                if not args:
                    raise CliError("expected at least one label", no)
                spec.labels = tuple(normalize_label(a) for a in args)
            elif head == "bound" and spec.kind == "kronecker":
                if len(args) != 1 or int(args[0]) < 1:
                    raise CliError("expected 'bound N' with N >= 1", no)
                spec.bound = int(args[0])
            else:
                raise CliError(f"unexpected statement {head!r} for a {spec.kind} algebra", no)
        except ValueError as exc:
            raise CliError(str(exc), no) from None
    if spec is None:
        raise CliError("empty specification", 1)
    if spec.kind == "dynkin":
        if spec.vertices == 0:
            raise CliError("missing 'vertices' line")
        try:
            dynkin_type(spec.quiver())
        except NotDynkin as exc:
            raise CliError(f"not a Dynkin quiver: {exc}") from None
    return spec


# -- ideal expressions ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(add\{[^}]*\}|gen\([^)]*\)|rad|all|zero|\d+|w|[+*&^()])")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise CliError(f"cannot parse ideal expression at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _IdealParser:
    """expr := term (('+' | '&') term)*;  term := power ('*' power)*;
    power := atom ('^' exponent)*;  exponent := N | w | '(' ordinal ')'."""

    def __init__(self, ar: ARData, text: str, base: Path):
        self.ar, self.toks, self.i, self.base = ar, _tokenize(text), 0, base

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise CliError(f"expected {want or 'more input'} in ideal expression, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> Ideal:
        out = self.expr()
        if self.peek() is not None:
            raise CliError(f"unexpected {self.peek()!r} in ideal expression")
        return out

    def expr(self) -> Ideal:
        acc = self.term()
        while self.peek() in ("+", "&"):
            op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc & rhs
        return acc

    def term(self) -> Ideal:
        acc = self.power()
        while self.peek() == "*":
            self.take()
            acc = acc * self.power()
        return acc

    def power(self) -> Ideal:
        acc = self.atom()
        while self.peek() == "^":
            self.take()
            acc = ordinal_power(acc, self.exponent())
        return acc

    def exponent(self) -> OrdinalExpr:
        tok = self.peek()
        if tok == "(":
            self.take()
            alpha = self.ordinal()
            self.take(")")
            return alpha
        if tok == "w":
            self.take()
            return OrdinalExpr(1, 0)
        if tok is not None and tok.isdigit():
            return OrdinalExpr(0, int(self.take()))
        raise CliError(f"bad exponent {tok!r}")

    def ordinal(self) -> OrdinalExpr:
        if self.peek() is not None and self.peek().isdigit():
            return OrdinalExpr(0, int(self.take()))
        self.take("w")
        qv, r = 1, 0
        if self.peek() == "*":
            self.take()
            qv = int(self._int())
        if self.peek() == "+":
            self.take()
            r = int(self._int())
        return OrdinalExpr(qv, r)

    def _int(self) -> str:
        tok = self.take()
        if not tok.isdigit():
            raise CliError(f"expected an integer, got {tok!r}")
        return tok

    def atom(self) -> Ideal:
        tok = self.take()
        ar = self.ar
        if tok == "rad":
            return radical_ideal(ar)
        if tok == "all":
            return all_ideal(ar)
        if tok == "zero":
            return zero_ideal(ar)
        if tok.startswith("add{"):
            ids = [x.strip() for x in tok[4:-1].split(",") if x.strip()]
            for x in ids:
                if x not in ar.by_id:
                    raise CliError(f"unknown indecomposable {x}")
            return ideal_from_add(ar, ids)
        if tok.startswith("gen("):
            return ideal_generate(ar, load_morphisms(ar, self.base / tok[4:-1].strip()))
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise CliError(f"unexpected {tok!r} in ideal expression")


def parse_ideal(ar: ARData, text: str, base: Path = Path(".")) -> Ideal:
    return _IdealParser(ar, text, base).parse()


# -- file formats -------------------------------------------------------------------

def _matrix(rows, nrows: int, ncols: int) -> Mat:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise CliError(f"matrix does not have shape {nrows}x{ncols}")
    return Mat(nrows, ncols, [[q(str(a)) for a in r] for r in rows])


def _rep_from_json(quiver: Quiver, obj) -> Rep:
    dims = obj["dims"]
    if len(dims) != quiver.vertex_count:
        raise CliError("dimension vector has the wrong length")
    maps = obj.get("maps", {})
    mats = []
    for name, s, t in quiver.arrows:
        rows = maps.get(name)
        mats.append(Mat(dims[t - 1], dims[s - 1]) if rows is None else _matrix(rows, dims[t - 1], dims[s - 1]))
    return Rep(quiver, dims, mats)


def _morphism_from_json(src: Rep, tgt: Rep, mats) -> MorphismRep:
    if len(mats) != src.quiver.vertex_count:
        raise CliError("a morphism needs one matrix per vertex")
    return MorphismRep(src, tgt, [_matrix(m, tgt.dims[v], src.dims[v]) for v, m in enumerate(mats)])


def load_conflations(ar: ARData, path: Path) -> list[Conflation]:
    """{"left": rep, "middle": rep, "right": rep, "mono": [...], "epi": [...]} or a list of them,
    where rep = {"dims": [...], "maps": {arrow: rows}}."""
    data = _load_json(path)
    items = data if isinstance(data, list) else data.get("conflations", [data])
    out = []
    for k, obj in enumerate(items):
        try:
            L, M, Rr = (_rep_from_json(ar.quiver, obj[x]) for x in ("left", "middle", "right"))
            out.append(Conflation(_morphism_from_json(L, M, obj["mono"]), _morphism_from_json(M, Rr, obj["epi"])))
        except KeyError as exc:
            raise CliError(f"conflation {k}: missing field {exc}") from None
        except ValueError as exc:
            raise CliError(f"conflation {k}: {exc}") from None
    return out


def load_morphisms(ar: ARData, path: Path) -> list[MorphismRep]:
    """A list of {"source": id, "target": id} with either "coords" (in the Hom basis) or "maps"."""
    data = _load_json(path)
    out = []
    for k, obj in enumerate(data if isinstance(data, list) else [data]):
        try:
            X, Y = ar.rep(obj["source"]), ar.rep(obj["target"])
            if "coords" in obj:
                B = hom_basis(X, Y)
                if len(obj["coords"]) != len(B):
                    raise CliError(f"morphism {k}: expected {len(B)} coordinates")
                out.append(combine(B, [q(str(c)) for c in obj["coords"]], X, Y))
            else:
                out.append(_morphism_from_json(X, Y, obj["maps"]))
        except KeyError as exc:
            raise CliError(f"morphism {k}: missing field {exc}") from None
        except ValueError as exc:
            raise CliError(f"morphism {k}: {exc}") from None
    return out


def _load_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc.msg})", exc.lineno) from None


def parse_point(text: str) -> KPoint:
    t = text.strip()
    m = re.fullmatch(r"([PQ])(\d+)", t)
    if m:
        return KPoint(m.group(1), int(m.group(2)))
    m = re.fullmatch(r"R\(([^,]+),(\d+)\)", t.replace(" ", ""))
    if m:
        return R(m.group(1), int(m.group(2)))
    raise CliError(f"cannot parse point {text!r}; use P3, Q2 or R(0,3)")


# -- commands -----------------------------------------------------------------------

def _structure(ar: ARData, text: str):
    t = text.strip()
    if t == "top":
        return e_top(ar)
    if t == "bot":
        return e_bot(ar)
    ids = [x.strip() for x in t.split(",") if x.strip()]
    for x in ids:
        if x not in ar.by_id:
            raise CliError(f"unknown indecomposable {x}")
    try:
        return structure_from_U(ar, ids)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_indecs(ar: ARData, args) -> tuple[int, object]:
    return 0, [
        {"id": m.id, "dims": list(m.dims), "projective": m.is_projective, "injective": m.is_injective,
         "tau": m.tau, "tau_inv": m.tau_inv}
        for m in ar.indecs
    ]


def cmd_ar(ar: ARData, args) -> tuple[int, object]:
    if args.dot:
        return 0, ar_dot(ar)
    seqs = []
    for s in ar.sort_ids(ar.sequence_at):
        _, mids = ar.sequence_at[s]
        seqs.append({"start": s, "middle": list(mids), "end": ar.tau_inv(s)})
    return 0, {"indecs": ar.ids, "irreducible": [[s, t] for s, t, _ in ar.irreducible_maps],
               "sequences": seqs, "type": ar.dynkin_type}


def cmd_enumerate(ar: ARData, args) -> tuple[int, object]:
    structs = sorted((E.sorted_U() for E in enumerate_all(ar)), key=lambda u: (len(u), [ar.ids.index(x) for x in u]))
    oracle = oracle_enumerate(ar)
    agree = {frozenset(u) for u in structs} == set(oracle.mapping.values())
    return (0 if agree and oracle.bijective else 1), {
        "count": len(structs), "oracle_count": oracle.count, "oracle_agrees": agree and oracle.bijective,
        "structures": structs}


def cmd_generate(ar: ARData, args) -> tuple[int, object]:
    E = generate(ar, load_conflations(ar, Path(args.conflation)))
    return 0, {"U": E.sorted_U(), "missing": ar.sort_ids(set(ar.ids) - E.U),
               "is_top": E.U == e_top(ar).U, "is_bottom": E.U == e_bot(ar).U}


def relext_rows(E) -> list[dict]:
    ar = E.ar
    IE, PE = injectivity_ideal(E), projectivity_ideal(E)
    rows = []
    for x in ar.ids:
        for y in ar.ids:
            X, Y = ar.rep(x), ar.rep(y)
            lhs = rel_ext(E, X, Y).dim
            t, ti = ar.tau(x), ar.tau_inv(y)
            r1 = 0 if t is None else hom_dim(Y, ar.rep(t)) - IE.space(y, t).dim
            r2 = 0 if ti is None else hom_dim(ar.rep(ti), X) - PE.space(ti, x).dim
            rows.append({"x": x, "y": y, "rel_ext": lhs, "ext": ext_space(X, Y).dim,
                         "hom_tau_mod_I": r1, "hom_tauinv_mod_P": r2,
                         "status": "ok" if lhs == r1 == r2 else "mismatch"})
    return rows


def cmd_relext(ar: ARData, args) -> tuple[int, object]:
    E = _structure(ar, args.structure)
    rows = relext_rows(E)
    code = 0 if all(r["status"] == "ok" for r in rows) else 1
    if args.csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return code, buf.getvalue()
    return code, {"U": E.sorted_U(), "rows": rows}


def cmd_ideal(ar: ARData, args) -> tuple[int, object]:
    I = parse_ideal(ar, args.expr, Path(args.spec).parent)
    ok, U = is_fp_idempotent(I)
    return 0, {"expr": args.expr, "total_dim": I.total_dim, "fp_idempotent": ok,
               "U": ar.sort_ids(U) if ok else None, "identities": ar.sort_ids(I.identity_support()),
               "spaces": I.to_json_obj()}


def cmd_verify(spec: AlgebraSpec, args) -> tuple[int, object]:
    if args.suite == "kronecker56":
        if spec.kind != "kronecker":
            raise CliError("suite kronecker56 needs a kronecker specification")
        res = suite_kronecker56(spec.kron_config())
    else:
        if spec.kind != "dynkin":
            raise CliError(f"suite {args.suite} needs a dynkin specification")
        res = DYNKIN_SUITES[args.suite](knit(spec.quiver()))
    return (0 if res.passed else 1), res.to_json_obj()


def cmd_kron(spec: AlgebraSpec, args) -> tuple[int, object]:
    if spec.kind != "kronecker":
        raise CliError("kron commands need a kronecker specification")
    cfg = spec.kron_config()
    try:
        if args.kron_cmd == "closedset":
            return 0, family_closed_set(parse_family(args.family), cfg).to_json_obj()
        if args.kron_cmd == "hom":
            rows = [{"x": str(p), "y": str(r), "hom": h, "ext": e, "predicted": pr}
                    for p, r, h, e, pr in hom_table(cfg)]
            return (0 if all(r["hom"] == r["predicted"] for r in rows) else 1), rows
        if args.kron_cmd == "tau":
            p = parse_point(args.point)
            c = verify_tau(p, cfg)
            return (0 if c.ok else 1), {"point": str(p), "tau": str(tau_point(p)), "socle_dim": c.socle_dim,
                                        "middle_dims": list(c.middle_dims), "defect_ok": c.defect_ok}
        if args.kron_cmd == "radc":
            src, tgt = parse_point(args.source), parse_point(args.target)
            B = hom_basis(k_rep(src, cfg), k_rep(tgt, cfg))
            coords = [q(c) for c in args.coords.split(",")] if args.coords else [q(1)] + [q(0)] * (len(B) - 1)
            if len(coords) != len(B):
                raise CliError(f"expected {len(B)} coordinates")
            phi = combine(B, coords, k_rep(src, cfg), k_rep(tgt, cfg))
            C = [parse_point(x) for x in args.through.split(";")] if args.through else \
                [R(l, j) for l in cfg.labels for j in range(1, cfg.bound + 1)]
            return 0, {"verdict": rad_c_omega_membership(phi, C, args.depth, cfg), "depth": args.depth,
                       "through": [str(c) for c in sorted(set(C), key=KPoint.sort_key)]}
        if args.kron_cmd == "almostexact":
            rep = verify_almost_exact_p1(args.label, args.dim, cfg)
            return (0 if rep.passed else 1), {
                "label": rep.label, "dim_bound": rep.bound, "splits": rep.splits, "passed": rep.passed,
                "cases": [{"target": c.target, "morphism": c.morphism, "case": c.case, "passed": c.passed}
                          for c in rep.cases]}
    except ValueError as exc:
        raise CliError(str(exc)) from None
    raise CliError(f"unknown kron command {args.kron_cmd}")


# -- entry point ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exactlab", description="Exact structures and ideals of module categories.")
    p.add_argument("--spec", required=True, help="algebra specification file")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub.add_parser("indecs")
    a = sub.add_parser("ar")
    a.add_argument("--dot", action="store_true")
    sub.add_parser("enumerate")
    g = sub.add_parser("generate")
    g.add_argument("--conflation", required=True)
    r = sub.add_parser("relext")
    r.add_argument("--structure", required=True, help="comma separated ids, or top / bot")
    r.add_argument("--csv", action="store_true")
    i = sub.add_parser("ideal")
    i.add_argument("expr")
    v = sub.add_parser("verify")
    v.add_argument("suite", choices=sorted(list(DYNKIN_SUITES) + ["kronecker56"]))
    k = sub.add_parser("kron")
    ks = k.add_subparsers(dest="kron_cmd", required=True, parser_class=_Parser)
    ks.add_parser("closedset").add_argument("family")
    ks.add_parser("hom")
    ks.add_parser("tau").add_argument("point")
    rc = ks.add_parser("radc")
    rc.add_argument("source")
    rc.add_argument("target")
    rc.add_argument("--depth", type=int, default=8)
    rc.add_argument("--through", help="points separated by ';' (default: all in-bound regular points)")
    rc.add_argument("--coords", help="comma separated Hom-basis coordinates")
    ae = ks.add_parser("almostexact")
    ae.add_argument("label")
    ae.add_argument("--dim", type=int, default=6)
    return p


def _emit(payload) -> str:
    if isinstance(payload, str):
        return payload
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(argv: list[str]) -> tuple[int, str]:
    try:
        args = build_parser().parse_args(argv)
        try:
            text = Path(args.spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {args.spec}: {exc.strerror}") from None
        spec = parse_spec(text)
        if args.cmd == "verify":
            code, payload = cmd_verify(spec, args)
        elif args.cmd == "kron":
            code, payload = cmd_kron(spec, args)
        else:
            if spec.kind != "dynkin":
                raise CliError(f"{args.cmd} needs a dynkin specification")
            handler = {"indecs": cmd_indecs, "ar": cmd_ar, "enumerate": cmd_enumerate, "generate": cmd_generate,
                       "relext": cmd_relext, "ideal": cmd_ideal}[args.cmd]
            code, payload = handler(knit(spec.quiver()), args)
        return code, _emit(payload)
    except CliError as exc:
        return 2, _emit(exc.to_json_obj())


def main(argv: list[str] | None = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
