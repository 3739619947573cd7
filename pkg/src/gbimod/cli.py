"""Command-line front end: instance-description parsing, command dispatch,
and deterministic report emission.

Instance files are line oriented with four bracketed sections::

    [field]
    m = 4                      # cyclotomic conductor, optional

    [quiver]
    vertices = 2               # vertex names are 1..n
    arrow al: 1 -> 2
    arrow be: 2 -> 1

    [relations]
    al*be                      # linear combinations of path words
    be*al
    truncate = 3               # optional path-length bound

    [group]
    generator g order 4
    maps e1 -> e2              # images of idempotents and arrows
    maps al -> -1 * be
    maps be -> al

Scalar literals are rationals ``p/q`` and roots of unity ``zeta(k)^j``;
reports render all scalars exactly, never as decimals.
"""

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction

from .algebra import Algebra, GroupAction, Presentation, build_action
from .groups import AbelianGroup
from .scalars import make_field
from .twocat import (
    BUILTIN_NAMES,
    AdjunctionError,
    NeedsLargerConductor,
    NotInnerError,
    UnsupportedAlgebraError,
    ZigzagError,
    adjunction,
    automorphism_toolkit,
    builtin,
    catalogue,
    cells,
    classify_count,
    end_rad_profile,
    fiat_report,
    functor_tensor_check,
    hcell_realization_check,
    hcell_solve,
    interchange_check,
    mult_table,
    table_is_associative,
)


class SpecError(ValueError):
    """Syntax error in an instance description, annotated with its line."""


# ---------------------------------------------------------------------------
# instance description parsing


class InstanceSpec:
    """Parsed instance description; build_instance turns it into an action."""

    def __init__(self):
        self.m = None
        self.vertices = 0
        self.arrows = []      # (name, src, tgt) vertex names as strings
        self.relations = []   # list of [(factors, word)]
        self.truncate = None
        self.generators = []  # (name, order, {element: [(factors, word)]})


_RAT = re.compile(r"[+-]?\d+(?:/\d+)?\Z")
_ZETA = re.compile(r"zeta\((\d+)\)(?:\^([+-]?\d+))?\Z")
_ARROW = re.compile(r"arrow\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\Z")
_GENERATOR = re.compile(r"generator\s+(\w+)\s+order\s+(\d+)\Z")
_MAPS = re.compile(r"maps\s+(\w+)\s*->\s*(.+)\Z")
_ASSIGN = re.compile(r"(\w+)\s*=\s*(\S+)\Z")


def _split_terms(text: str, where: str):
    """Split a linear combination on top-level signs, keeping each sign
    attached to its term."""
    terms, cur, depth, prev = [], "", 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecError(f"{where}: unbalanced parentheses")
        if ch in "+-" and depth == 0 and prev not in ("", "*", "/", "^"):
            terms.append(cur)
            cur = ch
            prev = ""
            continue
        cur += ch
        if not ch.isspace():
            prev = ch
    if depth:
        raise SpecError(f"{where}: unbalanced parentheses")
    terms.append(cur)
    return terms


def _parse_term(term: str, where: str):
    body = term.strip()
    sign = 1
    while body[:1] in ("+", "-"):
        if body[0] == "-":
            sign = -sign
        body = body[1:].lstrip()
    if not body:
        raise SpecError(f"{where}: empty term")
    factors, names = [], []
    for tok in body.split("*"):
        tok = tok.strip()
        if not tok:
            raise SpecError(f"{where}: empty factor in {term.strip()!r}")
        if _RAT.match(tok):
            factors.append(("rat", Fraction(tok)))
        elif (m := _ZETA.match(tok)) is not None:
            factors.append(("zeta", int(m.group(1)), int(m.group(2) or 1)))
        elif tok.isidentifier():
            names.append(tok)
        else:
            raise SpecError(f"{where}: cannot read factor {tok!r}")
    if not names:
        raise SpecError(f"{where}: term {term.strip()!r} names no path")
    if sign < 0:
        factors.append(("rat", Fraction(-1)))
    return factors, tuple(names)


def _parse_combination(text: str, where: str):
    return [_parse_term(t, where) for t in _split_terms(text, where)]


def parse_spec(text: str) -> InstanceSpec:
    spec = InstanceSpec()
    section = None
    current_maps = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if line.startswith("["):
            if line not in ("[field]", "[quiver]", "[relations]", "[group]"):
                raise SpecError(f"{where}: unknown section {line}")
            section = line[1:-1]
            continue
        if section is None:
            raise SpecError(f"{where}: data before any section header")
        if section == "field":
            m = _ASSIGN.match(line)
            if m is None or m.group(1) != "m":
                raise SpecError(f"{where}: expected 'm = <int>'")
            spec.m = int(m.group(2))
        elif section == "quiver":
            if (m := _ASSIGN.match(line)) is not None:
                if m.group(1) != "vertices":
                    raise SpecError(f"{where}: expected 'vertices = <int>'")
                spec.vertices = int(m.group(2))
            elif (m := _ARROW.match(line)) is not None:
                spec.arrows.append((m.group(1), m.group(2), m.group(3)))
            else:
                raise SpecError(f"{where}: expected a vertex count or an arrow")
        elif section == "relations":
            if (m := _ASSIGN.match(line)) is not None:
                if m.group(1) != "truncate":
                    raise SpecError(f"{where}: expected 'truncate = <int>'")
                spec.truncate = int(m.group(2))
            else:
                spec.relations.append(_parse_combination(line, where))
        else:  # group
            if (m := _GENERATOR.match(line)) is not None:
                current_maps = {}
                spec.generators.append((m.group(1), int(m.group(2)), current_maps))
            elif (m := _MAPS.match(line)) is not None:
                if current_maps is None:
                    raise SpecError(f"{where}: 'maps' before any generator")
                current_maps[m.group(1)] = _parse_combination(m.group(2), where)
            else:
                raise SpecError(f"{where}: expected 'generator' or 'maps'")
    if spec.vertices <= 0:
        raise SpecError("no [quiver] section with a positive vertex count")
    if not spec.generators:
        raise SpecError("no [group] section with a generator")
    return spec


def _scalar_value(ctx, factors):
    val = ctx.one
    for f in factors:
        if f[0] == "rat":
            val = val * ctx.scalar(f[1])
        else:
            _, k, j = f
            val = val * ctx.zeta(k, j % k)
    return val


def build_instance(spec: InstanceSpec) -> GroupAction:
    orders = [o for _, o, _ in spec.generators]
    m = spec.m
    if m is None:
        m = 1
        for o in orders:
            m = math.lcm(m, o)
    ctx = make_field(m)
    verts = [str(i + 1) for i in range(spec.vertices)]
    rels = [[(_scalar_value(ctx, fs), word) for fs, word in rel]
            for rel in spec.relations]
    pres = Presentation(ctx, verts, spec.arrows, rels, truncate=spec.truncate)
    A = Algebra.from_presentation(pres)
    arrow_index = {name: i for i, (name, _, _) in enumerate(spec.arrows)}
    vert_index = {f"e{v}": i for i, v in enumerate(verts)}

    def element(fs, word, where):
        c = _scalar_value(ctx, fs)
        if len(word) == 1 and word[0] not in arrow_index:
            vi = vert_index.get(word[0])
            if vi is None:
                raise SpecError(f"{where}: unknown element {word[0]!r}")
            return {A.idem[vi]: c}
        try:
            idx_word = tuple(arrow_index[w] for w in word)
        except KeyError as exc:
            raise SpecError(f"{where}: unknown arrow {exc.args[0]!r}") from None
        vec = A.element_from_word(idx_word)
        return {k: c * v for k, v in vec.items()}

    images = []
    for gname, _, maps in spec.generators:
        img = {}
        for key, combo in maps.items():
            vec = {}
            for fs, word in combo:
                for k, v in element(fs, word, f"generator {gname}").items():
                    s = vec.get(k, ctx.zero) + v
                    if s:
                        vec[k] = s
                    elif k in vec:
                        del vec[k]
            img[key] = vec
        images.append(img)
    return build_action(A, AbelianGroup(orders), images)


def emit_cyclic(n: int) -> str:
    """Instance description of the n-vertex rotation example; parsing it
    back rebuilds the same algebra and action."""
    if n < 2:
        raise SpecError("cyclic instance needs n >= 2")
    lines = ["[field]", f"m = {n}", "", "[quiver]", f"vertices = {n}"]
    for i in range(n):
        lines.append(f"arrow a{i + 1}: {i + 1} -> {(i + 1) % n + 1}")
    lines.append("")
    lines.append("[relations]")
    for i in range(n):
        lines.append("*".join(f"a{(i + k) % n + 1}" for k in range(n)))
    lines.append("")
    lines.append("[group]")
    lines.append(f"generator g order {n}")
    for i in range(n):
        lines.append(f"maps e{i + 1} -> e{(i + 1) % n + 1}")
    for i in range(n):
        lines.append(f"maps a{i + 1} -> a{(i + 1) % n + 1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command implementations


def _load_instance(arg: str) -> tuple:
    if arg == "-":
        return build_instance(parse_spec(sys.stdin.read())), "<stdin>"
    if arg in BUILTIN_NAMES or re.fullmatch(r"cyclic:\d+", arg):
        return builtin(arg), arg
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
        return build_instance(parse_spec(text)), arg
    raise SpecError(f"unknown instance {arg!r}: neither a builtin name "
                    f"({', '.join(BUILTIN_NAMES)}) nor a readable file")


def _group_name(G: AbelianGroup) -> str:
    return " x ".join(f"Z{o}" for o in G.orders)


def _format_products(dec: dict, order: dict) -> str:
    if not dec:
        return "0"
    parts = []
    for l in sorted(dec, key=order.get):
        k = dec[l]
        parts.append(f"{k}*{l}" if k > 1 else l)
    return " + ".join(parts)


def _cmd_catalogue(act, name):
    cat = catalogue(act)
    entries = [{"label": l, "kind": cat.kind[l],
                "stabilizer": len(cat.objects[l].stab),
                "rank": cat.objects[l].rank()} for l in cat.labels]
    tree = {"command": "catalogue", "instance": name, "labels": entries}
    w = max(len(l) for l in cat.labels)
    lines = [f"catalogue of {name}: {len(cat.labels)} labels"]
    for e in entries:
        lines.append(f"  {e['label']:<{w}}  {e['kind']:<4} "
                     f"stabilizer {e['stabilizer']}  rank {e['rank']}")
    return tree, lines, False


def _cmd_table(act, name):
    cat = catalogue(act)
    table = mult_table(cat)
    order = {l: i for i, l in enumerate(cat.labels)}
    products = {la: {lb: dict(table[(la, lb)]) for lb in cat.labels}
                for la in cat.labels}
    tree = {"command": "table", "instance": name, "products": products}
    lines = [f"multiplication table of {name} ({len(cat.labels)} labels)"]
    for la in cat.labels:
        for lb in cat.labels:
            lines.append(f"  {la} * {lb} = "
                         f"{_format_products(table[(la, lb)], order)}")
    return tree, lines, False


def _cmd_cells(act, name):
    cat = catalogue(act)
    st = cells(cat, mult_table(cat))
    tree = {"command": "cells", "instance": name,
            "two_sided": [list(c) for c in st.two_sided_cells],
            "left": [list(c) for c in st.left_cells],
            "right": [list(c) for c in st.right_cells]}
    lines = [f"cells of {name}"]
    for title, cls in (("two-sided", st.two_sided_cells),
                       ("left", st.left_cells), ("right", st.right_cells)):
        sizes = ", ".join(str(len(c)) for c in cls)
        lines.append(f"  {title} cells ({len(cls)}; sizes {sizes}):")
        for c in cls:
            lines.append("    " + ", ".join(c))
    return tree, lines, False


def _cmd_adjunctions(act, name):
    cat = catalogue(act)
    entries = []
    failed = False
    for label in cat.labels:
        d = adjunction(cat, label)
        good = d.verify()
        failed = failed or not good
        entries.append({"label": label, "right": d.right_label,
                        "seeded": d.seeded, "zigzag": good})
    tree = {"command": "adjunctions", "instance": name, "labels": entries}
    w = max(len(l) for l in cat.labels)
    lines = [f"adjunctions on {name}: {len(entries)} labels"]
    for e in entries:
        lines.append(f"  {e['label']:<{w}}  right {e['right']:<{w}}  "
                     f"zigzag {'ok' if e['zigzag'] else 'FAIL'}"
                     f"{'' if e['seeded'] else '  (solved, not seeded)'}")
    return tree, lines, failed


def _cmd_fiat(act, name):
    cat = catalogue(act)
    rep = fiat_report(cat)
    tree = {"command": "fiat", "instance": name,
            "self_injective": rep["self_injective"],
            "weakly_fiat": rep["weakly_fiat"], "fiat": rep["fiat"],
            "star": rep["star"]}
    yn = lambda b: "yes" if b else "no"
    lines = [f"fiat report for {name}",
             f"  self-injective: {yn(rep['self_injective'])}",
             f"  weakly fiat:    {yn(rep['weakly_fiat'])}",
             f"  fiat:           {yn(rep['fiat'])}"]
    if rep["star"]:
        w = max(len(l) for l in rep["star"])
        for l in sorted(rep["star"]):
            lines.append(f"  star: {l:<{w}} -> {rep['star'][l]}")
    return tree, lines, False


def _cmd_classify(act, name):
    G = act.group
    entries, total = classify_count(G)
    rows = sorted(
        ({"order": len(e["subgroup"]),
          "invariant_factors": list(e["invariant_factors"]),
          "count": e["count"]} for e in entries),
        key=lambda r: (r["order"], r["invariant_factors"]))
    tree = {"command": "classify", "instance": name,
            "group": _group_name(G), "entries": rows, "total": total}
    lines = [f"classification count for {name} (group {_group_name(G)})"]
    for r in rows:
        invf = ", ".join(str(d) for d in r["invariant_factors"]) or "trivial"
        lines.append(f"  subgroup of order {r['order']} "
                     f"(invariants {invf}): {r['count']}")
    lines.append(f"  total: {total}")
    return tree, lines, False


def _cmd_hcell_solve(maxn):
    sols = hcell_solve(maxn)
    tree = {"command": "hcell-solve", "max": maxn,
            "solutions": [list(s) for s in sols], "count": len(sols)}
    lines = [f"two-element cell tables with entries up to {maxn}: "
             f"{len(sols)} solutions, all diagonal"]
    for s in sols:
        lines.append(f"  x={s[0]} y={s[1]} b={s[2]} c={s[3]}")
    return tree, lines, False


def _cmd_check(act, name):
    passed = []
    lines = [f"check {name}"]
    step = None
    try:
        step = "catalogue"
        cat = catalogue(act)
        passed.append(step)
        lines.append(f"  ok catalogue ({len(cat.labels)} labels)")

        step = "table"
        table = mult_table(cat)
        passed.append(step)
        lines.append("  ok table")

        step = "identity fusion"
        ids = [l for l in cat.labels if cat.kind[l] == "id"]
        by_chi = {cat.objects[l].chi.key(): l for l in ids}
        for la in ids:
            for lb in ids:
                prod = cat.objects[la].chi.mul(cat.objects[lb].chi)
                want = by_chi[prod.key()]
                assert table[(la, lb)] == {want: 1}, (la, lb)
        passed.append(step)
        lines.append("  ok identity fusion")

        step = "twist absorption"
        projs = [l for l in cat.labels if cat.kind[l] == "proj"]
        for li in ids:
            for lp in projs:
                for dec in (table[(li, lp)], table[(lp, li)]):
                    assert len(dec) == 1, (li, lp)
                    (lq, k), = dec.items()
                    assert k == 1 and cat.kind[lq] == "proj", (li, lp)
        passed.append(step)
        lines.append("  ok twist absorption")

        step = "table associativity"
        assert table_is_associative(cat, table)
        passed.append(step)
        lines.append("  ok table associativity")

        step = "endomorphisms modulo radical"
        for label, (dim, stab) in end_rad_profile(cat).items():
            assert dim == stab, label
        passed.append(step)
        lines.append("  ok endomorphisms modulo radical")

        step = "functor values against the table"
        functor_tensor_check(cat, table)
        passed.append(step)
        lines.append("  ok functor values against the table")

        step = "interchange law"
        interchange_check(cat, trials=20)
        passed.append(step)
        lines.append("  ok interchange law (20 random squares)")

        if act.algebra.is_self_injective():
            step = "adjunction zigzags"
            star = {}
            for label in cat.labels:
                d = adjunction(cat, label)
                assert d.verify(), label
                star[label] = d.right_label
            passed.append(step)
            lines.append("  ok adjunction zigzags")

            step = "star involution"
            assert sorted(star.values()) == sorted(cat.labels)
            assert all(star[star[l]] == l for l in cat.labels)
            passed.append(step)
            lines.append("  ok star involution")
        else:
            lines.append("  skip adjunctions (algebra is not self-injective)")
    except Exception as exc:  # noqa: BLE001 - report the first violation
        msg = f"{type(exc).__name__}: {exc}"
        lines.append(f"  FAIL {step}: {msg}")
        tree = {"command": "check", "instance": name, "passed": passed,
                "failed": step, "error": msg, "ok": False}
        return tree, lines, True
    lines.append(f"  all checks passed ({len(passed)})")
    tree = {"command": "check", "instance": name, "passed": passed,
            "failed": None, "error": None, "ok": True}
    return tree, lines, False


def _cmd_demo():
    act = builtin("signedswap")
    alg = act.algebra
    g = act.group.generators()[0]
    out = automorphism_toolkit(alg, act.mats[g])
    cat = catalogue(act)
    table = mult_table(cat)
    real = hcell_realization_check(cat, table)
    rep = fiat_report(cat)
    failed = not (out["fourth_power_identity"] and out["twist_central"]
                  and real["realized"] and rep["fiat"])
    render = alg.render_element
    yn = lambda b: "yes" if b else "no"
    tree = {"command": "signedswap-demo",
            "automorphism_order": out["order"],
            "witness": render(out["witness"]),
            "witness_inverse": render(out["witness_inverse"]),
            "twist": render(out["twist"]),
            "twist_central": out["twist_central"],
            "sqrt": render(out["sqrt"]),
            "sqrt_poly": [c.render() for c in out["sqrt_poly"]],
            "sigma_phi_order": out["sigma_phi_order"],
            "fourth_power_identity": out["fourth_power_identity"],
            "realization": {"realized": real["realized"], "n": real.get("n"),
                            "pair": list(real.get("pair", ())),
                            "cartan": real["cartan"]},
            "fiat": rep["fiat"]}
    lines = [
        "signedswap: two vertices, arrows both ways, two-step compositions "
        "zero, order-4 twisting automorphism",
        f"  order of the automorphism: {out['order']}",
        f"  inner witness for its square: a = {render(out['witness'])}",
        f"  twist of the witness: {render(out['twist'])} "
        f"(central: {yn(out['twist_central'])})",
        f"  square root of a^(-1): b = {render(out['sqrt'])}",
        "  polynomial giving b: [" +
        ", ".join(c.render() for c in out["sqrt_poly"]) + "]",
        f"  order of (conjugation by b) o automorphism: "
        f"{out['sigma_phi_order']} "
        f"(fourth power is the identity: {yn(out['fourth_power_identity'])})",
    ]
    if real["realized"]:
        lines.append(f"  cell realization: n = {real['n']}, pair "
                     f"{real['pair'][0]} / {real['pair'][1]}, "
                     f"cartan {real['cartan']}")
    else:
        lines.append(f"  cell realization failed: {real['reason']}")
    lines.append(f"  fiat: {yn(rep['fiat'])}")
    return tree, lines, failed


# ---------------------------------------------------------------------------
# dispatch


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gbimod",
        description="Exact reports on two-categories of group-symmetric "
                    "projective bimodules.")
    ap.add_argument("--json", action="store_true",
                    help="emit the report as JSON with sorted keys")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    inst_help = ("builtin name (%s, cyclic:<n>) or instance file, '-' reads "
                 "stdin" % ", ".join(n for n in BUILTIN_NAMES
                                     if not n.startswith("cyclic")))
    for cname, chelp in (
            ("check", "build an instance and verify every structural invariant"),
            ("catalogue", "list the completed one-morphism classes"),
            ("table", "full tensor multiplication table"),
            ("cells", "left, right and two-sided cells"),
            ("adjunctions", "construct all adjoint pairs and verify the zigzags"),
            ("fiat", "self-injectivity, weak fiatness, fiatness, star map"),
            ("classify", "cocycle-class counts per subgroup of the acting group"),
    ):
        p = sub.add_parser(cname, help=chelp)
        p.add_argument("instance", help=inst_help)
    p = sub.add_parser("hcell-solve",
                       help="enumerate two-element star-symmetric cell tables")
    p.add_argument("--max", type=int, required=True, metavar="N",
                   help="largest multiplicity to try")
    p = sub.add_parser("example", help="emit a builtin instance description")
    p.add_argument("family", choices=["cyclic"])
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    sub.add_parser("signedswap-demo",
                   help="automorphism and cell-realization walkthrough on "
                        "the signedswap instance")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "hcell-solve":
            tree, lines, failed = _cmd_hcell_solve(args.max)
        elif args.command == "example":
            text = emit_cyclic(args.n)
            tree = {"command": "example", "family": args.family,
                    "n": args.n, "text": text}
            lines = [text.rstrip("\n")]
            failed = False
        elif args.command == "signedswap-demo":
            tree, lines, failed = _cmd_demo()
        else:
            act, name = _load_instance(args.instance)
            handler = {"check": _cmd_check, "catalogue": _cmd_catalogue,
                       "table": _cmd_table, "cells": _cmd_cells,
                       "adjunctions": _cmd_adjunctions, "fiat": _cmd_fiat,
                       "classify": _cmd_classify}[args.command]
            tree, lines, failed = handler(act, name)
    except (ValueError, UnsupportedAlgebraError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (AdjunctionError, ZigzagError, NeedsLargerConductor,
            NotInnerError, AssertionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(tree, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
