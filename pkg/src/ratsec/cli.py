"""Command-line interface.

Every subcommand prints JSON (or DOT / plain text where asked) to stdout.
Exit codes: 0 when all checks pass, 1 when a property is violated, 2 for
usage, input or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import automata as fa
from . import catalog
from . import grigorchuk as gr
from . import groups
from . import orders
from . import verify
from .automata import show_word
from .errors import CapacityError, RatsecError, RegexSyntaxError, SchemaError

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, fmt="json"):
    if fmt == "json" or not isinstance(obj, str):
        print(json.dumps(obj, ensure_ascii=False, indent=2))
    else:
        sys.stdout.write(obj if obj.endswith("\n") else obj + "\n")


def _positive(name):
    def parse(text):
        v = int(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v

    return parse


def load_automaton(spec: str) -> fa.Automaton:
    """``builtin:NAME`` or a path to an automaton JSON file."""
    if spec.startswith("builtin:"):
        try:
            return catalog.get(spec[len("builtin:") :])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    if not os.path.exists(spec):
        raise UsageError(f"no such file: {spec}")
    return fa.load(spec)


def export_dot(m: fa.Automaton, path, name="automaton"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(fa.to_dot(m, name))


def _input(args) -> fa.Automaton:
    if args.regex is not None:
        alphabet = args.alphabet.split(",") if args.alphabet else None
        return fa.build_from_regex(args.regex, alphabet)
    if args.lang is None:
        raise UsageError("give --lang or --regex")
    return load_automaton(args.lang)


def _automaton_out(m, args):
    if args.format == "dot":
        _emit(fa.to_dot(m), "dot")
    elif args.format == "text":
        doc = fa.to_json(m)
        lines = [f"states: {' '.join(doc['states'])}", f"initial: {doc['initial']}"]
        lines.append(f"terminal: {' '.join(doc['terminal'])}")
        lines += [f"{p} --{a}--> {q}" for p, a, q in doc["edges"]]
        _emit("\n".join(lines), "text")
    else:
        _emit(fa.to_json(m))
    return OK


# ---------------------------------------------------------------------------
# automaton


def cmd_automaton(args):
    m = _input(args)
    action = args.action
    if action == "det":
        return _automaton_out(fa.determinize(m), args)
    if action == "trim":
        return _automaton_out(fa.trim(m), args)
    if action == "combine":
        other = load_automaton(args.other) if args.other else None
        if args.mode not in ("star", "complement") and other is None:
            raise UsageError(f"--with is required for {args.mode}")
        return _automaton_out(fa.boolean_combine(m, other, args.mode), args)
    if action == "classify":
        rep = fa.growth_classify(m)
        _emit({"growth": rep.kind.value, "witness": [show_word(x) for x in rep.witness]})
        return OK
    if action == "enumerate":
        words = fa.enumerate_words(m, args.cap)
        if args.format == "text":
            _emit("\n".join(show_word(w) for w in words), "text")
        else:
            _emit({"max_len": args.cap, "count": len(words), "words": [show_word(w) for w in words]})
        return OK
    if action == "dot":
        if args.out:
            export_dot(m, args.out)
        else:
            _emit(fa.to_dot(m), "dot")
        return OK
    raise UsageError(f"unknown automaton action {action!r}")


# ---------------------------------------------------------------------------
# xsection


def _lamp_language(lamp: groups.Group) -> fa.Automaton:
    if lamp.kind == "cyclic":
        return fa.from_words(["a" * i for i in range(lamp.identity.order)], lamp.letters)
    if lamp.kind == "lattice" and len(lamp.letters) == 2:
        return orders.mirror_language(orders.plus("t", lamp.letters), lamp.inverse_letter, lamp.letters)
    raise UsageError(f"no default cross-section for lamp group {lamp.name}")


def cmd_xsection(args):
    if args.action == "check":
        group = groups.parse_group(args.group)
        m = load_automaton(args.lang)
        rep = verify.check_cross_section(m, group, args.cap, args.radius)
        out = rep.to_json(group)
        out["ok"] = rep.injective and not rep.uncovered
        _emit(out)
        return OK if out["ok"] else VIOLATION
    if args.action == "build-wreath":
        lamp = groups.parse_group(args.lamp)
        base = groups.parse_group(args.base)
        if base.kind != "lattice" or len(base.letters) != 2:
            raise UsageError("the base group must be Z")
        lang_q = orders.mirror_language(orders.plus("t", base.letters), base.inverse_letter, base.letters)
        m = orders.wreath_cross_section(
            _lamp_language(lamp), lang_q, orders.plus("t", base.letters), lamp, base
        )
        return _automaton_out(m, args)
    if args.action == "mirror":
        cone = orders.build_cone(args.cone)
        return _automaton_out(orders.mirror_completion(cone), args)
    raise UsageError(f"unknown xsection action {args.action!r}")


# ---------------------------------------------------------------------------
# order


def cmd_order(args):
    cones = [orders.build_cone(r) for r in args.cone]
    cone = cones[0]
    group = cone.group
    if args.action == "contains":
        _emit({"cone": cone.name, "word": args.word, "positive": bool(cone(group.evaluate(args.word)))})
        return OK
    if args.action == "compare":
        if args.word2 is None:
            raise UsageError("compare needs --word and --word2")
        rel = orders.compare(cone, group.evaluate(args.word), group.evaluate(args.word2))
        _emit({"cone": cone.name, "relation": rel})
        return OK
    if args.action == "chain-density":
        ball = groups.ball_enumerate(group, args.radius)
        rep = orders.chain_density(cone, list(ball.elements), args.cap)
        _emit(
            {
                "cone": cone.name,
                "size": len(rep.subset),
                "max_chain": rep.max_chain,
                "density": f"{rep.density.numerator}/{rep.density.denominator}",
                "chain": [show_word(ball.elements[g]) for g in rep.chain],
            }
        )
        return OK
    if args.action == "antichain":
        items = [group.evaluate(w) for w in args.words]
        ok, pair = orders.antichain_check(cones, items)
        _emit({"antichain": ok, "pair": [group.show(g) for g in pair] if pair else None})
        return OK if ok else VIOLATION
    if args.action == "axioms":
        rep = verify.cone_axioms_check(cone, args.radius)
        _emit(rep.to_json())
        return OK if rep.ok else VIOLATION
    raise UsageError(f"unknown order action {args.action!r}")


# ---------------------------------------------------------------------------
# houghton


def _houghton_element(args, H):
    if args.perm is not None:
        return groups.parse_cycles(args.perm)
    if args.word is not None:
        return H.evaluate(args.word)
    raise UsageError("give --word or --perm")


def cmd_houghton(args):
    H = groups.houghton2()
    if args.action == "crossing":
        g = _houghton_element(args, H)
        _emit(groups.crossing_number(g))
        return OK
    if args.action == "witness":
        g = groups.houghton_witness(args.K)
        _emit({"K": args.K, "cycles": groups.format_cycles(g), "word": show_word(H.word_for(g))})
        return OK
    if args.action == "membership":
        g = _houghton_element(args, H)
        a, b = (int(v) for v in args.interval.split(","))
        res = verify.bounded_power_membership(g, verify.sym_interval(a, b), args.m, args.depth)
        _emit(
            {
                "result": res.value,
                "crossing": groups.crossing_number(g),
                "witness": [[groups.format_cycles(s), sign] for s, sign in res.witness],
            }
        )
        return OK
    raise UsageError(f"unknown houghton action {args.action!r}")


# ---------------------------------------------------------------------------
# grig


def cmd_grig(args):
    if args.action == "quotient-size":
        _emit(gr.quotient_size(args.n, cap=max(args.n, gr.DEFAULT_QUOTIENT_CAP)))
        return OK
    if args.action == "section":
        _emit(gr.section_at(args.word, args.vertex) or "e", "text")
        return OK
    if args.action == "phi":
        _emit(gr.phi_apply(args.word, args.times) or "e", "text")
        return OK
    if args.action == "complexity":
        x = gr.parse_hnn(args.element) if args.element else gr.hnn_from_word(args.word)
        k = gr.complexity_level(x, args.depth)
        _emit({"element": str(x), "k": "-inf" if k == float("-inf") else k})
        return OK
    if args.action == "relators":
        rows = []
        for i in range(args.max_i + 1):
            for w in gr.relator_family(i):
                rows.append({"i": i, "length": len(w), "trivial": gr.is_trivial(w)})
        _emit(rows)
        return OK if all(r["trivial"] for r in rows) else VIOLATION
    raise UsageError(f"unknown grig action {args.action!r}")


# ---------------------------------------------------------------------------
# verify


def _check_xsection(cap, radius):
    rep = verify.check_cross_section(catalog.get("lamplighter"), groups.lamplighter(), cap, radius)
    return "lamplighter cross-section", rep.injective and not rep.uncovered


def _check_pv(*_):
    z_geodesics = verify.pv_analysis(catalog.get("z-geodesics"), {"t": 1, "T": -1})
    lamplighter = verify.pv_analysis(catalog.get("lamplighter"), {"a": 0, "t": 1, "T": -1})
    return "loop weights", not z_geodesics.has_mixed and not lamplighter.has_mixed


def _check_cones(cap, radius):
    ok = True
    for recipe in ("z+", "lex:2", "ext(lex:1,lex:1)", "wr(z+,z+)", "bs1:2"):
        ok &= verify.cone_axioms_check(orders.build_cone(recipe), min(radius, 4), samples=2000).ok
    return "cone axioms", ok


def _check_crossing(*_):
    return "crossing numbers", all(groups.crossing_number(groups.houghton_witness(k)) == k for k in range(1, 11))


def _check_grig(*_):
    sizes = all(gr.quotient_size(n) == gr.predicted_quotient_size(n) for n in (3, 4))
    rels = all(gr.is_trivial(w) for i in range(3) for w in gr.relator_family(i))
    return "grigorchuk quotients and relators", sizes and rels


SUITE = (_check_xsection, _check_pv, _check_cones, _check_crossing, _check_grig)


def cmd_verify(args):
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            futures = [pool.submit(f, args.cap, args.radius) for f in SUITE]
            results = [f.result() for f in futures]
    else:
        results = [f(args.cap, args.radius) for f in SUITE]
    _emit([{"check": name, "ok": ok} for name, ok in results])
    return OK if all(ok for _, ok in results) else VIOLATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratsec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, lang=True):
        if lang:
            sp.add_argument("--lang", help="automaton JSON path or builtin:NAME")
        sp.add_argument("--format", choices=("json", "dot", "text"), default="json")
        sp.add_argument("--jobs", type=_positive("--jobs"), default=1)

    a = sub.add_parser("automaton", help="automaton operations")
    a.add_argument("action", choices=("det", "trim", "combine", "classify", "enumerate", "dot"))
    common(a)
    a.add_argument("--regex")
    a.add_argument("--alphabet", help="comma-separated letters for --regex")
    a.add_argument("--with", dest="other", help="second automaton for combine")
    a.add_argument("--mode", default="union", choices=[c.value for c in fa.Combine])
    a.add_argument("--cap", type=_positive("--cap"), default=6, help="max word length")
    a.add_argument("--out", help="write DOT here instead of stdout")
    a.set_defaults(func=cmd_automaton)

    x = sub.add_parser("xsection", help="cross-section checks and constructions")
    x.add_argument("action", choices=("check", "build-wreath", "mirror"))
    common(x)
    x.add_argument("--group", default="wr(C2,Z)")
    x.add_argument("--cap", type=_positive("--cap"), default=14)
    x.add_argument("--radius", type=_positive("--radius"), default=3)
    x.add_argument("--lamp", default="C2")
    x.add_argument("--base", default="Z")
    x.add_argument("--cone", default="z+")
    x.set_defaults(func=cmd_xsection)

    o = sub.add_parser("order", help="positive cones")
    o.add_argument("action", choices=("contains", "compare", "chain-density", "antichain", "axioms"))
    common(o, lang=False)
    o.add_argument("--cone", action="append", required=True)
    o.add_argument("--word", default="")
    o.add_argument("--word2")
    o.add_argument("--words", nargs="*", default=[])
    o.add_argument("--radius", type=_positive("--radius"), default=2)
    o.add_argument("--cap", type=_positive("--cap"), default=orders.DEFAULT_CHAIN_CAP)
    o.set_defaults(func=cmd_order)

    h = sub.add_parser("houghton", help="crossing numbers in H2")
    h.add_argument("action", choices=("crossing", "witness", "membership"))
    common(h, lang=False)
    h.add_argument("--word")
    h.add_argument("--perm", help='cycle notation, e.g. "(1 -1)(2 -2); shift=0"')
    h.add_argument("--K", type=_positive("--K"), default=3)
    h.add_argument("--interval", default="0,3")
    h.add_argument("--m", type=_positive("--m"), default=2)
    h.add_argument("--depth", type=_positive("--depth"), default=verify.DEFAULT_DEPTH_CAP)
    h.set_defaults(func=cmd_houghton)

    g = sub.add_parser("grig", help="Grigorchuk group")
    g.add_argument("action", choices=("quotient-size", "section", "phi", "complexity", "relators"))
    common(g, lang=False)
    g.add_argument("--n", type=_positive("--n"), default=3)
    g.add_argument("--word", default="")
    g.add_argument("--vertex", default="")
    g.add_argument("--times", type=int, default=1)
    g.add_argument("--element", help='HNN element such as "t^1[a]t^-1"')
    g.add_argument("--depth", type=_positive("--depth"), default=gr.DEFAULT_LEVEL_CAP)
    g.add_argument("--max-i", type=int, default=2)
    g.set_defaults(func=cmd_grig)

    v = sub.add_parser("verify", help="run the quick verification suite")
    v.add_argument("action", nargs="?", default="suite", choices=("suite",))
    common(v, lang=False)
    v.add_argument("--cap", type=_positive("--cap"), default=14)
    v.add_argument("--radius", type=_positive("--radius"), default=3)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, SchemaError, RegexSyntaxError, CapacityError, RatsecError, ValueError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
