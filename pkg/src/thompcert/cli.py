"""Command-line front end.

Exit codes: 0 success (or verified), 1 verification failed, 2 usage or parse
error, 3 precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .certificate import (
    build_certificate,
    build_commuting_family,
    certificate_from_dict,
    certificate_to_json,
    family_from_json,
    family_to_json,
    verify_certificate,
    verify_commuting_family,
)
from .dyadic import Space, parse_dyadic, parse_dyset, parse_interval, set_size
from .elements import (
    Element,
    ElementClass,
    compose,
    equals,
    evaluate,
    format_element,
    invert,
    parse_element_or_word,
    reduce,
    tree_words,
)
from .errors import (
    BuildError,
    ClassError,
    DomainError,
    ExtendNeeded,
    GroupMembershipError,
    ParseError,
    PreconditionError,
    StructuralError,
    UsageError,
)
from .qadic import (
    PermGroupSpec,
    format_qelement,
    parse_perm,
    parse_qelement,
    q_apply,
    q_build_certificate,
    q_certificate_from_json,
    q_certificate_to_json,
    q_compose,
    q_equals,
    q_invert,
    q_support_cover,
    q_support_size,
    q_verify_certificate,
)
from .small_support import decompose_small
from .support import support_cover
from .transporter import shrink_into, shrink_within

OK, FAILED, USAGE, PRECONDITION = 0, 1, 2, 3


def render_dot(g: Element) -> str:
    """Two trees side by side; range leaves carry the label of their preimage."""
    lines = ["digraph element {", "  node [shape=circle, fontsize=10];"]
    dom = g.domain_words
    rng = g.range_words
    label_of_range = {r: str(i + 1) for i, (_, r) in enumerate(g.rules)}
    for side, leaves, labels in (
        ("d", dom, {w: str(i + 1) for i, w in enumerate(dom)}),
        ("r", rng, label_of_range),
    ):
        title = "domain" if side == "d" else "range"
        lines.append(f"  subgraph cluster_{title} {{")
        lines.append(f'    label="{title}";')
        nodes = sorted({w[:n] for w in leaves for n in range(len(w) + 1)}, key=lambda w: (len(w), w))
        for w in nodes:
            name = f"{side}_{w or 'root'}"
            if w in labels:
                lines.append(f'    {name} [shape=plaintext, label="{labels[w]}"];')
            else:
                lines.append(f'    {name} [label="", width=0.15];')
        for w in nodes:
            if w:
                parent = f"{side}_{w[:-1] or 'root'}"
                lines.append(f"    {parent} -> {side}_{w};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _element(text: str, cls: str) -> Element:
    return parse_element_or_word(text, "V" if cls == "Vq" else cls)


def _group(args) -> PermGroupSpec:
    q = args.q
    if args.group in (None, "trivial"):
        return PermGroupSpec.trivial(q)
    if args.group == "symmetric":
        return PermGroupSpec.symmetric(q)
    gens = [parse_perm(g, q) for g in args.group.split(",") if g.strip()]
    return PermGroupSpec(q, tuple(gens))


def _write(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_input(args) -> str:
    path = args.path or args.inp
    if not path or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _report(report, args) -> int:
    if args.format == "json":
        data = {"checks": [{"id": n, "pass": ok, "detail": d} for n, ok, d in report.checks],
                "overall": report.overall, "assumed_facts": report.assumed_facts}
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(report.lines()) + "\n")
    return OK if report.overall else FAILED


# -- verbs ----------------------------------------------------------------------------

def cmd_eval(args) -> int:
    g = _element(args.element, args.cls)
    print(evaluate(g, parse_dyadic(args.x)))
    return OK


def cmd_compose(args) -> int:
    out = _element(args.elements[-1], args.cls)
    for text in reversed(args.elements[:-1]):
        out = compose(_element(text, args.cls), out)
    print(format_element(out))
    return OK


def cmd_inv(args) -> int:
    print(format_element(invert(_element(args.element, args.cls))))
    return OK


def cmd_reduce(args) -> int:
    print(format_element(reduce(_element(args.element, args.cls))))
    return OK


def cmd_eq(args) -> int:
    same = equals(_element(args.left, args.cls), _element(args.right, args.cls))
    print("true" if same else "false")
    return OK


def cmd_support(args) -> int:
    cover = support_cover(_element(args.element, args.cls))
    print(f"cover {cover}")
    print(f"size {set_size(cover)}")
    return OK


def cmd_decompose(args) -> int:
    eps = parse_dyadic(args.eps)
    fl = decompose_small(_element(args.element, args.cls), eps)
    if args.format == "json":
        data = {"target": format_element(fl.target), "eps": str(eps),
                "factors": [format_element(f) for f in fl.factors]}
        _write(args, json.dumps(data, indent=2) + "\n")
    else:
        _write(args, "".join(format_element(f) + "\n" for f in fl.factors))
    ok = fl.verify()
    print(f"{len(fl.factors)} factors, product {'matches' if ok else 'DIFFERS'}", file=sys.stderr)
    return OK if ok else FAILED


def cmd_transport(args) -> int:
    U2 = parse_dyset(args.u2, Space.CIRCLE)
    U1 = parse_dyset(args.u1, Space.CIRCLE)
    if args.within:
        g = shrink_within(args.cls, parse_interval(args.within), U2, U1)
    else:
        if args.x is None:
            raise UsageError("transport needs --x (excluded point) or --within I")
        cls = "T" if args.cls == "F" else args.cls
        g = shrink_into(cls, U2, U1, parse_dyadic(args.x))
    print(format_element(g))
    return OK


def cmd_certify(args) -> int:
    if args.cls == "Vq":
        group = _group(args)
        s = parse_qelement(args.element or args.word, group)
        text = q_certificate_to_json(q_build_certificate(s, args.dim))
    else:
        text = args.word or args.element
        if text is None:
            raise UsageError("certify needs --word or an element")
        cls = None if args.cls == "F" else args.cls
        c = build_certificate(_element(text, args.cls), args.dim, cls)
        text = certificate_to_json(c)
    _write(args, text)
    return OK


def cmd_verify(args) -> int:
    text = _read_input(args)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"input is not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise StructuralError("input must be a JSON object")
    if "movers" in data:
        return _report(verify_commuting_family(family_from_json(text)), args)
    if data.get("class") == "Vq":
        return _report(q_verify_certificate(q_certificate_from_json(text)), args)
    return _report(verify_certificate(certificate_from_dict(data)), args)


def cmd_bridson(args) -> int:
    S = [_element(t, args.cls) for t in args.elements]
    if args.eps:
        eps = parse_dyadic(args.eps)
        S = [f for g in S for f in decompose_small(g, eps).factors]
    fam = build_commuting_family(S, args.dim, seed=args.seed)
    if args.format == "json":
        _write(args, family_to_json(fam))
        return OK
    return _report(verify_commuting_family(fam), args)


def cmd_qop(args) -> int:
    group = _group(args)
    load = lambda t: parse_qelement(t, group)
    op = args.op
    operands = args.operands
    need = {"apply": 2, "compose": 2, "eq": 2, "inv": 1, "normalize": 1, "support": 1}
    if op not in need or len(operands) != need[op]:
        raise UsageError(f"qop {op} takes {need.get(op, '?')} operand(s)")
    if op == "apply":
        print(q_apply(load(operands[0]), operands[1]))
    elif op == "compose":
        print(format_qelement(q_compose(load(operands[0]), load(operands[1]))))
    elif op == "eq":
        print("true" if q_equals(load(operands[0]), load(operands[1])) else "false")
    elif op == "inv":
        print(format_qelement(q_invert(load(operands[0]))))
    elif op == "normalize":
        print(format_qelement(load(operands[0])))
    else:
        v = load(operands[0])
        print("cover {" + ",".join(w or "-" for w in q_support_cover(v)) + "}")
        print(f"size {q_support_size(v)}")
    return OK


def cmd_render(args) -> int:
    _write(args, render_dot(_element(args.element, args.cls)))
    return OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="cls", choices=["F", "T", "V", "Vq"], default="V")
    common.add_argument("--dim", type=int, default=1, help="dimension bound k")
    common.add_argument("--eps", help="dyadic a/2^b")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--in", dest="inp")
    common.add_argument("--out")
    common.add_argument("--q", type=int, default=2)
    common.add_argument("--group", help="trivial, symmetric, or comma-separated cycles")

    p = argparse.ArgumentParser(prog="thompcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = verb("eval", cmd_eval, "image of a point")
    sp.add_argument("element")
    sp.add_argument("x")
    sp = verb("compose", cmd_compose, "product, rightmost applied first")
    sp.add_argument("elements", nargs="+")
    sp = verb("inv", cmd_inv, "inverse")
    sp.add_argument("element")
    sp = verb("reduce", cmd_reduce, "reduced tree pair")
    sp.add_argument("element")
    sp = verb("eq", cmd_eq, "equality in the group")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = verb("support", cmd_support, "support cover and its size")
    sp.add_argument("element")
    sp = verb("decompose", cmd_decompose, "small-support factorisation")
    sp.add_argument("element")
    sp = verb("transport", cmd_transport, "carry U2 into U1")
    sp.add_argument("--u2", required=True)
    sp.add_argument("--u1", required=True)
    sp.add_argument("--x")
    sp.add_argument("--within", help="interval I for the relative version")
    sp = verb("certify", cmd_certify, "build a fixed-point certificate")
    sp.add_argument("element", nargs="?")
    sp.add_argument("--word")
    sp = verb("verify", cmd_verify, "check a certificate or commuting family")
    sp.add_argument("path", nargs="?")
    sp = verb("bridson", cmd_bridson, "commuting-family hypotheses")
    sp.add_argument("elements", nargs="*")
    sp = verb("qop", cmd_qop, "operations on q-adic rule tables")
    sp.add_argument("op", choices=["apply", "compose", "eq", "inv", "normalize", "support"])
    sp.add_argument("operands", nargs="+")
    sp = verb("render", cmd_render, "DOT diagram of a tree pair")
    sp.add_argument("element")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.eps is not None and args.verb not in ("decompose", "bridson"):
        parser.error("--eps only applies to decompose and bridson")
    if args.verb == "decompose" and args.eps is None:
        parser.error("decompose needs --eps")
    try:
        return args.func(args)
    except (ParseError, UsageError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (PreconditionError, ClassError, DomainError, GroupMembershipError,
            ExtendNeeded, BuildError) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
