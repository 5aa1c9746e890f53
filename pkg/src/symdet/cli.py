"""Command-line surface: parse, minimize, build, verify, bounds, demo.

Subcommands operate on the circuit/matrix text formats defined by the
library modules and print machine-readable output with ``--json``.  Exit
status is 0 on success, 1 when a construction or verification fails its
contract (including any theorem-bound violation, which is a hard error),
and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .circuits import (
    Circuit,
    CircuitBuilder,
    CircuitError,
    classify,
    measure,
    parse_circuit,
    render_circuit,
)
from .char2 import partial_perm_identity, partial_permanent, square_matrix_char2
from .determinant import det_sym_matrix
from .fields import GF2, GF2_16, PRIME_DEFAULT, RATIONAL, FieldSpec
from .formulas import sym_matrix, valiant_matrix
from .graphs import export_dot, parse_matrix, render_matrix
from .minimize import minimize
from .oracles import symbolic_det
from .polynomials import bounds_report
from .verify import identity_test
from .weakly_skew import ws_nonsym_matrix, ws_sym_matrix


def field_from_flag(text: str) -> FieldSpec:
    text = text.strip().lower()
    if text in ("q", "rational"):
        return RATIONAL
    if text in ("p61", "default", "p"):
        return PRIME_DEFAULT
    if text in ("gf2",):
        return GF2
    if text in ("gf2_16", "gf2k", "gf216"):
        return GF2_16
    if text.startswith("p:"):
        return FieldSpec.prime(int(text[2:]))
    if text.startswith("gf2:"):
        return FieldSpec.binary(int(text[4:]))
    raise argparse.ArgumentTypeError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------


class SyntaxErrorAt(CircuitError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "/"):
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise SyntaxErrorAt(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


def parse_expression(text: str, spec: FieldSpec = RATIONAL) -> Circuit:
    """Formula circuit for ``expr := term (('+'|'-') term)*`` with
    ``term := factor ('*' factor)*`` and parenthesized sub-expressions.

    Subtraction becomes an arrow weight -1 and constant multiplications ride
    on arrow weights (green semantics): ``2*(x+y)`` costs one addition gate.
    """
    from .fields import parse_element

    tokens = _tokenize(text)
    pos = 0
    b = CircuitBuilder(spec)

    def peek():
        return tokens[pos]

    def take(kind=None):
        nonlocal pos
        tok = tokens[pos]
        if kind and tok[0] != kind:
            raise SyntaxErrorAt(f"expected {kind}, got {tok[1]!r}", tok[2])
        pos += 1
        return tok

    # lowered form: (gate id or None, scalar); value = scalar * gate (or scalar)
    def parse_expr():
        sign = spec.one()
        if peek()[0] == "-":
            take()
            sign = -spec.one()
        arms = [(sign, parse_term())]
        while peek()[0] in ("+", "-"):
            op = take()[0]
            s = spec.one() if op == "+" else -spec.one()
            arms.append((s, parse_term()))
        return lower_sum(arms)

    def parse_term():
        factors = [parse_factor()]
        while peek()[0] == "*":
            take()
            factors.append(parse_factor())
        return lower_product(factors)

    def parse_factor():
        kind, value, at = peek()
        if kind == "num":
            take()
            return (None, parse_element(value, spec))
        if kind == "name":
            take()
            return (b.var(value), spec.one())
        if kind == "(":
            take()
            inner = parse_expr()
            take(")")
            return inner
        raise SyntaxErrorAt(f"unexpected token {value!r}", at)

    def lower_product(factors):
        scalar = spec.one()
        gates = []
        for g, s in factors:
            scalar = scalar * s
            if g is not None:
                gates.append(g)
        if not gates:
            return (None, scalar)
        acc = gates[0]
        for i, g in enumerate(gates[1:]):
            acc = b.mul(acc, g, scalar if i == 0 else spec.one(), spec.one())
            scalar = spec.one()
        return (acc, scalar)

    def lower_sum(arms):
        # each arm: (sign, (gate|None, scalar)); constants become 1-inputs
        parts = []
        for sign, (g, s) in arms:
            if g is None:
                if not s.is_zero():
                    parts.append((b.const(1), sign * s))
            else:
                parts.append((g, sign * s))
        if not parts:
            return (None, spec.zero())
        if len(parts) == 1:
            return parts[0]
        (g1, s1), (g2, s2) = parts[0], parts[1]
        acc = b.add(g1, g2, s1, s2)
        for g, s in parts[2:]:
            acc = b.add(acc, g, spec.one(), s)
        return (acc, spec.one())

    g, scalar = parse_expr()
    take("end")
    if g is None:
        g = b.const(scalar)
    elif not scalar.is_one():
        gate = b._gates[g]
        if gate.kind == "const":
            b._gates[g] = type(gate)(g, "const", value=scalar * gate.value)
        elif gate.kind in ("add", "mul"):
            # push the leftover scalar into the gate's arrow weights
            (a, wa), (bb, wb) = gate.args
            if gate.kind == "add":
                b._gates[g] = type(gate)(
                    g, gate.kind, args=((a, wa * scalar), (bb, wb * scalar))
                )
            else:
                b._gates[g] = type(gate)(
                    g, gate.kind, args=((a, wa * scalar), (bb, wb))
                )
        else:
            g = b.add(g, b.const(1), scalar, 0)
    return b.build([g])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _resolve_seed(args) -> int:
    if getattr(args, "ci", False) and args.seed is None:
        raise CircuitError("--ci requires an explicit --seed")
    return args.seed if args.seed is not None else 0


def _load_circuit(args) -> Circuit:
    spec = args.field
    if getattr(args, "expr", None):
        return parse_expression(args.expr, spec)
    if args.circuit == "-":
        return parse_circuit(sys.stdin.read(), spec)
    with open(args.circuit) as fh:
        return parse_circuit(fh.read(), spec)


def cmd_parse(args) -> int:
    c = _load_circuit(args)
    cl = classify(c)
    rep = measure(c)
    report = {
        "gates": len(c.gates),
        "outputs": len(c.outputs),
        "variables": list(c.variables),
        "is_formula": cl.is_formula,
        "is_weakly_skew": cl.is_weakly_skew,
        "skinny": rep.skinny,
        "fat": rep.fat,
        "var_inputs": rep.var_inputs,
        "green": rep.green,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
        if args.render:
            sys.stdout.write(render_circuit(c))
    return 0


def cmd_minimize(args) -> int:
    c = _load_circuit(args)
    sys.stdout.write(render_circuit(minimize(c)))
    return 0


_BUILDERS = {
    "valiant": ("green", lambda c, size: valiant_matrix(c)),
    "sym": ("skinny", lambda c, size: sym_matrix(c, size)),
    "ws-sym": ("fat", lambda c, size: ws_sym_matrix(c, size)),
    "ws-nonsym": ("fat", lambda c, size: ws_nonsym_matrix(c, size)),
}


def build_bound(method: str, size: str, c: Circuit) -> int:
    """Dimension bound promised by the applicable theorem."""
    rep = measure(c)
    if method == "valiant":
        # the builder decides on the minimized form: an addition-free green
        # form takes the diagonal fallback of dimension (variable leaves)+1
        from .formulas import _green_form

        has_add = any(g.kind == "add" for g in _green_form(c).gates.values())
        return rep.green + 1 if has_add else rep.var_inputs + 1
    if method == "sym":
        if size == "green":
            return 2 * rep.green + 3
        extra = sum(
            1 for g in c.gates.values() for _, w in g.args if not w.is_one()
        )
        return 2 * (rep.skinny + extra) + 3
    ei = rep.green + rep.var_inputs
    if method == "ws-sym":
        return 2 * rep.fat + 1 if size == "fat" else 2 * ei + 1
    if method == "ws-nonsym":
        return rep.fat + 1 if size == "fat" else ei + 1
    raise ValueError(method)


def cmd_build(args) -> int:
    c = _load_circuit(args)
    default_size, builder = _BUILDERS[args.method]
    size = args.size or default_size
    if args.method in ("sym", "ws-sym") and args.field.characteristic == 2:
        print("error: symmetric closing needs 1/2; characteristic 2 is not supported "
              "(see char2-square)", file=sys.stderr)
        return 1
    matrix = builder(c, size)
    bound = build_bound(args.method, size, c)
    report = {
        "method": args.method,
        "size": size,
        "dimension": matrix.dim,
        "bound": bound,
        "symmetric": matrix.symmetric,
    }
    if matrix.dim > bound:
        print(f"error: dimension {matrix.dim} exceeds bound {bound}", file=sys.stderr)
        return 1
    out = render_matrix(matrix)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    if args.json:
        report["matrix"] = matrix.to_json()
        print(json.dumps(report, indent=2))
    else:
        print(f"# {args.method} ({size}): dimension {matrix.dim} <= {bound}",
              file=sys.stderr)
        if args.method == "sym":
            # sqrt-weighted variant, not constructed here (needs square roots)
            print("# note: over the reals or complexes the symmetric dimension "
                  "can be sharpened to 2e+1 resp. 2e+2", file=sys.stderr)
        if not args.output:
            sys.stdout.write(out)
    if args.dot:
        cert_graph = None
        if args.method == "sym":
            from .formulas import build_sym_graph

            cert_graph = build_sym_graph(c, size).graph
        elif args.method == "ws-sym":
            from .weakly_skew import build_ws_graph

            cert_graph = build_ws_graph(c, size).graph
        elif args.method == "valiant":
            from .formulas import build_valiant_digraph

            cert_graph = build_valiant_digraph(c).graph
        if cert_graph is not None:
            with open(args.dot, "w") as fh:
                fh.write(export_dot(cert_graph))
    return 0


def cmd_detsym(args) -> int:
    matrix = det_sym_matrix(args.n)
    bound = 4 * args.n**3 + 7
    if matrix.dim > bound:
        print(f"error: dimension {matrix.dim} exceeds bound {bound}", file=sys.stderr)
        return 1
    print(f"# determinant representation n={args.n}: dimension {matrix.dim} <= {bound}",
          file=sys.stderr)
    sys.stdout.write(render_matrix(matrix))
    if args.dot:
        from .determinant import build_det_abp

        with open(args.dot, "w") as fh:
            fh.write(export_dot(build_det_abp(args.n).digraph))
    return 0


def cmd_char2_square(args) -> int:
    if args.field.characteristic != 2:
        args.field = GF2_16
    c = _load_circuit(args)
    matrix = square_matrix_char2(c)
    bound = 2 * measure(c).fat + 2
    print(f"# char-2 square: dimension {matrix.dim} <= {bound}", file=sys.stderr)
    if matrix.dim > bound:
        return 1
    sys.stdout.write(render_matrix(matrix))
    return 0


def cmd_pperm(args) -> int:
    with open(args.matrix) as fh:
        m = parse_matrix(fh.read(), args.field)
    p = partial_permanent(m)
    print(p.render())
    if args.check_identity:
        spec = args.field if args.field.characteristic == 2 else GF2_16
        verdict = partial_perm_identity(m, seed=_resolve_seed(args), spec=spec)
        print(f"det(A+I) == per*(B)^2 [{verdict.method}]: {verdict.ok}")
        return 0 if verdict.ok else 1
    return 0


def cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    c = _load_circuit(args)
    with open(args.matrix) as fh:
        m = parse_matrix(fh.read(), args.field)
    spec = args.test_field
    if spec is None:
        spec = args.field if args.field.size else PRIME_DEFAULT
    verdict = identity_test(
        c, m, trials=args.trials, spec=spec, seed=seed, power=args.power
    )
    if args.json:
        print(json.dumps(verdict.to_json(), indent=2))
    else:
        print(f"{verdict.status} (dimension {verdict.dimension}, field {verdict.field},"
              f" trials {verdict.trials})")
    return 0 if verdict.ok else 1


def cmd_bounds(args) -> int:
    print("n,d,formula_bound,sym_dimension_bound,quarez_dimension,monomial_formula_size")
    for n in range(1, args.n + 1) if args.table else [args.n]:
        for d in range(1, args.d + 1) if args.table else [args.d]:
            r = bounds_report(n, d)
            print(f"{r.n},{r.d},{r.formula_bound},{r.sym_dimension_bound},"
                  f"{r.quarez_dimension},{r.monomial_formula_size}")
    return 0


def cmd_demo(args) -> int:
    spec = RATIONAL
    print("== golden examples ==")
    m_3x3 = parse_matrix("3 symmetric\n0 x y\nx 0 z\ny z 0", spec)
    print("det [[0,x,y],[x,0,z],[y,z,0]] =", symbolic_det(m_3x3).render())
    first = parse_matrix(
        "5 symmetric\n0 x 0 y -1\nx 0 1 0 0\n0 1 0 -1 0\ny 0 -1 0 1/2\n-1 0 0 1/2 0",
        spec,
    )
    print("det(first 5x5 display) =", symbolic_det(first).render())
    second = parse_matrix("4\nx 0 0 1\n0 y 0 1\n0 0 1 0\n1 1 0 0", spec)
    print("det(second 4x4 display, as printed) =", symbolic_det(second).render())
    fixed = parse_matrix("4\nx 0 0 1\n0 y 0 1\n1 1 0 0\n0 0 1 0", spec)
    print("det(second display, rows 3 and 4 swapped) =", symbolic_det(fixed).render())

    print()
    print("== (x+y)^2 + 2yz through all four constructions ==")
    c = parse_expression("(x+y)*(x+y) + 2*y*z", spec)
    rep = measure(c)
    print(f"formula: skinny {rep.skinny}, fat {rep.fat}, green {rep.green}")
    for method, size in (
        ("valiant", "green"),
        ("sym", "skinny"),
        ("sym", "green"),
        ("ws-sym", "fat"),
        ("ws-sym", "green"),
        ("ws-nonsym", "fat"),
        ("ws-nonsym", "green"),
    ):
        matrix = _BUILDERS[method][1](c, size)
        bound = build_bound(method, size, c)
        verdict = identity_test(c, matrix, seed=1)
        print(f"{method:9s} {size:6s}: dim {matrix.dim:2d} <= {bound:2d}  {verdict.status}")

    print()
    print("== 2xy has no 2x2 symmetric representation; the fallback is 3x3 ==")
    c2 = parse_expression("2*x*y", spec)
    m2 = valiant_matrix(c2)
    print(f"valiant(2xy): dimension {m2.dim}, det = {symbolic_det(m2).render()}")

    print()
    print("== determinant polynomial, n = 2 ==")
    md = det_sym_matrix(2)
    print(f"dimension {md.dim} <= {4 * 8 + 7}, det = {symbolic_det(md).render()}")

    print()
    print("== characteristic 2: square of x + y over GF(2^16) ==")
    cb = CircuitBuilder(GF2_16)
    cxy = cb.build([cb.add(cb.var("x"), cb.var("y"))])
    a = square_matrix_char2(cxy)
    d = symbolic_det(a)
    print(f"dimension {a.dim}, det = {d.render()}  (= (x+y)^2 mod 2)")

    print()
    print("== bounds (n=2, d=2) ==")
    r = bounds_report(2, 2)
    print(f"F={r.formula_bound} S={r.sym_dimension_bound} "
          f"quarez={r.quarez_dimension} monomial={r.monomial_formula_size}")
    return 0


def main(argv=None) -> int:
    top = argparse.ArgumentParser(prog="symdet", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_circuit_args(p):
        p.add_argument("circuit", nargs="?", default="-",
                       help="circuit file (default: stdin)")
        p.add_argument("--expr", help="inline expression instead of a file")
        p.add_argument("--field", type=field_from_flag, default=RATIONAL,
                       help="constant field: q, p61, p:<prime>, gf2, gf2_16, gf2:<k>")

    p = sub.add_parser("parse", help="validate, classify and measure a circuit")
    add_circuit_args(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--render", action="store_true", help="echo the canonical file")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("minimize", help="weight-pushing minimization")
    add_circuit_args(p)
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("build", help="build a determinantal representation")
    add_circuit_args(p)
    p.add_argument("--method", required=True, choices=sorted(_BUILDERS))
    p.add_argument("--size", choices=("skinny", "green", "fat"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", help="write the gadget graph in DOT format")
    p.add_argument("-o", "--output", help="write the matrix to a file")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("detsym", help="symmetric representation of DET_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dot", help="write the branching program in DOT format")
    p.set_defaults(fn=cmd_detsym)

    p = sub.add_parser("char2-square", help="characteristic-2 square construction")
    add_circuit_args(p)
    p.set_defaults(fn=cmd_char2_square)

    p = sub.add_parser("pperm", help="partial permanent of a matrix")
    p.add_argument("matrix")
    p.add_argument("--field", type=field_from_flag, default=GF2)
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ci", action="store_true",
                   help="reproducibility mode: an explicit --seed is mandatory")
    p.set_defaults(fn=cmd_pperm)

    p = sub.add_parser("verify", help="identity-test a circuit against a matrix")
    add_circuit_args(p)
    p.add_argument("matrix")
    p.add_argument("--trials", type=int)
    p.add_argument("--test-field", type=field_from_flag, default=None,
                   help="evaluation field (default: --field when finite, else p61)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ci", action="store_true",
                   help="reproducibility mode: an explicit --seed is mandatory")
    p.add_argument("--power", type=int, default=1,
                   help="check det = circuit^power (2 for char-2 squares)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bounds", help="bound calculator (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--table", action="store_true", help="all pairs up to (n, d)")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("demo", help="reproduce the worked examples")
    p.set_defaults(fn=cmd_demo)

    args = top.parse_args(argv)
    try:
        return args.fn(args)
    except (CircuitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
