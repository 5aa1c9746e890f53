"""Weight-pushing circuit minimization.

Rewrites a weighted circuit into an equivalent one in which constants
survive only as out-degree-1 input gates labelled 1 feeding additions:

1. inputs are variables or the constant 1, and constant inputs have
   out-degree 1;
2. an addition gate has at most one constant argument, an input gate;
3. a multiplication gate has both arguments non-constant.

Four rewrite rules are applied, each one exhaustively (in topological
order) before the next, and never revisited.  "Constant" is decided
structurally: a gate is constant iff no variable input occurs in its
sub-circuit.  The pass never increases the number of computation gates,
keeps the number of variable inputs, and preserves the computed
polynomial of every output; it also preserves formula-ness and weak
skewness.
"""

from __future__ import annotations

from .circuits import (
    ADD,
    COMPUTATION,
    CONST,
    MUL,
    VAR,
    Circuit,
    CircuitError,
    Gate,
    validate,
)
from .fields import FieldElement


class ConstantCircuit(CircuitError):
    """Minimization requires a non-constant output (some variable input)."""


class _Scratch:
    """Mutable working copy of a circuit."""

    def __init__(self, circuit: Circuit):
        self.spec = circuit.spec
        self.kind: dict[int, str] = {}
        self.name: dict[int, str | None] = {}
        self.value: dict[int, FieldElement | None] = {}
        self.args: dict[int, list[list]] = {}  # gid -> [[arg, weight], [arg, weight]]
        for g in circuit.gates.values():
            self.kind[g.gid] = g.kind
            self.name[g.gid] = g.name
            self.value[g.gid] = g.value
            self.args[g.gid] = [[a, w] for a, w in g.args]
        self.outputs = list(circuit.outputs)
        self.variables = circuit.variables
        self._next = max(self.kind) + 1 if self.kind else 0

    def fresh_const_one(self) -> int:
        gid = self._next
        self._next += 1
        self.kind[gid] = CONST
        self.name[gid] = None
        self.value[gid] = self.spec.one()
        self.args[gid] = []
        return gid

    def consumers(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {gid: [] for gid in self.kind}
        for gid, arglist in self.args.items():
            for idx, (a, _w) in enumerate(arglist):
                out[a].append((gid, idx))
        return out

    def topo(self) -> list[int]:
        order: list[int] = []
        seen: set[int] = set()

        def visit(gid: int) -> None:
            stack = [(gid, 0)]
            while stack:
                g, i = stack.pop()
                if i == 0 and g in seen:
                    continue
                if i < len(self.args[g]):
                    stack.append((g, i + 1))
                    a = self.args[g][i][0]
                    if a not in seen:
                        stack.append((a, 0))
                elif g not in seen:
                    seen.add(g)
                    order.append(g)

        for o in list(self.kind):
            visit(o)
        return order

    def delete(self, gid: int) -> None:
        del self.kind[gid], self.name[gid], self.value[gid], self.args[gid]

    def to_circuit(self) -> Circuit:
        live: set[int] = set()
        stack = list(self.outputs)
        while stack:
            g = stack.pop()
            if g in live:
                continue
            live.add(g)
            stack.extend(a for a, _ in self.args[g])
        gates = {
            gid: Gate(
                gid,
                self.kind[gid],
                name=self.name[gid],
                value=self.value[gid],
                args=tuple((a, w) for a, w in self.args[gid]),
            )
            for gid in live
        }
        return validate(
            Circuit(gates, self.outputs, spec=self.spec, variables=self.variables)
        )


def _constant_flags(s: _Scratch) -> dict[int, bool]:
    flags: dict[int, bool] = {}
    for gid in s.topo():
        if s.kind[gid] == VAR:
            flags[gid] = False
        elif s.kind[gid] == CONST:
            flags[gid] = True
        else:
            flags[gid] = all(flags[a] for a, _ in s.args[gid])
    return flags


def _split_out_degree(s: _Scratch, gid: int) -> None:
    """Duplicate a constant input so that every copy has out-degree 1."""
    users = s.consumers()[gid]
    for cgid, idx in users[1:]:
        dup = s.fresh_const_one()
        s.value[dup] = s.value[gid]
        s.args[cgid][idx][0] = dup


def minimize(circuit: Circuit) -> Circuit:
    """Return the minimized equivalent of a validated weighted circuit."""
    s = _Scratch(circuit)
    const = _constant_flags(s)
    if not any(k == VAR for k in s.kind.values()):
        raise ConstantCircuit("circuit has no variable input")
    if any(const[o] for o in s.outputs):
        raise ConstantCircuit("an output gate computes a constant")

    one = s.spec.one()

    # rule 1: constant inputs become 1, their constant pushed onto out-arrows
    for gid in list(s.kind):
        if s.kind[gid] == CONST:
            c = s.value[gid]
            s.value[gid] = one
            if not c.is_one():
                for cgid, idx in s.consumers()[gid]:
                    s.args[cgid][idx][1] = s.args[cgid][idx][1] * c
            _split_out_degree(s, gid)

    # rule 2: computation gates with two constant arguments collapse to a 1-input
    const = _constant_flags(s)  # rule 1 introduced fresh constant inputs
    for gid in s.topo():
        if s.kind.get(gid) not in COMPUTATION:
            continue
        (a, wa), (b, wb) = s.args[gid]
        # gates minted by _split_out_degree are constant-1 inputs
        if not (const.get(a, True) and const.get(b, True)):
            continue
        v = wa + wb if s.kind[gid] == ADD else wa * wb
        if a != b:
            s.delete(b)
        s.delete(a)
        s.kind[gid] = CONST
        s.value[gid] = one
        s.args[gid] = []
        if not v.is_one():
            for cgid, idx in s.consumers()[gid]:
                s.args[cgid][idx][1] = s.args[cgid][idx][1] * v
        _split_out_degree(s, gid)

    def const_arg_split(gid: int):
        """(beta, c1, gamma, c2) if the gate has exactly one constant argument."""
        (a, wa), (b, wb) = s.args[gid]
        ca, cb = s.kind[a] == CONST, s.kind[b] == CONST
        if ca and not cb:
            return a, wa, b, wb
        if cb and not ca:
            return b, wb, a, wa
        return None

    # rule 3: interior multiplications with a constant argument are bypassed
    outs = set(s.outputs)
    for gid in s.topo():
        if s.kind.get(gid) != MUL or gid in outs:
            continue
        split = const_arg_split(gid)
        if split is None:
            continue
        beta, c1, gamma, c2 = split
        scale = c1 * c2
        for cgid, idx in s.consumers()[gid]:
            s.args[cgid][idx] = [gamma, s.args[cgid][idx][1] * scale]
        s.delete(gid)
        s.delete(beta)

    # rule 4: an output multiplication with a constant argument is removed,
    # its constant pushed into the arrows entering the surviving argument
    for pos, out in enumerate(list(s.outputs)):
        while s.kind[out] == MUL:
            split = const_arg_split(out)
            if split is None:
                break
            beta, c1, gamma, c2 = split
            scale = c1 * c2
            promotable = (
                s.kind[gamma] in COMPUTATION
                and len(s.consumers()[gamma]) == 1
                and gamma not in s.outputs
            )
            if promotable:
                s.delete(out)
                s.delete(beta)
                if s.kind[gamma] == ADD:
                    for arg in s.args[gamma]:
                        arg[1] = arg[1] * scale
                else:
                    s.args[gamma][0][1] = s.args[gamma][0][1] * scale
                s.outputs[pos] = gamma
                out = gamma
            else:
                # gamma is an input, another output, or fans out: keep the
                # gate count by turning the product into a weighted addition
                # (the second argument is a vanishing constant arrow)
                s.kind[out] = ADD
                s.args[out] = [[gamma, scale], [s.fresh_const_one(), s.spec.zero()]]
                s.delete(beta)
                break

    return s.to_circuit()


def check_normal_form(circuit: Circuit) -> None:
    """Assert the three post-conditions of minimization; raises AssertionError."""
    cons = circuit.consumers()
    for g in circuit.gates.values():
        if g.kind == CONST:
            assert g.value.is_one(), f"constant input {g.gid} not labelled 1"
            assert len(cons[g.gid]) <= 1, f"constant input {g.gid} has out-degree > 1"
    const: dict[int, bool] = {}
    for gid in circuit.topo_order():
        g = circuit.gates[gid]
        if g.kind == VAR:
            const[gid] = False
        elif g.kind == CONST:
            const[gid] = True
        else:
            const[gid] = all(const[a] for a, _ in g.args)
    for g in circuit.gates.values():
        if g.kind == ADD:
            n_const = sum(1 for a, _ in g.args if const[a])
            assert n_const <= 1, f"addition {g.gid} has two constant arguments"
            for a, _ in g.args:
                if const[a]:
                    assert circuit.gates[a].kind == CONST, (
                        f"constant argument {a} of addition {g.gid} is not an input"
                    )
        elif g.kind == MUL:
            assert not any(const[a] for a, _ in g.args), (
                f"multiplication {g.gid} has a constant argument"
            )
