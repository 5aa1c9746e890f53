"""Arithmetic circuit intermediate representation.

A circuit is a DAG of gates: inputs (a variable or a field constant) of
in-degree 0 and computation gates (+ or *) of in-degree exactly 2.  Arrows
carry weights, defaulting to 1; an arrow of weight c from gate a into gate b
delivers c times the value of a, so subtraction and constant multiplication
need no gates of their own.  Multiple output gates are permitted.

Structural classification distinguishes formulas (every non-output gate has
out-degree 1), weakly skew circuits (each multiplication owns one argument's
sub-circuit outright) and general circuits, and records the closed
sub-circuit of every multiplication together with the set of reusable gates.

Circuits are immutable after :func:`validate`; every query here is pure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fields import (
    RATIONAL,
    FieldElement,
    FieldSpec,
    MixedFields,
    embed,
    half,  # noqa: F401  (re-exported for circuit users)
    parse_element,
)


class CircuitError(Exception):
    """Base class for circuit construction/validation errors."""


class CyclicCircuit(CircuitError):
    pass


class BadArity(CircuitError):
    pass


class UnreachableGate(CircuitError):
    pass


class DuplicateVariable(CircuitError):
    pass


class MissingAssignment(CircuitError):
    pass


VAR = "input"
CONST = "const"
ADD = "add"
MUL = "mul"
COMPUTATION = (ADD, MUL)


@dataclass(frozen=True)
class Gate:
    """One circuit vertex.

    ``args`` is the ordered pair of (argument gate id, arrow weight) for
    computation gates and the empty tuple for inputs.
    """

    gid: int
    kind: str
    name: str | None = None
    value: FieldElement | None = None
    args: tuple[tuple[int, FieldElement], ...] = ()

    @property
    def is_input(self) -> bool:
        return self.kind in (VAR, CONST)


class Circuit:
    """Immutable gate DAG with one or more outputs."""

    def __init__(
        self,
        gates: Mapping[int, Gate],
        outputs: Sequence[int],
        spec: FieldSpec = RATIONAL,
        variables: Sequence[str] | None = None,
    ):
        self.gates: dict[int, Gate] = dict(gates)
        self.outputs: tuple[int, ...] = tuple(outputs)
        self.spec = spec
        if variables is None:
            seen: dict[str, None] = {}
            for g in self.gates.values():
                if g.kind == VAR:
                    seen.setdefault(g.name, None)
            variables = tuple(seen)
        self.variables: tuple[str, ...] = tuple(variables)
        self._topo: tuple[int, ...] | None = None

    # -- structural queries ---------------------------------------------------

    def topo_order(self) -> tuple[int, ...]:
        """Gate ids in topological order (arguments first); raises on cycles."""
        if self._topo is not None:
            return self._topo
        state: dict[int, int] = {}
        order: list[int] = []
        for root in self.gates:
            if state.get(root):
                continue
            stack = [(root, 0)]
            while stack:
                gid, i = stack.pop()
                if i == 0:
                    if state.get(gid) == 2:
                        continue
                    if state.get(gid) == 1:
                        raise CyclicCircuit(f"cycle through gate {gid}")
                    state[gid] = 1
                gate = self.gates[gid]
                if i < len(gate.args):
                    stack.append((gid, i + 1))
                    arg = gate.args[i][0]
                    if state.get(arg) == 1:
                        raise CyclicCircuit(f"cycle through gate {arg}")
                    if state.get(arg) != 2:
                        stack.append((arg, 0))
                else:
                    state[gid] = 2
                    order.append(gid)
        self._topo = tuple(order)
        return self._topo

    def consumers(self) -> dict[int, list[tuple[int, int]]]:
        """Map gate id -> list of (consumer id, argument position)."""
        out: dict[int, list[tuple[int, int]]] = {gid: [] for gid in self.gates}
        for g in self.gates.values():
            for idx, (a, _w) in enumerate(g.args):
                out[a].append((g.gid, idx))
        return out

    def out_degree(self, gid: int) -> int:
        return sum(1 for g in self.gates.values() for a, _ in g.args if a == gid)

    def __len__(self) -> int:
        return len(self.gates)


def validate(circuit: Circuit) -> Circuit:
    """Check all structural invariants; returns the circuit unchanged.

    Raises :class:`BadArity`, :class:`CyclicCircuit`, :class:`UnreachableGate`
    or :class:`DuplicateVariable`.
    """
    if not circuit.outputs:
        raise CircuitError("circuit needs at least one output")
    for o in circuit.outputs:
        if o not in circuit.gates:
            raise CircuitError(f"output {o} is not a gate")
    if len(set(circuit.outputs)) != len(circuit.outputs):
        raise CircuitError("duplicate output gate")
    for g in circuit.gates.values():
        if g.is_input and g.args:
            raise BadArity(f"input gate {g.gid} has arguments")
        if g.kind in COMPUTATION and len(g.args) != 2:
            raise BadArity(f"gate {g.gid} needs exactly 2 arguments")
        if g.kind == VAR and not g.name:
            raise CircuitError(f"variable gate {g.gid} has no name")
        if g.kind == CONST and g.value is None:
            raise CircuitError(f"constant gate {g.gid} has no value")
        for a, _w in g.args:
            if a not in circuit.gates:
                raise CircuitError(f"gate {g.gid} references missing gate {a}")
    if len(set(circuit.variables)) != len(circuit.variables):
        raise DuplicateVariable(f"variable list {circuit.variables} has duplicates")
    names = {g.name for g in circuit.gates.values() if g.kind == VAR}
    if not names <= set(circuit.variables):
        raise DuplicateVariable(f"undeclared variables {names - set(circuit.variables)}")
    circuit.topo_order()  # raises CyclicCircuit
    live = reachable_from(circuit, circuit.outputs)
    dead = set(circuit.gates) - live
    if dead:
        raise UnreachableGate(f"gates {sorted(dead)} unreachable from any output")
    return circuit


def reachable_from(circuit: Circuit, roots: Iterable[int]) -> set[int]:
    seen = set()
    stack = list(roots)
    while stack:
        gid = stack.pop()
        if gid in seen:
            continue
        seen.add(gid)
        stack.extend(a for a, _ in circuit.gates[gid].args)
    return seen


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WsClassification:
    is_formula: bool
    is_weakly_skew: bool
    #: mul gate id -> (owned argument id, gate ids of its closed sub-circuit)
    closed_subcircuit_of: dict[int, tuple[int, frozenset[int]]]
    reusable: frozenset[int]


def classify(circuit: Circuit) -> WsClassification:
    """Classify a validated circuit as formula / weakly skew / general.

    A multiplication is weakly-skew-compliant if the sub-circuit of one of
    its arguments is connected to the rest only through the arrow into the
    multiplication; when both arguments qualify the left one is designated.
    """
    topo = circuit.topo_order()
    cons = circuit.consumers()
    outputs = set(circuit.outputs)

    anc: dict[int, frozenset[int]] = {}
    for gid in topo:
        g = circuit.gates[gid]
        s = frozenset({gid})
        for a, _w in g.args:
            s |= anc[a]
        anc[gid] = s

    def arg_closed(alpha: Gate, beta: int) -> bool:
        sub = anc[beta]
        if outputs & sub:
            return False
        for g in sub:
            for c, _idx in cons[g]:
                if c in sub:
                    continue
                if g == beta and c == alpha.gid:
                    continue
                return False
        return True

    closed: dict[int, tuple[int, frozenset[int]]] = {}
    weakly_skew = True
    for gid in topo:
        g = circuit.gates[gid]
        if g.kind != MUL:
            continue
        (a, _), (b, _) = g.args
        if a == b:
            weakly_skew = False  # two arrows leave the shared sub-circuit
            continue
        if arg_closed(g, a):
            closed[gid] = (a, anc[a])
        elif arg_closed(g, b):
            closed[gid] = (b, anc[b])
        else:
            weakly_skew = False

    in_closed: set[int] = set()
    if weakly_skew:
        for _arg, sub in closed.values():
            in_closed |= sub

    is_formula = (
        len(circuit.outputs) == 1
        and all(
            len(cons[gid]) == (0 if gid in outputs else 1) for gid in circuit.gates
        )
    )
    return WsClassification(
        is_formula=is_formula,
        is_weakly_skew=weakly_skew,
        closed_subcircuit_of=closed,
        reusable=frozenset(circuit.gates) - in_closed,
    )


# ---------------------------------------------------------------------------
# size measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizeReport:
    skinny: int       # computation gates
    fat: int          # all gates
    var_inputs: int   # inputs labelled by a variable
    green: int        # computation gates after weight-pushing minimization


def measure(circuit: Circuit) -> SizeReport:
    skinny = sum(1 for g in circuit.gates.values() if g.kind in COMPUTATION)
    fat = len(circuit.gates)
    var_inputs = sum(1 for g in circuit.gates.values() if g.kind == VAR)
    if var_inputs == 0:
        green = 0  # a variable-free circuit folds to one constant input
    else:
        from .minimize import ConstantCircuit, minimize  # deferred import

        try:
            mini = minimize(circuit)
        except ConstantCircuit:
            # multiple-output circuit with a constant output: minimization
            # does not apply, report the unreduced count
            green = skinny
        else:
            green = sum(1 for g in mini.gates.values() if g.kind in COMPUTATION)
    return SizeReport(skinny=skinny, fat=fat, var_inputs=var_inputs, green=green)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(
    circuit: Circuit,
    assignment: Mapping[str, FieldElement],
    spec: FieldSpec | None = None,
) -> list[FieldElement]:
    """Value of each output under weighted-circuit semantics.

    An arrow of weight c from gate a delivers ``c * value(a)``.  Constants
    and weights are embedded into ``spec`` (default: the circuit's field).
    """
    if spec is None:
        spec = circuit.spec
    vals: dict[int, FieldElement] = {}
    for gid in circuit.topo_order():
        g = circuit.gates[gid]
        if g.kind == VAR:
            if g.name not in assignment:
                raise MissingAssignment(f"no value for variable {g.name!r}")
            v = assignment[g.name]
            if v.spec != spec:
                raise MixedFields(f"assignment for {g.name!r} lives in {v.spec}, not {spec}")
            vals[gid] = v
        elif g.kind == CONST:
            vals[gid] = embed(g.value, spec)
        else:
            (a, wa), (b, wb) = g.args
            xa = embed(wa, spec) * vals[a]
            xb = embed(wb, spec) * vals[b]
            vals[gid] = xa + xb if g.kind == ADD else xa * xb
    return [vals[o] for o in circuit.outputs]


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------


class CircuitBuilder:
    """Convenience constructor; gate ids are allocated in topological order."""

    def __init__(self, spec: FieldSpec = RATIONAL):
        self.spec = spec
        self._gates: dict[int, Gate] = {}

    def _weight(self, w) -> FieldElement:
        if isinstance(w, FieldElement):
            if w.spec != self.spec:
                raise MixedFields(f"weight in {w.spec}, builder over {self.spec}")
            return w
        return self.spec.from_fraction(Fraction(w))

    def var(self, name: str) -> int:
        gid = len(self._gates)
        self._gates[gid] = Gate(gid, VAR, name=name)
        return gid

    def const(self, value) -> int:
        gid = len(self._gates)
        self._gates[gid] = Gate(gid, CONST, value=self._weight(value))
        return gid

    def _comp(self, kind: str, a: int, b: int, wa, wb) -> int:
        gid = len(self._gates)
        self._gates[gid] = Gate(
            gid, kind, args=((a, self._weight(wa)), (b, self._weight(wb)))
        )
        return gid

    def add(self, a: int, b: int, wa=1, wb=1) -> int:
        return self._comp(ADD, a, b, wa, wb)

    def mul(self, a: int, b: int, wa=1, wb=1) -> int:
        return self._comp(MUL, a, b, wa, wb)

    def build(self, outputs: Sequence[int] | None = None) -> Circuit:
        if outputs is None:
            outputs = [len(self._gates) - 1]
        return validate(Circuit(self._gates, outputs, spec=self.spec))


# ---------------------------------------------------------------------------
# random generation (property-test substrate)
# ---------------------------------------------------------------------------


def random_circuit(
    profile: str,
    size_budget: int,
    n_vars: int,
    rng: random.Random,
    spec: FieldSpec = RATIONAL,
    constant_pool: Sequence = (1, -1, Fraction(1, 2)),
    const_prob: float = 0.15,
    weighted: bool = False,
    weight_pool: Sequence = (1, 1, 1, 2, -1, 3, Fraction(1, 2)),
) -> Circuit:
    """Deterministic pseudo-random circuit of the requested class.

    ``profile`` is ``"formula"`` (budget counts computation gates) or
    ``"weakly-skew"`` (budget counts total gates, the fat size).  Weakly skew
    multiplications are created by grafting a freshly generated closed
    sub-circuit as one argument.
    """
    names = [f"x{i + 1}" for i in range(max(1, n_vars))]
    b = CircuitBuilder(spec)

    def leaf() -> int:
        if constant_pool and rng.random() < const_prob:
            return b.const(rng.choice(list(constant_pool)))
        return b.var(rng.choice(names))

    def w() -> FieldElement:
        if not weighted:
            return spec.one()
        return b._weight(rng.choice(list(weight_pool)))

    if profile == "formula":

        def gen(budget: int) -> int:
            if budget == 0:
                return leaf()
            left = rng.randint(0, budget - 1)
            x = gen(left)
            y = gen(budget - 1 - left)
            op = b.add if rng.random() < 0.5 else b.mul
            return op(x, y, w(), w())

        root = gen(size_budget)
        return b.build([root])

    if profile != "weakly-skew":
        raise ValueError(f"unknown profile {profile!r}")

    def gen_ws(budget: int) -> int:
        """Grow a weakly skew circuit of fat size exactly ``budget``.

        The invariant budget >= len(sinks) - 1 keeps enough budget to merge
        all currently unconsumed gates into a single root, so nothing has to
        be pruned afterwards.
        """
        pool: list[int] = []
        sinks: list[int] = []

        def fresh(gid: int) -> None:
            pool.append(gid)
            sinks.append(gid)

        def pick(prefer_sink: bool) -> int:
            if prefer_sink and sinks and rng.random() < 0.8:
                return rng.choice(sinks)
            return rng.choice(pool)

        def consume(gid: int) -> None:
            if gid in sinks:
                sinks.remove(gid)

        fresh(leaf())
        budget -= 1
        while budget > 0:
            if len(sinks) >= 2 and budget <= len(sinks) - 1:
                x = sinks[rng.randrange(len(sinks))]
                consume(x)
                y = sinks[rng.randrange(len(sinks))]
                consume(y)
                fresh(b.add(x, y, w(), w()))
                budget -= 1
                continue
            r = rng.random()
            if r < 0.2 and budget >= len(sinks) + 1:
                fresh(leaf())
                budget -= 1
            elif r < 0.65 or budget - len(sinks) < 3:
                x, y = pick(True), pick(False)
                used = (x in sinks) + (y in sinks and y != x)
                if budget < len(sinks) - used + 1:
                    continue
                consume(x)
                consume(y)
                fresh(b.add(x, y, w(), w()))
                budget -= 1
            else:
                max_sub = min(budget - len(sinks) - 1, 7)
                if max_sub < 1:
                    continue
                sub_budget = rng.randint(1, max_sub)
                closed_root = gen_ws(sub_budget)
                y = pick(True)
                consume(y)
                if rng.random() < 0.5:
                    gid = b.mul(closed_root, y, w(), w())
                else:
                    gid = b.mul(y, closed_root, w(), w())
                fresh(gid)
                budget -= 1 + sub_budget
        assert len(sinks) == 1, "budget invariant violated"
        return sinks[0]

    root = gen_ws(size_budget)
    live = reachable_from(Circuit(b._gates, [root], spec=spec), [root])
    gates = {gid: g for gid, g in b._gates.items() if gid in live}
    return validate(Circuit(gates, [root], spec=spec))


# ---------------------------------------------------------------------------
# line-oriented text format
# ---------------------------------------------------------------------------


def render_circuit(circuit: Circuit) -> str:
    """Canonical text form with stable topological gate ids."""
    order = [gid for gid in circuit.topo_order()]
    renum = {gid: i for i, gid in enumerate(order)}
    lines = []
    if circuit.variables:
        lines.append("vars " + " ".join(circuit.variables))

    def ref(a: int, w: FieldElement) -> str:
        return f"g{renum[a]}" if w.is_one() else f"g{renum[a]}*{w.render()}"

    for gid in order:
        g = circuit.gates[gid]
        if g.kind == VAR:
            rhs = f"input {g.name}"
        elif g.kind == CONST:
            rhs = f"const {g.value.render()}"
        else:
            (a, wa), (bb, wb) = g.args
            rhs = f"{g.kind} {ref(a, wa)} {ref(bb, wb)}"
        lines.append(f"g{renum[gid]} = {rhs}")
    lines.append("output " + " ".join(f"g{renum[o]}" for o in circuit.outputs))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str, spec: FieldSpec = RATIONAL) -> Circuit:
    """Parse the circuit file format produced by :func:`render_circuit`."""
    gates: dict[int, Gate] = {}
    outputs: list[int] = []
    variables: list[str] | None = None

    def gid_of(token: str) -> int:
        if not token.startswith("g"):
            raise CircuitError(f"expected gate reference, got {token!r}")
        return int(token[1:])

    def arg_of(token: str) -> tuple[int, FieldElement]:
        if "*" in token:
            gtok, wtok = token.split("*", 1)
            return gid_of(gtok), parse_element(wtok, spec)
        return gid_of(token), spec.one()

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars "):
            variables = line.split()[1:]
            continue
        if line.startswith("output"):
            outputs = [gid_of(t) for t in line.split()[1:]]
            continue
        lhs, rhs = (part.strip() for part in line.split("=", 1))
        gid = gid_of(lhs)
        toks = rhs.split()
        kind = toks[0]
        if kind == "input":
            gates[gid] = Gate(gid, VAR, name=toks[1])
        elif kind == "const":
            gates[gid] = Gate(gid, CONST, value=parse_element(toks[1], spec))
        elif kind in COMPUTATION:
            gates[gid] = Gate(gid, kind, args=(arg_of(toks[1]), arg_of(toks[2])))
        else:
            raise CircuitError(f"unknown gate kind {kind!r} in line {raw!r}")
    return validate(Circuit(gates, outputs, spec=spec, variables=variables))


# re-exported so circuit users rarely need symdet.fields directly
__all__ = [
    "Gate",
    "Circuit",
    "CircuitBuilder",
    "WsClassification",
    "SizeReport",
    "validate",
    "classify",
    "measure",
    "evaluate",
    "random_circuit",
    "render_circuit",
    "parse_circuit",
    "CircuitError",
    "CyclicCircuit",
    "BadArity",
    "UnreachableGate",
    "DuplicateVariable",
    "MissingAssignment",
    "half",
]
