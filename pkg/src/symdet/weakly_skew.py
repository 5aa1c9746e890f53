"""Lowering weakly skew circuits to determinantal representations.

The symmetric construction builds one undirected gadget graph for the whole
(possibly multiple-output) circuit by peeling output gates: an input or
addition gate contributes a two-vertex gadget hanging off the distinguished
vertex s or off the argument t-vertices; a multiplication merges the graph
of its closed sub-circuit into the t-vertex of its reusable argument.  For
every reusable gate a the graph holds a vertex t_a and a scalar c_a with

    c_a * sum over acceptable s-t_a-paths of (-1)^((|P|-1)/2) w(P) = f_a,

|G| odd, all cycles even, all s-t_a-paths odd, and a unique weight-1
perfect-matching completion for every acceptable path.  Closing the output
t-vertex back to s with weight c_out/2 * (-1)^((|G|-1)/2) gives a symmetric
matrix of dimension at most 2m+1 (fat mode) or 2(e+i)+1 (green mode, after
minimization, with constant addition arguments absorbed into edge weights).

The non-symmetric lowering drives the same peeling into a layered-free ABP:
one vertex per gate (multiplications share their closed argument's vertex),
arcs deliver path sums, and the ABP closes into a matrix of dimension at
most m (fat) or e+i (green) by merging source and output and putting unit
loops elsewhere; arc signs absorb the path-parity bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuits import (
    ADD,
    CONST,
    VAR,
    Circuit,
    CircuitError,
    classify,
)
from .fields import FieldElement, half
from .graphs import (
    SymbolicMatrix,
    Weight,
    WeightedDigraph,
    WeightedGraph,
    adjacency,
)
from .minimize import minimize


class NotWeaklySkew(CircuitError):
    pass


@dataclass
class WsCertificate:
    graph: WeightedGraph
    s: int
    t_of: dict[int, int]            # reusable gate id -> t vertex
    c_of: dict[int, FieldElement]   # reusable gate id -> scalar
    source: Circuit
    mode: str


def _input_weight(gate) -> Weight:
    if gate.kind == VAR:
        return Weight.var(gate.name)
    return Weight.const(gate.value)


def _prepare(circuit: Circuit, mode: str) -> Circuit:
    if mode == "green":
        return minimize(circuit)
    if mode != "fat":
        raise ValueError(f"unknown mode {mode!r}")
    return circuit


def build_ws_graph(circuit: Circuit, mode: str = "fat") -> WsCertificate:
    """Gadget graph for a multiple-output weakly skew circuit.

    In fat mode every gate gets its own gadget; in green mode the circuit is
    minimized first and constant addition arguments are folded into edge
    weights, so only computation gates and variable inputs cost vertices.
    """
    work = _prepare(circuit, mode)
    cl = classify(work)
    if not cl.is_weakly_skew:
        raise NotWeaklySkew("circuit is not weakly skew")
    spec = work.spec
    gates = work.gates
    consumers = work.consumers()
    absorb = mode == "green"

    g = WeightedGraph(spec)
    t_of: dict[int, int] = {}
    c_of: dict[int, FieldElement] = {}
    one = spec.one()
    minus_one = -one

    def peel(gate_ids: frozenset[int], s: int) -> None:
        if not gate_ids:
            return
        sink = max(
            gid
            for gid in gate_ids
            if not any(c in gate_ids for c, _ in consumers[gid])
        )
        gate = gates[sink]
        if gate.is_input:
            peel(gate_ids - {sink}, s)
            v = g.add_vertex()
            t = g.add_vertex()
            g.add_edge(s, v, _input_weight(gate))
            g.add_edge(v, t, Weight.const(minus_one))
            t_of[sink] = t
            c_of[sink] = one
            return
        (a, wa), (b, wb) = gate.args
        if gate.kind == ADD:
            const_args = [
                (x, w) for x, w in gate.args if gates[x].kind == CONST
            ]
            if absorb and len(const_args) == 1:
                beta, c1 = const_args[0]
                gamma, c2 = next((x, w) for x, w in gate.args if x != beta)
                peel(gate_ids - {sink, beta}, s)
                v = g.add_vertex()
                t = g.add_vertex()
                g.add_edge(t_of[gamma], v, Weight.const(c2 * c_of[gamma]))
                g.add_edge(v, t, Weight.const(minus_one))
                g.add_edge(s, v, Weight.const(c1 * gates[beta].value))
                t_of[sink] = t
                c_of[sink] = one
                return
            peel(gate_ids - {sink}, s)
            v = g.add_vertex()
            t = g.add_vertex()
            if a == b:
                g.add_edge(t_of[a], v, Weight.const((wa + wb) * c_of[a]))
            else:
                g.add_edge(t_of[a], v, Weight.const(wa * c_of[a]))
                g.add_edge(t_of[b], v, Weight.const(wb * c_of[b]))
            g.add_edge(v, t, Weight.const(minus_one))
            t_of[sink] = t
            c_of[sink] = one
            return
        # multiplication: recurse on the rest, then graft the closed
        # sub-circuit with the reusable argument's t vertex as its source
        beta, closed_set = cl.closed_subcircuit_of[sink]
        gamma = b if beta == a else a
        w_beta = wa if beta == a else wb
        w_gamma = wb if beta == a else wa
        rest = gate_ids - {sink} - closed_set
        peel(rest, s)
        peel(frozenset(closed_set), t_of[gamma])
        t_of[sink] = t_of[beta]
        c_of[sink] = w_beta * w_gamma * c_of[beta] * c_of[gamma]

    s = g.add_vertex()
    g.roles["s"] = s
    peel(frozenset(gates), s)
    return WsCertificate(g, s, t_of, c_of, work, mode)


def _constant_fallback(circuit: Circuit) -> SymbolicMatrix | None:
    """Variable-free circuits have green size and input count 0; their
    representation is the 1x1 matrix of the computed constant."""
    from .circuits import evaluate

    if any(g.kind == VAR for g in circuit.gates.values()):
        return None
    value = evaluate(circuit, {})[0]
    return SymbolicMatrix([[Weight.const(value)]], spec=circuit.spec, symmetric=True)


def ws_sym_matrix(circuit: Circuit, mode: str = "fat") -> SymbolicMatrix:
    """Symmetric determinantal representation of a single-output weakly skew
    circuit; dimension <= 2m+1 (fat) or 2(e+i)+1 (green)."""
    if len(circuit.outputs) != 1:
        raise CircuitError("symmetric lowering needs a single-output circuit")
    if mode == "green":
        fallback = _constant_fallback(circuit)
        if fallback is not None:
            return fallback
    cert = build_ws_graph(circuit, mode)
    g = cert.graph
    spec = g.spec
    out = cert.source.outputs[0]
    t = cert.t_of[out]
    sign = spec.one() if ((g.n - 1) // 2) % 2 == 0 else -spec.one()
    w_ts = cert.c_of[out] * half(spec) * sign
    g.add_edge(t, cert.s, Weight.const(w_ts))
    g.roles["t"] = t
    return adjacency(g)


def check_ws_certificate(cert: WsCertificate, max_vertices: int = 14) -> None:
    """Exhaustive audit of the certificate invariants.

    Checks: odd vertex count, even cycles, odd s-t_a paths, unique weight-1
    matching completion of every acceptable path and of G minus {s}, and the
    acceptable-path-sum identity for every reusable gate.  Exponential;
    intended for instances with at most ``max_vertices`` vertices.
    """
    from .oracles import (
        all_cycles_even,
        complement_vertices,
        enumerate_st_paths,
        is_acceptable,
        path_weight,
        unique_cover_is_weight1_matching,
    )
    from .polynomials import DensePolynomial, expand_gate_values

    g = cert.graph
    if g.n > max_vertices:
        raise ValueError(f"certificate audit capped at {max_vertices} vertices")
    assert g.n % 2 == 1, "graph must have an odd number of vertices"
    assert all_cycles_even(g), "odd cycle in gadget graph"
    rest = complement_vertices(g, [cert.s])
    assert unique_cover_is_weight1_matching(g, rest), (
        "G minus {s} must have a unique weight-1 matching cover"
    )
    spec = g.spec
    circuit = cert.source
    values = expand_gate_values(circuit)
    reusable = classify(circuit).reusable
    for gid, t in sorted(cert.t_of.items()):
        if gid not in reusable:
            continue
        total = DensePolynomial.zero(spec, circuit.variables)
        for path in enumerate_st_paths(g, cert.s, t):
            assert len(path) % 2 == 1, "even s-t_a path"
            if not is_acceptable(g, path):
                continue
            comp = complement_vertices(g, path)
            assert unique_cover_is_weight1_matching(g, comp), (
                "acceptable path complement must be a unique weight-1 matching"
            )
            w = path_weight(g, path, circuit.variables, spec)
            if ((len(path) - 1) // 2) % 2 == 1:
                w = -w
            total = total + w
        total = total.scale(cert.c_of[gid])
        assert total == values[gid], f"path-sum identity failed at gate {gid}"


# ---------------------------------------------------------------------------
# non-symmetric (ABP) lowering
# ---------------------------------------------------------------------------


def build_ws_abp(
    circuit: Circuit, mode: str = "fat"
) -> tuple[WeightedDigraph, int, dict[int, int], dict[int, FieldElement], Circuit]:
    """Path-sum ABP: for every reusable gate a, sum over s-to-vertex(a) paths
    of w(P) equals f_a / c_a.  One vertex per gate, none for multiplications
    (they alias their closed argument's vertex) or absorbed constants."""
    work = _prepare(circuit, mode)
    cl = classify(work)
    if not cl.is_weakly_skew:
        raise NotWeaklySkew("circuit is not weakly skew")
    spec = work.spec
    gates = work.gates
    consumers = work.consumers()
    absorb = mode == "green"

    dg = WeightedDigraph(spec)
    vert: dict[int, int] = {}
    c_of: dict[int, FieldElement] = {}
    one = spec.one()

    def peel(gate_ids: frozenset[int], source: int) -> None:
        if not gate_ids:
            return
        sink = max(
            gid
            for gid in gate_ids
            if not any(c in gate_ids for c, _ in consumers[gid])
        )
        gate = gates[sink]
        if gate.is_input:
            peel(gate_ids - {sink}, source)
            v = dg.add_vertex()
            dg.add_arc(source, v, _input_weight(gate))
            vert[sink] = v
            c_of[sink] = one
            return
        (a, wa), (b, wb) = gate.args
        if gate.kind == ADD:
            const_args = [(x, w) for x, w in gate.args if gates[x].kind == CONST]
            if absorb and len(const_args) == 1:
                beta, c1 = const_args[0]
                gamma, c2 = next((x, w) for x, w in gate.args if x != beta)
                peel(gate_ids - {sink, beta}, source)
                v = dg.add_vertex()
                dg.add_arc(vert[gamma], v, Weight.const(c2 * c_of[gamma]))
                dg.add_arc(source, v, Weight.const(c1 * gates[beta].value))
                vert[sink] = v
                c_of[sink] = one
                return
            peel(gate_ids - {sink}, source)
            v = dg.add_vertex()
            if a == b:
                dg.add_arc(vert[a], v, Weight.const((wa + wb) * c_of[a]))
            else:
                dg.add_arc(vert[a], v, Weight.const(wa * c_of[a]))
                dg.add_arc(vert[b], v, Weight.const(wb * c_of[b]))
            vert[sink] = v
            c_of[sink] = one
            return
        beta, closed_set = cl.closed_subcircuit_of[sink]
        gamma = b if beta == a else a
        w_beta = wa if beta == a else wb
        w_gamma = wb if beta == a else wa
        rest = gate_ids - {sink} - closed_set
        peel(rest, source)
        peel(frozenset(closed_set), vert[gamma])
        vert[sink] = vert[beta]
        c_of[sink] = w_beta * w_gamma * c_of[beta] * c_of[gamma]

    s = dg.add_vertex()
    dg.roles["s"] = s
    peel(frozenset(gates), s)
    return dg, s, vert, c_of, work


def ws_nonsym_matrix(
    circuit: Circuit, mode: str = "fat", signed: bool = True
) -> SymbolicMatrix:
    """Non-symmetric determinantal representation via the path-sum ABP.

    Dimension is at most m (fat size) or e+i (green mode).  With
    ``signed=False`` the arc negations are skipped and the matrix satisfies
    permanent = polynomial instead (the two coincide in characteristic 2).
    """
    if len(circuit.outputs) != 1:
        raise CircuitError("non-symmetric lowering needs a single-output circuit")
    if mode == "green":
        fallback = _constant_fallback(circuit)
        if fallback is not None:
            return fallback
    dg, s, vert, c_of, work = build_ws_abp(circuit, mode)
    spec = dg.spec
    out = work.outputs[0]
    t = vert[out]
    c_out = c_of[out]

    keep = [v for v in range(dg.n) if v != t]
    renum = {v: i for i, v in enumerate(keep)}
    merged = WeightedDigraph(spec)
    for _ in keep:
        merged.add_vertex()
    minus_one = -spec.one()
    for (u, v), w in dg.arcs.items():
        if v == t:
            w = w.scale(c_out)  # each s-t path crosses exactly one in-arc of t
            merged.add_arc(renum[u], renum[s], w)
        else:
            if signed:
                w = w.scale(minus_one)  # (-1)^|P| bookkeeping, spread over arcs
            merged.add_arc(renum[u], renum[v], w)
    for v in keep:
        if v != s:
            merged.add_arc(renum[v], renum[v], Weight.const(spec.one()))
    merged.roles["s"] = renum[s]
    return adjacency(merged)
