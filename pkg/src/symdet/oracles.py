"""Brute-force symbolic oracles: cycle covers, determinants, permanents, paths.

Everything here is deliberately independent of the constructions it checks.
Cycle-cover sums enumerate vertex permutations directly (with backtracking on
the arc structure); the symbolic determinant is a cofactor expansion over
column subsets; the permanent uses inclusion-exclusion.  All of them return
:class:`DensePolynomial` values and are capped at small dimensions.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .fields import FieldSpec
from .graphs import CONSTW, SymbolicMatrix, Weight, WeightedDigraph, WeightedGraph
from .polynomials import DensePolynomial, TooLarge


def _variables_of(weights: Iterable[Weight]) -> tuple[str, ...]:
    seen = {w.name for w in weights if w.kind != CONSTW}
    return tuple(sorted(seen))


def _one(spec: FieldSpec, variables) -> DensePolynomial:
    return DensePolynomial.constant(spec.one(), variables)


# ---------------------------------------------------------------------------
# cycle covers
# ---------------------------------------------------------------------------


def _arc_map(g: WeightedGraph | WeightedDigraph) -> dict[tuple[int, int], Weight]:
    """Arcs of g seen as a digraph (graphs become symmetric digraphs)."""
    if isinstance(g, WeightedDigraph):
        return dict(g.arcs)
    arcs: dict[tuple[int, int], Weight] = {}
    for (u, v), w in g.edges.items():
        arcs[(u, v)] = w
        if u != v:
            arcs[(v, u)] = w
    return arcs


def enumerate_cycle_covers(
    g: WeightedGraph | WeightedDigraph,
    vertices: Sequence[int] | None = None,
) -> list[dict[int, int]]:
    """All cycle covers of the sub(di)graph induced on ``vertices``.

    A cover is returned as the successor map of the underlying permutation;
    reversing a cycle of a graph yields a distinct cover, as it must.
    """
    verts = list(range(g.n)) if vertices is None else sorted(vertices)
    vset = set(verts)
    arcs = _arc_map(g)
    succ_options = {
        u: [v for (a, v) in arcs if a == u and v in vset] for u in verts
    }
    covers: list[dict[int, int]] = []
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(i: int) -> None:
        if i == len(verts):
            covers.append(dict(assignment))
            return
        u = verts[i]
        for v in succ_options[u]:
            if v in used:
                continue
            assignment[u] = v
            used.add(v)
            backtrack(i + 1)
            used.discard(v)
        assignment.pop(u, None)

    backtrack(0)
    return covers


def cover_cycles(cover: dict[int, int]) -> list[list[int]]:
    seen: set[int] = set()
    cycles = []
    for start in sorted(cover):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = cover[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = cover[v]
        cycles.append(cyc)
    return cycles


def cover_sign(cover: dict[int, int]) -> int:
    """(-1)^(number of even cycles)."""
    n_even = sum(1 for cyc in cover_cycles(cover) if len(cyc) % 2 == 0)
    return -1 if n_even % 2 else 1


def cover_weight(
    g: WeightedGraph | WeightedDigraph,
    cover: dict[int, int],
    variables,
    spec: FieldSpec,
) -> DensePolynomial:
    arcs = _arc_map(g)
    w = _one(spec, variables)
    for u, v in cover.items():
        w = w * arcs[(u, v)].as_polynomial(variables, spec)
    return w


def cycle_cover_sum(
    g: WeightedGraph | WeightedDigraph,
    signed: bool,
    variables: Sequence[str] | None = None,
) -> DensePolynomial:
    """Sum of (signed) weights of all cycle covers.

    Equals the permanent (unsigned) or determinant (signed) of the adjacency
    matrix; computed here by direct enumeration as an independent oracle.
    """
    if g.n > 12:
        raise TooLarge(f"cycle cover enumeration capped at 12 vertices, got {g.n}")
    weights = g.arcs.values() if isinstance(g, WeightedDigraph) else g.edges.values()
    variables = tuple(variables) if variables is not None else _variables_of(weights)
    spec = g.spec
    total = DensePolynomial.zero(spec, variables)
    for cover in enumerate_cycle_covers(g):
        term = cover_weight(g, cover, variables, spec)
        if signed and cover_sign(cover) < 0:
            term = -term
        total = total + term
    return total


def cycle_cover_sum_short(
    g: WeightedGraph, variables: Sequence[str] | None = None
) -> DensePolynomial:
    """Sum of weights of cycle covers using only loops and 2-cycles.

    The weight of a 2-cycle is the square of its edge weight.  Over a field
    of characteristic 2 this equals the determinant of the adjacency matrix.
    """
    if g.n > 16:
        raise TooLarge(f"short-cycle cover enumeration capped at 16 vertices, got {g.n}")
    variables = (
        tuple(variables) if variables is not None else _variables_of(g.edges.values())
    )
    spec = g.spec
    loops = {u: g.edges[(u, u)] for u in range(g.n) if (u, u) in g.edges}
    adj: dict[int, list[tuple[int, Weight]]] = {u: [] for u in range(g.n)}
    for (u, v), w in g.edges.items():
        if u != v:
            adj[u].append((v, w))
            adj[v].append((u, w))

    total = DensePolynomial.zero(spec, variables)

    def rec(mask_free: list[int], acc: DensePolynomial) -> None:
        nonlocal total
        if not mask_free:
            total = total + acc
            return
        u = mask_free[0]
        rest = mask_free[1:]
        if u in loops:
            rec(rest, acc * loops[u].as_polynomial(variables, spec))
        for v, w in adj[u]:
            if v in rest:
                wp = w.as_polynomial(variables, spec)
                rec([x for x in rest if x != v], acc * wp * wp)

    rec(list(range(g.n)), _one(spec, variables))
    return total


# ---------------------------------------------------------------------------
# determinant and permanent oracles
# ---------------------------------------------------------------------------


def symbolic_det(
    m: SymbolicMatrix,
    variables: Sequence[str] | None = None,
    limit: int = 16,
) -> DensePolynomial:
    """Exact determinant by cofactor expansion over column subsets.

    The default guard suits dense matrices; sparse gadget matrices stay
    cheap well beyond it, so callers may raise ``limit`` explicitly.
    """
    n = m.dim
    if n > limit:
        raise TooLarge(f"symbolic determinant capped at {limit}x{limit}, got {n}")
    variables = tuple(variables) if variables is not None else m.variables()
    spec = m.spec
    entry_polys = [
        [m.entry(i, j).as_polynomial(variables, spec) for j in range(n)]
        for i in range(n)
    ]
    zeros = [[m.entry(i, j).is_zero() for j in range(n)] for i in range(n)]
    # mask determines the row (n - popcount), so the mask alone keys the memo
    memo: dict[int, DensePolynomial] = {}

    def det(row: int, mask: int) -> DensePolynomial:
        if row == n:
            return _one(spec, variables)
        key = mask
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = DensePolynomial.zero(spec, variables)
        sign = 1
        for j in range(n):
            if not (mask >> j) & 1:
                continue
            if not zeros[row][j]:
                sub = det(row + 1, mask & ~(1 << j))
                term = entry_polys[row][j] * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = total
        return total

    return det(0, (1 << n) - 1)


def ryser_permanent(
    m: SymbolicMatrix, variables: Sequence[str] | None = None
) -> DensePolynomial:
    """Permanent via Ryser's inclusion-exclusion over excluded column sets."""
    n = m.dim
    if n > 12:
        raise TooLarge(f"permanent oracle capped at 12x12, got {n}")
    variables = tuple(variables) if variables is not None else m.variables()
    spec = m.spec
    entry_polys = [
        [m.entry(i, j).as_polynomial(variables, spec) for j in range(n)]
        for i in range(n)
    ]
    total = DensePolynomial.zero(spec, variables)
    for excluded in range(1 << n):
        row_sums = []
        for i in range(n):
            s = DensePolynomial.zero(spec, variables)
            for j in range(n):
                if not (excluded >> j) & 1:
                    s = s + entry_polys[i][j]
            row_sums.append(s)
        prod = _one(spec, variables)
        for s in row_sums:
            prod = prod * s
            if prod.is_zero():
                break
        if bin(excluded).count("1") % 2:
            prod = -prod
        total = total + prod
    return total


# ---------------------------------------------------------------------------
# paths and audit helpers
# ---------------------------------------------------------------------------


def enumerate_st_paths(
    g: WeightedGraph | WeightedDigraph, s: int, t: int
) -> list[list[int]]:
    """All simple s-t paths, as vertex lists (s and t included)."""
    arcs = _arc_map(g)
    succ: dict[int, list[int]] = {u: [] for u in range(g.n)}
    for (u, v) in arcs:
        if u != v:
            succ[u].append(v)
    for u in succ:
        succ[u].sort()
    paths: list[list[int]] = []
    path = [s]
    on_path = {s}

    def dfs(u: int) -> None:
        if u == t:
            paths.append(list(path))
            return
        for v in succ[u]:
            if v in on_path:
                continue
            path.append(v)
            on_path.add(v)
            dfs(v)
            path.pop()
            on_path.discard(v)

    if s == t:
        return [[s]]
    dfs(s)
    return paths


def path_weight(
    g: WeightedGraph | WeightedDigraph,
    path: Sequence[int],
    variables,
    spec: FieldSpec,
) -> DensePolynomial:
    arcs = _arc_map(g)
    w = _one(spec, variables)
    for u, v in zip(path, path[1:]):
        w = w * arcs[(u, v)].as_polynomial(variables, spec)
    return w


def complement_vertices(g, path: Sequence[int]) -> list[int]:
    drop = set(path)
    return [v for v in range(g.n) if v not in drop]


def is_acceptable(g: WeightedGraph, path: Sequence[int]) -> bool:
    """A path is acceptable when the rest of the graph has a cycle cover."""
    rest = complement_vertices(g, path)
    if not rest:
        return True
    return bool(enumerate_cycle_covers(g, rest))


def unique_cover_is_weight1_matching(g: WeightedGraph, vertices: Sequence[int]) -> bool:
    """True iff the induced subgraph has exactly one cycle cover and that
    cover is a perfect matching (2-cycles only) of weight 1."""
    if not vertices:
        return True
    covers = enumerate_cycle_covers(g, vertices)
    if len(covers) != 1:
        return False
    cover = covers[0]
    cycles = cover_cycles(cover)
    if any(len(c) != 2 for c in cycles):
        return False
    variables = _variables_of(g.edges.values())
    w = cover_weight(g, cover, variables, g.spec)
    return w == _one(g.spec, variables)


def all_cycles_even(g: WeightedGraph) -> bool:
    """Every cycle has even length, i.e. the graph is loopless and bipartite."""
    if any(u == v for (u, v) in g.edges):
        return False
    color: dict[int, int] = {}
    for start in range(g.n):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v, _w in g.neighbors(u):
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True
