"""End-to-end certification of emitted matrices against source circuits.

Randomized identity testing evaluates both sides at uniform points of a
large finite field; by the Schwartz-Zippel bound the probability that a
wrong matrix survives t trials is at most (deg / |field|)^t, negligible at
the default of 20 trials over Z_p with p = 2^61 - 1 (40 trials over the
smaller GF(2^16)).  Small instances are upgraded to exact symbolic
comparison.  Failures carry a reproducible witness (seed and point).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .circuits import COMPUTATION, Circuit, MissingAssignment, evaluate
from .fields import (
    FieldElement,
    FieldSpec,
    PRIME_DEFAULT,
    embed,
    sample_random,
)
from .graphs import CONSTW, SCALEDW, SymbolicMatrix
from .oracles import symbolic_det
from .polynomials import expand_circuit


class FieldTooSmall(Exception):
    """Identity testing needs at least 2^16 field elements."""


VERIFIED_EXACT = "verified-exact"
VERIFIED_RANDOM = "verified-random"
FAILED = "FAILED"


@dataclass
class Verdict:
    status: str
    trials: int = 0
    field: str = ""
    dimension: int = 0
    seed: int | None = None
    witness_point: dict[str, str] = dc_field(default_factory=dict)
    lhs: str | None = None
    rhs: str | None = None

    @property
    def ok(self) -> bool:
        return self.status in (VERIFIED_EXACT, VERIFIED_RANDOM)

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "trials": self.trials,
            "field": self.field,
            "dimension": self.dimension,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.status == FAILED:
            out["witness"] = {
                "point": self.witness_point,
                "lhs": self.lhs,
                "rhs": self.rhs,
            }
        return out


# ---------------------------------------------------------------------------
# determinant evaluation
# ---------------------------------------------------------------------------


def _entry_value(w, assignment: Mapping[str, FieldElement], spec: FieldSpec):
    if w.kind == CONSTW:
        return embed(w.coeff, spec)
    if w.name not in assignment:
        raise MissingAssignment(f"no value for variable {w.name!r}")
    v = assignment[w.name]
    if w.kind == SCALEDW:
        v = embed(w.coeff, spec) * v
    return v


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    """In-place Gaussian elimination over Z_p on plain integer rows."""
    n = len(rows)
    det = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col] % p:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col] % p
        det = det * pv % p
        inv = pow(pv, -1, p)
        prow = rows[col]
        for r in range(col + 1, n):
            f = rows[r][col] % p
            if f:
                f = f * inv % p
                row = rows[r]
                rows[r] = [(a - f * b) % p for a, b in zip(row, prow)]
    return det % p


def det_eval(
    m: SymbolicMatrix,
    assignment: Mapping[str, FieldElement],
    spec: FieldSpec | None = None,
) -> FieldElement:
    """Exact determinant of the matrix at a point, by elimination."""
    spec = spec or m.spec
    n = m.dim
    if spec.kind == "prime":
        p = spec.p
        rows = [
            [_entry_value(m.entry(i, j), assignment, spec).value for j in range(n)]
            for i in range(n)
        ]
        return FieldElement(spec, _det_mod_p(rows, p))
    vals = [
        [_entry_value(m.entry(i, j), assignment, spec) for j in range(n)]
        for i in range(n)
    ]
    det = spec.one()
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not vals[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return spec.zero()
        if pivot != col:
            vals[col], vals[pivot] = vals[pivot], vals[col]
            det = -det
        pv = vals[col][col]
        det = det * pv
        inv = pv.inverse()
        prow = vals[col]
        for r in range(col + 1, n):
            f = vals[r][col]
            if not f.is_zero():
                f = f * inv
                vals[r] = [a - f * b for a, b in zip(vals[r], prow)]
    return det


# ---------------------------------------------------------------------------
# identity testing
# ---------------------------------------------------------------------------


def _exact_upgrade(circuit: Circuit, m: SymbolicMatrix) -> bool | None:
    """Symbolic comparison for small instances; None when too large."""
    skinny = sum(1 for g in circuit.gates.values() if g.kind in COMPUTATION)
    if m.dim > 8 or skinny > 8:
        return None
    variables = tuple(sorted(set(circuit.variables) | set(m.variables())))
    lhs = expand_circuit(circuit, variables=variables)[0]
    rhs = symbolic_det(m, variables=variables)
    return lhs == rhs


def identity_test(
    circuit: Circuit,
    m: SymbolicMatrix,
    trials: int | None = None,
    spec: FieldSpec = PRIME_DEFAULT,
    seed: int = 0,
    power: int = 1,
    exact_upgrade: bool = True,
) -> Verdict:
    """Schwartz-Zippel test of det(m) == circuit polynomial (to the given
    power); exact symbolic comparison when both sides are small enough."""
    if len(circuit.outputs) != 1:
        raise ValueError("identity testing needs a single-output circuit")
    if spec.size is None or spec.size < (1 << 16):
        raise FieldTooSmall(f"{spec} has fewer than 2^16 elements")
    if trials is None:
        trials = 20 if spec.size >= (1 << 32) else 40

    exact = None
    if exact_upgrade and power == 1:
        exact = _exact_upgrade(circuit, m)
        if exact:
            return Verdict(VERIFIED_EXACT, field=str(spec), dimension=m.dim)
        # exact is False: keep going to attach a concrete witness point
    variables = tuple(sorted(set(circuit.variables) | set(m.variables())))
    rng = random.Random(seed)
    for _ in range(trials):
        point = {v: sample_random(spec, rng) for v in variables}
        lhs = evaluate(circuit, point, spec)[0] ** power
        rhs = det_eval(m, point, spec)
        if lhs != rhs:
            return Verdict(
                FAILED,
                trials=trials,
                field=str(spec),
                dimension=m.dim,
                seed=seed,
                witness_point={v: x.render() for v, x in point.items()},
                lhs=lhs.render(),
                rhs=rhs.render(),
            )
    if exact is False:
        return Verdict(
            FAILED,
            trials=trials,
            field=str(spec),
            dimension=m.dim,
            seed=seed,
            lhs="symbolic mismatch",
            rhs="symbolic mismatch",
        )
    return Verdict(
        VERIFIED_RANDOM, trials=trials, field=str(spec), dimension=m.dim, seed=seed
    )
