import random

import pytest

from symdet.circuits import (
    CircuitBuilder,
    classify,
    evaluate,
    measure,
    random_circuit,
)
from symdet.fields import PRIME_DEFAULT, RATIONAL, sample_random
from symdet.minimize import ConstantCircuit, check_normal_form, minimize


def num(n):
    return RATIONAL.from_int(n)


def equivalent(a, b, rng, points=10):
    assert set(a.variables) == set(b.variables)
    for _ in range(points):
        point = {v: sample_random(PRIME_DEFAULT, rng) for v in a.variables}
        if evaluate(a, point, PRIME_DEFAULT) != evaluate(b, point, PRIME_DEFAULT):
            return False
    return True


def test_rule1_constant_input_weight_pushed():
    # input 7 feeding an addition via weight 3 -> input 1 via weight 21
    b = CircuitBuilder()
    c = b.build([b.add(b.var("x"), b.const(7), 1, 3)])
    m = minimize(c)
    check_normal_form(m)
    consts = [g for g in m.gates.values() if g.kind == "const"]
    assert len(consts) == 1 and consts[0].value.is_one()
    add = next(g for g in m.gates.values() if g.kind == "add")
    weights = sorted(w.value for _a, w in add.args)
    assert weights == [1, 21]


def test_rule2_constant_product_collapses():
    # (2*3) feeding two additions: both consumers see weight-6 1-inputs
    b = CircuitBuilder()
    six = b.mul(b.const(2), b.const(3))
    s1 = b.add(b.var("x"), six)
    s2 = b.add(b.var("y"), six)
    c = b.build([b.add(s1, s2)])
    m = minimize(c)
    check_normal_form(m)
    weights = []
    for g in m.gates.values():
        for a, w in g.args:
            if m.gates[a].kind == "const":
                weights.append(w.value)
    assert sorted(weights) == [6, 6]


def test_rule4_output_multiplication_removed():
    # output mul with constant argument: gamma becomes the output,
    # its incoming weights scaled by c1*c2
    b = CircuitBuilder()
    s = b.add(b.var("x"), b.var("y"))
    c = b.build([b.mul(b.const(5), s, 1, 2)])
    m = minimize(c)
    check_normal_form(m)
    out = m.gates[m.outputs[0]]
    assert out.kind == "add"
    assert sorted(w.value for _a, w in out.args) == [10, 10]


def test_rule4_with_variable_output_keeps_value():
    b = CircuitBuilder()
    c = b.build([b.mul(b.const(5), b.var("x"))])
    m = minimize(c)
    check_normal_form(m)
    assert evaluate(m, {"x": num(3)})[0] == num(15)


def test_rule4_scales_mul_output_once():
    # 5 * (x*y): scaling both arrows of the product would square the 5
    b = CircuitBuilder()
    p = b.mul(b.var("x"), b.var("y"))
    c = b.build([b.mul(b.const(5), p)])
    m = minimize(c)
    check_normal_form(m)
    assert evaluate(m, {"x": num(2), "y": num(3)})[0] == num(30)


def test_minimize_requires_variable():
    b = CircuitBuilder()
    c = b.build([b.add(b.const(1), b.const(1))])
    with pytest.raises(ConstantCircuit):
        minimize(c)


def test_normal_form_postconditions(rng):
    for _ in range(60):
        c = random_circuit(
            "weakly-skew",
            rng.randint(2, 14),
            3,
            rng,
            weighted=True,
            constant_pool=(1, -1, 2, 5, 0),
            const_prob=0.35,
        )
        if not any(g.kind == "input" for g in c.gates.values()):
            continue
        try:
            m = minimize(c)
        except ConstantCircuit:
            continue
        check_normal_form(m)


def test_polynomial_preserved_on_200_random_circuits():
    rng = random.Random(31)
    checked = 0
    for _ in range(200):
        c = random_circuit(
            "weakly-skew",
            rng.randint(2, 16),
            4,
            rng,
            weighted=True,
            constant_pool=(1, -1, 2, 3, 7),
            const_prob=0.3,
        )
        try:
            m = minimize(c)
        except ConstantCircuit:
            continue
        assert equivalent(c, m, rng)
        checked += 1
    assert checked >= 150


def test_class_preserved(rng):
    for profile in ("formula", "weakly-skew"):
        for _ in range(40):
            c = random_circuit(profile, rng.randint(1, 10), 3, rng,
                               weighted=True, const_prob=0.3)
            try:
                m = minimize(c)
            except ConstantCircuit:
                continue
            cl = classify(m)
            if profile == "formula":
                assert cl.is_formula
            assert cl.is_weakly_skew


def test_monotonicity(rng):
    for _ in range(60):
        c = random_circuit("weakly-skew", rng.randint(2, 14), 3, rng,
                           weighted=True, const_prob=0.3)
        try:
            m = minimize(c)
        except ConstantCircuit:
            continue
        assert measure(m).skinny <= measure(c).skinny
        assert measure(m).var_inputs == measure(c).var_inputs


def test_idempotent_on_green_size(rng):
    for _ in range(30):
        c = random_circuit("weakly-skew", rng.randint(2, 10), 3, rng,
                           weighted=True, const_prob=0.3)
        try:
            m = minimize(c)
        except ConstantCircuit:
            continue
        assert measure(m).green == measure(c).green == measure(minimize(m)).skinny


def _recursive_green_size(circuit):
    """Reference green size for formulas: additions and products of two
    non-constant sides cost 1, constant factors are free; variable-free
    sub-formulas cost nothing (they fold to a scaled 1-input)."""
    from symdet.formulas import formula_tree

    def is_const(node):
        if node[0] == "input":
            return False
        if node[0] == "const":
            return True
        return is_const(node[1][0]) and is_const(node[2][0])

    def size(node):
        if node[0] in ("input", "const"):
            return 0
        if is_const(node):
            return 0
        _, (l, _), (r, _) = node
        if node[0] == "mul" and (is_const(l) or is_const(r)):
            return size(l) + size(r)
        return size(l) + size(r) + 1

    return size(formula_tree(circuit))


def test_green_matrix_dimension_meets_recursive_definition(rng):
    """The symmetric green construction achieves 2e+3 for e the *recursive*
    green size, which can undercut the gate count by one: a scaled bare
    input (5x) needs a carrier gate in circuit form, but in the gadget graph
    the scalar rides the closing edge, costing no vertices."""
    from symdet.formulas import sym_matrix

    for _ in range(60):
        c = random_circuit("formula", rng.randint(1, 12), 4, rng,
                           const_prob=0.3, constant_pool=(1, -1, 2, 5))
        if not any(g.kind == "input" for g in c.gates.values()):
            continue
        dim = sym_matrix(c, "green").dim
        assert dim <= 2 * _recursive_green_size(c) + 3
        assert dim <= 2 * measure(c).green + 3


def test_green_size_exact_on_scaled_products(rng):
    # when constants appear only as product factors the two notions agree
    for _ in range(40):
        c = random_circuit("formula", rng.randint(1, 10), 4, rng, const_prob=0.0)
        assert measure(c).green == _recursive_green_size(c) == measure(c).skinny
