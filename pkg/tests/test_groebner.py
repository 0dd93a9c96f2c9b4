"""Buchberger engine and ideal-operation tests."""

import random

import pytest

from lmlab.groebner import (
    Ideal,
    buchberger,
    eliminate,
    ideal_contains,
    ideal_equal,
    ideal_member,
    intersect,
    krull_dim,
    quotient,
    radical_member,
    read_ideal_text,
    reduce_poly,
    saturate,
    write_ideal_text,
)
from lmlab.lattice import normal_form
from lmlab.localmodel import build_U_ideals, trace_form, z_matrix, z_ring
from lmlab.poly import Lex, ParseError, PolyMatrix, PolyRing, minors, parse_poly


def test_reduce_hand_buchberger_example():
    R = PolyRing(["x", "y"], Lex())
    basis = [parse_poly("x - y", R), parse_poly("y^2 - 1", R)]
    nf, cert = reduce_poly(parse_poly("x^2 - 1", R), basis)
    assert nf.is_zero
    assert cert.verify(parse_poly("x^2 - 1", R))


def test_reduce_generators_to_zero():
    R = PolyRing(["x", "y"], Lex())
    I = Ideal(R, ["x^2 - 1", "x*y - 1"])
    basis = I.gb()
    for g in I.generators:
        nf, _ = reduce_poly(g, list(basis))
        assert nf.is_zero


def test_reduce_one_against_variables():
    R = PolyRing(["x", "y"])
    nf, _ = reduce_poly(R.one(), [R.var("x"), R.var("y")])
    assert nf == R.one()


def test_buchberger_lex_example():
    R = PolyRing(["x", "y"], Lex())
    basis, partial = buchberger(Ideal(R, ["x^2 - 1", "x*y - 1"]))
    assert not partial
    assert set(str(g) for g in basis) == {"x - y", "y^2 - 1"}


def test_buchberger_principal_monic():
    R = PolyRing(["x", "y"])
    basis, _ = buchberger(Ideal(R, ["3*x^2 - 6*y"]))
    assert [str(g) for g in basis] == ["x^2 - 2*y"]


def test_minors_2x4_self_groebner():
    R = PolyRing(["z_%d_%d" % (i, j) for i in (1, 2) for j in range(1, 5)])
    Z = PolyMatrix.from_rows(
        [[R.var("z_%d_%d" % (i, j)) for j in range(1, 5)] for i in (1, 2)]
    )
    mins = minors(Z, 2)
    basis, _ = buchberger(Ideal(R, mins))
    assert len(basis) == 6
    for g in basis:
        nf, _ = reduce_poly(g, mins)
        assert nf.is_zero


def test_membership_trivial_unit():
    R = PolyRing(["x"])
    ok, cert = ideal_member(R.one(), Ideal(R, ["x", "x + 1"]))
    assert ok and cert.is_member
    assert cert.verify(R.one())


def test_membership_no_linear_part():
    nf51 = normal_form(5, 1)
    _, small = build_U_ideals(nf51)
    ok, _ = ideal_member(small.ring.var("z_1_1"), small.ideal)
    assert not ok


def test_membership_generator():
    R = PolyRing(["pi", "u", "v", "S", "T"])
    I = Ideal(R, ["u*v - pi", "u*S + v*T"])
    ok, cert = ideal_member(parse_poly("u*S + v*T", R), I)
    assert ok and cert.verify(parse_poly("u*S + v*T", R))


def test_ideal_equal_unit_scaling():
    R = PolyRing(["x"])
    assert ideal_equal(Ideal(R, ["2*x^2 - 2"]), Ideal(R, ["x^2 - 1"]))
    assert not ideal_equal(Ideal(R, ["x"]), Ideal(R, ["x^2"]))


@pytest.mark.parametrize("d,delta", [(5, 1), (5, 2), (6, 1), (6, 2), (6, 3), (7, 2), (7, 3)])
def test_sum_ideal_equals_doubled_trace_ideal(d, delta):
    nf = normal_form(d, delta)
    ring = z_ring(nf)
    Z = z_matrix(nf, ring)
    m = d - delta
    sig = ring.zero()
    for i in range(1, delta + 1):
        for j in range(1, m + 1):
            sig = sig + Z[i - 1, m - j] * Z[delta - i, j - 1]
    T = trace_form(nf, ring)
    assert ideal_equal(
        Ideal(ring, [sig + 4 * ring.var("pi")]),
        Ideal(ring, [2 * (T + 2 * ring.var("pi"))]),
    )


def test_eliminate_linked_chart_to_uv():
    R = PolyRing(["pi", "u", "v", "x", "S", "T"])
    I = Ideal(R, ["S - v*x", "T + u*x", "u*v - pi", "u*S + v*T"])
    E = eliminate(I, ["S", "T"])
    assert ideal_equal(E, Ideal(E.ring, ["u*v - pi"]))


def test_eliminate_to_zero_ideal():
    R = PolyRing(["x", "y"])
    E = eliminate(Ideal(R, ["y - x"]), ["y"])
    assert E.generators == ()


def test_eliminate_generators_stay_inside():
    R = PolyRing(["pi", "u", "v", "x", "S", "T"])
    I = Ideal(R, ["S - v*x", "T + u*x", "u*v - pi", "u*S + v*T"])
    E = eliminate(I, ["S", "T"])
    for g in E.generators:
        assert not (g.variables_used() & {"S", "T"})
        ok, _ = ideal_member(g.cast(R), I)
        assert ok


def test_quotient_examples():
    R = PolyRing(["u", "v"])
    q = quotient(Ideal(R, ["u*v"]), R.var("u"))
    assert ideal_equal(q, Ideal(R, ["v"]))

    R2 = PolyRing(["x", "y"])
    s = saturate(Ideal(R2, ["x^2", "x*y"]), R2.var("y"))
    assert ideal_equal(s, Ideal(R2, ["x"]))

    R3 = PolyRing(["pi", "z_1_1"])
    q3 = quotient(Ideal(R3, ["pi*z_1_1"]), R3.var("pi"))
    assert ideal_equal(q3, Ideal(R3, ["z_1_1"]))


def test_quotient_laws():
    R = PolyRing(["x", "y"])
    I = Ideal(R, ["x^2", "x*y"])
    f = R.var("y")
    q = quotient(I, f)
    s = saturate(I, f)
    assert ideal_contains(q, I)
    assert ideal_contains(s, q)
    # 1 in (I : f) iff f in I
    assert ideal_member(R.one(), quotient(I, R.var("x") * R.var("y")))[0]
    assert not ideal_member(R.one(), q)[0]


def test_radical_membership():
    R = PolyRing(["u", "v", "S", "T"])
    I = Ideal(R, ["u*S + v*T", "u*v"])
    assert radical_member(parse_poly("u*S", R), I)
    assert radical_member(parse_poly("v*T", R), I)
    R2 = PolyRing(["x", "y"])
    assert not radical_member(R2.var("x"), Ideal(R2, ["y"]))


def test_intersect_examples():
    R = PolyRing(["u", "v", "S", "T"])
    got = intersect(Ideal(R, ["u", "v"]), Ideal(R, ["S", "v"]))
    assert ideal_equal(got, Ideal(R, ["v", "u*S"]))
    f = Ideal(R, ["u*S + v*T"])
    assert ideal_equal(intersect(f, f), f)
    lhs = intersect(
        intersect(Ideal(R, ["u^2", "u*v", "v^2", "u*S + v*T"]), Ideal(R, ["S", "v"])),
        Ideal(R, ["T", "u"]),
    )
    assert ideal_equal(lhs, Ideal(R, ["u*S + v*T", "u*v"]))


def test_intersect_symmetry():
    R = PolyRing(["u", "v", "S", "T"])
    a = intersect(Ideal(R, ["u", "v"]), Ideal(R, ["S", "v"]))
    b = intersect(Ideal(R, ["S", "v"]), Ideal(R, ["u", "v"]))
    assert ideal_equal(a, b)


def test_krull_dim_examples():
    nf = normal_form(6, 2)
    ring = z_ring(nf)
    cone = Ideal(ring, minors(z_matrix(nf, ring), 2))
    assert krull_dim(cone) == 6

    R = PolyRing(["x", "y", "z"])
    assert krull_dim(Ideal(R, [])) == 3

    nf51 = normal_form(5, 1)
    U, _ = build_U_ideals(nf51)
    assert krull_dim(U.ideal) == 4


def test_reduced_gb_unique_under_shuffle():
    nf = normal_form(6, 2)
    _, small = build_U_ideals(nf)
    gens = list(small.ideal.generators)
    reference = small.ideal.gb()
    rng = random.Random(7)
    for _ in range(3):
        shuffled = gens[:]
        rng.shuffle(shuffled)
        basis, _ = buchberger(Ideal(small.ring, shuffled))
        assert list(basis) == list(reference)


def test_certificate_soundness_random():
    R = PolyRing(["x", "y", "pi"])
    I = Ideal(R, ["x^2 - pi", "x*y + 1"])
    basis = I.gb()
    rng = random.Random(3)
    for _ in range(10):
        p = R.poly(
            {
                (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 1)): rng.randint(-4, 4)
                for _ in range(4)
            }
        )
        nf, cert = reduce_poly(p, list(basis))
        assert cert.verify(p)
        for term_exp in nf.terms:
            for g in basis:
                assert not all(a >= b for a, b in zip(term_exp, g.lm()))


def test_degree_truncated_gb_is_partial_and_sound():
    R = PolyRing(["x", "y"], Lex())
    I = Ideal(R, ["x^3 - y", "x*y - 1"])
    basis, partial = buchberger(I, degree_bound=2)
    full, _ = buchberger(I)
    assert partial
    for g in basis:
        ok, _ = ideal_member(g, I)
        assert ok


# -- .ideal serialization


def test_ideal_file_roundtrip():
    nf = normal_form(5, 1)
    U, _ = build_U_ideals(nf)
    text = write_ideal_text(U.ideal)
    back = read_ideal_text(text)
    assert back.ring == U.ideal.ring
    assert set(str(g) for g in back.generators) == set(str(g) for g in U.ideal.generators)
    assert write_ideal_text(back) == text


def test_ideal_file_header_and_order_errors():
    with pytest.raises(ParseError):
        read_ideal_text("not an ideal file\n")
    bad_order = "# lmlab-ideal v1\nring QQ [x, y]\norder sorted\ngen x\n"
    with pytest.raises(ParseError):
        read_ideal_text(bad_order)
    bad_gen = "# lmlab-ideal v1\nring QQ [x, y]\norder lex\npoly x\n"
    with pytest.raises(ParseError):
        read_ideal_text(bad_gen)


def test_ideal_file_block_order_roundtrip():
    R = PolyRing(["x", "y", "t"], order=None)
    from lmlab.poly import Block

    Rb = R.with_order(Block(["t"]))
    I = Ideal(Rb, ["t*x - y"])
    text = write_ideal_text(I)
    back = read_ideal_text(text)
    assert back.ring.order == Rb.order


def test_gb_is_reduced():
    nf = normal_form(6, 2)
    _, small = build_U_ideals(nf)
    basis = small.ideal.gb()
    for i, g in enumerate(basis):
        assert g.lc() == 1
        for j, h in enumerate(basis):
            if i == j:
                continue
            # no head divides another head, tails fully reduced
            for exp in g.terms:
                assert not all(a >= b for a, b in zip(exp, h.lm()))


def test_timeout_raises_and_is_typed():
    from lmlab.groebner import GBTimeout

    nf = normal_form(7, 3)
    _, small = build_U_ideals(nf)
    with pytest.raises(GBTimeout):
        buchberger(small.ideal, timeout_s=1e-9)


def test_ideal_file_rational_coefficients_roundtrip():
    nf = normal_form(5, 1)
    from lmlab.blowup import build_M_chart

    mc = build_M_chart(nf, 3, 1)
    text = write_ideal_text(mc.reduced.ideal)
    assert "1/2" in text
    back = read_ideal_text(text)
    assert write_ideal_text(back) == text


def test_ideal_file_gen_parse_error_has_line_and_column():
    text = "# lmlab-ideal v1\nring QQ [x, y]\norder lex\ngen x ** y\n"
    with pytest.raises(ParseError) as err:
        read_ideal_text(text)
    assert "line 4" in str(err.value)
    assert "column" in str(err.value)
