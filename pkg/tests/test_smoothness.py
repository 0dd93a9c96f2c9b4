"""Jacobian smoothness certificates, absolute and relative."""

from lmlab.blowup import build_DT_blowup_chart, build_M_chart
from lmlab.groebner import Ideal
from lmlab.lattice import normal_form
from lmlab.poly import PolyRing
from lmlab.verify import model_target_for_chart, smooth_over_base, smooth_over_model


def test_uv_pi_smooth_absolutely():
    R = PolyRing(["pi", "u", "v"])
    rep = smooth_over_base(Ideal(R, ["u*v - pi"]))
    assert rep.status == "pass"


def test_special_fiber_fails_at_origin():
    R = PolyRing(["u", "v"])
    rep = smooth_over_base(Ideal(R, ["u*v"]))
    assert rep.status == "fail"
    assert not rep.details["singular_locus_empty"]


def test_reduced_m_chart_smooth_absolutely():
    nf = normal_form(5, 1)
    mc = build_M_chart(nf, 3, 1)
    rep = smooth_over_base(mc.reduced.ideal)
    assert rep.status == "pass"


def test_smooth_over_ux_model_5_1():
    nf = normal_form(5, 1)
    bc = build_DT_blowup_chart(nf, 1, 1)
    tgt = model_target_for_chart(nf, bc)
    assert tgt.kind == "ux"
    rep = smooth_over_model(bc.chart, tgt, nf.d - 3)
    assert rep.status == "pass"
    assert rep.details["relation_member"]
    assert rep.details["full_rank"]


def test_smooth_over_uxy_model_6_2_every_pivot():
    nf = normal_form(6, 2)
    for s in (1, 2):
        for t in range(1, 5):
            bc = build_DT_blowup_chart(nf, s, t)
            tgt = model_target_for_chart(nf, bc)
            assert tgt.kind == "uxy"
            rep = smooth_over_model(bc.chart, tgt, nf.d - 4)
            assert rep.status == "pass", (s, t, rep.details)
            assert rep.details["rel_dim"] == 2


def test_negative_control_y_zero():
    nf = normal_form(6, 2)
    bc = build_DT_blowup_chart(nf, 1, 1)
    tgt = model_target_for_chart(
        nf, bc, override_images={"y": bc.chart.ring.zero()}
    )
    rep = smooth_over_model(bc.chart, tgt, nf.d - 4)
    assert rep.status == "fail"
    assert not rep.details["relation_member"]


def test_middle_pivot_rank_drop_is_detected():
    # the known boundary case: at a middle column the second sum degenerates
    # to 1 + quadric and the relative Jacobian drops rank on the chart
    nf = normal_form(5, 2)
    bc = build_DT_blowup_chart(nf, 1, 2)
    tgt = model_target_for_chart(nf, bc)
    rep = smooth_over_model(bc.chart, tgt, nf.d - 4)
    assert rep.status == "fail"
    assert rep.details["relation_member"]
    assert not rep.details["full_rank"]


def test_smooth_base_agrees_on_model_smooth_chart():
    # base-change sanity: a chart smooth over a model whose total space is
    # smooth is smooth absolutely
    nf = normal_form(5, 1)
    bc = build_DT_blowup_chart(nf, 1, 1)
    rep = smooth_over_base(bc.chart.ideal)
    assert rep.status == "pass"
