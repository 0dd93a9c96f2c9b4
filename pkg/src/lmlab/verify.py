"""Smoothness certification by Jacobian criteria.

Absolute smoothness: the singular locus cut out by the c x c minors of the
Jacobian (c the codimension) must be empty modulo the ideal.  Relative
smoothness over the model rings Z[u,x,y]/(u^2xy - pi) and Z[u,x]/(u^2x - pi):
after adjoining the model coordinates along their defining assignments, the
relation must be a member and the relative Jacobian must have full rank
everywhere on the chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groebner import GBTimeout, Ideal, ideal_member, krull_dim
from .poly import PolyRing, RingMap, jacobian, minors
from .report import FAIL, PASS, Stopwatch, TIMEOUT, VerificationReport

__all__ = [
    "ModelTarget",
    "model_target_for_chart",
    "smooth_over_base",
    "smooth_over_model",
]


@dataclass(frozen=True)
class ModelTarget:
    """A model ring relation plus the assignment of its variables into a chart."""

    kind: str  # "uxy" | "ux"
    relation: object
    map: RingMap

    @property
    def model_vars(self):
        return ("u", "x", "y") if self.kind == "uxy" else ("u", "x")


def model_target_for_chart(nf, bchart, override_images=None):
    """The standard model assignment for a blow-up chart of the local model.

    For delta_* >= 2 the target is u^2 x y = pi with u the pivot coordinate,
    x = -(row sum)/2, y = (col sum)/2.  For delta_* = 1 the row sum is the
    constant 1 and the target collapses to u^2 x = pi with
    x = -(row sum)(col sum)/4, i.e. the product of the two coordinates above.
    """
    ring = bchart.chart.ring
    half = Fraction(1, 2)
    kind = "uxy" if nf.delta_star >= 2 else "ux"
    model_vars = ("u", "x", "y") if kind == "uxy" else ("u", "x")
    model = PolyRing(("pi",) + model_vars)
    u, x = model.var("u"), model.var("x")
    if kind == "uxy":
        relation = u**2 * x * model.var("y") - model.var("pi")
        images = {
            "u": ring.var(bchart.z_var),
            "x": -half * bchart.row_sum,
            "y": half * bchart.col_sum,
        }
    else:
        relation = u**2 * x - model.var("pi")
        images = {
            "u": ring.var(bchart.z_var),
            "x": -Fraction(1, 4) * bchart.row_sum * bchart.col_sum,
        }
    if override_images:
        images.update(override_images)
    ext = ring.extend(model_vars)
    fmap = RingMap(
        model,
        ext,
        {"pi": ext.var("pi"), **{v: images[v].cast(ext) for v in model_vars}},
    )
    return ModelTarget(kind=kind, relation=relation, map=fmap)


def smooth_over_base(ideal, expected_dim=None, timeout_s=None, check="smooth-base"):
    """Absolute Jacobian criterion over the coefficient field.

    With c = (number of variables) - dim V(I), the chart is smooth iff the
    ideal plus the c x c minors of the Jacobian of its reduced basis is the
    unit ideal.
    """
    sw = Stopwatch()
    report = VerificationReport(check, {"ring": ",".join(ideal.ring.variables)}, PASS)
    try:
        basis = ideal.gb(timeout_s=timeout_s)
        dim = krull_dim(ideal, timeout_s=timeout_s)
        c = ideal.ring.nvars - dim
        report.details["dim"] = dim
        report.details["codim"] = c
        if expected_dim is not None:
            report.details["expected_dim"] = expected_dim
            if dim != expected_dim:
                report.status = FAIL
                report.runtime_ms = sw.ms()
                return report
        if c == 0:
            report.runtime_ms = sw.ms()
            return report
        jac = jacobian(list(basis), list(ideal.ring.variables))
        mins = minors(jac, c)
        total = Ideal(ideal.ring, list(ideal.generators) + mins)
        ok, _ = ideal_member(ideal.ring.one(), total, timeout_s=timeout_s)
        report.details["singular_locus_empty"] = ok
        if not ok:
            report.status = FAIL
            gb = total.gb(timeout_s=timeout_s)
            report.details["witness"] = str(gb[0]) if gb else "0"
    except GBTimeout as exc:
        report.status = TIMEOUT
        report.details["timeout"] = str(exc)
    report.runtime_ms = sw.ms()
    return report


def smooth_over_model(chart, target, rel_dim, timeout_s=None, check="quadbu-smooth"):
    """Relative smoothness of a chart over a model ring.

    Adjoin the model variables by their assignments; then (i) the model
    relation must lie in the extended ideal, and (ii) the g x g minors of the
    Jacobian of its g generators with respect to the fiber variables (the
    chart variables together with pi) must generate the unit ideal modulo it.
    The generator count is checked against the codimension first, so the
    full-rank test certifies a smooth projection of the stated relative
    dimension.
    """
    sw = Stopwatch()
    report = VerificationReport(check, {"chart": chart.name}, PASS)
    try:
        ext = target.map.target
        gens = [g.cast(ext) for g in chart.ideal.generators]
        for mv in target.model_vars:
            gens.append(ext.var(mv) - target.map(mv))
        I_ext = Ideal(ext, gens)
        g = len(I_ext.generators)

        ok_rel, rel_cert = ideal_member(
            target.relation.cast(ext), I_ext, timeout_s=timeout_s
        )
        report.details["relation_member"] = ok_rel
        if not ok_rel:
            report.details["relation_residue"] = str(rel_cert.residue)

        dim = krull_dim(I_ext, timeout_s=timeout_s)
        ci = dim == ext.nvars - g
        report.details["complete_intersection"] = ci
        # the model scheme is a hypersurface in (pi, model vars), so its
        # absolute dimension equals the model variable count
        actual_rel_dim = dim - len(target.model_vars)
        report.details["rel_dim"] = actual_rel_dim
        report.details["expected_rel_dim"] = rel_dim

        fiber_vars = [v for v in ext.variables if v not in target.model_vars]
        jac = jacobian(list(I_ext.generators), fiber_vars)
        mins = minors(jac, g)
        total = Ideal(ext, list(I_ext.generators) + mins)
        ok_rank, _ = ideal_member(ext.one(), total, timeout_s=timeout_s)
        report.details["full_rank"] = ok_rank
        if not (ok_rel and ci and ok_rank and actual_rel_dim == rel_dim):
            report.status = FAIL
            if not ok_rank:
                gb = total.gb(timeout_s=timeout_s)
                report.details["witness"] = str(gb[0]) if gb else "0"
    except GBTimeout as exc:
        report.status = TIMEOUT
        report.details["timeout"] = str(exc)
    report.runtime_ms = sw.ms()
    return report
