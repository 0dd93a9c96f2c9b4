"""Buchberger-based ideal arithmetic over Q.

The engine works on denominator-cleared integer coefficient dicts
(fraction-free reduction with periodic content normalization), which keeps
the hot loops on machine/big ints instead of Fraction objects.  Public
results are monic polynomials with exact rational cofactor certificates.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .poly import (
    Block,
    ParseError,
    PolyError,
    PolyRing,
    Polynomial,
    order_from_name,
    parse_poly,
)

__all__ = [
    "GBTimeout",
    "Ideal",
    "MembershipCertificate",
    "buchberger",
    "reduce_poly",
    "ideal_member",
    "ideal_equal",
    "ideal_contains",
    "eliminate",
    "quotient",
    "saturate",
    "radical_member",
    "intersect",
    "krull_dim",
    "write_ideal_text",
    "read_ideal_text",
]


class GBTimeout(PolyError):
    """Raised when a Groebner computation exceeds its deadline."""

    def __init__(self, seconds, where="buchberger"):
        super().__init__("%s exceeded the %.1f s budget" % (where, seconds))
        self.seconds = seconds
        self.where = where


def _deadline(timeout_s):
    if timeout_s is None:
        return None
    return (time.monotonic() + timeout_s, float(timeout_s))


# ------------------------------------------------- integer representation


def _int_clear(p):
    """Clear denominators and content; return (terms dict exp->int, scale).

    scale is the rational r with p = r * (integer form); the integer form has
    positive leading coefficient under p's ring order.
    """
    if p.is_zero:
        return {}, Fraction(1)
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    terms = {e: int(c * den) for e, c in p.terms.items()}
    g = 0
    for v in terms.values():
        g = gcd(g, v)
    if g > 1:
        terms = {e: v // g for e, v in terms.items()}
    key = p.ring.exp_key
    lead = max(terms, key=key)
    sign = 1
    if terms[lead] < 0:
        sign = -1
        terms = {e: -v for e, v in terms.items()}
    return terms, Fraction(sign * g, den)


def _primitive(terms):
    if not terms:
        return terms
    g = 0
    for v in terms.values():
        g = gcd(g, v)
        if g == 1:
            return terms
    return {e: v // g for e, v in terms.items()}


def _to_poly(ring, terms, monic=True):
    if not terms:
        return ring.zero()
    p = Polynomial(ring, {e: Fraction(v) for e, v in terms.items()})
    return p.monic() if monic else p


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _mono_divides(a, b):
    # does a divide b
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class _Engine:
    """Shared monomial-key memo plus deadline bookkeeping for one computation."""

    def __init__(self, key_fn, deadline=None):
        self.key_fn = key_fn
        self.memo = {}
        self.deadline = deadline
        self._tick = 0

    def key(self, e):
        got = self.memo.get(e)
        if got is None:
            got = self.memo[e] = self.key_fn(e)
        return got

    def check_time(self, every=256):
        self._tick += 1
        if self.deadline is not None and self._tick % every == 0:
            until, seconds = self.deadline
            if time.monotonic() > until:
                raise GBTimeout(seconds)

    def lead(self, terms):
        key = self.key
        best = None
        bk = None
        for e in terms:
            ke = key(e)
            if bk is None or ke > bk:
                bk, best = ke, e
        return best

    # -- fraction-free full normal form

    def nf(self, terms, reducers):
        """Normal form of an integer term dict against (lt, lc, terms) reducers."""
        work = dict(terms)
        done = set()
        key = self.key
        steps = 0
        while True:
            self.check_time()
            best = None
            bk = None
            for e in work:
                if e in done:
                    continue
                ke = key(e)
                if bk is None or ke > bk:
                    bk, best = ke, e
            if best is None:
                break
            hit = None
            for red in reducers:
                if _mono_divides(red[0], best):
                    hit = red
                    break
            if hit is None:
                done.add(best)
                continue
            lte, ltc, td = hit
            c = work[best]
            g0 = gcd(c, ltc)
            mw = ltc // g0
            mg = c // g0
            if mw != 1:
                for k2 in work:
                    work[k2] *= mw
            shift = tuple(a - b for a, b in zip(best, lte))
            for ge, gc in td.items():
                ne = _mono_mul(ge, shift)
                s = work.get(ne, 0) - mg * gc
                if s:
                    work[ne] = s
                else:
                    work.pop(ne, None)
            steps += 1
            if steps % 64 == 0:
                work = _primitive(work)
        return _primitive(work)

    def spoly(self, e1, c1, t1, e2, c2, t2):
        lcm_exp = _mono_lcm(e1, e2)
        g0 = gcd(c1, c2)
        m1 = c2 // g0
        m2 = c1 // g0
        s1 = tuple(a - b for a, b in zip(lcm_exp, e1))
        s2 = tuple(a - b for a, b in zip(lcm_exp, e2))
        out = {}
        for ge, gc in t1.items():
            ne = _mono_mul(ge, s1)
            out[ne] = out.get(ne, 0) + m1 * gc
        for ge, gc in t2.items():
            ne = _mono_mul(ge, s2)
            s = out.get(ne, 0) - m2 * gc
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return _primitive(out)


# ------------------------------------------------------------- buchberger


def _update(f, G, B, ih, eng):
    """Gebauer-Moeller pair update; G active indices, B dict pair -> sugar."""
    lt_h, _, _, sug_h = f[ih]
    deg = sum

    def pair_sugar(i, j):
        lti, _, _, si = f[i]
        ltj, _, _, sj = f[j]
        l = _mono_lcm(lti, ltj)
        return max(si + deg(l) - deg(lti), sj + deg(l) - deg(ltj))

    C = sorted(G)
    D = []
    lcm_h = {ig: _mono_lcm(lt_h, f[ig][0]) for ig in G}
    while C:
        ig = C.pop(0)
        coprime = _mono_mul(lt_h, f[ig][0]) == lcm_h[ig]
        divided = any(
            _mono_divides(lcm_h[ip], lcm_h[ig]) and lcm_h[ip] != lcm_h[ig]
            for ip in C
        ) or any(
            _mono_divides(lcm_h[ip], lcm_h[ig]) and lcm_h[ip] != lcm_h[ig]
            for ip in D
        )
        if coprime or not divided:
            D.append(ig)
    E = [ig for ig in D if _mono_mul(lt_h, f[ig][0]) != lcm_h[ig]]

    B_new = {}
    for (i, j), sug in sorted(B.items()):
        lti, ltj = f[i][0], f[j][0]
        l = _mono_lcm(lti, ltj)
        if (
            not _mono_divides(lt_h, l)
            or _mono_lcm(lti, lt_h) == l
            or _mono_lcm(ltj, lt_h) == l
        ):
            B_new[(i, j)] = sug
    for ig in sorted(E):
        i, j = min(ig, ih), max(ig, ih)
        B_new[(i, j)] = pair_sugar(i, j)

    G_new = {ig for ig in G if not _mono_divides(lt_h, f[ig][0])}
    G_new.add(ih)
    return G_new, B_new


def _groebner_int(int_gens, eng, degree_bound=None):
    """Run Buchberger; return (entries list, active index list, partial flag)."""
    f = []
    seen = {}
    seeds = []
    for terms in int_gens:
        if not terms:
            continue
        fro = frozenset(terms.items())
        if fro in seen:
            continue
        seen[fro] = True
        seeds.append(terms)
    # seed deterministically, biggest leading term first
    seeds.sort(key=lambda t: eng.key(eng.lead(t)), reverse=True)

    G = set()
    B = {}
    partial = False
    for terms in seeds:
        lt = eng.lead(terms)
        entry = (lt, terms[lt], terms, max(sum(e) for e in terms))
        ih = len(f)
        f.append(entry)
        G, B = _update(f, G, B, ih, eng)

    while B:
        eng.check_time(every=1)
        (i, j) = min(B, key=lambda ij: (B[ij], ij))
        sug = B.pop((i, j))
        if degree_bound is not None and sug > degree_bound:
            partial = True
            continue
        lti, lci, ti, _ = f[i]
        ltj, lcj, tj, _ = f[j]
        s = eng.spoly(lti, lci, ti, ltj, lcj, tj)
        if not s:
            continue
        reducers = [f[g][:3] for g in sorted(G)]
        h = eng.nf(s, reducers)
        if not h:
            continue
        lt = eng.lead(h)
        entry = (lt, h[lt], h, sug)
        ih = len(f)
        f.append(entry)
        G, B = _update(f, G, B, ih, eng)

    return f, sorted(G), partial


def _interreduce(entries, eng):
    """Minimalize leading terms, then fully reduce tails; canonical order."""
    entries = sorted(entries, key=lambda en: eng.key(en[0]))
    kept = []
    for en in entries:
        if not any(_mono_divides(k[0], en[0]) for k in kept):
            kept.append(en)
    changed = True
    while changed:
        changed = False
        for idx in range(len(kept)):
            others = [kept[k][:3] for k in range(len(kept)) if k != idx]
            t = eng.nf(kept[idx][2], others)
            if t != kept[idx][2]:
                changed = True
                if not t:
                    kept.pop(idx)
                    break
                lt = eng.lead(t)
                kept[idx] = (lt, t[lt], t, kept[idx][3])
    kept.sort(key=lambda en: eng.key(en[0]))
    return kept


def buchberger(ideal, order=None, degree_bound=None, timeout_s=None):
    """Reduced Groebner basis of the ideal under the given (or ring) order.

    With degree_bound set, S-pairs above the sugar bound are dropped and the
    basis is flagged partial: sound for certifying membership on reduction to
    zero, never for non-membership.  Returns (tuple of monic polys, partial).
    """
    ring = ideal.ring if order is None else ideal.ring.with_order(order)
    eng = _Engine(ring.exp_key, _deadline(timeout_s))
    int_gens = []
    for g in ideal.generators:
        terms, _ = _int_clear(g.cast(ring))
        int_gens.append(terms)
    f, active, partial = _groebner_int(int_gens, eng, degree_bound)
    kept = _interreduce([f[i] for i in active], eng)
    basis = tuple(_to_poly(ring, en[2]) for en in kept)
    return basis, partial


# ------------------------------------------------------------ certificates


@dataclass(frozen=True)
class MembershipCertificate:
    """Exact identity p = sum(cofactor_i * basis_i) + residue."""

    basis: tuple
    cofactors: tuple
    residue: Polynomial

    def verify(self, p):
        acc = p.ring.zero()
        for c, b in zip(self.cofactors, self.basis):
            acc = acc + c * b.cast(p.ring)
        acc = acc + self.residue
        return acc == p

    @property
    def is_member(self):
        return self.residue.is_zero


def reduce_poly(p, basis, timeout_s=None):
    """Full normal form plus certificate against an ordered basis list.

    Divisor selection is first-match in list order; the normal form has no
    term divisible by any basis leading term.
    """
    basis = list(basis)
    ring = p.ring
    for b in basis:
        if b.ring != ring:
            raise PolyError("ring mismatch between polynomial and basis")
    eng = _Engine(ring.exp_key, _deadline(timeout_s))
    reducers = []
    scales = []
    for b in basis:
        if b.is_zero:
            reducers.append(None)
            scales.append(Fraction(1))
            continue
        terms, r = _int_clear(b)
        lt = eng.lead(terms)
        reducers.append((lt, terms[lt], terms))
        scales.append(r)

    pt, pr = _int_clear(p)
    # tracked fraction-free reduction: M * p_int = sum(C_i g_i) + R
    work = dict(pt)
    cof = [dict() for _ in basis]
    M = 1
    done = set()
    key = eng.key
    while True:
        eng.check_time()
        best = None
        bk = None
        for e in work:
            if e in done:
                continue
            ke = key(e)
            if bk is None or ke > bk:
                bk, best = ke, e
        if best is None:
            break
        hit = -1
        for idx, red in enumerate(reducers):
            if red is not None and _mono_divides(red[0], best):
                hit = idx
                break
        if hit < 0:
            done.add(best)
            continue
        lte, ltc, td = reducers[hit]
        c = work[best]
        g0 = gcd(c, ltc)
        mw = ltc // g0
        mg = c // g0
        if mw != 1:
            M *= mw
            for k2 in work:
                work[k2] *= mw
            for cd in cof:
                for k2 in cd:
                    cd[k2] *= mw
        shift = tuple(a - b for a, b in zip(best, lte))
        cof[hit][shift] = cof[hit].get(shift, 0) + mg
        for ge, gc in td.items():
            ne = _mono_mul(ge, shift)
            s = work.get(ne, 0) - mg * gc
            if s:
                work[ne] = s
            else:
                work.pop(ne, None)

    # p = pr * p_int; cofactor against original b_i needs the 1/scale_i
    cofactors = []
    for cd, r in zip(cof, scales):
        q = Polynomial(ring, {e: Fraction(v) for e, v in cd.items() if v})
        cofactors.append(q * (pr / (M * r)))
    residue = Polynomial(ring, {e: Fraction(v) for e, v in work.items() if v}) * (
        pr / M
    )
    cert = MembershipCertificate(tuple(basis), tuple(cofactors), residue)
    return residue, cert


# ------------------------------------------------------------------ ideals


class Ideal:
    """Generator list in a ring, with a cached reduced Groebner basis."""

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, ring, generators):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = parse_poly(g, ring)
            g = g.cast(ring)
            if not g.is_zero:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb = None

    def gb(self, timeout_s=None):
        """Reduced Groebner basis under the ring order, cached."""
        if self._gb is None:
            basis, _ = buchberger(self, timeout_s=timeout_s)
            for g in self.generators:
                r, _ = reduce_poly(g, basis)
                if not r.is_zero:
                    raise PolyError("internal error: generator fails to reduce")
            self._gb = basis
        return self._gb

    def with_order(self, order):
        ring = self.ring.with_order(order)
        return Ideal(ring, [g.cast(ring) for g in self.generators])

    def __repr__(self):
        return "Ideal(%d gens in QQ[%s])" % (
            len(self.generators),
            ", ".join(self.ring.variables),
        )


def ideal_member(p, ideal, timeout_s=None):
    """Membership via normal form against the cached reduced GB."""
    basis = ideal.gb(timeout_s=timeout_s)
    residue, cert = reduce_poly(p.cast(ideal.ring), list(basis), timeout_s=timeout_s)
    return residue.is_zero, cert


def ideal_contains(big, small, timeout_s=None):
    """True iff every generator of `small` lies in `big`."""
    basis = big.gb(timeout_s=timeout_s)
    for g in small.generators:
        r, _ = reduce_poly(g.cast(big.ring), list(basis), timeout_s=timeout_s)
        if not r.is_zero:
            return False
    return True


def ideal_equal(I, J, timeout_s=None):
    if set(I.ring.variables) != set(J.ring.variables):
        raise PolyError("ideal comparison across different variable sets")
    Jc = Ideal(I.ring, [g.cast(I.ring) for g in J.generators]) if J.ring != I.ring else J
    return ideal_contains(I, Jc, timeout_s) and ideal_contains(Jc, I, timeout_s)


def eliminate(I, vars_to_remove, timeout_s=None):
    """Generators of I intersected with the subring without the given variables."""
    removed = tuple(v for v in I.ring.variables if v in set(vars_to_remove))
    if not removed:
        return Ideal(I.ring, I.generators)
    order = Block(removed)
    basis, _ = buchberger(I, order=order, timeout_s=timeout_s)
    sub = I.ring.restrict([v for v in I.ring.variables if v not in set(removed)])
    kept = []
    for g in basis:
        if not (g.variables_used() & set(removed)):
            kept.append(g.cast(sub))
    return Ideal(sub, kept)


def _fresh_name(ring, stem):
    name = stem
    k = 0
    while name in ring.index:
        k += 1
        name = "%s%d" % (stem, k)
    return name


def intersect(I, J, timeout_s=None):
    """I cap J via the (t I + (1 - t) J) elimination trick."""
    if I.ring.variables != J.ring.variables:
        J = Ideal(I.ring, [g.cast(I.ring) for g in J.generators])
    t = _fresh_name(I.ring, "t_isect")
    ext = I.ring.extend([t])
    tv = ext.var(t)
    gens = [tv * g.cast(ext) for g in I.generators]
    gens += [(ext.one() - tv) * g.cast(ext) for g in J.generators]
    E = eliminate(Ideal(ext, gens), [t], timeout_s=timeout_s)
    return Ideal(I.ring, [g.cast(I.ring) for g in E.generators])


def _exact_div(h, f):
    r, cert = reduce_poly(h, [f])
    if not r.is_zero:
        raise PolyError("inexact division in ideal quotient")
    return cert.cofactors[0]


def quotient(I, f, timeout_s=None):
    """(I : f) = {g : g f in I} via the intersection trick."""
    f = f.cast(I.ring)
    if f.is_zero:
        raise PolyError("quotient by zero")
    J = intersect(I, Ideal(I.ring, [f]), timeout_s=timeout_s)
    gens = [_exact_div(h, f) for h in J.generators]
    return Ideal(I.ring, gens)


def saturate(I, f, timeout_s=None):
    """(I : f^infinity), iterating the quotient to stabilization."""
    current = Ideal(I.ring, I.generators)
    while True:
        nxt = quotient(current, f, timeout_s=timeout_s)
        if ideal_contains(current, nxt, timeout_s=timeout_s):
            return current
        current = nxt


def radical_member(p, I, timeout_s=None):
    """Rabinowitsch test: p in rad(I) iff 1 in I + (1 - t p)."""
    p = p.cast(I.ring)
    t = _fresh_name(I.ring, "t_rab")
    ext = I.ring.extend([t])
    tv = ext.var(t)
    gens = [g.cast(ext) for g in I.generators]
    gens.append(ext.one() - tv * p.cast(ext))
    basis, _ = buchberger(Ideal(ext, gens), timeout_s=timeout_s)
    return len(basis) == 1 and basis[0] == ext.one()


def krull_dim(I, timeout_s=None):
    """Dimension of V(I) over Q via independent sets modulo leading terms."""
    basis = I.gb(timeout_s=timeout_s)
    n = I.ring.nvars
    if not basis:
        return n
    supports = []
    for g in basis:
        if g.total_degree() == 0:
            return -1
        supports.append(frozenset(i for i, e in enumerate(g.lm()) if e))
    # keep only minimal supports
    supports = sorted(set(supports), key=lambda s: (len(s), sorted(s)))
    minimal = []
    for s in supports:
        if not any(m <= s for m in minimal):
            minimal.append(s)

    memo = {}

    def search(excluded):
        live = [s for s in minimal if not (s & excluded)]
        if not live:
            return n - len(excluded)
        key = excluded
        got = memo.get(key)
        if got is not None:
            return got
        s = min(live, key=lambda s: (len(s), sorted(s)))
        best = -1
        for v in sorted(s):
            best = max(best, search(excluded | frozenset([v])))
        memo[key] = best
        return best

    return search(frozenset())


# --------------------------------------------------------- .ideal format

IDEAL_HEADER = "# lmlab-ideal v1"


def write_ideal_text(ideal, sort_generators=True):
    """Canonical `.ideal` text: header, ring, order, one gen line each."""
    lines = [IDEAL_HEADER]
    lines.append("ring QQ [%s]" % ", ".join(ideal.ring.variables))
    order = ideal.ring.order
    if isinstance(order, Block):
        lines.append(
            "order block [%s] %s %s"
            % (",".join(order.eliminated), order.order1.name, order.order2.name)
        )
    else:
        lines.append("order %s" % order.name)
    gens = list(ideal.generators)
    if sort_generators:
        key = ideal.ring.exp_key
        gens.sort(key=lambda g: key(g.lm()))
    for g in gens:
        lines.append("gen %s" % g)
    return "\n".join(lines) + "\n"


def read_ideal_text(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != IDEAL_HEADER:
        raise ParseError("missing `%s` header" % IDEAL_HEADER, 0)
    if len(lines) < 3:
        raise ParseError("truncated ideal file", 0)
    ring_line, order_line = lines[1], lines[2]
    if not (ring_line.startswith("ring QQ [") and ring_line.endswith("]")):
        raise ParseError("malformed ring line: %r" % ring_line, 1)
    inner = ring_line[len("ring QQ [") : -1].strip()
    variables = [v.strip() for v in inner.split(",")] if inner else []
    if not order_line.startswith("order "):
        raise ParseError("malformed order line: %r" % order_line, 2)
    tokens = order_line[len("order ") :].split()
    if tokens[0] == "block":
        if len(tokens) != 4 or not (tokens[1].startswith("[") and tokens[1].endswith("]")):
            raise ParseError("malformed block order: %r" % order_line, 2)
        elim = [v for v in tokens[1][1:-1].split(",") if v]
        order = Block(elim, order_from_name(tokens[2]), order_from_name(tokens[3]))
    elif tokens[0] in ("lex", "grevlex") and len(tokens) == 1:
        order = order_from_name(tokens[0])
    else:
        raise ParseError("unknown order token: %r" % order_line, 2)
    ring = PolyRing(variables, order)
    gens = []
    for idx, ln in enumerate(lines[3:]):
        if not ln.startswith("gen "):
            raise ParseError("expected `gen` line, found %r" % ln, idx + 3)
        try:
            gens.append(parse_poly(ln[4:], ring))
        except ParseError as exc:
            raise ParseError(
                "line %d, column %d: %s" % (idx + 4, exc.position + 1, exc),
                exc.position,
            ) from exc
    return Ideal(ring, gens)
