"""Formal bilateral series in the shift symbol n.

A SeriesExpr stands for sum_n C_n * (body term)(n), where n runs over an
integer-spaced set and C_n is a formal prefactor subject to one rewrite rule

    (-2t - 2n)(-2t - 2n - 1) C_n = 2 (n + 1) C_{n+1}.

No summation is ever performed: equality means the terms cancel after
reindexing n (anchoring the designated power factor's exponent to exactly n)
and applying the rewrite rule, with power-factor offsets of a common base
expanded as usual.  A final absorption pass recombines complete copies of
the anchor base back into its power, which is the only rewriting the
verification ever needs beyond level expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coeffs import Exp, RatFunc
from .fields import (
    BaseKey,
    FieldContext,
    FieldExpr,
    Term,
    expand_power_levels,
    prim_parity,
)


def cn_ratio(hvee: int) -> RatFunc:
    """C_{n+1}/C_n from the defining recursion."""
    t = RatFunc.t(hvee)
    n = RatFunc.n()
    return (-2 * t - 2 * n) * (-2 * t - 2 * n - 1) / (2 * (n + 1))


def _cn_shift_factor(hvee: int, j: int) -> RatFunc:
    """C_{n-j} / C_n as a rational function of n (after the reindex)."""
    out = RatFunc.one()
    if j > 0:
        for i in range(1, j + 1):
            out = out / cn_ratio(hvee).shift_n(-i)
    else:
        for i in range(0, -j):
            out = out * cn_ratio(hvee).shift_n(i)
    return out


def _anchor_of(term: Term) -> Optional[tuple[int, Exp]]:
    for idx, (key, exp) in enumerate(term[1]):
        if exp.w == 1:
            return idx, exp
    return None


@dataclass
class SeriesExpr:
    """Implicit sum over n of C_n times each term of ``body``."""

    body: FieldExpr

    @staticmethod
    def zero() -> "SeriesExpr":
        return SeriesExpr(FieldExpr.zero())

    def __add__(self, other: "SeriesExpr") -> "SeriesExpr":
        return SeriesExpr(self.body + other.body)

    def __sub__(self, other: "SeriesExpr") -> "SeriesExpr":
        return SeriesExpr(self.body - other.body)

    def scale(self, c) -> "SeriesExpr":
        return SeriesExpr(self.body.scale(c))

    def derivative(self, ctx: FieldContext) -> "SeriesExpr":
        return SeriesExpr(self.body.derivative(ctx))

    def anchored(self, ctx: FieldContext) -> "SeriesExpr":
        """Reindex each term so the anchor power sits at exactly n."""
        out = FieldExpr.zero()
        for term, coef in self.body.terms.items():
            anchor = _anchor_of(term)
            if anchor is None:
                raise ValueError("series term lost its anchor power factor")
            _, exp = anchor
            if exp.u != 0 or exp.v.denominator != 1:
                raise ValueError("anchor exponent must be n plus an integer")
            j = int(exp.v)
            piece = FieldExpr({term: coef})
            if j:
                piece = piece.shift_n(-j).scale(_cn_shift_factor(ctx.hvee, j))
            out = out + piece
        return SeriesExpr(out)

    def is_zero(self, ctx: FieldContext) -> bool:
        body = self.anchored(ctx).body
        if body.is_structurally_zero:
            return True
        body = expand_power_levels(body)
        if body.is_structurally_zero:
            return True
        body = _absorb_anchor_copies(ctx, body)
        return body.is_structurally_zero

    def equals(self, other: "SeriesExpr", ctx: FieldContext) -> bool:
        return (self - other).is_zero(ctx)

    def residual(self, ctx: FieldContext) -> FieldExpr:
        """What is left after collection; empty means zero."""
        body = expand_power_levels(self.anchored(ctx).body)
        return _absorb_anchor_copies(ctx, body)

    def text(self, ctx: Optional[FieldContext] = None) -> str:
        if self.body.is_structurally_zero:
            return "0"
        return "sum_n C_n [ " + self.body.text(ctx) + " ]"


def _multiset_minus(prims: tuple, tau: tuple) -> Optional[tuple]:
    out = list(prims)
    for g in tau:
        try:
            out.remove(g)
        except ValueError:
            return None
    return tuple(out)


def _pivot_monomial(key: BaseKey) -> tuple:
    """The base monomial used to orient the copy-elimination rewrite.

    Choosing the monomial whose greatest primitive is largest means the
    spread copies produced by the promotion (which carry no such primitive)
    can never recreate a pivot pattern, so the rewrite terminates; and since
    every relation instance touches exactly one pivot key, eliminating all
    pivot keys decides membership in the relation span.
    """
    return max(key, key=lambda it: (max(it[0]), it[0]))[0]


def _absorb_anchor_copies(ctx: FieldContext, body: FieldExpr) -> FieldExpr:
    """Quotient by :sum_tau c_tau tau m A^n: = :m A^{n+1}: at a common level.

    Works on the anchored, level-expanded representation: every term whose
    bare factors contain the pivot monomial of its anchor base is rewritten
    through the relation (the promoted A^{n+1} piece is re-anchored, which
    applies the C_n rule, and re-expanded).  What survives is the canonical
    residual; it is empty exactly when the series vanishes.
    """
    for _ in range(500):
        if body.is_structurally_zero:
            return body
        target = None
        for term, coef in body.terms.items():
            anchor = _anchor_of(term)
            if anchor is None:
                continue
            key = term[1][anchor[0]][0]
            if any(prim_parity(g) for prims, _ in key for g in prims):
                continue  # the rewrite is only used for the bosonic series
            pivot = _pivot_monomial(key)
            rest = _multiset_minus(term[0], pivot)
            if rest is None:
                continue
            cand = (term, coef, key, pivot, rest)
            if target is None or term < target[0]:
                target = cand
        if target is None:
            return body
        term, coef, key, pivot, rest = target
        cpivot = dict(key)[pivot]
        lam = coef / cpivot
        prims, pfs, vertex = term
        removal = FieldExpr._from_raw(
            [(lam * ctau, rest + tau, pfs, vertex) for tau, ctau in key]
        )
        aidx = next(i for i, (kk, e) in enumerate(pfs) if e.w == 1)
        bumped = pfs[:aidx] + ((key, pfs[aidx][1] + 1),) + pfs[aidx + 1:]
        promoted = FieldExpr._from_raw([(lam, rest, bumped, vertex)])
        body = body - removal + SeriesExpr(promoted).anchored(ctx).body
        body = expand_power_levels(body)
    raise RuntimeError("series copy-elimination did not terminate")
