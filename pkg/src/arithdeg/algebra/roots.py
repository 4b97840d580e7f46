"""Sturm sequences and real root isolation over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import IntPoly, squarefree_part


def sturm_sequence(p: IntPoly) -> list[IntPoly]:
    """Sturm chain of a squarefree polynomial, kept primitive with sign-safe scaling."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r, _ = seq[-2].pseudo_divmod(seq[-1])
        if r.is_zero():
            break
        c = r.content()
        seq.append(IntPoly(-(a // c) for a in r.coeffs))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def sign_variations(seq: Sequence[IntPoly], x: Fraction) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(seq: Sequence[IntPoly], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots in (lo, hi]."""
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def root_bound(p: IntPoly) -> Fraction:
    """Cauchy bound: every complex root has modulus < 1 + max|a_i / a_n|."""
    lc = abs(p.lc)
    return 1 + max((Fraction(abs(a), lc) for a in p.coeffs[:-1]), default=Fraction(0))


def isolate_intervals(p: IntPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the real roots of a squarefree p.

    Endpoints are never roots; intervals are sorted ascending.
    """
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    b = root_bound(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 and p.sign_at(hi) != 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if p.sign_at(mid) == 0:
            # rational root: isolate it in a small window inside (lo, hi)
            w = (hi - lo) / 4
            while sturm_count(seq, mid - w, mid + w) > 1 or p.sign_at(mid - w) == 0 or p.sign_at(mid + w) == 0:
                w /= 2
            out.append((mid - w, mid + w))
            stack.append((lo, mid - w))
            stack.append((mid + w, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    out.sort()
    return out


def bisect_root(p: IntPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root until its width is <= width."""
    slo = p.sign_at(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = p.sign_at(mid)
        if s == 0:
            w = min(width, hi - lo) / 4
            return mid - w, mid + w
        if s == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots_squarefree(p: IntPoly) -> tuple[IntPoly, list[tuple[Fraction, Fraction]]]:
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    q = squarefree_part(p)
    return q, isolate_intervals(q)


def all_roots_in_unit_disk(p: IntPoly) -> bool:
    """Schur-Cohn test: every complex root of p has modulus < 1 (exact)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    cs = [Fraction(c) for c in p.coeffs]
    while len(cs) > 1:
        a0, an = cs[0], cs[-1]
        if abs(a0) >= abs(an):
            return False
        n = len(cs) - 1
        # (a_n p - a_0 p*) / z, where p* is the reversal
        cs = [an * cs[i + 1] - a0 * cs[n - i - 1] for i in range(n)]
    return True


def all_roots_outside_unit_disk(p: IntPoly) -> bool:
    """Every complex root of p has modulus > 1."""
    if p.coeffs and p.coeffs[0] == 0:
        return False
    return all_roots_in_unit_disk(p.reversed())
