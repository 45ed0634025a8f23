"""Independent oracles used only by the test suite.

These deliberately recompute quantities by different routes than the
library: a literal blow-up of exact Puiseux parametrizations for the
multiplicity sequence and delta, the conductor formula for delta, and
sympy rational-function arithmetic for Alexander polynomials.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, inf


class NeedMoreTerms(Exception):
    pass


class Ser:
    """Truncated power series over Fraction.

    ``order is None`` means the series is exact (all omitted coefficients
    are zero); otherwise coefficients are known for exponents < order.
    """

    __slots__ = ("c", "order")

    def __init__(self, c, order=None):
        if order is None:
            self.c = {e: v for e, v in c.items() if v != 0}
        else:
            self.c = {e: v for e, v in c.items() if v != 0 and e < order}
        self.order = order

    def val(self):
        if self.c:
            return min(self.c)
        if self.order is None:
            return inf
        raise NeedMoreTerms

    def is_monomial(self):
        return self.order is None and len(self.c) == 1

    def shift(self, k):
        return Ser({e + k: v for e, v in self.c.items()},
                   None if self.order is None else self.order + k)

    def sub_const(self):
        c = dict(self.c)
        c.pop(0, None)
        return Ser(c, self.order)

    def mul(self, other):
        lb_self = min(self.c) if self.c else (self.order if self.order is not None else inf)
        lb_other = min(other.c) if other.c else (other.order if other.order is not None else inf)
        order = inf
        if self.order is not None:
            order = min(order, self.order + lb_other)
        if other.order is not None:
            order = min(order, other.order + lb_self)
        out: dict = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                if e < order:
                    out[e] = out.get(e, Fraction(0)) + v1 * v2
        return Ser(out, None if order is inf else int(order))


def _inv_unit(u: Ser, budget: int) -> Ser:
    """Inverse of a series with val 0, truncated at ``budget`` terms."""
    order = budget if u.order is None else min(u.order, budget)
    c0 = u.c[0]
    tail = sorted((e, v) for e, v in u.c.items() if e != 0 and e < order)
    result = {0: Fraction(1) / c0}
    if tail:
        # r_k = -(1/c0) * sum_{0<j<=k} u_j r_{k-j}
        for k in range(1, order):
            acc = Fraction(0)
            for e, v in tail:
                if e > k:
                    break
                r = result.get(k - e)
                if r is not None:
                    acc += v * r
            if acc:
                result[k] = -acc / c0
    return Ser(result, order)


def _div(num: Ser, den: Ser, budget: int) -> Ser:
    dv = den.val()
    if dv is inf:
        raise ZeroDivisionError
    if den.is_monomial():
        coef = den.c[dv]
        return Ser({e - dv: v / coef for e, v in num.c.items()},
                   None if num.order is None else num.order - dv)
    unit = den.shift(-dv)
    return num.mul(_inv_unit(unit, budget)).shift(-dv)


def _blowup_once(char_exponents, budget):
    x = Ser({char_exponents[0]: Fraction(1)})
    y = Ser({e: Fraction(1) for e in char_exponents[1:]})
    x_exc = y_exc = False
    seq = []
    for _ in range(100000):
        a, b = x.val(), y.val()
        m = int(min(a, b))
        seq.append(m)
        if a <= b:
            y = _div(y, x, budget)
            translated = False
            if y.c and y.val() == 0:
                y = y.sub_const()
                translated = True
            x_exc, y_exc = True, (y_exc and not translated)
        else:
            x = _div(x, y, budget)
            translated = False
            if x.c and x.val() == 0:
                x = x.sub_const()
                translated = True
            x_exc, y_exc = (x_exc and not translated), True
        a2, b2 = x.val(), y.val()
        if min(a2, b2) == 1:
            if x_exc and not y_exc and a2 == 1:
                break
            if y_exc and not x_exc and b2 == 1:
                break
    else:
        raise RuntimeError("blow-up did not terminate")
    return seq


def _blowup_cached(exps):
    budget = 2 * max(exps) + 16
    for _ in range(6):
        try:
            return _blowup_once(exps, budget)
        except NeedMoreTerms:
            budget *= 2
    raise RuntimeError(f"oracle budget exhausted for {exps}")


_BLOWUP_MEMO: dict = {}


def blowup_multiplicity_sequence(char_exponents):
    """Literal blow-up of the parametrization x=t^b0, y=sum t^bk, recording
    the multiplicity at every center until the strict transform is smooth
    and transversal to a single exceptional axis."""
    exps = tuple(char_exponents)
    if exps == (1,):
        return [1]
    if exps not in _BLOWUP_MEMO:
        _BLOWUP_MEMO[exps] = _blowup_once_retry(exps)
    return list(_BLOWUP_MEMO[exps])


def _blowup_once_retry(exps):
    return _blowup_cached(exps)


def blowup_delta(char_exponents):
    """Delta via the blow-up recursion: each center contributes m(m-1)/2."""
    return sum(m * (m - 1) // 2 for m in blowup_multiplicity_sequence(char_exponents))


def delta_conductor(char_exponents):
    """Delta from the conductor formula sum b_k (e_{k-1} - e_k) - b0 + 1 over 2."""
    exps = tuple(char_exponents)
    if exps == (1,):
        return 0
    e = exps[0]
    c = 1 - exps[0]
    for b in exps[1:]:
        e_next = gcd(e, b)
        c += b * (e - e_next)
        e = e_next
    assert c % 2 == 0
    return c // 2


def small_branch_grid(max_b0=6, max_exp=25, max_len=3):
    """All valid characteristic-exponent tuples with b0 <= max_b0 and
    exponents bounded, up to max_len entries."""
    out = [(1,)]

    def extend(prefix, e):
        if e == 1:
            out.append(prefix)
            return
        if len(prefix) == max_len:
            return
        for b in range(prefix[-1] + 1, max_exp + 1):
            if b % e == 0:
                continue
            e2 = gcd(e, b)
            if e2 == 1:
                out.append(prefix + (b,))
            if len(prefix) + 1 < max_len and e2 > 1:
                extend(prefix + (b,), e2)

    for b0 in range(2, max_b0 + 1):
        extend((b0,), b0)
    return out
