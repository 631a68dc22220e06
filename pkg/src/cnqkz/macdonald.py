"""The C_n Macdonald operator E and the one-row polynomial P_{(lambda,0,...,0)}.

E = sum_{a in {+-1}^n} prod_{i<j} (1 - t y_i^{a_i} y_j^{a_j}) / (1 - y_i^{a_i} y_j^{a_j})
                       prod_i (1 - t y_i^{2 a_i}) / (1 - y_i^{2 a_i}) T_{y_i}^{a_i/2}

where T_{y_i}^{1/2} sends y_i to q^{1/2} y_i = v y_i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from . import weyl
from .report import Report
from .ring import LaurentPoly, RatFunc, Ring, V, pack, unpack
from .rmatrix import check_rank


class NotInvariantError(ValueError):
    pass


@dataclass(frozen=True)
class SymLaurent:
    """num/den with num in (v, u, y) and den in (v, u) only.

    ``invariant`` records that every simple reflection fixes the value; it is
    verified when the object is built with ``check=True``.
    """
    num: LaurentPoly
    den: LaurentPoly
    invariant: bool = False

    def __post_init__(self):
        if self.num.involves([self.num.rank + 2]) or self.den.involves(range(2, self.den.rank + 3)):
            raise ValueError("SymLaurent numerators may not involve x; denominators only v and u")

    @classmethod
    def make(cls, num: LaurentPoly, den: LaurentPoly | None = None, invariant: bool = False,
             check: bool = True) -> "SymLaurent":
        den = den if den is not None else LaurentPoly.constant(num.rank, 1)
        out = cls(num, den, invariant)
        if invariant and check:
            n = num.rank
            for i in range(1, n + 1):
                if weyl.act_on_ratfunc(weyl.simple_reflection(i, n), num) != num:
                    raise NotInvariantError(f"not fixed by s{i}")
        return out

    @property
    def rank(self) -> int:
        return self.num.rank

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(self.num, self.den)

    def y_coefficients(self) -> dict[tuple[int, ...], LaurentPoly]:
        """Group the numerator by y-exponent; values are polynomials in v, u."""
        n = self.rank
        out: dict[tuple[int, ...], dict[int, object]] = {}
        for key, c in self.num.terms.items():
            exps = unpack(key, n + 3)
            ye = exps[2:2 + n]
            vu = (exps[0], exps[1]) + (0,) * (n + 1)
            out.setdefault(ye, {})[pack(vu)] = c
        return {ye: LaurentPoly(n, d) for ye, d in out.items()}


# -- the operator -------------------------------------------------------------

def half_shift(f, signs: Sequence[int]):
    """Substitute y_i -> v^{a_i} y_i for the sign vector ``signs``."""
    def fn(exps):
        e = list(exps)
        e[V] += sum(a * exps[2 + i] for i, a in enumerate(signs))
        return tuple(e), 1
    return f.map_exponents(fn)


def _e_coefficient(signs: Sequence[int], n: int) -> RatFunc:
    R = Ring(n)
    num, den = R.one, R.one
    for i in range(n):
        for j in range(i + 1, n):
            m = R.mono(y={i + 1: signs[i], j + 1: signs[j]})
            num, den = num * (1 - R.t * m), den * (1 - m)
        m = R.y(i + 1, 2 * signs[i])
        num, den = num * (1 - R.t * m), den * (1 - m)
    return RatFunc(num, den)


@lru_cache(maxsize=None)
def e_common_denominator(n: int) -> LaurentPoly:
    """Delta = prod_{i<j} (1 - y_i y_j)(1 - y_i/y_j) prod_i (1 - y_i^2)."""
    R = Ring(n)
    out = R.one
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out = out * (1 - R.y(i) * R.y(j)) * (1 - R.y(i) * R.y(j, -1))
        out = out * (1 - R.y(i, 2))
    return out


@lru_cache(maxsize=None)
def e_numerators(n: int) -> tuple[tuple[tuple[int, ...], LaurentPoly], ...]:
    """For each sign vector a, the polynomial C_a * Delta.

    With m = y_i^{+-1} y_j^{+-1}: (1 - t m)/(1 - m) if m is one of the
    monomials in Delta, and (t - m^{-1})/(1 - m^{-1}) otherwise.
    """
    R = Ring(n)
    out = []
    for signs in itertools.product((1, -1), repeat=n):
        num = R.one
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                ai, aj = signs[i - 1], signs[j - 1]
                plus, minus = R.y(i) * R.y(j), R.y(i) * R.y(j, -1)
                if ai == aj:
                    base, other = plus, minus
                else:
                    base, other = minus, plus
                num = num * ((1 - R.t * base) if ai == 1 else (R.t - base)) * (1 - other)
            sq = R.y(i, 2)
            num = num * ((1 - R.t * sq) if signs[i - 1] == 1 else (R.t - sq))
        out.append((signs, num))
    return tuple(out)


def apply_E_numerator(f_num: LaurentPoly, n: int) -> LaurentPoly:
    """Numerator of E(f) over Delta * den(f), for f with y-free denominator."""
    acc = Ring(n).zero
    for signs, c in e_numerators(n):
        acc = acc + c * half_shift(f_num, signs)
    return acc


def apply_E(f, n: int) -> RatFunc:
    """E f.  Inputs with a y-free denominator use a common-denominator route."""
    if isinstance(f, SymLaurent):
        f = f.as_ratfunc()
    if isinstance(f, LaurentPoly):
        f = RatFunc(f)
    if f.rank != n:
        raise ValueError("rank mismatch")
    if not f.den.involves(range(2, n + 3)):
        return RatFunc(apply_E_numerator(f.num, n), e_common_denominator(n) * f.den)
    out = RatFunc.constant(n, 0)
    for signs in itertools.product((1, -1), repeat=n):
        out = out + _e_coefficient(signs, n) * half_shift(f, signs)
    return out


def eigenvalue_c(mu: Sequence[int], n: int | None = None) -> LaurentPoly:
    """q^{-|mu|/2} prod_{j=1}^n (1 + t^j q^{mu_{n-j+1}})."""
    n = len(mu) if n is None else n
    mu = tuple(mu) + (0,) * (n - len(mu))
    if not weyl.is_partition(mu):
        raise ValueError(f"{mu} is not a partition")
    R = Ring(n)
    out = R.mono(v=-sum(mu))
    for j in range(1, n + 1):
        out = out * (1 + R.mono(v=2 * mu[n - j], u=2 * j))
    return out


def eigenvalue_sum_form(mu: Sequence[int], n: int | None = None) -> LaurentPoly:
    """sum_a prod_j q^{mu_j a_j/2} t^{(n-j+1) a_j/2}, the other published form.

    It equals t^{-n(n+1)/4} times ``eigenvalue_c``; only the latter is an
    eigenvalue of E as normalised above.
    """
    n = len(mu) if n is None else n
    mu = tuple(mu) + (0,) * (n - len(mu))
    R = Ring(n)
    out = R.zero
    for signs in itertools.product((1, -1), repeat=n):
        out = out + R.mono(v=sum(m * a for m, a in zip(mu, signs)),
                           u=sum((n - j) * a for j, a in enumerate(signs)))
    return out


# -- the one-row polynomial ---------------------------------------------------

def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions in colexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in compositions(total - last, parts - 1):
            yield head + (last,)


def qpoch_poly(a: LaurentPoly, m: int) -> LaurentPoly:
    """(a)_m = prod_{k<m} (1 - a q^k)."""
    R = Ring(a.rank)
    out = R.one
    for k in range(m):
        out = out * (1 - a * R.mono(v=2 * k))
    return out


@lru_cache(maxsize=None)
def _q_binomial(n_rank: int, top: int, k: int) -> LaurentPoly:
    R = Ring(n_rank)
    if k < 0 or k > top:
        return R.zero
    if k == 0 or k == top:
        return R.one
    # [top, k] = [top-1, k-1] + q^k [top-1, k]
    return _q_binomial(n_rank, top - 1, k - 1) + R.mono(v=2 * k) * _q_binomial(n_rank, top - 1, k)


def q_multinomial(parts: Sequence[int], rank: int) -> LaurentPoly:
    """(q)_{sum parts} / prod (q)_{part}, as a polynomial in q."""
    out = Ring(rank).one
    running = 0
    for p in parts:
        running += p
        out = out * _q_binomial(rank, running, p)
    return out


@lru_cache(maxsize=None)
def macdonald_onerow(n: int, lam: int, drop_last_term: bool = False) -> SymLaurent:
    """P_{(lam,0,...,0)}(y|q,t) from its closed form over weak compositions.

    P = (q)_lam/(t)_lam sum_{i_1+..+i_2n = lam} prod_k (t)_{i_k}/(q)_{i_k}
        y_1^{i_1 - i_2n} y_2^{i_2 - i_{2n-1}} ... y_n^{i_n - i_{n+1}}

    ``drop_last_term`` omits the final composition (a self-test corruption).
    """
    if n < 1 or lam < 1:
        raise ValueError("need n >= 1 and lambda >= 1")
    R = Ring(n)
    t_poch = [qpoch_poly(R.t, m) for m in range(lam + 1)]
    comps = list(compositions(lam, 2 * n))
    if drop_last_term:
        comps = comps[:-1]
    num = R.zero
    for c in comps:
        coef = q_multinomial(c, n)
        for part in c:
            coef = coef * t_poch[part]
        mono = R.mono(y=[c[k] - c[2 * n - 1 - k] for k in range(n)])
        num = num + coef * mono
    return SymLaurent.make(num, t_poch[lam], invariant=not drop_last_term)


def orbit_sum(mu: Sequence[int], n: int) -> LaurentPoly:
    return weyl.orbit_sum(mu, n)


def m_basis(P: SymLaurent) -> dict[tuple[int, ...], RatFunc]:
    """Coefficients a_nu with P = sum a_nu m_nu, read off at dominant exponents.

    Raises NotInvariantError if the reconstruction fails, i.e. P is not
    W-invariant.
    """
    n = P.rank
    coeffs = P.y_coefficients()
    dominant = {ye: c for ye, c in coeffs.items() if tuple(ye) == tuple(weyl.dominant_rep(ye))}
    rebuilt = Ring(n).zero
    for nu, c in dominant.items():
        rebuilt = rebuilt + c * orbit_sum(nu, n)
    if rebuilt != P.num:
        raise NotInvariantError("polynomial is not a combination of orbit sums")
    return {tuple(nu): RatFunc(c, P.den) for nu, c in sorted(dominant.items(), reverse=True)}


def _desk_guard(n: int, lam: int):
    check_rank(n, 3)


def verify_eigen(n: int, lam: int, mutate: bool = False) -> Report:
    """E P = c P exactly, plus the two constant-function sanity checks."""
    _desk_guard(n, lam)
    rep = Report("eigen")
    P = macdonald_onerow(n, lam, drop_last_term=mutate)
    c = eigenvalue_c((lam,) + (0,) * (n - 1), n)
    lhs = apply_E_numerator(P.num, n)
    rhs = c * e_common_denominator(n) * P.num
    rep.add(f"E P_({lam},0..) = c P_({lam},0..)", lhs == rhs, n=n, lam=lam, mutated=mutate)
    if not mutate:
        R = Ring(n)
        rep.add("E 1 = c_(0..0)", apply_E_numerator(R.one, n) == eigenvalue_c((0,) * n, n) * e_common_denominator(n),
                n=n)
        rel = eigenvalue_sum_form((lam,) + (0,) * (n - 1), n) * R.mono(u=n * (n + 1) // 2)
        rep.add("sum form = t^(-n(n+1)/4) product form", rel == c, n=n, lam=lam)
    return rep


def verify_triangularity(n: int, lam: int, mutate: bool = False) -> Report:
    """P = m_(lam,0..) + sum over strictly dominated nu, with unit leading coefficient."""
    _desk_guard(n, lam)
    rep = Report("triangularity")
    P = macdonald_onerow(n, lam)
    top = (lam,) + (0,) * (n - 1)
    if mutate:
        lead = P.y_coefficients()[top]
        P = SymLaurent.make(P.num + lead * orbit_sum(top, n), P.den, check=False)
    try:
        mb = m_basis(P)
    except NotInvariantError as exc:
        rep.add("expansion in orbit sums exists", False, counterexample=str(exc), n=n, lam=lam)
        return rep
    rep.add("expansion in orbit sums exists", True, n=n, lam=lam)
    rep.add(f"coefficient of m_{top} is 1", top in mb and mb[top] == 1, n=n, lam=lam)
    bad = [nu for nu in mb if nu != top and not weyl.dominance_less(nu, top)]
    rep.add("all other orbits strictly dominated", not bad,
            counterexample=[list(b) for b in bad] or None, n=n, lam=lam)
    return rep


def verify_cor51(n: int, lam: int, point=None, seed: int = 0) -> Report:
    """Numeric checks that tie the integral to the eigenfunction (see qintegral)."""
    from . import qintegral
    return qintegral.verify_cor51(n, lam, point=point, seed=seed)
