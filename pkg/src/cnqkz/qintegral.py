"""Numerical q-Jordan-Pochhammer brackets <psi> = int_C psi Phi.

Phi = x^lam prod_j (t y_j/x)_inf (t y_j^{-1}/x)_inf / ((y_j/x)_inf (y_j^{-1}/x)_inf) dx/x

and C encircles the pole ladders b, bq, bq^2, ... for b in {y_j, y_j^{-1}}.
The integral is replaced by the sum of residues of psi Phi over those
ladders (the global 2 pi i is dropped).  At x0 = b q^m the factor
(1 - x0/x) of (b/x)_inf vanishes, and since (1 - x0/x) = (x - x0)/x exactly
cancels the measure dx/x, the residue is the rest of the integrand evaluated
at x0.  No numerical differentiation is involved.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from . import hecke, weyl
from .report import Report
from .ring import LaurentPoly, RatFunc, Ring, eval_numeric, numeric_values
from .rmatrix import QKZParams, p_diag_exponents, r_coeffs, transport_numeric
from .weyl import AffineRoot

GENERICITY_MARGIN = 1e-6


class NonGenericPointError(ValueError):
    pass


@dataclass(frozen=True)
class NumericPoint:
    q: float
    t: float
    y: tuple
    lam: int = 1
    prod_trunc: int | None = None
    ladder_trunc: int = 400
    tol: float = 1e-8
    trunc_tol: float = 1e-17

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise ValueError("q must lie in (0, 1)")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if self.lam < 1 or int(self.lam) != self.lam:
            raise ValueError("lambda must be a positive integer")
        y = tuple(complex(v) for v in self.y)
        if not y or any(v == 0 for v in y):
            raise ValueError("y values must be nonzero")
        object.__setattr__(self, "y", y)
        if self.prod_trunc is None:
            object.__setattr__(self, "prod_trunc", math.ceil(math.log(1e-17) / math.log(self.q)))

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def v(self) -> float:
        return math.sqrt(self.q)

    def with_y(self, y: Sequence[complex]) -> "NumericPoint":
        return replace(self, y=tuple(y))

    def twisted(self) -> "NumericPoint":
        """The point seen by s0: y_1 -> q / y_1."""
        return self.with_y((self.q / self.y[0],) + self.y[1:])

    def bases(self) -> list[complex]:
        return list(self.y) + [1 / v for v in self.y]

    def genericity_issues(self) -> list[str]:
        out = []
        B = self.bases()
        lq = math.log(self.q)

        def near_q_power(r: complex) -> bool:
            k = round(math.log(abs(r)) / lq)
            qk = self.q ** k
            return abs(r - qk) <= GENERICITY_MARGIN * qk

        for i, b in enumerate(B):
            for j, c in enumerate(B):
                if i < j and near_q_power(c / b):
                    out.append(f"pole ladders of bases {i + 1} and {j + 1} collide")
                if near_q_power(b / (self.t * c)):
                    out.append(f"ladder of base {i + 1} meets a zero of (t c/x) for base {j + 1}")
        return out

    def require_generic(self):
        issues = self.genericity_issues()
        if issues:
            raise NonGenericPointError("; ".join(issues[:3]))

    def to_json(self) -> dict:
        return {"q": self.q, "t": self.t, "lambda": self.lam,
                "y": [[v.real, v.imag] for v in self.y]}


def random_point(n: int, lam: int, rng: np.random.Generator, q: float = 0.3, t: float = 0.7,
                 radius=(0.8, 1.4), real: bool = False, **kw) -> NumericPoint:
    """Random generic point: |y_j| uniform in ``radius``, uniform phases."""
    for _ in range(100):
        mod = rng.uniform(*radius, size=n)
        ph = np.zeros(n) if real else rng.uniform(0, 2 * np.pi, size=n)
        y = tuple(complex(m * cmath.exp(1j * p)) for m, p in zip(mod, ph))
        pt = NumericPoint(q, t, y, lam, **kw)
        if not pt.genericity_issues():
            return pt
    raise NonGenericPointError("could not draw a generic point")


# -- q-Pochhammer symbols -----------------------------------------------------

def _extra_terms(a: complex, q: float) -> int:
    """Number of factors with |a q^s| > 1; truncation starts counting after them."""
    if abs(a) <= 1:
        return 0
    return math.ceil(math.log(abs(a)) / -math.log(q))


def qpoch_inf(a: complex, pt: NumericPoint) -> complex:
    """(a)_inf truncated after prod_trunc factors beyond |a q^s| <= 1."""
    N = pt.prod_trunc + _extra_terms(a, pt.q)
    s = np.arange(N)
    return complex(np.prod(1 - a * pt.q ** s))


def ladder_products(r: complex, pt: NumericPoint, M: int, strip: bool) -> np.ndarray:
    """V_m = prod_{s>=0} (1 - t r q^{s-m}) / (1 - r q^{s-m}) for m = 0..M-1.

    This is (t c/x)_inf/(c/x)_inf at x = b q^m with r = c/b.  When ``strip``
    (c is the ladder's own base) the vanishing denominator factor s = m is
    left out.  V_m = V_{m-1} f(r q^{-m}) with f(w) = (1 - t w)/(1 - w) gives
    every m from one product and a running product.
    """
    q, t = pt.q, pt.t
    N = pt.prod_trunc + _extra_terms(r, q)
    w = r * q ** np.arange(N)
    num = 1 - t * w
    den = 1 - w
    if strip:
        den[0] = 1.0
    base = np.prod(num / den)
    if M == 1:
        return np.array([base])
    z = q ** np.arange(1, M) / r  # 1/w for w = r q^{-m}
    f = (z - t) / (z - 1)
    return base * np.concatenate([[1.0], np.cumprod(f)])


# -- integrands ---------------------------------------------------------------

@dataclass(frozen=True)
class Psi:
    """psi as a product of factors in x; ``twisted`` means s0 has been applied."""
    label: str
    num: tuple = ()
    den: tuple = ()
    twisted: bool = False

    def evaluator(self, pt: NumericPoint) -> tuple[Callable[[np.ndarray], np.ndarray], int]:
        """(g, p) with psi(x) = g(x) x^p, g a ratio of polynomials in x.

        Clearing the negative powers of x factor by factor keeps g bounded at
        the small ladder points where 1 - c/x itself would overflow.
        """
        y = pt.twisted().y if self.twisted else pt.y
        power = 0
        nums, dens = [], []
        for f in self.num:
            d = _collapse_in_x(f, pt.q, pt.t, y)
            k = -min(d)
            nums.append({e + k: c for e, c in d.items()})
            power -= k
        for f in self.den:
            d = _collapse_in_x(f, pt.q, pt.t, y)
            k = -min(d)
            dens.append({e + k: c for e, c in d.items()})
            power += k

        def fn(x: np.ndarray) -> np.ndarray:
            out = np.ones_like(x, dtype=complex)
            for d in nums:
                out = out * _eval_collapsed(d, x)
            for d in dens:
                out = out / _eval_collapsed(d, x)
            return out
        return fn, power


def _collapse_in_x(p: LaurentPoly, q, t, y) -> dict[int, complex]:
    """Specialise everything but x: {x-exponent: complex coefficient}."""
    vals = numeric_values(p.rank, q, t, y)
    sx = p.rank + 2
    out: dict[int, complex] = {}
    for exps, c in p.items():
        term = complex(c)
        for i, (val, e) in enumerate(zip(vals, exps)):
            if e and i != sx:
                term *= val ** e
        out[exps[sx]] = out.get(exps[sx], 0j) + term
    return out


def _eval_collapsed(d: dict[int, complex], x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=complex)
    for e, c in d.items():
        out = out + c * x ** e
    return out


def psi_from_selector(selector: str, n: int) -> Psi:
    """``one``, ``phi_k``, ``s0_one``, ``s0_phi_k`` or ``shifted_ratio``.

    ``shifted_ratio`` is prod_j (1 - y_j/x)(1 - y_j^{-1}/x) / ((1 - t y_j/x)(1 - t y_j^{-1}/x)).
    """
    twisted = selector.startswith("s0_")
    base = selector[3:] if twisted else selector
    if base == "one":
        return Psi(selector, twisted=twisted)
    if base.startswith("phi_"):
        try:
            k = int(base[4:])
        except ValueError:
            raise ValueError(f"bad selector {selector!r}") from None
        if not 1 <= k <= 2 * n:
            raise ValueError(f"phi index {k} out of range 1..{2 * n}")
        num, den = hecke.phi_factors(n, k)
        return Psi(selector, tuple(num), tuple(den), twisted)
    if base == "shifted_ratio":
        R = Ring(n)
        lin = lambda m: R.one - m * R.mono(x=-1)
        num = [lin(R.y(j, s)) for j in range(1, n + 1) for s in (1, -1)]
        den = [lin(R.t * R.y(j, s)) for j in range(1, n + 1) for s in (1, -1)]
        return Psi(selector, tuple(num), tuple(den), twisted)
    raise ValueError(f"unknown integrand selector {selector!r}")


def integrand(x: complex, psi: Union[str, Psi], pt: NumericPoint) -> complex:
    """psi(x) Phi(x) / dx, i.e. including the 1/x of the measure."""
    if isinstance(psi, str):
        psi = psi_from_selector(psi, pt.n)
    p = pt.twisted() if psi.twisted else pt
    g, power = psi.evaluator(pt)
    val = complex(x) ** (pt.lam + power) / x * complex(g(np.array([x], dtype=complex))[0])
    for c in p.bases():
        val *= qpoch_inf(pt.t * c / x, pt) / qpoch_inf(c / x, pt)
    return val


# -- brackets -----------------------------------------------------------------

@dataclass
class BracketResult:
    value: complex
    converged: bool
    terms_used: int
    ladders: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "converged": self.converged,
                "terms_used": self.terms_used}


def _truncate(terms: np.ndarray, rel: float) -> tuple[int, bool]:
    """Number of terms to keep: stop after 3 consecutive terms below rel * scale."""
    if not np.all(np.isfinite(terms)):
        bad = int(np.argmin(np.isfinite(terms)))
        terms = terms[:bad]
    partial = np.cumsum(terms)
    scale = np.maximum(np.abs(partial), np.maximum.accumulate(np.abs(terms))) if len(terms) else terms
    small = np.abs(terms) <= rel * scale
    run = 0
    for m, s in enumerate(small):
        run = run + 1 if s else 0
        if run == 3:
            return m + 1, True
    return len(terms), False


def _ladder_terms(b: complex, i: int, bases, g, power: int, pt: NumericPoint, M: int) -> np.ndarray:
    m = np.arange(M)
    e = pt.lam + power
    terms = b ** e * pt.q ** (e * m) * g(b * pt.q ** m)
    for j, c in enumerate(bases):
        terms = terms * ladder_products(c / b, pt, M, strip=(i == j))
    return terms


def bracket(psi: Union[str, Psi], pt: NumericPoint) -> BracketResult:
    """Residue sum of psi Phi over the ladders of the (possibly twisted) integrand.

    Each ladder is summed in growing chunks until three consecutive terms
    fall below ``trunc_tol`` relative to the running sum, or ``ladder_trunc``
    terms have been used (then ``converged`` is False).
    """
    if isinstance(psi, str):
        psi = psi_from_selector(psi, pt.n)
    p = pt.twisted() if psi.twisted else pt
    p.require_generic()
    g, power = psi.evaluator(pt)
    bases = p.bases()
    total, used, ok = 0j, 0, True
    info = []
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i, b in enumerate(bases):
            M = min(64, pt.ladder_trunc)
            while True:
                terms = _ladder_terms(b, i, bases, g, power, pt, M)
                k, conv = _truncate(terms, pt.trunc_tol)
                if conv or M >= pt.ladder_trunc:
                    break
                M = min(2 * M, pt.ladder_trunc)
            total += complex(np.sum(terms[:k]))
            used += k
            ok = ok and conv
            info.append({"base": [b.real, b.imag], "terms": k, "converged": conv})
    return BracketResult(total, ok, used, info)


def psi_vector(pt: NumericPoint) -> tuple[np.ndarray, bool]:
    """(<phi_{w_1}>, ..., <phi_{w_2n}>) and whether every bracket converged."""
    res = [bracket(f"phi_{k}", pt) for k in range(1, 2 * pt.n + 1)]
    return np.array([r.value for r in res]), all(r.converged for r in res)


def rel_residual(lhs, rhs) -> float:
    lhs, rhs = np.atleast_1d(lhs), np.atleast_1d(rhs)
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(lhs - rhs)) / scale)


def _coeffs_numeric(root: AffineRoot, params: QKZParams, pt: NumericPoint):
    co = r_coeffs(root, params)
    return tuple(eval_numeric(f, pt) for f in (co.a, co.b, co.c, co.d))


# -- verifications ------------------------------------------------------------

def lemma43_residuals(pt: NumericPoint, params: QKZParams | None = None) -> tuple[float, float, bool]:
    n = pt.n
    params = params or QKZParams(n, pt.lam)
    a, b, c, d = _coeffs_numeric(AffineRoot(tuple(-v for v in weyl.highest_root(n)), 1), params, pt)
    ql = pt.q ** pt.lam
    r1, r2n = bracket("phi_1", pt), bracket(f"phi_{2 * n}", pt)
    s1, s2n = bracket("s0_phi_1", pt), bracket(f"s0_phi_{2 * n}", pt)
    conv = all(r.converged for r in (r1, r2n, s1, s2n))
    e1 = rel_residual(ql * s1.value, a * r2n.value + ql * d * r1.value)
    e2 = rel_residual(s2n.value / ql, b * r2n.value / ql + c * r1.value)
    return e1, e2, conv


def verify_lemma43(pt: NumericPoint, params: QKZParams | None = None) -> Report:
    """The two s0 relations between <phi_{w_1}>, <phi_{w_2n}> and their twists."""
    rep = Report("lemma43")
    e1, e2, conv = lemma43_residuals(pt, params)
    mut = params.mutation if params else None
    rep.add("q^lam <s0 phi_1> = a <phi_2n> + q^lam d <phi_1>", conv and e1 < pt.tol,
            residual=e1, point=pt.to_json(), converged=conv, mutation=mut)
    rep.add("q^-lam <s0 phi_2n> = q^-lam b <phi_2n> + c <phi_1>", conv and e2 < pt.tol,
            residual=e2, point=pt.to_json(), converged=conv, mutation=mut)
    # s0 moves phi_{w_k} (1 < k < 2n) as a rational function, but not its bracket
    for k in range(2, 2 * pt.n):
        a, b = bracket(f"s0_phi_{k}", pt), bracket(f"phi_{k}", pt)
        res = rel_residual(a.value, b.value)
        ok = a.converged and b.converged
        rep.add(f"<s0 phi_{k}> = <phi_{k}>", ok and res < pt.tol, residual=res,
                point=pt.to_json(), converged=ok)
    return rep


def qkz_residuals(pt: NumericPoint, params: QKZParams | None = None, reverse: bool = False):
    """{selector: (relative residual, converged)} for i = 1..n and the half-sum."""
    n = pt.n
    params = params or QKZParams(n, pt.lam)
    psi0, conv0 = psi_vector(pt)
    out = {}
    for sel in list(range(1, n + 1)) + ["half"]:
        if sel == "half":
            shifted = pt.with_y(tuple(v * pt.v for v in pt.y))
        else:
            shifted = pt.with_y(tuple(v * pt.q if j == sel - 1 else v for j, v in enumerate(pt.y)))
        lhs, conv = psi_vector(shifted)
        diag = np.array([pt.v ** e for e in p_diag_exponents(sel, params)])
        rhs = diag * (transport_numeric(sel, params, pt, reverse=reverse) @ psi0)
        out[sel] = (rel_residual(lhs, rhs), conv and conv0)
    return out


def verify_qkz(pt: NumericPoint, params: QKZParams | None = None, reverse: bool = False) -> Report:
    rep = Report("qkz-numeric")
    for sel, (res, conv) in qkz_residuals(pt, params, reverse).items():
        name = "half-sum translation" if sel == "half" else f"translation by eps_{sel}"
        rep.add(f"QKZ equation, {name}", conv and res < pt.tol, residual=res,
                point=pt.to_json(), converged=conv, reversed_products=reverse)
    return rep


def qkz_truncation_study(pt: NumericPoint, loose_tol: float = 1e-5) -> tuple[float, float]:
    """Largest QKZ residual with a loose ladder cutoff and with the point's own."""
    loose = max(r for r, _ in qkz_residuals(replace(pt, trunc_tol=loose_tol)).values())
    tight = max(r for r, _ in qkz_residuals(pt).values())
    return loose, tight


def macdonald_numeric(n: int, lam: int, pt: NumericPoint, wrong: bool = False) -> complex:
    from .macdonald import macdonald_onerow
    if wrong:
        mu = (1, 1) + (0,) * (n - 2) if n >= 2 else (lam + 1,)
        return eval_numeric(weyl.orbit_sum(mu, n), pt)
    return eval_numeric(macdonald_onerow(n, lam).as_ratfunc(), pt)


def ratio_test_macdonald(n: int, lam: int, base_pt: NumericPoint | None = None, samples: int = 5,
                         rng: np.random.Generator | None = None, wrong: bool = False) -> Report:
    """<1>/P_(lam,0..)(y) is independent of y."""
    if samples < 3:
        raise ValueError("need at least 3 samples")
    rng = rng if rng is not None else np.random.default_rng(0)
    q, t, tol = (base_pt.q, base_pt.t, base_pt.tol) if base_pt else (0.3, 0.7, 1e-8)
    ratios, conv = [], True
    while len(ratios) < samples:
        pt = random_point(n, lam, rng, q=q, t=t, tol=tol)
        P = macdonald_numeric(n, lam, pt, wrong)
        if abs(P) < 1e-8:
            continue
        br = bracket("one", pt)
        conv = conv and br.converged
        ratios.append(br.value / P)
    ratios = np.array(ratios)
    spread = float(np.max(np.abs(ratios - ratios[0])) / np.abs(ratios[0]))
    rep = Report("ratio")
    rep.add(f"<1>/P_({lam},0..) constant over {samples} samples", conv and spread < tol,
            residual=spread, n=n, lam=lam, q=q, t=t, wrong_eigenfunction=wrong)
    return rep


def verify_shifted_ratio(pt: NumericPoint, q_power_offset: int = 0) -> Report:
    """<prod (1-y/x)(1-y^-1/x)/((1-ty/x)(1-ty^-1/x))> = q^lam <1>."""
    lhs = bracket("shifted_ratio", pt)
    one = bracket("one", pt)
    res = rel_residual(lhs.value, pt.q ** (pt.lam + q_power_offset) * one.value)
    conv = lhs.converged and one.converged
    rep = Report("shifted_ratio")
    rep.add("<shifted ratio> = q^lam <1>", conv and res < pt.tol, residual=res, point=pt.to_json(),
            converged=conv)
    return rep


def verify_cor51(n: int, lam: int, point: NumericPoint | None = None, seed: int = 0,
                 q_power_offset: int = 0, ratio_samples: int = 5) -> Report:
    """sum_i t^{i-1} <phi_{w_i}> = (1 - q^lam t^{2n})/(1 - t) <1>, plus the
    shifted-ratio identity and the eigenfunction ratio test behind it.

    ``q_power_offset`` replaces q^lam by q^{lam + offset} (self-test).
    """
    rng = np.random.default_rng(seed)
    pt = point or random_point(n, lam, rng)
    if pt.n != n or pt.lam != lam:
        raise ValueError("point does not match n and lambda")
    vec, conv = psi_vector(pt)
    one = bracket("one", pt)
    lhs = sum(pt.t ** i * vec[i] for i in range(2 * n))
    ql = pt.q ** (lam + q_power_offset)
    rhs = (1 - ql * pt.t ** (2 * n)) / (1 - pt.t) * one.value
    res = rel_residual(lhs, rhs)
    conv = conv and one.converged
    rep = Report("cor51")
    rep.add("sum t^(i-1) <phi_i> = (1 - q^lam t^2n)/(1 - t) <1>", conv and res < pt.tol,
            residual=res, point=pt.to_json(), converged=conv, q_power_offset=q_power_offset)
    rep.extend(verify_shifted_ratio(pt, q_power_offset))
    rep.extend(ratio_test_macdonald(n, lam, pt, ratio_samples, rng))
    return rep
