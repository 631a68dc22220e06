"""R-matrices on the free module V (basis h_w) and on the induced module.

The full module has one basis vector per element of W and is only built for
small rank; it is the reference against which the 2n-dimensional induced
module (basis hbar_{w_1} .. hbar_{w_2n}) is checked.

Operators are A-linear: ``R(f h_y) = f R(h_y)``.  A matrix ``M`` for an
operator on the induced module is stored column-wise in the usual way,
``R hbar_k = sum_j M[j][k] hbar_j``, so operator products are ordinary matrix
products in the displayed order.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from . import weyl
from .report import Report
from .ring import LaurentPoly, RatFunc, Ring, eval_numeric
from .weyl import AffineRoot, SignedPerm, coset_reps, sp_apply

Selector = Union[int, str]  # 1..n or "half"

FULL_MODULE_MAX_RANK = 3


def rank_limit(default: int) -> int:
    """Desk-scale rank guard; the CNQKZ_MAX_RANK environment variable overrides it."""
    env = os.environ.get("CNQKZ_MAX_RANK")
    return int(env) if env else default


def check_rank(n: int, default: int):
    if n < 1:
        raise ValueError("rank must be at least 1")
    if n > rank_limit(default):
        raise ValueError(f"rank {n} exceeds the desk-scale limit {rank_limit(default)} "
                         "(set CNQKZ_MAX_RANK to override)")


# Self-test corruptions of the R coefficients.  A verifier that still passes
# under one of these is not testing anything.
MUTATIONS = {
    "d_plus_1": "replace d by d + 1",
    "d_plus_y1": "replace d by d + y_1 (breaks W-covariance)",
    "swap_bc": "exchange b and c",
    "swap_ac": "exchange a and c",
}


@dataclass(frozen=True)
class QKZParams:
    n: int
    lam: int = 1
    t1: LaurentPoly | None = None  # t attached to roots +-e_i +- e_j
    t2: LaurentPoly | None = None  # t attached to roots +-2 e_i
    mutation: str | None = None  # deliberate coefficient corruption, see MUTATIONS

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be at least 1")
        if self.lam < 1:
            raise ValueError("lambda must be a positive integer")
        if self.mutation is not None and self.mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation!r}")
        R = Ring(self.n)
        if self.t1 is None:
            object.__setattr__(self, "t1", R.t)
        if self.t2 is None:
            object.__setattr__(self, "t2", R.t)

    def t_for(self, alpha: Sequence[int]) -> LaurentPoly:
        return self.t2 if weyl.is_long(alpha) else self.t1

    def u_vector(self) -> tuple[int, ...]:
        return tuple(-self.lam if i == 0 else 0 for i in range(self.n))


@dataclass(frozen=True)
class RCoeffs:
    a: RatFunc
    b: RatFunc
    c: RatFunc
    d: RatFunc


@lru_cache(maxsize=4096)
def r_coeffs(root: AffineRoot, params: QKZParams) -> RCoeffs:
    """The coefficients a, b, c, d of R_{alpha + m delta}."""
    n = params.n
    if len(root.root) != n:
        raise ValueError("root rank does not match parameters")
    e = weyl.e_weight(root.root, n, root.m)  # q^m e^alpha
    ta = params.t_for(root.root)
    den = 1 - ta * e
    a = RatFunc(1 - e, den)
    b = RatFunc(1 - ta, den)
    c = RatFunc(ta * (1 - e), den)
    d = RatFunc(e * (1 - ta), den)
    mut = params.mutation
    if mut == "d_plus_1":
        d = d + 1
    elif mut == "d_plus_y1":
        d = d + Ring(n).y(1)
    elif mut == "swap_bc":
        b, c = c, b
    elif mut == "swap_ac":
        a, c = c, a
    return RCoeffs(a, b, c, d)


def q_power_exponent(root: AffineRoot, y: SignedPerm, params: QKZParams) -> int:
    """m <alpha^vee, y u> for u = -lambda eps_1 (always an integer)."""
    if root.m == 0:
        return 0
    val = weyl.pairing(weyl.coroot(root.root), sp_apply(y, params.u_vector()))
    assert val.denominator == 1
    return root.m * int(val)


# -- the full module ----------------------------------------------------------

class FullVec:
    """Element sum f_w h_w of V, stored sparsely."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[SignedPerm, RatFunc] | None = None):
        self.n = n
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def basis(cls, y: SignedPerm, coeff: RatFunc | None = None) -> "FullVec":
        return cls(y.n, {y: coeff if coeff is not None else RatFunc.constant(y.n, 1)})

    def add_term(self, y: SignedPerm, f: RatFunc):
        cur = self.coeffs.get(y)
        s = f if cur is None else cur + f
        if s.is_zero():
            self.coeffs.pop(y, None)
        else:
            self.coeffs[y] = s

    def __add__(self, other: "FullVec") -> "FullVec":
        out = FullVec(self.n, dict(self.coeffs))
        for y, f in other.coeffs.items():
            out.add_term(y, f)
        return out

    def equals(self, other: "FullVec") -> bool:
        return self.first_difference(other) is None

    def first_difference(self, other: "FullVec"):
        zero = RatFunc.constant(self.n, 0)
        for y in set(self.coeffs) | set(other.coeffs):
            if not (self.coeffs.get(y, zero) == other.coeffs.get(y, zero)):
                return y
        return None

    def __repr__(self):
        return "FullVec(" + ", ".join(f"{w}: {f}" for w, f in self.coeffs.items()) + ")"


def apply_R_full(root: AffineRoot, F: FullVec, params: QKZParams) -> FullVec:
    if F.n != params.n:
        raise ValueError("rank mismatch")
    co = r_coeffs(root, params)
    s_alpha = weyl.reflection(root.root)
    R = Ring(params.n)
    out = FullVec(F.n)
    for y, f in F.coeffs.items():
        beta = sp_apply(y.inverse(), root.root)
        A, B = (co.a, co.b) if weyl.is_positive(beta) else (co.c, co.d)
        out.add_term(y, f * A)
        k = q_power_exponent(root, y, params)
        fb = f * B if k == 0 else f * B * R.mono(v=2 * k)
        out.add_term(s_alpha * y, fb)
    return out


def apply_R_product_full(roots: Sequence[AffineRoot], F: FullVec, params: QKZParams) -> FullVec:
    """R_{roots[0]} R_{roots[1]} ... F (rightmost applied first)."""
    for r in reversed(roots):
        F = apply_R_full(r, F, params)
    return F


def apply_rw(w: SignedPerm, F: FullVec) -> FullVec:
    out = FullVec(F.n)
    for y, f in F.coeffs.items():
        out.add_term(w * y, weyl.act_on_ratfunc(w, f))
    return out


def _require_full_rank(n: int):
    check_rank(n, FULL_MODULE_MAX_RANK)


def ybe_identities(n: int) -> list[tuple[str, list[AffineRoot], list[AffineRoot]]]:
    """Both Yang-Baxter families for rank n as (label, lhs roots, rhs roots)."""
    e = lambda i, j, s=1: AffineRoot(weyl.eps_sum(i, j, n, s))
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                lhs = [e(i, j, -1), e(i, k, -1), e(j, k, -1)]
                out.append((f"A-type triple ({i},{j},{k})", lhs, lhs[::-1]))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = [e(i, j, -1), e(i, i), e(i, j), e(j, j)]
            out.append((f"C-type quadruple ({i},{j})", lhs, lhs[::-1]))
    return out


def verify_ybe(n: int, params: QKZParams | None = None) -> Report:
    _require_full_rank(n)
    params = params or QKZParams(n)
    rep = Report("ybe")
    for label, lhs, rhs in ybe_identities(n):
        bad = None
        for y in weyl.elements(n):
            h = FullVec.basis(y)
            if not apply_R_product_full(lhs, h, params).equals(apply_R_product_full(rhs, h, params)):
                bad = str(y)
                break
        rep.add(label, bad is None, counterexample=None if bad is None else {"basis": bad},
                n=n, lhs=" ".join(f"R[{r}]" for r in lhs))
    return rep


def verify_inverse(n: int, params: QKZParams | None = None, ms: Iterable[int] = (0, 1)) -> Report:
    """R_beta R_{-beta} = id on every basis vector."""
    _require_full_rank(n)
    params = params or QKZParams(n)
    rep = Report("inverse")
    for m in ms:
        for alpha in weyl.roots(n):
            beta = AffineRoot(alpha, m)
            bad = None
            for y in weyl.elements(n):
                h = FullVec.basis(y)
                if not apply_R_product_full([beta, -beta], h, params).equals(h):
                    bad = str(y)
                    break
            rep.add(f"R[{beta}] R[{-beta}] = id", bad is None,
                    counterexample=None if bad is None else {"basis": bad}, n=n)
    return rep


def verify_conjugation(n: int, params: QKZParams | None = None, ms: Iterable[int] = (0, 1),
                       include_identity: bool = True) -> Report:
    """r_w R_alpha = R_{w(alpha)} r_w for simple w and every root alpha."""
    _require_full_rank(n)
    params = params or QKZParams(n)
    rep = Report("conjugation")
    ws = [(f"s{i}", weyl.simple_reflection(i, n)) for i in range(1, n + 1)]
    if include_identity:
        ws.insert(0, ("e", SignedPerm.identity(n)))
    for wname, w in ws:
        for m in ms:
            for alpha in weyl.roots(n):
                root = AffineRoot(alpha, m)
                bad = None
                for y in weyl.elements(n):
                    h = FullVec.basis(y)
                    lhs = apply_rw(w, apply_R_full(root, h, params))
                    rhs = apply_R_full(root.act(w), apply_rw(w, h), params)
                    if not lhs.equals(rhs):
                        bad = str(y)
                        break
                rep.add(f"r_{wname} R[{root}] = R[{root.act(w)}] r_{wname}", bad is None,
                        counterexample=None if bad is None else {"basis": bad}, n=n)
    return rep


# -- the induced module -------------------------------------------------------

class NotInInducedSpan(RuntimeError):
    pass


class InducedVec:
    """Coefficient vector on hbar_{w_1} .. hbar_{w_2n} (0-based storage)."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: Sequence[RatFunc]):
        if len(entries) != 2 * n:
            raise ValueError(f"induced vectors have length {2 * n}")
        self.n = n
        self.entries = list(entries)

    @classmethod
    def unit(cls, n: int, k: int) -> "InducedVec":
        """The basis vector hbar_{w_k} (k is 1-based)."""
        z, one = RatFunc.constant(n, 0), RatFunc.constant(n, 1)
        return cls(n, [one if j == k - 1 else z for j in range(2 * n)])

    def __getitem__(self, k: int) -> RatFunc:
        return self.entries[k]

    def equals(self, other: "InducedVec") -> bool:
        return all(a == b for a, b in zip(self.entries, other.entries))


Matrix = list[list[RatFunc]]


def zero_matrix(n: int) -> Matrix:
    z = RatFunc.constant(n, 0)
    return [[z] * (2 * n) for _ in range(2 * n)]


def identity_matrix(n: int) -> Matrix:
    M = zero_matrix(n)
    one = RatFunc.constant(n, 1)
    for i in range(2 * n):
        M[i][i] = one
    return M


def induced_matrix(root: AffineRoot, params: QKZParams) -> Matrix:
    """Matrix of R_{alpha + m delta} on the induced basis.

    hbar_{w_k} sums h_{w_k g} over g fixing eps_1.  If w_k^{-1}(alpha) does not
    involve eps_1, the summands pair up under s_alpha and a + d = b + c = 1
    makes R act trivially.  Otherwise the sign of w_k^{-1}(alpha) is constant
    on the coset and R hbar_{w_k} = A hbar_{w_k} + q^(...) B hbar_{w_j} with
    w_j the coset of s_alpha w_k.
    """
    n = params.n
    co = r_coeffs(root, params)
    s_alpha = weyl.reflection(root.root)
    R = Ring(n)
    M = zero_matrix(n)
    one = RatFunc.constant(n, 1)
    for k, w in enumerate(coset_reps(n)):
        beta = sp_apply(w.inverse(), root.root)
        if beta[0] == 0:
            M[k][k] = one
            continue
        A, B = (co.a, co.b) if beta[0] > 0 else (co.c, co.d)
        j = weyl.coset_index(s_alpha * w) - 1
        e = q_power_exponent(root, w, params)
        M[k][k] = M[k][k] + A
        M[j][k] = M[j][k] + (B if e == 0 else B * R.mono(v=2 * e))
    return M


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = None
            for k in range(size):
                if A[i][k].is_zero() or B[k][j].is_zero():
                    continue
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else A[0][0] * 0)
        out.append(row)
    return out


def mat_vec(M: Matrix, v: InducedVec) -> InducedVec:
    out = []
    for row in M:
        acc = RatFunc.constant(v.n, 0)
        for m, x in zip(row, v.entries):
            if not m.is_zero() and not x.is_zero():
                acc = acc + m * x
        out.append(acc)
    return InducedVec(v.n, out)


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def embed_induced(vec: InducedVec) -> FullVec:
    n = vec.n
    stab = weyl.stabilizer_eps1(n)
    out = FullVec(n)
    for w, f in zip(coset_reps(n), vec.entries):
        if f.is_zero():
            continue
        for g in stab:
            out.add_term(w * g, f)
    return out


def extract_induced(F: FullVec) -> InducedVec:
    """Inverse of ``embed_induced``; raises if F is not constant on cosets."""
    n = F.n
    stab = weyl.stabilizer_eps1(n)
    zero = RatFunc.constant(n, 0)
    entries = []
    for w in coset_reps(n):
        vals = [F.coeffs.get(w * g, zero) for g in stab]
        if not all(v == vals[0] for v in vals[1:]):
            raise NotInInducedSpan(f"coefficients on the coset of {w} are not constant")
        entries.append(vals[0])
    covered = {w * g for w in coset_reps(n) for g in stab}
    if any(y not in covered for y in F.coeffs):
        raise NotInInducedSpan("support outside the induced cosets")
    return InducedVec(n, entries)


def apply_R_induced(root: AffineRoot, vec: InducedVec, params: QKZParams, via: str = "direct") -> InducedVec:
    if via == "direct":
        return mat_vec(induced_matrix(root, params), vec)
    if via == "full":
        _require_full_rank(params.n)
        return extract_induced(apply_R_full(root, embed_induced(vec), params))
    raise ValueError(f"unknown route {via!r}")


def apply_rw_induced(w: SignedPerm, vec: InducedVec) -> InducedVec:
    """r_w on the induced module: w acts on coefficients, hbar_{w_k} -> hbar_{w w_k}."""
    n = vec.n
    out = [RatFunc.constant(n, 0)] * (2 * n)
    for k, (wk, f) in enumerate(zip(coset_reps(n), vec.entries)):
        j = weyl.coset_index(w * wk) - 1
        out[j] = out[j] + weyl.act_on_ratfunc(w, f)
    return InducedVec(n, out)


# -- QKZ transport operators --------------------------------------------------

def qkz_factors(selector: Selector, n: int) -> list[AffineRoot]:
    """The ordered R-factors of R_{tau(eps_i)} or R_{tau(half-sum)}, leftmost first."""
    e = lambda i, j, s=1, m=0: AffineRoot(weyl.eps_sum(i, j, n, s), m)
    if selector == "half":
        out = []
        for k in range(1, n + 1):
            out.append(e(k, k))
            out.extend(e(k, j) for j in range(k + 1, n + 1))
        return out
    i = int(selector)
    if not 1 <= i <= n:
        raise IndexError(f"no QKZ equation {i} in rank {n}")
    out = [AffineRoot(tuple(a - b for a, b in zip(weyl.unit(i, n), weyl.unit(j, n))), 1)
           for j in range(i - 1, 0, -1)]
    out.append(e(i, i, 1, 1))
    out.extend(e(j, i) for j in range(1, i))
    out.extend(e(i, j) for j in range(i + 1, n + 1))
    out.append(e(i, i))
    out.extend(e(i, j, -1) for j in range(n, i, -1))
    return out


def qkz_transport(selector: Selector, params: QKZParams, reverse: bool = False) -> Matrix:
    """Exact 2n x 2n matrix of the transport operator on the induced basis.

    ``reverse`` multiplies the factors in the opposite order (a self-test
    mutation; the R's do not commute).
    """
    factors = qkz_factors(selector, params.n)
    if reverse:
        factors = factors[::-1]
    M = identity_matrix(params.n)
    for r in factors:
        M = mat_mul(M, induced_matrix(r, params))
    return M


def p_diag_exponents(selector: Selector, params: QKZParams) -> list[int]:
    """Exponents of v = q^(1/2) on the diagonal of P^u_mu, one per coset."""
    n = params.n
    out = []
    for w in coset_reps(n):
        wu = sp_apply(w, params.u_vector())
        if selector == "half":
            out.append(sum(wu))  # q^{<1/2 sum eps, wu>} = v^{sum(wu)}
        else:
            out.append(2 * wu[int(selector) - 1])
    return out


def numeric_matrix(M: Matrix, point) -> np.ndarray:
    return np.array([[0j if f.is_zero() else eval_numeric(f, point) for f in row] for row in M])


def transport_numeric(selector: Selector, params: QKZParams, point, reverse: bool = False) -> np.ndarray:
    """Numeric transport matrix, multiplying numerically evaluated factors."""
    factors = qkz_factors(selector, params.n)
    if reverse:
        factors = factors[::-1]
    size = 2 * params.n
    M = np.eye(size, dtype=complex)
    for r in factors:
        M = M @ numeric_matrix(induced_matrix(r, params), point)
    return M


def verify_induced_lemmas(n: int, params: QKZParams | None = None) -> Report:
    """Explicit R-actions of the affine simple roots on the induced basis, plus agreement with the full module."""
    params = params or QKZParams(n)
    ref = replace(params, mutation=None)  # the displayed coefficients, never corrupted
    rep = Report("induced")
    N = 2 * n
    R = Ring(n)
    ql = R.mono(v=2 * params.lam)
    for i in range(1, n + 1):
        root = AffineRoot(weyl.simple_root(i, n))
        co = r_coeffs(root, ref)
        M = induced_matrix(root, params)
        pairs = [(i, i + 1), (N - i, N - i + 1)] if i < n else [(n, n + 1)]
        moved = {k for p in pairs for k in p}
        ok = all(M[j][k - 1] == (1 if j == k - 1 else 0)
                 for k in range(1, N + 1) if k not in moved for j in range(N))
        rep.add(f"R[alpha_{i}] fixes hbar_k off the exchanged pairs", ok, n=n, i=i)
        for lo, hi in pairs:
            expect = {(lo, lo): co.a, (hi, lo): co.b, (hi, hi): co.c, (lo, hi): co.d}
            ok = all(M[r - 1][c - 1] == expect.get((r, c), 0)
                     for c in (lo, hi) for r in range(1, N + 1))
            rep.add(f"R[alpha_{i}] on hbar_{lo}, hbar_{hi}", ok, n=n, i=i)
    a0 = AffineRoot(tuple(-x for x in weyl.highest_root(n)), 1)
    co = r_coeffs(a0, ref)
    M = induced_matrix(a0, params)
    ok = all(M[j][k - 1] == (1 if j == k - 1 else 0) for k in range(2, N) for j in range(N))
    rep.add("R[delta-theta] fixes hbar_k for 2 <= k <= 2n-1", ok, n=n)
    expect = {(N, N): co.a, (1, N): co.b * R.mono(v=-2 * params.lam),
              (1, 1): co.c, (N, 1): co.d * ql}
    ok = all(M[r - 1][c - 1] == expect.get((r, c), 0) for c in (1, N) for r in range(1, N + 1))
    rep.add("R[delta-theta] on hbar_1, hbar_2n", ok, n=n)
    if n <= FULL_MODULE_MAX_RANK:
        roots = {a0} | {AffineRoot(weyl.simple_root(i, n)) for i in range(1, n + 1)}
        for sel in list(range(1, n + 1)) + ["half"]:
            roots.update(qkz_factors(sel, n))
        for root in sorted(roots, key=str):
            ok = True
            for k in range(1, N + 1):
                v = InducedVec.unit(n, k)
                try:
                    full = apply_R_induced(root, v, params, via="full")
                except NotInInducedSpan:
                    ok = False
                    break
                if not full.equals(apply_R_induced(root, v, params)):
                    ok = False
                    break
            rep.add(f"induced R[{root}] agrees with the full module", ok, n=n)
        he = embed_induced(InducedVec.unit(n, 1))
        for i in range(2, n + 1):
            g = weyl.simple_reflection(i, n)
            rep.add(f"r_s{i} fixes hbar_e", apply_rw(g, he).equals(he), n=n)
    return rep
