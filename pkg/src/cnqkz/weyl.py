"""The C_n root system and its Weyl group of signed permutations.

Weights and roots are integer tuples in the epsilon basis.  A ``SignedPerm``
stores one signed image per basis vector: ``images[i] = +-j`` means
``eps_{i+1} -> +-eps_j``.  Products compose right to left, so
``(w * w')(lam) == w(w'(lam))``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ring import LaurentPoly, RankMismatchError, RatFunc, Ring

Weight = tuple[int, ...]


@dataclass(frozen=True)
class SignedPerm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(abs(i) for i in self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a signed permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "SignedPerm":
        return cls(tuple(range(1, n + 1)))

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        if other.n != self.n:
            raise RankMismatchError("composing signed permutations of different rank")
        out = []
        for img in other.images:
            j = self.images[abs(img) - 1]
            out.append(j if img > 0 else -j)
        return SignedPerm(tuple(out))

    def inverse(self) -> "SignedPerm":
        out = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            out[abs(img) - 1] = i if img > 0 else -i
        return SignedPerm(tuple(out))

    def __pow__(self, k: int) -> "SignedPerm":
        out = SignedPerm.identity(self.n)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def apply(self, lam: Sequence) -> tuple:
        return sp_apply(self, lam)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def __str__(self):
        return "[" + ",".join(str(i) for i in self.images) + "]"


def sp_apply(w: SignedPerm, lam: Sequence) -> tuple:
    if len(lam) != w.n:
        raise RankMismatchError(f"weight of length {len(lam)} for rank {w.n}")
    out = [0] * w.n
    for c, img in zip(lam, w.images):
        if c:
            out[abs(img) - 1] += c if img > 0 else -c
    return tuple(out)


def simple_reflection(i: int, n: int) -> SignedPerm:
    if not 1 <= i <= n:
        raise IndexError(f"s_{i} does not exist in rank {n}")
    im = list(range(1, n + 1))
    if i < n:
        im[i - 1], im[i] = im[i], im[i - 1]
    else:
        im[n - 1] = -n
    return SignedPerm(tuple(im))


def word(indices: Sequence[int], n: int) -> SignedPerm:
    """The product s_{i_1} s_{i_2} ... of simple reflections."""
    w = SignedPerm.identity(n)
    for i in indices:
        w = w * simple_reflection(i, n)
    return w


def parse_word(text: str, n: int) -> SignedPerm:
    """Parse ``"s1*s2*s1"`` (``"e"`` for the identity)."""
    text = text.strip()
    if text in ("", "e"):
        return SignedPerm.identity(n)
    return word([int(tok.strip().lstrip("s")) for tok in text.split("*")], n)


def format_word(indices: Sequence[int]) -> str:
    return "*".join(f"s{i}" for i in indices) if indices else "e"


@lru_cache(maxsize=None)
def elements(n: int) -> tuple[SignedPerm, ...]:
    """All 2^n n! elements of W(C_n)."""
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(SignedPerm(tuple(s * p for s, p in zip(signs, perm))))
    return tuple(out)


# -- roots --------------------------------------------------------------------

def unit(i: int, n: int) -> Weight:
    e = [0] * n
    e[i - 1] = 1
    return tuple(e)


def eps_sum(i: int, j: int, n: int, sign: int = 1) -> Weight:
    """eps_i + sign * eps_j (or 2 eps_i when i == j and sign == 1)."""
    e = [0] * n
    e[i - 1] += 1
    e[j - 1] += sign
    return tuple(e)


def is_root(alpha: Sequence[int]) -> bool:
    nz = [a for a in alpha if a]
    return (len(nz) == 1 and abs(nz[0]) == 2) or (len(nz) == 2 and all(abs(a) == 1 for a in nz))


def is_long(alpha: Sequence[int]) -> bool:
    return any(abs(a) == 2 for a in alpha)


def is_positive(alpha: Sequence[int]) -> bool:
    for a in alpha:
        if a:
            return a > 0
    raise ValueError("zero vector has no sign")


def roots(n: int) -> list[Weight]:
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for si, sj in itertools.product((1, -1), repeat=2):
                e = [0] * n
                e[i - 1], e[j - 1] = si, sj
                out.append(tuple(e))
        for s in (1, -1):
            e = [0] * n
            e[i - 1] = 2 * s
            out.append(tuple(e))
    return out


def positive_roots(n: int) -> list[Weight]:
    return [a for a in roots(n) if is_positive(a)]


def simple_root(i: int, n: int) -> Weight:
    if not 1 <= i <= n:
        raise IndexError(f"alpha_{i} does not exist in rank {n}")
    if i < n:
        return eps_sum(i, i + 1, n, -1)
    return tuple(2 if k == n else 0 for k in range(1, n + 1))


def highest_root(n: int) -> Weight:
    return tuple(2 if k == 1 else 0 for k in range(1, n + 1))


def coroot(alpha: Sequence[int]) -> tuple[Fraction, ...]:
    nrm = sum(a * a for a in alpha)
    return tuple(Fraction(2 * a, nrm) for a in alpha)


def pairing(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def reflection(alpha: Sequence[int]) -> SignedPerm:
    """s_alpha as a signed permutation."""
    n = len(alpha)
    if not is_root(alpha):
        raise ValueError(f"{tuple(alpha)} is not a C_{n} root")
    av = coroot(alpha)
    images = []
    for i in range(1, n + 1):
        e = unit(i, n)
        c = pairing(e, av)
        img = [ei - c * ai for ei, ai in zip(e, alpha)]
        (j,) = [k for k, val in enumerate(img) if val]
        images.append((j + 1) if img[j] > 0 else -(j + 1))
    return SignedPerm(tuple(images))


@dataclass(frozen=True)
class AffineRoot:
    root: Weight
    m: int = 0

    def __post_init__(self):
        if not is_root(self.root):
            raise ValueError(f"{self.root} is not a C_n root")

    def __neg__(self) -> "AffineRoot":
        return AffineRoot(tuple(-a for a in self.root), -self.m)

    def act(self, w: SignedPerm) -> "AffineRoot":
        return AffineRoot(sp_apply(w, self.root), self.m)

    def __str__(self):
        n = len(self.root)
        parts = []
        for i, a in enumerate(self.root, start=1):
            if a:
                coef = {1: "+", -1: "-", 2: "+2", -2: "-2"}[a]
                parts.append(f"{coef}e{i}")
        s = "".join(parts).lstrip("+")
        if self.m:
            s += f"{'+' if self.m > 0 else '-'}{'' if abs(self.m) == 1 else abs(self.m)}d"
        return s if n else "0"


# -- distinguished elements ---------------------------------------------------

def coset_words(n: int) -> list[list[int]]:
    """Reduced words of the coset representatives w_1 .. w_2n of W / W_{eps_1}."""
    words = [[]]
    for k in range(1, n + 1):
        words.append(list(range(k, 0, -1)))  # s_k ... s_2 s_1
    top = list(range(n, 0, -1))
    for k in range(1, n):
        words.append(list(range(n - k, n)) + top)  # s_{n-k} ... s_{n-1} w_{n+1}
    return words


@lru_cache(maxsize=None)
def coset_reps(n: int) -> tuple[SignedPerm, ...]:
    if n < 1:
        raise ValueError("rank must be at least 1")
    return tuple(word(wd, n) for wd in coset_words(n))


def coset_index_of_image(img: Sequence[int]) -> int:
    """1-based index k with w_k(eps_1) equal to the signed unit vector ``img``."""
    n = len(img)
    (j,) = [k for k, a in enumerate(img, start=1) if a]
    if abs(img[j - 1]) != 1:
        raise ValueError(f"{tuple(img)} is not a signed unit vector")
    return j if img[j - 1] > 0 else 2 * n - j + 1


def coset_index(w: SignedPerm) -> int:
    return coset_index_of_image(sp_apply(w, unit(1, w.n)))


def stabilizer_eps1(n: int) -> list[SignedPerm]:
    """W_{eps_1} = <s_2, ..., s_n>."""
    return [w for w in elements(n) if w.images[0] == 1]


def g_word(n: int) -> list[int]:
    """s_n (s_{n-1} s_n) (s_{n-2} s_{n-1} s_n) ... (s_1 ... s_n)."""
    out = []
    for k in range(n, 0, -1):
        out.extend(range(k, n + 1))
    return out


def g_element(n: int) -> SignedPerm:
    return word(g_word(n), n)


def s_theta_word(n: int) -> list[int]:
    """s_theta = (s_1 ... s_{n-1})(s_n ... s_1)."""
    return list(range(1, n)) + list(range(n, 0, -1))


def s_theta(n: int) -> SignedPerm:
    return reflection(highest_root(n))


# -- actions on rational functions -------------------------------------------

def _weyl_map(w: SignedPerm, rank: int):
    n = w.n
    if n != rank:
        raise RankMismatchError(f"signed permutation of rank {n} acting on rank {rank}")

    def fn(exps):
        e = list(exps)
        ys = exps[2:2 + n]
        new = [0] * n
        for i, c in enumerate(ys):
            if c:
                img = w.images[i]
                new[abs(img) - 1] += c if img > 0 else -c
        e[2:2 + n] = new
        return tuple(e), 1

    return fn


def act_on_ratfunc(w, f):
    """Apply w in W (or the affine ``"s0"``) to a LaurentPoly or RatFunc.

    Plain w substitutes y_i -> y_j^{+-1} following w(eps_i) = +-eps_j.  The
    affine generator s0 substitutes y_1 -> q y_1^{-1}.  x is never touched.
    """
    if isinstance(w, str):
        if w != "s0":
            raise ValueError(f"unknown affine element {w!r}")
        return act_s0(f)
    if w.is_identity():
        return f
    return f.map_exponents(_weyl_map(w, f.rank))


def act_s0(f):
    R = Ring(f.rank)
    return f.substitute({R.slot_y(1): R.q * R.y(1, -1)})


def e_weight(lam: Sequence[int], rank: int, q_power: int = 0) -> LaurentPoly:
    """e^lam q^q_power as a monomial, using y_i = e^{eps_i} and e^delta = q."""
    R = Ring(rank)
    return R.mono(v=2 * q_power, y=list(lam))


# -- dominance and orbits -----------------------------------------------------

def simple_root_coordinates(d: Sequence[int]) -> list[Fraction]:
    """Coefficients c with d = sum c_i alpha_i (alpha_n = 2 eps_n)."""
    n = len(d)
    c = []
    run = 0
    for i in range(n - 1):
        run += d[i]
        c.append(Fraction(run))
    c.append(Fraction(run + d[n - 1], 2))
    return c


def in_positive_root_cone(d: Sequence[int]) -> bool:
    return all(ci.denominator == 1 and ci >= 0 for ci in simple_root_coordinates(d))


def dominance_less(nu: Sequence[int], mu: Sequence[int]) -> bool:
    """Strict dominance: nu != mu and mu - nu lies in Q^+."""
    if len(nu) != len(mu):
        raise RankMismatchError("weights of different rank")
    if tuple(nu) == tuple(mu):
        return False
    return in_positive_root_cone([m - v for m, v in zip(mu, nu)])


def is_partition(mu: Sequence[int]) -> bool:
    return all(a >= 0 for a in mu) and all(mu[i] >= mu[i + 1] for i in range(len(mu) - 1))


def orbit(mu: Sequence[int]) -> list[Weight]:
    """The W-orbit of mu, each element once, sorted."""
    seen = set()
    for perm in set(itertools.permutations(mu)):
        nz = [i for i, a in enumerate(perm) if a]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            e = list(perm)
            for i, s in zip(nz, signs):
                e[i] *= s
            seen.add(tuple(e))
    return sorted(seen)


def dominant_rep(lam: Sequence[int]) -> Weight:
    return tuple(sorted((abs(a) for a in lam), reverse=True))


def orbit_sum(mu: Sequence[int], n: int | None = None) -> LaurentPoly:
    """m_mu = sum of e^nu over the W-orbit of the partition mu."""
    mu = tuple(mu)
    if n is None:
        n = len(mu)
    if len(mu) != n:
        raise RankMismatchError(f"partition of length {len(mu)} for rank {n}")
    if not is_partition(mu):
        raise ValueError(f"{mu} is not a partition")
    R = Ring(n)
    out = R.zero
    for nu in orbit(mu):
        out = out + R.mono(y=list(nu))
    return out


def orbit_brute_force(mu: Sequence[int]) -> list[Weight]:
    """Orbit by applying every group element; an independent check on ``orbit``."""
    return sorted({sp_apply(w, mu) for w in elements(len(mu))})

