"""Exact sparse Laurent polynomials and rational functions over the rationals.

Every polynomial lives in a fixed ambient ring of rank ``n`` whose generators,
in order, are

    v = q^(1/2),  u = t^(1/2),  y_1, ..., y_n,  x

so that any Laurent monomial in q^(1/2), t^(1/2), the y_i and x is an exact
monomial.  Exponent vectors are packed into a single Python integer (one
biased fixed-width field per generator, ``v`` most significant), which makes
the monomial product an integer addition and makes integer order agree with
lexicographic order on the exponent vectors.

Rational functions are never reduced by a gcd.  The only normalisation is a
monomial/scalar rescaling that makes the denominator's lex-least term equal
to ``1``; equality is decided by cross-multiplication.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

_WIDTH = 24
_BIAS = 1 << (_WIDTH - 1)
_MASK = (1 << _WIDTH) - 1
_LIMIT = 1 << (_WIDTH - 3)

V, U = 0, 1  # generator slots; y_i is slot i + 1, x is slot rank + 2

Scalar = Union[int, Fraction]


class RankMismatchError(ValueError):
    pass


class SingularPointError(ArithmeticError):
    """Raised when a denominator (nearly) vanishes at a numerical point."""


class NonMonomialError(ValueError):
    pass


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _bias(ngens: int) -> int:
    b = 0
    for _ in range(ngens):
        b = (b << _WIDTH) | _BIAS
    return b


_BIAS_CACHE: dict[int, int] = {}


def _zero_key(ngens: int) -> int:
    b = _BIAS_CACHE.get(ngens)
    if b is None:
        b = _BIAS_CACHE[ngens] = _bias(ngens)
    return b


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in exps:
        if not -_LIMIT < e < _LIMIT:
            raise OverflowError(f"exponent {e} out of range")
        key = (key << _WIDTH) | (e + _BIAS)
    return key


def unpack(key: int, ngens: int) -> tuple[int, ...]:
    out = [0] * ngens
    for i in range(ngens - 1, -1, -1):
        out[i] = (key & _MASK) - _BIAS
        key >>= _WIDTH
    return tuple(out)


def gen_names(rank: int) -> list[str]:
    return ["v", "u"] + [f"y{i}" for i in range(1, rank + 1)] + ["x"]


class LaurentPoly:
    """Sparse Laurent polynomial with exact rational coefficients.

    ``terms`` maps a packed exponent vector to a nonzero ``int`` or
    ``Fraction``.  Instances are treated as immutable.
    """

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[int, Scalar] | None = None, _trusted=False):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        self.rank = rank
        if _trusted:
            self.terms = terms
        else:
            self.terms = {k: _norm(c) for k, c in (terms or {}).items() if c != 0}
        self._hash = None

    # -- construction -------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.rank + 3

    @classmethod
    def constant(cls, rank: int, c: Scalar) -> "LaurentPoly":
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return cls(rank, {_zero_key(rank + 3): c} if c else {}, _trusted=True)

    @classmethod
    def monomial(cls, rank: int, exps: Sequence[int], coeff: Scalar = 1) -> "LaurentPoly":
        if len(exps) != rank + 3:
            raise RankMismatchError(f"exponent vector has length {len(exps)}, expected {rank + 3}")
        return cls(rank, {pack(exps): coeff})

    @classmethod
    def from_dict(cls, rank: int, terms: Mapping[Sequence[int], Scalar]) -> "LaurentPoly":
        out: dict[int, Scalar] = {}
        for exps, c in terms.items():
            k = pack(exps)
            out[k] = out.get(k, 0) + c
        return cls(rank, out)

    def items(self) -> Iterable[tuple[tuple[int, ...], Scalar]]:
        n = self.ngens
        for k in sorted(self.terms):
            yield unpack(k, n), self.terms[k]

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _zero_key(self.ngens) in self.terms)

    def degree_in(self, slot: int) -> tuple[int, int]:
        """(min, max) exponent of generator ``slot`` over the support."""
        es = [unpack(k, self.ngens)[slot] for k in self.terms]
        return (min(es), max(es)) if es else (0, 0)

    def involves(self, slots: Iterable[int]) -> bool:
        slots = list(slots)
        for k in self.terms:
            e = unpack(k, self.ngens)
            if any(e[s] for s in slots):
                return True
        return False

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "LaurentPoly"):
        if other.rank != self.rank:
            raise RankMismatchError(f"rank {self.rank} vs rank {other.rank}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return LaurentPoly.constant(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            self, other = other, self
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return LaurentPoly(self.rank, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.rank, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly(self.rank, {}, _trusted=True)
        if c == 1:
            return self
        return LaurentPoly(self.rank, {k: _norm(v * c) for k, v in self.terms.items()}, _trusted=True)

    def shift(self, exps_key: int) -> "LaurentPoly":
        """Multiply by the monomial with packed key ``exps_key`` (coefficient 1)."""
        z = _zero_key(self.ngens)
        d = exps_key - z
        return LaurentPoly(self.rank, {k + d: c for k, c in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, LaurentPoly):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly(self.rank, {}, _trusted=True)
        if len(a) < len(b):
            a, b = b, a
        z = _zero_key(self.ngens)
        out: dict[int, Scalar] = {}
        get = out.get
        for kb, cb in b.items():
            d = kb - z
            for ka, ca in a.items():
                k = ka + d
                out[k] = get(k, 0) + ca * cb
        out = {k: _norm(c) for k, c in out.items() if c}
        return LaurentPoly(self.rank, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only exist for monomials")
            ((k, c),) = self.terms.items()
            z = _zero_key(self.ngens)
            return LaurentPoly(self.rank, {z - (k - z): _norm(Fraction(1) / c)}, _trusted=True) ** (-e)
        out = LaurentPoly.constant(self.rank, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def inverse_monomial(self) -> "LaurentPoly":
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.rank == other.rank and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == LaurentPoly.constant(self.rank, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------------
    def substitute(self, images: Mapping[int, "LaurentPoly"]) -> "LaurentPoly":
        """Simultaneously replace generator slots by monomials.

        ``images`` maps a slot index to a monomial ``LaurentPoly``; the map is
        a ring homomorphism on Laurent polynomials.
        """
        if not images:
            return self
        n = self.ngens
        imgs = []
        for slot, img in images.items():
            if not isinstance(img, LaurentPoly) or not img.is_monomial():
                raise NonMonomialError(f"image of {gen_names(self.rank)[slot]} is not a monomial")
            self._check(img)
            ((k, c),) = img.terms.items()
            unit = [0] * n
            unit[slot] = 1
            imgs.append((slot, k - pack(unit), c))
        out: dict[int, Scalar] = {}
        for key, coeff in self.terms.items():
            exps = unpack(key, n)
            newkey = key
            for slot, delta, c in imgs:
                e = exps[slot]
                if e:
                    newkey += e * delta
                    if c != 1:
                        coeff = coeff * (c ** e if e > 0 else Fraction(1) / c ** (-e))
            out[newkey] = out.get(newkey, 0) + coeff
        out = {k: _norm(c) for k, c in out.items() if c}
        return LaurentPoly(self.rank, out, _trusted=True)

    def map_exponents(self, fn: Callable[[tuple[int, ...]], tuple[tuple[int, ...], Scalar]]) -> "LaurentPoly":
        """Apply ``fn(exps) -> (new_exps, sign)`` termwise."""
        n = self.ngens
        out: dict[int, Scalar] = {}
        for key, c in self.terms.items():
            e2, s = fn(unpack(key, n))
            k2 = pack(e2)
            out[k2] = out.get(k2, 0) + c * s
        return LaurentPoly(self.rank, {k: _norm(c) for k, c in out.items() if c}, _trusted=True)

    # -- numerics -----------------------------------------------------------
    def evaluate(self, values: Sequence[complex]) -> complex:
        n = self.ngens
        if len(values) != n:
            raise RankMismatchError("wrong number of generator values")
        total = 0j
        for key, c in self.terms.items():
            term = complex(c)
            for val, e in zip(values, unpack(key, n)):
                if e:
                    term *= val ** e
            total += term
        return total

    def abs_evaluate(self, values: Sequence[complex]) -> float:
        """Sum of absolute values of the terms: the scale used by singularity checks."""
        n = self.ngens
        total = 0.0
        for key, c in self.terms.items():
            term = abs(float(c))
            for val, e in zip(values, unpack(key, n)):
                if e:
                    term *= abs(val) ** e
            total += term
        return total

    # -- text ---------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = gen_names(self.rank)
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
            )
            neg = c < 0
            a = -c if neg else c
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append(("-" if neg else "+", body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"LaurentPoly({self})"


def poly_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a + b


def poly_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a * b


class RatFunc:
    """Quotient of two Laurent polynomials, kept unreduced.

    The denominator is rescaled by a monomial and a scalar so that its
    lexicographically least term is exactly ``1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.constant(num.rank, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        lead = min(den.terms)
        c = den.terms[lead]
        z = _zero_key(den.ngens)
        if lead != z:
            delta = z - lead
            den = LaurentPoly(den.rank, {k + delta: v for k, v in den.terms.items()}, _trusted=True)
            num = LaurentPoly(num.rank, {k + delta: v for k, v in num.terms.items()}, _trusted=True)
        if c != 1:
            inv = Fraction(1) / c
            den = den.scale(inv)
            num = num.scale(inv)
        self.num = num
        self.den = den

    @property
    def rank(self) -> int:
        return self.num.rank

    @classmethod
    def constant(cls, rank: int, c: Scalar) -> "RatFunc":
        return cls(LaurentPoly.constant(rank, c))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.rank != self.rank:
                raise RankMismatchError(f"rank {self.rank} vs rank {other.rank}")
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc(other)
        if isinstance(other, (int, Rational)):
            return RatFunc.constant(self.rank, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if other.den.is_constant():
            return RatFunc(self.num + other.num * self.den, self.den)
        if self.den.is_constant():
            return RatFunc(self.num * other.den + other.num, other.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc.constant(self.rank, 0)
        if other.den.is_constant():
            return RatFunc(self.num * other.num, self.den)
        if self.den.is_constant():
            return RatFunc(self.num * other.num, other.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatFunc(other.den, other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RatFunc(self.den, self.num) ** (-e)
        return RatFunc(self.num ** e, self.den ** e)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return frac_equal(self, other)

    __hash__ = None

    def substitute(self, images: Mapping[int, LaurentPoly]) -> "RatFunc":
        return RatFunc(self.num.substitute(images), self.den.substitute(images))

    def map_exponents(self, fn) -> "RatFunc":
        return RatFunc(self.num.map_exponents(fn), self.den.map_exponents(fn))

    def evaluate(self, values: Sequence[complex], tol: float = 1e-12) -> complex:
        d = self.den.evaluate(values)
        scale = self.den.abs_evaluate(values)
        if abs(d) <= tol * max(scale, 1e-300):
            raise SingularPointError("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def __str__(self):
        if self.den.is_constant() and self.den.terms.get(_zero_key(self.den.ngens)) == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def frac_equal(a: RatFunc, b: RatFunc) -> bool:
    if a.rank != b.rank:
        raise RankMismatchError(f"rank {a.rank} vs rank {b.rank}")
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def frac_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class Ring:
    """Generator factory for the rank-``n`` ambient ring."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("rank must be at least 1")
        self.n = n

    @property
    def ngens(self) -> int:
        return self.n + 3

    def slot_y(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"y_{i} does not exist in rank {self.n}")
        return i + 1

    @property
    def slot_x(self) -> int:
        return self.n + 2

    def mono(self, v=0, u=0, y: Sequence[int] | Mapping[int, int] = (), x=0, coeff: Scalar = 1) -> LaurentPoly:
        exps = [0] * self.ngens
        exps[V], exps[U], exps[self.slot_x] = v, u, x
        if isinstance(y, Mapping):
            for i, e in y.items():
                exps[self.slot_y(i)] += e
        else:
            for i, e in enumerate(y, start=1):
                exps[self.slot_y(i)] += e
        return LaurentPoly.monomial(self.n, exps, coeff)

    def const(self, c: Scalar) -> LaurentPoly:
        return LaurentPoly.constant(self.n, c)

    @property
    def one(self) -> LaurentPoly:
        return self.const(1)

    @property
    def zero(self) -> LaurentPoly:
        return self.const(0)

    @property
    def v(self) -> LaurentPoly:
        return self.mono(v=1)

    @property
    def u(self) -> LaurentPoly:
        return self.mono(u=1)

    @property
    def q(self) -> LaurentPoly:
        return self.mono(v=2)

    @property
    def t(self) -> LaurentPoly:
        return self.mono(u=2)

    def y(self, i: int, e: int = 1) -> LaurentPoly:
        return self.mono(y={i: e})

    @property
    def x(self) -> LaurentPoly:
        return self.mono(x=1)

    def frac(self, num, den=None) -> RatFunc:
        if not isinstance(num, LaurentPoly):
            num = self.const(num)
        if den is not None and not isinstance(den, LaurentPoly):
            den = self.const(den)
        return RatFunc(num, den)


def substitute_monomial(p: LaurentPoly | RatFunc, slot: int, image: LaurentPoly):
    """Homomorphic substitution of one generator by a monomial."""
    return p.substitute({slot: image})


def numeric_values(rank: int, q: complex, t: complex, y: Sequence[complex], x: complex = 1.0) -> list[complex]:
    if len(y) != rank:
        raise RankMismatchError(f"expected {rank} y-values, got {len(y)}")
    return [cmath.sqrt(q), cmath.sqrt(t), *[complex(z) for z in y], complex(x)]


def eval_numeric(p: LaurentPoly | RatFunc, point, x: complex | None = None) -> complex:
    """Evaluate at a point carrying ``q``, ``t`` and ``y`` (and optionally ``x``).

    ``v`` and ``u`` are the principal square roots of ``q`` and ``t``.
    """
    if x is None:
        x = getattr(point, "x", None)
        if x is None:
            x = 1.0
    vals = numeric_values(p.rank, point.q, point.t, point.y, x)
    return p.evaluate(vals)


def compile_in_x(f: RatFunc, q: complex, t: complex, y: Sequence[complex]) -> Callable[[complex], complex]:
    """Specialise everything but ``x`` and return a fast callable in ``x``.

    Used in residue sums where the same rational function is evaluated at
    many ladder points.
    """
    rank = f.rank
    vals = numeric_values(rank, q, t, y)
    sx = rank + 2

    def collapse(p: LaurentPoly) -> dict[int, complex]:
        out: dict[int, complex] = {}
        for exps, c in p.items():
            term = complex(c)
            for i, (val, e) in enumerate(zip(vals, exps)):
                if e and i != sx:
                    term *= val ** e
            out[exps[sx]] = out.get(exps[sx], 0j) + term
        return out

    num, den = collapse(f.num), collapse(f.den)
    den_abs = {e: abs(c) for e, c in den.items()}

    def fn(xv: complex) -> complex:
        d = sum(c * xv ** e for e, c in den.items())
        scale = sum(c * abs(xv) ** e for e, c in den_abs.items())
        if abs(d) <= 1e-12 * max(scale, 1e-300):
            raise SingularPointError("denominator vanishes at the evaluation point")
        return sum(c * xv ** e for e, c in num.items()) / d

    return fn


def to_sympy(p: LaurentPoly):
    """The polynomial as a sympy expression in q, t, y1..yn, x (v -> sqrt(q), u -> sqrt(t))."""
    import sympy

    q, t, x = sympy.symbols("q t x")
    ys = sympy.symbols(f"y1:{p.rank + 1}")
    base = [sympy.sqrt(q), sympy.sqrt(t), *ys, x]
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[b ** e for b, e in zip(base, exps) if e])
                       for exps, c in ((ex, Fraction(c)) for ex, c in p.items())])


def display(f: Union[LaurentPoly, "RatFunc"]) -> str:
    """Reduced, human-readable form in q and t.  For output only; equality stays exact in-house."""
    import sympy

    if isinstance(f, LaurentPoly):
        expr = to_sympy(f)
    else:
        expr = to_sympy(f.num) / to_sympy(f.den)
    return str(sympy.factor(sympy.cancel(expr)))
