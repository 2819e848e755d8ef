"""Exact polynomial arithmetic in a complex variable w, its conjugate, and real parameters.

A :class:`BiPoly` stores a finite sum  sum_{a,b,c} coef * t^a * w^b * wbar^c
where ``a`` is a multi-exponent over ``t_arity`` real parameters and ``b, c``
are the powers of w and its conjugate.  w and wbar are formal symbols here;
evaluation substitutes ``wbar = conj(w)``.  All structural operations
(derivatives, rotation, recentering, products) are exact up to complex
multiply-add rounding, which is what makes coefficient-sum norm bounds
certifiable downstream.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

Key = tuple[tuple[int, ...], int, int]


def _as_key(a: Sequence[int], b: int, c: int) -> Key:
    return (tuple(int(x) for x in a), int(b), int(c))


class BiPoly:
    """Polynomial in (t_1..t_k, w, wbar) with complex coefficients.

    Parameters
    ----------
    terms : mapping
        ``{(a, b, c): coef}`` with ``a`` a tuple of nonnegative ints of
        length ``t_arity``, ``b, c`` nonnegative ints.  Zero coefficients
        are dropped.
    t_arity : int
        Number of real parameters t.
    """

    __slots__ = ("terms", "t_arity")

    def __init__(self, terms: Mapping[Key, complex] | None = None, t_arity: int = 0):
        self.t_arity = int(t_arity)
        clean: dict[Key, complex] = {}
        if terms:
            for (a, b, c), coef in terms.items():
                key = _as_key(a, b, c)
                if len(key[0]) != self.t_arity:
                    raise ValueError(
                        f"exponent {key} has {len(key[0])} t-entries, expected {self.t_arity}"
                    )
                if key[1] < 0 or key[2] < 0 or any(e < 0 for e in key[0]):
                    raise ValueError(f"negative exponent in {key}")
                coef = complex(coef)
                if coef != 0:
                    clean[key] = clean.get(key, 0.0 + 0.0j) + coef
                    if clean[key] == 0:
                        del clean[key]
        self.terms = clean

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def zero(cls, t_arity: int = 0) -> "BiPoly":
        return cls({}, t_arity)

    @classmethod
    def constant(cls, value: complex, t_arity: int = 0) -> "BiPoly":
        return cls({((0,) * t_arity, 0, 0): value}, t_arity)

    @classmethod
    def var_w(cls, t_arity: int = 0) -> "BiPoly":
        return cls({((0,) * t_arity, 1, 0): 1.0}, t_arity)

    @classmethod
    def var_wbar(cls, t_arity: int = 0) -> "BiPoly":
        return cls({((0,) * t_arity, 0, 1): 1.0}, t_arity)

    @classmethod
    def var_t(cls, index: int, t_arity: int) -> "BiPoly":
        a = [0] * t_arity
        a[index] = 1
        return cls({(tuple(a), 0, 0): 1.0}, t_arity)

    @classmethod
    def monomial(cls, coef: complex, a: Sequence[int], b: int, c: int) -> "BiPoly":
        return cls({_as_key(a, b, c): coef}, len(tuple(a)))

    # ------------------------------------------------------------------ #
    # ring operations

    def __add__(self, other: "BiPoly | complex") -> "BiPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for key, coef in other.terms.items():
            out[key] = out.get(key, 0.0 + 0.0j) + coef
        return BiPoly(out, self.t_arity)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()}, self.t_arity)

    def __sub__(self, other: "BiPoly | complex") -> "BiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: complex) -> "BiPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other: "BiPoly | complex") -> "BiPoly":
        if not isinstance(other, BiPoly):
            return BiPoly({k: v * other for k, v in self.terms.items()}, self.t_arity)
        if other.t_arity != self.t_arity:
            raise ValueError("t_arity mismatch in product")
        out: dict[Key, complex] = {}
        for (a1, b1, c1), v1 in self.terms.items():
            for (a2, b2, c2), v2 in other.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), b1 + b2, c1 + c2)
                out[key] = out.get(key, 0.0 + 0.0j) + v1 * v2
        return BiPoly(out, self.t_arity)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        out = BiPoly.constant(1.0, self.t_arity)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BiPoly)
            and self.t_arity == other.t_arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.t_arity, frozenset(self.terms.items())))

    def _coerce(self, other: "BiPoly | complex") -> "BiPoly":
        if isinstance(other, BiPoly):
            if other.t_arity != self.t_arity:
                raise ValueError("t_arity mismatch")
            return other
        return BiPoly.constant(complex(other), self.t_arity)

    # ------------------------------------------------------------------ #
    # structure queries

    def is_zero(self) -> bool:
        return not self.terms

    def w_degree(self) -> int:
        """Largest b + c over the terms (0 for the zero polynomial)."""
        return max((b + c for (_, b, c) in self.terms), default=0)

    def total_order(self) -> int:
        """Smallest |a| + b + c over the terms (vanishing order at 0)."""
        return min((sum(a) + b + c for (a, b, c) in self.terms), default=0)

    def min_w_order(self) -> int:
        """Smallest b + c over the terms."""
        return min((b + c for (_, b, c) in self.terms), default=0)

    def depends_on_w(self) -> bool:
        return any(b + c > 0 for (_, b, c) in self.terms)

    def is_conjugation_symmetric(self, tol: float = 0.0) -> bool:
        """True iff coef(a,b,c) == conj(coef(a,c,b)) for all terms.

        Such a polynomial takes real values whenever wbar = conj(w) and the
        t are real.
        """
        for (a, b, c), coef in self.terms.items():
            mirror = self.terms.get((a, c, b), 0.0 + 0.0j)
            if abs(coef - mirror.conjugate()) > tol:
                return False
        return True

    def conjugate(self) -> "BiPoly":
        """Polynomial representing conj(P(t, w)) as a function of (t, w)."""
        return BiPoly(
            {(a, c, b): v.conjugate() for (a, b, c), v in self.terms.items()},
            self.t_arity,
        )

    # ------------------------------------------------------------------ #
    # calculus and coordinate changes

    def wirtinger(self, which: str) -> "BiPoly":
        """Exact formal derivative with respect to ``"w"`` or ``"wbar"``."""
        if which not in ("w", "wbar"):
            raise ValueError("which must be 'w' or 'wbar'")
        out: dict[Key, complex] = {}
        for (a, b, c), coef in self.terms.items():
            if which == "w":
                if b > 0:
                    out[(a, b - 1, c)] = out.get((a, b - 1, c), 0.0 + 0.0j) + b * coef
            else:
                if c > 0:
                    out[(a, b, c - 1)] = out.get((a, b, c - 1), 0.0 + 0.0j) + c * coef
        return BiPoly(out, self.t_arity)

    def t_partial(self, index: int) -> "BiPoly":
        """Exact formal derivative with respect to t_index."""
        out: dict[Key, complex] = {}
        for (a, b, c), coef in self.terms.items():
            if a[index] > 0:
                a2 = list(a)
                a2[index] -= 1
                key = (tuple(a2), b, c)
                out[key] = out.get(key, 0.0 + 0.0j) + a[index] * coef
        return BiPoly(out, self.t_arity)

    def rotate(self, theta: float) -> "BiPoly":
        """Return Q with Q(t, z) = P(t, e^{i theta} z)."""
        out = {}
        for (a, b, c), coef in self.terms.items():
            out[(a, b, c)] = coef * complex(np.exp(1j * theta * (b - c)))
        return BiPoly(out, self.t_arity)

    def shift_w(self, eta: complex) -> "BiPoly":
        """Return Q with Q(t, z) = P(t, z + eta); substitutes w -> w + eta, wbar -> wbar + conj(eta)."""
        eta = complex(eta)
        etab = eta.conjugate()
        out: dict[Key, complex] = {}
        for (a, b, c), coef in self.terms.items():
            for i in range(b + 1):
                wi = math.comb(b, i) * eta ** (b - i)
                for j in range(c + 1):
                    val = coef * wi * math.comb(c, j) * etab ** (c - j)
                    if val != 0:
                        key = (a, i, j)
                        out[key] = out.get(key, 0.0 + 0.0j) + val
        return BiPoly(out, self.t_arity)

    def subs_t(self, t: Sequence[float]) -> "BiPoly":
        """Substitute numeric values for all t parameters; result has t_arity 0."""
        t = tuple(float(x) for x in t)
        if len(t) != self.t_arity:
            raise ValueError(f"expected {self.t_arity} t-values, got {len(t)}")
        out: dict[Key, complex] = {}
        for (a, b, c), coef in self.terms.items():
            scale = 1.0
            for e, tv in zip(a, t):
                scale *= tv**e
            val = coef * scale
            if val != 0:
                key = ((), b, c)
                out[key] = out.get(key, 0.0 + 0.0j) + val
        return BiPoly(out, 0)

    def split_by_w_order(self, order: int) -> tuple["BiPoly", "BiPoly"]:
        """Split into (terms with b+c < order, terms with b+c >= order)."""
        low = {k: v for k, v in self.terms.items() if k[1] + k[2] < order}
        high = {k: v for k, v in self.terms.items() if k[1] + k[2] >= order}
        return BiPoly(low, self.t_arity), BiPoly(high, self.t_arity)

    def coefficient(self, a: Sequence[int], b: int, c: int) -> complex:
        return self.terms.get(_as_key(a, b, c), 0.0 + 0.0j)

    # ------------------------------------------------------------------ #
    # evaluation

    def eval(self, t: Sequence[float], w):
        """Evaluate at real parameters ``t`` and complex ``w`` (scalar or ndarray).

        wbar is taken as conj(w).  Powers are cached so each distinct
        exponent is formed once; accumulation is a plain complex
        multiply-add per term.
        """
        t = tuple(float(x) for x in t)
        if len(t) != self.t_arity:
            raise ValueError(f"expected {self.t_arity} t-values, got {len(t)}")
        w = np.asarray(w, dtype=complex)
        scalar = w.ndim == 0
        wb = np.conjugate(w)
        max_b = max((b for (_, b, _) in self.terms), default=0)
        max_c = max((c for (_, _, c) in self.terms), default=0)
        wp = [np.ones_like(w)]
        for _ in range(max_b):
            wp.append(wp[-1] * w)
        wbp = [np.ones_like(w)]
        for _ in range(max_c):
            wbp.append(wbp[-1] * wb)
        acc = np.zeros_like(w)
        for (a, b, c), coef in self.terms.items():
            scale = coef
            for e, tv in zip(a, t):
                scale *= tv**e
            acc = acc + scale * wp[b] * wbp[c]
        return complex(acc) if scalar else acc

    def __call__(self, t: Sequence[float], w):
        return self.eval(t, w)

    # ------------------------------------------------------------------ #

    def __repr__(self) -> str:
        if not self.terms:
            return f"BiPoly(0, t_arity={self.t_arity})"
        bits = []
        for (a, b, c), coef in sorted(self.terms.items()):
            mono = []
            for i, e in enumerate(a):
                if e:
                    mono.append(f"t{i+1}^{e}" if e > 1 else f"t{i+1}")
            if b:
                mono.append(f"w^{b}" if b > 1 else "w")
            if c:
                mono.append(f"w~^{c}" if c > 1 else "w~")
            body = "*".join(mono) if mono else "1"
            bits.append(f"({coef:g})*{body}")
        return "BiPoly(" + " + ".join(bits) + f", t_arity={self.t_arity})"


def poly_eval(P: BiPoly, t: Sequence[float], w):
    """Evaluate P at (t, w) with wbar = conj(w)."""
    return P.eval(t, w)


def poly_wirtinger(P: BiPoly, which: str) -> BiPoly:
    """Exact formal Wirtinger derivative of P; ``which`` is ``"w"`` or ``"wbar"``."""
    return P.wirtinger(which)


def poly_rotate(P: BiPoly, theta: float) -> BiPoly:
    """Polynomial Q with Q(t, z) = P(t, e^{i theta} z)."""
    return P.rotate(theta)


def from_term_list(spec: Iterable[tuple], t_arity: int) -> BiPoly:
    """Build a BiPoly from an iterable of (a, b, c, coef) tuples."""
    terms: dict[Key, complex] = {}
    for a, b, c, coef in spec:
        key = _as_key(a, b, c)
        terms[key] = terms.get(key, 0.0 + 0.0j) + complex(coef)
    return BiPoly(terms, t_arity)
