"""Exact arithmetic in Z[L^{1/2}, L^{-1/2}, (L^n - 1)^{-1}].

Everything is carried as a rational function in ``v`` with ``L = v**2``.
Elements are stored as ``v**shift * num / den`` where ``num`` and ``den``
are integer polynomials with nonzero constant terms, ``gcd(num, den) = 1``
over Z[v] (content included) and ``den`` has a positive leading coefficient.
That normal form is unique, so equality is structural.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache

from flint import fmpz_poly

__all__ = [
    "Motive",
    "MotiveError",
    "PoleError",
    "ZERO",
    "ONE",
    "V",
    "L",
    "lefschetz_pow",
    "adams",
    "sigma",
    "euler_specialize",
    "eval_at",
    "eval_at_L",
    "is_integral_in_L",
    "class_gl",
    "class_proj",
    "class_affine",
    "class_grassmannian",
    "parse_motive",
]

_P_ZERO = fmpz_poly([])
_P_ONE = fmpz_poly([1])


class MotiveError(ArithmeticError):
    pass


class MotiveParseError(MotiveError, ValueError):
    pass


class PoleError(MotiveError):
    """Evaluation or specialization hit a pole."""


def _low_order(p: fmpz_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no low order")


def _strip(p: fmpz_poly) -> tuple[fmpz_poly, int]:
    k = _low_order(p)
    if k:
        p = fmpz_poly(p.coeffs()[k:])
    return p, k


class Motive:
    """Immutable element of Q(v), with arithmetic kept in canonical form."""

    __slots__ = ("num", "den", "shift", "_key")

    def __init__(self, num=0, den=1, shift: int = 0):
        n = _to_motive(num)
        d = _to_motive(den)
        if not d.is_one():
            n = n / d
        self._set(n.num, n.den, n.shift + shift if n else 0)

    def _set(self, num: fmpz_poly, den: fmpz_poly, shift: int) -> None:
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(
            self, "_key", (tuple(int(c) for c in num.coeffs()), tuple(int(c) for c in den.coeffs()), shift)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Motive is immutable")

    def __reduce__(self):
        return (_from_key, self._key)

    def _canonicalize(self, num: fmpz_poly, den: fmpz_poly, shift: int) -> None:
        if den.is_zero():
            raise ZeroDivisionError("motive with zero denominator")
        if num.is_zero():
            self._set(_P_ZERO, _P_ONE, 0)
            return
        num, kn = _strip(num)
        den, kd = _strip(den)
        shift += kn - kd
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self._set(num, den, shift)

    @classmethod
    def _raw(cls, num: fmpz_poly, den: fmpz_poly, shift: int) -> "Motive":
        m = object.__new__(cls)
        m._canonicalize(num, den, shift)
        return m

    # ring structure

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        k = min(self.shift, other.shift)
        a = self.num if self.shift == k else self.num.left_shift(self.shift - k)
        b = other.num if other.shift == k else other.num.left_shift(other.shift - k)
        if self.den == other.den:
            return Motive._raw(a + b, self.den, k)
        g = self.den.gcd(other.den)
        if g.is_one():
            return Motive._raw(a * other.den + b * self.den, self.den * other.den, k)
        d1 = self.den // g
        d2 = other.den // g
        return Motive._raw(a * d2 + b * d1, self.den * d2, k)

    __radd__ = __add__

    def __neg__(self) -> "Motive":
        m = object.__new__(Motive)
        m._set(-self.num, self.den, self.shift)
        return m

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        return Motive._raw(n1 * n2, d1 * d2, self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self) -> "Motive":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero motive")
        return Motive._raw(self.den, self.num, -self.shift)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "Motive":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero():
            return ONE if k == 0 else ZERO
        return Motive._raw(self.num ** k, self.den ** k, self.shift * k)

    # comparison / hashing

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self._key == ONE._key

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        """True for Laurent polynomials in v."""
        return self.den.is_one()

    # display

    def numerator_poly(self) -> fmpz_poly:
        return self.num.left_shift(self.shift) if self.shift > 0 else self.num

    def denominator_poly(self) -> fmpz_poly:
        return self.den.left_shift(-self.shift) if self.shift < 0 else self.den

    def __str__(self) -> str:
        num = _format_poly(self.numerator_poly())
        den = self.denominator_poly()
        if den.is_one():
            return num
        dens = _format_poly(den)
        if _is_compound(self.numerator_poly()):
            num = f"({num})"
        if _is_compound(den) or (den.degree() > 0 and abs(int(den.leading_coefficient())) != 1):
            dens = f"({dens})"
        return f"{num}/{dens}"

    def __repr__(self) -> str:
        return f"Motive({str(self)!r})"


def _from_key(num: tuple, den: tuple, shift: int) -> Motive:
    return Motive._raw(fmpz_poly(list(num)), fmpz_poly(list(den)), shift)


def _as_poly(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, int):
        return fmpz_poly([x])
    if isinstance(x, (list, tuple)):
        return fmpz_poly(list(x))
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


def _to_motive(x) -> "Motive":
    if isinstance(x, (fmpz_poly, list, tuple)):
        return Motive._raw(_as_poly(x), _P_ONE, 0)
    m = _coerce(x)
    if m is NotImplemented:
        raise TypeError(f"cannot build a Motive from {type(x).__name__}")
    return m


def _coerce(x):
    if isinstance(x, Motive):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, int):
        return Motive._raw(fmpz_poly([x]), _P_ONE, 0)
    if isinstance(x, Fraction):
        return Motive._raw(fmpz_poly([x.numerator]), fmpz_poly([x.denominator]), 0)
    return NotImplemented


def _is_compound(p: fmpz_poly) -> bool:
    return sum(1 for c in p.coeffs() if c != 0) > 1


def _format_poly(p: fmpz_poly) -> str:
    if p.is_zero():
        return "0"
    coeffs = [int(c) for c in p.coeffs()]
    parts: list[str] = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "v" if e == 1 else f"v^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


ZERO = Motive._raw(_P_ZERO, _P_ONE, 0)
ONE = Motive._raw(_P_ONE, _P_ONE, 0)
V = Motive._raw(_P_ONE, _P_ONE, 1)
L = Motive._raw(_P_ONE, _P_ONE, 2)


def lefschetz_pow(k: int, half: bool = False) -> Motive:
    """``L**k``, or ``L**(k/2) = v**k`` when ``half`` is set."""
    return Motive._raw(_P_ONE, _P_ONE, k if half else 2 * k)


def _adams_poly(n: int, p: fmpz_poly) -> fmpz_poly:
    if n % 2 == 0:
        p = fmpz_poly([c if i % 2 == 0 else -c for i, c in enumerate(p.coeffs())])
    return p.inflate(n) if n > 1 else p


def adams(n: int, a: Motive) -> Motive:
    """Adams operation: the ring endomorphism ``v -> (-1)**(n+1) * v**n``."""
    if n < 1:
        raise ValueError("Adams operations are indexed by n >= 1")
    a = _coerce(a)
    if n == 1 or a.is_zero():
        return a
    sign = -1 if (n % 2 == 0 and a.shift % 2) else 1
    num = _adams_poly(n, a.num)
    if sign < 0:
        num = -num
    return Motive._raw(num, _adams_poly(n, a.den), n * a.shift)


def sigma(n: int, a: Motive) -> Motive:
    """Symmetric power ``sigma^n(a)``, from the Adams operations via Newton's identity."""
    a = _coerce(a)
    out = [ONE]
    psi = [None] + [adams(k, a) for k in range(1, n + 1)]
    for j in range(1, n + 1):
        acc = ZERO
        for k in range(1, j + 1):
            acc = acc + psi[k] * out[j - k]
        out.append(acc * Fraction(1, j))
    return out[n]


def _horner(p: fmpz_poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


_V_PLUS_ONE = fmpz_poly([1, 1])


def euler_specialize(a: Motive) -> Fraction:
    """Limit of ``a`` at ``v = -1``; this is the Euler characteristic specialization."""
    a = _coerce(a)
    num, den = a.num, a.den
    while _horner(den, Fraction(-1)) == 0:
        if _horner(num, Fraction(-1)) != 0:
            raise PoleError(f"{a} has a pole at v = -1")
        num = num // _V_PLUS_ONE
        den = den // _V_PLUS_ONE
    return Fraction((-1) ** (a.shift % 2)) * _horner(num, Fraction(-1)) / _horner(den, Fraction(-1))


def eval_at(a: Motive, v0) -> Fraction:
    """Exact value of ``a`` at the rational point ``v = v0``."""
    a = _coerce(a)
    v0 = Fraction(v0)
    if a.is_zero():
        return Fraction(0)
    d = _horner(a.den, v0)
    if d == 0 or (v0 == 0 and a.shift < 0):
        raise PoleError(f"{a} has a pole at v = {v0}")
    return _horner(a.num, v0) / d * v0 ** a.shift


def is_integral_in_L(a: Motive) -> bool:
    """True iff ``a`` lies in Q(L), i.e. only even powers of v occur."""
    a = _coerce(a)
    if a.shift % 2:
        return False
    for p in (a.num, a.den):
        if any(c != 0 for c in p.coeffs()[1::2]):
            return False
    return True


def eval_at_L(a: Motive, L0) -> Fraction:
    """Exact value at ``L = L0`` of an element of Q(L)."""
    a = _coerce(a)
    if not is_integral_in_L(a):
        raise MotiveError(f"{a} involves odd powers of L^(1/2)")
    L0 = Fraction(L0)
    if a.is_zero():
        return Fraction(0)

    def even(p: fmpz_poly) -> fmpz_poly:
        return fmpz_poly(p.coeffs()[::2])

    d = _horner(even(a.den), L0)
    if d == 0 or (L0 == 0 and a.shift < 0):
        raise PoleError(f"{a} has a pole at L = {L0}")
    return _horner(even(a.num), L0) / d * L0 ** (a.shift // 2)


@lru_cache(maxsize=None)
def class_gl(n: int) -> Motive:
    """``[GL(n)] = prod_{i<n} (L^n - L^i)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = ONE
    for i in range(n):
        out = out * (L ** n - L ** i)
    return out


def class_proj(n: int) -> Motive:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (L ** (n + 1) - 1) / (L - 1)


def class_affine(n: int) -> Motive:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return L ** n


def class_grassmannian(k: int, n: int) -> Motive:
    # The L^{k(n-k)} factor makes Gr(1, 2) = P^1.
    if not 0 <= k <= n:
        raise ValueError(f"invalid Grassmannian Gr({k}, {n})")
    return class_gl(n) / (class_gl(k) * class_gl(n - k) * L ** (k * (n - k)))


# parsing

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_motive(text: str) -> Motive:
    """Parse the textual form; ``v`` is L^{1/2} and ``L`` is accepted as ``v^2``."""
    if not isinstance(text, str):
        raise TypeError("motive text must be a string")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise MotiveParseError(f"cannot parse motive {text!r}") from exc
    try:
        return _eval_node(tree.body, text)
    except ZeroDivisionError:
        raise MotiveParseError(f"division by zero in {text!r}") from None


def _eval_node(node, text: str) -> Motive:
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_node(node.left, text)
            exp = _exponent(node.right, text)
            if exp.denominator == 1:
                return base ** exp.numerator
            if base == L and exp.denominator == 2:
                return V ** exp.numerator
            raise MotiveParseError(f"only L takes half-integer exponents in {text!r}")
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise MotiveParseError(f"unsupported operator in {text!r}")
        return op(_eval_node(node.left, text), _eval_node(node.right, text))
    if isinstance(node, ast.UnaryOp):
        inner = _eval_node(node.operand, text)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
    if isinstance(node, ast.Name):
        if node.id == "v":
            return V
        if node.id == "L":
            return L
        raise MotiveParseError(f"unknown symbol {node.id!r} in {text!r}")
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Motive._raw(fmpz_poly([node.value]), _P_ONE, 0)
    raise MotiveParseError(f"cannot parse motive {text!r}")


def _exponent(node, text: str) -> Fraction:
    """Integer exponent, or ``p/q`` with integer literals."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        e = _exponent(node.operand, text)
        return -e if isinstance(node.op, ast.USub) else e
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        den = _exponent(node.right, text)
        if den:
            return _exponent(node.left, text) / den
    raise MotiveParseError(f"exponents must be integers or halves in {text!r}")
