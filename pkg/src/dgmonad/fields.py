"""Exact ground fields: the rationals, prime fields and finite extensions.

Field elements are plain canonical Python values so that vectors can be
tuples and compare/hash cheaply:

* ``Rationals``      -> ``fractions.Fraction``
* ``PrimeField(p)``  -> ``int`` in ``range(p)``
* ``ExtensionField`` -> ``tuple`` of ``n`` ints, coefficients of 1, a, a^2, ...

The field object carries the arithmetic.  ``Scalar`` wraps a value together
with its field for callers that want operator syntax.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface; subclasses implement the arithmetic on raw values."""

    zero: Any
    one: Any
    characteristic: int
    order: int | None
    # raw values test false exactly when zero (ints, Fractions); lets hot loops skip __eq__
    falsy_zero = False

    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def parse(self, text: str): raise NotImplementedError
    def format(self, a) -> str: raise NotImplementedError
    def spec(self) -> dict: raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def elements(self) -> Iterator:
        raise FieldError(f"{self} is infinite")

    def coerce(self, x):
        """Accept ints, strings or already-canonical values."""
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        return self.canonical(x)

    def canonical(self, x):
        return x

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self):
        return hash(repr(sorted(self.spec().items())))


class Rationals(Field):
    falsy_zero = True
    characteristic = 0
    order = None

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def mul(self, a, b): return a * b
    def neg(self, a): return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def from_int(self, n): return Fraction(n)

    def canonical(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldError(f"not a rational: {x!r}")

    _RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

    def parse(self, text):
        m = self._RAT.match(text)
        if not m:
            raise FieldError(f"malformed rational {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise FieldError(f"zero denominator in {text!r}")
        return Fraction(num, den)

    def format(self, a):
        return f"{a.numerator}/{a.denominator}"

    def spec(self):
        return {"kind": "rationals"}

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    falsy_zero = True
    order: int

    def __init__(self, p: int):
        if not (isinstance(p, int) and is_prime(p) and p < 2**31):
            raise FieldError(f"p = {p!r} is not a prime below 2^31")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def neg(self, a): return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def from_int(self, n): return n % self.p

    def canonical(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return self.div(x.numerator % self.p, x.denominator % self.p)
        if isinstance(x, int):
            return x % self.p
        raise FieldError(f"not an element of F_{self.p}: {x!r}")

    def parse(self, text):
        s = text.strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise FieldError(f"malformed F_{self.p} element {text!r}")
        n = int(s)
        if not 0 <= n < self.p:
            raise FieldError(f"{text!r} is not a least residue mod {self.p}")
        return n

    def format(self, a):
        return str(a)

    def elements(self):
        return iter(range(self.p))

    def spec(self):
        return {"kind": "prime", "p": self.p}

    def __repr__(self):
        return f"GF({self.p})"


# --- polynomials over F_p, coefficient lists low degree first -------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p of a polynomial given low-degree-first.

    Small cases are decided by trial division by every monic polynomial of
    degree <= n/2; otherwise Rabin's test is used.
    """
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if p ** (n // 2) <= 4096:
        for k in range(1, n // 2 + 1):
            for tail in itertools.product(range(p), repeat=k):
                g = list(tail) + [1]
                if not _pmod(f, g, p):
                    return False
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**n, f, p), _pmod(x, f, p), p):
        return False
    for q in _prime_factors(n):
        h = _psub(_ppowmod(x, p ** (n // q), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def find_irreducible(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible of degree n in lexicographic order of tails."""
    for tail in itertools.product(range(p), repeat=n):
        c = list(reversed(tail)) + [1]
        if is_irreducible(c, p):
            return tuple(c)
    raise FieldError(f"no irreducible of degree {n} over F_{p}")


class ExtensionField(Field):
    """F_p[a]/(f) for a monic irreducible f of degree n."""

    def __init__(self, p: int, modulus: Sequence[int]):
        if not (is_prime(p) and p < 2**31):
            raise FieldError(f"p = {p!r} is not a prime below 2^31")
        m = _trim([int(c) % p for c in modulus])
        if len(m) < 2:
            raise FieldError("extension modulus must have degree >= 1")
        inv_lead = pow(m[-1], -1, p)
        m = [(c * inv_lead) % p for c in m]
        if not is_irreducible(m, p):
            raise FieldError(f"{m} is reducible over F_{p}")
        self.p = p
        self.modulus = tuple(m)
        self.degree = len(m) - 1
        self.characteristic = p
        self.order = p ** self.degree
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)

    def _pack(self, c: list[int]) -> tuple:
        c = list(c) + [0] * (self.degree - len(c))
        return tuple(c)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        return self._pack(_pmod(_pmul(list(a), list(b), self.p), list(self.modulus), self.p))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of 0")
        p = self.p
        # extended Euclid: track s with s*a == r (mod f)
        r0, r1 = list(self.modulus), _trim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            lead = pow(r1[-1], -1, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1):
                c = (r[-1] * lead) % p
                shift = len(r) - len(r1)
                q[shift] = c
                for i, v in enumerate(r1):
                    r[shift + i] = (r[shift + i] - c * v) % p
                _trim(r)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(_trim(q), s1, p), p)
        c = pow(r1[0], -1, p)
        return self._pack([(x * c) % p for x in s1])

    def from_int(self, n):
        return self._pack([n % self.p])

    def canonical(self, x):
        if isinstance(x, (tuple, list)):
            return self._pack(_pmod(list(x), list(self.modulus), self.p))
        if isinstance(x, int):
            return self.from_int(x)
        raise FieldError(f"not an element of {self}: {x!r}")

    def parse(self, text):
        s = text.strip()
        if re.fullmatch(r"[+-]?\d+", s):
            n = int(s)
            if not 0 <= n < self.p:
                raise FieldError(f"{text!r} is not a least residue mod {self.p}")
            return self.from_int(n)
        m = re.fullmatch(r"\[\s*(\d+(?:\s*,\s*\d+)*)?\s*\]", s)
        if not m:
            raise FieldError(f"malformed extension element {text!r}")
        coeffs = [int(c) for c in m.group(1).split(",")] if m.group(1) else []
        if len(coeffs) > self.degree or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"{text!r} is not a reduced coefficient list")
        return self._pack(coeffs)

    def format(self, a):
        return "[" + ",".join(str(c) for c in a) + "]"

    def elements(self):
        return iter(itertools.product(range(self.p), repeat=self.degree))

    def spec(self):
        return {"kind": "extension", "p": self.p, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"


QQ = Rationals()


def GF(p: int, n: int = 1) -> Field:
    """Finite field of order p**n (prime field when n == 1)."""
    if n == 1:
        return PrimeField(p)
    return ExtensionField(p, find_irreducible(p, n))


def field_from_spec(spec: dict) -> Field:
    kind = spec.get("kind")
    if kind == "rationals":
        return QQ
    if kind == "prime":
        return PrimeField(int(spec["p"]))
    if kind == "extension":
        return ExtensionField(int(spec["p"]), [int(c) for c in spec["modulus"]])
    raise FieldError(f"unknown field kind {kind!r}")


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: Any

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, o):
        if isinstance(o, Scalar):
            if o.field != self.field:
                raise FieldError("mixed fields")
            return o.value
        return self.field.coerce(o)

    def __add__(self, o): return Scalar(self.field, self.field.add(self.value, self._other(o)))
    def __sub__(self, o): return Scalar(self.field, self.field.sub(self.value, self._other(o)))
    def __mul__(self, o): return Scalar(self.field, self.field.mul(self.value, self._other(o)))
    def __truediv__(self, o): return Scalar(self.field, self.field.div(self.value, self._other(o)))
    def __neg__(self): return Scalar(self.field, self.field.neg(self.value))
    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def __str__(self):
        return self.field.format(self.value)
