"""Arithmetic in the tower F_p <= F_q <= F_{p^M}.

Elements are plain ints ("codes"): the element sum c_i x^i of F_p[x]/(modulus)
is stored as sum c_i p^i, so the code order is the enumeration order used
wherever a deterministic choice is required.  Multiplication goes through
log/exp tables built against the smallest primitive element.
"""

from __future__ import annotations

import string
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DegreeNotDivisible, NoSuchRoot, NotCoprime, NotPrime

Fel = int

_DIGITS = string.digits + string.ascii_lowercase
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# --- dense polynomials over F_p, coefficient lists low degree first -------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p) if p > 2 else 1
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic f (low-degree-first coefficients) over F_p."""
    f = list(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**n, f, p), x, p):
        return False
    for ell in prime_factors(n):
        h = _psub(_ppowmod(x, p ** (n // ell), f, p), x, p)
        g = _pgcd(f, h, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, M: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree M.

    Coefficients below the leading one are read high degree first as base-p
    digits; the returned list is low degree first.
    """
    for tail in range(p**M):
        digits = [(tail // p**k) % p for k in range(M)]  # digits[k] is coeff of x^k
        f = digits + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldCtx:
    """The field F_{p^M} together with the distinguished subfield F_q, q = p^m."""

    def __init__(self, p: int, m: int, M: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1 or M < 1:
            raise DegreeNotDivisible("degrees must be positive")
        if M % m:
            raise DegreeNotDivisible(f"m={m} does not divide M={M}")
        self.p, self.m, self.M = p, m, M
        self.q = p**m
        self.order = p**M
        self.modulus = tuple(modulus) if modulus is not None else tuple(smallest_irreducible(p, M))
        if len(self.modulus) != M + 1 or not is_irreducible(self.modulus, p):
            raise ValueError("modulus must be irreducible of degree M")
        self._digits = [tuple((c // p**k) % p for k in range(M)) for c in range(self.order)]
        self._build_tables()
        self.embedding = self.pow(self.primitive, (self.order - 1) // (self.q - 1))

    # -- construction -----------------------------------------------------
    def _code(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**k for k, d in enumerate(digits))

    def _polymul_code(self, a: int, b: int) -> int:
        prod = _pmulmod(_trim(list(self._digits[a])), _trim(list(self._digits[b])), list(self.modulus), self.p)
        return self._code(prod)

    def _build_tables(self) -> None:
        N = self.order - 1
        targets = prime_factors(N) if N > 1 else []
        for g in range(1, self.order):
            exp = [1] * N
            for k in range(1, N):
                exp[k] = self._polymul_code(exp[k - 1], g)
            # g is primitive iff g^(N/ell) != 1 for every prime ell | N
            if all(exp[N // ell] != 1 for ell in targets):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        self.primitive = g
        self._exp = exp + exp  # doubled to skip a modulo in mul
        self._log = [0] * self.order
        for k in range(N):
            self._log[exp[k]] = k
        if self.p == 2:
            self._add_table = None
        elif self.order <= _ADD_TABLE_LIMIT:
            self._add_table = [[self._add_digits(a, b) for b in range(self.order)] for a in range(self.order)]
        else:
            self._add_table = None

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        return sum(((x + y) % p) * p**k for k, (x, y) in enumerate(zip(self._digits[a], self._digits[b])))

    # -- arithmetic ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        p = self.p
        return sum(((-x) % p) * p**k for k, x in enumerate(self._digits[a]))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def frob(self, a: int, s: int = 1) -> int:
        """a^(p^s); negative s gives the inverse Frobenius."""
        s %= self.M
        if a == 0 or s == 0:
            return a
        return self._exp[(self._log[a] * self.p**s) % (self.order - 1)]

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> F_p -> F_{p^M}."""
        return k % self.p

    def log(self, a: int) -> int:
        return self._log[a]

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    # -- structure ----------------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        """Coordinates of a in the power basis 1, x, ..., x^(M-1)."""
        return list(self._digits[a])

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.M:
            raise ValueError(f"expected {self.M} coordinates")
        return self._code([c % self.p for c in coeffs])

    def basis(self) -> list[int]:
        """F_p-basis x^0, ..., x^(M-1) as codes."""
        return [self.p**k for k in range(self.M)]

    def in_subfield(self, a: int, d: int | None = None) -> bool:
        d = self.m if d is None else d
        return self.frob(a, d) == a

    def subfield(self, d: int) -> list[int]:
        """All elements of F_{p^d}, in code order."""
        if self.M % d:
            raise DegreeNotDivisible(f"{d} does not divide {self.M}")
        return [a for a in range(self.order) if self.frob(a, d) == a]

    @cached_property
    def fq_elements(self) -> list[int]:
        return self.subfield(self.m)

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        N = self.order - 1
        k = self._log[a]
        from math import gcd

        return N // gcd(N, k)

    def nth_roots(self, a: int, n: int) -> list[int]:
        """All b with b^n = a, sorted by code."""
        if a == 0:
            return [0]
        from math import gcd

        N = self.order - 1
        g = gcd(n, N)
        la = self._log[a]
        if la % g:
            return []
        return sorted(b for b in range(1, self.order) if self.pow(b, n) == a)

    def is_nth_power(self, a: int, n: int) -> bool:
        if a == 0:
            return True
        from math import gcd

        return self._log[a] % gcd(n, self.order - 1) == 0

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    # -- serialization ------------------------------------------------------
    def to_str(self, a: int) -> str:
        digits = self._digits[a]
        if self.p <= len(_DIGITS):
            return "".join(_DIGITS[d] for d in reversed(digits))
        return ".".join(str(d) for d in reversed(digits))

    def parse(self, s: str | int) -> int:
        if isinstance(s, int):
            if not 0 <= s < self.order:
                raise ValueError(f"code {s} out of range")
            return s
        s = s.strip()
        if "." in s or self.p > len(_DIGITS):
            parts = [int(t) for t in s.split(".")]
        else:
            parts = [_DIGITS.index(ch) for ch in s.lower()]
        if len(parts) > self.M or any(d >= self.p for d in parts):
            raise ValueError(f"bad field element string {s!r}")
        parts = [0] * (self.M - len(parts)) + parts
        return self._code(list(reversed(parts)))

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "M": self.M}

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, m={self.m}, M={self.M})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.m, self.M, self.modulus) == (
            other.p,
            other.m,
            other.M,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.M, self.modulus))


_CTX_CACHE: dict[tuple[int, int, int], FieldCtx] = {}


def field_create(p: int, m: int, M: int) -> FieldCtx:
    """Build (or fetch the cached) context for F_p <= F_{p^m} <= F_{p^M}."""
    key = (p, m, M)
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = FieldCtx(p, m, M)
    return _CTX_CACHE[key]


def frobenius(ctx: FieldCtx, a: Fel, s: int) -> Fel:
    return ctx.frob(a, s)


def root_of_unity(ctx: FieldCtx, n: int) -> Fel:
    """The fixed primitive n-th root of unity: primitive^((p^M - 1)/n)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % ctx.p == 0:
        raise NotCoprime(f"p={ctx.p} divides n={n}")
    if (ctx.order - 1) % n:
        raise NoSuchRoot(f"{n} does not divide p^M - 1 = {ctx.order - 1}")
    return ctx.pow(ctx.primitive, (ctx.order - 1) // n)
