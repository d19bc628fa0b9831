"""Exact arithmetic in small finite fields GF(p^alpha), univariate
polynomials, reduced rational functions, and local power-series expansions
at places of the projective line.

Canonical conventions used by every downstream module and serialized file:

* An element with polynomial-basis coefficients (c_0, ..., c_{alpha-1}) over
  GF(p) is encoded as the integer sum(c_i * p**i). Elements enumerate in
  ascending encoding order, so 0 is the zero element and 1 the one element.
* The field modulus is the least monic irreducible polynomial of degree
  alpha over GF(p), comparing coefficient tuples constant term first. This
  rule is deterministic and needs no external tables; serialized elements
  are portable between runs.
* Polynomials serialize as comma-separated encoded coefficients, constant
  term first. The zero polynomial serializes as the empty string and its
  degree is None (never -1), so accidental arithmetic on it fails loudly.

All values are immutable after construction and all operations are pure, so
everything here is safe to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError

FIELD_SIZE_CAP = 1 << 20
_LOG_TABLE_LIMIT = 1 << 16


class _Infinity:
    """Singleton marker for the value/place at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Infinity()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of n >= 1, ascending."""
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
    return tuple(out)


# ---------------------------------------------------------------------------
# Plain polynomials over GF(p) (coefficient lists of ints mod p), used only
# to find the canonical modulus before any FieldSpec exists.

def _pp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pp_trim(out)


def _pp_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        if factor:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - factor * mi) % p
        a.pop()
        _pp_trim(a)
        if not a:
            break
    return a


def _pp_powmod(base, e, m, p):
    result = [1]
    base = _pp_mod(base, m, p)
    while e:
        if e & 1:
            result = _pp_mod(_pp_mul(result, base, p), m, p)
        base = _pp_mod(_pp_mul(base, base, p), m, p)
        e >>= 1
    return result


def _pp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pp_mod(a, b, p)
    return a


def _pp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _pp_trim(out)


def _pp_is_irreducible(m, p):
    """Rabin test: m monic of degree d is irreducible over GF(p)."""
    d = len(m) - 1
    x = [0, 1]
    if _pp_sub(_pp_powmod(x, p ** d, m, p), x, p):
        return False
    for r in prime_factors(d):
        diff = _pp_sub(_pp_powmod(x, p ** (d // r), m, p), x, p)
        g = _pp_gcd(list(m), diff, p)
        if len(g) - 1 != 0:
            return False
    return True


def _least_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Least monic irreducible of the given degree, coefficient tuples
    compared constant term first."""
    if degree == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=degree):
        cand = list(tail) + [1]
        if _pp_is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# Field of q = p^alpha elements, operating on canonical integer encodings.

class FieldSpec:
    """Finite field GF(p^alpha) with arithmetic on encoded elements.

    The low-level methods (add, mul, ...) take and return integer encodings;
    the FieldElement wrapper provides operator syntax on top of them.
    """

    __slots__ = ("p", "degree", "modulus", "q", "_digits", "_xpow", "_exp", "_log")

    def __init__(self, p: int, degree: int, modulus: tuple[int, ...]):
        self.p = p
        self.degree = degree
        self.modulus = modulus
        self.q = p ** degree
        self._digits = None
        self._exp = None
        self._log = None
        # reductions of x^k mod modulus for k = degree .. 2*degree-2
        red = []
        cur = [(-modulus[i]) % p for i in range(degree)]  # x^degree
        red.append(tuple(cur))
        for _ in range(degree - 2):
            nxt = [0] * degree
            top = cur[degree - 1]
            for i in range(degree - 1):
                nxt[i + 1] = cur[i]
            if top:
                for i in range(degree):
                    nxt[i] = (nxt[i] + top * red[0][i]) % p
            red.append(tuple(nxt))
            cur = nxt
        self._xpow = tuple(red)

    # -- encoding ----------------------------------------------------------

    def decode(self, code: int) -> tuple[int, ...]:
        if self._digits is None and self.q <= _LOG_TABLE_LIMIT:
            self._build_digits()
        if self._digits is not None:
            return self._digits[code]
        return self._decode_slow(code)

    def _decode_slow(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def _build_digits(self):
        p, d = self.p, self.degree
        digits = []
        for code in range(self.q):
            row = []
            c = code
            for _ in range(d):
                c, r = divmod(c, p)
                row.append(r)
            digits.append(tuple(row))
        self._digits = tuple(digits)

    def encode(self, digits) -> int:
        p = self.p
        code = 0
        for c in reversed(tuple(digits)):
            code = code * p + (c % p)
        return code

    # -- arithmetic on encodings -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self.decode(a), self.decode(b)
        p = self.p
        return self.encode([(x + y) % p for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self.decode(a), self.decode(b)
        p = self.p
        return self.encode([(x - y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.encode([(-x) % self.p for x in self.decode(a)])

    def _mul_slow(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        p, d = self.p, self.degree
        da, db = self.decode(a), self.decode(b)
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = self._xpow[k - d]
                for i in range(d):
                    out[i] = (out[i] + c * row[i]) % p
        return self.encode(out)

    def _build_log(self):
        q = self.q
        facs = prime_factors(q - 1) if q > 2 else ()
        gen = None
        for cand in range(2, q):
            if all(self._pow_slow(cand, (q - 1) // r) != 1 for r in facs):
                gen = cand
                break
        if gen is None:
            gen = 1  # q == 2
        exp = [1] * (q - 1)
        cur = 1
        for k in range(1, q - 1):
            cur = self._mul_slow(cur, gen)
            exp[k] = cur
        log = [0] * q
        for k, v in enumerate(exp):
            log[v] = k
        self._exp = exp
        self._log = log

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.degree == 1:
            return (a * b) % self.p
        if self._exp is None:
            if self.q <= _LOG_TABLE_LIMIT:
                self._build_log()
            else:
                return self._mul_slow(a, b)
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.degree == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is None and self.q <= _LOG_TABLE_LIMIT:
            self._build_log()
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._pow_slow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.degree == 1:
            return pow(a, e, self.p)
        if self._exp is None and self.q <= _LOG_TABLE_LIMIT:
            self._build_log()
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_slow(a, e)

    # -- element layer -------------------------------------------------------

    def element(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise PreconditionError("element belongs to a different field")
            return x
        if isinstance(x, int):
            if not 0 <= x < self.q:
                raise PreconditionError(f"encoding {x} out of range for GF({self.q})")
            return FieldElement(self, x)
        code = self.encode(x)
        if not 0 <= code < self.q:
            raise PreconditionError("coefficients out of range")
        return FieldElement(self, code)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self):
        """All elements in canonical ascending encoding order."""
        for code in range(self.q):
            yield FieldElement(self, code)

    def __repr__(self):
        return f"GF({self.q})"


class FieldElement:
    """Immutable field element; arithmetic requires both operands to share
    the owning field. Plain ints in expressions are read as encodings."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise PreconditionError("mixed fields in arithmetic")
            return other.code
        if isinstance(other, int):
            if not 0 <= other < self.field.q:
                raise PreconditionError("encoding out of range")
            return other
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.code, c))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(c, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __int__(self):
        return self.code

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FieldElement({self.code}, GF({self.field.q}))"


@lru_cache(maxsize=None)
def make_field(p: int, alpha: int) -> FieldSpec:
    """The field GF(p^alpha) with the canonical modulus.

    Cached, so repeated calls return the same object and identity checks
    between element owners are meaningful.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")
    if not isinstance(alpha, int) or alpha <= 0:
        raise PreconditionError(f"alpha = {alpha} must be a positive integer")
    if p ** alpha > FIELD_SIZE_CAP:
        raise PreconditionError(f"p^alpha = {p ** alpha} exceeds the size cap {FIELD_SIZE_CAP}")
    return FieldSpec(p, alpha, _least_irreducible(p, alpha))


def make_field_q(q: int) -> FieldSpec:
    """The field of order q, for q a prime power."""
    facs = prime_factors(q)
    if len(facs) != 1:
        raise PreconditionError(f"{q} is not a prime power")
    p = facs[0]
    alpha = 0
    n = q
    while n > 1:
        n //= p
        alpha += 1
    if p ** alpha != q:
        raise PreconditionError(f"{q} is not a prime power")
    return make_field(p, alpha)


# ---------------------------------------------------------------------------
# Polynomials over a FieldSpec. Coefficients are encoded ints, constant term
# first, with no trailing zeros.

class Polynomial:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = [c.code if isinstance(c, FieldElement) else int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not 0 <= c < field.q:
                raise PreconditionError("polynomial coefficient out of range")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, code):
        return cls(field, (code,))

    @classmethod
    def monomial(cls, field, k, code=1):
        return cls(field, (0,) * k + (code,))

    # -- basic queries --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree as an int; None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lead(self) -> int:
        if not self.coeffs:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def key(self):
        """Canonical sort key: degree first, then coefficients constant
        term first."""
        return (len(self.coeffs), self.coeffs)

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise PreconditionError("expected a Polynomial")
        if other.field is not self.field:
            raise PreconditionError("mixed fields in polynomial arithmetic")

    def __add__(self, other):
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Polynomial(F, out)

    def __sub__(self, other):
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            x = self.coeffs[i] if i < len(self.coeffs) else 0
            y = other.coeffs[i] if i < len(other.coeffs) else 0
            out.append(F.sub(x, y))
        return Polynomial(F, out)

    def __neg__(self):
        F = self.field
        return Polynomial(F, [F.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        F = self.field
        if self.is_zero or other.is_zero:
            return Polynomial.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Polynomial(F, out)

    def scale(self, code: int):
        F = self.field
        if code == 0:
            return Polynomial.zero(F)
        return Polynomial(F, [F.mul(c, code) for c in self.coeffs])

    def shift(self, k: int):
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Polynomial(self.field, (0,) * k + self.coeffs)

    def __pow__(self, e: int):
        if e < 0:
            raise PreconditionError("negative polynomial power")
        result = Polynomial.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(F), self
        quot = [0] * (dq + 1)
        inv_lead = F.inv(other.lead)
        for k in range(dq, -1, -1):
            top = rem[k + len(other.coeffs) - 1]
            if top:
                factor = F.mul(top, inv_lead)
                quot[k] = factor
                for i, c in enumerate(other.coeffs):
                    if c:
                        rem[k + i] = F.sub(rem[k + i], F.mul(factor, c))
        return Polynomial(F, quot), Polynomial(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        """Monic greatest common divisor."""
        self._check(other)
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        if a.is_zero:
            return a
        return a.monic()

    def monic(self):
        if self.is_zero:
            raise PreconditionError("cannot normalize the zero polynomial")
        if self.lead == 1:
            return self
        return self.scale(self.field.inv(self.lead))

    def __call__(self, a: int) -> int:
        """Evaluate at the encoded element a (Horner)."""
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def shifted_coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficients of self(a + t) as a polynomial in t."""
        F = self.field
        cur = list(self.coeffs)
        out = []
        while cur:
            # synthetic division of cur by (x - a): remainder is cur(a)
            q = [0] * (len(cur) - 1)
            acc = 0
            for k in range(len(cur) - 1, 0, -1):
                acc = F.add(cur[k], F.mul(a, acc))
                q[k - 1] = acc
            rem = F.add(cur[0], F.mul(a, q[0])) if q else cur[0]
            out.append(rem)
            cur = q
        return tuple(out)

    def reversed_coeffs(self) -> tuple[int, ...]:
        """Coefficients of x^deg * self(1/x) (the reciprocal polynomial)."""
        return tuple(reversed(self.coeffs))

    # -- misc --------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((id(self.field), self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, field, text: str):
        text = text.strip()
        if not text:
            return cls.zero(field)
        return cls(field, [int(t) for t in text.split(",")])

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("x" if c == 1 else f"{c}*x")
            else:
                terms.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


def factor_multiplicity(poly: Polynomial, pi: Polynomial) -> int:
    """Multiplicity of the factor pi in poly (poly nonzero, deg pi >= 1)."""
    if poly.is_zero:
        raise PreconditionError("zero polynomial has no finite factor multiplicity")
    if pi.is_zero or pi.degree == 0:
        raise PreconditionError("factor must have positive degree")
    mult = 0
    while True:
        q, r = divmod(poly, pi)
        if not r.is_zero:
            return mult
        mult += 1
        poly = q
        if poly.is_zero:
            return mult


def linear_poly(field: FieldSpec, a: int) -> Polynomial:
    """The monic linear polynomial x - a."""
    return Polynomial(field, (field.neg(a), 1))


# ---------------------------------------------------------------------------
# Reduced rational functions u/v (gcd 1, v monic).

class RationalFunction:
    """Reduced ratio of polynomials. Construction always cancels the gcd and
    normalizes the denominator to be monic, so equality is structural."""

    __slots__ = ("numer", "denom", "_hash")

    def __init__(self, numer: Polynomial, denom: Polynomial):
        if denom.is_zero:
            raise PreconditionError("zero denominator")
        if numer.field is not denom.field:
            raise PreconditionError("mixed fields in rational function")
        if numer.is_zero:
            numer = Polynomial.zero(numer.field)
            denom = Polynomial.one(numer.field)
        else:
            g = numer.gcd(denom)
            if g.degree and g.degree > 0:
                numer = numer // g
                denom = denom // g
            if denom.lead != 1:
                inv = numer.field.inv(denom.lead)
                numer = numer.scale(inv)
                denom = denom.scale(inv)
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def zero(cls, field):
        return cls(Polynomial.zero(field), Polynomial.one(field))

    @classmethod
    def one(cls, field):
        return cls(Polynomial.one(field), Polynomial.one(field))

    @classmethod
    def constant(cls, field, code):
        return cls(Polynomial.constant(field, code), Polynomial.one(field))

    @classmethod
    def x(cls, field):
        return cls(Polynomial.x(field), Polynomial.one(field))

    @classmethod
    def from_poly(cls, poly):
        return cls(poly, Polynomial.one(poly.field))

    @property
    def field(self):
        return self.numer.field

    @property
    def is_zero(self):
        return self.numer.is_zero

    @property
    def is_poly(self):
        return self.denom.degree == 0

    @property
    def degree(self):
        """max(deg numer, deg denom); None for the zero function."""
        if self.is_zero:
            return None
        return max(self.numer.degree, self.denom.degree)

    def __add__(self, other):
        return RationalFunction(
            self.numer * other.denom + other.numer * self.denom,
            self.denom * other.denom,
        )

    def __sub__(self, other):
        return RationalFunction(
            self.numer * other.denom - other.numer * self.denom,
            self.denom * other.denom,
        )

    def __neg__(self):
        return RationalFunction(-self.numer, self.denom)

    def __mul__(self, other):
        return RationalFunction(self.numer * other.numer, self.denom * other.denom)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.numer * other.denom, self.denom * other.numer)

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.denom, self.numer)

    def scale(self, code: int):
        return RationalFunction(self.numer.scale(code), self.denom)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.numer ** e, self.denom ** e)

    def evaluate(self, a: int):
        """Value at the finite point a: an encoded element, or INF at a pole."""
        vd = self.denom(a)
        if vd == 0:
            return INF
        return self.field.div(self.numer(a), vd)

    def evaluate_at_infinity(self):
        if self.is_zero:
            return 0
        du, dv = self.numer.degree, self.denom.degree
        if du > dv:
            return INF
        if du < dv:
            return 0
        return self.field.div(self.numer.lead, self.denom.lead)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and other.numer == self.numer
            and other.denom == self.denom
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.numer, self.denom))
            object.__setattr__(self, "_hash", h)
        return h

    def serialize(self) -> str:
        return f"{self.numer.serialize()}/{self.denom.serialize()}"

    @classmethod
    def parse(cls, field, text: str):
        u, v = text.split("/")
        return cls(Polynomial.parse(field, u), Polynomial.parse(field, v))

    def __repr__(self):
        return f"Rat({self.numer!r}/{self.denom!r})"


def reduce_fraction(numer: Polynomial, denom: Polynomial) -> RationalFunction:
    """Canonical reduced form of numer/denom (gcd cancelled, monic
    denominator)."""
    return RationalFunction(numer, denom)


# ---------------------------------------------------------------------------
# Valuations and local expansions at places of the projective line. A place
# is a monic irreducible polynomial (degree 1 places are the finite rational
# points) or INF with uniformizer 1/x.

def rational_valuation(f: RationalFunction, at) -> int:
    """Valuation of a nonzero f at a place (monic irreducible or INF).

    Computed by factor multiplicity in numerator and denominator, so no
    extension-field arithmetic is needed at higher-degree places.
    """
    if f.is_zero:
        raise PreconditionError("the zero function has no valuation")
    if at is INF:
        return f.denom.degree - f.numer.degree
    return factor_multiplicity(f.numer, at) - factor_multiplicity(f.denom, at)


def _series_div_field(F: FieldSpec, num, den, k):
    """First k coefficients of the power series num/den; den[0] invertible."""
    if k <= 0:
        return []
    inv0 = F.inv(den[0])
    out = []
    for n in range(k):
        acc = num[n] if n < len(num) else 0
        for i in range(1, min(n, len(den) - 1) + 1):
            acc = F.sub(acc, F.mul(den[i], out[n - i]))
        out.append(F.mul(acc, inv0))
    return out


@dataclass(frozen=True)
class LocalExpansion:
    """Truncated expansion of a function in the canonical uniformizer of a
    place. Coefficients are encoded ints at degree-1 places and at INF; at a
    higher-degree place they are the residue digits, polynomials of degree
    below the place degree."""

    at: object
    coeffs: tuple

    def valuation_lower_bound(self) -> int:
        for i, c in enumerate(self.coeffs):
            nonzero = (not c.is_zero) if isinstance(c, Polynomial) else c != 0
            if nonzero:
                return i
        return len(self.coeffs)


def local_expand(f: RationalFunction, at, r_max: int) -> LocalExpansion:
    """Expansion of f to order r_max at a place where f is regular.

    Raises PreconditionError when f has a pole there; expand the inverse
    instead for the projective-value conventions.
    """
    if r_max < 0:
        raise PreconditionError("r_max must be nonnegative")
    F = f.field
    if f.is_zero:
        if at is not INF and at.degree > 1:
            return LocalExpansion(at, tuple(Polynomial.zero(F) for _ in range(r_max + 1)))
        return LocalExpansion(at, (0,) * (r_max + 1))
    if at is INF:
        du, dv = f.numer.degree, f.denom.degree
        if du > dv:
            raise PreconditionError("pole at infinity; expand the inverse")
        shift = dv - du
        num = list(f.numer.reversed_coeffs())
        den = list(f.denom.reversed_coeffs())
        body = _series_div_field(F, num, den, r_max + 1 - shift)
        return LocalExpansion(INF, tuple([0] * shift + body)[: r_max + 1])
    if at.degree == 1:
        a = F.neg(at.coeffs[0])  # at = x - a
        if f.denom(a) == 0:
            raise PreconditionError("pole at the place; expand the inverse")
        num = list(f.numer.shifted_coeffs(a))
        den = list(f.denom.shifted_coeffs(a))
        return LocalExpansion(at, tuple(_series_div_field(F, num, den, r_max + 1)))
    # higher-degree place: digits of the pi-adic expansion
    pi = at
    u, v = f.numer, f.denom
    if (v % pi).is_zero:
        raise PreconditionError("pole at the place; expand the inverse")
    v_inv = _poly_inverse_mod(v % pi, pi)
    digits = []
    for _ in range(r_max + 1):
        d = ((u % pi) * v_inv) % pi
        digits.append(d)
        u = (u - d * v) // pi
    return LocalExpansion(pi, tuple(digits))


def _poly_inverse_mod(a: Polynomial, m: Polynomial) -> Polynomial:
    """Inverse of a modulo m (gcd(a, m) = 1) by extended Euclid."""
    F = a.field
    r0, r1 = m, a % m
    s0, s1 = Polynomial.zero(F), Polynomial.one(F)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise PreconditionError("element not invertible modulo the place")
    return (s0 % m).scale(F.inv(r0.coeffs[0]))


# ---------------------------------------------------------------------------
# Irreducible enumeration (complete and sorted) for place bookkeeping.

@lru_cache(maxsize=None)
def enumerate_irreducibles(field: FieldSpec, max_degree: int) -> tuple[Polynomial, ...]:
    """All monic irreducibles of degree <= max_degree, sorted by degree then
    by coefficient tuple, constant term first."""
    if max_degree < 1:
        raise PreconditionError("max_degree must be at least 1")
    q = field.q
    if q ** max_degree > FIELD_SIZE_CAP:
        raise PreconditionError("irreducible enumeration too large")
    found: list[Polynomial] = []
    by_degree: dict[int, list[Polynomial]] = {}
    for d in range(1, max_degree + 1):
        level = []
        for tail in itertools.product(range(q), repeat=d):
            cand = Polynomial(field, tail + (1,))
            if d == 1:
                level.append(cand)
                continue
            if cand.coeffs[0] == 0:
                continue  # divisible by x
            if any(cand(a) == 0 for a in range(q)):
                continue  # has a linear factor
            composite = False
            for e in range(2, d // 2 + 1):
                for pi in by_degree.get(e, ()):
                    if (cand % pi).is_zero:
                        composite = True
                        break
                if composite:
                    break
            if not composite:
                level.append(cand)
        by_degree[d] = level
        found.extend(level)
    return tuple(found)


def factorize(poly: Polynomial) -> dict[Polynomial, int]:
    """Factor a nonzero polynomial into monic irreducibles with
    multiplicities (the leading unit is dropped)."""
    if poly.is_zero:
        raise PreconditionError("cannot factor the zero polynomial")
    out: dict[Polynomial, int] = {}
    work = poly.monic()
    if work.degree == 0:
        return out
    for pi in enumerate_irreducibles(poly.field, work.degree):
        if work.degree == 0:
            break
        if pi.degree > work.degree:
            break
        m = 0
        while True:
            qt, r = divmod(work, pi)
            if not r.is_zero:
                break
            work = qt
            m += 1
        if m:
            out[pi] = m
    if work.degree != 0:
        raise AssertionError("incomplete factorization")
    return out


# ---------------------------------------------------------------------------
# Residue field k[x]/pi: the concrete model of GF(q^e) used when a value or
# valuation must be taken at a representative geometric point of a
# higher-degree place. The representative point is the class of x itself.

class ResidueField:
    """Arithmetic in k[x]/(pi); elements are coefficient tuples of length
    below deg(pi)."""

    __slots__ = ("base", "pi", "e")

    def __init__(self, pi: Polynomial):
        if pi.degree is None or pi.degree < 1 or not pi.is_monic:
            raise PreconditionError("place polynomial must be monic of positive degree")
        self.base = pi.field
        self.pi = pi
        self.e = pi.degree

    def embed(self, code: int) -> tuple:
        return (code,) if code else ()

    def xbar(self) -> tuple:
        """The class of x: the canonical representative root of pi."""
        if self.e == 1:
            return self.embed(self.base.neg(self.pi.coeffs[0]))
        return (0, 1)

    def from_poly(self, p: Polynomial) -> tuple:
        return (p % self.pi).coeffs

    def _poly(self, a: tuple) -> Polynomial:
        return Polynomial(self.base, a)

    def add(self, a, b):
        return (self._poly(a) + self._poly(b)).coeffs

    def sub(self, a, b):
        return (self._poly(a) - self._poly(b)).coeffs

    def mul(self, a, b):
        return ((self._poly(a) * self._poly(b)) % self.pi).coeffs

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero residue")
        return _poly_inverse_mod(self._poly(a), self.pi).coeffs

    def is_zero(self, a) -> bool:
        return not a

    def lift_poly_coeffs(self, p: Polynomial) -> list:
        return [self.embed(c) for c in p.coeffs]

    def eval_poly(self, p: Polynomial, point: tuple) -> tuple:
        acc: tuple = ()
        for c in reversed(p.coeffs):
            acc = self.add(self.mul(acc, point), self.embed(c))
        return acc

    def root_multiplicity(self, p: Polynomial, point: tuple) -> int:
        """Multiplicity of the given residue-field point as a root of the
        lifted polynomial p, by repeated synthetic division."""
        if p.is_zero:
            raise PreconditionError("zero polynomial")
        coeffs = self.lift_poly_coeffs(p)
        mult = 0
        while len(coeffs) > 1:
            quot = [()] * (len(coeffs) - 1)
            acc: tuple = ()
            for k in range(len(coeffs) - 1, 0, -1):
                acc = self.add(coeffs[k], self.mul(point, acc))
                quot[k - 1] = acc
            rem = self.add(coeffs[0], self.mul(point, quot[0]))
            if not self.is_zero(rem):
                return mult
            mult += 1
            coeffs = quot
        return mult
