"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored on the power basis 1, zeta_N, ..., zeta_N^(phi(N)-1)
after reduction by the N-th cyclotomic polynomial.  Coordinates are kept as
a tuple of integer numerators over one positive common denominator, which is
much cheaper than a tuple of Fractions and still canonical.
"""

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, lcm

from .errors import NotCoprime, NotInSubfield, NotIntegral, SchemaError

__all__ = [
    "INFINITY",
    "CycNumber",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
    "galois_apply",
    "descend",
    "lift",
    "congruence_valuation",
    "p_valuation",
    "from_exponents",
]


@total_ordering
class _Infinity:
    """Valuation of zero; compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("unram_lab.INFINITY")

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def p_valuation(n, p):
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic polynomials need n >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, cyclotomic_poly(d))
    return tuple(num)


def _divide_exact(num, den):
    # den is monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        out[i - dn] = c
        if c:
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    assert not any(num[:dn]), "non-exact cyclotomic division"
    return out


def euler_phi(n):
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_rows(n):
    """Row t is the sparse reduced form ((i, c), ...) of zeta_n^t, 0 <= t < n."""
    phi = euler_phi(n)
    poly = cyclotomic_poly(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for t in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        # multiply by x and reduce x^phi = -sum poly[i] x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _normalized_traces(n):
    """tr(zeta_n^i) / phi(n) for the basis elements; invariant under lifting."""
    phi = euler_phi(n)
    out = []
    for i in range(phi):
        d = n // gcd(i, n)
        out.append(Fraction(_moebius(d), euler_phi(d)))
    return tuple(out)


def _moebius(n):
    res = 1
    q = 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            res = -res
        q += 1
    if n > 1:
        res = -res
    return res


class CycNumber:
    """Immutable element of Q(zeta_N).

    ``coeffs`` are the rational coordinates on the power basis; the stored
    form is canonical for a fixed conductor, so equality at equal conductors
    is tuple equality.  Equality across conductors lifts to the lcm.
    """

    __slots__ = ("conductor", "_num", "_den")

    def __init__(self, conductor, coeffs=None):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError("conductor must be positive")
        phi = euler_phi(conductor)
        if coeffs is None:
            coeffs = [0] * phi
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {conductor}")
        den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        num = tuple(int(c * den) for c in coeffs)
        self._set(conductor, num, den)

    def _set(self, conductor, num, den):
        g = gcd(den, *num) if num else den
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    @classmethod
    def _raw(cls, conductor, num, den=1):
        obj = cls.__new__(cls)
        obj._set(conductor, tuple(num), den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycNumber is immutable")

    @classmethod
    def rational(cls, value, conductor=1):
        value = Fraction(value)
        num = [0] * euler_phi(conductor)
        num[0] = value.numerator
        return cls._raw(conductor, num, value.denominator)

    @property
    def coeffs(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self):
        return self._num

    @property
    def denominator(self):
        return self._den

    def is_zero(self):
        return not any(self._num)

    def is_rational(self):
        return not any(self._num[1:])

    def is_integral(self):
        return self._den == 1

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.rational(other, self.conductor)
        return NotImplemented

    def _common(self, other):
        n = lcm(self.conductor, other.conductor)
        return lift(self, n), lift(other, n), n

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, n = self._common(other)
        den = lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return CycNumber._raw(n, [x * fa + y * fb for x, y in zip(a._num, b._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._raw(self.conductor, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNumber._raw(
                self.conductor,
                [c * other.numerator for c in self._num],
                self._den * other.denominator,
            )
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b, n = self._common(other)
        rows = _power_rows(n)
        acc = [0] * euler_phi(n)
        for i, x in enumerate(a._num):
            if not x:
                continue
            for j, y in enumerate(b._num):
                if not y:
                    continue
                xy = x * y
                for k, c in rows[(i + j) % n]:
                    acc[k] += xy * c
        return CycNumber._raw(n, acc, a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def conjugate(self):
        return galois_apply(self, -1)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        if self.conductor == other.conductor:
            return self._den == other._den and self._num == other._num
        a, b, _ = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self._num[0], self._den))
        tr = _normalized_traces(self.conductor)
        return hash(sum(c * t for c, t in zip(self._num, tr) if c) / self._den)

    def sort_key(self):
        return (self.conductor, self._num, self._den)

    # -- presentation -----------------------------------------------------

    def __repr__(self):
        return f"CycNumber({self.conductor}, {self.format()!r})"

    def format(self):
        """Polynomial in ``z{N}``, highest power first, e.g. ``z3^2+1``."""
        terms = []
        for i in range(len(self._num) - 1, -1, -1):
            c = Fraction(self._num[i], self._den)
            if not c:
                continue
            if i == 0:
                body = str(abs(c))
            else:
                mono = f"z{self.conductor}" + (f"^{i}" if i > 1 else "")
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = "".join(s + b for s, b in terms)
        return out[1:] if out[0] == "+" else out

    __str__ = format

    def to_json(self):
        coeffs = []
        for c in self.coeffs:
            coeffs.append(c.numerator if c.denominator == 1 else [c.numerator, c.denominator])
        return {"conductor": self.conductor, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, bool):
            raise SchemaError(f"not a cyclotomic number: {data!r}")
        if isinstance(data, int):
            return cls.rational(data)
        if not isinstance(data, dict) or set(data) != {"conductor", "coeffs"}:
            raise SchemaError(f"not a cyclotomic number: {data!r}")
        n, raw = data["conductor"], data["coeffs"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1 or not isinstance(raw, list):
            raise SchemaError(f"bad cyclotomic number: {data!r}")
        coeffs = []
        for c in raw:
            if isinstance(c, int) and not isinstance(c, bool):
                coeffs.append(Fraction(c))
            elif (
                isinstance(c, list)
                and len(c) == 2
                and all(isinstance(t, int) and not isinstance(t, bool) for t in c)
                and c[1] != 0
            ):
                coeffs.append(Fraction(c[0], c[1]))
            else:
                raise SchemaError(f"bad coefficient {c!r}")
        if len(coeffs) != euler_phi(n):
            raise SchemaError(f"conductor {n} needs {euler_phi(n)} coefficients, got {len(coeffs)}")
        return cls(n, coeffs)


def root_of_unity(n, k=1):
    """zeta_n^k in canonical form at conductor n."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [0] * euler_phi(n)
    for i, c in _power_rows(n)[k % n]:
        num[i] = c
    return CycNumber._raw(n, num)


def from_exponents(n, exponents):
    """Sum of zeta_n^t over an iterable of (t, multiplicity) pairs."""
    rows = _power_rows(n)
    acc = [0] * euler_phi(n)
    for t, mult in exponents:
        if mult:
            for i, c in rows[t % n]:
                acc[i] += mult * c
    return CycNumber._raw(n, acc)


def lift(x, n):
    """Re-express x at conductor n (a multiple of x.conductor)."""
    if n == x.conductor:
        return x
    if n % x.conductor:
        raise ValueError(f"cannot lift conductor {x.conductor} to {n}")
    step = n // x.conductor
    rows = _power_rows(n)
    acc = [0] * euler_phi(n)
    for i, c in enumerate(x._num):
        if c:
            for k, d in rows[i * step]:
                acc[k] += c * d
    return CycNumber._raw(n, acc, x._den)


def galois_apply(x, s):
    """Image of x under zeta_N -> zeta_N^s."""
    n = x.conductor
    if gcd(s, n) != 1:
        raise NotCoprime(f"gcd({s}, {n}) != 1")
    s %= n
    if s == 1:
        return x
    rows = _power_rows(n)
    acc = [0] * euler_phi(n)
    for i, c in enumerate(x._num):
        if c:
            for k, d in rows[(i * s) % n]:
                acc[k] += c * d
    return CycNumber._raw(n, acc, x._den)


@lru_cache(maxsize=None)
def _descent_solver(n, r):
    """Pivot columns and scaled inverse for writing Q(zeta_n) elements over Q(zeta_r).

    Returns (pivots, inv, scale, basis) where the coordinates over
    zeta_r^i are ``x[pivots] @ inv / scale`` and ``basis`` holds the
    embedded images used for the back-substitution check.
    """
    step = n // r
    phi_n, phi_r = euler_phi(n), euler_phi(r)
    rows = _power_rows(n)
    basis = []
    for i in range(phi_r):
        v = [0] * phi_n
        for k, c in rows[i * step]:
            v[k] = c
        basis.append(v)
    # pivot columns of the row echelon form give an invertible minor
    work = [[Fraction(v) for v in row] for row in basis]
    pivots = []
    lead = 0
    for col in range(phi_n):
        if lead == phi_r:
            break
        p = next((i for i in range(lead, phi_r) if work[i][col]), None)
        if p is None:
            continue
        work[lead], work[p] = work[p], work[lead]
        for i in range(lead + 1, phi_r):
            f = work[i][col] / work[lead][col]
            if f:
                work[i] = [a - f * b for a, b in zip(work[i], work[lead])]
        pivots.append(col)
        lead += 1
    # minor B[:, pivots] (phi_r x phi_r) inverse: solve c B_P = x_P
    minor = [[Fraction(basis[i][j]) for j in pivots] for i in range(phi_r)]
    inv = _invert(minor)
    scale = lcm(*(v.denominator for row in inv for v in row)) if inv else 1
    inv_int = tuple(tuple(int(v * scale) for v in row) for row in inv)
    return tuple(pivots), inv_int, scale, tuple(tuple(b) for b in basis)


def _invert(a):
    n = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[p] = aug[p], aug[c]
        f = aug[c][c]
        aug[c] = [v / f for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                g = aug[r][c]
                aug[r] = [v - g * w for v, w in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def descend(x, r):
    """Re-express x with conductor r, provided x lies in Q(zeta_r)."""
    n = x.conductor
    if r < 1 or n % r:
        raise ValueError(f"{r} does not divide the conductor {n}")
    if r == n:
        return x
    if x.is_rational():
        return CycNumber.rational(x.to_fraction(), r)
    pivots, inv, scale, basis = _descent_solver(n, r)
    xp = [x._num[j] for j in pivots]
    phi_r = len(inv)
    # c_i = sum_j xp_j inv[j][i] / scale   (row vector times matrix)
    c = [sum(xp[j] * inv[j][i] for j in range(phi_r)) for i in range(phi_r)]
    back = [0] * len(x._num)
    for ci, b in zip(c, basis):
        if ci:
            for k, v in enumerate(b):
                if v:
                    back[k] += ci * v
    if any(bk != xk * scale for bk, xk in zip(back, x._num)):
        raise NotInSubfield(f"{x} does not lie in Q(zeta_{r})")
    return CycNumber._raw(r, c, x._den * scale)


def congruence_valuation(x, y, p):
    """Largest m with x - y in p^m Z[zeta_r], r the prime-to-p conductor part.

    Returns INFINITY when x == y.
    """
    if not isinstance(x, CycNumber):
        x = CycNumber.rational(x)
    if not isinstance(y, CycNumber):
        y = CycNumber.rational(y)
    d = x - y
    if d.is_zero():
        return INFINITY
    r = d.conductor
    while r % p == 0:
        r //= p
    d = descend(d, r)
    if not d.is_integral():
        raise NotIntegral(f"{d} is not an algebraic integer")
    return min(p_valuation(c, p) for c in d._num if c)
