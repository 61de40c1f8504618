"""Exact sparse multivariate polynomials and arrangement-factored fractions.

Everything downstream (invariant catalogs, primitive-derivation pipeline,
determinant certificates) rests on the guarantee that arithmetic here is
exact.  Coefficients are always ``fractions.Fraction``; nothing is ever
rounded, and equality of polynomials is literal equality of term maps.

Representations:

* ``Poly``: sparse polynomial.  Terms are stored in a dict keyed by a
  packed integer encoding of the exponent vector.  The packing puts the
  total degree in the most significant field, followed by the exponents
  of x1, x2, ... in order, so comparing packed keys as plain integers is
  exactly the graded lexicographic order.  That gives deterministic
  leading terms and deterministic serialization for free.

* ``LinForm``: a nonzero linear form normalised so that its first nonzero
  coefficient is +1 (the canonical representative of a hyperplane's
  defining form, which is otherwise only determined up to a scalar).

* ``ArrFrac``: a rational function whose denominator is kept factored as
  a product of irreducible polynomials (linear forms for the classical
  arrangements, plus the few irreducible orbit factors of the dihedral
  cases).  The numerator is reduced against every denominator factor at
  construction, so pole orders along each hyperplane can be read off the
  exponent map directly.  No general multivariate gcd is needed, or
  implemented: every pole in this problem domain lies along a known
  arrangement factor.

* ``Matrix``: small dense matrices over ``Poly`` or ``ArrFrac``, with an
  exact determinant/adjugate routine (``mat_det_adj``).  The routine
  clears denominators, runs a fraction-free cofactor expansion, and
  reduces every intermediate minor against the arrangement factors.  For
  the Jacobian matrices of the pipeline those minors are divisible by
  high powers of the defining polynomial, so reducing eagerly is what
  keeps intermediate expression swell under control.

All values are immutable after construction; all operations are pure.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as _np

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - declared dependency
    _mpz = int

__all__ = [
    "Poly",
    "LinForm",
    "ArrFrac",
    "Matrix",
    "UnsupportedDenominator",
    "divide_exact",
    "is_constant_multiple",
    "canonical_factor",
    "expand_factor_powers",
    "mat_det_adj",
    "poly_to_records",
    "poly_from_records",
    "frac_to_records",
    "frac_from_records",
    "rat_identity",
    "rat_mat_mul",
    "rat_mat_inv",
    "rat_det",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# ---------------------------------------------------------------------------
# packed exponent keys
# ---------------------------------------------------------------------------

_FIELD = 16
_MASK = (1 << _FIELD) - 1
_MAX_EXP = (1 << (_FIELD - 1)) - 1  # keep the top bit of each field free

_LAYOUTS: dict[int, tuple[tuple[int, ...], int, int]] = {}


def _layout(nvars: int) -> tuple[tuple[int, ...], int, int]:
    """Field layout for packed keys: (variable shifts, degree shift, guard)."""
    cached = _LAYOUTS.get(nvars)
    if cached is None:
        shifts = tuple(_FIELD * (nvars - 1 - i) for i in range(nvars))
        deg_shift = _FIELD * nvars
        guard = 0
        for s in shifts:
            guard |= 1 << (s + _FIELD - 1)
        cached = (shifts, deg_shift, guard)
        _LAYOUTS[nvars] = cached
    return cached


def _pack(exps: Sequence[int], shifts: Sequence[int], deg_shift: int) -> int:
    key = 0
    total = 0
    for e, s in zip(exps, shifts):
        if e < 0 or e > _MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        key |= e << s
        total += e
    return key | (total << deg_shift)


def _unpack(key: int, shifts: Sequence[int]) -> tuple[int, ...]:
    return tuple((key >> s) & _MASK for s in shifts)


class UnsupportedDenominator(ValueError):
    """A division produced a denominator outside the arrangement factors.

    Carries the irreducible residual as a witness.  In the derivation
    pipeline this is unreachable (all determinants are constant multiples
    of powers of the defining polynomial); seeing it means a bug, so it is
    surfaced loudly instead of being generalised away.
    """

    def __init__(self, residual: "Poly"):
        super().__init__(
            f"denominator does not factor over the arrangement forms: {residual}"
        )
        self.residual = residual


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Instances are immutable.  ``_t`` maps packed exponent keys to nonzero
    ``Fraction`` coefficients; the zero polynomial has an empty map.
    """

    __slots__ = ("nvars", "_t", "_hash", "_intform")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], Fraction | int] = ()):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        shifts, deg_shift, _ = _layout(nvars)
        packed: dict[int, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector length does not match nvars")
                c = Fraction(coeff)
                if c:
                    key = _pack(exps, shifts, deg_shift)
                    c0 = packed.get(key)
                    c = c if c0 is None else c0 + c
                    if c:
                        packed[key] = c
                    elif key in packed:
                        del packed[key]
        self.nvars = nvars
        self._t = packed
        self._hash = None
        self._intform = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def _raw(cls, nvars: int, packed: dict[int, Fraction]) -> "Poly":
        p = object.__new__(cls)
        p.nvars = nvars
        p._t = packed
        p._hash = None
        p._intform = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        c = Fraction(value)
        return cls._raw(nvars, {0: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        """The polynomial x_{index+1} (0-based index)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        shifts, deg_shift, _ = _layout(nvars)
        return cls._raw(nvars, {(1 << shifts[index]) | (1 << deg_shift): _ONE})

    # -- inspection -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._t:
            return -1
        _, deg_shift, _ = _layout(self.nvars)
        return max(self._t) >> deg_shift

    def is_homogeneous(self) -> bool:
        if len(self._t) <= 1:
            return True
        _, deg_shift, _ = _layout(self.nvars)
        return (max(self._t) >> deg_shift) == (min(self._t) >> deg_shift)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> Fraction:
        if not self._t:
            return _ZERO
        if len(self._t) == 1 and 0 in self._t:
            return self._t[0]
        raise ValueError(f"not a constant polynomial: {self}")

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms as (exponent tuple, coefficient), leading term first (graded-lex)."""
        shifts, _, _ = _layout(self.nvars)
        return [(_unpack(k, shifts), self._t[k]) for k in sorted(self._t, reverse=True)]

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        shifts, _, _ = _layout(self.nvars)
        k = max(self._t)
        return _unpack(k, shifts), self._t[k]

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        shifts, deg_shift, _ = _layout(self.nvars)
        return self._t.get(_pack(exps, shifts, deg_shift), _ZERO)

    # -- hashing / equality ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._t == other._t

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self._t.items())))
            self._hash = h
        return h

    # -- arithmetic -----------------------------------------------------------

    def _check_compatible(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            a, b = self._t, other._t
            if not a:
                return other
            if not b:
                return self
            out = dict(a)
            for k, c in b.items():
                c0 = out.get(k)
                c = c if c0 is None else c0 + c
                if c:
                    out[k] = c
                elif k in out:
                    del out[k]
            return Poly._raw(self.nvars, out)
        if isinstance(other, (int, Fraction)):
            return self + Poly.const(self.nvars, other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            if not other._t:
                return self
            out = dict(self._t)
            for k, c in other._t.items():
                c0 = out.get(k)
                c = -c if c0 is None else c0 - c
                if c:
                    out[k] = c
                elif k in out:
                    del out[k]
            return Poly._raw(self.nvars, out)
        if isinstance(other, (int, Fraction)):
            return self - Poly.const(self.nvars, other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {k: -c for k, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            return _mul_poly(self, other)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            if c == 1:
                return self
            return Poly._raw(self.nvars, {k: v * c for k, v in self._t.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus and substitution --------------------------------------------

    def diff(self, index: int) -> "Poly":
        """Formal partial derivative with respect to x_{index+1} (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        shifts, deg_shift, _ = _layout(self.nvars)
        s = shifts[index]
        drop = (1 << s) | (1 << deg_shift)
        out: dict[int, Fraction] = {}
        for k, c in self._t.items():
            e = (k >> s) & _MASK
            if e:
                out[k - drop] = c * e
        return Poly._raw(self.nvars, out)

    def substitute_linear(self, matrix: Sequence[Sequence[Fraction | int]]) -> "Poly":
        """Replace each x_j by sum_i matrix[i][j] * x_i.

        With matrix equal to the representing matrix of a group element this
        is the contragredient action on polynomials.
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("substitution matrix size does not match nvars")
        if not self._t:
            return self
        shifts, deg_shift, _ = _layout(n)

        # Fast path: signed permutation matrices (ubiquitous as reflection
        # generators): remap exponents and track the sign.
        perm = _signed_permutation(matrix, n)
        if perm is not None:
            out: dict[int, Fraction] = {}
            for k, c in self._t.items():
                key = k & ~(((1 << deg_shift) - 1))  # keep degree field
                sign = 1
                for j in range(n):
                    e = (k >> shifts[j]) & _MASK
                    if e:
                        i, sgn = perm[j]
                        key |= e << shifts[i]
                        if sgn < 0 and (e & 1):
                            sign = -sign
                out[key] = c if sign > 0 else -c
            return Poly._raw(n, out)

        images = [
            Poly._raw(
                n,
                {
                    (1 << shifts[i]) | (1 << deg_shift): Fraction(matrix[i][j])
                    for i in range(n)
                    if matrix[i][j]
                },
            )
            for j in range(n)
        ]
        power_cache: list[dict[int, Poly]] = [dict() for _ in range(n)]

        def img_power(j: int, e: int) -> Poly:
            cache = power_cache[j]
            got = cache.get(e)
            if got is None:
                got = images[j] ** e
                cache[e] = got
            return got

        acc = Poly.zero(n)
        for k, c in sorted(self._t.items(), reverse=True):
            term = Poly.const(n, c)
            for j in range(n):
                e = (k >> shifts[j]) & _MASK
                if e:
                    term = term * img_power(j, e)
            acc = acc + term
        return acc

    def substitute_polys(self, images: Sequence["Poly"]) -> "Poly":
        """Evaluate self at arbitrary polynomial arguments, one per variable."""
        n = self.nvars
        if len(images) != n:
            raise ValueError("need one image polynomial per variable")
        if not self._t:
            return Poly.zero(images[0].nvars if images else n)
        m = images[0].nvars
        shifts, _, _ = _layout(n)
        power_cache: list[dict[int, Poly]] = [dict() for _ in range(n)]

        def img_power(j: int, e: int) -> Poly:
            cache = power_cache[j]
            got = cache.get(e)
            if got is None:
                got = images[j] ** e
                cache[e] = got
            return got

        acc = Poly.zero(m)
        for k, c in sorted(self._t.items(), reverse=True):
            term = Poly.const(m, c)
            for j in range(n):
                e = (k >> shifts[j]) & _MASK
                if e:
                    term = term * img_power(j, e)
            acc = acc + term
        return acc

    # -- scaled integer form (internal, reused by multiplication paths) -------

    def _int_form(self) -> tuple[int, dict[int, int]]:
        """Coefficients as integers over one common denominator.

        The denominator is a common multiple of the coefficient
        denominators, not necessarily the least one (multiplication and
        division attach their natural scaling to avoid reconversions).
        """
        got = self._intform
        if got is None:
            den = 1
            for c in self._t.values():
                d = c.denominator
                if d != 1:
                    den = den * d // math.gcd(den, d)
            if den == 1:
                ints = {k: c.numerator for k, c in self._t.items()}
            else:
                ints = {
                    k: c.numerator * (den // c.denominator)
                    for k, c in self._t.items()
                }
            got = (den, ints)
            self._intform = got
        return got

    # -- rendering ------------------------------------------------------------

    def __str__(self) -> str:
        if not self._t:
            return "0"
        shifts, _, _ = _layout(self.nvars)
        parts: list[str] = []
        for k in sorted(self._t, reverse=True):
            c = self._t[k]
            exps = _unpack(k, shifts)
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exps)
                if e
            ]
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _signed_permutation(matrix, n) -> list[tuple[int, int]] | None:
    """Return [(target index, sign)] per column when matrix is a signed permutation."""
    perm: list[tuple[int, int]] = []
    seen = set()
    for j in range(n):
        hit = None
        for i in range(n):
            v = matrix[i][j]
            if v:
                if hit is not None or v not in (1, -1):
                    return None
                hit = (i, 1 if v == 1 else -1)
        if hit is None or hit[0] in seen:
            return None
        seen.add(hit[0])
        perm.append(hit)
    return perm


# ---------------------------------------------------------------------------
# multiplication kernels
# ---------------------------------------------------------------------------

# Above this many coefficient products, multiplication switches from the
# dict-of-packed-keys loop to Kronecker substitution over big integers.
_KRON_MIN_OPS = 400_000


_KRON_MAX_SLOTS = 4_000_000


def _frac_dict(ints: dict[int, int], den: int) -> dict[int, Fraction]:
    """Fraction terms from an integer dict over a common denominator."""
    if den == 1:
        out = {}
        for k, v in ints.items():
            f = object.__new__(Fraction)
            f._numerator = v
            f._denominator = 1
            out[k] = f
        return out
    return {k: Fraction(v, den) for k, v in ints.items()}


def _reduce_int_form(den: int, ints: dict[int, int]) -> tuple[int, dict[int, int]]:
    """Divide out the common content when the denominator has grown large."""
    if den.bit_length() <= 64:
        return den, ints
    g = den
    for v in ints.values():
        g = math.gcd(g, v)
        if g == 1:
            return den, ints
    return den // g, {k: v // g for k, v in ints.items()}


def _finish_product(nvars: int, den: int, raw: dict[int, int]) -> Poly:
    ints = {k: v for k, v in raw.items() if v}
    den, ints = _reduce_int_form(den, ints)
    p = Poly._raw(nvars, _frac_dict(ints, den))
    p._intform = (den, ints)
    return p


def _mul_poly(a: Poly, b: Poly) -> Poly:
    ta, tb = a._t, b._t
    if not ta or not tb:
        return Poly.zero(a.nvars)
    if (
        len(ta) * len(tb) >= _KRON_MIN_OPS
        and a.nvars >= 2
        and a.is_homogeneous()
        and b.is_homogeneous()
        and (a.degree() + b.degree() + 1) ** (a.nvars - 1) <= _KRON_MAX_SLOTS
    ):
        den, raw = _mul_kron(a, b)
    else:
        den, raw = _mul_dict(a, b)
    return _finish_product(a.nvars, den, raw)


def _mul_dict(a: Poly, b: Poly) -> tuple[int, dict[int, int]]:
    da, ia = a._int_form()
    db, ib = b._int_form()
    if len(ia) > len(ib):
        ia, ib = ib, ia
    items_b = list(ib.items())
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in ia.items():
        for kb, cb in items_b:
            k = ka + kb
            v = get(k)
            out[k] = ca * cb if v is None else v + ca * cb
    return da * db, out


def _mul_kron(a: Poly, b: Poly) -> dict[int, Fraction]:
    """Multiply two homogeneous polynomials via Kronecker substitution.

    Both operands are packed into big integers (one byte-aligned digit per
    monomial slot over the first nvars-1 variables; the last exponent is
    implied by homogeneity), multiplied with gmpy2, and unpacked.  The
    digit width is chosen from an a-priori bound on the result
    coefficients, so no carries can occur and the result is exact.
    """
    n = a.nvars
    shifts, deg_shift, _ = _layout(n)
    da, ia = a._int_form()
    db, ib = b._int_form()
    dega = a.degree()
    degb = b.degree()
    total = dega + degb
    base = total + 1
    nslots = base ** (n - 1)
    bound = (
        max(abs(v) for v in ia.values())
        * max(abs(v) for v in ib.values())
        * min(len(ia), len(ib))
    )
    nbytes = (bound.bit_length() + 7) // 8 + 1

    radix = [base**i for i in range(n - 1)]

    def pack_signed(terms: dict[int, int]) -> tuple[int, int]:
        pos = bytearray(nslots * nbytes)
        neg = bytearray(nslots * nbytes)
        for k, v in terms.items():
            idx = 0
            for i in range(n - 1):
                idx += ((k >> shifts[i]) & _MASK) * radix[i]
            off = idx * nbytes
            buf = pos if v > 0 else neg
            buf[off : off + nbytes] = abs(v).to_bytes(nbytes, "little")
        return int.from_bytes(pos, "little"), int.from_bytes(neg, "little")

    ap, am = pack_signed(ia)
    bp, bm = pack_signed(ib)
    ap, am, bp, bm = _mpz(ap), _mpz(am), _mpz(bp), _mpz(bm)
    pos_big = int(ap * bp + am * bm)
    neg_big = int(ap * bm + am * bp)
    size = nslots * nbytes
    pos_bytes = pos_big.to_bytes(size, "little")
    neg_bytes = neg_big.to_bytes(size, "little")

    arr_p = _np.frombuffer(pos_bytes, dtype=_np.uint8).reshape(nslots, nbytes)
    arr_n = _np.frombuffer(neg_bytes, dtype=_np.uint8).reshape(nslots, nbytes)
    nonzero = _np.flatnonzero(arr_p.any(axis=1) | arr_n.any(axis=1))

    out: dict[int, int] = {}
    for idx in nonzero.tolist():
        off = idx * nbytes
        v = int.from_bytes(pos_bytes[off : off + nbytes], "little") - int.from_bytes(
            neg_bytes[off : off + nbytes], "little"
        )
        if not v:
            continue
        key = total << deg_shift
        rem = idx
        esum = 0
        for i in range(n - 1):
            rem, e = divmod(rem, base)
            key |= e << shifts[i]
            esum += e
        key |= (total - esum) << shifts[n - 1]
        out[key] = v
    return da * db, out


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------


def divide_exact(num: Poly, div: Poly) -> Poly | None:
    """Exact quotient q with q*div == num, or None when no such q exists.

    Never returns an approximate quotient: the remainder is tracked term by
    term and any nonzero residue aborts with None.
    """
    if num.nvars != div.nvars:
        raise ValueError("variable count mismatch in division")
    if not div._t:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num._t:
        return num
    n = num.nvars
    shifts, deg_shift, guard = _layout(n)

    if len(div._t) == 1:
        (kd, cd), = div._t.items()
        if kd == 0:
            inv = 1 / cd
            return Poly._raw(n, {k: c * inv for k, c in num._t.items()})
        out: dict[int, Fraction] = {}
        for k, c in num._t.items():
            if (((k | guard) - kd) & guard) != guard:
                return None
            out[k - kd] = c / cd
        return Poly._raw(n, out)

    # dedicated kernel for linear forms, the divisors that dominate the
    # reduction work of the pipeline
    if div.degree() == 1 and div.is_homogeneous():
        return _divide_linear(num, div)

    return _divide_general(num, div)


def _divide_linear(num: Poly, div: Poly) -> Poly | None:
    """Synthetic division by a homogeneous linear form.

    Writing the divisor as c_a x_a + S (x_a its graded-lex leading
    variable) and num = sum x_a^i P_i, the quotient levels satisfy
    Q_{i-1} = (P_i - S Q_i) / c_a descending from the top, with remainder
    P_0 - S Q_0 that must vanish identically.  The loop runs on scaled
    integers (W_i = c_a^{d-i} Q_i stays integral), so the hot path does no
    rational normalisation at all; cost is linear in the number of terms
    times the divisor width, and no heap is needed because every generated
    key stays on its x_a level.
    """
    n = num.nvars
    shifts, deg_shift, _ = _layout(n)
    dn, nt = num._int_form()
    dd, dt = div._int_form()
    items = sorted(dt.items(), reverse=True)
    (k1, c1) = items[0]
    a_idx = next(i for i, s in enumerate(shifts) if (k1 >> s) & _MASK)
    sa = shifts[a_idx]
    rest = []
    for k2, c2 in items[1:]:
        b_idx = next(i for i, s in enumerate(shifts) if (k2 >> s) & _MASK)
        rest.append(((1 << shifts[b_idx]) - (1 << sa), -c2))

    levels: dict[int, dict[int, int]] = {}
    for k, v in nt.items():
        levels.setdefault((k >> sa) & _MASK, {})[k] = v
    d = max(levels)
    if d == 0:
        return None

    pow_ca = [1] * (d + 1)
    for i in range(1, d + 1):
        pow_ca[i] = pow_ca[i - 1] * c1

    one_a = (1 << sa) | (1 << deg_shift)
    out_levels: list[tuple[int, dict[int, int]]] = []
    q_prev: dict[int, int] = {}
    for i in range(d - 1, -1, -1):
        scale = pow_ca[d - i - 1]
        cur = {k - one_a: v * scale for k, v in levels.get(i + 1, {}).items()}
        for shift_ab, cb in rest:
            for k, v in q_prev.items():
                k2c = k + shift_ab
                w = cur.get(k2c)
                nv = cb * v if w is None else w + cb * v
                if nv:
                    cur[k2c] = nv
                elif k2c in cur:
                    del cur[k2c]
        out_levels.append((i, cur))
        q_prev = cur

    top = pow_ca[d]
    rem = {k: v * top for k, v in levels.get(0, {}).items()}
    bump = (1 << sa) | (1 << deg_shift)
    for shift_ab, cb in rest:
        for k, v in q_prev.items():
            k2c = k + shift_ab + bump
            w = rem.get(k2c)
            nv = cb * v if w is None else w + cb * v
            if nv:
                rem[k2c] = nv
            elif k2c in rem:
                del rem[k2c]
    if any(rem.values()):
        return None

    # common denominator dn * c_a^d; level i carries an extra c_a^i upstairs
    out_ints: dict[int, int] = {}
    for i, cur in out_levels:
        scale = dd * pow_ca[i]
        for k, v in cur.items():
            if v:
                out_ints[k] = v * scale
    den_out, out_ints = _reduce_int_form(dn * top, out_ints)
    p = Poly._raw(n, _frac_dict(out_ints, den_out))
    p._intform = (den_out, out_ints)
    return p


def _divide_general(num: Poly, div: Poly) -> Poly | None:
    """Leading-term division with a lazy max-heap over the working remainder."""
    n = num.nvars
    _, _, guard = _layout(n)
    kd = max(div._t)
    cd = div._t[kd]
    rest = [(k, c) for k, c in sorted(div._t.items(), reverse=True) if k != kd]

    rem = dict(num._t)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    q: dict[int, Fraction] = {}
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, None)
        if c is None:
            continue
        if (((k | guard) - kd) & guard) != guard:
            return None
        kq = k - kd
        cq = c / cd
        q[kq] = cq
        for kr, cr in rest:
            kk = kq + kr
            w = rem.get(kk)
            if w is None:
                rem[kk] = -cq * cr
                heapq.heappush(heap, -kk)
            else:
                nv = w - cq * cr
                if nv:
                    rem[kk] = nv
                else:
                    del rem[kk]
    if rem:
        return None
    return Poly._raw(n, q)


def is_constant_multiple(a: Poly, b: Poly) -> Fraction | None:
    """Nonzero c with a == c*b, 1 for the pair of zeros, None otherwise."""
    if a.nvars != b.nvars:
        raise ValueError("variable count mismatch")
    if not a._t and not b._t:
        return _ONE
    if not a._t or not b._t or len(a._t) != len(b._t):
        return None
    ka, kb = max(a._t), max(b._t)
    if ka != kb:
        return None
    c = a._t[ka] / b._t[kb]
    for k, v in b._t.items():
        if a._t.get(k) != c * v:
            return None
    return c


# ---------------------------------------------------------------------------
# canonical irreducible factors and linear forms
# ---------------------------------------------------------------------------


def canonical_factor(p: Poly) -> tuple[Poly, Fraction]:
    """Scale p to integer coprime coefficients with positive leading one.

    Returns (canonical, scale) with p == scale * canonical.  Canonical
    factors are what denominator maps are keyed by.
    """
    if not p._t:
        raise ValueError("zero polynomial cannot be a factor")
    den = 1
    for c in p._t.values():
        d = c.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    g = 0
    for c in p._t.values():
        g = math.gcd(g, abs(int(c * den)))
    scale = Fraction(g, den)
    if p._t[max(p._t)] < 0:
        scale = -scale
    inv = 1 / scale
    return Poly._raw(p.nvars, {k: c * inv for k, c in p._t.items()}), scale


class LinForm:
    """A nonzero linear form, normalised so the first nonzero coefficient is +1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction | int]):
        cs = [Fraction(c) for c in coeffs]
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise ValueError("linear form must be nonzero")
        self.coeffs = tuple(c / lead for c in cs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def poly(self) -> Poly:
        n = len(self.coeffs)
        shifts, deg_shift, _ = _layout(n)
        return Poly._raw(
            n,
            {
                (1 << shifts[i]) | (1 << deg_shift): c
                for i, c in enumerate(self.coeffs)
                if c
            },
        )

    def factor(self) -> Poly:
        """The canonical (integer-primitive) polynomial representative."""
        return canonical_factor(self.poly())[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __lt__(self, other: "LinForm"):
        return self.coeffs < other.coeffs

    def __str__(self) -> str:
        return str(self.poly())

    def __repr__(self) -> str:
        return f"LinForm({self})"


def factor_sort_key(f: Poly):
    """Deterministic total order on factor polynomials (graded-lex on terms)."""
    return tuple(sorted(f._t.items(), reverse=True))


def sorted_factors(factors: Iterable[Poly]) -> list[Poly]:
    return sorted(factors, key=factor_sort_key, reverse=True)


def expand_factor_powers(nvars: int, powers: Mapping[Poly, int]) -> Poly:
    """The polynomial prod f^e over a factor-exponent map."""
    acc = Poly.const(nvars, 1)
    for f in sorted_factors(powers):
        e = powers[f]
        if e:
            acc = acc * f**e
    return acc


# ---------------------------------------------------------------------------
# ArrFrac
# ---------------------------------------------------------------------------


class ArrFrac:
    """Rational function with a factored denominator over arrangement forms.

    The invariant maintained by every constructor and operation: the
    numerator is not divisible by any denominator factor, and every stored
    exponent is positive.  A polynomial is an ArrFrac with an empty map.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping[Poly, int] = ()):
        if den:
            work = dict(den)
            if num:
                reduced: dict[Poly, int] = {}
                for f in sorted_factors(work):
                    e = work[f]
                    if e < 0:
                        raise ValueError("denominator exponents must be positive")
                    while e > 0:
                        q = divide_exact(num, f)
                        if q is None:
                            break
                        num = q
                        e -= 1
                    if e:
                        reduced[f] = e
                work = reduced
            else:
                work = {}
        else:
            work = {}
        self.num = num
        self.den = work

    @classmethod
    def _raw(cls, num: Poly, den: dict[Poly, int]) -> "ArrFrac":
        f = object.__new__(cls)
        f.num = num
        f.den = den
        return f

    @classmethod
    def from_poly(cls, p: Poly) -> "ArrFrac":
        return cls._raw(p, {})

    # -- inspection -----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.den

    def as_poly(self) -> Poly:
        if self.den:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def degree(self) -> int:
        """Degree as a rational function; -1 only for zero (num degree convention)."""
        if not self.num:
            return -1
        return self.num.degree() - sum(
            e * f.degree() for f, e in self.den.items()
        )

    def pole_order(self, factor: Poly) -> int:
        return self.den.get(factor, 0)

    # -- equality -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            other = ArrFrac.from_poly(other)
        if not isinstance(other, ArrFrac):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, frozenset(self.den.items())))

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(value, nvars) -> "ArrFrac":
        if isinstance(value, ArrFrac):
            return value
        if isinstance(value, Poly):
            return ArrFrac.from_poly(value)
        if isinstance(value, (int, Fraction)):
            return ArrFrac.from_poly(Poly.const(nvars, value))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        if not self.den and not other.den:
            return ArrFrac.from_poly(self.num + other.num)
        den: dict[Poly, int] = dict(self.den)
        for f, e in other.den.items():
            if den.get(f, 0) < e:
                den[f] = e
        na = self.num * expand_factor_powers(
            self.nvars, {f: e - self.den.get(f, 0) for f, e in den.items()}
        )
        nb = other.num * expand_factor_powers(
            self.nvars, {f: e - other.den.get(f, 0) for f, e in den.items()}
        )
        return ArrFrac(na + nb, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "ArrFrac":
        return ArrFrac._raw(-self.num, dict(self.den))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ArrFrac.from_poly(Poly.zero(self.nvars))
            return ArrFrac._raw(self.num * other, dict(self.den))
        other = self._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ArrFrac.from_poly(Poly.zero(self.nvars))
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return ArrFrac(self.num * other.num, den)

    __rmul__ = __mul__

    def inverse(self, extra_factors: Iterable[Poly] = ()) -> "ArrFrac":
        """Reciprocal, factoring the numerator over known arrangement forms.

        Raises UnsupportedDenominator when the numerator does not reduce to
        a constant against the candidate factors.
        """
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        candidates = dict.fromkeys(list(self.den) + list(extra_factors))
        rem = self.num
        new_den: dict[Poly, int] = {}
        for f in sorted_factors(candidates):
            while True:
                q = divide_exact(rem, f)
                if q is None:
                    break
                rem = q
                new_den[f] = new_den.get(f, 0) + 1
        if not rem.is_constant():
            raise UnsupportedDenominator(rem)
        c = rem.constant_value()
        new_num = expand_factor_powers(self.nvars, self.den) * (1 / c)
        return ArrFrac(new_num, new_den)

    def div(self, other, extra_factors: Iterable[Poly] = ()) -> "ArrFrac":
        other = self._coerce(other, self.nvars)
        return self * other.inverse(extra_factors)

    def __truediv__(self, other):
        return self.div(other)

    # -- calculus and substitution --------------------------------------------

    def diff(self, index: int) -> "ArrFrac":
        """Partial derivative via the quotient rule on the factored form.

        With u = prod f^e the result is (num' * prod f - num * dlog) / (u * prod f)
        where dlog = sum_f e_f * f' * prod_{g != f} g, assembled with
        prefix/suffix products so each factor is touched once.
        """
        if not self.den:
            return ArrFrac.from_poly(self.num.diff(index))
        den_new = {f: e + 1 for f, e in self.den.items()}
        factors = sorted_factors(self.den)
        n = len(factors)
        one = Poly.const(self.nvars, 1)
        prefix = [one]
        for f in factors:
            prefix.append(prefix[-1] * f)
        suffix = [one] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] * factors[i]
        prod_all = prefix[n]
        dlog = Poly.zero(self.nvars)
        for i, f in enumerate(factors):
            df = f.diff(index)
            if df:
                dlog = dlog + (prefix[i] * suffix[i + 1]) * df * self.den[f]
        num_new = self.num.diff(index) * prod_all
        if dlog:
            num_new = num_new - self.num * dlog
        return ArrFrac(num_new, den_new)

    def substitute_linear(self, matrix) -> "ArrFrac":
        num = self.num.substitute_linear(matrix)
        scale = _ONE
        den: dict[Poly, int] = {}
        for f, e in self.den.items():
            g, s = canonical_factor(f.substitute_linear(matrix))
            den[g] = den.get(g, 0) + e
            scale = scale * s**e
        return ArrFrac(num * (1 / scale), den)

    # -- rendering ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        dens = " * ".join(
            f"({f})^{e}" if e > 1 else f"({f})"
            for f, e in sorted(self.den.items(), key=lambda kv: factor_sort_key(kv[0]), reverse=True)
        )
        return f"({self.num}) / [{dens}]"

    def __repr__(self) -> str:
        return f"ArrFrac({self})"


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class Matrix:
    """Dense matrix over Poly or ArrFrac entries (kept uniform per matrix)."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must be nonempty")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._e = rows

    @classmethod
    def identity(cls, n: int, nvars: int, frac: bool = False) -> "Matrix":
        one = Poly.const(nvars, 1)
        zero = Poly.zero(nvars)
        if frac:
            one, zero = ArrFrac.from_poly(one), ArrFrac.from_poly(zero)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_rational(cls, grid, nvars: int, frac: bool = False) -> "Matrix":
        def lift(v):
            p = Poly.const(nvars, v)
            return ArrFrac.from_poly(p) if frac else p

        return cls([[lift(v) for v in row] for row in grid])

    def __getitem__(self, i: int) -> list:
        return self._e[i]

    def entries(self) -> Iterator[tuple[int, int, object]]:
        for i in range(self.rows):
            for j in range(self.cols):
                yield i, j, self._e[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix([[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(v) for v in row] for row in self._e])

    def to_frac(self) -> "Matrix":
        return self.map(lambda v: v if isinstance(v, ArrFrac) else ArrFrac.from_poly(v))

    def to_poly(self) -> "Matrix":
        def conv(v):
            return v.as_poly() if isinstance(v, ArrFrac) else v

        return self.map(conv)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("matrix shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    term = self._e[i][k] * other._e[k][j]
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.map(lambda v: v * other)

    __rmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("matrix shape mismatch")
        return Matrix(
            [
                [self._e[i][j] + other._e[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("matrix shape mismatch")
        return Matrix(
            [
                [self._e[i][j] - other._e[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self) -> "Matrix":
        return self.map(lambda v: -v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(
            self._e[i][j] == other._e[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self._e) + "]"

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# determinant and adjugate
# ---------------------------------------------------------------------------


def mat_det_adj(matrix: Matrix, det_only: bool = False):
    """Exact determinant and adjugate with det * M^{-1} == adj.

    For ArrFrac matrices the denominators are cleared first (per-factor
    maximum over all entries), the cofactor expansion runs fraction-free
    over polynomials with every intermediate minor reduced against the
    denominator factors, and the factored denominators are reattached at
    the end.  A singular matrix yields det == 0 with the classical
    adjugate still valid.

    Returns (det, adj); adj is None when det_only is set.
    """
    if not matrix.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    frac_input = any(isinstance(v, ArrFrac) for _, _, v in matrix.entries())

    if frac_input:
        m = matrix.to_frac()
        nvars = m[0][0].nvars
        clear: dict[Poly, int] = {}
        for _, _, v in m.entries():
            for f, e in v.den.items():
                if clear.get(f, 0) < e:
                    clear[f] = e
        cleared = [
            [
                m[i][j].num
                * expand_factor_powers(
                    nvars, {f: e - m[i][j].den.get(f, 0) for f, e in clear.items()}
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        factors = sorted_factors(clear)
    else:
        nvars = matrix[0][0].nvars
        cleared = [[matrix[i][j] for j in range(n)] for i in range(n)]
        clear = {}
        factors = []

    core = _MinorTable(cleared, n, nvars, factors)
    full = (1 << n) - 1
    det_poly, det_content = core.minor(full, full)

    if frac_input:
        det = _attach(det_poly, {f: n * e for f, e in clear.items()}, det_content, nvars)
    else:
        det = det_poly * expand_factor_powers(nvars, det_content)

    if det_only:
        return det, None

    if n == 1:
        one = Poly.const(nvars, 1)
        adj = Matrix([[ArrFrac.from_poly(one) if frac_input else one]])
        return det, adj

    base = {f: (n - 1) * e for f, e in clear.items()}
    adj_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            sub_poly, sub_content = core.minor(full ^ (1 << j), full ^ (1 << i))
            if (i + j) & 1:
                sub_poly = -sub_poly
            if frac_input:
                row.append(_attach(sub_poly, base, sub_content, nvars))
            else:
                row.append(sub_poly * expand_factor_powers(nvars, sub_content))
        adj_rows.append(row)
    return det, Matrix(adj_rows)


def _attach(poly: Poly, base: Mapping[Poly, int], content: Mapping[Poly, int], nvars: int) -> ArrFrac:
    """Build poly * prod f^content / prod f^base as a reduced ArrFrac."""
    den: dict[Poly, int] = {}
    num = poly
    for f in set(base) | set(content):
        e = base.get(f, 0) - content.get(f, 0)
        if e > 0:
            den[f] = e
        elif e < 0:
            num = num * f ** (-e)
    return ArrFrac(num, den)


class _MinorTable:
    """Memoised cofactor expansion over a polynomial matrix.

    Minors are stored reduced: the pair (poly, content) stands for
    poly * prod f^content[f].  Reducing at every level is what exploits the
    structural divisibility of the pipeline's Jacobian minors by powers of
    the defining polynomial.
    """

    def __init__(self, entries, n, nvars, factors):
        self.e = entries
        self.n = n
        self.nvars = nvars
        self.factors = factors
        self.memo: dict[tuple[int, int], tuple[Poly, dict[Poly, int]]] = {}

    def minor(self, rmask: int, cmask: int) -> tuple[Poly, dict[Poly, int]]:
        got = self.memo.get((rmask, cmask))
        if got is not None:
            return got
        r = (rmask & -rmask).bit_length() - 1
        if rmask == (1 << r):
            c = (cmask & -cmask).bit_length() - 1
            result = (self.e[r][c], {})
        else:
            sub_r = rmask ^ (1 << r)
            terms = []
            sign = 1
            cm = cmask
            while cm:
                c = (cm & -cm).bit_length() - 1
                cm &= cm - 1
                entry = self.e[r][c]
                if entry:
                    sp, sc = self.minor(sub_r, cmask ^ (1 << c))
                    if sp:
                        terms.append((sign, entry, sp, sc))
                sign = -sign
            if not terms:
                result = (Poly.zero(self.nvars), {})
            else:
                common: dict[Poly, int] = {}
                for f in self.factors:
                    m = min(sc.get(f, 0) for _, _, _, sc in terms)
                    if m:
                        common[f] = m
                acc = Poly.zero(self.nvars)
                for sign, entry, sp, sc in terms:
                    t = entry * sp
                    extra = {f: e - common.get(f, 0) for f, e in sc.items() if e - common.get(f, 0)}
                    if extra:
                        t = t * expand_factor_powers(self.nvars, extra)
                    acc = acc + t if sign > 0 else acc - t
                content = dict(common)
                if acc:
                    for f in self.factors:
                        while True:
                            q = divide_exact(acc, f)
                            if q is None:
                                break
                            acc = q
                            content[f] = content.get(f, 0) + 1
                else:
                    content = {}
                result = (acc, content)
        self.memo[(rmask, cmask)] = result
        return result


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def poly_to_records(p: Poly) -> list[dict]:
    """Terms as JSON-ready records, leading term first (graded-lex order)."""
    return [
        {"coefficient": str(c), "exponents": list(exps)}
        for exps, c in p.items()
    ]


def poly_from_records(records: Iterable[Mapping], nvars: int) -> Poly:
    terms = {}
    for rec in records:
        exps = tuple(rec["exponents"])
        terms[exps] = terms.get(exps, _ZERO) + Fraction(rec["coefficient"])
    return Poly(nvars, terms)


def frac_to_records(a: ArrFrac) -> dict:
    den = []
    for f in sorted_factors(a.den):
        e = a.den[f]
        if f.degree() == 1:
            coeffs = [str(f.coefficient(tuple(1 if i == j else 0 for i in range(f.nvars)))) for j in range(f.nvars)]
            den.append({"form": coeffs, "exp": e})
        else:
            # irreducible orbit factor of a dihedral arrangement: not linear,
            # so serialise the whole polynomial
            den.append({"factor": poly_to_records(f), "exp": e})
    return {"num": poly_to_records(a.num), "den": den}


def frac_from_records(record: Mapping, nvars: int) -> ArrFrac:
    num = poly_from_records(record["num"], nvars)
    den: dict[Poly, int] = {}
    for d in record.get("den", ()):
        if "form" in d:
            f = LinForm([Fraction(c) for c in d["form"]]).factor()
        else:
            f = poly_from_records(d["factor"], nvars)
        den[f] = den.get(f, 0) + int(d["exp"])
    return ArrFrac(num, den)


# ---------------------------------------------------------------------------
# small exact linear algebra over the rationals
# ---------------------------------------------------------------------------


def rat_identity(n: int):
    return tuple(
        tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)
    )


def rat_mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), _ZERO) for j in range(m))
        for i in range(n)
    )


def rat_det(a) -> Fraction:
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    det = _ONE
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i]), None)
        if piv is None:
            return _ZERO
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            if m[r][i]:
                factor = m[r][i] * inv
                for c in range(i, n):
                    m[r][c] -= factor * m[i][c]
    return det


def rat_mat_inv(a):
    n = len(a)
    m = [list(map(Fraction, row)) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(a)]
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i]), None)
        if piv is None:
            raise ValueError("singular rational matrix")
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
        inv = 1 / m[i][i]
        m[i] = [v * inv for v in m[i]]
        for r in range(n):
            if r != i and m[r][i]:
                factor = m[r][i]
                m[r] = [v - factor * w for v, w in zip(m[r], m[i])]
    return tuple(tuple(row[n:]) for row in m)
