"""Exact arithmetic over square-zero infinitesimal generators.

The scalar ring is the rationals.  A :class:`GeneratorContext` hands out
generators ``d0, d1, ...`` that each square to zero; elements are finite
rational combinations of square-free generator products, stored sparsely as
``{bitmask: Fraction}`` with bit ``i`` standing for generator ``i``.  Two
monomials that share a generator multiply to zero, so every identity checked
downstream reduces to an exact zero test on such elements.

Conventions:
  * zero coefficients are never stored, hence equality is dict equality;
  * elements are immutable once built and may be shared freely between
    threads; generator allocation is the only mutation and is serialized
    per context;
  * elements from different contexts never mix.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

#: The empty monomial (the unit of the monomial monoid).
UNIT = 0


class ResidueError(ArithmeticError):
    """A value is not an exact multiple of the requested monomial.

    Raised by coefficient extraction when stray monomials remain; downstream
    this is the computational signature of an input violating the form or
    representation axioms.
    """


class GeneratorContext:
    """Growable allocator of square-zero generators.

    Indices are handed out monotonically and never reused, so nested
    computations can keep allocating fresh generators while outer ones stay
    valid as ambient parameters.  Use one context per independent
    computation.
    """

    __slots__ = ("_count", "_lock")

    def __init__(self) -> None:
        self._count = 0
        self._lock = threading.Lock()

    @property
    def count(self) -> int:
        """Number of generators allocated so far."""
        return self._count

    def fresh(self) -> "WeilElement":
        """Allocate a new generator and return it as an element."""
        with self._lock:
            index = self._count
            self._count += 1
        return WeilElement(self, {1 << index: Fraction(1)})

    def fresh_many(self, n: int) -> list["WeilElement"]:
        return [self.fresh() for _ in range(n)]

    def ensure(self, count: int) -> None:
        """Grow the context so that all indices below ``count`` are valid."""
        with self._lock:
            if count > self._count:
                self._count = count

    def const(self, value: Rational) -> "WeilElement":
        q = Fraction(value)
        return WeilElement(self, {UNIT: q} if q else {})

    def zero(self) -> "WeilElement":
        return WeilElement(self, {})

    def one(self) -> "WeilElement":
        return WeilElement(self, {UNIT: Fraction(1)})

    def generator(self, index: int) -> "WeilElement":
        if not 0 <= index < self._count:
            raise ValueError(f"generator {index} not allocated in this context")
        return WeilElement(self, {1 << index: Fraction(1)})


def mask_indices(mask: int) -> list[int]:
    """Sorted generator indices present in a monomial bitmask."""
    out = []
    while mask:
        bit = mask & -mask
        out.append(bit.bit_length() - 1)
        mask ^= bit
    return out


def indices_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 0:
            raise ValueError("generator indices are nonnegative")
        mask |= 1 << i
    return mask


def as_monomial(mono: Union[int, "WeilElement"]) -> int:
    """Normalize a monomial given as a bitmask or as a coefficient-1 element."""
    if isinstance(mono, int):
        return mono
    if isinstance(mono, WeilElement):
        if len(mono.coeffs) == 1:
            mask, coeff = next(iter(mono.coeffs.items()))
            if coeff == 1:
                return mask
    raise ValueError("not a monomial: expected a bitmask or a single product of generators")


class WeilElement:
    """Sparse polynomial over square-zero generators with rational coefficients.

    Any element whose support avoids the empty monomial is nilpotent; an
    element is invertible exactly when its constant term is nonzero.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: GeneratorContext, coeffs: dict[int, Fraction]):
        self.ctx = ctx
        self.coeffs = coeffs  # owned; zero coefficients already pruned

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get(UNIT, Fraction(0))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and UNIT in self.coeffs)

    @property
    def is_nilpotent(self) -> bool:
        return UNIT not in self.coeffs

    def squares_to_zero(self) -> bool:
        return (self * self).is_zero

    @property
    def generator_index(self) -> int:
        """Index of the generator this element is, if it is exactly one."""
        if len(self.coeffs) == 1:
            mask, coeff = next(iter(self.coeffs.items()))
            if coeff == 1 and mask and mask & (mask - 1) == 0:
                return mask.bit_length() - 1
        raise ValueError("element is not a single generator")

    def support_mask(self) -> int:
        """Union of all generators occurring in this element."""
        mask = 0
        for m in self.coeffs:
            mask |= m
        return mask

    # -- ring operations -----------------------------------------------

    def _coerce(self, other) -> "WeilElement | None":
        if isinstance(other, WeilElement):
            if other.ctx is not self.ctx:
                raise ValueError("cannot mix elements from different generator contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc:
                    out[m] = acc
                else:
                    del out[m]
        return WeilElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return WeilElement(self.ctx, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                if m1 & m2:
                    continue  # shared generator squares to zero
                m = m1 | m2
                acc = out.get(m)
                if acc is None:
                    out[m] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        out[m] = acc
                    else:
                        del out[m]
        return WeilElement(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, exp: int):
        if not isinstance(exp, int) or exp < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ctx.one()
        base = self
        while exp:
            if exp & 1:
                result = result * base
            exp >>= 1
            if exp:
                base = base * base
        return result

    def inverse(self) -> "WeilElement":
        """Exact multiplicative inverse; requires a nonzero constant term.

        Finite because the nilpotent part dies after at most one power per
        live generator.
        """
        c = self.constant_term
        if not c:
            raise ValueError("element with zero constant term is not invertible")
        cinv = 1 / c
        nil = (self - c) * cinv  # nilpotent
        # alternating geometric series: 1/(1+n) = 1 - n + n^2 - ...
        total = self.ctx.one()
        power = self.ctx.one()
        sign = 1
        while True:
            power = power * nil
            if power.is_zero:
                break
            sign = -sign
            total = total + (power if sign > 0 else -power)
        return total * cinv

    # -- structure operations --------------------------------------------

    def substitute(self, images: Mapping) -> "WeilElement":
        """Apply the algebra morphism sending listed generators to images.

        Keys are generator indices or single-generator elements; values are
        elements (or rationals) that must square to zero.  Unlisted
        generators map to themselves.
        """
        table: dict[int, WeilElement] = {}
        for key, img in images.items():
            idx = key if isinstance(key, int) else key.generator_index
            img_el = self._coerce(img)
            if img_el is None:
                raise ValueError("substitution image must be an element or rational")
            if not (img_el * img_el).is_zero:
                raise ValueError("substitution image must square to zero")
            table[idx] = img_el
        total = self.ctx.zero()
        for m, c in self.coeffs.items():
            term = self.ctx.const(c)
            mm = m
            while mm and term:
                bit = mm & -mm
                idx = bit.bit_length() - 1
                mm ^= bit
                factor = table.get(idx)
                if factor is None:
                    factor = WeilElement(self.ctx, {bit: Fraction(1)})
                term = term * factor
            total = total + term
        return total

    def decompose(self, mask: Union[int, "WeilElement"]) -> dict[int, "WeilElement"]:
        """Split by sub-monomials of ``mask``.

        Returns ``{sub: coeff}`` with ``self == sum(coeff * sub)`` and every
        coefficient free of the generators in ``mask``.
        """
        mask = as_monomial(mask)
        parts: dict[int, dict[int, Fraction]] = {}
        for m, c in self.coeffs.items():
            parts.setdefault(m & mask, {})[m & ~mask] = c
        return {sub: WeilElement(self.ctx, d) for sub, d in parts.items()}

    def factor_top(self, mono: Union[int, "WeilElement"]) -> "WeilElement":
        """Exact division by a monomial every term must contain.

        Returns the unique ``c`` with ``self == c * mono`` and ``c`` free of
        the monomial's generators; raises :class:`ResidueError` otherwise.
        """
        mask = as_monomial(mono)
        out: dict[int, Fraction] = {}
        for m, c in self.coeffs.items():
            if m & mask != mask:
                raise ResidueError(
                    f"monomial {mask_indices(m)} is not a multiple of {mask_indices(mask)}"
                )
            out[m & ~mask] = c
        return WeilElement(self.ctx, out)

    # -- comparison / presentation -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, WeilElement):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        # immutable by convention; lets single generators key substitution maps
        return hash((id(self.ctx), frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"WeilElement({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for m in sorted(self.coeffs, key=lambda m: (bin(m).count("1"), m)):
            c = self.coeffs[m]
            names = "*".join(f"d{i}" for i in mask_indices(m))
            if not names:
                term = str(c)
            elif c == 1:
                term = names
            elif c == -1:
                term = f"-{names}"
            else:
                term = f"{c}*{names}"
            if bits and not term.startswith("-"):
                bits.append(f"+ {term}")
            elif bits:
                bits.append(f"- {term[1:]}")
            else:
                bits.append(term)
        return " ".join(bits)


def _mul_acc(out: dict[int, Fraction], ac: dict[int, Fraction], bc: dict[int, Fraction]) -> None:
    """Accumulate the product of two coefficient dicts into ``out``."""
    for m1, c1 in ac.items():
        for m2, c2 in bc.items():
            if m1 & m2:
                continue
            m = m1 | m2
            v = out.get(m)
            if v is None:
                out[m] = c1 * c2
            else:
                v = v + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]


def monomial(gens: Iterable[WeilElement]) -> int:
    """Bitmask of the product of single generators (must be distinct)."""
    mask = 0
    for g in gens:
        bit = 1 << g.generator_index
        if mask & bit:
            raise ValueError("repeated generator in monomial")
        mask |= bit
    return mask


def product(elements: Iterable[WeilElement], ctx: GeneratorContext) -> WeilElement:
    total = ctx.one()
    for el in elements:
        total = total * el
    return total


class WeilMatrix:
    """Square matrix with :class:`WeilElement` entries.

    Used both for fiber group elements (invertible constant term) and for
    linear maps on vectorized fibers.  Immutable.
    """

    __slots__ = ("ctx", "size", "rows")

    def __init__(self, rows: Iterable[Iterable[WeilElement]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square and nonempty")
        self.ctx = rows[0][0].ctx
        for r in rows:
            for e in r:
                if e.ctx is not self.ctx:
                    raise ValueError("cannot mix elements from different generator contexts")
        self.size = len(rows)
        self.rows = rows

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, ctx: GeneratorContext, size: int) -> "WeilMatrix":
        one, zero = ctx.one(), ctx.zero()
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, ctx: GeneratorContext, size: int) -> "WeilMatrix":
        zero = ctx.zero()
        return cls([[zero for _ in range(size)] for _ in range(size)])

    @classmethod
    def from_scalar_rows(cls, ctx: GeneratorContext, rows) -> "WeilMatrix":
        return cls([[ctx.const(v) for v in r] for r in rows])

    # -- queries -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for r in self.rows for e in r)

    def constant_matrix(self) -> list[list[Fraction]]:
        return [[e.constant_term for e in r] for r in self.rows]

    @property
    def is_constant(self) -> bool:
        return all(e.is_constant for r in self.rows for e in r)

    def vec(self) -> list[WeilElement]:
        """Row-major flattening; entry (a, b) lands at index a*size + b."""
        return [e for r in self.rows for e in r]

    @classmethod
    def unvec(cls, entries: list[WeilElement], size: int) -> "WeilMatrix":
        if len(entries) != size * size:
            raise ValueError("entry count does not match size")
        return cls([entries[i * size:(i + 1) * size] for i in range(size)])

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "WeilMatrix") -> "WeilMatrix":
        self._check(other)
        return WeilMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "WeilMatrix") -> "WeilMatrix":
        self._check(other)
        return WeilMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "WeilMatrix":
        return WeilMatrix([[-a for a in r] for r in self.rows])

    def scale(self, s) -> "WeilMatrix":
        """Multiply every entry by a scalar (rational or element)."""
        return WeilMatrix([[a * s for a in r] for r in self.rows])

    def __matmul__(self, other: "WeilMatrix") -> "WeilMatrix":
        self._check(other)
        cols = list(zip(*other.rows))
        ctx = self.ctx
        out = []
        for ra in self.rows:
            row = []
            for col in cols:
                acc: dict[int, Fraction] = {}
                for a, b in zip(ra, col):
                    if a.coeffs and b.coeffs:
                        _mul_acc(acc, a.coeffs, b.coeffs)
                row.append(WeilElement(ctx, acc))
            out.append(row)
        return WeilMatrix(out)

    def apply(self, vector: list[WeilElement]) -> list[WeilElement]:
        if len(vector) != self.size:
            raise ValueError("vector length does not match matrix size")
        ctx = self.ctx
        out = []
        for row in self.rows:
            acc: dict[int, Fraction] = {}
            for a, v in zip(row, vector):
                if a.coeffs and v.coeffs:
                    _mul_acc(acc, a.coeffs, v.coeffs)
            out.append(WeilElement(ctx, acc))
        return out

    def inverse(self) -> "WeilMatrix":
        """Exact two-sided inverse for invertible constant term.

        Inverts the constant part over the rationals, then corrects by the
        finite alternating Neumann series of the nilpotent remainder.
        """
        cinv_rows = invert_rational_matrix(self.constant_matrix())
        cinv = WeilMatrix.from_scalar_rows(self.ctx, cinv_rows)
        nil = cinv @ self - WeilMatrix.identity(self.ctx, self.size)  # nilpotent entries
        series = WeilMatrix.identity(self.ctx, self.size)
        power = nil
        sign = -1
        while not power.is_zero:
            series = series + power if sign > 0 else series - power
            power = power @ nil
            sign = -sign
        return series @ cinv

    def _check(self, other: "WeilMatrix") -> None:
        if not isinstance(other, WeilMatrix):
            raise TypeError("expected a WeilMatrix")
        if other.ctx is not self.ctx:
            raise ValueError("cannot mix elements from different generator contexts")
        if other.size != self.size:
            raise ValueError("size mismatch")

    # -- structure operations ---------------------------------------------------

    def substitute(self, images: Mapping) -> "WeilMatrix":
        return WeilMatrix([[e.substitute(images) for e in r] for r in self.rows])

    def factor_top(self, mono) -> "WeilMatrix":
        return WeilMatrix([[e.factor_top(mono) for e in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, WeilMatrix):
            return NotImplemented
        return (
            self.ctx is other.ctx and self.size == other.size and self.rows == other.rows
        )

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
        return f"WeilMatrix[{body}]"


def invert_rational_matrix(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals; raises on a singular input."""
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("singular constant term")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def factor_top(value, mono):
    """Coefficient extraction for elements and matrices alike."""
    if isinstance(value, (WeilElement, WeilMatrix)):
        return value.factor_top(mono)
    raise TypeError("factor_top expects a WeilElement or WeilMatrix")
