"""The commutative *-algebra of functions on a finite point set.

Elements are stored in the point basis (the indicator functions ``chi_i``), so
all products are componentwise.  Point indices are 0-based in code; text
renderings use the 1-based labels of the point set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar


class BaseMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    n: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a point set needs at least one point")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(k + 1) for k in range(self.n)))
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise ValueError("point labels must be distinct and one per point")

    def index(self, label) -> int:
        """0-based index of a point given by label (or by 1-based integer)."""
        label = str(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise IndexError(f"unknown point {label!r}") from None


class AlgebraElement:
    """A function on ``base`` with exact Gaussian-rational values."""

    __slots__ = ("base", "values")

    def __init__(self, base: PointSet, values: Iterable):
        values = tuple(as_scalar(v) for v in values)
        if len(values) != base.n:
            raise ValueError(f"expected {base.n} values, got {len(values)}")
        self.base = base
        self.values = values

    @classmethod
    def constant(cls, base: PointSet, c=1) -> AlgebraElement:
        return cls(base, [as_scalar(c)] * base.n)

    @classmethod
    def zero(cls, base: PointSet) -> AlgebraElement:
        return cls(base, [ZERO] * base.n)

    def __getitem__(self, k: int) -> Scalar:
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def _check(self, other: AlgebraElement):
        if other.base != self.base:
            raise BaseMismatch("algebra elements live on different point sets")

    def __add__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.base, [x + y for x, y in zip(self.values, other.values)])
        if isinstance(other, (int, Scalar)):
            return self + AlgebraElement.constant(self.base, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.base, [-x for x in self.values])

    def __sub__(self, other):
        if isinstance(other, (AlgebraElement, int, Scalar)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.base, [x * y for x, y in zip(self.values, other.values)])
        if isinstance(other, (int, Scalar)):
            return AlgebraElement(self.base, [x * other for x in self.values])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.base == other.base and self.values == other.values
        if isinstance(other, (int, Scalar)):
            return all(x == other for x in self.values)
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.values))

    def __bool__(self):
        return any(self.values)

    def involution(self) -> AlgebraElement:
        return AlgebraElement(self.base, [x.conjugate() for x in self.values])

    def try_invert(self) -> AlgebraElement | NotAUnit:
        """Componentwise inverse, or :class:`NotAUnit` naming the zero points."""
        zeros = tuple(k for k, x in enumerate(self.values) if not x)
        if zeros:
            return NotAUnit(self, zeros)
        return AlgebraElement(self.base, [x.inverse() for x in self.values])

    def to_json(self) -> list[str]:
        return [str(x) for x in self.values]

    @classmethod
    def from_json(cls, base: PointSet, data: Sequence[str]) -> AlgebraElement:
        return cls(base, [Scalar.parse(x) for x in data])

    def pretty(self) -> str:
        """Render in the chi basis, e.g. ``1 - 2chi3``, collapsing a constant part."""
        vals = self.values
        if not any(vals):
            return "0"
        # a constant c plus a few point corrections reads better than three terms
        best_c, best_terms = ZERO, None
        for c in {ZERO, *vals}:
            terms = [(k, v - c) for k, v in enumerate(vals) if v != c]
            if best_terms is None or len(terms) + (1 if c else 0) < len(best_terms) + (1 if best_c else 0):
                best_c, best_terms = c, terms
        parts = []
        if best_c:
            parts.append(_coef(best_c, ""))
        for k, v in best_terms:
            parts.append(_coef(v, f"chi{self.base.labels[k]}"))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"AlgebraElement({[str(v) for v in self.values]})"


def _coef(c: Scalar, name: str) -> str:
    if not name:
        s = c.pretty()
        return f"({s})" if (c.re and c.im) else s
    if c == ONE:
        return name
    if c == -ONE:
        return f"-{name}"
    s = c.pretty()
    if c.re and c.im:
        s = f"({s})"
    return f"{s}{name}"


@dataclass(frozen=True)
class NotAUnit:
    """Returned (not raised) when an element has zero components."""

    element: AlgebraElement
    vanishing: tuple[int, ...]

    def __bool__(self):
        return False

    def points(self) -> tuple[int, ...]:
        """1-based vanishing point indices."""
        return tuple(k + 1 for k in self.vanishing)


class NotAUnitError(ArithmeticError):
    def __init__(self, info: NotAUnit):
        super().__init__(f"not a unit: vanishes at points {list(info.points())}")
        self.info = info


def chi(base: PointSet, i: int) -> AlgebraElement:
    """Indicator function of the point with 1-based index ``i``."""
    if not 1 <= i <= base.n:
        raise IndexError(f"point index {i} out of range 1..{base.n}")
    return AlgebraElement(base, [ONE if k == i - 1 else ZERO for k in range(base.n)])


def one(base: PointSet) -> AlgebraElement:
    return AlgebraElement.constant(base, 1)


@dataclass(frozen=True)
class Conjugate:
    """An element ``e`` of a bimodule viewed in the conjugate bimodule.

    Addition and scalar multiplication are those of the underlying group; the
    algebra acts through ``a . conj(e) = conj(e . a*)`` and
    ``conj(e) . a = conj(a* . e)``.
    """

    value: object

    def bar(self):
        """Toggle back to the underlying bimodule."""
        return self.value

    def __add__(self, other):
        if isinstance(other, Conjugate):
            return Conjugate(self.value + other.value)
        return NotImplemented

    def __neg__(self):
        return Conjugate(-self.value)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        # right action: conj(e) . a = conj(a* . e)
        if isinstance(a, AlgebraElement):
            return Conjugate(a.involution() * self.value)
        if isinstance(a, (int, Scalar)):
            return Conjugate(self.value * as_scalar(a).conjugate())
        return NotImplemented

    def __rmul__(self, a):
        # left action: a . conj(e) = conj(e . a*)
        if isinstance(a, AlgebraElement):
            return Conjugate(self.value * a.involution())
        if isinstance(a, (int, Scalar)):
            return Conjugate(self.value * as_scalar(a).conjugate())
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Conjugate):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("conj", self.value))


def conjugate_tag(e) -> Conjugate:
    """View ``e`` in the conjugate bimodule; ``conjugate_tag(x).bar() is x``."""
    if isinstance(e, Conjugate):
        return e.value
    return Conjugate(e)
