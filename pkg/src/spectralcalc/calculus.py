"""Universal forms, their operator representation, junk, and Connes forms.

Universal p-forms are combinations of symbols ``chi_{i0} dchi_{i1} ... dchi_{ip}``.
Because ``sum_k dchi_k = d(1) = 0`` we always rewrite ``dchi_{n-1}`` in terms
of the others, so symbols whose differentiated indices lie in ``0..n-2`` form
a genuine basis of the universal calculus.

Connes forms of degree p are operators ``pi_u(Omega_u^p)`` modulo the image of
``d(ker pi_u)`` one degree down.  Each degree gets a deterministic coordinate
basis built by echelon elimination in symbol order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg
from .algebra import AlgebraElement, BaseMismatch, Conjugate, PointSet, chi
from .linalg import Subspace
from .scalar import ONE, ZERO, Scalar, as_scalar
from .triple import BlockOperator, GraphTripleSpec, SpectralTriple


class NotFreeError(ValueError):
    def __init__(self, info: NotFree):
        super().__init__(f"Omega^1 is not a free {info.side} module on the dchi_i: {info.reason}")
        self.info = info


class NotInSpace(ValueError):
    pass


# ---------------------------------------------------------------------------
# universal forms


def _normalize(n: int, terms) -> dict:
    """Rewrite every ``dchi_{n-1}`` as ``-sum_{j<n-1} dchi_j`` and drop zeros."""
    out: dict[tuple, Scalar] = {}
    last = n - 1
    stack = list(terms.items()) if isinstance(terms, dict) else list(terms)
    while stack:
        sym, c = stack.pop()
        if not c:
            continue
        pos = next((k for k in range(1, len(sym)) if sym[k] == last), None)
        if pos is None:
            out[sym] = out.get(sym, ZERO) + c
            continue
        for j in range(last):
            stack.append((sym[:pos] + (j,) + sym[pos + 1:], -c))
    return {s: c for s, c in sorted(out.items()) if c}


@lru_cache(maxsize=None)
def _right_mult(n: int, sym: tuple, b: int) -> tuple:
    """``sym * chi_b`` using ``d(a) b = d(ab) - a d(b)``; returns normalized items."""
    if len(sym) == 1:
        return (((sym[0],), ONE),) if sym[0] == b else ()
    head, a = sym[:-1], sym[-1]
    terms: dict = {}
    if a == b:
        terms[sym] = ONE
    for u, c in _right_mult(n, head, a):
        key = u + (b,)
        terms[key] = terms.get(key, ZERO) - c
    return tuple(_normalize(n, terms).items())


class UniversalForm:
    """A homogeneous element of the universal differential calculus."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, degree: int, terms=None):
        self.n = n
        self.degree = degree
        self.terms = _normalize(n, terms or {})
        for s in self.terms:
            if len(s) != degree + 1:
                raise ValueError("symbol of the wrong degree")

    @classmethod
    def symbol(cls, n: int, i0: int, *ds: int, coeff=ONE) -> UniversalForm:
        """``coeff * chi_{i0} dchi_{ds[0]} ... dchi_{ds[-1]}`` (0-based indices)."""
        return cls(n, len(ds), {(i0, *ds): as_scalar(coeff)})

    @classmethod
    def function(cls, f: AlgebraElement) -> UniversalForm:
        return cls(f.base.n, 0, {(k,): v for k, v in enumerate(f.values) if v})

    @classmethod
    def zero(cls, n: int, degree: int) -> UniversalForm:
        return cls(n, degree)

    @classmethod
    def d_of(cls, f: AlgebraElement) -> UniversalForm:
        return cls.function(f).d()

    def _same(self, other):
        if self.n != other.n or self.degree != other.degree:
            raise ValueError("universal forms of different shape")

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, ZERO) + c
        return UniversalForm(self.n, self.degree, terms)

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> UniversalForm:
        c = as_scalar(c)
        return UniversalForm(self.n, self.degree, {s: c * v for s, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, UniversalForm):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("universal forms over different algebras")
        terms: dict = {}
        for s, c in self.terms.items():
            for t, e in other.terms.items():
                for u, f in _right_mult(self.n, s, t[0]):
                    key = u + t[1:]
                    terms[key] = terms.get(key, ZERO) + c * e * f
        return UniversalForm(self.n, self.degree + other.degree, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def d(self) -> UniversalForm:
        """``d(a0 da1 ... dap) = da0 da1 ... dap`` with ``da0 = sum_k chi_k da0``."""
        terms: dict = {}
        for s, c in self.terms.items():
            for k in range(self.n):
                key = (k, *s)
                terms[key] = terms.get(key, ZERO) + c
        return UniversalForm(self.n, self.degree + 1, terms)

    def __eq__(self, other):
        if not isinstance(other, UniversalForm):
            return NotImplemented
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.terms.items():
            word = f"chi{s[0] + 1}" + "".join(f" dchi{k + 1}" for k in s[1:])
            parts.append(f"({c.pretty()}) {word}")
        return " + ".join(parts)


def universal_d(u: UniversalForm) -> UniversalForm:
    return u.d()


def symbols(n: int, p: int) -> list[tuple]:
    """All normalized degree-p symbols in lexicographic order."""
    out = [(k,) for k in range(n)]
    for _ in range(p):
        out = [s + (j,) for s in out for j in range(n - 1)]
    return out


def pi_u(u: UniversalForm, triple: SpectralTriple) -> BlockOperator:
    """``pi_u(a0 da1 ... dap) = a0 [D, a1] ... [D, ap]``."""
    if u.n != triple.base.n:
        raise BaseMismatch("universal form and triple have different point sets")
    total = BlockOperator.zero(triple.spec)
    for s, c in u.terms.items():
        total = total + _symbol_operator(triple, s).scale(c)
    return total


def _symbol_operator(triple: SpectralTriple, s: tuple) -> BlockOperator:
    base = triple.base
    op = triple.represent(chi(base, s[0] + 1))
    for k in s[1:]:
        op = op * triple.commutator(chi(base, k + 1))
    return op


# ---------------------------------------------------------------------------
# graded pieces


@dataclass
class FormSpace:
    """One degree of the Connes calculus.

    ``basis`` is the echelon basis of the represented forms, ``junk_basis``
    spans the represented junk, ``quotient_basis`` completes the junk to the
    full span and fixes the coordinates of Connes forms.  ``kernel`` is a basis
    of ``ker pi_u`` in this degree, as universal forms.
    """

    degree: int
    symbols: list[tuple]
    basis: list[list[Scalar]]
    junk_basis: list[list[Scalar]]
    quotient_basis: list[list[Scalar]]
    kernel: list[UniversalForm]
    _coords: Subspace = field(repr=False)
    _lift: Subspace = field(repr=False)
    _lift_symbols: list[tuple] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.quotient_basis)

    @property
    def represented_dim(self) -> int:
        return len(self.basis)

    @property
    def junk_dim(self) -> int:
        return len(self.junk_basis)

    def reduce(self, op: Sequence[Scalar]) -> list[Scalar]:
        """Quotient coordinates of a represented form (given as operator vector)."""
        c = self._coords.coordinates(op)
        if c is None:
            raise NotInSpace(f"operator is not a represented {self.degree}-form")
        return c[: self.dim]

    def lift(self, coords: Sequence[Scalar]) -> list[Scalar]:
        """Operator vector of the canonical representative."""
        out = [ZERO] * self._coords.dim
        for c, q in zip(coords, self.quotient_basis):
            if c:
                out = [x + c * y if y else x for x, y in zip(out, q)]
        return out

    def preimage(self, op: Sequence[Scalar], n: int) -> UniversalForm:
        """A universal form representing ``op`` (deterministic choice)."""
        c = self._lift.coordinates(op)
        if c is None:
            raise NotInSpace(f"operator is not a represented {self.degree}-form")
        return UniversalForm(n, self.degree, {s: v for s, v in zip(self._lift_symbols, c) if v})


def _build_space(triple: SpectralTriple, p: int, prev: FormSpace | None) -> FormSpace:
    n = triple.base.n
    dim = triple.operator_dim
    syms = symbols(n, p)
    images = [_symbol_operator(triple, s).vector() for s in syms]
    basis, _ = linalg.rref(images, dim)

    lift = Subspace(dim)
    lift_syms = []
    for s, v in zip(syms, images):
        if lift.add(v):
            lift_syms.append(s)

    kernel = []
    if images:
        for v in linalg.nullspace(linalg.transpose(images), len(syms)):
            kernel.append(UniversalForm(n, p, {s: c for s, c in zip(syms, v) if c}))

    junk_vectors = []
    if prev is not None:
        junk_vectors = [pi_u(k.d(), triple).vector() for k in prev.kernel]
    junk = Subspace(dim)
    for v in junk_vectors:
        junk.add(v)
    junk_basis, _ = linalg.rref(junk.basis, dim) if junk.basis else ([], [])

    completion = Subspace(dim, junk_basis)
    quotient = [row for row in basis if completion.add(row)]
    coords = Subspace(dim, quotient + junk_basis)
    return FormSpace(p, syms, basis, junk_basis, quotient, kernel, coords, lift, lift_syms)


def degree_space(triple: SpectralTriple, p: int) -> FormSpace:
    return ConnesCalculus(triple).space(p)


# ---------------------------------------------------------------------------
# Connes forms


def star_sign(p: int) -> int:
    """Sign relating the form involution to the operator adjoint in degree p.

    ``xi* = (-1)^(p(p+1)/2) pi(xi)^dagger`` is the unique choice giving both
    ``(xi ^ eta)* = (-1)^(|xi||eta|) eta* ^ xi*`` and ``d(xi*) = (d xi)*``.
    """
    return -1 if (p * (p + 1) // 2) % 2 else 1


class Form:
    """An element of the Connes calculus in quotient coordinates."""

    __slots__ = ("calc", "degree", "coords", "_pre")

    def __init__(self, calc: ConnesCalculus, degree: int, coords, preimage: UniversalForm | None = None):
        self.calc = calc
        self.degree = degree
        self.coords = tuple(as_scalar(c) for c in coords)
        if len(self.coords) != calc.space(degree).dim:
            raise ValueError("coordinate vector has the wrong length")
        self._pre = preimage

    @property
    def preimage(self) -> UniversalForm:
        if self._pre is None:
            self._pre = self.calc.space(self.degree).preimage(self.operator_vector(), self.calc.n)
        return self._pre

    def operator_vector(self) -> list[Scalar]:
        return self.calc.space(self.degree).lift(self.coords)

    def operator(self) -> BlockOperator:
        return BlockOperator.from_vector(self.calc.triple.spec, self.operator_vector())

    def _check(self, other: Form):
        if other.calc is not self.calc:
            raise ValueError("forms belong to different calculi")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        pre = self._pre + other._pre if (self._pre is not None and other._pre is not None) else None
        return Form(self.calc, self.degree, [x + y for x, y in zip(self.coords, other.coords)], pre)

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> Form:
        c = as_scalar(c)
        pre = self._pre.scale(c) if self._pre is not None else None
        return Form(self.calc, self.degree, [c * x for x in self.coords], pre)

    def __mul__(self, other):
        """Wedge with a form, right action of a function, or scalar multiple."""
        if isinstance(other, Form):
            return self.calc.wedge(self, other)
        if isinstance(other, AlgebraElement):
            return self.calc.wedge(self, self.calc.function(other))
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.calc.wedge(self.calc.function(other), self)
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def wedge(self, other: Form) -> Form:
        return self.calc.wedge(self, other)

    def d(self) -> Form:
        return self.calc.d(self)

    def star(self) -> Form:
        return self.calc.star(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.calc is other.calc and self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((self.degree, self.coords))

    def to_json(self) -> dict:
        return {"degree": self.degree, "coords": [str(c) for c in self.coords]}

    def __repr__(self):
        return f"Form(degree={self.degree}, coords=[{', '.join(c.pretty() for c in self.coords)}])"


@dataclass(frozen=True)
class FreeBasis:
    side: str
    rank: int
    generators: tuple[int, ...]  # 0-based point indices i with e_i = [D, chi_i]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFree:
    side: str
    reason: str
    witness: tuple  # coefficient functions (AlgebraElements) of a vanishing combination

    def __bool__(self):
        return False


class ConnesCalculus:
    """Degree-by-degree Connes calculus of a finite spectral triple."""

    def __init__(self, triple: SpectralTriple | GraphTripleSpec, max_degree: int = 3):
        if isinstance(triple, GraphTripleSpec):
            triple = SpectralTriple(triple)
        self.triple = triple
        self.base: PointSet = triple.base
        self.n = triple.base.n
        self.max_degree = max_degree
        self._spaces: dict[int, FormSpace] = {}
        self._dmats: dict[int, list] = {}
        self._stars: dict[int, list] = {}
        self._module: dict[str, object] = {}

    # -- spaces ----------------------------------------------------------

    def space(self, p: int) -> FormSpace:
        if p < 0:
            raise ValueError("negative degree")
        if p not in self._spaces:
            prev = self.space(p - 1) if p > 0 else None
            self._spaces[p] = _build_space(self.triple, p, prev)
        return self._spaces[p]

    def dim(self, p: int) -> int:
        return self.space(p).dim

    # -- constructors ----------------------------------------------------

    def form_from_operator(self, p: int, op, preimage: UniversalForm | None = None) -> Form:
        vec = op.vector() if isinstance(op, BlockOperator) else list(op)
        return Form(self, p, self.space(p).reduce(vec), preimage)

    def from_universal(self, u: UniversalForm) -> Form:
        return self.form_from_operator(u.degree, pi_u(u, self.triple), u)

    def function(self, f: AlgebraElement) -> Form:
        return self.from_universal(UniversalForm.function(f))

    def chi(self, i: int) -> AlgebraElement:
        return chi(self.base, i)

    def e(self, i: int) -> Form:
        """``e_i = [D, chi_i]`` for 1-based ``i``."""
        return self.from_universal(UniversalForm.d_of(self.chi(i)))

    def basis_form(self, p: int, k: int) -> Form:
        dim = self.dim(p)
        return Form(self, p, [ONE if j == k else ZERO for j in range(dim)])

    def zero(self, p: int) -> Form:
        return Form(self, p, [ZERO] * self.dim(p))

    # -- operations ------------------------------------------------------

    def wedge(self, x: Form, y: Form) -> Form:
        op = BlockOperator.from_vector(self.triple.spec, x.operator_vector()) * \
            BlockOperator.from_vector(self.triple.spec, y.operator_vector())
        pre = x._pre * y._pre if (x._pre is not None and y._pre is not None) else None
        return self.form_from_operator(x.degree + y.degree, op, pre)

    def d(self, x: Form) -> Form:
        """Connes differential, computed from the universal preimage."""
        du = x.preimage.d()
        return self.from_universal(du)

    def d_matrix(self, p: int) -> list:
        """Matrix of d from degree p to p+1 in quotient coordinates."""
        if p not in self._dmats:
            cols = [self.d(self.basis_form(p, k)).coords for k in range(self.dim(p))]
            rows = self.dim(p + 1)
            self._dmats[p] = [[col[r] for col in cols] for r in range(rows)] if cols else [[] for _ in range(rows)]
        return self._dmats[p]

    def apply_d(self, p: int, coords: Sequence[Scalar]) -> list[Scalar]:
        return linalg.matvec(self.d_matrix(p), coords) if self.dim(p) else [ZERO] * self.dim(p + 1)

    def check_d_well_defined(self, p: int) -> list[tuple]:
        """Symbols whose d disagrees with the d of their class; empty when d descends."""
        bad = []
        space = self.space(p)
        for s in space.symbols:
            u = UniversalForm(self.n, p, {s: ONE})
            lhs = self.from_universal(u.d()).coords
            rhs = self.apply_d(p, space.reduce(pi_u(u, self.triple).vector()))
            if list(lhs) != list(rhs):
                bad.append(s)
        for k in space.kernel:
            if any(self.from_universal(k.d()).coords):
                bad.append(k)
        return bad

    def star(self, x: Form) -> Form:
        op = BlockOperator.from_vector(self.triple.spec, x.operator_vector()).adjoint()
        return self.form_from_operator(x.degree, op.scale(star_sign(x.degree)))

    def star_matrix(self, p: int) -> list:
        """``S`` with ``star(x).coords = S @ conj(x.coords)``."""
        if p not in self._stars:
            cols = [self.star(self.basis_form(p, k)).coords for k in range(self.dim(p))]
            self._stars[p] = [[col[r] for col in cols] for r in range(self.dim(p))]
        return self._stars[p]

    def star_map(self, x: Form) -> Conjugate:
        """The bimodule map ``xi -> conj(xi*)`` into the conjugate module."""
        return Conjugate(self.star(x))

    # -- Omega^1 as a module ---------------------------------------------

    def _generators(self) -> list[Form]:
        return [self.e(i) for i in range(1, self.n)]

    def _coordinate_matrix(self, side: str) -> list:
        """Columns: coords of ``e_i chi_x`` (right) or ``chi_x e_i`` (left), index ``i*n + x``."""
        cols = []
        for e in self._generators():
            for x in range(self.n):
                c = self.chi(x + 1)
                cols.append((e * c if side == "right" else c * e).coords)
        dim = self.dim(1)
        return [[col[r] for col in cols] for r in range(dim)]

    def free_basis_check(self, side: str = "right") -> FreeBasis | NotFree:
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        key = "free-" + side
        if key not in self._module:
            r = self.n - 1
            mat = self._coordinate_matrix(side)
            kernel = linalg.nullspace(mat, r * self.n) if mat else []
            if r == 0:
                result = NotFree(side, "a single point has no one-forms", ())
            elif kernel:
                w = kernel[0]
                witness = tuple(AlgebraElement(self.base, w[i * self.n:(i + 1) * self.n]) for i in range(r))
                result = NotFree(side, "the dchi_i satisfy a module relation", witness)
            else:
                result = FreeBasis(side, r, tuple(range(r)))
            self._module[key] = result
        return self._module[key]

    def require_free(self, side: str = "right") -> FreeBasis:
        info = self.free_basis_check(side)
        if not info:
            raise NotFreeError(info)
        return info

    def _inverse_coordinate_matrix(self, side: str) -> list:
        key = "inv-" + side
        if key not in self._module:
            self.require_free(side)
            self._module[key] = linalg.inverse(self._coordinate_matrix(side))
        return self._module[key]

    @property
    def rank(self) -> int:
        return self.require_free().rank

    def right_coords(self, x: Form) -> list[AlgebraElement]:
        """Functions ``a_i`` with ``x = sum_i e_i a_i``."""
        return self._split(x, "right")

    def left_coords(self, x: Form) -> list[AlgebraElement]:
        """Functions ``a_i`` with ``x = sum_i a_i e_i``."""
        return self._split(x, "left")

    def _split(self, x: Form, side: str) -> list[AlgebraElement]:
        if x.degree != 1:
            raise ValueError("module coordinates are defined on one-forms")
        flat = linalg.matvec(self._inverse_coordinate_matrix(side), x.coords)
        n = self.n
        return [AlgebraElement(self.base, flat[i * n:(i + 1) * n]) for i in range(self.n - 1)]

    def from_right(self, coeffs: Sequence[AlgebraElement]) -> Form:
        """``sum_i e_i a_i``."""
        return self._join(coeffs, "right")

    def from_left(self, coeffs: Sequence[AlgebraElement]) -> Form:
        """``sum_i a_i e_i``."""
        return self._join(coeffs, "left")

    def _join(self, coeffs, side):
        self.require_free(side)
        flat = [v for a in coeffs for v in a.values]
        mat = self._coordinate_matrix(side)
        return Form(self, 1, linalg.matvec(mat, flat))

    def bimodule_table(self) -> list:
        """``table[m][k][j]``: coefficient with ``chi_k e_j = sum_m e_m table[m][k][j]``.

        All indices 0-based; ``k`` runs over points, ``m, j`` over generators.
        """
        if "table" not in self._module:
            r = self.require_free().rank
            table = [[[None] * r for _ in range(self.n)] for _ in range(r)]
            for k in range(self.n):
                for j in range(r):
                    coeffs = self.right_coords(self.chi(k + 1) * self.e(j + 1))
                    for m in range(r):
                        table[m][k][j] = coeffs[m]
            self._module["table"] = table
        return self._module["table"]

    def right_to_left_table(self) -> list:
        """``table[m][k][j]``: coefficient with ``e_j chi_k = sum_m table[m][k][j] e_m``."""
        if "rtable" not in self._module:
            r = self.require_free("left").rank
            table = [[[None] * r for _ in range(self.n)] for _ in range(r)]
            for k in range(self.n):
                for j in range(r):
                    coeffs = self.left_coords(self.e(j + 1) * self.chi(k + 1))
                    for m in range(r):
                        table[m][k][j] = coeffs[m]
            self._module["rtable"] = table
        return self._module["rtable"]

    def move_left_to_right(self, f: AlgebraElement, j: int) -> list[AlgebraElement]:
        """Right coefficients of ``f e_j`` (0-based generator ``j``)."""
        table = self.bimodule_table()
        r = len(table)
        out = []
        for m in range(r):
            acc = AlgebraElement.zero(self.base)
            for k, v in enumerate(f.values):
                if v:
                    acc = acc + table[m][k][j] * v
            out.append(acc)
        return out

    def move_right_to_left(self, f: AlgebraElement, j: int) -> list[AlgebraElement]:
        """Left coefficients of ``e_j f`` (0-based generator ``j``)."""
        table = self.right_to_left_table()
        r = len(table)
        out = []
        for m in range(r):
            acc = AlgebraElement.zero(self.base)
            for k, v in enumerate(f.values):
                if v:
                    acc = acc + table[m][k][j] * v
            out.append(acc)
        return out

    def left_multiplication_matrix(self, f: AlgebraElement) -> list:
        """Matrix of ``x -> f x`` on one-form coordinates."""
        return self._action_matrix(f, left=True)

    def right_multiplication_matrix(self, f: AlgebraElement) -> list:
        return self._action_matrix(f, left=False)

    def _action_matrix(self, f, left):
        dim = self.dim(1)
        cols = []
        for k in range(dim):
            b = self.basis_form(1, k)
            cols.append((f * b if left else b * f).coords)
        return [[col[r] for col in cols] for r in range(dim)]


def free_basis_check(calc: ConnesCalculus, side: str = "right"):
    return calc.free_basis_check(side)


def bimodule_table(calc: ConnesCalculus):
    return calc.bimodule_table()
