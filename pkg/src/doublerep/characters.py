"""Exact character tables of finite groups and class-function arithmetic.

The table is computed by the Burnside-Dixon method: simultaneous
eigenvectors of the class-algebra matrices over a prime field F_p with
p = 1 (mod exp G) and p > 2 sqrt(|G|), lifted to sums of complex roots of
unity through discrete Fourier inversion of power-map values.  The lift is
exact; the public ``chars`` array holds the complex embeddings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    ConsistencyError,
    GroupMismatchError,
    NoSuchCharacterError,
    NotACharacterError,
    ValidationError,
)
from .groups import ConjugacyData, GroupTable, Subgroup, conjugacy_classes

ORTHOGONALITY_TOL = 1e-8
DECOMPOSE_TOL = 1e-6


# ---------------------------------------------------------------------------
# exact cyclotomic integers

@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple:
    """Coefficients (low degree first) of the e-th cyclotomic polynomial."""
    # divide x^e - 1 by all lower cyclotomic factors; integer arithmetic
    poly = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d:
            continue
        div = list(cyclotomic_polynomial(d))
        poly = _polydiv_exact(poly, div)
    return tuple(poly)


def _polydiv_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, dj in enumerate(den):
            num[k + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ConsistencyError("inexact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def _power_basis(e: int) -> tuple:
    """zeta_e^j for j in 0..e-1 as integer vectors over 1, zeta, ..,
    zeta^(phi(e)-1)."""
    phi = len(cyclotomic_polynomial(e)) - 1
    rows = []
    cur = [0] * phi
    if phi:
        cur[0] = 1
    rows.append(tuple(cur))
    top = [-c for c in cyclotomic_polynomial(e)[:-1]]  # zeta^phi in the basis
    for _ in range(1, e):
        nxt = [0] * phi
        for i in range(phi - 1):
            nxt[i + 1] = cur[i]
        if cur[phi - 1]:
            for i in range(phi):
                nxt[i] += cur[phi - 1] * top[i]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


@dataclass(frozen=True)
class CycloInt:
    """An element of Z[zeta_e] in the power basis 1..zeta^(phi(e)-1)."""

    order: int
    coeffs: tuple

    @staticmethod
    def zero(e: int) -> "CycloInt":
        phi = len(cyclotomic_polynomial(e)) - 1
        return CycloInt(e, (0,) * phi)

    @staticmethod
    def from_root_multiplicities(e: int, mults: dict) -> "CycloInt":
        """sum of mults[j] copies of zeta_e^j."""
        basis = _power_basis(e)
        phi = len(basis[0])
        acc = [0] * phi
        for j, c in mults.items():
            row = basis[j % e]
            for i in range(phi):
                acc[i] += c * row[i]
        return CycloInt(e, tuple(acc))

    def __add__(self, other):
        return CycloInt(self.order,
                        tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloInt(self.order, tuple(-a for a in self.coeffs))

    def scaled(self, k: int) -> "CycloInt":
        return CycloInt(self.order, tuple(k * a for a in self.coeffs))

    def conjugate(self) -> "CycloInt":
        basis = _power_basis(self.order)
        phi = len(self.coeffs)
        acc = [0] * phi
        for j, c in enumerate(self.coeffs):
            if c:
                row = basis[(self.order - j) % self.order]
                for i in range(phi):
                    acc[i] += c * row[i]
        return CycloInt(self.order, tuple(acc))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_complex(self) -> complex:
        e = self.order
        return sum(c * cmath.exp(2j * cmath.pi * j / e)
                   for j, c in enumerate(self.coeffs) if c)


# ---------------------------------------------------------------------------
# F_p linear algebra (small dense matrices, Python ints)

def _nullspace_mod(mat, p):
    """Basis of the right nullspace of ``mat`` over F_p."""
    if not mat:
        return []
    rows = [list(r) for r in mat]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][fc]) % p
        basis.append(v)
    return basis


def _matmul_mod(a, b, p):
    n, m, k = len(a), len(b[0]), len(b)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            att = ai[t] % p
            if att:
                bt = b[t]
                for j in range(m):
                    oi[j] = (oi[j] + att * bt[j]) % p
    return out


def _solve_in_span(basis_cols, targets, p):
    """Express each target column in the span of basis columns (mod p)."""
    d = len(basis_cols)
    n = len(basis_cols[0])
    aug = [[basis_cols[j][i] % p for j in range(d)] +
           [t[i] % p for t in targets] for i in range(n)]
    r = 0
    piv_rows = []
    for c in range(d):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            raise ConsistencyError("dependent basis in eigenspace split")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        piv_rows.append(r)
        r += 1
    for i in range(r, n):
        if any(aug[i][d:]):
            raise ConsistencyError("target outside invariant subspace")
    ncols = len(targets)
    return [[aug[i][d + j] for j in range(ncols)] for i in range(d)]


def _find_prime(exponent: int, min_value: float) -> int:
    p = exponent + 1
    while True:
        if p > min_value and p % exponent == (1 % exponent) and _is_prime(p):
            return p
        p += exponent if exponent > 1 else 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primitive_root_of_unity(p: int, e: int) -> int:
    """An element of exact multiplicative order e in F_p (requires e | p-1)."""
    for h in range(2, p):
        w = pow(h, (p - 1) // e, p)
        # order of w divides e; check it is exactly e
        ok = all(pow(w, e // q, p) != 1 for q in _prime_factors(e))
        if ok and (e == 1 or w != 1):
            return w
        if e == 1:
            return 1
    raise ConsistencyError("no primitive root found")


def _prime_factors(n: int):
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


# ---------------------------------------------------------------------------
# character table

@dataclass(frozen=True)
class ClassFunction:
    """A complex-valued function on the conjugacy classes of a group."""

    group: GroupTable
    values: tuple

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        k = conjugacy_classes(self.group).num_classes
        if len(vals) != k:
            raise ValidationError(f"expected {k} class values, got {len(vals)}")

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        _same_group(self.group, other.group)
        return ClassFunction(self.group, tuple(
            a * b for a, b in zip(self.values, other.values)))

    def value_at_element(self, x: int) -> complex:
        return self.values[conjugacy_classes(self.group).class_of[x]]


@dataclass(frozen=True)
class CharacterTable:
    """Irreducible characters of a group, one row per irreducible.

    ``chars[i][c]`` is the value of character i on class c; ``exact`` holds
    the same values as cyclotomic integers of order ``cyclo_order``.
    Rows are sorted by (degree, value order) with the trivial character
    first.
    """

    group: GroupTable
    classes: ConjugacyData
    chars: tuple                     # k x k complex
    degrees: tuple                   # row degrees
    exact: tuple                     # k x k CycloInt
    cyclo_order: int

    @property
    def num_irreducibles(self) -> int:
        return len(self.degrees)

    def row(self, i: int) -> ClassFunction:
        return ClassFunction(self.group, self.chars[i])

    def exact_value_at_element(self, i: int, x: int) -> CycloInt:
        return self.exact[i][self.classes.class_of[x]]

    def validate(self, tol: float = ORTHOGONALITY_TOL):
        g = self.group
        k = self.num_irreducibles
        sizes = self.classes.class_sizes()
        if sum(d * d for d in self.degrees) != g.order:
            raise ValidationError("sum of squared degrees != |G|")
        arr = np.array(self.chars, dtype=complex)
        wt = np.array(sizes, dtype=float) / g.order
        gram = (arr * wt) @ arr.conj().T
        if np.max(np.abs(gram - np.eye(k))) > tol:
            raise ValidationError("row orthogonality fails")
        col = arr.conj().T @ arr
        expect = np.diag([g.order / s for s in sizes])
        if np.max(np.abs(col - expect)) > tol:
            raise ValidationError("column orthogonality fails")
        for i in range(k):
            for c in range(k):
                ex = self.exact[i][c]
                if abs(ex.to_complex() - self.chars[i][c]) > tol:
                    raise ValidationError("exact lift does not match value")


def _same_group(a: GroupTable, b: GroupTable):
    if a is not b and a != b:
        raise GroupMismatchError("values live over different groups")


def character_table(g: GroupTable) -> CharacterTable:
    """Complete irreducible character table via Burnside-Dixon."""
    if "chartable" in g._cache:
        return g._cache["chartable"]
    conj = conjugacy_classes(g)
    k = conj.num_classes
    sizes = list(conj.class_sizes())
    e = g.exponent()
    p = _find_prime(e, 2 * math.isqrt(g.order) + 1)
    # class-algebra structure constants: C_i C_j = sum_k a[i][j][k] C_k
    struct = _structure_constants(g, conj)
    # split F_p^k by the commuting class matrices M_i with (M_i)_{jk} = a[i][j][k]
    omegas = _central_characters(struct, sizes, p, k)
    if len(omegas) != k:
        raise ConsistencyError(f"found {len(omegas)} central characters, expected {k}")

    inv_class = [conj.class_of[g.inv[r]] for r in conj.reps]
    inv_sizes = [pow(s, p - 2, p) for s in sizes]
    rows = []
    w = _primitive_root_of_unity(p, e)
    # power map: class of rep^t for each class
    for om in omegas:
        t = 0
        for c in range(k):
            t = (t + om[c] * om[inv_class[c]] * inv_sizes[c]) % p
        if t == 0:
            raise ConsistencyError("degenerate central character")
        d2 = (g.order * pow(t, p - 2, p)) % p
        d = _sqrt_mod(d2, p)
        d = min(d, p - d)
        vals_mod = [(d * om[c] * inv_sizes[c]) % p for c in range(k)]
        exact_row, cplx_row = _lift_row(g, conj, vals_mod, d, p, w, e)
        rows.append((d, cplx_row, exact_row))

    # deterministic ordering: by degree, then value order (trivial row first)
    def sort_key(row):
        d, cplx, _ = row
        vals = tuple((-round(v.real, 8) + 0.0, -round(v.imag, 8) + 0.0)
                     for v in cplx)
        return (d, vals)

    rows.sort(key=sort_key)
    if any(abs(v - 1) > 1e-9 for v in rows[0][1]):
        raise ConsistencyError("trivial character did not sort first")
    table = CharacterTable(
        group=g,
        classes=conj,
        chars=tuple(tuple(r[1]) for r in rows),
        degrees=tuple(r[0] for r in rows),
        exact=tuple(tuple(r[2]) for r in rows),
        cyclo_order=e,
    )
    table.validate()
    g._cache["chartable"] = table
    return table


def _structure_constants(g: GroupTable, conj: ConjugacyData):
    """a[i][j][c] with C_i C_j = sum_c a[i][j][c] C_c in the class algebra."""
    k = conj.num_classes
    struct = [[[0] * k for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            count = [0] * k
            for x in conj.classes[i]:
                mx = g.mult[x]
                for y in conj.classes[j]:
                    count[conj.class_of[mx[y]]] += 1
            for c in range(k):
                q, r = divmod(count[c], len(conj.classes[c]))
                if r:
                    raise ConsistencyError("class algebra count not divisible")
                struct[i][j][c] = q
    return struct


def _central_characters(struct, sizes, p, k):
    """All simultaneous eigenvectors (omega_c)_c of the class matrices over
    F_p, normalized so the identity-class entry is 1.

    Subspaces are split one class matrix at a time into its eigenspaces;
    distinct central characters differ on some class, so the process ends
    with k one-dimensional spaces.
    """
    spaces = [[_unit(k, i) for i in range(k)]]
    for i in range(1, k):
        if all(len(b) == 1 for b in spaces):
            break
        mat = [[struct[i][j][c] % p for c in range(k)] for j in range(k)]
        # acting on a column v: (M v)_j = sum_c a[i][j][c] v_c
        nxt = []
        for basis in spaces:
            d = len(basis)
            if d == 1:
                nxt.append(basis)
                continue
            images = [_matvec(mat, v, p) for v in basis]
            t_mat = _solve_in_span(basis, images, p)  # d x d coordinate action
            found = 0
            for lam in range(p):
                shifted = [[(t_mat[r][c] - (lam if r == c else 0)) % p
                            for c in range(d)] for r in range(d)]
                null = _nullspace_mod(shifted, p)
                if null:
                    eigenspace = []
                    for nv in null:
                        vec = [0] * k
                        for idx, coef in enumerate(nv):
                            if coef:
                                bv = basis[idx]
                                for t in range(k):
                                    vec[t] = (vec[t] + coef * bv[t]) % p
                        eigenspace.append(vec)
                    nxt.append(eigenspace)
                    found += len(null)
                if found == d:
                    break
            if found != d:
                raise ConsistencyError("class matrix not diagonalizable mod p")
        spaces = nxt
    out = []
    for basis in spaces:
        if len(basis) != 1:
            raise ConsistencyError("eigenspace splitting incomplete")
        v = basis[0]
        if v[0] % p == 0:
            raise ConsistencyError("central character vanishes on identity class")
        inv0 = pow(v[0], p - 2, p)
        out.append([x * inv0 % p for x in v])
    return out


def _unit(k, i):
    v = [0] * k
    v[i] = 1
    return v


def _matvec(mat, v, p):
    return [sum(mat[j][c] * v[c] for c in range(len(v))) % p for j in range(len(mat))]


def _sqrt_mod(a, p):
    a %= p
    for r in range(1, p):
        if r * r % p == a:
            return r
    raise ConsistencyError("degree squared is not a quadratic residue")


def _lift_row(g, conj, vals_mod, degree, p, w, e):
    """Lift one row of F_p character values to exact cyclotomic integers."""
    k = conj.num_classes
    exact_row = []
    cplx_row = []
    for c in range(k):
        rep = conj.reps[c]
        m = g.element_order(rep)
        zm = pow(w, e // m, p)
        inv_m = pow(m, p - 2, p)
        # chi(rep^t) mod p for t = 0..m-1
        powvals = []
        x = 0  # identity
        for t in range(m):
            powvals.append(vals_mod[conj.class_of[x]])
            x = g.mult[x][rep]
        mults = {}
        total = 0
        for l in range(m):
            acc = 0
            for t in range(m):
                acc = (acc + powvals[t] * pow(zm, (-l * t) % m, p)) % p
            cl = (acc * inv_m) % p
            if cl:
                if cl > degree:
                    raise ConsistencyError("eigenvalue multiplicity out of range")
                mults[(l * (e // m)) % e] = cl
                total += cl
        if total != degree:
            raise ConsistencyError("eigenvalue multiplicities do not sum to degree")
        ex = CycloInt.from_root_multiplicities(e, mults)
        exact_row.append(ex)
        cplx_row.append(ex.to_complex())
    return tuple(exact_row), tuple(cplx_row)


# ---------------------------------------------------------------------------
# class-function operations

def inner_product(a: ClassFunction, b: ClassFunction) -> complex:
    """(1/|G|) sum over classes |c| a(c) conj(b(c))."""
    _same_group(a.group, b.group)
    conj = conjugacy_classes(a.group)
    n = a.group.order
    return sum(s * x * y.conjugate()
               for s, x, y in zip(conj.class_sizes(), a.values, b.values)) / n


def decompose(f: ClassFunction, t: CharacterTable) -> tuple[tuple, float]:
    """Multiplicities of the irreducibles in a genuine character.

    Returns (integer multiplicities, residual norm).  Raises
    NotACharacterError if some multiplicity is not a nonnegative integer
    within tolerance.
    """
    _same_group(f.group, t.group)
    mults = []
    residual = 0.0
    for i in range(t.num_irreducibles):
        ip = inner_product(f, t.row(i))
        m = round(ip.real)
        err = abs(ip - m)
        if err > DECOMPOSE_TOL or m < 0:
            raise NotACharacterError(
                f"multiplicity of irreducible {i} is {ip}, not a nonnegative "
                f"integer", residual=err)
        residual = max(residual, err)
        mults.append(m)
    return tuple(mults), residual


def regular_character(g: GroupTable) -> ClassFunction:
    conj = conjugacy_classes(g)
    vals = [g.order if r == 0 else 0 for r in conj.reps]
    return ClassFunction(g, tuple(vals))


def restrict(t: CharacterTable, h: Subgroup) -> list:
    """Each irreducible of G restricted to the classes of H (as a group)."""
    if h.parent is not t.group and h.parent != t.group:
        raise GroupMismatchError("subgroup does not belong to the table's group")
    h_table, _ = h.table()
    h_conj = conjugacy_classes(h_table)
    g_conj = t.classes
    out = []
    for i in range(t.num_irreducibles):
        vals = []
        for r in h_conj.reps:
            parent_elem = h.elements[r]
            vals.append(t.chars[i][g_conj.class_of[parent_elem]])
        out.append(ClassFunction(h_table, tuple(vals)))
    return out


def vanishing_virtual_character(g: GroupTable, h: Subgroup) -> tuple:
    """A nonzero integer vector m with sum_i m_i chi_i(x) = 0 for all x in H.

    The combination is exact: it is found as a rational nullspace of the
    restriction matrix written over the cyclotomic power basis, then scaled
    to a primitive integer vector.  Raises NoSuchCharacterError for H = G.
    """
    if h.order == g.order:
        raise NoSuchCharacterError(
            "restriction to the whole group is injective on virtual characters")
    t = character_table(g)
    k = t.num_irreducibles
    # columns: (element of H) x (cyclotomic basis coordinate)
    cols = []
    for x in h.elements:
        cols.append([t.exact_value_at_element(i, x).coeffs for i in range(k)])
    # matrix A with rows i, find m with m A = 0  <=>  A^T m = 0
    phi = len(cols[0][0])
    at_rows = []
    for xi in range(len(h.elements)):
        for b in range(phi):
            at_rows.append([Fraction(cols[xi][i][b]) for i in range(k)])
    null = _rational_nullspace(at_rows, k)
    if not null:
        raise NoSuchCharacterError("no vanishing virtual character exists")
    m = _primitive_integer(null[0])
    # exact verification
    for x in h.elements:
        acc = CycloInt.zero(t.cyclo_order)
        for i in range(k):
            acc = acc + t.exact_value_at_element(i, x).scaled(m[i])
        if not acc.is_zero():
            raise ConsistencyError("virtual character fails exact vanishing")
    return tuple(m)


def _rational_nullspace(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def _primitive_integer(vec):
    denoms = [f.denominator for f in vec]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // math.gcd(lcm, d)
    ints = [int(f * lcm) for f in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints
